//! Component monoids `π₀` of fixed categories, presented by atoms.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::groups::GroupRef;

use super::{Label, Parsummable, UniversalSet};

/// One isomorphism class of fixed objects.
#[derive(Clone, Debug)]
pub struct Pi0Class<O> {
    pub rep: O,
    pub size: usize,
    pub signature: Vec<i64>,
    /// Multiplicity of every atom.
    pub vector: Vec<usize>,
}

/// `π₀` of the fixed category over a universal window, restricted to classes
/// of size at most `bound`, with a free presentation on atoms.
pub struct Pi0Monoid<'a, C: Parsummable> {
    cat: &'a C,
    universal: UniversalSet,
    multiplicity: usize,
    bound: usize,
    classes: Vec<Pi0Class<C::Obj>>,
    /// Class index of every atom.
    atoms: Vec<usize>,
    atom_labels: Vec<String>,
    /// `(class, atom) ↦ class + atom` within the bound.
    table: HashMap<(usize, usize), usize>,
    by_key: HashMap<(usize, Vec<i64>), Vec<usize>>,
    cache: Mutex<HashMap<C::Obj, Vec<usize>>>,
}

impl<'a, C: Parsummable> std::fmt::Debug for Pi0Monoid<'a, C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Pi0Monoid")
            .field("category", &self.cat.name())
            .field("group", &self.universal.group().name())
            .field("multiplicity", &self.multiplicity)
            .field("bound", &self.bound)
            .field("atoms", &self.atom_labels)
            .finish()
    }
}

impl<'a, C: Parsummable> Pi0Monoid<'a, C> {
    /// Computes the monoid from the instance's fixed candidates.
    pub fn compute(
        cat: &'a C,
        group: &GroupRef,
        multiplicity: usize,
        bound: usize,
    ) -> Result<Self> {
        let universal = UniversalSet::new(group);
        let candidates = cat.fixed_candidates(&universal, multiplicity, bound)?;
        let mut pi0 = Pi0Monoid {
            cat,
            universal,
            multiplicity,
            bound,
            classes: Vec::new(),
            atoms: Vec::new(),
            atom_labels: Vec::new(),
            table: HashMap::new(),
            by_key: HashMap::new(),
            cache: Mutex::new(HashMap::new()),
        };
        pi0.dedupe(candidates)?;
        pi0.find_atoms()?;
        pi0.build_table()?;
        pi0.probe_cancellation()?;
        pi0.check_consistency()?;
        Ok(pi0)
    }

    pub fn category(&self) -> &'a C {
        self.cat
    }

    pub fn universal(&self) -> &UniversalSet {
        &self.universal
    }

    pub fn group(&self) -> &GroupRef {
        self.universal.group()
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn classes(&self) -> &[Pi0Class<C::Obj>] {
        &self.classes
    }

    pub fn rank(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_labels(&self) -> &[String] {
        &self.atom_labels
    }

    pub fn atom_rep(&self, i: usize) -> &C::Obj {
        &self.classes[self.atoms[i]].rep
    }

    pub fn atom_size(&self, i: usize) -> usize {
        self.classes[self.atoms[i]].size
    }

    fn blocks(&self, x: &C::Obj) -> Vec<usize> {
        self.universal.blocks_of(&self.cat.support(x))
    }

    fn end_block(&self, xs: &[&C::Obj]) -> usize {
        xs.iter()
            .flat_map(|x| self.blocks(x))
            .map(|b| b + 1)
            .max()
            .unwrap_or(0)
    }

    /// Moves `x` into consecutive blocks starting at `start`.
    pub fn translate(&self, x: &C::Obj, start: usize) -> Result<C::Obj> {
        let from = self.blocks(x);
        let to: Vec<usize> = (start..start + from.len()).collect();
        let u = self.universal.block_move(&from, &to)?;
        Ok(self.cat.act_obj(&u, x))
    }

    /// `x + y` after moving `y` past the blocks of `x`.
    pub fn disjoint_sum(&self, x: &C::Obj, y: &C::Obj) -> Result<C::Obj> {
        let y = self.translate(y, self.end_block(&[x]))?;
        self.cat.sum(x, &y)
    }

    fn signature(&self, x: &C::Obj) -> Vec<i64> {
        self.cat.fixed_signature(&self.universal, x)
    }

    fn iso(&self, x: &C::Obj, y: &C::Obj) -> Result<bool> {
        self.cat.fixed_isomorphic(&self.universal, x, y)
    }

    fn dedupe(&mut self, candidates: Vec<C::Obj>) -> Result<()> {
        let mut keyed: Vec<(usize, Vec<i64>, usize, C::Obj)> = candidates
            .into_iter()
            .map(|x| {
                let size = self.cat.size(&x);
                let sig = self.signature(&x);
                let blocks = self.blocks(&x).len();
                (size, sig, blocks, x)
            })
            .collect();
        keyed.sort_by(|a, b| (a.0, &a.1, a.2).cmp(&(b.0, &b.1, b.2)));
        let mut by_key = std::mem::take(&mut self.by_key);
        for (size, sig, _, x) in keyed {
            if size > self.bound {
                continue;
            }
            let bucket = by_key.entry((size, sig.clone())).or_default();
            let mut known = false;
            for &c in bucket.iter() {
                if self
                    .cat
                    .fixed_isomorphic(&self.universal, &self.classes[c].rep, &x)?
                {
                    known = true;
                    break;
                }
            }
            if !known {
                bucket.push(self.classes.len());
                self.classes.push(Pi0Class {
                    rep: x,
                    size,
                    signature: sig,
                    vector: Vec::new(),
                });
            }
        }
        self.by_key = by_key;
        Ok(())
    }

    /// The class among the enumerated ones isomorphic to `x`.
    fn lookup(&self, x: &C::Obj) -> Result<Option<usize>> {
        let key = (self.cat.size(x), self.signature(x));
        for &i in self.by_key.get(&key).into_iter().flatten() {
            if self.iso(&self.classes[i].rep, x)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Sums of every class with every atom; sums of arbitrary pairs follow
    /// by adding one atom at a time.
    fn build_table(&mut self) -> Result<()> {
        let n = self.classes.len();
        for a in 0..n {
            for &b in &self.atoms {
                if self.classes[a].size + self.classes[b].size > self.bound {
                    continue;
                }
                let s = self.disjoint_sum(&self.classes[a].rep, &self.classes[b].rep)?;
                let c = self.lookup(&s)?.ok_or_else(|| {
                    Error::WindowTooSmall(format!(
                        "{} + {} over {} has no class at multiplicity {}",
                        self.cat.describe(&self.classes[a].rep),
                        self.cat.describe(&self.classes[b].rep),
                        self.group().name(),
                        self.multiplicity
                    ))
                })?;
                self.table.insert((a, b), c);
            }
        }
        Ok(())
    }

    fn probe_cancellation(&self) -> Result<()> {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut keys: Vec<_> = self.table.iter().collect();
        keys.sort();
        for (&(a, c), &s) in keys {
            if let Some(&b) = seen.get(&(c, s)) {
                if b != a {
                    return Err(Error::NonCancellative(format!(
                        "{} + {} and {} + {} are isomorphic",
                        self.cat.describe(&self.classes[a].rep),
                        self.cat.describe(&self.classes[c].rep),
                        self.cat.describe(&self.classes[b].rep),
                        self.cat.describe(&self.classes[c].rep),
                    )));
                }
            } else {
                seen.insert((c, s), a);
            }
        }
        Ok(())
    }

    /// Atom vectors with the given total size and signature.
    fn vectors(&self, size: usize, sig: &[i64]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut v = vec![0; self.atoms.len()];
        self.dfs(0, size, sig.to_vec(), &mut v, &mut out);
        out
    }

    fn dfs(
        &self,
        i: usize,
        size: usize,
        sig: Vec<i64>,
        v: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == self.atoms.len() {
            if size == 0 && sig.iter().all(|&s| s == 0) {
                out.push(v.clone());
            }
            return;
        }
        let atom = &self.classes[self.atoms[i]];
        let mut rest = sig;
        let mut left = size;
        let mut k = 0;
        loop {
            v[i] = k;
            self.dfs(i + 1, left, rest.clone(), v, out);
            if atom.size == 0 || left < atom.size {
                break;
            }
            left -= atom.size;
            let next: Vec<i64> = rest
                .iter()
                .zip(&atom.signature)
                .map(|(a, b)| a - b)
                .collect();
            if next.len() != rest.len() || next.iter().any(|&s| s < 0) {
                break;
            }
            rest = next;
            k += 1;
        }
        v[i] = 0;
    }

    /// A fixed object in the class of `v`, built from atom representatives in
    /// fresh blocks starting at `start`.
    pub fn realize_from(&self, v: &[usize], start: usize) -> Result<C::Obj> {
        let mut x = self.cat.zero();
        let mut next = start;
        for (i, &n) in v.iter().enumerate() {
            let rep = self.atom_rep(i);
            let width = self.blocks(rep).len();
            for _ in 0..n {
                let y = self.translate(rep, next)?;
                next += width;
                x = self.cat.sum(&x, &y)?;
            }
        }
        Ok(x)
    }

    pub fn realize(&self, v: &[usize]) -> Result<C::Obj> {
        self.realize_from(v, 0)
    }

    /// Atom vectors of every decomposition of `x` as a sum of atoms.
    fn decompositions(&self, x: &C::Obj) -> Result<Vec<Vec<usize>>> {
        let start = self.end_block(&[x]);
        let mut found = Vec::new();
        for v in self.vectors(self.cat.size(x), &self.signature(x)) {
            let y = self.realize_from(&v, start)?;
            if self.iso(x, &y)? {
                found.push(v);
            }
        }
        Ok(found)
    }

    fn find_atoms(&mut self) -> Result<()> {
        let mut order: Vec<usize> = (0..self.classes.len()).collect();
        order.sort_by_key(|&c| self.classes[c].size);
        for c in order {
            let rep = self.classes[c].rep.clone();
            let found = self.decompositions(&rep)?;
            match found.len() {
                0 => {
                    if self.classes[c].size == 0 {
                        return Err(Error::Invalid(format!(
                            "nonzero class {} of size zero",
                            self.cat.describe(&rep)
                        )));
                    }
                    self.atoms.push(c);
                    for cl in &mut self.classes {
                        cl.vector.push(0);
                    }
                    let mut v = vec![0; self.atoms.len()];
                    v[self.atoms.len() - 1] = 1;
                    self.classes[c].vector = v;
                    self.atom_labels
                        .push(self.cat.atom_label(&self.universal, &rep));
                }
                1 => {
                    let mut v = found.into_iter().next().expect("one decomposition");
                    v.resize(self.atoms.len(), 0);
                    self.classes[c].vector = v;
                }
                _ => {
                    return Err(Error::NonUniqueDecomposition(format!(
                        "{} decomposes as {:?}",
                        self.cat.describe(&rep),
                        found
                    )))
                }
            }
        }
        let n = self.atoms.len();
        for cl in &mut self.classes {
            cl.vector.resize(n, 0);
        }
        Ok(())
    }

    fn check_consistency(&self) -> Result<()> {
        let mut keys: Vec<_> = self.table.iter().collect();
        keys.sort();
        for (&(a, b), &s) in keys {
            let sum = add(&self.classes[a].vector, &self.classes[b].vector);
            if self.classes[s].vector != sum {
                return Err(Error::NonUniqueDecomposition(format!(
                    "[{}] + [{}] = [{}] but the atom vectors are {:?} + {:?} vs {:?}",
                    self.cat.describe(&self.classes[a].rep),
                    self.cat.describe(&self.classes[b].rep),
                    self.cat.describe(&self.classes[s].rep),
                    self.classes[a].vector,
                    self.classes[b].vector,
                    self.classes[s].vector
                )));
            }
        }
        let mut seen: HashMap<&[usize], usize> = HashMap::new();
        for (i, c) in self.classes.iter().enumerate() {
            if let Some(j) = seen.insert(&c.vector, i) {
                return Err(Error::NonUniqueDecomposition(format!(
                    "[{}] and [{}] share the atom vector {:?}",
                    self.cat.describe(&self.classes[j].rep),
                    self.cat.describe(&c.rep),
                    c.vector
                )));
            }
        }
        Ok(())
    }

    /// Atom vector of a fixed object of any size.
    pub fn classify(&self, x: &C::Obj) -> Result<Vec<usize>> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(x) {
            return Ok(v.clone());
        }
        if !self.universal.is_fixed(self.cat, x) {
            return Err(Error::Invalid(format!(
                "{} is not fixed by {}",
                self.cat.describe(x),
                self.group().name()
            )));
        }
        let found = self.decompositions(x)?;
        let v = match found.len() {
            1 => found.into_iter().next().expect("one decomposition"),
            0 => {
                return Err(Error::WindowTooSmall(format!(
                    "{} is not a sum of atoms of size at most {}",
                    self.cat.describe(x),
                    self.bound
                )))
            }
            _ => {
                return Err(Error::NonUniqueDecomposition(format!(
                    "{} decomposes as {:?}",
                    self.cat.describe(x),
                    found
                )))
            }
        };
        self.cache
            .lock()
            .expect("cache lock")
            .insert(x.clone(), v.clone());
        Ok(v)
    }

    /// Class sum, checked against a disjoint realization when within the
    /// bound.
    pub fn add(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        add(a, b)
    }

    /// Checks that adding two classes through two different disjoint
    /// representatives gives the same class.
    pub fn check_addition(&self, a: &[usize], b: &[usize]) -> Result<bool> {
        let x = self.realize(a)?;
        let y = self.realize(b)?;
        let first = self.classify(&self.disjoint_sum(&x, &y)?)?;
        let far = self.translate(&x, self.end_block(&[&x, &y]) + 1)?;
        let second = self.classify(&self.cat.sum(&far, &y)?)?;
        Ok(first == second && first == add(a, b))
    }

    /// Labels used by the window.
    pub fn window_labels(&self) -> Vec<Label> {
        self.universal.window(self.multiplicity)
    }
}

fn add(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}
