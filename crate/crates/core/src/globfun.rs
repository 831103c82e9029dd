//! Global functors tabulated on a finite window of groups.
//!
//! A functor assigns to each window group a free abelian group on named atoms
//! and to each canonical transitive biset term `(L, α)` from `G` to `K` an
//! integer matrix `rank(K) × rank(G)`. Any right-free biset acts through its
//! classification.

use std::collections::BTreeMap;
use std::sync::Arc;

use ndarray::Array2;
use serde_json::{json, Value};

use crate::bisets::{balanced_product, canonical_terms, Biset, BisetClass, BisetTerm};
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::groups::{homs, Group, GroupHom, GroupRef, Subgroup};
use crate::gsets::{induce_along, GSet};

/// A finite list of groups with the canonical term basis of every
/// morphism set between them.
#[derive(Debug)]
pub struct GroupWindow {
    groups: Vec<GroupRef>,
    /// `terms[src][tgt]`: canonical terms of morphisms `src → tgt`, which are
    /// `tgt`-`src` bisets.
    terms: Vec<Vec<Vec<BisetTerm>>>,
}

impl GroupWindow {
    pub fn new(groups: Vec<GroupRef>) -> Result<Arc<GroupWindow>> {
        let cap = Caps::global().window_order;
        for g in &groups {
            if g.order() > cap {
                return Err(Error::OrderCapExceeded {
                    order: g.order(),
                    cap,
                });
            }
        }
        let terms = groups
            .iter()
            .map(|src| groups.iter().map(|tgt| canonical_terms(tgt, src)).collect())
            .collect();
        Ok(Arc::new(GroupWindow { groups, terms }))
    }

    /// Window from a comma-separated list of bestiary names.
    pub fn parse(list: &str) -> Result<Arc<GroupWindow>> {
        let groups = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(Group::named)
            .collect::<Result<Vec<_>>>()?;
        GroupWindow::new(groups)
    }

    /// `g` together with one group per isomorphism type of its subgroups,
    /// in increasing order. Every subgroup of `g` is identified in it.
    pub fn subgroup_closure(g: &GroupRef) -> Result<Arc<GroupWindow>> {
        let mut groups: Vec<GroupRef> = Vec::new();
        for h in g.subgroup_classes().reps() {
            let candidate = if h.order() == g.order() {
                g.clone()
            } else {
                g.subgroup_group(h).0
            };
            let known = groups.iter().any(|k| {
                k.order() == candidate.order()
                    && homs(k, &candidate).iter().any(GroupHom::is_injective)
            });
            if !known {
                groups.push(candidate);
            }
        }
        groups.sort_by_key(|k| k.order());
        GroupWindow::new(groups)
    }

    pub fn groups(&self) -> &[GroupRef] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group(&self, i: usize) -> &GroupRef {
        &self.groups[i]
    }

    pub fn terms(&self, src: usize, tgt: usize) -> &[BisetTerm] {
        &self.terms[src][tgt]
    }

    pub fn term_index(&self, src: usize, tgt: usize, term: &BisetTerm) -> usize {
        self.terms[src][tgt]
            .binary_search(term)
            .expect("canonical term of the window")
    }

    /// Index of a group with the same Cayley table.
    pub fn index_of(&self, g: &Group) -> Option<usize> {
        self.groups.iter().position(|w| **w == *g)
    }

    pub fn require(&self, g: &Group) -> Result<usize> {
        self.index_of(g)
            .ok_or_else(|| Error::WindowMiss(g.name().to_string()))
    }

    /// A window group isomorphic to `h ≤ g`, with an injective homomorphism
    /// from it onto `h`.
    pub fn identify(&self, g: &GroupRef, h: &Subgroup) -> Option<(usize, GroupHom)> {
        for (i, w) in self.groups.iter().enumerate() {
            if w.order() != h.order() {
                continue;
            }
            let (hg, incl) = g.subgroup_group(h);
            if let Some(iso) = homs(w, &hg).into_iter().find(GroupHom::is_injective) {
                return Some((i, incl.after(&iso)));
            }
        }
        None
    }
}

/// Anything that can evaluate right-free bisets between window groups.
pub trait GlobalFunctorLike {
    fn window(&self) -> &Arc<GroupWindow>;
    fn rank(&self, g: usize) -> usize;
    /// Applies the operation of a `tgt`-`src` biset to `x ∈ M(src)`.
    fn apply_biset(&self, src: usize, tgt: usize, biset: &Biset, x: &[i64]) -> Result<Vec<i64>>;
}

/// A global functor given by term matrices.
#[derive(Clone, Debug)]
pub struct GlobalFunctor {
    pub name: String,
    window: Arc<GroupWindow>,
    atoms: Vec<Vec<String>>,
    /// `maps[src][tgt][term]`
    maps: Vec<Vec<Vec<Array2<i64>>>>,
}

impl GlobalFunctorLike for GlobalFunctor {
    fn window(&self) -> &Arc<GroupWindow> {
        &self.window
    }

    fn rank(&self, g: usize) -> usize {
        self.atoms[g].len()
    }

    fn apply_biset(&self, src: usize, tgt: usize, biset: &Biset, x: &[i64]) -> Result<Vec<i64>> {
        let class = biset.classify()?;
        self.apply_class(src, tgt, &class, x)
    }
}

impl GlobalFunctor {
    /// Builds a functor by evaluating `entry(src, tgt, term)` on every term.
    pub fn tabulate(
        name: impl Into<String>,
        window: &Arc<GroupWindow>,
        atoms: Vec<Vec<String>>,
        mut entry: impl FnMut(usize, usize, &BisetTerm) -> Result<Array2<i64>>,
    ) -> Result<GlobalFunctor> {
        let n = window.len();
        let mut maps = Vec::with_capacity(n);
        for src in 0..n {
            let mut row = Vec::with_capacity(n);
            for tgt in 0..n {
                let mut per_term = Vec::new();
                for term in window.terms(src, tgt) {
                    let m = entry(src, tgt, term)?;
                    if m.dim() != (atoms[tgt].len(), atoms[src].len()) {
                        return Err(Error::Invalid(format!(
                            "matrix for {} -> {} has shape {:?}",
                            window.group(src),
                            window.group(tgt),
                            m.dim()
                        )));
                    }
                    per_term.push(m);
                }
                row.push(per_term);
            }
            maps.push(row);
        }
        Ok(GlobalFunctor {
            name: name.into(),
            window: window.clone(),
            atoms,
            maps,
        })
    }

    pub fn atoms(&self, g: usize) -> &[String] {
        &self.atoms[g]
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.atoms.iter().map(Vec::len).collect()
    }

    pub fn matrix(&self, src: usize, tgt: usize, term: usize) -> &Array2<i64> {
        &self.maps[src][tgt][term]
    }

    pub fn matrix_of(&self, src: usize, tgt: usize, term: &BisetTerm) -> &Array2<i64> {
        &self.maps[src][tgt][self.window.term_index(src, tgt, term)]
    }

    pub fn set_matrix(&mut self, src: usize, tgt: usize, term: usize, m: Array2<i64>) {
        self.maps[src][tgt][term] = m;
    }

    pub fn apply_class(
        &self,
        src: usize,
        tgt: usize,
        class: &BisetClass,
        x: &[i64],
    ) -> Result<Vec<i64>> {
        let w = &self.window;
        if class.left != *w.group(tgt) || class.right != *w.group(src) {
            return Err(Error::GroupMismatch(format!(
                "{}-{} biset applied to {} -> {}",
                class.left,
                class.right,
                w.group(src),
                w.group(tgt)
            )));
        }
        let mut y = vec![0i64; self.rank(tgt)];
        for (term, &m) in &class.terms {
            let mat = self.matrix_of(src, tgt, term);
            for (i, yi) in y.iter_mut().enumerate() {
                let s: i64 = mat.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
                *yi += m as i64 * s;
            }
        }
        Ok(y)
    }

    /// Applies an operation between groups named by their window position.
    pub fn apply_operation(&self, class: &BisetClass, x: &[i64]) -> Result<Vec<i64>> {
        let src = self.window.require(&class.right)?;
        let tgt = self.window.require(&class.left)?;
        self.apply_class(src, tgt, class, x)
    }

    /// The zero functor.
    pub fn zero(window: &Arc<GroupWindow>) -> GlobalFunctor {
        let n = window.len();
        GlobalFunctor::tabulate("0", window, vec![Vec::new(); n], |_, _, _| {
            Ok(Array2::zeros((0, 0)))
        })
        .expect("shapes agree")
    }

    /// Constant `ℤ`: restrictions are the identity, `tr_L^K` multiplies by `[K : L]`.
    pub fn constant(window: &Arc<GroupWindow>) -> GlobalFunctor {
        let atoms = vec![vec!["1".to_string()]; window.len()];
        GlobalFunctor::tabulate("const", window, atoms, |_, tgt, term| {
            let k = window.group(tgt);
            let l = k.subgroup_classes().rep(term.class).order();
            Ok(Array2::from_elem((1, 1), (k.order() / l) as i64))
        })
        .expect("shapes agree")
    }

    /// `A_G`: at `K`, free on the canonical terms `(L ≤ K, α: L → G)`;
    /// operations by balanced product.
    pub fn free(g: &GroupRef, window: &Arc<GroupWindow>) -> Result<GlobalFunctor> {
        let bases: Vec<Vec<BisetTerm>> = window
            .groups()
            .iter()
            .map(|k| canonical_terms(k, g))
            .collect();
        let atoms = bases
            .iter()
            .zip(window.groups())
            .map(|(b, k)| b.iter().map(|t| t.key(k)).collect())
            .collect();
        GlobalFunctor::tabulate(
            format!("A_{}", g.name()),
            window,
            atoms,
            |src, tgt, term| {
                let (k, j) = (window.group(src), window.group(tgt));
                let op = Biset::from_term(j, k, term)?;
                let mut m = Array2::zeros((bases[tgt].len(), bases[src].len()));
                for (col, b) in bases[src].iter().enumerate() {
                    let basis = Biset::from_term(k, g, b)?;
                    let class = balanced_product(&op, &basis)?.classify()?;
                    for (t, &mult) in &class.terms {
                        let row = bases[tgt].binary_search(t).expect("canonical term");
                        m[[row, col]] += mult as i64;
                    }
                }
                Ok(m)
            },
        )
    }

    /// `B_G`: at `K`, free on the subgroup classes of `K × G`; operations by
    /// restriction and induction of `(K × G)`-sets.
    pub fn burnside_b(g: &GroupRef, window: &Arc<GroupWindow>) -> Result<GlobalFunctor> {
        let products = window
            .groups()
            .iter()
            .map(|k| Group::direct_product(k, g))
            .collect::<Result<Vec<_>>>()?;
        let atoms = products
            .iter()
            .map(|p| {
                p.subgroup_classes()
                    .reps()
                    .map(|d| format!("{:?}", d.elements()))
                    .collect()
            })
            .collect();
        let ng = g.order();
        GlobalFunctor::tabulate(
            format!("B_{}", g.name()),
            window,
            atoms,
            |src, tgt, term| {
                let (k, j) = (window.group(src), window.group(tgt));
                let (kg, jg) = (&products[src], &products[tgt]);
                let (l, alpha) = term.parts(j, k);
                let (lg, incl) = j.subgroup_group(&l);
                let lxg = Group::direct_product(&lg, g)?;
                let lift = |h: &GroupHom, target: &GroupRef| GroupHom {
                    source: lxg.clone(),
                    target: target.clone(),
                    image: (0..lxg.order())
                        .map(|e| h.apply(e / ng) * ng + e % ng)
                        .collect(),
                };
                let res = lift(&alpha, kg);
                let ind = lift(&incl, jg);
                let dst = jg.subgroup_classes();
                let src_classes = kg.subgroup_classes();
                let mut m = Array2::zeros((dst.len(), src_classes.len()));
                for (col, d) in src_classes.reps().enumerate() {
                    let x = GSet::cosets(kg, d).restrict_along(&res)?;
                    let y = induce_along(&ind, &x)?.decompose();
                    for (row, &v) in y.mult.iter().enumerate() {
                        m[[row, col]] = v as i64;
                    }
                }
                Ok(m)
            },
        )
    }

    /// Direct sum, atoms of `other` listed after those of `self`.
    pub fn direct_sum(&self, other: &GlobalFunctor) -> Result<GlobalFunctor> {
        if !Arc::ptr_eq(&self.window, &other.window) {
            return Err(Error::Invalid("direct sum over different windows".into()));
        }
        let atoms = self
            .atoms
            .iter()
            .zip(&other.atoms)
            .map(|(a, b)| {
                a.iter()
                    .map(|s| format!("{}:{s}", self.name))
                    .chain(b.iter().map(|s| format!("{}:{s}", other.name)))
                    .collect()
            })
            .collect();
        GlobalFunctor::tabulate(
            format!("{}+{}", self.name, other.name),
            &self.window,
            atoms,
            |src, tgt, term| {
                let i = self.window.term_index(src, tgt, term);
                let (a, b) = (&self.maps[src][tgt][i], &other.maps[src][tgt][i]);
                let mut m = Array2::zeros((a.nrows() + b.nrows(), a.ncols() + b.ncols()));
                m.slice_mut(ndarray::s![..a.nrows(), ..a.ncols()]).assign(a);
                m.slice_mut(ndarray::s![a.nrows().., a.ncols()..]).assign(b);
                Ok(m)
            },
        )
    }

    pub fn direct_sum_all(
        window: &Arc<GroupWindow>,
        parts: &[GlobalFunctor],
    ) -> Result<GlobalFunctor> {
        let mut acc = GlobalFunctor::zero(window);
        for p in parts {
            acc = acc.direct_sum(p)?;
        }
        Ok(acc)
    }

    /// Restriction matrices are the terms with `L = K`; transfer matrices
    /// are the terms with `L < K` and `α` an isomorphism onto the source.
    pub fn to_json(&self) -> Value {
        let w = &self.window;
        let mut values = BTreeMap::new();
        let mut restrictions = BTreeMap::new();
        let mut transfers = BTreeMap::new();
        let mut operations = BTreeMap::new();
        for (i, g) in w.groups().iter().enumerate() {
            values.insert(g.name().to_string(), json!({ "atoms": self.atoms[i] }));
        }
        for src in 0..w.len() {
            for tgt in 0..w.len() {
                let (g, k) = (w.group(src), w.group(tgt));
                for (t, term) in w.terms(src, tgt).iter().enumerate() {
                    let key = format!("{}->{} {}", g.name(), k.name(), term.key(k));
                    let m = &self.maps[src][tgt][t];
                    let rows: Vec<Vec<i64>> = m.rows().into_iter().map(|r| r.to_vec()).collect();
                    let l = k.subgroup_classes().rep(term.class).clone();
                    let injective_onto = {
                        let mut im = term.images.clone();
                        im.sort_unstable();
                        im.dedup();
                        im.len() == term.images.len() && im.len() == g.order()
                    };
                    if l.order() == k.order() {
                        restrictions.insert(key.clone(), json!(rows));
                    } else if injective_onto {
                        transfers.insert(key.clone(), json!(rows));
                    }
                    operations.insert(key, json!(rows));
                }
            }
        }
        json!({
            "name": self.name,
            "window": w.groups().iter().map(|g| g.name()).collect::<Vec<_>>(),
            "values": values,
            "restrictions": restrictions,
            "transfers": transfers,
            "operations": operations,
        })
    }
}

/// Non-negative functor of abelian monoids, with the cancellativity verdict
/// of its value monoids.
#[derive(Clone, Debug)]
pub struct PreGlobalFunctor {
    pub table: GlobalFunctor,
    /// `None` when every value monoid was certified cancellative.
    pub obstruction: Option<String>,
}

impl PreGlobalFunctor {
    /// Group completion: the same atoms and matrices, now over `ℤ`.
    pub fn group_complete(self) -> Result<GlobalFunctor> {
        if let Some(o) = self.obstruction {
            return Err(Error::NonCancellative(o));
        }
        for src in &self.table.maps {
            for per in src {
                for m in per {
                    if m.iter().any(|&v| v < 0) {
                        return Err(Error::Invalid(
                            "pre-global functor with a negative entry".into(),
                        ));
                    }
                }
            }
        }
        Ok(self.table)
    }
}

/// One verified instance of an axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub context: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
    /// Tuples not checked because a group fell outside the window.
    pub misses: Vec<String>,
    /// Composition triples checked on an evenly spaced subset of term pairs.
    pub sampled: Vec<String>,
}

/// Limits for [`verify_axioms_with`].
#[derive(Clone, Copy, Debug, Default)]
pub struct AxiomOptions {
    /// Largest number of term pairs checked per composition triple; all when
    /// `None`.
    pub composition_limit: Option<usize>,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn count(&self, axiom: &str) -> usize {
        self.checks.iter().filter(|c| c.axiom == axiom).count()
    }

    pub(crate) fn push(&mut self, axiom: &'static str, context: String, passed: bool) {
        self.checks.push(AxiomCheck {
            axiom,
            context,
            passed,
        });
    }

    pub fn merge(&mut self, other: AxiomReport) {
        self.checks.extend(other.checks);
        self.misses.extend(other.misses);
        self.sampled.extend(other.sampled);
    }

    pub fn summary(&self) -> BTreeMap<&'static str, (usize, usize)> {
        let mut out: BTreeMap<&'static str, (usize, usize)> = BTreeMap::new();
        for c in &self.checks {
            let e = out.entry(c.axiom).or_default();
            e.0 += usize::from(c.passed);
            e.1 += 1;
        }
        out
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Per window group, embeddings of window groups onto each subgroup.
struct Embeddings {
    /// `of[g][subgroup index in all]`
    of: Vec<Vec<Option<(usize, GroupHom)>>>,
}

impl Embeddings {
    fn new(w: &GroupWindow) -> Embeddings {
        let of = w
            .groups()
            .iter()
            .map(|g| {
                let classes = g.subgroup_classes();
                let reps: Vec<Option<(usize, GroupHom)>> =
                    classes.reps().map(|h| w.identify(g, h)).collect();
                classes
                    .all
                    .iter()
                    .map(|h| {
                        let c = classes.class_of_subgroup(h);
                        let (_, conj) = g.to_representative(h);
                        // conj·h·conj⁻¹ = rep, so h = conj⁻¹ rep conj
                        let back = g.inv(conj);
                        reps[c]
                            .as_ref()
                            .map(|(i, e)| (*i, GroupHom::inner(g, back).after(e)))
                    })
                    .collect()
            })
            .collect();
        Embeddings { of }
    }

    fn get(&self, g: &Group, gi: usize, h: &Subgroup) -> Option<&(usize, GroupHom)> {
        let idx = g.subgroup_classes().index_of(h)?;
        self.of[gi][idx].as_ref()
    }
}

/// Checks identity, inner-automorphism triviality, additivity, the
/// composition law, transitivity of transfers, and the double coset formula
/// on every tuple available inside the window.
pub fn verify_axioms<M: GlobalFunctorLike + ?Sized>(m: &M) -> Result<AxiomReport> {
    verify_axioms_with(m, &AxiomOptions::default())
}

/// [`verify_axioms`] with the composition law optionally sampled.
pub fn verify_axioms_with<M: GlobalFunctorLike + ?Sized>(
    m: &M,
    opts: &AxiomOptions,
) -> Result<AxiomReport> {
    let w = m.window().clone();
    let mut report = AxiomReport::default();
    let emb = Embeddings::new(&w);

    for (gi, g) in w.groups().iter().enumerate() {
        let n = m.rank(gi);
        for i in 0..n {
            let x = unit(n, i);
            let y = m.apply_biset(gi, gi, &Biset::identity(g), &x)?;
            report.push("identity", format!("{g} atom {i}"), y == x);
            for c in 1..g.order() {
                let y = m.apply_biset(gi, gi, &Biset::restriction(&GroupHom::inner(g, c)), &x)?;
                report.push("inner", format!("{g} conj {c} atom {i}"), y == x);
            }
        }
    }

    // additivity in the biset and in the argument
    for src in 0..w.len() {
        for tgt in 0..w.len() {
            let (g, k) = (w.group(src), w.group(tgt));
            let terms = w.terms(src, tgt);
            let n = m.rank(src);
            for (a, ta) in terms.iter().enumerate() {
                let sa = Biset::from_term(k, g, ta)?;
                let b = (a + 1) % terms.len();
                let sb = Biset::from_term(k, g, &terms[b])?;
                let sum = sa.disjoint_union(&sb)?;
                for i in 0..n {
                    let x = unit(n, i);
                    let lhs = m.apply_biset(src, tgt, &sum, &x)?;
                    let rhs = add(
                        &m.apply_biset(src, tgt, &sa, &x)?,
                        &m.apply_biset(src, tgt, &sb, &x)?,
                    );
                    report.push(
                        "additivity",
                        format!("{g}->{k} terms {a}+{b} atom {i}"),
                        lhs == rhs,
                    );
                }
                if n >= 2 {
                    let x = vec![1; n];
                    let lhs = m.apply_biset(src, tgt, &sa, &x)?;
                    let mut rhs = vec![0; m.rank(tgt)];
                    for i in 0..n {
                        rhs = add(&rhs, &m.apply_biset(src, tgt, &sa, &unit(n, i))?);
                    }
                    report.push("linearity", format!("{g}->{k} term {a}"), lhs == rhs);
                }
            }
        }
    }

    // composition law against balanced product
    for a in 0..w.len() {
        for b in 0..w.len() {
            for c in 0..w.len() {
                let (ga, gb, gc) = (w.group(a), w.group(b), w.group(c));
                let (ns, nt) = (w.terms(a, b).len(), w.terms(b, c).len());
                let total = ns * nt;
                let take = opts.composition_limit.map_or(total, |l| l.min(total));
                if take < total {
                    report
                        .sampled
                        .push(format!("{ga}->{gb}->{gc}: {take} of {total} term pairs"));
                }
                for p in 0..take {
                    // evenly spaced pair indices
                    let idx = p * total / take.max(1);
                    let (si, ti) = (idx / nt, idx % nt);
                    let sb = Biset::from_term(gb, ga, &w.terms(a, b)[si])?;
                    let tb = Biset::from_term(gc, gb, &w.terms(b, c)[ti])?;
                    let comp = balanced_product(&tb, &sb)?;
                    let n = m.rank(a);
                    for i in 0..n {
                        let x = unit(n, i);
                        let lhs = m.apply_biset(a, c, &comp, &x)?;
                        let mid = m.apply_biset(a, b, &sb, &x)?;
                        let rhs = m.apply_biset(b, c, &tb, &mid)?;
                        report.push(
                            "composition",
                            format!("{ga}->{gb}->{gc} terms {si},{ti} atom {i}"),
                            lhs == rhs,
                        );
                    }
                }
            }
        }
    }

    // transitivity of transfers through window embeddings
    for (ci, c) in w.groups().iter().enumerate() {
        for h in c.subgroup_classes().reps() {
            let Some((bi, j)) = emb.get(c, ci, h) else {
                report
                    .misses
                    .push(format!("{c} subgroup {:?}", h.elements()));
                continue;
            };
            let bgrp = w.group(*bi);
            for k in bgrp.subgroup_classes().reps() {
                let Some((ai, i)) = emb.get(bgrp, *bi, k) else {
                    report
                        .misses
                        .push(format!("{bgrp} subgroup {:?}", k.elements()));
                    continue;
                };
                let ji = j.after(i);
                let n = m.rank(*ai);
                for atom in 0..n {
                    let x = unit(n, atom);
                    let step = m.apply_biset(*ai, *bi, &Biset::transfer(i), &x)?;
                    let lhs = m.apply_biset(*bi, ci, &Biset::transfer(j), &step)?;
                    let rhs = m.apply_biset(*ai, ci, &Biset::transfer(&ji), &x)?;
                    report.push(
                        "transitivity",
                        format!("{} < {} < {c} atom {atom}", w.group(*ai), bgrp),
                        lhs == rhs,
                    );
                }
            }
        }
    }

    // double coset formula for every pair of subgroups of each window group
    for (gi, g) in w.groups().iter().enumerate() {
        let all = g.all_subgroups();
        for k in &all {
            for h in &all {
                match double_coset_check(m, &w, &emb, gi, k, h)? {
                    Some(ok) => report.push(
                        "double-coset",
                        format!("{g} K={:?} H={:?}", k.elements(), h.elements()),
                        ok,
                    ),
                    None => {
                        report
                            .misses
                            .push(format!("{g} K={:?} H={:?}", k.elements(), h.elements()))
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `res^G_K tr^G_H = Σ_{KgH} tr^K_{K∩gHg⁻¹} ∘ g_⋆ ∘ res^H_{K^g∩H}`, checked on
/// every atom; `None` when some group involved is not in the window.
fn double_coset_check<M: GlobalFunctorLike + ?Sized>(
    m: &M,
    w: &GroupWindow,
    emb: &Embeddings,
    gi: usize,
    k: &Subgroup,
    h: &Subgroup,
) -> Result<Option<bool>> {
    let g = w.group(gi);
    let (Some((ki, ik)), Some((hi, ih))) = (emb.get(g, gi, k), emb.get(g, gi, h)) else {
        return Ok(None);
    };
    let mut pieces = Vec::new();
    for rep in g.double_cosets(k, h) {
        let inter = g.intersect(k, &g.conjugate(rep, h));
        let Some((ai, ia)) = emb.get(g, gi, &inter) else {
            return Ok(None);
        };
        pieces.push((rep, *ai, ia.clone()));
    }
    let inv_of = |e: &GroupHom| {
        let mut pre = vec![usize::MAX; e.target.order()];
        for (x, &y) in e.image.iter().enumerate() {
            pre[y] = x;
        }
        pre
    };
    let (pre_k, pre_h) = (inv_of(ik), inv_of(ih));
    let n = m.rank(*hi);
    for atom in 0..n {
        let x = unit(n, atom);
        let tr = m.apply_biset(*hi, gi, &Biset::transfer(ih), &x)?;
        let lhs = m.apply_biset(gi, *ki, &Biset::restriction(ik), &tr)?;
        let mut rhs = vec![0; m.rank(*ki)];
        for (rep, ai, ia) in &pieces {
            let a = w.group(*ai);
            let rinv = g.inv(*rep);
            let beta = GroupHom {
                source: a.clone(),
                target: w.group(*hi).clone(),
                image: ia.image.iter().map(|&y| pre_h[g.conj(rinv, y)]).collect(),
            };
            let gamma = GroupHom {
                source: a.clone(),
                target: w.group(*ki).clone(),
                image: ia.image.iter().map(|&y| pre_k[y]).collect(),
            };
            let r = m.apply_biset(*hi, *ai, &Biset::restriction(&beta), &x)?;
            let t = m.apply_biset(*ai, *ki, &Biset::transfer(&gamma), &r)?;
            rhs = add(&rhs, &t);
        }
        if lhs != rhs {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

/// Outcome of an isomorphism search between two tabulated functors.
#[derive(Clone, Debug)]
pub struct IsoReport {
    pub isomorphic: bool,
    /// `matching[g][i]` is the atom of the second functor matched with atom
    /// `i` of the first.
    pub matching: Option<Vec<Vec<usize>>>,
    pub obstruction: Option<String>,
}

const MATCHING_CAP: u64 = 3_628_800;

/// Searches for (or checks a supplied) atom bijection under which all term
/// matrices agree.
pub fn compare_functors(
    m: &GlobalFunctor,
    n: &GlobalFunctor,
    matching: Option<&[Vec<usize>]>,
) -> IsoReport {
    let fail = |msg: String| IsoReport {
        isomorphic: false,
        matching: None,
        obstruction: Some(msg),
    };
    if !Arc::ptr_eq(&m.window, &n.window) {
        return fail("functors live on different windows".into());
    }
    let w = &m.window;
    for g in 0..w.len() {
        if m.rank(g) != n.rank(g) {
            return fail(format!(
                "rank at {}: {} vs {}",
                w.group(g),
                m.rank(g),
                n.rank(g)
            ));
        }
    }
    if let Some(sigma) = matching {
        return match check_matching(m, n, sigma) {
            Ok(()) => IsoReport {
                isomorphic: true,
                matching: Some(sigma.to_vec()),
                obstruction: None,
            },
            Err(e) => fail(e),
        };
    }
    let slots: Vec<(usize, usize)> = (0..w.len())
        .flat_map(|g| (0..m.rank(g)).map(move |i| (g, i)))
        .collect();
    let mut sigma: Vec<Vec<usize>> = (0..w.len()).map(|g| vec![usize::MAX; m.rank(g)]).collect();
    let mut used: Vec<Vec<bool>> = (0..w.len()).map(|g| vec![false; m.rank(g)]).collect();
    let mut nodes = 0u64;
    let found = search(m, n, &slots, 0, &mut sigma, &mut used, &mut nodes);
    match found {
        Some(true) => IsoReport {
            isomorphic: true,
            matching: Some(sigma),
            obstruction: None,
        },
        Some(false) => fail("no atom bijection intertwines the term matrices".into()),
        None => fail(format!("search exceeded {MATCHING_CAP} nodes")),
    }
}

fn search(
    m: &GlobalFunctor,
    n: &GlobalFunctor,
    slots: &[(usize, usize)],
    pos: usize,
    sigma: &mut [Vec<usize>],
    used: &mut [Vec<bool>],
    nodes: &mut u64,
) -> Option<bool> {
    if pos == slots.len() {
        return Some(true);
    }
    let (g, i) = slots[pos];
    for cand in 0..n.rank(g) {
        if used[g][cand] {
            continue;
        }
        *nodes += 1;
        if *nodes > MATCHING_CAP {
            return None;
        }
        sigma[g][i] = cand;
        if consistent_at(m, n, sigma, g, i) {
            used[g][cand] = true;
            match search(m, n, slots, pos + 1, sigma, used, nodes) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            used[g][cand] = false;
        }
        sigma[g][i] = usize::MAX;
    }
    Some(false)
}

/// Checks every matrix entry whose row and column atoms are both assigned
/// and involve atom `i` of group `g`.
fn consistent_at(
    m: &GlobalFunctor,
    n: &GlobalFunctor,
    sigma: &[Vec<usize>],
    g: usize,
    i: usize,
) -> bool {
    let w = &m.window;
    for other in 0..w.len() {
        for t in 0..w.terms(g, other).len() {
            let (a, b) = (&m.maps[g][other][t], &n.maps[g][other][t]);
            for (r, &sr) in sigma[other].iter().enumerate() {
                if sr != usize::MAX && a[[r, i]] != b[[sr, sigma[g][i]]] {
                    return false;
                }
            }
        }
        for t in 0..w.terms(other, g).len() {
            let (a, b) = (&m.maps[other][g][t], &n.maps[other][g][t]);
            for (c, &sc) in sigma[other].iter().enumerate() {
                if sc != usize::MAX && a[[i, c]] != b[[sigma[g][i], sc]] {
                    return false;
                }
            }
        }
    }
    true
}

fn check_matching(
    m: &GlobalFunctor,
    n: &GlobalFunctor,
    sigma: &[Vec<usize>],
) -> std::result::Result<(), String> {
    let w = &m.window;
    if sigma.len() != w.len() {
        return Err("matching has the wrong number of groups".into());
    }
    for (g, s) in sigma.iter().enumerate() {
        let mut sorted = s.clone();
        sorted.sort_unstable();
        if sorted != (0..m.rank(g)).collect::<Vec<_>>() {
            return Err(format!("matching at {} is not a bijection", w.group(g)));
        }
    }
    for src in 0..w.len() {
        for tgt in 0..w.len() {
            for (t, term) in w.terms(src, tgt).iter().enumerate() {
                let (a, b) = (&m.maps[src][tgt][t], &n.maps[src][tgt][t]);
                for r in 0..a.nrows() {
                    for c in 0..a.ncols() {
                        if a[[r, c]] != b[[sigma[tgt][r], sigma[src][c]]] {
                            return Err(format!(
                                "{} -> {} term {} entry ({r}, {c})",
                                w.group(src),
                                w.group(tgt),
                                term.key(w.group(tgt))
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// A morphism `A_G → M`: one matrix per window group.
#[derive(Clone, Debug)]
pub struct FunctorMorphism {
    pub components: Vec<Array2<i64>>,
    pub natural: bool,
}

/// The morphism `A_G → M` sending `[_G G_G]` to `x ∈ M(G)`; the basis element
/// `(L, α)` at `K` goes to `tr_L^K α*(x)`. Naturality is verified on every
/// term of the window.
pub fn represent_to_morphism(
    m: &GlobalFunctor,
    a_g: &GlobalFunctor,
    gi: usize,
    x: &[i64],
) -> Result<FunctorMorphism> {
    let w = m.window.clone();
    if !Arc::ptr_eq(&w, &a_g.window) {
        return Err(Error::Invalid(
            "represented functor over a different window".into(),
        ));
    }
    let g = w.group(gi);
    let mut components = Vec::with_capacity(w.len());
    for (ki, _) in w.groups().iter().enumerate() {
        let basis = w.terms(gi, ki);
        if basis.len() != a_g.rank(ki) {
            return Err(Error::Invalid(format!(
                "A_{g} does not match the window at index {ki}"
            )));
        }
        let mut comp = Array2::zeros((m.rank(ki), basis.len()));
        for (col, term) in basis.iter().enumerate() {
            let y = m.apply_class(gi, ki, &BisetClass::single(w.group(ki), g, term.clone()), x)?;
            for (row, v) in y.into_iter().enumerate() {
                comp[[row, col]] = v;
            }
        }
        components.push(comp);
    }
    let mut natural = true;
    for src in 0..w.len() {
        for tgt in 0..w.len() {
            for t in 0..w.terms(src, tgt).len() {
                let lhs = components[tgt].dot(&a_g.maps[src][tgt][t]);
                let rhs = m.maps[src][tgt][t].dot(&components[src]);
                natural &= lhs == rhs;
            }
        }
    }
    Ok(FunctorMorphism {
        components,
        natural,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn window(list: &str) -> Arc<GroupWindow> {
        GroupWindow::parse(list).unwrap()
    }

    #[test]
    fn free_ranks() {
        let w = window("e,C2");
        let c2 = Group::named("C2").unwrap();
        let a = GlobalFunctor::free(&c2, &w).unwrap();
        assert_eq!(a.ranks(), vec![1, 3]);
        let a_e = GlobalFunctor::free(&Group::trivial(), &w).unwrap();
        assert_eq!(a_e.ranks(), vec![1, 2]);
    }

    #[test]
    fn burnside_b_ranks() {
        let w = window("e,C2");
        let b = GlobalFunctor::burnside_b(&Group::named("C2").unwrap(), &w).unwrap();
        assert_eq!(b.ranks(), vec![2, 5]);
        let we = window("e");
        let b_e = GlobalFunctor::burnside_b(&Group::trivial(), &we).unwrap();
        assert_eq!(b_e.ranks(), vec![1]);
    }

    #[test]
    fn constant_functor_passes_axioms() {
        for list in ["e,C2", "e,C3", "e,C2,C3,S3"] {
            let w = window(list);
            let report = verify_axioms(&GlobalFunctor::constant(&w)).unwrap();
            assert!(report.all_passed(), "{list}: {:?}", report.failures());
            assert!(report.count("double-coset") > 0);
        }
    }

    #[test]
    fn free_functor_passes_axioms() {
        let w = window("e,C2,C3,S3");
        let a = GlobalFunctor::free(&Group::named("S3").unwrap(), &w).unwrap();
        let report = verify_axioms(&a).unwrap();
        assert!(report.all_passed(), "{:?}", report.failures());
        assert!(report.misses.is_empty());
    }

    #[test]
    fn corrupted_transfer_is_caught() {
        let w = window("e,C2");
        let mut a = GlobalFunctor::constant(&w);
        // tr_e^{C2} is the term from e to C2 with L = e
        let t = w.terms(0, 1).iter().position(|t| t.class == 0).unwrap();
        a.set_matrix(0, 1, t, Array2::from_elem((1, 1), 3));
        let report = verify_axioms(&a).unwrap();
        assert!(report.failures().iter().any(|c| c.axiom == "double-coset"));
    }

    #[test]
    fn res_tr_on_free_point() {
        let w = window("e,C2");
        let a = GlobalFunctor::free(&Group::named("C2").unwrap(), &w).unwrap();
        let c2 = w.group(1).clone();
        let (_, incl) = c2.subgroup_group(&Subgroup::trivial());
        let incl = GroupHom::new(w.group(0).clone(), c2.clone(), incl.image).unwrap();
        let composite =
            balanced_product(&Biset::restriction(&incl), &Biset::transfer(&incl)).unwrap();
        let x = vec![1];
        let y = a.apply_biset(0, 0, &composite, &x).unwrap();
        assert_eq!(y, vec![2]);
    }

    #[test]
    fn compare_finds_identity_and_rejects_mismatch() {
        let w = window("e,C2");
        let c2 = Group::named("C2").unwrap();
        let a = GlobalFunctor::free(&c2, &w).unwrap();
        let r = compare_functors(&a, &a, None);
        assert!(r.isomorphic);
        let b = GlobalFunctor::free(&Group::trivial(), &w).unwrap();
        assert!(!compare_functors(&a, &b, None).isomorphic);
    }

    #[test]
    fn representing_the_universal_element() {
        let w = window("e,C2");
        let c2 = w.group(1).clone();
        let a = GlobalFunctor::free(&c2, &w).unwrap();
        let id_term = w
            .terms(1, 1)
            .iter()
            .position(|t| t.class == 1 && t.images == vec![0, 1])
            .unwrap();
        let x = unit(3, id_term);
        let f = represent_to_morphism(&a, &a, 1, &x).unwrap();
        assert!(f.natural);
        for (g, comp) in f.components.iter().enumerate() {
            assert_eq!(*comp, Array2::<i64>::eye(a.rank(g)));
        }
        let c = GlobalFunctor::constant(&w);
        let f = represent_to_morphism(&c, &a, 1, &[1]).unwrap();
        assert!(f.natural);
        // (e, triv) at C2 goes to the index [C2 : e] = 2
        assert_eq!(f.components[1].row(0).to_vec(), vec![2, 1, 1]);
    }

    #[test]
    fn pre_global_completion() {
        let w = window("e,C2");
        let b = GlobalFunctor::burnside_b(&Group::trivial(), &w).unwrap();
        let p = PreGlobalFunctor {
            table: b.clone(),
            obstruction: None,
        };
        let done = p.group_complete().unwrap();
        assert_eq!(done.ranks(), b.ranks());
        let bad = PreGlobalFunctor {
            table: b,
            obstruction: Some("1+1 = 1+0".into()),
        };
        assert!(matches!(
            bad.group_complete(),
            Err(Error::NonCancellative(_))
        ));
        let z = GlobalFunctor::zero(&w);
        assert_eq!(z.ranks(), vec![0, 0]);
    }
}
