//! The free parsummable category on an M-category `B`: objects are finite
//! families of disjointly supported `B`-objects, summed by union.

use crate::error::{Error, Result};
use crate::groups::GroupRef;
use crate::parsummable::{Injection, Label, MCategory, Parsummable, UniversalSet};

use super::gfinsets::{GFinSets, GMor, GObj, GSetFilter};
use super::{merge_disjoint, position};

/// `parts[i] : src[i] → tgt[perm[i]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeMor<O, M> {
    pub src: Vec<O>,
    pub tgt: Vec<O>,
    pub perm: Vec<usize>,
    pub parts: Vec<M>,
}

#[derive(Clone, Debug)]
pub struct FreeParsummable<B> {
    base: B,
    generator_size: usize,
}

impl<B: MCategory> FreeParsummable<B> {
    pub fn new(base: B) -> FreeParsummable<B> {
        FreeParsummable {
            base,
            generator_size: 1,
        }
    }

    /// Largest size of a single generator; scales the default size bound.
    pub fn with_generator_size(mut self, n: usize) -> FreeParsummable<B> {
        self.generator_size = n.max(1);
        self
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    fn supports_disjoint(&self, objs: &[B::Obj]) -> bool {
        let mut seen: Vec<Label> = Vec::new();
        for o in objs {
            match merge_disjoint(&seen, &self.base.support(o)) {
                Ok(s) => seen = s,
                Err(_) => return false,
            }
        }
        true
    }

    /// Builds a morphism from unordered `(source, target, part)` triples.
    fn assemble(&self, mut triples: Vec<(B::Obj, B::Obj, B::Mor)>) -> FreeMor<B::Obj, B::Mor> {
        triples.sort_by(|a, b| a.0.cmp(&b.0));
        let mut tgt: Vec<B::Obj> = triples.iter().map(|t| t.1.clone()).collect();
        tgt.sort();
        let perm = triples
            .iter()
            .map(|t| tgt.binary_search(&t.1).expect("target part"))
            .collect();
        let (src, parts) = triples.into_iter().map(|(s, _, p)| (s, p)).unzip();
        FreeMor {
            src,
            tgt,
            perm,
            parts,
        }
    }

    fn triples(&self, f: &FreeMor<B::Obj, B::Mor>) -> Vec<(B::Obj, B::Obj, B::Mor)> {
        (0..f.src.len())
            .map(|i| {
                (
                    f.src[i].clone(),
                    f.tgt[f.perm[i]].clone(),
                    f.parts[i].clone(),
                )
            })
            .collect()
    }
}

impl<B: MCategory> MCategory for FreeParsummable<B> {
    type Obj = Vec<B::Obj>;
    type Mor = FreeMor<B::Obj, B::Mor>;

    fn name(&self) -> String {
        format!("P({})", self.base.name())
    }

    /// Families of pairwise disjoint, nonempty-support `B`-objects.
    fn objects_on(&self, labels: &[Label], bound: usize) -> Vec<Vec<B::Obj>> {
        let gens: Vec<B::Obj> = self
            .base
            .objects_on(labels, bound)
            .into_iter()
            .filter(|o| !self.base.support(o).is_empty())
            .collect();
        let mut out = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        fn go<B: MCategory>(
            cat: &FreeParsummable<B>,
            gens: &[B::Obj],
            from: usize,
            used: usize,
            bound: usize,
            stack: &mut Vec<usize>,
            out: &mut Vec<Vec<B::Obj>>,
        ) {
            let mut objs: Vec<B::Obj> = stack.iter().map(|&i| gens[i].clone()).collect();
            objs.sort();
            out.push(objs);
            for i in from..gens.len() {
                let s = cat.base.size(&gens[i]);
                if used + s > bound {
                    continue;
                }
                stack.push(i);
                let objs: Vec<B::Obj> = stack.iter().map(|&j| gens[j].clone()).collect();
                if cat.supports_disjoint(&objs) {
                    go(cat, gens, i + 1, used + s, bound, stack, out);
                }
                stack.pop();
            }
        }
        go(self, &gens, 0, 0, bound, &mut stack, &mut out);
        out
    }

    fn size(&self, x: &Vec<B::Obj>) -> usize {
        x.iter().map(|o| self.base.size(o)).sum()
    }

    fn support(&self, x: &Vec<B::Obj>) -> Vec<Label> {
        let mut s: Vec<Label> = x.iter().flat_map(|o| self.base.support(o)).collect();
        s.sort_unstable();
        s
    }

    fn source(&self, f: &Self::Mor) -> Vec<B::Obj> {
        f.src.clone()
    }

    fn target(&self, f: &Self::Mor) -> Vec<B::Obj> {
        f.tgt.clone()
    }

    fn identity(&self, x: &Vec<B::Obj>) -> Self::Mor {
        FreeMor {
            src: x.clone(),
            tgt: x.clone(),
            perm: (0..x.len()).collect(),
            parts: x.iter().map(|o| self.base.identity(o)).collect(),
        }
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        FreeMor {
            src: f.src.clone(),
            tgt: g.tgt.clone(),
            perm: f.perm.iter().map(|&j| g.perm[j]).collect(),
            parts: f
                .perm
                .iter()
                .zip(&f.parts)
                .map(|(&j, p)| self.base.compose(&g.parts[j], p))
                .collect(),
        }
    }

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        let mut triples = Vec::with_capacity(f.src.len());
        for (s, t, p) in self.triples(f) {
            triples.push((t, s, self.base.inverse(&p)?));
        }
        Some(self.assemble(triples))
    }

    fn hom_set(&self, x: &Vec<B::Obj>, y: &Vec<B::Obj>) -> Vec<Self::Mor> {
        if x.len() != y.len() {
            return Vec::new();
        }
        let homs: Vec<Vec<Vec<B::Mor>>> = x
            .iter()
            .map(|a| y.iter().map(|b| self.base.hom_set(a, b)).collect())
            .collect();
        let mut out = Vec::new();
        let mut perm = Vec::with_capacity(x.len());
        let mut parts = Vec::with_capacity(x.len());
        let mut used = vec![false; y.len()];
        #[allow(clippy::too_many_arguments)]
        fn go<O: Clone, M: Clone>(
            homs: &[Vec<Vec<M>>],
            x: &[O],
            y: &[O],
            perm: &mut Vec<usize>,
            parts: &mut Vec<M>,
            used: &mut Vec<bool>,
            out: &mut Vec<FreeMor<O, M>>,
        ) {
            let i = perm.len();
            if i == x.len() {
                out.push(FreeMor {
                    src: x.to_vec(),
                    tgt: y.to_vec(),
                    perm: perm.clone(),
                    parts: parts.clone(),
                });
                return;
            }
            for j in 0..y.len() {
                if used[j] {
                    continue;
                }
                used[j] = true;
                perm.push(j);
                for f in &homs[i][j] {
                    parts.push(f.clone());
                    go(homs, x, y, perm, parts, used, out);
                    parts.pop();
                }
                perm.pop();
                used[j] = false;
            }
        }
        go(&homs, x, y, &mut perm, &mut parts, &mut used, &mut out);
        out
    }

    fn act_obj(&self, u: &Injection, x: &Vec<B::Obj>) -> Vec<B::Obj> {
        let mut objs: Vec<B::Obj> = x.iter().map(|o| self.base.act_obj(u, o)).collect();
        objs.sort();
        objs
    }

    fn transport(&self, u: &Injection, x: &Vec<B::Obj>) -> Self::Mor {
        self.assemble(
            x.iter()
                .map(|o| {
                    (
                        o.clone(),
                        self.base.act_obj(u, o),
                        self.base.transport(u, o),
                    )
                })
                .collect(),
        )
    }

    fn describe(&self, x: &Vec<B::Obj>) -> String {
        let parts: Vec<String> = x.iter().map(|o| self.base.describe(o)).collect();
        format!("<{}>", parts.join(", "))
    }
}

/// Generators whose free parsummable category has a faster model of its
/// fixed points. Every hook returning `None` falls back to brute force.
pub trait FreeBase: MCategory {
    /// Fixed families in the window meeting every fixed isomorphism class.
    fn fixed_families(
        &self,
        _u: &UniversalSet,
        _m: usize,
        _bound: usize,
    ) -> Option<Result<Vec<Vec<Self::Obj>>>> {
        None
    }

    fn families_isomorphic(
        &self,
        _u: &UniversalSet,
        _x: &[Self::Obj],
        _y: &[Self::Obj],
    ) -> Option<Result<bool>> {
        None
    }

    fn family_signature(&self, _u: &UniversalSet, _x: &[Self::Obj]) -> Option<Vec<i64>> {
        None
    }
}

impl<B: FreeBase> Parsummable for FreeParsummable<B> {
    fn zero(&self) -> Vec<B::Obj> {
        Vec::new()
    }

    fn sum(&self, x: &Vec<B::Obj>, y: &Vec<B::Obj>) -> Result<Vec<B::Obj>> {
        merge_disjoint(&self.support(x), &self.support(y))?;
        let mut objs: Vec<B::Obj> = x.iter().chain(y).cloned().collect();
        objs.sort();
        Ok(objs)
    }

    fn sum_mor(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        let span = |f: &Self::Mor| {
            let mut s = self.support(&f.src);
            s.extend(self.support(&f.tgt));
            s.sort_unstable();
            s.dedup();
            s
        };
        let (lf, lg) = (span(f), span(g));
        merge_disjoint(&lf, &lg)?;
        let mut triples = self.triples(f);
        triples.extend(self.triples(g));
        Ok(self.assemble(triples))
    }

    /// An indecomposable fixed object is one orbit of at most `|G|`
    /// generators.
    fn default_bound(&self, group: &GroupRef) -> usize {
        group.order() * self.generator_size
    }

    fn fixed_candidates(
        &self,
        u: &UniversalSet,
        m: usize,
        bound: usize,
    ) -> Result<Vec<Vec<B::Obj>>> {
        match self.base.fixed_families(u, m, bound) {
            Some(found) => found,
            None => {
                let labels = u.window(m);
                Ok(self
                    .objects_on(&labels, bound)
                    .into_iter()
                    .filter(|x| u.is_fixed(self, x))
                    .collect())
            }
        }
    }

    fn fixed_isomorphic(&self, u: &UniversalSet, x: &Vec<B::Obj>, y: &Vec<B::Obj>) -> Result<bool> {
        if let Some(answer) = self.base.families_isomorphic(u, x, y) {
            return answer;
        }
        if self.size(x) != self.size(y) {
            return Ok(false);
        }
        Ok(self
            .hom_set(x, y)
            .iter()
            .any(|f| self.inverse(f).is_some() && u.is_fixed_mor(self, f)))
    }

    fn fixed_signature(&self, u: &UniversalSet, x: &Vec<B::Obj>) -> Vec<i64> {
        self.base
            .family_signature(u, x)
            .unwrap_or_else(|| vec![self.size(x) as i64])
    }
}

/// Free transitive Γ-sets on finite label sets with equivariant bijections:
/// the generator whose free parsummable category is `(ΓF)_free`.
#[derive(Debug)]
pub struct TransitiveFree {
    inner: GFinSets,
}

impl TransitiveFree {
    pub fn new(gamma: &GroupRef) -> Result<TransitiveFree> {
        Ok(TransitiveFree {
            inner: GFinSets::new(gamma, GSetFilter::Free)?,
        })
    }

    pub fn gamma(&self) -> &GroupRef {
        self.inner.gamma()
    }

    /// The free part of `ΓF`, the target of `ι♯`.
    pub fn target_category(&self) -> &GFinSets {
        &self.inner
    }
}

impl MCategory for TransitiveFree {
    type Obj = GObj;
    type Mor = GMor;

    fn name(&self) -> String {
        format!("B_gl {}", self.inner.gamma().name())
    }

    fn objects_on(&self, labels: &[Label], bound: usize) -> Vec<GObj> {
        let n = self.inner.gamma().order();
        if bound < n {
            return Vec::new();
        }
        self.inner
            .objects_on(labels, n)
            .into_iter()
            .filter(|x| x.len() == n)
            .collect()
    }

    fn size(&self, x: &GObj) -> usize {
        x.len()
    }

    fn support(&self, x: &GObj) -> Vec<Label> {
        x.labels.clone()
    }

    fn source(&self, f: &GMor) -> GObj {
        f.src.clone()
    }

    fn target(&self, f: &GMor) -> GObj {
        f.tgt.clone()
    }

    fn identity(&self, x: &GObj) -> GMor {
        self.inner.identity(x)
    }

    fn compose(&self, g: &GMor, f: &GMor) -> GMor {
        self.inner.compose(g, f)
    }

    fn inverse(&self, f: &GMor) -> Option<GMor> {
        self.inner.inverse(f)
    }

    fn hom_set(&self, x: &GObj, y: &GObj) -> Vec<GMor> {
        self.inner.hom_set(x, y)
    }

    fn act_obj(&self, u: &Injection, x: &GObj) -> GObj {
        self.inner.act_obj(u, x)
    }

    fn transport(&self, u: &Injection, x: &GObj) -> GMor {
        self.inner.transport(u, x)
    }

    fn describe(&self, x: &GObj) -> String {
        self.inner.describe(x)
    }
}

/// Fixed points are computed through `ι♯`, which is an isomorphism of
/// categories onto the free Γ-sets commuting with relabelling.
impl FreeBase for TransitiveFree {
    fn fixed_families(
        &self,
        u: &UniversalSet,
        m: usize,
        bound: usize,
    ) -> Option<Result<Vec<Vec<GObj>>>> {
        let run = || {
            self.inner
                .fixed_candidates(u, m, bound)?
                .iter()
                .map(|y| split_orbits(self.gamma(), y))
                .collect()
        };
        Some(run())
    }

    fn families_isomorphic(
        &self,
        u: &UniversalSet,
        x: &[GObj],
        y: &[GObj],
    ) -> Option<Result<bool>> {
        let run = || {
            let (a, b) = (self.union(x)?, self.union(y)?);
            self.inner.fixed_isomorphic(u, &a, &b)
        };
        Some(run())
    }

    fn family_signature(&self, u: &UniversalSet, x: &[GObj]) -> Option<Vec<i64>> {
        let y = self.union(x).ok()?;
        Some(self.inner.fixed_signature(u, &y))
    }
}

impl TransitiveFree {
    fn union(&self, x: &[GObj]) -> Result<GObj> {
        x.iter()
            .try_fold(self.inner.zero(), |acc, o| self.inner.sum(&acc, o))
    }
}

impl FreeParsummable<TransitiveFree> {
    /// `P(B_gl Γ)`, with generators of size `|Γ|`.
    pub fn transitive(gamma: &GroupRef) -> Result<Self> {
        Ok(FreeParsummable::new(TransitiveFree::new(gamma)?).with_generator_size(gamma.order()))
    }

    /// `ι♯` on objects: the union of the orbits.
    pub fn iota_obj(&self, x: &[GObj]) -> Result<GObj> {
        self.base.union(x)
    }

    /// `ι♯` on morphisms.
    pub fn iota_mor(&self, f: &FreeMor<GObj, GMor>) -> Result<GMor> {
        let target = self.base.target_category();
        let id = target.identity(&target.zero());
        f.parts
            .iter()
            .try_fold(id, |acc, p| target.sum_mor(&acc, p))
    }

    /// Splits a free Γ-set into its orbits: the inverse of `ι♯` on objects.
    pub fn orbits_of(&self, y: &GObj) -> Result<Vec<GObj>> {
        split_orbits(self.base.gamma(), y)
    }
}

fn split_orbits(gamma: &GroupRef, y: &GObj) -> Result<Vec<GObj>> {
    let mut out = Vec::new();
    for (orbit, stab) in y.gset(gamma).orbits_and_stabilizers() {
        if stab.order() != 1 {
            return Err(Error::Invalid("Γ-set is not free".into()));
        }
        let labels: Vec<Label> = {
            let mut l: Vec<Label> = orbit.iter().map(|&i| y.labels[i]).collect();
            l.sort_unstable();
            l
        };
        let n = labels.len();
        let mut act = vec![0; gamma.order() * n];
        for g in 0..gamma.order() {
            for &i in &orbit {
                let from = position(&labels, y.labels[i]).expect("orbit label");
                let to = position(&labels, y.labels[y.act(g, i)]).expect("orbit label");
                act[g * n + from] = to;
            }
        }
        out.push(GObj { labels, act });
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Group;
    use crate::parsummable::verify_mcat_axioms;

    #[test]
    fn free_on_finsets_singletons() {
        let c2 = Group::named("C2").unwrap();
        let p = FreeParsummable::transitive(&c2).unwrap();
        let labels: Vec<Label> = (0..4).collect();
        // free C2-sets on subsets of 4 labels: 1 + 6 + 3
        assert_eq!(p.objects_on(&labels, 4).len(), 10);
        let r = verify_mcat_axioms(&p, &labels, 4, 30, 5);
        assert!(r.all_passed(), "{:?}", r.failures());
    }

    #[test]
    fn iota_round_trip() {
        let c2 = Group::named("C2").unwrap();
        let p = FreeParsummable::transitive(&c2).unwrap();
        for x in p.objects_on(&[0, 1, 2, 3], 4) {
            let y = p.iota_obj(&x).unwrap();
            assert_eq!(p.orbits_of(&y).unwrap(), x);
            for f in p.hom_set(&x, &x) {
                let g = p.iota_mor(&f).unwrap();
                assert_eq!((g.src.clone(), g.tgt.clone()), (y.clone(), y.clone()));
            }
        }
    }

    #[test]
    fn fixed_shortcut_meets_every_brute_force_class() {
        let c2 = Group::named("C2").unwrap();
        let p = FreeParsummable::transitive(&c2).unwrap();
        let u = UniversalSet::new(&c2);
        let fast = p.fixed_candidates(&u, 2, 4).unwrap();
        assert!(fast.iter().all(|x| u.is_fixed(&p, x)));
        let slow: Vec<_> = p
            .objects_on(&u.window(2), 4)
            .into_iter()
            .filter(|x| u.is_fixed(&p, x))
            .collect();
        assert!(!slow.is_empty());
        for x in &slow {
            let hit = fast.iter().any(|y| {
                p.size(x) == p.size(y)
                    && p.hom_set(x, y)
                        .iter()
                        .any(|f| p.inverse(f).is_some() && u.is_fixed_mor(&p, f))
            });
            assert!(hit, "{}", p.describe(x));
            for y in &fast {
                assert_eq!(
                    p.fixed_isomorphic(&u, x, y).unwrap(),
                    p.size(x) == p.size(y)
                        && p.hom_set(x, y)
                            .iter()
                            .any(|f| p.inverse(f).is_some() && u.is_fixed_mor(&p, f))
                );
            }
        }
    }
}
