//! Tame M-categories and parsummable categories on finite label windows.
//!
//! Labels stand in for the elements of ω. Injections are total maps on
//! labels, stored densely on an initial segment and as a shift beyond it.
//! Universal G-sets are infinite sequences of identical blocks, each block a
//! disjoint union of one copy of `G/H` per conjugacy class; a window is an
//! initial run of blocks.

mod checks;
mod monoidal;
mod ops;
mod pi0;
mod saturation;

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::groups::{GroupRef, Subgroup};
use crate::gsets::{left_cosets, GSet};

pub use checks::{
    composition_law, gamma_functoriality, gamma_map, gamma_map_mor, gamma_value,
    verify_mcat_axioms, BasedMap, CheckReport,
};
pub use monoidal::{derived_monoidal, MonoidalReport, SplitPair};
pub use ops::{
    operation, restriction_pi0, stabilization_check, swan_k, transfer_biset, Choice, Pi0Functor,
    StabilizationReport, SwanK, SwanOptions,
};
pub use pi0::{Pi0Class, Pi0Monoid};
pub use saturation::{saturation_probe, SaturationReport};

pub type Label = u32;

/// A total injection of labels: `l ↦ map[l]` below `map.len()`, and
/// `l ↦ l + shift` above.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Injection {
    map: Vec<Label>,
    shift: Label,
}

impl Injection {
    pub fn identity() -> Injection {
        Injection {
            map: Vec::new(),
            shift: 0,
        }
    }

    /// `l ↦ l + k`.
    pub fn shift(k: Label) -> Injection {
        Injection {
            map: Vec::new(),
            shift: k,
        }
    }

    /// Dense injection on `0..map.len()`, shifted past every image above.
    pub fn from_vec(map: Vec<Label>) -> Result<Injection> {
        let distinct: BTreeSet<Label> = map.iter().copied().collect();
        if distinct.len() != map.len() {
            return Err(Error::Invalid("label map is not injective".into()));
        }
        let top = map.iter().copied().max().map_or(0, |m| m + 1);
        let shift = top.saturating_sub(map.len() as Label);
        Ok(Injection { map, shift })
    }

    /// Injection prescribed on finitely many labels; unspecified labels go
    /// injectively to labels above every prescribed image.
    pub fn from_partial(pairs: &[(Label, Label)]) -> Result<Injection> {
        let len = pairs.iter().map(|p| p.0 + 1).max().unwrap_or(0) as usize;
        let mut map = vec![Label::MAX; len];
        let mut fresh = pairs
            .iter()
            .map(|p| p.1 + 1)
            .max()
            .unwrap_or(0)
            .max(len as Label);
        for &(a, b) in pairs {
            if map[a as usize] != Label::MAX && map[a as usize] != b {
                return Err(Error::Invalid(format!("label {a} assigned twice")));
            }
            map[a as usize] = b;
        }
        for slot in map.iter_mut().filter(|s| **s == Label::MAX) {
            *slot = fresh;
            fresh += 1;
        }
        Injection::from_vec(map)
    }

    #[inline]
    pub fn apply(&self, l: Label) -> Label {
        match self.map.get(l as usize) {
            Some(&m) => m,
            None => l + self.shift,
        }
    }

    pub fn apply_set(&self, labels: &[Label]) -> Vec<Label> {
        let mut v: Vec<Label> = labels.iter().map(|&l| self.apply(l)).collect();
        v.sort_unstable();
        v
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Injection) -> Injection {
        let len = first
            .map
            .len()
            .max((self.map.len() as Label).saturating_sub(first.shift) as usize);
        let map = (0..len as Label)
            .map(|l| self.apply(first.apply(l)))
            .collect();
        Injection {
            map,
            shift: first.shift + self.shift,
        }
    }

    pub fn agrees_on(&self, other: &Injection, labels: &[Label]) -> bool {
        labels.iter().all(|&l| self.apply(l) == other.apply(l))
    }

    /// Whether the images of `a` and of `b` are disjoint under `self` and
    /// `other` respectively.
    pub fn images_disjoint(&self, a: &[Label], other: &Injection, b: &[Label]) -> bool {
        let left: BTreeSet<Label> = a.iter().map(|&l| self.apply(l)).collect();
        b.iter().all(|&l| !left.contains(&other.apply(l)))
    }
}

/// A category with a strict action of injections, given on objects and by
/// the structure isomorphisms `u_∘^x : x → u_* x`.
pub trait MCategory {
    type Obj: Clone + Eq + Ord + Hash + Debug + Send + Sync;
    type Mor: Clone + Eq + Debug + Send + Sync;

    fn name(&self) -> String;

    /// Objects supported in `labels` of size at most `bound`.
    fn objects_on(&self, labels: &[Label], bound: usize) -> Vec<Self::Obj>;
    /// Additive grading used for size bounds.
    fn size(&self, x: &Self::Obj) -> usize;
    fn support(&self, x: &Self::Obj) -> Vec<Label>;

    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, x: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor>;
    fn hom_set(&self, x: &Self::Obj, y: &Self::Obj) -> Vec<Self::Mor>;

    fn act_obj(&self, u: &Injection, x: &Self::Obj) -> Self::Obj;
    /// `u_∘^x : x → u_* x`.
    fn transport(&self, u: &Injection, x: &Self::Obj) -> Self::Mor;

    /// `u_* f = u_∘^y ∘ f ∘ (u_∘^x)⁻¹`.
    fn act_mor(&self, u: &Injection, f: &Self::Mor) -> Self::Mor {
        let (x, y) = (self.source(f), self.target(f));
        let back = self
            .inverse(&self.transport(u, &x))
            .expect("structure maps are invertible");
        self.compose(&self.transport(u, &y), &self.compose(f, &back))
    }

    /// `[v, u]^x = v_∘^x ∘ (u_∘^x)⁻¹ : u_* x → v_* x`.
    fn comparison(&self, v: &Injection, u: &Injection, x: &Self::Obj) -> Self::Mor {
        let back = self
            .inverse(&self.transport(u, x))
            .expect("structure maps are invertible");
        self.compose(&self.transport(v, x), &back)
    }

    /// Short human-readable description of an object.
    fn describe(&self, x: &Self::Obj) -> String {
        format!("{x:?}")
    }
}

/// An M-category with a strictly associative, commutative and unital sum of
/// disjointly supported objects and morphisms.
pub trait Parsummable: MCategory {
    fn zero(&self) -> Self::Obj;
    fn sum(&self, x: &Self::Obj, y: &Self::Obj) -> Result<Self::Obj>;
    fn sum_mor(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;

    /// G-fixed objects in the window of multiplicity `m`, of size at most
    /// `bound`. Instances may return any sublist meeting every isomorphism
    /// class of the full enumeration.
    fn fixed_candidates(&self, u: &UniversalSet, m: usize, bound: usize) -> Result<Vec<Self::Obj>> {
        let labels = u.window(m);
        Ok(self
            .objects_on(&labels, bound)
            .into_iter()
            .filter(|x| u.is_fixed(self, x))
            .collect())
    }

    /// Whether a G-fixed isomorphism `x → y` exists.
    fn fixed_isomorphic(&self, u: &UniversalSet, x: &Self::Obj, y: &Self::Obj) -> Result<bool> {
        if self.size(x) != self.size(y) {
            return Ok(false);
        }
        Ok(self
            .hom_set(x, y)
            .iter()
            .any(|f| self.inverse(f).is_some() && u.is_fixed_mor(self, f)))
    }

    /// An additive, isomorphism-invariant vector of non-negative integers.
    fn fixed_signature(&self, _u: &UniversalSet, x: &Self::Obj) -> Vec<i64> {
        vec![self.size(x) as i64]
    }

    /// Size bound covering every indecomposable fixed object of `group`.
    fn default_bound(&self, group: &GroupRef) -> usize {
        group.order()
    }

    /// Window multiplicity large enough for every object of size `bound`.
    fn default_multiplicity(&self, _group: &GroupRef, bound: usize) -> usize {
        bound.max(1)
    }

    /// One object per isomorphism class of size at most `bound`, for the
    /// saturation probe.
    fn object_representatives(&self, bound: usize) -> Vec<Self::Obj> {
        let labels: Vec<Label> = (0..bound as Label).collect();
        let mut reps: Vec<Self::Obj> = Vec::new();
        for x in self.objects_on(&labels, bound) {
            let known = reps.iter().any(|r| {
                self.size(r) == self.size(&x)
                    && self
                        .hom_set(r, &x)
                        .iter()
                        .any(|f| self.inverse(f).is_some())
            });
            if !known {
                reps.push(x);
            }
        }
        reps
    }

    /// Label for an indecomposable fixed object.
    fn atom_label(&self, _u: &UniversalSet, x: &Self::Obj) -> String {
        self.describe(x)
    }
}

/// An infinite universal G-set: blocks `B_0, B_1, ...`, each the disjoint
/// union over subgroup classes `(H)` of `G/H`. Label `b·|B| + i` is point `i`
/// of block `b`.
#[derive(Clone, Debug)]
pub struct UniversalSet {
    group: GroupRef,
    block: GSet,
    offsets: Vec<usize>,
    /// Coset index of each group element, per class.
    coset_of: Vec<Vec<usize>>,
}

impl UniversalSet {
    pub fn new(group: &GroupRef) -> UniversalSet {
        let classes = group.subgroup_classes();
        let mut block = GSet::empty(group);
        let mut offsets = Vec::with_capacity(classes.len());
        let mut coset_of = Vec::with_capacity(classes.len());
        for h in classes.reps() {
            offsets.push(block.size());
            block = block
                .disjoint_union(&GSet::cosets(group, h))
                .expect("same group");
            coset_of.push(left_cosets(group, h).1);
        }
        UniversalSet {
            group: group.clone(),
            block,
            offsets,
            coset_of,
        }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn block_size(&self) -> usize {
        self.block.size()
    }

    /// Labels of the first `m` blocks.
    pub fn window(&self, m: usize) -> Vec<Label> {
        (0..(m * self.block_size()) as Label).collect()
    }

    #[inline]
    pub fn act(&self, g: usize, l: Label) -> Label {
        let b = self.block_size() as Label;
        (l / b) * b + self.block.act(g, (l % b) as usize) as Label
    }

    pub fn block_of(&self, l: Label) -> usize {
        l as usize / self.block_size()
    }

    pub fn blocks_of(&self, labels: &[Label]) -> Vec<usize> {
        let set: BTreeSet<usize> = labels.iter().map(|&l| self.block_of(l)).collect();
        set.into_iter().collect()
    }

    /// Label of coset `i` of `G/H_c` in block `b`.
    pub fn copy_label(&self, class: usize, block: usize, coset: usize) -> Label {
        (block * self.block_size() + self.offsets[class] + coset) as Label
    }

    /// Label of the coset `g H_c` in block `b`.
    pub fn coset_label(&self, class: usize, block: usize, g: usize) -> Label {
        self.copy_label(class, block, self.coset_of[class][g])
    }

    pub fn class_size(&self, class: usize) -> usize {
        let next = self
            .offsets
            .get(class + 1)
            .copied()
            .unwrap_or(self.block_size());
        next - self.offsets[class]
    }

    /// The label action of `g` on every block up to `blocks`.
    pub fn injection(&self, g: usize, blocks: usize) -> Injection {
        let n = (blocks * self.block_size()) as Label;
        Injection {
            map: (0..n).map(|l| self.act(g, l)).collect(),
            shift: 0,
        }
    }

    fn blocks_needed(&self, labels: &[Label]) -> usize {
        labels
            .iter()
            .map(|&l| self.block_of(l) + 1)
            .max()
            .unwrap_or(0)
    }

    /// `g` acting on an object.
    pub fn act_obj<C: MCategory + ?Sized>(&self, cat: &C, g: usize, x: &C::Obj) -> C::Obj {
        let blocks = self.blocks_needed(&cat.support(x));
        cat.act_obj(&self.injection(g, blocks), x)
    }

    /// `g` acting on an automorphism-structure: `(l^g)_∘^x`.
    pub fn transport<C: MCategory + ?Sized>(&self, cat: &C, g: usize, x: &C::Obj) -> C::Mor {
        let blocks = self.blocks_needed(&cat.support(x));
        cat.transport(&self.injection(g, blocks), x)
    }

    pub fn is_fixed<C: MCategory + ?Sized>(&self, cat: &C, x: &C::Obj) -> bool {
        let blocks = self.blocks_needed(&cat.support(x));
        self.group
            .generators()
            .into_iter()
            .all(|g| cat.act_obj(&self.injection(g, blocks), x) == *x)
    }

    pub fn is_fixed_mor<C: MCategory + ?Sized>(&self, cat: &C, f: &C::Mor) -> bool {
        let mut labels = cat.support(&cat.source(f));
        labels.extend(cat.support(&cat.target(f)));
        let blocks = self.blocks_needed(&labels);
        self.group
            .generators()
            .into_iter()
            .all(|g| cat.act_mor(&self.injection(g, blocks), f) == *f)
    }

    /// The G-set of an invariant label set (points in the given order).
    pub fn gset_on(&self, labels: &[Label]) -> Result<GSet> {
        let pos: std::collections::HashMap<Label, usize> =
            labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut table = Vec::with_capacity(self.group.order());
        for g in 0..self.group.order() {
            let row = labels
                .iter()
                .map(|&l| {
                    pos.get(&self.act(g, l))
                        .copied()
                        .ok_or_else(|| Error::Invalid("label set is not invariant".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            table.push(row);
        }
        if labels.is_empty() {
            return Ok(GSet::empty(&self.group));
        }
        Ok(GSet::from_raw(
            self.group.clone(),
            labels.len(),
            table.into_iter().flatten().collect(),
        ))
    }

    /// Injection moving the listed blocks, in order, onto `targets`,
    /// preserving positions inside blocks. Equivariant on those blocks.
    pub fn block_move(&self, from: &[usize], targets: &[usize]) -> Result<Injection> {
        let b = self.block_size();
        let mut pairs = Vec::with_capacity(from.len() * b);
        for (&s, &t) in from.iter().zip(targets) {
            for i in 0..b {
                pairs.push(((s * b + i) as Label, (t * b + i) as Label));
            }
        }
        Injection::from_partial(&pairs)
    }
}

/// Allocation policy for equivariant embeddings of finite K-sets into a
/// universal K-set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbedChoice {
    /// Orbits in order of least point, least conjugating element, copies
    /// allocated from block `start` upward.
    Canonical,
    /// Orbits in reverse order, largest point and largest conjugating
    /// element.
    Alternative,
}

/// Embeds a finite K-set (given as a [`GSet`]) into `u` equivariantly, using
/// fresh copies of each `K/H` starting at block `start`. Returns the label of
/// every point and the number of blocks consumed per class.
pub fn embed_kset(
    u: &UniversalSet,
    x: &GSet,
    start: usize,
    choice: EmbedChoice,
) -> (Vec<Label>, Vec<usize>) {
    let k = u.group();
    let classes = k.subgroup_classes();
    let mut next = vec![start; classes.len()];
    let mut labels = vec![Label::MAX; x.size()];
    let mut orbits = x.orbits_and_stabilizers();
    if choice == EmbedChoice::Alternative {
        orbits.reverse();
    }
    for (orbit, _) in orbits {
        let p = match choice {
            EmbedChoice::Canonical => orbit[0],
            EmbedChoice::Alternative => *orbit.last().expect("orbits are nonempty"),
        };
        let stab = x.stabilizer(p);
        let c = classes.class_of_subgroup(&stab);
        let rep = classes.rep(c);
        let movers: Vec<usize> = (0..k.order())
            .filter(|&g| k.conjugate(g, &stab) == *rep)
            .collect();
        let k0 = match choice {
            EmbedChoice::Canonical => movers[0],
            EmbedChoice::Alternative => *movers.last().expect("conjugate to its representative"),
        };
        let block = next[c];
        next[c] += 1;
        let k0inv = k.inv(k0);
        for g in 0..k.order() {
            let q = x.act(g, p);
            labels[q] = u.coset_label(c, block, k.mul(g, k0inv));
        }
    }
    (labels, next.into_iter().map(|n| n - start).collect())
}

/// Checks that a subgroup-indexed marks vector is consistent (helper for
/// instances using marks as signatures).
pub fn marks_signature(gset: &GSet) -> Vec<i64> {
    gset.group()
        .subgroup_classes()
        .reps()
        .map(|h: &Subgroup| gset.marks(h) as i64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Group;

    #[test]
    fn injections_compose() {
        let u = Injection::from_vec(vec![3, 0, 5]).unwrap();
        let v = Injection::from_vec(vec![1, 2, 0, 7, 9, 4]).unwrap();
        let vu = v.after(&u);
        for l in 0..40 {
            assert_eq!(vu.apply(l), v.apply(u.apply(l)), "{l}");
        }
        let images: BTreeSet<Label> = (0..60).map(|l| vu.apply(l)).collect();
        assert_eq!(images.len(), 60);
        assert!(Injection::from_vec(vec![1, 1]).is_err());
    }

    #[test]
    fn partial_injections_are_total() {
        let p = Injection::from_partial(&[(2, 10), (0, 4)]).unwrap();
        assert_eq!(p.apply(2), 10);
        assert_eq!(p.apply(0), 4);
        let images: BTreeSet<Label> = (0..30).map(|l| p.apply(l)).collect();
        assert_eq!(images.len(), 30);
    }

    #[test]
    fn window_sizes() {
        let e = Group::trivial();
        assert_eq!(UniversalSet::new(&e).window(3).len(), 3);
        let c2 = Group::named("C2").unwrap();
        assert_eq!(UniversalSet::new(&c2).window(1).len(), 3);
        let s3 = Group::named("S3").unwrap();
        let u = UniversalSet::new(&s3);
        assert_eq!(u.window(1).len(), 12);
        let x = u.gset_on(&u.window(2)).unwrap();
        // at least m free orbits
        assert_eq!(x.decompose().mult, vec![2, 2, 2, 2]);
    }

    #[test]
    fn embedding_is_equivariant() {
        let s3 = Group::named("S3").unwrap();
        let u = UniversalSet::new(&s3);
        let x = GSet::regular(&s3)
            .disjoint_union(&GSet::cosets(&s3, &s3.find_subgroup("C2").unwrap()))
            .unwrap()
            .disjoint_union(&GSet::trivial(&s3, 2))
            .unwrap();
        for choice in [EmbedChoice::Canonical, EmbedChoice::Alternative] {
            let (labels, used) = embed_kset(&u, &x, 1, choice);
            assert_eq!(used[3], 2);
            let distinct: BTreeSet<Label> = labels.iter().copied().collect();
            assert_eq!(distinct.len(), x.size());
            for g in 0..6 {
                for p in 0..x.size() {
                    assert_eq!(u.act(g, labels[p]), labels[x.act(g, p)]);
                }
            }
        }
    }
}
