//! Bisets, their balanced products, and classification into transitive
//! pieces `K ×_{L,α} G`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{homs, Group, GroupHom, GroupRef, Subgroup};
use crate::gsets::GSet;

/// A finite `K`-`G`-biset: left `K`-action and right `G`-action that commute.
#[derive(Clone, Debug)]
pub struct Biset {
    left_group: GroupRef,
    right_group: GroupRef,
    size: usize,
    /// `left[k * size + x] = k·x`
    left: Vec<usize>,
    /// `right[g * size + x] = x·g`
    right: Vec<usize>,
    right_free: bool,
}

impl Biset {
    /// Validated constructor from `left[k][x] = k·x` and `right[g][x] = x·g`.
    pub fn new(
        left_group: GroupRef,
        right_group: GroupRef,
        left: Vec<Vec<usize>>,
        right: Vec<Vec<usize>>,
    ) -> Result<Biset> {
        let lset = GSet::new(left_group.clone(), left)?;
        let size = lset.size();
        if right.len() != right_group.order() || right.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidAction(
                "right table has the wrong shape".into(),
            ));
        }
        let right: Vec<usize> = right.into_iter().flatten().collect();
        if right.iter().any(|&x| x >= size) {
            return Err(Error::InvalidAction("point out of range".into()));
        }
        let biset = Biset::from_raw(
            left_group,
            right_group,
            size,
            lset.table().into_iter().flatten().collect(),
            right,
        );
        biset.check()?;
        Ok(biset)
    }

    fn from_raw(
        left_group: GroupRef,
        right_group: GroupRef,
        size: usize,
        left: Vec<usize>,
        right: Vec<usize>,
    ) -> Biset {
        let mut b = Biset {
            left_group,
            right_group,
            size,
            left,
            right,
            right_free: false,
        };
        b.right_free =
            (0..size).all(|x| (1..b.right_group.order()).all(|g| b.act_right(x, g) != x));
        b
    }

    fn check(&self) -> Result<()> {
        let (k, g) = (&self.left_group, &self.right_group);
        for x in 0..self.size {
            if self.act_right(x, 0) != x {
                return Err(Error::InvalidAction(
                    "identity moves a point on the right".into(),
                ));
            }
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                for x in 0..self.size {
                    if self.act_right(x, g.mul(a, b)) != self.act_right(self.act_right(x, a), b) {
                        return Err(Error::InvalidAction(
                            "right action is not associative".into(),
                        ));
                    }
                }
            }
        }
        for a in 0..k.order() {
            for b in 0..g.order() {
                for x in 0..self.size {
                    if self.act_left(a, self.act_right(x, b))
                        != self.act_right(self.act_left(a, x), b)
                    {
                        return Err(Error::InvalidAction(
                            "left and right actions do not commute".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn left_group(&self) -> &GroupRef {
        &self.left_group
    }

    pub fn right_group(&self) -> &GroupRef {
        &self.right_group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_right_free(&self) -> bool {
        self.right_free
    }

    #[inline]
    pub fn act_left(&self, k: usize, x: usize) -> usize {
        self.left[k * self.size + x]
    }

    #[inline]
    pub fn act_right(&self, x: usize, g: usize) -> usize {
        self.right[g * self.size + x]
    }

    /// The underlying `(K × G)`-set with `(k, g)·x = k x g⁻¹`.
    pub fn as_gset(&self) -> Result<GSet> {
        let kg = Group::direct_product(&self.left_group, &self.right_group)?;
        let ng = self.right_group.order();
        let mut act = Vec::with_capacity(kg.order() * self.size);
        for e in 0..kg.order() {
            let (k, g) = (e / ng, e % ng);
            let ginv = self.right_group.inv(g);
            act.extend((0..self.size).map(|x| self.act_right(self.act_left(k, x), ginv)));
        }
        Ok(GSet::from_raw(kg, self.size, act))
    }

    /// Reads a `(K × G)`-set (with `(k, g)·x = k x g⁻¹`) as a biset.
    pub fn from_product_set(left_group: &GroupRef, right_group: &GroupRef, x: &GSet) -> Biset {
        let ng = right_group.order();
        let n = x.size();
        let mut left = Vec::with_capacity(left_group.order() * n);
        for k in 0..left_group.order() {
            left.extend((0..n).map(|p| x.act(k * ng, p)));
        }
        let mut right = Vec::with_capacity(ng * n);
        for g in 0..ng {
            let ginv = right_group.inv(g);
            right.extend((0..n).map(|p| x.act(ginv, p)));
        }
        Biset::from_raw(left_group.clone(), right_group.clone(), n, left, right)
    }

    /// `_G G_G`.
    pub fn identity(g: &GroupRef) -> Biset {
        Biset::restriction(&GroupHom::identity(g))
    }

    /// `_α G_G` for `α: K → G`: `G` with `K` acting on the left through `α`.
    /// As a morphism `G → K` it induces restriction along `α`.
    pub fn restriction(alpha: &GroupHom) -> Biset {
        let (k, g) = (&alpha.source, &alpha.target);
        let n = g.order();
        let mut left = Vec::with_capacity(k.order() * n);
        for a in 0..k.order() {
            left.extend((0..n).map(|x| g.mul(alpha.apply(a), x)));
        }
        let mut right = Vec::with_capacity(n * n);
        for b in 0..n {
            right.extend((0..n).map(|x| g.mul(x, b)));
        }
        Biset::from_raw(k.clone(), g.clone(), n, left, right)
    }

    /// `_G G_H` for `ι: H → G`: `G` with `H` acting on the right through `ι`.
    /// As a morphism `H → G` it induces transfer along `ι` (for injective `ι`).
    pub fn transfer(iota: &GroupHom) -> Biset {
        let (h, g) = (&iota.source, &iota.target);
        let n = g.order();
        let mut left = Vec::with_capacity(n * n);
        for a in 0..n {
            left.extend((0..n).map(|x| g.mul(a, x)));
        }
        let mut right = Vec::with_capacity(h.order() * n);
        for b in 0..h.order() {
            right.extend((0..n).map(|x| g.mul(x, iota.apply(b))));
        }
        Biset::from_raw(g.clone(), h.clone(), n, left, right)
    }

    /// `K ×_{L,α} G` for `L ≤ K` and `α: L → G` (source of `α` is `L` as an
    /// abstract group in the element order of `L`).
    pub fn transitive(k: &GroupRef, l: &Subgroup, alpha: &GroupHom) -> Result<Biset> {
        let g = &alpha.target;
        let kg = Group::direct_product(k, g)?;
        let ng = g.order();
        let graph: Vec<usize> = l
            .elements()
            .iter()
            .enumerate()
            .map(|(i, &x)| x * ng + alpha.apply(i))
            .collect();
        let d = kg.subgroup(&graph)?;
        Ok(Biset::from_product_set(k, g, &GSet::cosets(&kg, &d)))
    }

    /// A term of a canonical decomposition, realized as a transitive biset.
    pub fn from_term(k: &GroupRef, g: &GroupRef, term: &BisetTerm) -> Result<Biset> {
        let (l, alpha) = term.parts(k, g);
        Biset::transitive(k, &l, &alpha)
    }

    pub fn from_class(class: &BisetClass) -> Result<Biset> {
        let mut out = Biset::empty(&class.left, &class.right);
        for (term, &m) in &class.terms {
            let piece = Biset::from_term(&class.left, &class.right, term)?;
            for _ in 0..m {
                out = out.disjoint_union(&piece)?;
            }
        }
        Ok(out)
    }

    pub fn empty(k: &GroupRef, g: &GroupRef) -> Biset {
        Biset::from_raw(k.clone(), g.clone(), 0, Vec::new(), Vec::new())
    }

    pub fn disjoint_union(&self, other: &Biset) -> Result<Biset> {
        if self.left_group != other.left_group || self.right_group != other.right_group {
            return Err(Error::GroupMismatch(
                "disjoint union of bisets over different groups".into(),
            ));
        }
        let n = self.size + other.size;
        let mut left = Vec::with_capacity(self.left_group.order() * n);
        for k in 0..self.left_group.order() {
            left.extend((0..self.size).map(|x| self.act_left(k, x)));
            left.extend((0..other.size).map(|x| other.act_left(k, x) + self.size));
        }
        let mut right = Vec::with_capacity(self.right_group.order() * n);
        for g in 0..self.right_group.order() {
            right.extend((0..self.size).map(|x| self.act_right(x, g)));
            right.extend((0..other.size).map(|x| other.act_right(x, g) + self.size));
        }
        Ok(Biset::from_raw(
            self.left_group.clone(),
            self.right_group.clone(),
            n,
            left,
            right,
        ))
    }

    /// Classification into canonical transitive terms.
    pub fn classify(&self) -> Result<BisetClass> {
        if !self.right_free {
            return Err(Error::NotRightFree(format!(
                "{}-{} biset of size {}",
                self.left_group, self.right_group, self.size
            )));
        }
        let (k, g) = (&self.left_group, &self.right_group);
        let mut terms = BTreeMap::new();
        let mut seen = vec![false; self.size];
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let mut stack = vec![x];
            seen[x] = true;
            while let Some(y) = stack.pop() {
                let nexts = (0..k.order())
                    .map(|a| self.act_left(a, y))
                    .chain((0..g.order()).map(|b| self.act_right(y, b)));
                for z in nexts.collect::<Vec<_>>() {
                    if !seen[z] {
                        seen[z] = true;
                        stack.push(z);
                    }
                }
            }
            // stabilizer graph: l·x = x·α(l)
            let mut l_elems = Vec::new();
            let mut images = Vec::new();
            for a in 0..k.order() {
                let ax = self.act_left(a, x);
                if let Some(b) = (0..g.order()).find(|&b| self.act_right(x, b) == ax) {
                    l_elems.push(a);
                    images.push(b);
                }
            }
            let l = k.subgroup(&l_elems)?;
            let term = BisetTerm::canonical(k, g, &l, &images);
            *terms.entry(term).or_insert(0) += 1;
        }
        Ok(BisetClass {
            left: k.clone(),
            right: g.clone(),
            terms,
        })
    }
}

/// `T ×_K S` for an `L`-`K`-biset `T` and a `K`-`G`-biset `S`: the `K`-orbits
/// of `T × S` under `k·(t, s) = (t k⁻¹, k s)`. Right-freeness of the result
/// is recomputed, not assumed.
pub fn balanced_product(t: &Biset, s: &Biset) -> Result<Biset> {
    if t.right_group != s.left_group {
        return Err(Error::GroupMismatch(format!(
            "{} ×_{} vs {}",
            t.left_group, t.right_group, s.left_group
        )));
    }
    let k = &s.left_group;
    let (nt, ns) = (t.size, s.size);
    let idx = |a: usize, b: usize| a * ns + b;
    let mut label = vec![usize::MAX; nt * ns];
    let mut reps = Vec::new();
    for a in 0..nt {
        for b in 0..ns {
            if label[idx(a, b)] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push((a, b));
            for c in 0..k.order() {
                let ta = t.act_right(a, k.inv(c));
                let sb = s.act_left(c, b);
                label[idx(ta, sb)] = id;
            }
        }
    }
    let n = reps.len();
    let (lg, gg) = (&t.left_group, &s.right_group);
    let mut left = Vec::with_capacity(lg.order() * n);
    for l in 0..lg.order() {
        left.extend(reps.iter().map(|&(a, b)| label[idx(t.act_left(l, a), b)]));
    }
    let mut right = Vec::with_capacity(gg.order() * n);
    for g in 0..gg.order() {
        right.extend(reps.iter().map(|&(a, b)| label[idx(a, s.act_right(b, g))]));
    }
    Ok(Biset::from_raw(lg.clone(), gg.clone(), n, left, right))
}

/// A canonical transitive term `(L, α)`: `L` is the representative of its
/// subgroup class in `K` and `images` lists `α` on the elements of `L` in
/// increasing order, minimized over the joint conjugation action.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BisetTerm {
    pub class: usize,
    pub images: Vec<usize>,
}

impl BisetTerm {
    /// Canonicalizes an arbitrary graph subgroup `{(l, α(l))}` where `images`
    /// lists `α` on `l_sub` in increasing element order.
    pub fn canonical(k: &Group, g: &Group, l_sub: &Subgroup, images: &[usize]) -> BisetTerm {
        let classes = k.subgroup_classes();
        let class = classes.class_of_subgroup(l_sub);
        let rep = classes.rep(class);
        let alpha_at = |x: usize| images[l_sub.elements().binary_search(&x).expect("element of L")];
        let mut best: Option<Vec<usize>> = None;
        for c in k.transporter(l_sub, rep) {
            if k.conjugate(c, l_sub) != *rep {
                continue;
            }
            let cinv = k.inv(c);
            let base: Vec<usize> = rep
                .elements()
                .iter()
                .map(|&r| alpha_at(k.conj(cinv, r)))
                .collect();
            for h in 0..g.order() {
                let cand: Vec<usize> = base.iter().map(|&y| g.conj(h, y)).collect();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        BisetTerm {
            class,
            images: best.expect("L is conjugate to its representative"),
        }
    }

    /// The subgroup `L` and `α: L → G` with `L` as an abstract group.
    pub fn parts(&self, k: &GroupRef, g: &GroupRef) -> (Subgroup, GroupHom) {
        let l = k.subgroup_classes().rep(self.class).clone();
        let (lg, _) = k.subgroup_group(&l);
        let alpha = GroupHom {
            source: lg,
            target: g.clone(),
            image: self.images.clone(),
        };
        (l, alpha)
    }

    /// The word `tr_L^K ∘ α*` realizing this term.
    pub fn word(&self, k: &GroupRef, g: &GroupRef) -> TrResWord {
        let (l, alpha) = self.parts(k, g);
        TrResWord {
            ambient: k.clone(),
            subgroup: l,
            alpha,
        }
    }

    pub fn key(&self, k: &Group) -> String {
        format!(
            "{:?}->{:?}",
            k.subgroup_classes().rep(self.class).elements(),
            self.images
        )
    }
}

/// A two-step operation `tr_L^K ∘ α*` with `α: L → G`.
#[derive(Clone, Debug)]
pub struct TrResWord {
    pub ambient: GroupRef,
    pub subgroup: Subgroup,
    pub alpha: GroupHom,
}

impl TrResWord {
    /// The biset `_K K_L ×_L _α G_G` this word denotes.
    pub fn to_biset(&self) -> Result<Biset> {
        let (_, incl) = self.ambient.subgroup_group(&self.subgroup);
        balanced_product(&Biset::transfer(&incl), &Biset::restriction(&self.alpha))
    }
}

impl fmt::Display for TrResWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = self.ambient.subgroup_label(&self.subgroup);
        write!(
            f,
            "tr_{l}^{} ∘ res{:?}",
            self.ambient.name(),
            self.alpha.image
        )
    }
}

/// All canonical terms for morphisms `G → K`, sorted.
pub fn canonical_terms(k: &GroupRef, g: &GroupRef) -> Vec<BisetTerm> {
    let mut out = BTreeSet::new();
    for l in k.subgroup_classes().reps() {
        let (lg, _) = k.subgroup_group(l);
        for alpha in homs(&lg, g) {
            out.insert(BisetTerm::canonical(k, g, l, &alpha.image));
        }
    }
    out.into_iter().collect()
}

/// Number of conjugacy classes of subgroups `D ≤ K × G` meeting `1 × G`
/// trivially.
pub fn graph_subgroup_class_count(k: &GroupRef, g: &GroupRef) -> Result<usize> {
    let kg = Group::direct_product(k, g)?;
    let ng = g.order();
    Ok(kg
        .subgroup_classes()
        .reps()
        .filter(|d| d.elements().iter().all(|&x| x == 0 || x / ng != 0))
        .count())
}

/// Isomorphism class of a right-free biset as a multiset of canonical terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisetClass {
    pub left: GroupRef,
    pub right: GroupRef,
    pub terms: BTreeMap<BisetTerm, usize>,
}

impl BisetClass {
    pub fn zero(k: &GroupRef, g: &GroupRef) -> BisetClass {
        BisetClass {
            left: k.clone(),
            right: g.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn single(k: &GroupRef, g: &GroupRef, term: BisetTerm) -> BisetClass {
        let mut c = BisetClass::zero(k, g);
        c.terms.insert(term, 1);
        c
    }

    pub fn add(&self, other: &BisetClass) -> BisetClass {
        let mut out = self.clone();
        for (t, &m) in &other.terms {
            *out.terms.entry(t.clone()).or_insert(0) += m;
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: BTreeMap<String, usize> = self
            .terms
            .iter()
            .map(|(t, &m)| (t.key(&self.left), m))
            .collect();
        json!({
            "left": self.left.name(),
            "right": self.right.name(),
            "terms": terms,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> GroupRef {
        Group::named(name).unwrap()
    }

    #[test]
    fn identity_classifies_to_full_graph() {
        for name in ["C2", "S3", "D4"] {
            let grp = g(name);
            let c = Biset::identity(&grp).classify().unwrap();
            assert_eq!(c.terms.len(), 1);
            let (term, &m) = c.terms.iter().next().unwrap();
            assert_eq!(m, 1);
            assert_eq!(term.class, grp.subgroup_classes().len() - 1);
            assert_eq!(term.images, (0..grp.order()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn transfer_from_trivial_group() {
        let (c2, e) = (g("C2"), Group::trivial());
        let (_, incl) = c2.subgroup_group(&Subgroup::trivial());
        let incl = GroupHom::new(e.clone(), c2.clone(), incl.image).unwrap();
        let b = Biset::transfer(&incl);
        let c = b.classify().unwrap();
        assert_eq!(c.terms.len(), 1);
        let term = c.terms.keys().next().unwrap();
        assert_eq!(term.class, 0);
        let restr = Biset::restriction(&GroupHom::trivial(&c2, &e));
        assert!(restr.is_right_free());
        assert_eq!(restr.size(), 1);
    }

    #[test]
    fn non_free_rejected() {
        let (c2, e) = (g("C2"), Group::trivial());
        // e-C2 biset: a point with trivial right action
        let b = Biset::new(e, c2, vec![vec![0]], vec![vec![0], vec![0]]).unwrap();
        assert!(!b.is_right_free());
        assert!(matches!(b.classify(), Err(Error::NotRightFree(_))));
    }

    #[test]
    fn unit_laws() {
        let s3 = g("S3");
        let c2 = s3.find_subgroup("C2").unwrap();
        let (_, incl) = s3.subgroup_group(&c2);
        let t = Biset::transfer(&incl);
        let left = balanced_product(&Biset::identity(&s3), &t).unwrap();
        let right = balanced_product(&t, &Biset::identity(&incl.source)).unwrap();
        assert_eq!(left.classify().unwrap(), t.classify().unwrap());
        assert_eq!(right.classify().unwrap(), t.classify().unwrap());
        assert_eq!(left.size(), t.size());
    }

    #[test]
    fn ranks_match_graph_subgroups() {
        let names = ["e", "C2", "C3", "V4", "S3"];
        for a in names {
            for b in names {
                let (k, gg) = (g(a), g(b));
                assert_eq!(
                    canonical_terms(&k, &gg).len(),
                    graph_subgroup_class_count(&k, &gg).unwrap(),
                    "{a} {b}"
                );
            }
        }
        assert_eq!(canonical_terms(&g("C2"), &g("C2")).len(), 3);
        assert_eq!(canonical_terms(&Group::trivial(), &g("C2")).len(), 1);
    }

    #[test]
    fn transitive_roundtrip() {
        let (k, gg) = (g("S3"), g("C2"));
        for term in canonical_terms(&k, &gg) {
            let b = Biset::from_term(&k, &gg, &term).unwrap();
            assert!(b.is_right_free());
            let c = b.classify().unwrap();
            assert_eq!(c, BisetClass::single(&k, &gg, term.clone()));
            let w = term.word(&k, &gg).to_biset().unwrap();
            assert_eq!(w.classify().unwrap(), c);
        }
    }

    #[test]
    fn double_coset_expansion_s3() {
        let s3 = g("S3");
        let h = s3.find_subgroup("C2").unwrap();
        let (hg, incl) = s3.subgroup_group(&h);
        // res_{C2}^{S3} ∘ tr_{C2}^{S3}: an H-H biset
        let composite =
            balanced_product(&Biset::restriction(&incl), &Biset::transfer(&incl)).unwrap();
        let c = composite.classify().unwrap();
        // one term per double coset H g H
        let total: usize = c.terms.values().sum();
        assert_eq!(total, s3.double_cosets(&h, &h).len());
        assert_eq!(composite.size(), 6);
        assert_eq!(hg.order(), 2);
    }
}
