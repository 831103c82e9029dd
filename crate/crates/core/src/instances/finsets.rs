//! Finite subsets of the labels with bijections; the sum is the union.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::parsummable::{Injection, Label, MCategory, Parsummable, UniversalSet};

use super::{all_subsets, describe_labels, merge_disjoint, position};

/// A bijection `src → tgt`; `map[i]` is the index in `tgt` of the image of
/// `src[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bijection {
    pub src: Vec<Label>,
    pub tgt: Vec<Label>,
    pub map: Vec<usize>,
}

impl Bijection {
    pub fn identity(x: &[Label]) -> Bijection {
        Bijection {
            src: x.to_vec(),
            tgt: x.to_vec(),
            map: (0..x.len()).collect(),
        }
    }

    pub fn apply(&self, l: Label) -> Option<Label> {
        position(&self.src, l).map(|i| self.tgt[self.map[i]])
    }

    pub fn compose(&self, first: &Bijection) -> Bijection {
        Bijection {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            map: first.map.iter().map(|&i| self.map[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Bijection {
        let mut map = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            map[j] = i;
        }
        Bijection {
            src: self.tgt.clone(),
            tgt: self.src.clone(),
            map,
        }
    }

    /// `u_∘^x` for a label set.
    pub fn transport(u: &Injection, x: &[Label]) -> Bijection {
        let tgt = u.apply_set(x);
        let map = x
            .iter()
            .map(|&l| position(&tgt, u.apply(l)).expect("image label"))
            .collect();
        Bijection {
            src: x.to_vec(),
            tgt,
            map,
        }
    }

    /// Disjoint union of bijections on disjoint label sets.
    pub fn sum(&self, other: &Bijection) -> Result<Bijection> {
        let src = merge_disjoint(&self.src, &other.src)?;
        let tgt = merge_disjoint(&self.tgt, &other.tgt)?;
        let map = src
            .iter()
            .map(|&l| {
                let image = self
                    .apply(l)
                    .or_else(|| other.apply(l))
                    .expect("label of a summand");
                position(&tgt, image).expect("image label")
            })
            .collect();
        Ok(Bijection { src, tgt, map })
    }

    /// Every bijection between two label sets.
    pub fn all(src: &[Label], tgt: &[Label]) -> Vec<Bijection> {
        if src.len() != tgt.len() {
            return Vec::new();
        }
        permutations(src.len())
            .into_iter()
            .map(|map| Bijection {
                src: src.to_vec(),
                tgt: tgt.to_vec(),
                map,
            })
            .collect()
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n)
            .rev()
            .find(|&j| p[j] > p[i - 1])
            .expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// The parsummable category of finite sets.
#[derive(Clone, Debug, Default)]
pub struct FinSets;

impl MCategory for FinSets {
    type Obj = Vec<Label>;
    type Mor = Bijection;

    fn name(&self) -> String {
        "FinSets".into()
    }

    fn objects_on(&self, labels: &[Label], bound: usize) -> Vec<Vec<Label>> {
        all_subsets(labels, bound)
    }

    fn size(&self, x: &Vec<Label>) -> usize {
        x.len()
    }

    fn support(&self, x: &Vec<Label>) -> Vec<Label> {
        x.clone()
    }

    fn source(&self, f: &Bijection) -> Vec<Label> {
        f.src.clone()
    }

    fn target(&self, f: &Bijection) -> Vec<Label> {
        f.tgt.clone()
    }

    fn identity(&self, x: &Vec<Label>) -> Bijection {
        Bijection::identity(x)
    }

    fn compose(&self, g: &Bijection, f: &Bijection) -> Bijection {
        g.compose(f)
    }

    fn inverse(&self, f: &Bijection) -> Option<Bijection> {
        Some(f.inverse())
    }

    fn hom_set(&self, x: &Vec<Label>, y: &Vec<Label>) -> Vec<Bijection> {
        Bijection::all(x, y)
    }

    fn act_obj(&self, u: &Injection, x: &Vec<Label>) -> Vec<Label> {
        u.apply_set(x)
    }

    fn transport(&self, u: &Injection, x: &Vec<Label>) -> Bijection {
        Bijection::transport(u, x)
    }

    fn describe(&self, x: &Vec<Label>) -> String {
        describe_labels(x)
    }
}

impl Parsummable for FinSets {
    fn zero(&self) -> Vec<Label> {
        Vec::new()
    }

    fn sum(&self, x: &Vec<Label>, y: &Vec<Label>) -> Result<Vec<Label>> {
        merge_disjoint(x, y)
    }

    fn sum_mor(&self, f: &Bijection, g: &Bijection) -> Result<Bijection> {
        f.sum(g)
    }

    /// Unions of whole orbit copies: every multiplicity vector that fits.
    fn fixed_candidates(
        &self,
        u: &UniversalSet,
        m: usize,
        bound: usize,
    ) -> Result<Vec<Vec<Label>>> {
        let classes = u.group().subgroup_classes();
        let sizes: Vec<usize> = (0..classes.len()).map(|c| u.class_size(c)).collect();
        let mut out = Vec::new();
        for mult in multiplicity_vectors(&sizes, m, bound) {
            let mut x = Vec::new();
            for (c, &n) in mult.iter().enumerate() {
                for block in 0..n {
                    x.extend((0..sizes[c]).map(|i| u.copy_label(c, block, i)));
                }
            }
            x.sort_unstable();
            out.push(x);
        }
        Ok(out)
    }

    fn fixed_isomorphic(&self, u: &UniversalSet, x: &Vec<Label>, y: &Vec<Label>) -> Result<bool> {
        if x.len() != y.len() {
            return Ok(false);
        }
        Ok(u.gset_on(x)?.decompose() == u.gset_on(y)?.decompose())
    }

    fn fixed_signature(&self, u: &UniversalSet, x: &Vec<Label>) -> Vec<i64> {
        u.gset_on(x)
            .map(|s| crate::parsummable::marks_signature(&s))
            .unwrap_or_default()
    }

    fn object_representatives(&self, bound: usize) -> Vec<Vec<Label>> {
        (0..=bound as Label).map(|n| (0..n).collect()).collect()
    }

    fn atom_label(&self, u: &UniversalSet, x: &Vec<Label>) -> String {
        orbit_type_label(u, x)
    }
}

/// `G/H` for a transitive invariant label set, otherwise the orbit types.
pub(crate) fn orbit_type_label(u: &UniversalSet, x: &[Label]) -> String {
    let g = u.group();
    match u.gset_on(x) {
        Ok(s) => {
            let parts: Vec<String> = s
                .orbits_and_stabilizers()
                .iter()
                .map(|(_, h)| format!("{}/{}", g.name(), g.subgroup_label(h)))
                .collect();
            parts.join("+")
        }
        Err(_) => describe_labels(x),
    }
}

/// Vectors `n` with `n_c ≤ m` and `Σ n_c sizes_c ≤ bound`.
pub(crate) fn multiplicity_vectors(sizes: &[usize], m: usize, bound: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &s in sizes {
        let mut next = Vec::new();
        for v in out {
            let used: usize = v.iter().zip(sizes).map(|(n, s)| n * s).sum();
            let mut n = 0;
            while n <= m && used + n * s <= bound {
                let mut w = v.clone();
                w.push(n);
                next.push(w);
                if s == 0 {
                    break;
                }
                n += 1;
            }
        }
        out = next;
    }
    out
}

/// Whether `x` is a disjoint union of orbits of `group` on the universal set.
pub fn is_invariant(u: &UniversalSet, x: &[Label]) -> bool {
    let set: BTreeSet<&Label> = x.iter().collect();
    (0..u.group().order()).all(|g| x.iter().all(|&l| set.contains(&u.act(g, l))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Group;
    use crate::parsummable::{verify_mcat_axioms, Pi0Monoid};

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(0).len(), 1);
    }

    #[test]
    fn axioms_on_five_labels() {
        let labels: Vec<Label> = (0..5).collect();
        let r = verify_mcat_axioms(&FinSets, &labels, 5, 40, 7);
        assert!(r.all_passed(), "{:?}", r.failures());
    }

    #[test]
    fn pi0_trivial_group_is_naturals() {
        let e = Group::trivial();
        let p = Pi0Monoid::compute(&FinSets, &e, 3, 3).unwrap();
        assert_eq!(p.rank(), 1);
        assert_eq!(p.classes().len(), 4);
    }

    #[test]
    fn pi0_c2_atoms() {
        let c2 = Group::named("C2").unwrap();
        let p = Pi0Monoid::compute(&FinSets, &c2, 2, 2).unwrap();
        assert_eq!(p.rank(), 2);
        let mut labels = p.atom_labels().to_vec();
        labels.sort();
        assert_eq!(labels, vec!["C2/C2", "C2/e"]);
    }

    #[test]
    fn fixed_subsets_of_one_block() {
        let c2 = Group::named("C2").unwrap();
        let u = UniversalSet::new(&c2);
        let fixed: Vec<_> = FinSets
            .objects_on(&u.window(1), 3)
            .into_iter()
            .filter(|x| u.is_fixed(&FinSets, x))
            .collect();
        assert_eq!(fixed.len(), 4);
    }
}
