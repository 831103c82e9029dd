//! Finite G-sets as explicit action tables.

use std::collections::{BTreeMap, BTreeSet};

use ndarray::Array2;
use serde_json::{json, Value};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::groups::{Group, GroupHom, GroupRef, Subgroup};

/// A finite left G-set. `act[g * size + x]` is `g·x`.
#[derive(Clone, Debug)]
pub struct GSet {
    group: GroupRef,
    size: usize,
    act: Vec<usize>,
}

impl PartialEq for GSet {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size && self.act == other.act && self.group == other.group
    }
}

impl Eq for GSet {}

impl GSet {
    /// Validated constructor from `table[g][x] = g·x`.
    pub fn new(group: GroupRef, table: Vec<Vec<usize>>) -> Result<GSet> {
        if table.len() != group.order() {
            return Err(Error::InvalidAction(
                "one row per group element required".into(),
            ));
        }
        let size = table.first().map_or(0, Vec::len);
        let cap = Caps::global().points;
        if size > cap {
            return Err(Error::PointCapExceeded { size, cap });
        }
        if table.iter().any(|r| r.len() != size) {
            return Err(Error::InvalidAction("ragged table".into()));
        }
        let set = GSet {
            size,
            act: table.into_iter().flatten().collect(),
            group,
        };
        set.check()?;
        Ok(set)
    }

    pub(crate) fn from_raw(group: GroupRef, size: usize, act: Vec<usize>) -> GSet {
        debug_assert_eq!(act.len(), group.order() * size);
        GSet { group, size, act }
    }

    fn check(&self) -> Result<()> {
        let g = &self.group;
        if self.act.iter().any(|&y| y >= self.size) {
            return Err(Error::InvalidAction("point out of range".into()));
        }
        for x in 0..self.size {
            if self.act(0, x) != x {
                return Err(Error::InvalidAction("identity moves a point".into()));
            }
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                let ab = g.mul(a, b);
                for x in 0..self.size {
                    if self.act(ab, x) != self.act(a, self.act(b, x)) {
                        return Err(Error::InvalidAction(format!(
                            "(g{a} g{b})·{x} differs from g{a}·(g{b}·{x})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn empty(group: &GroupRef) -> GSet {
        GSet::from_raw(group.clone(), 0, Vec::new())
    }

    /// `n` points with trivial action.
    pub fn trivial(group: &GroupRef, n: usize) -> GSet {
        let act = (0..group.order()).flat_map(|_| 0..n).collect();
        GSet::from_raw(group.clone(), n, act)
    }

    /// `G/H` with cosets ordered by their least element.
    pub fn cosets(group: &GroupRef, h: &Subgroup) -> GSet {
        let (labels, coset_of) = left_cosets(group, h);
        let n = labels.len();
        let mut act = Vec::with_capacity(group.order() * n);
        for g in 0..group.order() {
            for &r in &labels {
                act.push(coset_of[group.mul(g, r)]);
            }
        }
        GSet::from_raw(group.clone(), n, act)
    }

    pub fn regular(group: &GroupRef) -> GSet {
        GSet::cosets(group, &Subgroup::trivial())
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.act[g * self.size + x]
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        if self.size == 0 {
            return vec![Vec::new(); self.group.order()];
        }
        self.act.chunks(self.size).map(<[usize]>::to_vec).collect()
    }

    pub fn disjoint_union(&self, other: &GSet) -> Result<GSet> {
        same_group(&self.group, &other.group)?;
        let n = self.size + other.size;
        let mut act = Vec::with_capacity(self.group.order() * n);
        for g in 0..self.group.order() {
            act.extend((0..self.size).map(|x| self.act(g, x)));
            act.extend((0..other.size).map(|x| other.act(g, x) + self.size));
        }
        Ok(GSet::from_raw(self.group.clone(), n, act))
    }

    /// Cartesian product with point `(x, y)` at `x * |Y| + y`.
    pub fn product(&self, other: &GSet) -> Result<GSet> {
        same_group(&self.group, &other.group)?;
        let n = self.size * other.size;
        let mut act = Vec::with_capacity(self.group.order() * n);
        for g in 0..self.group.order() {
            for x in 0..self.size {
                for y in 0..other.size {
                    act.push(self.act(g, x) * other.size + other.act(g, y));
                }
            }
        }
        Ok(GSet::from_raw(self.group.clone(), n, act))
    }

    /// Transports the action along the bijection `x ↦ perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> GSet {
        let mut inv = vec![0; self.size];
        for (x, &p) in perm.iter().enumerate() {
            inv[p] = x;
        }
        let mut act = Vec::with_capacity(self.act.len());
        for g in 0..self.group.order() {
            for p in 0..self.size {
                act.push(perm[self.act(g, inv[p])]);
            }
        }
        GSet::from_raw(self.group.clone(), self.size, act)
    }

    pub fn orbit(&self, x: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = (0..self.group.order()).map(|g| self.act(g, x)).collect();
        set.into_iter().collect()
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        let elems: Vec<usize> = (0..self.group.order())
            .filter(|&g| self.act(g, x) == x)
            .collect();
        self.group
            .subgroup(&elems)
            .expect("stabilizers are subgroups")
    }

    /// Orbits ordered by least point, each with the stabilizer of that point.
    pub fn orbits_and_stabilizers(&self) -> Vec<(Vec<usize>, Subgroup)> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let orbit = self.orbit(x);
            for &y in &orbit {
                seen[y] = true;
            }
            out.push((orbit, self.stabilizer(x)));
        }
        out
    }

    pub fn decompose(&self) -> GSetClass {
        let classes = self.group.subgroup_classes();
        let mut mult = vec![0; classes.len()];
        for (_, stab) in self.orbits_and_stabilizers() {
            mult[classes.class_of_subgroup(&stab)] += 1;
        }
        GSetClass {
            group: self.group.clone(),
            mult,
        }
    }

    pub fn is_isomorphic(&self, other: &GSet) -> bool {
        self.group == other.group && self.decompose() == other.decompose()
    }

    /// `|X^H|`.
    pub fn marks(&self, h: &Subgroup) -> usize {
        (0..self.size)
            .filter(|&x| h.elements().iter().all(|&g| self.act(g, x) == x))
            .count()
    }

    /// Restriction along `α: K → G`.
    pub fn restrict_along(&self, alpha: &GroupHom) -> Result<GSet> {
        same_group(&alpha.target, &self.group)?;
        let mut act = Vec::with_capacity(alpha.source.order() * self.size);
        for k in 0..alpha.source.order() {
            let g = alpha.apply(k);
            act.extend((0..self.size).map(|x| self.act(g, x)));
        }
        Ok(GSet::from_raw(alpha.source.clone(), self.size, act))
    }

    /// Restriction to a subgroup, returned over the subgroup as an abstract group.
    pub fn restrict_to(&self, h: &Subgroup) -> GSet {
        let (_, incl) = self.group.subgroup_group(h);
        self.restrict_along(&incl)
            .expect("inclusion lands in the group")
    }

    /// Points whose stabilizer lies in the given class, as a sub-G-set, with
    /// the original index of each retained point.
    pub fn isotypical_part(&self, class: usize) -> (GSet, Vec<usize>) {
        let classes = self.group.subgroup_classes();
        let keep: Vec<usize> = (0..self.size)
            .filter(|&x| classes.class_of_subgroup(&self.stabilizer(x)) == class)
            .collect();
        (self.subset(&keep), keep)
    }

    /// Restricts the action to an invariant subset, renumbering in order.
    pub fn subset(&self, keep: &[usize]) -> GSet {
        let mut pos = vec![usize::MAX; self.size];
        for (i, &x) in keep.iter().enumerate() {
            pos[x] = i;
        }
        let mut act = Vec::with_capacity(self.group.order() * keep.len());
        for g in 0..self.group.order() {
            act.extend(keep.iter().map(|&x| pos[self.act(g, x)]));
        }
        GSet::from_raw(self.group.clone(), keep.len(), act)
    }
}

fn same_group(a: &Group, b: &Group) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GroupMismatch(format!("{a} vs {b}")))
    }
}

/// Left cosets `gH` labelled by their least element, and the coset index of
/// every group element.
pub fn left_cosets(group: &Group, h: &Subgroup) -> (Vec<usize>, Vec<usize>) {
    let mut coset_of = vec![usize::MAX; group.order()];
    let mut labels = Vec::new();
    for g in 0..group.order() {
        if coset_of[g] != usize::MAX {
            continue;
        }
        for &x in h.elements() {
            coset_of[group.mul(g, x)] = labels.len();
        }
        labels.push(g);
    }
    (labels, coset_of)
}

/// Induction `G ×_H Y` along an injective homomorphism `ι: H → G`.
///
/// Points are `(r, y)` with `r` running over the least elements of the left
/// cosets of `ι(H)`, stored at `r_index * |Y| + y`.
pub fn induce_along(incl: &GroupHom, y: &GSet) -> Result<GSet> {
    same_group(&incl.source, y.group())?;
    if !incl.is_injective() {
        return Err(Error::Invalid(
            "induction needs an injective homomorphism".into(),
        ));
    }
    let g = &incl.target;
    let image = incl.image_subgroup();
    let mut pre = vec![usize::MAX; g.order()];
    for (h, &x) in incl.image.iter().enumerate() {
        pre[x] = h;
    }
    let (reps, coset_of) = left_cosets(g, &image);
    let ny = y.size();
    let n = reps.len() * ny;
    let mut act = Vec::with_capacity(g.order() * n);
    for a in 0..g.order() {
        for &r in &reps {
            let ar = g.mul(a, r);
            let j = coset_of[ar];
            let h = g.mul(g.inv(reps[j]), ar);
            for p in 0..ny {
                act.push(j * ny + y.act(pre[h], p));
            }
        }
    }
    Ok(GSet::from_raw(g.clone(), n, act))
}

/// Induction from a subgroup; `y` lives over the subgroup as an abstract group.
pub fn induce(group: &GroupRef, h: &Subgroup, y: &GSet) -> Result<GSet> {
    let (_, incl) = group.subgroup_group(h);
    induce_along(&incl, y)
}

/// Rows `G/K`, columns `(H)`, entries `|(G/K)^H|`, both in class order.
pub fn table_of_marks(group: &GroupRef) -> Array2<i64> {
    let classes = group.subgroup_classes();
    let n = classes.len();
    let mut table = Array2::zeros((n, n));
    for (i, k) in classes.reps().enumerate() {
        let gk = GSet::cosets(group, k);
        for (j, h) in classes.reps().enumerate() {
            table[[i, j]] = gk.marks(h) as i64;
        }
    }
    table
}

/// Isomorphism class of a G-set: orbit counts per subgroup class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSetClass {
    pub group: GroupRef,
    /// Indexed by subgroup class id.
    pub mult: Vec<usize>,
}

impl GSetClass {
    pub fn zero(group: &GroupRef) -> GSetClass {
        GSetClass {
            group: group.clone(),
            mult: vec![0; group.subgroup_classes().len()],
        }
    }

    pub fn unit(group: &GroupRef, class: usize) -> GSetClass {
        let mut c = GSetClass::zero(group);
        c.mult[class] += 1;
        c
    }

    pub fn add(&self, other: &GSetClass) -> GSetClass {
        GSetClass {
            group: self.group.clone(),
            mult: self
                .mult
                .iter()
                .zip(&other.mult)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.mult.iter().all(|&m| m == 0)
    }

    /// A G-set in the class: the transitive pieces in class order.
    pub fn realize(&self) -> GSet {
        let classes = self.group.subgroup_classes();
        let mut out = GSet::empty(&self.group);
        for (c, &m) in self.mult.iter().enumerate() {
            let piece = GSet::cosets(&self.group, classes.rep(c));
            for _ in 0..m {
                out = out.disjoint_union(&piece).expect("same group");
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let classes = self.group.subgroup_classes();
        let mult: BTreeMap<String, usize> = self
            .mult
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(c, &m)| (format!("{:?}", classes.rep(c).elements()), m))
            .collect();
        json!({ "group": self.group.name(), "multiplicities": mult })
    }

    pub fn from_json(group: &GroupRef, value: &Value) -> Result<GSetClass> {
        let classes = group.subgroup_classes();
        let mut out = GSetClass::zero(group);
        let mults = value
            .get("multiplicities")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("missing multiplicities".into()))?;
        for (key, m) in mults {
            let elems: Vec<usize> = serde_json::from_str(key)?;
            let h = group.subgroup(&elems)?;
            let m = m
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("multiplicity of {key}")))?;
            out.mult[classes.class_of_subgroup(&h)] += m as usize;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> GroupRef {
        Group::named(name).unwrap()
    }

    fn natural_s3() -> GSet {
        let s3 = Group::from_permutations("S3", &[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        let perms: Vec<Vec<usize>> = {
            // elements in lexicographic order, as in the constructor
            let mut v = vec![
                vec![0, 1, 2],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![2, 1, 0],
            ];
            v.sort();
            v
        };
        GSet::new(s3, perms).unwrap()
    }

    #[test]
    fn orbit_basics() {
        let c2 = g("C2");
        assert!(GSet::empty(&c2).orbits_and_stabilizers().is_empty());
        let reg = GSet::regular(&c2);
        let orbits = reg.orbits_and_stabilizers();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].1, Subgroup::trivial());
        let x = natural_s3();
        let orbits = x.orbits_and_stabilizers();
        assert_eq!(orbits.len(), 1);
        assert_eq!(orbits[0].1.order(), 2);
    }

    #[test]
    fn decompose_examples() {
        let c2 = g("C2");
        let three = GSet::new(c2.clone(), vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        assert_eq!(three.decompose().mult, vec![1, 1]);
        let doubled = three.disjoint_union(&three).unwrap();
        assert_eq!(doubled.decompose().mult, vec![2, 2]);
        let s3 = g("S3");
        let classes = s3.subgroup_classes();
        for (c, h) in classes.reps().enumerate() {
            assert_eq!(GSet::cosets(&s3, h).decompose(), GSetClass::unit(&s3, c));
        }
    }

    #[test]
    fn marks_table_c2() {
        let c2 = g("C2");
        let t = table_of_marks(&c2);
        assert_eq!(t, ndarray::arr2(&[[2, 0], [1, 1]]));
        for grp in ["S3", "D4", "A4"] {
            let grp = g(grp);
            let t = table_of_marks(&grp);
            let n = t.nrows();
            assert_eq!(t[[n - 1, 0]], 1);
            assert_eq!(t[[0, 0]], grp.order() as i64);
            // lower triangular in class order (classes sorted by order)
            for i in 0..n {
                assert!(t[[i, i]] > 0);
                for j in i + 1..n {
                    assert_eq!(t[[i, j]], 0);
                }
            }
        }
    }

    #[test]
    fn induce_and_restrict() {
        let c2 = g("C2");
        let (_, incl) = c2.subgroup_group(&Subgroup::trivial());
        let pt = GSet::trivial(&incl.source, 1);
        let free = induce_along(&incl, &pt).unwrap();
        assert_eq!(free.decompose(), GSet::regular(&c2).decompose());
        let x = GSet::regular(&c2);
        assert_eq!(x.restrict_along(&GroupHom::identity(&c2)).unwrap(), x);

        let s3 = g("S3");
        let h = s3.find_subgroup("C2").unwrap();
        let (hg, incl) = s3.subgroup_group(&h);
        let induced = induce_along(&incl, &GSet::trivial(&hg, 1)).unwrap();
        assert_eq!(induced.size(), 3);
        let back = induced.restrict_along(&incl).unwrap();
        assert_eq!(back.decompose().mult, vec![1, 1]);
    }

    #[test]
    fn induce_of_cosets_is_cosets() {
        let s4 = g("S4");
        let classes = s4.subgroup_classes();
        for h in classes.reps() {
            let (hg, incl) = s4.subgroup_group(h);
            for l in hg.all_subgroups() {
                let lifted = incl.map_subgroup(&l);
                let left = induce_along(&incl, &GSet::cosets(&hg, &l)).unwrap();
                assert_eq!(left.decompose(), GSet::cosets(&s4, &lifted).decompose());
            }
        }
    }

    #[test]
    fn isotypical_split() {
        let c2 = g("C2");
        let x = GSet::regular(&c2)
            .disjoint_union(&GSet::trivial(&c2, 1))
            .unwrap();
        assert_eq!(x.isotypical_part(0).0.size(), 2);
        assert_eq!(x.isotypical_part(1).0.size(), 1);
        let e = GSet::empty(&c2);
        assert_eq!(e.isotypical_part(0).0.size(), 0);
    }

    #[test]
    fn json_roundtrip() {
        let s3 = g("S3");
        let x = GSet::regular(&s3)
            .disjoint_union(&GSet::trivial(&s3, 2))
            .unwrap();
        let c = x.decompose();
        let back = GSetClass::from_json(&s3, &c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn invalid_actions_rejected() {
        let c2 = g("C2");
        assert!(GSet::new(c2.clone(), vec![vec![1, 0], vec![1, 0]]).is_err());
        assert!(GSet::new(c2, vec![vec![0, 1]]).is_err());
    }
}
