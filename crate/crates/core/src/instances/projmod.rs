//! Finite-dimensional subspaces of the free `F_q`-vector space on the labels,
//! with linear maps. Injections permute coordinates; the sum is the internal
//! direct sum of disjointly supported subspaces. Fixed objects are invariant
//! subspaces, so their isomorphism classes are `F_q G`-modules.

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::groups::{Group, GroupRef};
use crate::parsummable::{Injection, Label, MCategory, Parsummable, UniversalSet};

use super::linalg::{extend_rep, Field, Matrix, Vector};
use super::{merge_disjoint, position};

/// A subspace in reduced row echelon form over its support.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subspace {
    /// Exactly the labels on which some basis vector is nonzero.
    pub labels: Vec<Label>,
    pub basis: Matrix,
}

impl Subspace {
    pub fn zero() -> Subspace {
        Subspace {
            labels: Vec::new(),
            basis: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The span of `rows` (vectors over `labels`), normalized.
    pub fn span(field: &Field, labels: &[Label], rows: Matrix) -> Subspace {
        let (rows, _) = field.rref(rows);
        let keep: Vec<usize> = (0..labels.len())
            .filter(|&c| rows.iter().any(|r| r[c] != 0))
            .collect();
        Subspace {
            labels: keep.iter().map(|&c| labels[c]).collect(),
            basis: rows
                .iter()
                .map(|r| keep.iter().map(|&c| r[c]).collect())
                .collect(),
        }
    }

    fn pivots(&self) -> Vec<usize> {
        self.basis
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("nonzero row"))
            .collect()
    }

    /// Coordinates of a vector of the subspace (given over `labels`).
    pub fn coords(&self, v: &[u8]) -> Vector {
        self.pivots().into_iter().map(|p| v[p]).collect()
    }

    /// The vector with the given coordinates, over `labels`.
    pub fn vector(&self, field: &Field, coords: &[u8]) -> Vector {
        field.combine(coords, &self.basis, self.labels.len())
    }
}

/// A linear map; `mat` is `dim tgt × dim src` in the echelon bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMor {
    pub src: Subspace,
    pub tgt: Subspace,
    pub mat: Matrix,
}

/// A module given by the matrices of the group generators, acting on
/// column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Module {
    pub field: u8,
    pub group: String,
    pub generators: Vec<Matrix>,
    /// Needed only when the group has no generators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
}

impl Module {
    pub fn from_json(text: &str) -> Result<Module> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn dim(&self) -> usize {
        self.generators
            .first()
            .map_or(self.dim.unwrap_or(0), Vec::len)
    }

    /// Field, group and the matrix of every group element.
    pub fn representation(&self) -> Result<(Field, GroupRef, Vec<Matrix>)> {
        let field = Field::new(self.field)?;
        let group = Group::named(&self.group)?;
        let gens = group.generators();
        let d = self.dim();
        if self.generators.len() != gens.len() {
            return Err(Error::Invalid(format!(
                "{} has {} generators, {} matrices given",
                group.name(),
                gens.len(),
                self.generators.len()
            )));
        }
        if self.dim.is_some_and(|n| n != d) {
            return Err(Error::Invalid(format!(
                "declared dimension {:?} but matrices of size {d}",
                self.dim
            )));
        }
        let square = self.generators.iter().all(|m| {
            m.len() == d
                && m.iter()
                    .all(|r| r.len() == d && r.iter().all(|&x| x < self.field))
        });
        if !square {
            return Err(Error::Invalid(
                "generator matrices must be square with entries in F_q".into(),
            ));
        }
        let rho = extend_rep(&field, &group, &gens, &self.generators, d)
            .ok_or_else(|| Error::Invalid("matrices violate the group relations".into()))?;
        Ok((field, group, rho))
    }
}

fn check_dim(d: usize) -> Result<()> {
    let cap = Caps::global().dim;
    if d > cap {
        return Err(Error::DimCapExceeded { dim: d, cap });
    }
    Ok(())
}

/// Whether two matrix-presented modules are isomorphic.
pub fn module_iso_test(a: &Module, b: &Module) -> Result<bool> {
    check_dim(a.dim())?;
    check_dim(b.dim())?;
    let (fa, ga, ra) = a.representation()?;
    let (fb, gb, rb) = b.representation()?;
    if fa != fb || ga.name() != gb.name() {
        return Err(Error::GroupMismatch(format!(
            "F_{} {} vs F_{} {}",
            a.field, a.group, b.field, b.group
        )));
    }
    Ok(a.dim() == b.dim() && reps_isomorphic(&fa, &ra, &rb))
}

fn fixed_dim(field: &Field, rho: &[Matrix], elements: &[usize]) -> usize {
    let d = rho.first().map_or(0, Vec::len);
    let mut rows = Vec::new();
    for &g in elements {
        for (i, row) in rho[g].iter().enumerate() {
            rows.push(
                row.iter()
                    .enumerate()
                    .map(|(j, &x)| field.sub(x, u8::from(i == j)))
                    .collect(),
            );
        }
    }
    if rows.is_empty() {
        return d;
    }
    d - field.rank(&rows)
}

/// Isomorphism of representations given on every element: rank pruning,
/// then a search for an invertible element of the intertwiner space.
pub(crate) fn reps_isomorphic(field: &Field, a: &[Matrix], b: &[Matrix]) -> bool {
    let d = a.first().map_or(0, Vec::len);
    if d != b.first().map_or(0, Vec::len) || a.len() != b.len() {
        return false;
    }
    if (0..a.len()).any(|g| fixed_dim(field, a, &[g]) != fixed_dim(field, b, &[g])) {
        return false;
    }
    // X a(g) = b(g) X, unknown X[r][k] at index r*d + k
    let mut eqs: Matrix = Vec::new();
    for (ag, bg) in a.iter().zip(b) {
        for r in 0..d {
            for c in 0..d {
                let mut row = vec![0u8; d * d];
                for k in 0..d {
                    row[r * d + k] = field.add(row[r * d + k], ag[k][c]);
                    row[k * d + c] = field.sub(row[k * d + c], bg[r][k]);
                }
                eqs.push(row);
            }
        }
    }
    let basis = field.nullspace(&eqs, d * d);
    field.all_vectors(basis.len()).into_iter().any(|coeffs| {
        let x = field.combine(&coeffs, &basis, d * d);
        let m: Matrix = x.chunks(d.max(1)).map(<[u8]>::to_vec).collect();
        d == 0 || field.rank(&m) == d
    })
}

/// Representations of `group` of dimension `d`, one per isomorphism class.
pub fn module_structures(field: &Field, group: &Group, d: usize) -> Result<Vec<Vec<Matrix>>> {
    check_dim(d)?;
    let gens = group.generators();
    let gl = field.general_linear(d);
    let mut out: Vec<Vec<Matrix>> = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<Matrix> = choice.iter().map(|&c| gl[c].clone()).collect();
        if let Some(rho) = extend_rep(field, group, &gens, &images, d) {
            if !out.iter().any(|r| reps_isomorphic(field, r, &rho)) {
                out.push(rho);
            }
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(out);
            }
            choice[i] += 1;
            if choice[i] < gl.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Splittable subspaces of `F_q{ω}`; over a field every subspace splits.
#[derive(Clone, Debug)]
pub struct ProjModules {
    field: Field,
}

impl ProjModules {
    pub fn new(q: u8) -> Result<ProjModules> {
        Ok(ProjModules {
            field: Field::new(q)?,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The module structure `g ↦ (l^g)_∘` of a fixed subspace.
    pub fn module_of(&self, u: &UniversalSet, x: &Subspace) -> Vec<Matrix> {
        (0..u.group().order())
            .map(|g| u.transport(self, g, x).mat)
            .collect()
    }

    /// The same module as a [`Module`].
    pub fn to_module(&self, u: &UniversalSet, x: &Subspace) -> Module {
        let rho = self.module_of(u, x);
        Module {
            field: self.field.order(),
            group: u.group().name().to_string(),
            generators: u
                .group()
                .generators()
                .into_iter()
                .map(|g| rho[g].clone())
                .collect(),
            dim: Some(x.dim()),
        }
    }

    /// Embeds a representation into `d` free orbits starting at `block`:
    /// `m ↦ Σ_g (ρ(g⁻¹) m)_j · e_{(g, j)}`.
    pub fn embed(&self, u: &UniversalSet, rho: &[Matrix], block: usize) -> Subspace {
        let g = u.group();
        let d = rho.first().map_or(0, Vec::len);
        let free = g
            .subgroup_classes()
            .class_of_subgroup(&crate::groups::Subgroup::trivial());
        let mut labels = Vec::with_capacity(g.order() * d);
        for j in 0..d {
            for e in 0..g.order() {
                labels.push(u.coset_label(free, block + j, e));
            }
        }
        labels.sort_unstable();
        let rows: Matrix = (0..d)
            .map(|i| {
                let mut v = vec![0u8; labels.len()];
                for e in 0..g.order() {
                    for (j, row) in rho[g.inv(e)].iter().enumerate() {
                        let l = u.coset_label(free, block + j, e);
                        v[position(&labels, l).expect("own label")] = row[i];
                    }
                }
                v
            })
            .collect();
        Subspace::span(&self.field, &labels, rows)
    }

    fn relabel(&self, u: &Injection, x: &Subspace) -> LinMor {
        let mut labels = u.apply_set(&x.labels);
        labels.sort_unstable();
        let cols: Vec<usize> = x
            .labels
            .iter()
            .map(|&l| position(&labels, u.apply(l)).expect("image label"))
            .collect();
        let moved: Matrix = x
            .basis
            .iter()
            .map(|r| {
                let mut v = vec![0u8; labels.len()];
                for (&c, &a) in cols.iter().zip(r) {
                    v[c] = a;
                }
                v
            })
            .collect();
        let tgt = Subspace::span(&self.field, &labels, moved.clone());
        let images: Vec<Vector> = moved.iter().map(|v| tgt.coords(v)).collect();
        let mat = (0..tgt.dim())
            .map(|r| images.iter().map(|c| c[r]).collect())
            .collect();
        LinMor {
            src: x.clone(),
            tgt,
            mat,
        }
    }

    /// `v` (over `from`) written over the larger label list `to`.
    fn widen(v: &[u8], from: &[Label], to: &[Label]) -> Vector {
        let mut out = vec![0u8; to.len()];
        for (&l, &a) in from.iter().zip(v) {
            out[position(to, l).expect("sublist")] = a;
        }
        out
    }

    fn narrow(v: &[u8], from: &[Label], to: &[Label]) -> Vector {
        to.iter()
            .map(|&l| v[position(from, l).expect("sublist")])
            .collect()
    }

    /// Applies a morphism to a vector of its source (over source labels),
    /// returning a vector over target labels.
    fn apply(&self, f: &LinMor, v: &[u8]) -> Vector {
        let c = f.src.coords(v);
        let image = self.field.mat_vec(&f.mat, &c);
        f.tgt.vector(&self.field, &image)
    }

    pub fn signature(&self, group: &Group, rho: &[Matrix]) -> Vec<i64> {
        let d = rho.first().map_or(0, Vec::len);
        let mut sig = vec![d as i64];
        for h in group.subgroup_classes().reps() {
            sig.push(fixed_dim(&self.field, rho, h.elements()) as i64);
        }
        sig
    }
}

impl MCategory for ProjModules {
    type Obj = Subspace;
    type Mor = LinMor;

    fn name(&self) -> String {
        format!("P(F{})", self.field.order())
    }

    fn objects_on(&self, labels: &[Label], bound: usize) -> Vec<Subspace> {
        let n = labels.len();
        let mut out = Vec::new();
        // pivot sets of size k, then the free entries of each echelon form
        let mut pivots: Vec<Vec<usize>> = vec![Vec::new()];
        for k in 0..=bound.min(n) {
            for piv in pivots.iter().filter(|p| p.len() == k) {
                let free: Vec<(usize, usize)> = piv
                    .iter()
                    .enumerate()
                    .flat_map(|(r, &p)| {
                        ((p + 1)..n)
                            .filter(|c| !piv.contains(c))
                            .map(move |c| (r, c))
                    })
                    .collect();
                for vals in self.field.all_vectors(free.len()) {
                    let mut rows = vec![vec![0u8; n]; k];
                    for (r, &p) in piv.iter().enumerate() {
                        rows[r][p] = 1;
                    }
                    for (&(r, c), &a) in free.iter().zip(&vals) {
                        rows[r][c] = a;
                    }
                    out.push(Subspace::span(&self.field, labels, rows));
                }
            }
            pivots = pivots
                .into_iter()
                .flat_map(|p| {
                    let start = p.last().map_or(0, |&l| l + 1);
                    let mut grown = vec![p.clone()];
                    grown.extend((start..n).map(|c| {
                        let mut q = p.clone();
                        q.push(c);
                        q
                    }));
                    grown
                })
                .collect();
            pivots.sort();
            pivots.dedup();
        }
        out
    }

    fn size(&self, x: &Subspace) -> usize {
        x.dim()
    }

    fn support(&self, x: &Subspace) -> Vec<Label> {
        x.labels.clone()
    }

    fn source(&self, f: &LinMor) -> Subspace {
        f.src.clone()
    }

    fn target(&self, f: &LinMor) -> Subspace {
        f.tgt.clone()
    }

    fn identity(&self, x: &Subspace) -> LinMor {
        LinMor {
            src: x.clone(),
            tgt: x.clone(),
            mat: self.field.identity(x.dim()),
        }
    }

    fn compose(&self, g: &LinMor, f: &LinMor) -> LinMor {
        let mat = if f.src.dim() == 0 {
            vec![Vec::new(); g.tgt.dim()]
        } else {
            self.field.mat_mul(&g.mat, &f.mat)
        };
        LinMor {
            src: f.src.clone(),
            tgt: g.tgt.clone(),
            mat,
        }
    }

    fn inverse(&self, f: &LinMor) -> Option<LinMor> {
        if f.src.dim() != f.tgt.dim() {
            return None;
        }
        let mat = if f.src.dim() == 0 {
            Vec::new()
        } else {
            self.field.inverse(&f.mat)?
        };
        Some(LinMor {
            src: f.tgt.clone(),
            tgt: f.src.clone(),
            mat,
        })
    }

    fn hom_set(&self, x: &Subspace, y: &Subspace) -> Vec<LinMor> {
        self.field
            .all_matrices(y.dim(), x.dim())
            .into_iter()
            .map(|mat| LinMor {
                src: x.clone(),
                tgt: y.clone(),
                mat,
            })
            .collect()
    }

    fn act_obj(&self, u: &Injection, x: &Subspace) -> Subspace {
        self.relabel(u, x).tgt
    }

    fn transport(&self, u: &Injection, x: &Subspace) -> LinMor {
        self.relabel(u, x)
    }

    fn describe(&self, x: &Subspace) -> String {
        let rows: Vec<String> = x
            .basis
            .iter()
            .map(|r| r.iter().map(u8::to_string).collect::<String>())
            .collect();
        format!("<{:?}: {}>", x.labels, rows.join(" "))
    }
}

impl Parsummable for ProjModules {
    fn zero(&self) -> Subspace {
        Subspace::zero()
    }

    fn sum(&self, x: &Subspace, y: &Subspace) -> Result<Subspace> {
        let labels = merge_disjoint(&x.labels, &y.labels)?;
        let rows = x
            .basis
            .iter()
            .map(|r| Self::widen(r, &x.labels, &labels))
            .chain(y.basis.iter().map(|r| Self::widen(r, &y.labels, &labels)))
            .collect();
        Ok(Subspace::span(&self.field, &labels, rows))
    }

    fn sum_mor(&self, f: &LinMor, g: &LinMor) -> Result<LinMor> {
        let span = |m: &LinMor| {
            let mut s = m.src.labels.clone();
            s.extend(&m.tgt.labels);
            s.sort_unstable();
            s.dedup();
            s
        };
        merge_disjoint(&span(f), &span(g))?;
        let src = self.sum(&f.src, &g.src)?;
        let tgt = self.sum(&f.tgt, &g.tgt)?;
        let images: Vec<Vector> = src
            .basis
            .iter()
            .map(|v| {
                let a = self.apply(f, &Self::narrow(v, &src.labels, &f.src.labels));
                let b = self.apply(g, &Self::narrow(v, &src.labels, &g.src.labels));
                let mut w = Self::widen(&a, &f.tgt.labels, &tgt.labels);
                for (o, x) in w
                    .iter_mut()
                    .zip(Self::widen(&b, &g.tgt.labels, &tgt.labels))
                {
                    *o = self.field.add(*o, x);
                }
                tgt.coords(&w)
            })
            .collect();
        let mat = (0..tgt.dim())
            .map(|r| images.iter().map(|c| c[r]).collect())
            .collect();
        Ok(LinMor { src, tgt, mat })
    }

    /// One invariant subspace per module class, embedded into free orbits.
    fn fixed_candidates(&self, u: &UniversalSet, m: usize, bound: usize) -> Result<Vec<Subspace>> {
        let mut out = Vec::new();
        for d in 0..=bound.min(m) {
            for rho in module_structures(&self.field, u.group(), d)? {
                out.push(self.embed(u, &rho, 0));
            }
        }
        Ok(out)
    }

    fn fixed_isomorphic(&self, u: &UniversalSet, x: &Subspace, y: &Subspace) -> Result<bool> {
        Ok(x.dim() == y.dim()
            && reps_isomorphic(&self.field, &self.module_of(u, x), &self.module_of(u, y)))
    }

    fn fixed_signature(&self, u: &UniversalSet, x: &Subspace) -> Vec<i64> {
        self.signature(u.group(), &self.module_of(u, x))
    }

    fn default_bound(&self, group: &GroupRef) -> usize {
        group.order().min(Caps::global().dim)
    }

    fn object_representatives(&self, bound: usize) -> Vec<Subspace> {
        (0..=bound)
            .map(|d| {
                let labels: Vec<Label> = (0..d as Label).collect();
                Subspace::span(&self.field, &labels, self.field.identity(d))
            })
            .collect()
    }

    fn atom_label(&self, u: &UniversalSet, x: &Subspace) -> String {
        let sig = self.fixed_signature(u, x);
        let fixed: Vec<String> = sig[1..].iter().map(i64::to_string).collect();
        format!("dim{} fix({})", sig[0], fixed.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parsummable::{verify_mcat_axioms, Pi0Monoid};

    fn c2_module(q: u8, m: Matrix) -> Module {
        Module {
            field: q,
            group: "C2".into(),
            generators: vec![m],
            dim: None,
        }
    }

    #[test]
    fn iso_test_examples() {
        let triv = c2_module(3, vec![vec![1]]);
        let sign = c2_module(3, vec![vec![2]]);
        assert!(module_iso_test(&triv, &triv).unwrap());
        assert!(!module_iso_test(&triv, &sign).unwrap());
        let regular = c2_module(2, vec![vec![0, 1], vec![1, 0]]);
        let two = c2_module(2, vec![vec![1, 0], vec![0, 1]]);
        assert!(!module_iso_test(&regular, &two).unwrap());
        let conj = c2_module(2, vec![vec![1, 1], vec![0, 1]]);
        assert!(module_iso_test(&regular, &conj).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let m = c2_module(3, vec![vec![2]]);
        assert_eq!(Module::from_json(&m.to_json().unwrap()).unwrap(), m);
        let bad = c2_module(3, vec![vec![0]]);
        assert!(bad.representation().is_err());
    }

    #[test]
    fn counts_of_subspaces() {
        let cat = ProjModules::new(2).unwrap();
        // subspaces of F_2^3: 1 + 7 + 7 + 1
        assert_eq!(cat.objects_on(&[0, 1, 2], 3).len(), 16);
        let r = verify_mcat_axioms(&cat, &[0, 1, 2, 3], 2, 30, 4);
        assert!(r.all_passed(), "{:?}", r.failures());
    }

    #[test]
    fn c2_atoms() {
        let c2 = Group::named("C2").unwrap();
        for q in [2, 3] {
            let cat = ProjModules::new(q).unwrap();
            let p = Pi0Monoid::compute(&cat, &c2, 2, 2).unwrap();
            assert_eq!(p.rank(), 2, "F{q}");
            let mut dims: Vec<usize> = (0..2).map(|a| p.atom_size(a)).collect();
            dims.sort();
            assert_eq!(dims, if q == 2 { vec![1, 2] } else { vec![1, 1] });
        }
    }

    #[test]
    fn dimension_cap() {
        let big = Module {
            field: 2,
            group: "e".into(),
            generators: Vec::new(),
            dim: Some(9),
        };
        assert_eq!(big.dim(), 9);
        let other = Module {
            dim: Some(1),
            ..big.clone()
        };
        assert!(matches!(
            module_iso_test(&big, &other),
            Err(Error::DimCapExceeded { .. })
        ));
        assert!(matches!(
            module_structures(&Field::new(2).unwrap(), &Group::trivial(), 9),
            Err(Error::DimCapExceeded { .. })
        ));
    }
}
