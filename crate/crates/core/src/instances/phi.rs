//! `Φ(E)` for a permutative category `E`: label-indexed families of
//! `E`-objects, almost all the unit, with morphisms between the ordered
//! products. Injections act by the shuffle isomorphisms built from the
//! symmetry of `E`.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::parsummable::{Injection, Label, MCategory, Parsummable};

use super::finsets::{permutations, Bijection};
use super::merge_disjoint;

/// A small strict symmetric monoidal category with a strict unit.
pub trait PermutativeCategory {
    type Obj: Clone + Eq + Ord + Hash + Debug + Send + Sync;
    type Mor: Clone + Eq + Debug + Send + Sync;

    fn name(&self) -> String;
    fn unit(&self) -> Self::Obj;
    /// Non-unit objects of size at most `bound`.
    fn objects(&self, bound: usize) -> Vec<Self::Obj>;
    fn size(&self, a: &Self::Obj) -> usize;
    fn tensor(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn tensor_mor(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, a: &Self::Obj) -> Self::Mor;
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor>;
    fn hom(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Mor>;
    /// `τ_{a,b} : a ⊗ b → b ⊗ a`.
    fn symmetry(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Mor;
}

/// A permutation morphism `n → n`; `0[i]` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm(pub Vec<usize>);

/// The category `Σ` of finite ordinals and permutations, with block sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct SymmetricGroups;

impl PermutativeCategory for SymmetricGroups {
    type Obj = usize;
    type Mor = Perm;

    fn name(&self) -> String {
        "Sigma".into()
    }

    fn unit(&self) -> usize {
        0
    }

    fn objects(&self, bound: usize) -> Vec<usize> {
        (1..=bound).collect()
    }

    fn size(&self, a: &usize) -> usize {
        *a
    }

    fn tensor(&self, a: &usize, b: &usize) -> usize {
        a + b
    }

    fn tensor_mor(&self, f: &Perm, g: &Perm) -> Perm {
        let m = f.0.len();
        Perm(
            f.0.iter()
                .copied()
                .chain(g.0.iter().map(|&j| j + m))
                .collect(),
        )
    }

    fn source(&self, f: &Perm) -> usize {
        f.0.len()
    }

    fn target(&self, f: &Perm) -> usize {
        f.0.len()
    }

    fn identity(&self, a: &usize) -> Perm {
        Perm((0..*a).collect())
    }

    fn compose(&self, g: &Perm, f: &Perm) -> Perm {
        Perm(f.0.iter().map(|&i| g.0[i]).collect())
    }

    fn inverse(&self, f: &Perm) -> Option<Perm> {
        let mut inv = vec![0; f.0.len()];
        for (i, &j) in f.0.iter().enumerate() {
            inv[j] = i;
        }
        Some(Perm(inv))
    }

    fn hom(&self, a: &usize, b: &usize) -> Vec<Perm> {
        if a != b {
            return Vec::new();
        }
        permutations(*a).into_iter().map(Perm).collect()
    }

    fn symmetry(&self, a: &usize, b: &usize) -> Perm {
        let (m, n) = (*a, *b);
        Perm(
            (0..m + n)
                .map(|i| if i < m { i + n } else { i - m })
                .collect(),
        )
    }
}

/// `ℕ` as a discrete permutative category: identities only, symmetry the
/// identity.
#[derive(Clone, Copy, Debug, Default)]
pub struct DiscreteNaturals;

impl PermutativeCategory for DiscreteNaturals {
    type Obj = usize;
    type Mor = usize;

    fn name(&self) -> String {
        "N".into()
    }

    fn unit(&self) -> usize {
        0
    }

    fn objects(&self, bound: usize) -> Vec<usize> {
        (1..=bound).collect()
    }

    fn size(&self, a: &usize) -> usize {
        *a
    }

    fn tensor(&self, a: &usize, b: &usize) -> usize {
        a + b
    }

    fn tensor_mor(&self, f: &usize, g: &usize) -> usize {
        f + g
    }

    fn source(&self, f: &usize) -> usize {
        *f
    }

    fn target(&self, f: &usize) -> usize {
        *f
    }

    fn identity(&self, a: &usize) -> usize {
        *a
    }

    fn compose(&self, g: &usize, _f: &usize) -> usize {
        *g
    }

    fn inverse(&self, f: &usize) -> Option<usize> {
        Some(*f)
    }

    fn hom(&self, a: &usize, b: &usize) -> Vec<usize> {
        if a == b {
            vec![*a]
        } else {
            Vec::new()
        }
    }

    fn symmetry(&self, a: &usize, b: &usize) -> usize {
        a + b
    }
}

/// A morphism `a → b` of `Φ(E)`: an `E`-morphism `Σa → Σb`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiMor<O, M> {
    pub src: BTreeMap<Label, O>,
    pub tgt: BTreeMap<Label, O>,
    pub mor: M,
}

#[derive(Clone, Debug, Default)]
pub struct PermutativePhi<E> {
    e: E,
}

type Family<O> = BTreeMap<Label, O>;

impl<E: PermutativeCategory> PermutativePhi<E> {
    pub fn new(e: E) -> PermutativePhi<E> {
        PermutativePhi { e }
    }

    pub fn base(&self) -> &E {
        &self.e
    }

    /// `Σa`: the product in label order.
    pub fn total(&self, a: &Family<E::Obj>) -> E::Obj {
        self.product(a.values())
    }

    fn product<'a>(&self, objs: impl Iterator<Item = &'a E::Obj>) -> E::Obj
    where
        E::Obj: 'a,
    {
        objs.fold(self.e.unit(), |acc, o| self.e.tensor(&acc, o))
    }

    /// The isomorphism `o_0 ⊗ … ⊗ o_{k-1} → o_{π⁻¹(0)} ⊗ …` moving factor
    /// `i` to position `dest[i]`, as a product of adjacent symmetries.
    pub fn shuffle(&self, objs: &[E::Obj], dest: &[usize]) -> E::Mor {
        let mut order: Vec<usize> = (0..objs.len()).collect();
        let mut current: Vec<E::Obj> = objs.to_vec();
        let mut mor = self.e.identity(&self.product(current.iter()));
        // bubble sort by destination; each swap is id ⊗ τ ⊗ id
        loop {
            let Some(p) = (1..order.len()).find(|&p| dest[order[p - 1]] > dest[order[p]]) else {
                return mor;
            };
            let left = self.e.identity(&self.product(current[..p - 1].iter()));
            let right = self.e.identity(&self.product(current[p + 1..].iter()));
            let tau = self.e.symmetry(&current[p - 1], &current[p]);
            let step = self.e.tensor_mor(&self.e.tensor_mor(&left, &tau), &right);
            mor = self.e.compose(&step, &mor);
            order.swap(p - 1, p);
            current.swap(p - 1, p);
        }
    }

    /// Shuffle from the concatenation of `parts` (in the given order) to the
    /// label-ordered product of their union.
    fn merge_shuffle(&self, parts: &[&Family<E::Obj>]) -> E::Mor {
        let mut objs = Vec::new();
        let mut keys = Vec::new();
        for p in parts {
            for (k, o) in p.iter() {
                keys.push(*k);
                objs.push(o.clone());
            }
        }
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        let dest: Vec<usize> = keys
            .iter()
            .map(|k| sorted.binary_search(k).expect("own key"))
            .collect();
        self.shuffle(&objs, &dest)
    }

    /// `ε : F → Φ(Σ)` on objects: the indicator family.
    pub fn indicator(&self, x: &[Label], one: &E::Obj) -> Family<E::Obj> {
        x.iter().map(|&l| (l, one.clone())).collect()
    }
}

impl PermutativePhi<SymmetricGroups> {
    /// `ε` on morphisms: the bijection read in label order.
    pub fn epsilon_mor(&self, f: &Bijection) -> PhiMor<usize, Perm> {
        PhiMor {
            src: self.indicator(&f.src, &1),
            tgt: self.indicator(&f.tgt, &1),
            mor: Perm(f.map.clone()),
        }
    }
}

impl<E: PermutativeCategory> MCategory for PermutativePhi<E> {
    type Obj = Family<E::Obj>;
    type Mor = PhiMor<E::Obj, E::Mor>;

    fn name(&self) -> String {
        format!("Phi({})", self.e.name())
    }

    fn objects_on(&self, labels: &[Label], bound: usize) -> Vec<Family<E::Obj>> {
        let objs = self.e.objects(bound);
        let mut out = vec![(Family::new(), 0usize)];
        for &l in labels {
            let mut next = Vec::new();
            for (fam, used) in out {
                for o in &objs {
                    let s = self.e.size(o);
                    if used + s <= bound {
                        let mut f = fam.clone();
                        f.insert(l, o.clone());
                        next.push((f, used + s));
                    }
                }
                next.push((fam, used));
            }
            out = next;
        }
        out.into_iter().map(|(f, _)| f).collect()
    }

    fn size(&self, a: &Family<E::Obj>) -> usize {
        a.values().map(|o| self.e.size(o)).sum()
    }

    fn support(&self, a: &Family<E::Obj>) -> Vec<Label> {
        a.keys().copied().collect()
    }

    fn source(&self, f: &Self::Mor) -> Family<E::Obj> {
        f.src.clone()
    }

    fn target(&self, f: &Self::Mor) -> Family<E::Obj> {
        f.tgt.clone()
    }

    fn identity(&self, a: &Family<E::Obj>) -> Self::Mor {
        PhiMor {
            src: a.clone(),
            tgt: a.clone(),
            mor: self.e.identity(&self.total(a)),
        }
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        PhiMor {
            src: f.src.clone(),
            tgt: g.tgt.clone(),
            mor: self.e.compose(&g.mor, &f.mor),
        }
    }

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        Some(PhiMor {
            src: f.tgt.clone(),
            tgt: f.src.clone(),
            mor: self.e.inverse(&f.mor)?,
        })
    }

    fn hom_set(&self, a: &Family<E::Obj>, b: &Family<E::Obj>) -> Vec<Self::Mor> {
        self.e
            .hom(&self.total(a), &self.total(b))
            .into_iter()
            .map(|mor| PhiMor {
                src: a.clone(),
                tgt: b.clone(),
                mor,
            })
            .collect()
    }

    fn act_obj(&self, u: &Injection, a: &Family<E::Obj>) -> Family<E::Obj> {
        a.iter().map(|(&l, o)| (u.apply(l), o.clone())).collect()
    }

    /// `u_∘^a`: the shuffle putting the factors in the order of their new
    /// labels.
    fn transport(&self, u: &Injection, a: &Family<E::Obj>) -> Self::Mor {
        let tgt = self.act_obj(u, a);
        let new: Vec<Label> = a.keys().map(|&l| u.apply(l)).collect();
        let dest: Vec<usize> = new
            .iter()
            .map(|l| tgt.keys().position(|k| k == l).expect("image label"))
            .collect();
        let objs: Vec<E::Obj> = a.values().cloned().collect();
        PhiMor {
            src: a.clone(),
            tgt,
            mor: self.shuffle(&objs, &dest),
        }
    }

    fn describe(&self, a: &Family<E::Obj>) -> String {
        let parts: Vec<String> = a.iter().map(|(l, o)| format!("{l}:{o:?}")).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl<E: PermutativeCategory> Parsummable for PermutativePhi<E> {
    fn zero(&self) -> Family<E::Obj> {
        Family::new()
    }

    fn sum(&self, a: &Family<E::Obj>, b: &Family<E::Obj>) -> Result<Family<E::Obj>> {
        if a.keys().any(|k| b.contains_key(k)) {
            return Err(Error::NotDisjoint);
        }
        Ok(a.iter().chain(b).map(|(k, o)| (*k, o.clone())).collect())
    }

    /// `sh_{a',b'} ∘ (f ⊗ g) ∘ sh_{a,b}⁻¹`.
    fn sum_mor(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        let span = |m: &Self::Mor| {
            let mut s = self.support(&m.src);
            s.extend(self.support(&m.tgt));
            s.sort_unstable();
            s.dedup();
            s
        };
        merge_disjoint(&span(f), &span(g))?;
        let src = self.sum(&f.src, &g.src)?;
        let tgt = self.sum(&f.tgt, &g.tgt)?;
        let into = self.merge_shuffle(&[&f.tgt, &g.tgt]);
        let out_of = self
            .e
            .inverse(&self.merge_shuffle(&[&f.src, &g.src]))
            .ok_or_else(|| Error::Invalid("shuffle not invertible".into()))?;
        let mid = self.e.tensor_mor(&f.mor, &g.mor);
        Ok(PhiMor {
            src,
            tgt,
            mor: self.e.compose(&into, &self.e.compose(&mid, &out_of)),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parsummable::{composition_law, verify_mcat_axioms};

    #[test]
    fn symmetry_convention() {
        assert_eq!(SymmetricGroups.symmetry(&2, &1), Perm(vec![1, 2, 0]));
    }

    #[test]
    fn shuffle_of_singletons_is_the_relabelling() {
        let phi = PermutativePhi::new(SymmetricGroups);
        let u = Injection::from_vec(vec![4, 0, 2]).unwrap();
        let a = phi.indicator(&[0, 1, 2], &1);
        let t = phi.transport(&u, &a);
        let b = Bijection::transport(&u, &[0, 1, 2]);
        assert_eq!(t, phi.epsilon_mor(&b));
    }

    #[test]
    fn axioms_and_composition_law() {
        let labels: Vec<Label> = (0..4).collect();
        let phi = PermutativePhi::new(SymmetricGroups);
        let r = verify_mcat_axioms(&phi, &labels, 3, 30, 11);
        assert!(r.all_passed(), "{:?}", r.failures());
        assert!(composition_law(&phi, &labels, 3, 100, 2).all_passed());
        let disc = PermutativePhi::new(DiscreteNaturals);
        assert!(verify_mcat_axioms(&disc, &labels, 3, 30, 11).all_passed());
    }
}
