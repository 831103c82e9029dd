//! Abelian monoids as discrete parsummable categories with trivial action.

use crate::error::{Error, Result};
use crate::groups::GroupRef;
use crate::parsummable::{Injection, Label, MCategory, Parsummable};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonoidKind {
    /// `ℕ^k`.
    Naturals(usize),
    /// `ℤ/n`: not free, so the atom presentation fails.
    Cyclic(u32),
    /// `{0, …, n}` with addition truncated at `n`: not cancellative.
    Truncated(u32),
}

/// A discrete category on the elements of an abelian monoid. Elements are
/// coordinate vectors; all supports are empty.
#[derive(Clone, Debug)]
pub struct DiscreteMonoid {
    pub kind: MonoidKind,
}

impl DiscreteMonoid {
    pub fn new(kind: MonoidKind) -> Result<DiscreteMonoid> {
        match kind {
            MonoidKind::Cyclic(0) => Err(Error::Invalid("cyclic monoid of order 0".into())),
            _ => Ok(DiscreteMonoid { kind }),
        }
    }

    pub fn naturals() -> DiscreteMonoid {
        DiscreteMonoid {
            kind: MonoidKind::Naturals(1),
        }
    }

    fn dim(&self) -> usize {
        match self.kind {
            MonoidKind::Naturals(k) => k,
            _ => 1,
        }
    }

    /// Elements of grade at most `bound`.
    pub fn elements(&self, bound: usize) -> Vec<Vec<u32>> {
        let top = match self.kind {
            MonoidKind::Naturals(_) => bound as u32,
            MonoidKind::Cyclic(n) => (n - 1).min(bound as u32),
            MonoidKind::Truncated(n) => n.min(bound as u32),
        };
        let mut out = vec![Vec::new()];
        for _ in 0..self.dim() {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u32>| {
                    (0..=top).map(move |a| {
                        let mut w = v.clone();
                        w.push(a);
                        w
                    })
                })
                .collect();
        }
        out.retain(|v| v.iter().sum::<u32>() as usize <= bound);
        out
    }
}

impl MCategory for DiscreteMonoid {
    type Obj = Vec<u32>;
    type Mor = Vec<u32>;

    fn name(&self) -> String {
        match self.kind {
            MonoidKind::Naturals(1) => "N".into(),
            MonoidKind::Naturals(k) => format!("N^{k}"),
            MonoidKind::Cyclic(n) => format!("Z/{n}"),
            MonoidKind::Truncated(n) => format!("T{n}"),
        }
    }

    fn objects_on(&self, _labels: &[Label], bound: usize) -> Vec<Vec<u32>> {
        self.elements(bound)
    }

    /// Coordinate sum; additive for `ℕ^k` only.
    fn size(&self, x: &Vec<u32>) -> usize {
        x.iter().sum::<u32>() as usize
    }

    fn support(&self, _x: &Vec<u32>) -> Vec<Label> {
        Vec::new()
    }

    fn source(&self, f: &Vec<u32>) -> Vec<u32> {
        f.clone()
    }

    fn target(&self, f: &Vec<u32>) -> Vec<u32> {
        f.clone()
    }

    fn identity(&self, x: &Vec<u32>) -> Vec<u32> {
        x.clone()
    }

    fn compose(&self, g: &Vec<u32>, _f: &Vec<u32>) -> Vec<u32> {
        g.clone()
    }

    fn inverse(&self, f: &Vec<u32>) -> Option<Vec<u32>> {
        Some(f.clone())
    }

    fn hom_set(&self, x: &Vec<u32>, y: &Vec<u32>) -> Vec<Vec<u32>> {
        if x == y {
            vec![x.clone()]
        } else {
            Vec::new()
        }
    }

    fn act_obj(&self, _u: &Injection, x: &Vec<u32>) -> Vec<u32> {
        x.clone()
    }

    fn transport(&self, _u: &Injection, x: &Vec<u32>) -> Vec<u32> {
        x.clone()
    }
}

impl Parsummable for DiscreteMonoid {
    fn zero(&self) -> Vec<u32> {
        vec![0; self.dim()]
    }

    fn sum(&self, x: &Vec<u32>, y: &Vec<u32>) -> Result<Vec<u32>> {
        Ok(x.iter()
            .zip(y)
            .map(|(a, b)| match self.kind {
                MonoidKind::Naturals(_) => a + b,
                MonoidKind::Cyclic(n) => (a + b) % n,
                MonoidKind::Truncated(n) => (a + b).min(n),
            })
            .collect())
    }

    fn sum_mor(&self, f: &Vec<u32>, g: &Vec<u32>) -> Result<Vec<u32>> {
        self.sum(f, g)
    }

    fn fixed_isomorphic(
        &self,
        _u: &crate::parsummable::UniversalSet,
        x: &Vec<u32>,
        y: &Vec<u32>,
    ) -> Result<bool> {
        Ok(x == y)
    }

    fn default_bound(&self, _group: &GroupRef) -> usize {
        match self.kind {
            MonoidKind::Naturals(_) => 2,
            MonoidKind::Cyclic(n) => n as usize,
            MonoidKind::Truncated(n) => n as usize + 1,
        }
    }

    fn default_multiplicity(&self, _group: &GroupRef, _bound: usize) -> usize {
        1
    }

    fn atom_label(&self, _u: &crate::parsummable::UniversalSet, x: &Vec<u32>) -> String {
        format!("{x:?}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Group;
    use crate::parsummable::{verify_mcat_axioms, Pi0Monoid};

    #[test]
    fn naturals_have_one_atom_per_coordinate() {
        let c2 = Group::named("C2").unwrap();
        let m = DiscreteMonoid::new(MonoidKind::Naturals(2)).unwrap();
        let p = Pi0Monoid::compute(&m, &c2, 1, 2).unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.classes().len(), 6);
    }

    #[test]
    fn degenerate_monoids_are_refused() {
        let e = Group::trivial();
        let z3 = DiscreteMonoid::new(MonoidKind::Cyclic(3)).unwrap();
        assert!(matches!(
            Pi0Monoid::compute(&z3, &e, 1, 3),
            Err(Error::NonUniqueDecomposition(_))
        ));
        let t2 = DiscreteMonoid::new(MonoidKind::Truncated(2)).unwrap();
        assert!(matches!(
            Pi0Monoid::compute(&t2, &e, 1, 3),
            Err(Error::NonCancellative(_))
        ));
    }

    #[test]
    fn supports_are_empty() {
        let m = DiscreteMonoid::naturals();
        let r = verify_mcat_axioms(&m, &[0, 1, 2], 3, 10, 1);
        assert!(r.all_passed(), "{:?}", r.failures());
    }
}
