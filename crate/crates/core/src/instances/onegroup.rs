//! A one-object category whose morphisms form an abelian group Γ, with
//! trivial injection action and sum given by multiplication in Γ.

use crate::error::{Error, Result};
use crate::groups::GroupRef;
use crate::parsummable::{Injection, Label, MCategory, Parsummable};

#[derive(Clone, Debug)]
pub struct OneObjectGroup {
    gamma: GroupRef,
}

impl OneObjectGroup {
    pub fn new(gamma: &GroupRef) -> Result<OneObjectGroup> {
        if !gamma.is_abelian() {
            return Err(Error::InvalidGroup(format!(
                "{} is not abelian, so multiplication is not a functor",
                gamma.name()
            )));
        }
        Ok(OneObjectGroup {
            gamma: gamma.clone(),
        })
    }
}

impl MCategory for OneObjectGroup {
    type Obj = ();
    type Mor = usize;

    fn name(&self) -> String {
        format!("B{}", self.gamma.name())
    }

    fn objects_on(&self, _labels: &[Label], _bound: usize) -> Vec<()> {
        vec![()]
    }

    fn size(&self, _x: &()) -> usize {
        0
    }

    fn support(&self, _x: &()) -> Vec<Label> {
        Vec::new()
    }

    fn source(&self, _f: &usize) {}

    fn target(&self, _f: &usize) {}

    fn identity(&self, _x: &()) -> usize {
        0
    }

    fn compose(&self, g: &usize, f: &usize) -> usize {
        self.gamma.mul(*g, *f)
    }

    fn inverse(&self, f: &usize) -> Option<usize> {
        Some(self.gamma.inv(*f))
    }

    fn hom_set(&self, _x: &(), _y: &()) -> Vec<usize> {
        (0..self.gamma.order()).collect()
    }

    fn act_obj(&self, _u: &Injection, _x: &()) {}

    fn transport(&self, _u: &Injection, _x: &()) -> usize {
        0
    }

    fn describe(&self, _x: &()) -> String {
        "*".into()
    }
}

impl Parsummable for OneObjectGroup {
    fn zero(&self) {}

    fn sum(&self, _x: &(), _y: &()) -> Result<()> {
        Ok(())
    }

    fn sum_mor(&self, f: &usize, g: &usize) -> Result<usize> {
        Ok(self.gamma.mul(*f, *g))
    }

    fn default_bound(&self, _group: &GroupRef) -> usize {
        0
    }

    fn default_multiplicity(&self, _group: &GroupRef, _bound: usize) -> usize {
        1
    }

    fn object_representatives(&self, _bound: usize) -> Vec<()> {
        vec![()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::Group;
    use crate::parsummable::{saturation_probe, verify_mcat_axioms, Pi0Monoid};

    #[test]
    fn only_the_zero_class() {
        let c2 = Group::named("C2").unwrap();
        let b = OneObjectGroup::new(&c2).unwrap();
        let p = Pi0Monoid::compute(&b, &c2, 1, 0).unwrap();
        assert_eq!(p.rank(), 0);
        assert_eq!(p.classes().len(), 1);
        assert!(verify_mcat_axioms(&b, &[0, 1], 1, 5, 0).all_passed());
    }

    #[test]
    fn not_saturated() {
        let c2 = Group::named("C2").unwrap();
        let b = OneObjectGroup::new(&c2).unwrap();
        let r = saturation_probe(&b, &c2, 0, 1).unwrap();
        assert!(!r.saturated);
        assert_eq!((r.g_object_classes, r.fixed_classes), (2, 1));
        assert!(r.witness.unwrap().contains("nontrivial"));
    }

    #[test]
    fn nonabelian_refused() {
        assert!(OneObjectGroup::new(&Group::named("S3").unwrap()).is_err());
    }
}
