//! Concrete parsummable categories and their brute-force oracles.

pub mod discrete;
pub mod finsets;
pub mod free;
pub mod gfinsets;
pub mod linalg;
pub mod onegroup;
pub mod phi;
pub mod projmod;
pub mod reports;

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::parsummable::Label;

pub use discrete::{DiscreteMonoid, MonoidKind};
pub use finsets::{Bijection, FinSets};
pub use free::{FreeBase, FreeMor, FreeParsummable, TransitiveFree};
pub use gfinsets::{GFinSets, GMor, GObj, GSetFilter};
pub use onegroup::OneObjectGroup;
pub use phi::{
    DiscreteNaturals, Perm, PermutativeCategory, PermutativePhi, PhiMor, SymmetricGroups,
};
pub use projmod::{module_iso_test, LinMor, Module, ProjModules, Subspace};
pub use reports::{
    free_generator_iso, phi_of_sigma_equivalence, splitting_check, FreeGenReport, PhiSigmaReport,
    SplittingReport,
};

/// Index of `l` in a sorted label list.
pub(crate) fn position(sorted: &[Label], l: Label) -> Option<usize> {
    sorted.binary_search(&l).ok()
}

/// Union of two sorted, disjoint label lists.
pub(crate) fn merge_disjoint(a: &[Label], b: &[Label]) -> Result<Vec<Label>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => return Err(Error::NotDisjoint),
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Ok(out)
}

/// Subsets of `labels` with at most `bound` elements, each sorted.
pub(crate) fn all_subsets(labels: &[Label], bound: usize) -> Vec<Vec<Label>> {
    let mut out = vec![Vec::new()];
    for &l in labels {
        let grown: Vec<Vec<Label>> = out
            .iter()
            .filter(|s| s.len() < bound)
            .map(|s| {
                let mut t = s.clone();
                t.push(l);
                t
            })
            .collect();
        out.extend(grown);
    }
    for s in &mut out {
        s.sort_unstable();
    }
    out.sort();
    out
}

pub(crate) fn describe_labels(x: &[Label]) -> String {
    let parts: Vec<String> = x.iter().map(Label::to_string).collect();
    format!("{{{}}}", parts.join(","))
}
