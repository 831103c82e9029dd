//! Finite-window engine for parsummable categories, their component monoids,
//! restriction and transfer, Swan K-theory global functors, and the
//! brute-force oracles used to cross-check them.

pub mod bisets;
pub mod caps;
pub mod error;
pub mod globfun;
pub mod groups;
pub mod gsets;
pub mod instances;
pub mod parsummable;

pub use caps::Caps;
pub use error::{Error, Result};
pub use groups::{
    homs, homs_up_to_conjugacy, Group, GroupHom, GroupRef, Subgroup, SubgroupClasses,
};
