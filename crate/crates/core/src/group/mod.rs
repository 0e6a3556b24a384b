//! Finite permutation groups, their subgroups and markings.

pub mod construct;
mod fingroup;
pub mod genfile;
mod lattice;
mod marking;
mod perm;
mod quotient;

pub use fingroup::{FinGroup, Subgroup};
pub use marking::MarkedGroup;
pub use perm::Permutation;
pub use quotient::QuotientGroup;

/// Group-size limits shared by every construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest group any constructor may build.
    pub max_order: usize,
    /// Largest group whose full subgroup lattice may be enumerated.
    pub subgroup_oracle: usize,
    /// Largest group for the normal-subgroup and centralizer lattices.
    pub lattice_oracle: usize,
    /// Largest number of distinct states a lazy tree may visit.
    pub node_budget: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 5040,
            subgroup_oracle: 96,
            lattice_oracle: 512,
            node_budget: 1_000_000,
        }
    }
}
