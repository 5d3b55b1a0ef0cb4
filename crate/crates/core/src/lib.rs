//! Exact computations with small finite permutation groups: subnormal
//! subgroups and their joins, fusion systems over small `p`-groups,
//! group-induced localities, and an exhaustive verification harness.

pub mod corpus;
pub mod error;
pub mod fusion;
pub mod group;
pub mod locality;
pub mod perm;
pub mod report;
pub mod scenario;
pub mod subnormal;
pub mod suite;

pub use error::{Result, SubkitError};
pub use group::{group_from_generators, Budget, Elem, Group, Subgroup};
pub use perm::Permutation;
