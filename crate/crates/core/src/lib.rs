//! Single-peaked consistency for profiles of weak orders.
//!
//! Three variants are supported: single-peaked, single-plateaued and
//! existentially single-peaked. Each is reduced to the consecutive-ones
//! property of a 0-1 matrix and decided with a PQ-tree, which also yields
//! every consistent axis.

pub mod analysis;
pub mod cli;
pub mod construction;
pub mod error;
pub mod generate;
pub mod parse;
pub mod pqtree;
pub mod profile;
pub mod substructure;

pub use analysis::{all_axes, brute_force_axes, check, guiding_order, majority_relation};
pub use construction::{build_matrix, ConstraintMatrix, Rejection, RejectionReason, RowKind, RowOrigin};
pub use error::{ParseError, ParseErrorKind, ProfileError};
pub use parse::{parse_native, parse_preflib};
pub use pqtree::{PqError, PqTree, Reduction};
pub use profile::{Axis, Candidate, CandidateId, OrderClass, Profile, Vote, WeakOrder};
pub use substructure::{axis_consistent, Model, SubstructureKind, Witness};
