//! Translation association schemes from cyclotomy over finite fields.
//!
//! The crate builds exact tables for `F_{p^f}`, Gauss periods in `Z[ξ_p]`,
//! and decides whether a partition of the cyclotomic classes of index `N`
//! forms a translation scheme, computing its eigenmatrices, intersection
//! numbers and Krein parameters.

pub mod arith;
pub mod constructions;
pub mod cycint;
pub mod cyclotomy;
pub mod error;
pub mod finite_field;
pub mod gauss;
pub mod json;
pub mod partition;
pub mod scheme;
pub mod search;

pub use cycint::CycInt;
pub use cyclotomy::CyclotomicSystem;
pub use error::{Error, Result};
pub use finite_field::{FieldDescriptor, FieldSpec};
pub use partition::IndexPartition;
pub use scheme::{verify_scheme, SchemeReport};
