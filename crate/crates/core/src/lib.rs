//! Linear codes from skew-symmetric determinantal varieties over finite
//! fields of odd characteristic.
//!
//! The points of the projective variety of skew-symmetric m x m matrices of
//! rank at most 2t form the columns of a generator matrix. This crate builds
//! that code, computes its length, weights and minimum distance from exact
//! closed forms, and checks all of them against exhaustive enumeration.

pub mod cli;
pub mod code;
pub mod counting;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod skewmat;
pub mod weights;

pub use code::{CodeParams, GeneratorMatrix};
pub use counting::CountTable;
pub use error::{Error, Result};
pub use field::{FieldElem, FieldSpec};
pub use skewmat::SkewMatrix;
pub use weights::WeightReport;
