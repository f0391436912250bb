//! Exact arithmetic and combinatorial search for non-trivial r-wise
//! intersecting uniform set families.
//!
//! The crate has three layers:
//!
//! * bit-packed subsets and families with intersection predicates,
//!   shifting, and shadows (`subset`, `family`);
//! * the extremal constructions and their exact cardinality formulas,
//!   tie-aware 2-wise 2-intersecting maxima, and the regime classifier
//!   for the 3-wise maximum (`constructions`, `counting`);
//! * exhaustive branch-and-bound search at desk scale (`search`), exact
//!   product-measure evaluation (`measure`), and large-n hypergeometric
//!   asymptotics with exact window arithmetic (`asymptotics`).
//!
//! All combinatorial quantities are exact (`BigUint` / `BigRational`);
//! floating point appears only at reporting boundaries.

pub mod asymptotics;
pub mod constructions;
pub mod counting;
pub mod erf;
pub mod family;
pub mod measure;
pub mod ratio;
pub mod search;
pub mod subset;

pub use family::{Family, IntersectionSpec};
pub use subset::KSubset;

use thiserror::Error as ThisError;

#[derive(ThisError, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set size {n} outside [1, 64]")]
    InvalidGroundSet { n: u32 },
    #[error("position {position} outside [1, {n}]")]
    PositionOutOfRange { position: u32, n: u32 },
    #[error("duplicate position {position}")]
    DuplicatePosition { position: u32 },
    #[error("member size k={k} exceeds n={n}")]
    InvalidUniformity { k: u32, n: u32 },
    #[error("duplicate member {member:?}")]
    DuplicateMember { member: Vec<u32> },
    #[error("member {member:?} not contained in [{n}]")]
    MemberOutOfRange { member: Vec<u32>, n: u32 },
    #[error("member {member:?} violates k={k} uniformity")]
    NonUniformMember { member: Vec<u32>, k: u32 },
    #[error("operation undefined on the empty family")]
    EmptyFamily,
    #[error("intersection spec r={r}, t={t} needs r >= 2 and t >= 1")]
    InvalidIntersectionSpec { r: u32, t: u32 },
    #[error("shift pair ({i}, {j}) needs 1 <= i < j <= {n}")]
    InvalidShiftPair { i: u32, j: u32, n: u32 },
    #[error("shadow level {i} incompatible with family on [{n}]")]
    InvalidShadowLevel { i: u32, n: u32 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}
