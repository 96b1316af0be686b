//! Exact arithmetic for finitely generated abelian groups and homomorphisms
//! between them, in invariant-factor form over arbitrary-precision integers.

mod group;
mod hom;
mod matrix;
mod snf;

use num_bigint::BigInt;
use thiserror::Error;

pub use group::{Elements, FgAbGroup, GroupElement, Normalized};
pub use hom::{exact_at, paired_injective, Homomorphism, Subgroup};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FgabError {
    #[error("invariant factor {0} must be at least 2")]
    InvalidInvariantFactor(BigInt),
    #[error("invariant factors {lower} and {upper} break the divisibility chain")]
    BrokenDivisibility { lower: BigInt, upper: BigInt },
    #[error("expected {expected} coordinates, got {got}")]
    CoordinateLength { expected: usize, got: usize },
    #[error("element of {got} where an element of {expected} was expected")]
    ParentMismatch { expected: FgAbGroup, got: FgAbGroup },
    #[error("matrix is {}x{}, expected {}x{}", got.0, got.1, expected.0, expected.1)]
    ShapeMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("not well defined: the relation of source generator {generator} is not sent to zero")]
    IllDefined { generator: usize },
    #[error("{0} is infinite")]
    InfiniteGroup(FgAbGroup),
}
