//! Exact computation of the K-theory of flip crossed products.
//!
//! Given the finitely generated K-groups (K₀, K₁) of a separable nuclear
//! C*-algebra satisfying the UCT, this crate computes K₀ and K₁ of the
//! crossed product of the tensor square by the flip automorphism, together
//! with the induced dual ℤ₂-action. The input is decomposed into building
//! blocks (ℂ, Cuntz algebras O_{n+1}, the suspension Sℂ, dimension drop
//! algebras D_n); diagonal blocks are resolved by exact cokernel
//! computations over ℤ and cross terms by the graded Künneth pairing.
//!
//! All arithmetic is exact (arbitrary-precision integers); every value is
//! an immutable canonical form, so the whole crate is safe for concurrent
//! batch evaluation.

pub mod fgab;
pub mod flipcalc;
pub mod intlin;
pub mod kdata;
pub mod sweep;
pub mod verify;

pub use fgab::{FgAbGroup, GroupMap};
pub use flipcalc::{flip_crossed, ActionSource, Block, BlockContribution, FlipReport};
pub use intlin::{IntMatrix, SnfResult};
pub use kdata::KData;

use num_bigint::BigInt;

/// Errors reported by fallible operations. Most of the crate consists of
/// total functions; errors arise only from invalid user-facing arguments.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("torsion coefficient must be nonnegative, got {0}")]
    NegativeCoefficient(BigInt),
    #[error("block parameter must be at least 1, got {0}")]
    InvalidBlockParameter(BigInt),
    #[error("matrix does not define a homomorphism: {0}")]
    IllDefined(String),
}

pub type Result<T> = std::result::Result<T, Error>;
