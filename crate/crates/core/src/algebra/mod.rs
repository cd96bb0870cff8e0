//! Vector/matrix kernel: entity sampling, outer-product binding, probing,
//! pair binders with cleanup, and the seeded direction/position banks.
//!
//! Everything here works on dense `f64` vectors and matrices. Constructors are
//! pure functions of `(dim, seed)` so banks can be rebuilt bit-identically and
//! shared read-only across stories.

mod banks;
mod binder;
mod encoding;
mod registry;
pub mod rng;

pub use banks::{make_direction_bank, make_position_bank, Banks, DirectionBank, PositionBank, PositionalVector};
pub use binder::{make_pair_binder, pair_bind, pair_unbind, BinderKind, PairBinder, PairUnbinding};
pub use encoding::{bind, chain, probe, Encoding, Probe};
pub use registry::{cleanup, Cleanup, EntityId, EntityRegistry, EntityVector, VectorMode};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// Smallest supported vector dimension.
pub const MIN_DIM: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("entity registry is full ({capacity} orthonormal vectors already registered)")]
    RegistryFull { capacity: usize },
    #[error("entity registry is empty")]
    EmptyRegistry,
    #[error("cannot clean up the zero vector")]
    ZeroVector,
    #[error("empty entity label")]
    EmptyLabel,
    #[error("projector rank {rank} outside [1, {max}]")]
    InvalidRank { rank: usize, max: usize },
    #[error("dimension {0} is below the minimum of {MIN_DIM}")]
    InvalidDimension(usize),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;

/// Thresholds applied when deciding that a probe or a cleanup "hit".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CleanupPolicy {
    /// Minimum probe norm accepted as "approximately 1".
    pub score: f64,
    /// Winner must exceed the runner-up cosine by this factor.
    pub margin_ratio: f64,
    /// Minimum per-half cosine on the pair-unbinding cleanup path.
    pub pair_cleanup: f64,
    /// Winner/runner-up cosine ratio required on each unbound half.
    pub pair_ratio: f64,
}

impl Default for CleanupPolicy {
    fn default() -> Self {
        Self { score: 0.6, margin_ratio: 2.0, pair_cleanup: 0.35, pair_ratio: 1.5 }
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(AlgebraError::DimensionMismatch { expected, got })
    }
}

/// Cosine similarity; zero when either side vanishes.
pub fn cosine(a: &Vector, b: &Vector) -> f64 {
    let na = a.norm();
    let nb = b.norm();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        a.dot(b) / (na * nb)
    }
}

/// Unit-length copy of `v` (the zero vector is returned unchanged).
pub fn normalized(v: &Vector) -> Vector {
    let n = v.norm();
    if n == 0.0 {
        v.clone()
    } else {
        v / n
    }
}
