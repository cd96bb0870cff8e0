use crate::relation::{Compass, Side};

use super::binder::{make_pair_binder, BinderKind, PairBinder};
use super::rng::{random_orthogonal, stream_rng, STREAM_DIRECTIONS, STREAM_POSITIONS};
use super::{AlgebraError, Matrix, Result, Vector, MIN_DIM};

/// Orthogonal direction matrices with `S = Nᵀ = N⁻¹` and `W = Eᵀ = E⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionBank {
    north: Matrix,
    east: Matrix,
    south: Matrix,
    west: Matrix,
}

impl DirectionBank {
    pub fn matrix(&self, dir: Compass) -> &Matrix {
        match dir {
            Compass::North => &self.north,
            Compass::East => &self.east,
            Compass::South => &self.south,
            Compass::West => &self.west,
        }
    }

    pub fn dim(&self) -> usize {
        self.north.nrows()
    }
}

pub fn make_direction_bank(dim: usize, seed: u64) -> Result<DirectionBank> {
    if dim < MIN_DIM {
        return Err(AlgebraError::InvalidDimension(dim));
    }
    let mut rng = stream_rng(seed, STREAM_DIRECTIONS);
    let north = random_orthogonal(&mut rng, dim);
    let east = random_orthogonal(&mut rng, dim);
    let south = north.transpose();
    let west = east.transpose();
    Ok(DirectionBank { north, east, south, west })
}

/// Symmetric idempotent projectors for (above, below, left, right), each of
/// rank `rank`. The 4d block lifts are applied implicitly: the projector acts
/// on its own sub-block and the identity acts on the other three.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionBank {
    projectors: [Matrix; 4],
    rank: usize,
}

/// A 4d vector stored as four d-blocks indexed by [`Side::block`].
#[derive(Debug, Clone, PartialEq)]
pub struct PositionalVector {
    pub blocks: [Vector; 4],
}

impl PositionalVector {
    pub fn block(&self, side: Side) -> &Vector {
        &self.blocks[side.block()]
    }
}

impl PositionBank {
    pub fn projector(&self, side: Side) -> &Matrix {
        &self.projectors[side.block()]
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Applies the lifted block matrix for `side` (𝒜, ℬ, ℒ or ℛ).
    pub fn lift(&self, side: Side, v: &PositionalVector) -> PositionalVector {
        let mut out = v.clone();
        out.blocks[side.block()] = self.projector(side) * v.block(side);
        out
    }

    /// `M_side · block`.
    pub fn project(&self, side: Side, block: &Vector) -> Vector {
        self.projector(side) * block
    }
}

pub fn make_position_bank(dim: usize, seed: u64, rank: usize) -> Result<PositionBank> {
    if dim < MIN_DIM {
        return Err(AlgebraError::InvalidDimension(dim));
    }
    if rank == 0 || rank >= dim {
        return Err(AlgebraError::InvalidRank { rank, max: dim - 1 });
    }
    let mut rng = stream_rng(seed, STREAM_POSITIONS);
    let projectors = std::array::from_fn(|_| {
        let q = random_orthogonal(&mut rng, dim);
        let basis = q.columns(0, rank);
        basis * basis.transpose()
    });
    Ok(PositionBank { projectors, rank })
}

/// Every matrix a story evaluation needs, built once per configuration and
/// shared read-only.
#[derive(Debug, Clone)]
pub struct Banks {
    pub dim: usize,
    pub directions: DirectionBank,
    pub positions: PositionBank,
    pub temporal: PairBinder,
    pub owner: PairBinder,
    pub conj: PairBinder,
}

impl Banks {
    pub fn new(dim: usize, seed: u64, rank: usize) -> Result<Self> {
        Ok(Self {
            dim,
            directions: make_direction_bank(dim, seed)?,
            positions: make_position_bank(dim, seed, rank)?,
            temporal: make_pair_binder(BinderKind::Temporal, dim, seed)?,
            owner: make_pair_binder(BinderKind::Owner, dim, seed)?,
            conj: make_pair_binder(BinderKind::Conj, dim, seed)?,
        })
    }

    /// Default projector rank d/2.
    pub fn with_default_rank(dim: usize, seed: u64) -> Result<Self> {
        Self::new(dim, seed, dim / 2)
    }

    pub fn binder(&self, kind: BinderKind) -> &PairBinder {
        match kind {
            BinderKind::Temporal => &self.temporal,
            BinderKind::Owner => &self.owner,
            BinderKind::Conj => &self.conj,
        }
    }
}
