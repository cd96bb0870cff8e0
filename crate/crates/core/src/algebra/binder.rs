use serde::{Deserialize, Serialize};

use super::registry::{cleanup, EntityId, EntityRegistry};
use super::rng::{random_orthogonal, stream_rng, STREAM_CONJ, STREAM_OWNER, STREAM_TEMPORAL};
use super::{check_dim, normalized, AlgebraError, CleanupPolicy, Matrix, Result, Vector, MIN_DIM};

/// Which pair operation a binder realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BinderKind {
    /// `next ∘ prev` over locations (or location ∘ time stamp).
    Temporal,
    /// `next * prev` over owners.
    Owner,
    /// `a ⋆ b` conjunction of two entities.
    Conj,
}

impl BinderKind {
    fn stream(self) -> u64 {
        match self {
            BinderKind::Temporal => STREAM_TEMPORAL,
            BinderKind::Owner => STREAM_OWNER,
            BinderKind::Conj => STREAM_CONJ,
        }
    }
}

/// A d×2d map packing two d-vectors into one, with its pseudo-inverse.
///
/// `forward = [Q1 Q2] / √2` for independent orthogonal blocks, so
/// `forward·forwardᵀ = I` and the pseudo-inverse is the transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct PairBinder {
    kind: BinderKind,
    forward: Matrix,
    pinv: Matrix,
}

/// Outcome of [`pair_unbind`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairUnbinding {
    pub next: EntityId,
    pub prev: EntityId,
    pub confidence: f64,
    /// True when the cleanup path was rejected and pairs were enumerated.
    pub enumerated: bool,
}

pub fn make_pair_binder(kind: BinderKind, dim: usize, seed: u64) -> Result<PairBinder> {
    if dim < MIN_DIM {
        return Err(AlgebraError::InvalidDimension(dim));
    }
    let mut rng = stream_rng(seed, kind.stream());
    let q1 = random_orthogonal(&mut rng, dim);
    let q2 = random_orthogonal(&mut rng, dim);
    let mut forward = Matrix::zeros(dim, 2 * dim);
    forward.view_mut((0, 0), (dim, dim)).copy_from(&q1);
    forward.view_mut((0, dim), (dim, dim)).copy_from(&q2);
    forward *= std::f64::consts::FRAC_1_SQRT_2;
    let pinv = forward.transpose();
    Ok(PairBinder { kind, forward, pinv })
}

impl PairBinder {
    pub fn kind(&self) -> BinderKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.forward.nrows()
    }

    pub fn forward(&self) -> &Matrix {
        &self.forward
    }

    pub fn pinv(&self) -> &Matrix {
        &self.pinv
    }

    pub fn bind(&self, next: &Vector, prev: &Vector) -> Result<Vector> {
        let d = self.dim();
        check_dim(d, next.len())?;
        check_dim(d, prev.len())?;
        let left = self.forward.view((0, 0), (d, d));
        let right = self.forward.view((0, d), (d, d));
        Ok(left * next + right * prev)
    }

    /// Raw `pinv·v` split into its two halves.
    pub fn split(&self, v: &Vector) -> Result<(Vector, Vector)> {
        let d = self.dim();
        check_dim(d, v.len())?;
        let stacked = &self.pinv * v;
        Ok((stacked.rows(0, d).into_owned(), stacked.rows(d, d).into_owned()))
    }

    pub fn unbind(&self, v: &Vector, registry: &EntityRegistry, policy: &CleanupPolicy) -> Result<PairUnbinding> {
        if registry.is_empty() {
            return Err(AlgebraError::EmptyRegistry);
        }
        let (first, second) = self.split(v)?;
        if first.norm() > 0.0 && second.norm() > 0.0 {
            let n = cleanup(&first, registry)?;
            let p = cleanup(&second, registry)?;
            let confidence = n.cosine.min(p.cosine);
            let decisive = |c: &super::Cleanup| c.runner_up <= 0.0 || c.cosine / c.runner_up >= policy.pair_ratio;
            if confidence >= policy.pair_cleanup && decisive(&n) && decisive(&p) {
                return Ok(PairUnbinding { next: n.id, prev: p.id, confidence, enumerated: false });
            }
        }
        Ok(self.enumerate(v, registry))
    }

    /// Exhaustive search over registry pairs for the closest forward image.
    fn enumerate(&self, v: &Vector, registry: &EntityRegistry) -> PairUnbinding {
        let d = self.dim();
        let target = normalized(v);
        let left = self.forward.view((0, 0), (d, d));
        let right = self.forward.view((0, d), (d, d));
        let lefts: Vec<Vector> = registry.iter().map(|e| left * &e.values).collect();
        let rights: Vec<Vector> = registry.iter().map(|e| right * &e.values).collect();
        let mut best = (EntityId(0), EntityId(0), f64::INFINITY);
        for (i, a) in lefts.iter().enumerate() {
            for (j, b) in rights.iter().enumerate() {
                let residual = (normalized(&(a + b)) - &target).norm();
                if residual < best.2 {
                    best = (EntityId(i), EntityId(j), residual);
                }
            }
        }
        PairUnbinding { next: best.0, prev: best.1, confidence: 1.0 - best.2, enumerated: true }
    }
}

pub fn pair_bind(binder: &PairBinder, next: &Vector, prev: &Vector) -> Result<Vector> {
    binder.bind(next, prev)
}

pub fn pair_unbind(binder: &PairBinder, v: &Vector, registry: &EntityRegistry, policy: &CleanupPolicy) -> Result<PairUnbinding> {
    binder.unbind(v, registry, policy)
}
