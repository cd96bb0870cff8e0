use super::{check_dim, Matrix, Result, Vector};

/// A d×d matrix binding a containee (left factor) to a container (right factor).
#[derive(Debug, Clone, PartialEq)]
pub struct Encoding(pub Matrix);

/// Recovered role and its strength.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub role: Vector,
    pub score: f64,
}

impl Encoding {
    pub fn zeros(dim: usize) -> Self {
        Encoding(Matrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn frobenius(&self) -> f64 {
        self.0.norm()
    }

    /// Left action `containeeᵀ·M`, returned as a column vector.
    pub fn probe(&self, containee: &Vector) -> Result<Probe> {
        check_dim(self.dim(), containee.len())?;
        let role = self.0.tr_mul(containee);
        let score = role.norm();
        Ok(Probe { role, score })
    }

    /// Right action `M·container`, recovering the containee side.
    pub fn probe_container(&self, container: &Vector) -> Result<Probe> {
        check_dim(self.dim(), container.len())?;
        let role = &self.0 * container;
        let score = role.norm();
        Ok(Probe { role, score })
    }

    pub fn chain(&self, second: &Encoding) -> Result<Encoding> {
        check_dim(self.dim(), second.dim())?;
        Ok(Encoding(&self.0 * &second.0))
    }
}

/// Outer product `containee · containerᵀ`.
pub fn bind(containee: &Vector, container: &Vector) -> Result<Encoding> {
    check_dim(containee.len(), container.len())?;
    Ok(Encoding(containee * container.transpose()))
}

pub fn probe(containee: &Vector, enc: &Encoding) -> Result<Probe> {
    enc.probe(containee)
}

/// Matrix product `first·second`; realizes transitivity when the inner
/// factors are the same unit vector.
pub fn chain(first: &Encoding, second: &Encoding) -> Result<Encoding> {
    first.chain(second)
}
