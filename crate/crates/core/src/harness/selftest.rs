//! Numerical checks on the shared matrix banks.

use serde::Serialize;

use crate::algebra::{BinderKind, Banks, Matrix};
use crate::relation::{Compass, Side};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Measured error (or margin, for lower-bound checks).
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}

fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Check {
    Check { name: name.into(), value, bound, passed: value <= bound }
}

fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Check {
    Check { name: name.into(), value, bound, passed: value > bound }
}

fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
}

/// Inverse pairs, projector idempotency and binder pseudo-inverses.
pub fn banks_selftest(banks: &Banks) -> Vec<Check> {
    let d = banks.dim;
    let eye = Matrix::identity(d, d);
    let dirs = &banks.directions;
    let mut out = vec![
        at_most("N·S = I", max_abs(&(dirs.matrix(Compass::North) * dirs.matrix(Compass::South) - &eye)), 1e-12),
        at_most("E·W = I", max_abs(&(dirs.matrix(Compass::East) * dirs.matrix(Compass::West) - &eye)), 1e-12),
        at_least(
            "N·E ≠ E·N",
            (dirs.matrix(Compass::North) * dirs.matrix(Compass::East) - dirs.matrix(Compass::East) * dirs.matrix(Compass::North)).norm(),
            0.1,
        ),
    ];
    for side in Side::ALL {
        let p = banks.positions.projector(side);
        out.push(at_most(format!("{}² = {}", side.word(), side.word()), max_abs(&(p * p - p)), 1e-9));
        out.push(at_least(format!("‖{} − I‖", side.word()), (p - &eye).norm(), 0.1));
    }
    for kind in [BinderKind::Temporal, BinderKind::Owner, BinderKind::Conj] {
        let b = banks.binder(kind);
        out.push(at_most(format!("{kind:?} forward·pinv = I"), max_abs(&(b.forward() * b.pinv() - &eye)), 1e-12));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_banks_pass() {
        let banks = Banks::with_default_rank(64, 1).unwrap();
        let checks = banks_selftest(&banks);
        assert_eq!(checks.len(), 14);
        for c in checks {
            assert!(c.passed, "{c:?}");
        }
    }
}
