//! Dense complex operator toolkit and the structure theory of a nilpotent supercharge.

pub mod fermion;
pub mod operator;
pub mod spectral;
pub mod superdecomp;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

pub use fermion::{fermion_ops, FermionPolynomial, FockBasis, LatticeSpec};
pub use operator::{OperatorMatrix, C64, I, ONE, ZERO};
pub use spectral::{
    hermitian_eigen, psd_sqrt, spectrum, unitary, unitary_flow, HermitianEigen, SpectralLevel,
};
pub use superdecomp::{super_decompose, SuperDecomposition};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BracketKind {
    Commutator,
    Anticommutator,
}

/// `AB - BA` or `AB + BA`.
pub fn bracket(a: &OperatorMatrix, b: &OperatorMatrix, kind: BracketKind) -> Result<OperatorMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let ab = a * b;
    let ba = b * a;
    let (out, sym) = match kind {
        BracketKind::Commutator => (&ab - &ba, "-"),
        BracketKind::Anticommutator => (&ab + &ba, "+"),
    };
    Ok(out
        .with_label(format!("[{},{}]{sym}", a.label(), b.label()))
        .with_hint(None))
}

pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    bracket(a, b, BracketKind::Commutator)
}

pub fn anticommutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    bracket(a, b, BracketKind::Anticommutator)
}

/// Gauge angle reduced to `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeAngle(f64);

impl GaugeAngle {
    pub fn new(alpha: f64) -> Self {
        let r = alpha.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU
        Self(if r >= TAU { 0.0 } else { r })
    }

    pub fn radians(&self) -> f64 {
        self.0
    }

    /// `e^{i alpha}`
    pub fn phase(&self) -> C64 {
        C64::from_polar(1.0, self.0)
    }
}

impl From<f64> for GaugeAngle {
    fn from(alpha: f64) -> Self {
        Self::new(alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn pauli_commutator() {
        let c = commutator(&OperatorMatrix::pauli_x(), &OperatorMatrix::pauli_y()).unwrap();
        let expected = OperatorMatrix::pauli_z().scale(C64::new(0.0, 2.0));
        assert!((&c - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn single_mode_anticommutator_is_identity() {
        let a = fermion_ops(&LatticeSpec::new(1, 1).unwrap()).unwrap().remove(0);
        let c = anticommutator(&a, &a.adjoint()).unwrap();
        assert!((&c - &OperatorMatrix::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn bracket_dimension_mismatch() {
        let r = bracket(
            &OperatorMatrix::identity(2),
            &OperatorMatrix::identity(4),
            BracketKind::Commutator,
        );
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn gauge_angle_range() {
        assert!((GaugeAngle::new(-PI / 2.0).radians() - 1.5 * PI).abs() < 1e-15);
        assert!((GaugeAngle::new(2.0 * TAU + 0.5).radians() - 0.5).abs() < 1e-12);
        let a = GaugeAngle::new(-1e-18);
        assert!(a.radians() >= 0.0 && a.radians() < TAU);
    }
}
