use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::operator::{OperatorMatrix, C64};
use crate::error::{Error, Result};

/// Relative gap below which neighbouring eigenvalues are merged into one level.
pub const CLUSTER_TOL: f64 = 1e-8;

/// Relative eigenvalue below which `psd_sqrt` clamps to zero.
pub const PSD_CLAMP_TOL: f64 = 1e-10;

/// Relative eigenvalue below which a matrix counts as materially indefinite.
pub const PSD_REJECT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralLevel {
    pub value: f64,
    pub multiplicity: usize,
}

/// Eigendecomposition `A = V diag(values) V^dag` with ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl HermitianEigen {
    /// `V f(diag) V^dag`
    pub fn map(&self, f: impl Fn(f64) -> C64) -> DMatrix<C64> {
        let mut scaled = self.vectors.clone();
        for (k, lam) in self.values.iter().enumerate() {
            let fk = f(*lam);
            for r in 0..scaled.nrows() {
                scaled[(r, k)] *= fk;
            }
        }
        scaled * self.vectors.adjoint()
    }

    pub fn vector(&self, k: usize) -> DVector<C64> {
        self.vectors.column(k).into_owned()
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn require_hermitian(op: &OperatorMatrix) -> Result<()> {
    if op.hermitian_hint() == Some(false) || !op.is_hermitian() {
        return Err(Error::NotHermitian {
            label: op.label().to_string(),
            deviation: op.hermitian_deviation(),
        });
    }
    Ok(())
}

pub fn hermitian_eigen(op: &OperatorMatrix) -> Result<HermitianEigen> {
    require_hermitian(op)?;
    let m = op.entries();
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Groups sorted eigenvalues into levels; a gap below `CLUSTER_TOL * (1 + |x|)`
/// merges neighbours.
pub fn cluster_levels(sorted: &[f64]) -> Vec<SpectralLevel> {
    let mut levels: Vec<(f64, usize, f64)> = Vec::new();
    let mut prev: Option<f64> = None;
    for &x in sorted {
        match (prev, levels.last_mut()) {
            (Some(p), Some(last)) if (x - p).abs() < CLUSTER_TOL * (1.0 + x.abs()) => {
                last.1 += 1;
                last.2 += x;
            }
            _ => levels.push((x, 1, x)),
        }
        prev = Some(x);
    }
    levels
        .into_iter()
        .map(|(_, m, total)| SpectralLevel {
            value: total / m as f64,
            multiplicity: m,
        })
        .collect()
}

/// Ascending spectrum with multiplicities.
pub fn spectrum(h: &OperatorMatrix) -> Result<Vec<SpectralLevel>> {
    let eig = hermitian_eigen(h)?;
    Ok(cluster_levels(&eig.values))
}

/// Positive square root of a positive semi-definite Hermitian operator.
pub fn psd_sqrt(h: &OperatorMatrix) -> Result<OperatorMatrix> {
    let eig = hermitian_eigen(h)?;
    let scale = eig.max_abs_value();
    if let Some(&lowest) = eig.values.first() {
        if lowest < -PSD_REJECT_TOL * scale.max(f64::MIN_POSITIVE) && lowest < -PSD_CLAMP_TOL {
            return Err(Error::NegativeEigenvalue {
                eigenvalue: lowest,
                norm: scale,
            });
        }
    }
    let root = eig.map(|x| C64::new(x.max(0.0).sqrt(), 0.0));
    Ok(OperatorMatrix::new(root, format!("sqrt({})", h.label()))?.symmetrized())
}

/// `exp(i s G)` for Hermitian `G`.
pub fn unitary(g: &OperatorMatrix, s: f64) -> Result<OperatorMatrix> {
    let eig = hermitian_eigen(g)?;
    let u = eig.map(|x| C64::new(0.0, s * x).exp());
    OperatorMatrix::new(u, format!("exp(i{s}{})", g.label()))
}

/// `exp(i s G) A exp(-i s G)`, computed from the eigendecomposition of `G`.
pub fn unitary_flow(g: &OperatorMatrix, s: f64, a: &OperatorMatrix) -> Result<OperatorMatrix> {
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!("flow parameter {s} is not finite")));
    }
    if g.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: g.dim(),
            right: a.dim(),
        });
    }
    let u = unitary(g, s)?;
    let out = &(&u * a) * &u.adjoint();
    Ok(out
        .with_label(format!("{}({s})", a.label()))
        .with_hint(a.hermitian_hint()))
}

/// Applies a real function to a Hermitian operator.
pub fn hermitian_function(
    h: &OperatorMatrix,
    label: impl Into<String>,
    f: impl Fn(f64) -> C64,
) -> Result<OperatorMatrix> {
    let eig = hermitian_eigen(h)?;
    OperatorMatrix::new(eig.map(f), label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::operator::{I, ONE, ZERO};
    use std::f64::consts::PI;

    #[test]
    fn spectrum_of_sigma_z() {
        let levels = spectrum(&OperatorMatrix::pauli_z()).unwrap();
        assert_eq!(
            levels,
            vec![
                SpectralLevel { value: -1.0, multiplicity: 1 },
                SpectralLevel { value: 1.0, multiplicity: 1 }
            ]
        );
    }

    #[test]
    fn spectrum_rejects_non_hermitian() {
        let a = OperatorMatrix::new(DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]), "a")
            .unwrap();
        assert!(matches!(spectrum(&a), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn clustering_merges_roundoff_splits() {
        let levels = cluster_levels(&[0.0, 1e-13, 1.0, 1.0 + 1e-12, 1.0 + 2e-12, 2.0]);
        assert_eq!(levels.len(), 3);
        assert_eq!(levels[1].multiplicity, 3);
    }

    #[test]
    fn psd_sqrt_examples() {
        let id = OperatorMatrix::identity(3);
        assert!((&psd_sqrt(&id).unwrap() - &id).max_abs() < 1e-14);
        let d = OperatorMatrix::diagonal(&[4.0, 1.0, 0.0], "d");
        let r = psd_sqrt(&d).unwrap();
        let expected = OperatorMatrix::diagonal(&[2.0, 1.0, 0.0], "e");
        assert!((&r - &expected).max_abs() < 1e-14);
    }

    #[test]
    fn psd_sqrt_rejects_indefinite() {
        let d = OperatorMatrix::diagonal(&[1.0, -0.5], "d");
        assert!(matches!(psd_sqrt(&d), Err(Error::NegativeEigenvalue { .. })));
        // round-off negativity is clamped
        let d = OperatorMatrix::diagonal(&[1.0, -1e-13], "d");
        assert!(psd_sqrt(&d).is_ok());
    }

    #[test]
    fn flow_examples() {
        let x = OperatorMatrix::pauli_x();
        let z = OperatorMatrix::pauli_z();
        let same = unitary_flow(&z, 0.0, &x).unwrap();
        assert!((&same - &x).max_abs() < 1e-15);
        let flipped = unitary_flow(&z, PI / 2.0, &x).unwrap();
        assert!((&flipped + &x).max_abs() < 1e-14);
    }

    #[test]
    fn flow_rejects_non_hermitian_generator() {
        let g = OperatorMatrix::new(DMatrix::from_row_slice(2, 2, &[ZERO, I, ZERO, ZERO]), "g")
            .unwrap();
        assert!(unitary_flow(&g, 1.0, &OperatorMatrix::pauli_x()).is_err());
    }
}
