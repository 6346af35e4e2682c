//! Model-independent structure carried by a nilpotent supercharge `Q`.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use super::operator::{OperatorMatrix, C64};
use super::spectral::{cluster_levels, hermitian_eigen, SpectralLevel};
use super::{anticommutator, commutator, GaugeAngle};
use crate::error::{Error, Result};

/// `||Q^2|| <= NILPOTENCY_TOL * ||Q||^2`
pub const NILPOTENCY_TOL: f64 = 1e-12;

/// Eigenvalues of `H` below `KERNEL_CUTOFF * ||H||` count as zero.
pub const KERNEL_CUTOFF: f64 = 1e-9;

/// Retained eigenvalues closer than this factor above the cutoff make `sqrt(H)^-1`
/// ill-conditioned.
pub const CONDITION_MARGIN: f64 = 1e3;

pub const CLIFFORD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize)]
pub struct SuperResiduals {
    /// `||Q^2|| / ||Q||^2`
    pub nilpotency: f64,
    /// `||eta eta^dag + eta^dag eta - (1 - P0)||`
    pub clifford: f64,
    /// `max_alpha ||G_alpha^2 - H||` over the requested angle, 0 and pi/2
    pub g_squared: f64,
    /// largest mismatch between the spectrum of `G` and `{0 (dim P0), +-sqrt(E)}`
    pub g_spectrum: f64,
    /// `||eta^2||`
    pub eta_nilpotency: f64,
    pub kernel_dim: usize,
}

#[derive(Debug, Clone)]
pub struct SuperDecomposition {
    pub q: OperatorMatrix,
    pub h: OperatorMatrix,
    pub p0: OperatorMatrix,
    pub eta: OperatorMatrix,
    pub f: OperatorMatrix,
    pub alpha: GaugeAngle,
    pub g_alpha: OperatorMatrix,
    /// Strictly positive levels of `H`.
    pub paired_spectrum: Vec<SpectralLevel>,
    pub residuals: SuperResiduals,
}

/// `||Q^2|| / ||Q||^2`; zero for `Q = 0`.
pub fn nilpotency_residual(q: &OperatorMatrix) -> f64 {
    let qn = q.norm();
    if qn == 0.0 {
        return 0.0;
    }
    (q * q).norm() / (qn * qn)
}

pub fn gauge_generator(q: &OperatorMatrix, alpha: GaugeAngle) -> OperatorMatrix {
    let g = &q.scale(alpha.phase()) + &q.adjoint().scale(alpha.phase().conj());
    g.symmetrized().with_label(format!("G_{:.4}", alpha.radians()))
}

/// Decomposes a nilpotent `Q` into `(H, P0, eta, F, G_alpha)` and checks every
/// structural identity, failing with `Invariant` on the first violation.
pub fn super_decompose(q: &OperatorMatrix, alpha: GaugeAngle) -> Result<SuperDecomposition> {
    let nilpotency = nilpotency_residual(q);
    if nilpotency > NILPOTENCY_TOL {
        return Err(Error::NotNilpotent { residual: nilpotency });
    }
    let dim = q.dim();
    let qd = q.adjoint();
    let h = anticommutator(q, &qd)?.symmetrized().with_label("H");
    let eig = hermitian_eigen(&h)?;
    let h_norm = eig.max_abs_value();
    let cutoff = KERNEL_CUTOFF * h_norm;

    let mut inv_root = vec![C64::new(0.0, 0.0); dim];
    let mut kernel = vec![false; dim];
    let mut smallest_kept = f64::INFINITY;
    for (k, &lam) in eig.values.iter().enumerate() {
        if lam <= cutoff {
            kernel[k] = true;
        } else {
            inv_root[k] = C64::new(1.0 / lam.sqrt(), 0.0);
            smallest_kept = smallest_kept.min(lam);
        }
    }
    if smallest_kept.is_finite() && smallest_kept < CONDITION_MARGIN * cutoff {
        return Err(Error::IllConditioned {
            smallest: smallest_kept,
            cutoff,
        });
    }
    let kernel_dim = kernel.iter().filter(|&&k| k).count();

    // P0 and H^{-1/2} through the eigenbasis, column by column
    let v = &eig.vectors;
    let mut p0 = nalgebra::DMatrix::<C64>::zeros(dim, dim);
    let mut scaled = v.clone();
    for k in 0..dim {
        if kernel[k] {
            let col = v.column(k);
            p0 += col * col.adjoint();
        }
        for r in 0..dim {
            scaled[(r, k)] *= inv_root[k];
        }
    }
    let inv_sqrt_h = OperatorMatrix::new(&scaled * v.adjoint(), "H^-1/2")?;
    let p0 = OperatorMatrix::new(p0, "P0")?.symmetrized();

    let eta = (q * &inv_sqrt_h).with_label("eta");
    let eta_d = eta.adjoint();
    let f = commutator(&eta, &eta_d)?.symmetrized().with_label("F");
    let id = OperatorMatrix::identity(dim);

    let clifford = (&anticommutator(&eta, &eta_d)? - &(&id - &p0)).norm();
    if clifford > CLIFFORD_TOL {
        return Err(Error::Invariant(format!(
            "eta eta^dag + eta^dag eta != 1 - P0 (residual {clifford:.3e})"
        )));
    }
    let eta_nilpotency = (&eta * &eta).norm();

    let levels = cluster_levels(&eig.values);
    let paired_spectrum: Vec<SpectralLevel> = levels
        .iter()
        .filter(|l| l.value > cutoff)
        .copied()
        .collect();
    if let Some(odd) = paired_spectrum.iter().find(|l| l.multiplicity % 2 != 0) {
        return Err(Error::Invariant(format!(
            "positive eigenvalue {} of H has odd multiplicity {}",
            odd.value, odd.multiplicity
        )));
    }

    let g_alpha = gauge_generator(q, alpha);
    let mut g_squared: f64 = 0.0;
    for a in [alpha, GaugeAngle::new(0.0), GaugeAngle::new(FRAC_PI_2)] {
        let g = gauge_generator(q, a);
        g_squared = g_squared.max((&(&g * &g) - &h).norm());
    }
    let g_tol = 1e-10 * h_norm.max(1.0);
    if g_squared > g_tol {
        return Err(Error::Invariant(format!(
            "G_alpha^2 != H (residual {g_squared:.3e})"
        )));
    }

    let g_spectrum = g_spectrum_mismatch(&g_alpha, kernel_dim, &paired_spectrum)?;
    if g_spectrum > 1e-8 * (1.0 + h_norm.sqrt()) {
        return Err(Error::Invariant(format!(
            "spectrum of G is not {{+-sqrt(E)}} (mismatch {g_spectrum:.3e})"
        )));
    }

    Ok(SuperDecomposition {
        q: q.clone().with_label("Q"),
        h,
        p0,
        eta,
        f,
        alpha,
        g_alpha,
        paired_spectrum,
        residuals: SuperResiduals {
            nilpotency,
            clifford,
            g_squared,
            g_spectrum,
            eta_nilpotency,
            kernel_dim,
        },
    })
}

/// Compares the sorted spectrum of `G` to the multiset built from `kernel_dim` zeros
/// and, for every positive level `E` of multiplicity `2k`, `k` copies of `+-sqrt(E)`.
fn g_spectrum_mismatch(
    g: &OperatorMatrix,
    kernel_dim: usize,
    paired: &[SpectralLevel],
) -> Result<f64> {
    let actual = hermitian_eigen(g)?.values;
    let mut expected = vec![0.0; kernel_dim];
    for level in paired {
        let root = level.value.sqrt();
        for _ in 0..level.multiplicity / 2 {
            expected.push(root);
            expected.push(-root);
        }
    }
    if expected.len() != actual.len() {
        return Ok(f64::INFINITY);
    }
    expected.sort_by(f64::total_cmp);
    Ok(actual
        .iter()
        .zip(&expected)
        .map(|(a, e)| (a - e).abs())
        .fold(0.0, f64::max))
}
