//! Truncated oscillator tensored with one Clifford mode: `H = (q^2 + p^2 - 1)/2 + eta eta^dag`,
//! `G_alpha = eta_alpha a + eta_alpha^dag a^dag` with `a = (q + i p)/sqrt 2`.
//!
//! Index `c d + m`; `eta = |0><1|` on `c`, so the ground state sits at `c = 1, m = 0`.

use nalgebra::DVector;
use serde::Serialize;

use crate::algebra::{commutator, hermitian_eigen, GaugeAngle, OperatorMatrix, C64, I, ONE, ZERO};
use crate::error::{Error, Result};

pub const WITTEN_MIN_CUTOFF: usize = 8;

/// Checks ignore the top quarter of oscillator levels.
pub const BULK_FRACTION: f64 = 0.75;

#[derive(Debug, Clone)]
pub struct WittenLimitModel {
    pub cutoff: usize,
    pub alpha: GaugeAngle,
    pub q: OperatorMatrix,
    pub p: OperatorMatrix,
    /// `e^{i alpha} eta`
    pub eta: OperatorMatrix,
    pub h: OperatorMatrix,
    pub g_alpha: OperatorMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct WittenReport {
    pub cutoff: usize,
    /// `||P ([q, p] - i) P||` on the bulk
    pub ccr_bulk: f64,
    /// `||P (G^2 - H) P||` on the bulk
    pub g_squared_bulk: f64,
    /// largest `|E_k - exact_k|` over bulk levels below `d/2`
    pub spectrum_error: f64,
    pub levels_checked: usize,
    pub ground_multiplicity: usize,
    /// `||eta^dag psi_0|| + ||a psi_0||`
    pub ground_annihilation: f64,
}

/// `{0, 1, 1, 2, 2, ...}`, the first `count` entries.
pub fn witten_spectrum(count: usize) -> Vec<f64> {
    (0..count).map(|k| k.div_ceil(2) as f64).collect()
}

fn lowering(d: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(d, "a", |r, c| {
        if c == r + 1 {
            C64::new((c as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

fn clifford(alpha: GaugeAngle) -> OperatorMatrix {
    OperatorMatrix::from_fn(2, "eta", |r, c| if (r, c) == (0, 1) { alpha.phase() } else { ZERO })
}

impl WittenLimitModel {
    pub fn new(cutoff: usize, alpha: GaugeAngle) -> Result<Self> {
        if cutoff < WITTEN_MIN_CUTOFF {
            return Err(Error::InvalidArgument(format!(
                "cutoff too small: {cutoff} < {WITTEN_MIN_CUTOFF}"
            )));
        }
        let a = lowering(cutoff);
        let ad = a.adjoint();
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        let q1 = (&a + &ad).scale_real(r2).symmetrized();
        let p1 = (&ad - &a).scale(C64::new(0.0, r2)).symmetrized();
        let id_c = OperatorMatrix::identity(2);
        let id_o = OperatorMatrix::identity(cutoff);
        let q = id_c.kron(&q1).with_label("q");
        let p = id_c.kron(&p1).with_label("p");
        let eta = clifford(alpha).kron(&id_o).with_label("eta_alpha");
        let eta_d = eta.adjoint();
        let id = OperatorMatrix::identity(2 * cutoff);

        let osc = (&(&(&q * &q) + &(&p * &p)) - &id).scale_real(0.5);
        let h = (&osc + &(&eta * &eta_d)).symmetrized().with_label("H");
        let plus = (&q + &p.scale(I)).scale_real(r2);
        let minus = (&q - &p.scale(I)).scale_real(r2);
        let g_alpha = (&(&eta * &plus) + &(&eta_d * &minus)).symmetrized().with_label("G_alpha");
        Ok(Self {
            cutoff,
            alpha,
            q,
            p,
            eta,
            h,
            g_alpha,
        })
    }

    pub fn dim(&self) -> usize {
        2 * self.cutoff
    }

    /// Oscillator levels kept by the bulk projection.
    pub fn bulk_levels(&self) -> usize {
        (BULK_FRACTION * self.cutoff as f64).floor() as usize
    }

    /// `P A P` with `P` the projection onto levels below `bulk_levels`.
    pub fn bulk(&self, a: &OperatorMatrix) -> OperatorMatrix {
        let keep = self.bulk_levels();
        let d = self.cutoff;
        OperatorMatrix::from_fn(self.dim(), a.label(), |r, c| {
            if r % d < keep && c % d < keep {
                a.get(r, c)
            } else {
                ZERO
            }
        })
    }

    /// Compression onto the bulk levels, dimension `2 bulk_levels`.
    pub fn restrict(&self, a: &OperatorMatrix) -> OperatorMatrix {
        let keep = self.bulk_levels();
        let d = self.cutoff;
        let idx = |i: usize| (i / keep) * d + i % keep;
        OperatorMatrix::from_fn(2 * keep, a.label(), |r, c| a.get(idx(r), idx(c)))
    }

    fn extend(&self, v: &DVector<C64>) -> DVector<C64> {
        let keep = self.bulk_levels();
        let d = self.cutoff;
        let mut out = DVector::from_element(self.dim(), ZERO);
        for (i, x) in v.iter().enumerate() {
            out[(i / keep) * d + i % keep] = *x;
        }
        out
    }

    /// `(q + i p) / sqrt 2`
    pub fn annihilator(&self) -> OperatorMatrix {
        (&self.q + &self.p.scale(I)).scale_real(std::f64::consts::FRAC_1_SQRT_2)
    }

    pub fn ground_vector(&self) -> DVector<C64> {
        let mut v = DVector::from_element(self.dim(), ZERO);
        v[self.cutoff] = ONE;
        v
    }

    pub fn report(&self) -> Result<WittenReport> {
        let id = OperatorMatrix::identity(self.dim());
        let ccr = &commutator(&self.q, &self.p)? - &id.scale(I);
        let g2 = &(&self.g_alpha * &self.g_alpha) - &self.h;

        let eig = hermitian_eigen(&self.restrict(&self.h))?;
        let half = self.cutoff as f64 / 2.0;
        let low: Vec<f64> = eig.values.iter().copied().filter(|v| *v < half - 1e-6).collect();
        let levels_checked = low.len();
        let exact = witten_spectrum(levels_checked);
        let spectrum_error = low
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let ground_multiplicity = eig.values.iter().filter(|v| v.abs() < 1e-8).count();

        let psi = self.extend(&eig.vector(0));
        let ground_annihilation =
            self.eta.adjoint().apply(&psi).norm() + self.annihilator().apply(&psi).norm();
        Ok(WittenReport {
            cutoff: self.cutoff,
            ccr_bulk: self.bulk(&ccr).norm(),
            g_squared_bulk: self.bulk(&g2).norm(),
            spectrum_error,
            levels_checked,
            ground_multiplicity,
            ground_annihilation,
        })
    }

    /// Residuals of the limiting derivative relations on the bulk:
    /// `dot q = p`, `dot p = -q`, `dot eta = i eta`, `q' = i (eta - eta^dag)/sqrt 2`,
    /// `p' = -(eta + eta^dag)/sqrt 2`, `eta' = -i [eta, eta^dag] (q - i p)/sqrt 2`.
    pub fn derivative_relations(&self) -> Result<Vec<(&'static str, f64, Option<f64>)>> {
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        let mi = C64::new(0.0, -1.0);
        let dt = |a: &OperatorMatrix| -> Result<OperatorMatrix> { Ok(commutator(a, &self.h)?.scale(mi)) };
        let ds = |a: &OperatorMatrix| -> Result<OperatorMatrix> { Ok(commutator(a, &self.g_alpha)?.scale(mi)) };
        let eta = &self.eta;
        let eta_d = eta.adjoint();
        let f = commutator(eta, &eta_d)?;
        let minus = (&self.q - &self.p.scale(I)).scale_real(r2);
        let res = |lhs: &OperatorMatrix, rhs: &OperatorMatrix| self.bulk(&(lhs - rhs)).norm();

        let diff = (eta - &eta_d).scale_real(r2);
        let sum = (eta + &eta_d).scale_real(r2);
        let qp = ds(&self.q)?;
        let pp = ds(&self.p)?;
        let ep = ds(eta)?;
        let ep_literal = (&minus * &f).scale_real(-1.0);
        Ok(vec![
            ("dot q = p", res(&dt(&self.q)?, &self.p), None),
            ("dot p = -q", res(&dt(&self.p)?, &self.q.scale_real(-1.0)), None),
            ("dot eta = i eta", res(&dt(eta)?, &eta.scale(I)), None),
            ("q' = i (eta - eta^dag)/sqrt 2", res(&qp, &diff.scale(I)), Some(res(&qp, &diff))),
            ("p' = -(eta + eta^dag)/sqrt 2", res(&pp, &sum.scale_real(-1.0)), Some(res(&pp, &sum))),
            (
                "eta' = -i [eta, eta^dag] (q - i p)/sqrt 2",
                res(&ep, &(&f * &minus).scale(mi)),
                Some(res(&ep, &ep_literal)),
            ),
        ])
    }
}

/// `max_alpha ||G_alpha psi_0||` with `psi_0` the numerically computed ground vector of the
/// bulk Hamiltonian, which carries no gauge angle.
pub fn ground_gauge_defect(cutoff: usize, alphas: &[f64]) -> Result<f64> {
    let base = WittenLimitModel::new(cutoff, GaugeAngle::new(0.0))?;
    let eig = hermitian_eigen(&base.restrict(&base.h))?;
    let psi = base.extend(&eig.vector(0));
    let mut worst = 0.0f64;
    for &a in alphas {
        let m = WittenLimitModel::new(cutoff, GaugeAngle::new(a))?;
        worst = worst.max(m.g_alpha.apply(&psi).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_and_ground_state() {
        let m = WittenLimitModel::new(64, GaugeAngle::new(0.7)).unwrap();
        let r = m.report().unwrap();
        assert!(r.ccr_bulk < 1e-10, "{r:?}");
        assert!(r.g_squared_bulk < 1e-10, "{r:?}");
        assert!(r.spectrum_error < 1e-8, "{r:?}");
        assert_eq!(r.ground_multiplicity, 1);
        assert!(r.ground_annihilation < 1e-8);
        let psi = m.ground_vector();
        assert!(m.h.apply(&psi).norm() < 1e-12);
    }

    #[test]
    fn first_excited_pair() {
        assert_eq!(witten_spectrum(5), vec![0.0, 1.0, 1.0, 2.0, 2.0]);
    }

    #[test]
    fn ground_state_is_gauge_independent() {
        assert!(ground_gauge_defect(16, &[0.0, 0.3, 1.1, 2.5]).unwrap() < 1e-10);
    }

    #[test]
    fn derivative_relations_hold_on_the_bulk() {
        let m = WittenLimitModel::new(24, GaugeAngle::new(0.5)).unwrap();
        for (name, res, literal) in m.derivative_relations().unwrap() {
            assert!(res < 1e-10, "{name}: {res}");
            if let Some(l) = literal {
                assert!(l > 1e-3, "{name}: literal {l}");
            }
        }
    }

    #[test]
    fn rejects_small_cutoff() {
        assert!(WittenLimitModel::new(7, GaugeAngle::new(0.0)).is_err());
    }
}
