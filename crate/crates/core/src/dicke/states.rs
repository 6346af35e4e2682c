use std::f64::consts::FRAC_PI_4;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::ops::DickeOperators;
use super::quadrature::{log_factorials, wallis_integral, QuadratureGrid};
use crate::algebra::{GaugeAngle, OperatorMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StateLabel {
    Ground,
    /// `S_z = 0` member of the ceiling pair
    Ceiling,
    /// `S_z = 2` member of the ceiling pair
    CeilingUpper,
    /// ceiling eigenvector of `G_alpha`
    CeilingG(f64),
    Bogoliubov(f64),
    Coherent,
    Custom(String),
}

#[derive(Debug, Clone)]
pub struct DickeState {
    n: usize,
    vector: DVector<C64>,
    label: StateLabel,
}

impl DickeState {
    pub fn new(n: usize, vector: DVector<C64>, label: StateLabel) -> Result<Self> {
        if vector.len() != 2 * (n + 1) {
            return Err(Error::DimensionMismatch {
                left: 2 * (n + 1),
                right: vector.len(),
            });
        }
        let norm = vector.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Invariant(format!("state norm {norm} differs from 1")));
        }
        Ok(Self { n, vector, label })
    }

    /// Normalizes `vector` first; fails with `VanishingNorm` when it is numerically zero.
    pub fn normalized(n: usize, vector: DVector<C64>, label: StateLabel) -> Result<Self> {
        let norm = vector.norm();
        if !norm.is_finite() || norm <= 1e-300 {
            return Err(Error::VanishingNorm(norm));
        }
        Self::new(n, vector / C64::new(norm, 0.0), label)
    }

    /// `spin (x) |c>` with a normalized spin vector.
    pub fn from_spin(n: usize, spin: &DVector<C64>, c: usize, label: StateLabel) -> Result<Self> {
        if spin.len() != n + 1 || c > 1 {
            return Err(Error::DimensionMismatch {
                left: n + 1,
                right: spin.len(),
            });
        }
        let mut v = DVector::from_element(2 * (n + 1), ZERO);
        v.rows_mut(c * (n + 1), n + 1).copy_from(spin);
        Self::normalized(n, v, label)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vector(&self) -> &DVector<C64> {
        &self.vector
    }

    pub fn label(&self) -> &StateLabel {
        &self.label
    }

    /// Spin vector of the Clifford component `c`.
    pub fn component(&self, c: usize) -> DVector<C64> {
        self.vector.rows(c * (self.n + 1), self.n + 1).into_owned()
    }

    pub fn expectation(&self, op: &OperatorMatrix) -> Result<C64> {
        if op.dim() != self.vector.len() {
            return Err(Error::DimensionMismatch {
                left: op.dim(),
                right: self.vector.len(),
            });
        }
        Ok(op.matrix_element(&self.vector, &self.vector))
    }

    /// `<psi|A|psi>` for an operator given by its action.
    pub fn expect_with(&self, f: impl Fn(&DVector<C64>) -> Result<DVector<C64>>) -> Result<C64> {
        Ok(self.vector.dotc(&f(&self.vector)?))
    }
}

pub fn overlap(x: &DickeState, y: &DickeState) -> Result<C64> {
    if x.n != y.n {
        return Err(Error::DimensionMismatch {
            left: x.n,
            right: y.n,
        });
    }
    Ok(x.vector.dotc(&y.vector))
}

fn basis_spin(n: usize, k: usize) -> DVector<C64> {
    let mut v = DVector::from_element(n + 1, ZERO);
    v[k] = ONE;
    v
}

/// All spins down, tensored with the `eta^dag`-annihilated Clifford vector.
pub fn ground_state(ops: &DickeOperators) -> Result<DickeState> {
    DickeState::from_spin(ops.n(), &basis_spin(ops.n(), 0), 1, StateLabel::Ground)
}

/// `(psi_1, psi_2)` with `psi_2` the normalized `S_+^{N/2}|lowest>` and `psi_1` the normalized
/// `S_+ psi_2`, both on the `eta^dag`-annihilated Clifford vector.
pub fn ceiling_state_ladder(ops: &DickeOperators) -> Result<(DickeState, DickeState)> {
    let n = ops.n();
    if !n.is_multiple_of(2) {
        return Err(Error::OddParticleNumber(n));
    }
    let mut v = basis_spin(n, 0);
    for _ in 0..n / 2 {
        v = ops.apply_s_plus(&v)?;
        let norm = v.norm();
        v /= C64::new(norm, 0.0);
    }
    let psi2 = DickeState::from_spin(n, &v, 1, StateLabel::Ceiling)?;
    let raised = ops.apply_s_plus(&v)?;
    let psi1 = DickeState::from_spin(n, &raised, 1, StateLabel::CeilingUpper)?;
    Ok((psi1, psi2))
}

/// Eigenvector of `G_alpha` with the largest eigenvalue `sqrt(E_N / N)`, `4 E_N = N (N + 2)`:
/// `(psi_2 (x) |1> + e^{i alpha} S_- psi_2 / |S_- psi_2| (x) |0>) / sqrt(2)`.
pub fn ceiling_g_eigenvector(ops: &DickeOperators, alpha: GaugeAngle) -> Result<(DickeState, f64)> {
    let n = ops.n();
    let (_, psi2) = ceiling_state_ladder(ops)?;
    let spin = psi2.component(1);
    let lowered = ops.apply_s_minus(&spin)?;
    let e_n = lowered.norm_squared();
    let lowered = lowered / C64::new(e_n.sqrt(), 0.0);
    let v = ops.join(&(lowered * alpha.phase()), &spin) / C64::new(2f64.sqrt(), 0.0);
    let state = DickeState::normalized(n, v, StateLabel::CeilingG(alpha.radians()))?;
    Ok((state, (e_n / n as f64).sqrt()))
}

/// Dicke amplitudes `sqrt(C(N, k)) up^k down^(N - k)` of the product state `(up, down)^{(x) N}`.
pub fn product_state_amplitudes(n: usize, up: C64, down: C64) -> DVector<C64> {
    let lf = log_factorials(n);
    let (ru, pu) = up.to_polar();
    let (rd, pd) = down.to_polar();
    DVector::from_fn(n + 1, |k, _| {
        let j = n - k;
        if (k > 0 && ru == 0.0) || (j > 0 && rd == 0.0) {
            return ZERO;
        }
        let mut log = 0.5 * (lf[n] - lf[k] - lf[j]);
        if k > 0 {
            log += k as f64 * ru.ln();
        }
        if j > 0 {
            log += j as f64 * rd.ln();
        }
        C64::from_polar(log.exp(), k as f64 * pu + j as f64 * pd)
    })
}

/// Every spin in `(e^{i alpha}, e^{-i alpha}) / sqrt(2)` (up, down), i.e. along
/// `(cos 2 alpha, -sin 2 alpha, 0)`; Clifford factor annihilated by `eta^dag`.
pub fn bogoliubov_state(ops: &DickeOperators, alpha: f64) -> Result<DickeState> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let spin = product_state_amplitudes(ops.n(), C64::from_polar(s, alpha), C64::from_polar(s, -alpha));
    DickeState::from_spin(ops.n(), &spin, 1, StateLabel::Bogoliubov(alpha))
}

#[derive(Debug, Clone)]
pub struct CeilingIntegral {
    pub state: DickeState,
    /// `C = (pi int cos^N)^{-1/2}`
    pub c_constant: f64,
    /// norm of `C` times the quadrature sum before normalization
    pub raw_norm: f64,
}

/// `C int_{-pi/2}^{pi/2} e^{i alpha S_z} e^{i (pi/4) S_y} |lowest> d alpha` by the trapezoidal rule.
/// `e^{i (pi/4) S_y}` turns every spin from down to `+x`: `(1, 1)/sqrt(2)` per site.
pub fn ceiling_state_integral(ops: &DickeOperators, grid: &QuadratureGrid) -> Result<CeilingIntegral> {
    let n = ops.n();
    if !n.is_multiple_of(2) {
        return Err(Error::OddParticleNumber(n));
    }
    grid.require_nodes(4 * n)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rotated = product_state_amplitudes(n, C64::new(s, 0.0), C64::new(s, 0.0));
    let w = grid.weight();
    let mut acc = DVector::from_element(n + 1, ZERO);
    for alpha in grid.nodes() {
        for k in 0..=n {
            acc[k] += rotated[k] * C64::new(0.0, alpha * ops.sz_value(k)).exp() * w;
        }
    }
    let c_constant = 1.0 / (std::f64::consts::PI * wallis_integral(n)).sqrt();
    acc *= C64::new(c_constant, 0.0);
    let raw_norm = acc.norm();
    let state = DickeState::from_spin(n, &acc, 1, StateLabel::Ceiling)?;
    Ok(CeilingIntegral {
        state,
        c_constant,
        raw_norm,
    })
}

/// `e^{i (pi/4) S_y}` is the rotation used above; exposed for checks against dense matrices.
pub const CEILING_ROTATION_ANGLE: f64 = FRAC_PI_4;

/// Normalized `sum_j w g(alpha_j) |psi_{alpha_j}>` over a grid on `[-pi, pi)`.
pub fn coherent_superposition(
    ops: &DickeOperators,
    weights: impl Fn(f64) -> C64,
    grid: &QuadratureGrid,
) -> Result<DickeState> {
    let n = ops.n();
    let mut acc = DVector::from_element(n + 1, ZERO);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let w = grid.weight();
    for alpha in grid.nodes() {
        let g = weights(alpha);
        if g == ZERO {
            continue;
        }
        let spin = product_state_amplitudes(n, C64::from_polar(s, alpha), C64::from_polar(s, -alpha));
        acc += spin * (g * w);
    }
    let norm = acc.norm();
    let scale = w * grid.n_nodes() as f64;
    if norm <= 1e-10 * scale {
        return Err(Error::VanishingNorm(norm));
    }
    DickeState::from_spin(n, &acc, 1, StateLabel::Coherent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unitary;
    use crate::dicke::ops::collective_ops;
    use std::f64::consts::PI;

    #[test]
    fn ground_state_properties() {
        let ops = collective_ops(6).unwrap();
        let gs = ground_state(&ops).unwrap();
        let h = ops.build_hss().unwrap();
        assert!(gs.expectation(&h).unwrap().norm() < 1e-15);
        let g = ops.build_g_alpha(GaugeAngle::new(0.7)).unwrap();
        assert!(g.apply(gs.vector()).norm() < 1e-15);
        let sx = ops.lifted(&ops.s_x().unwrap()).unwrap();
        assert!(gs.expectation(&sx).unwrap().norm() < 1e-15);
        let sz = ops.lifted(&ops.s_z().unwrap()).unwrap();
        assert!((gs.expectation(&sz).unwrap().re + 6.0).abs() < 1e-15);
    }

    #[test]
    fn ceiling_ladder_relations() {
        let ops = collective_ops(2).unwrap();
        let (_, psi2) = ceiling_state_ladder(&ops).unwrap();
        assert!((psi2.component(1)[1] - ONE).norm() < 1e-15);
        for n in [4usize, 10, 100] {
            let ops = collective_ops(n).unwrap();
            let (psi1, psi2) = ceiling_state_ladder(&ops).unwrap();
            let target = (n * (n + 2)) as f64;
            // S^2 - S_z^2 + 2 S_z = 4 S_+ S_-, S^2 - S_z^2 - 2 S_z = 4 S_- S_+
            let v1 = psi1.component(1);
            let r1 = ops.apply_s_plus(&ops.apply_s_minus(&v1).unwrap()).unwrap() * C64::new(4.0, 0.0) - &v1 * C64::new(target, 0.0);
            let v2 = psi2.component(1);
            let r2 = ops.apply_s_minus(&ops.apply_s_plus(&v2).unwrap()).unwrap() * C64::new(4.0, 0.0) - &v2 * C64::new(target, 0.0);
            assert!(r1.norm() <= 1e-9 * target);
            assert!(r2.norm() <= 1e-9 * target);
            assert!(ops.apply_s_z(&v2).unwrap().norm() < 1e-12);
        }
        assert!(matches!(
            ceiling_state_ladder(&collective_ops(3).unwrap()),
            Err(Error::OddParticleNumber(3))
        ));
    }

    #[test]
    fn ceiling_g_eigenvector_eigenvalue() {
        for n in [2usize, 4, 8] {
            let ops = collective_ops(n).unwrap();
            for alpha in [0.0, 0.9] {
                let a = GaugeAngle::new(alpha);
                let (v, lambda) = ceiling_g_eigenvector(&ops, a).unwrap();
                let g = ops.build_g_alpha(a).unwrap();
                let r = g.apply(v.vector()) - v.vector() * C64::new(lambda, 0.0);
                assert!(r.norm() < 1e-12);
                let e_n = (n * (n + 2)) as f64 / 4.0;
                assert!((lambda * lambda * n as f64 - e_n).abs() < 1e-10);
                let top = crate::algebra::hermitian_eigen(&g).unwrap().values;
                assert!((top[top.len() - 1] - lambda).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn integral_matches_ladder() {
        for n in [2usize, 8, 40] {
            let ops = collective_ops(n).unwrap();
            let grid = QuadratureGrid::half_circle(4 * n).unwrap();
            let integral = ceiling_state_integral(&ops, &grid).unwrap();
            let (_, psi2) = ceiling_state_ladder(&ops).unwrap();
            let ov = overlap(&psi2, &integral.state).unwrap().norm();
            assert!(ov >= 1.0 - 1e-10, "n={n} overlap {ov}");
            assert!((integral.raw_norm - 1.0).abs() < 1e-8);
            let sz = ops.apply_s_z(&integral.state.component(1)).unwrap();
            assert!(sz.norm() < 1e-12);
        }
        let ops = collective_ops(2).unwrap();
        let grid = QuadratureGrid::half_circle(64).unwrap();
        let integral = ceiling_state_integral(&ops, &grid).unwrap();
        let (_, psi2) = ceiling_state_ladder(&ops).unwrap();
        assert!(overlap(&psi2, &integral.state).unwrap().norm() >= 1.0 - 1e-10);
    }

    #[test]
    fn integral_rejects_coarse_grid() {
        let ops = collective_ops(10).unwrap();
        let grid = QuadratureGrid::half_circle(39).unwrap();
        assert!(matches!(
            ceiling_state_integral(&ops, &grid),
            Err(Error::CoarseGrid { nodes: 39, required: 40 })
        ));
    }

    #[test]
    fn rotation_matches_dense_exponential() {
        let n = 6;
        let ops = collective_ops(n).unwrap();
        let sy = ops.s_y().unwrap();
        let u = unitary(&sy, CEILING_ROTATION_ANGLE).unwrap();
        let rotated = u.apply(&basis_spin(n, 0));
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let formula = product_state_amplitudes(n, C64::new(s, 0.0), C64::new(s, 0.0));
        assert!((rotated - formula).norm() < 1e-12);
    }

    #[test]
    fn bogoliubov_basics() {
        let ops = collective_ops(1).unwrap();
        let bs = bogoliubov_state(&ops, 0.0).unwrap();
        let v = bs.component(1);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0] - C64::new(s, 0.0)).norm() < 1e-15);
        assert!((v[1] - C64::new(s, 0.0)).norm() < 1e-15);
        for n in [1usize, 5, 50] {
            let ops = collective_ops(n).unwrap();
            for alpha in [0.0, 0.3, 1.2] {
                let bs = bogoliubov_state(&ops, alpha).unwrap();
                let sx = bs.expect_with(|v| ops.lift_apply(v, |w| ops.apply_s_x(w))).unwrap();
                let sy = bs.expect_with(|v| ops.lift_apply(v, |w| ops.apply_s_y(w))).unwrap();
                assert!((sx.re / n as f64 - (2.0 * alpha).cos()).abs() < 1e-12);
                assert!((sy.re / n as f64 + (2.0 * alpha).sin()).abs() < 1e-12);
            }
            for (a, b) in [(0.0, 0.4), (0.2, 1.0)] {
                let x = bogoliubov_state(&ops, a).unwrap();
                let y = bogoliubov_state(&ops, b).unwrap();
                let ov = overlap(&x, &y).unwrap().norm();
                assert!((ov - (a - b).cos().abs().powi(n as i32)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn coherent_superposition_recovers_ceiling() {
        for n in [2usize, 8, 64, 200] {
            let ops = collective_ops(n).unwrap();
            let grid = QuadratureGrid::full_circle(2 * n + 2).unwrap();
            let coh = coherent_superposition(&ops, |_| ONE, &grid).unwrap();
            let (_, psi2) = ceiling_state_ladder(&ops).unwrap();
            assert!(overlap(&psi2, &coh).unwrap().norm() >= 1.0 - 1e-6, "n={n}");
        }
        let ops = collective_ops(3).unwrap();
        let grid = QuadratureGrid::full_circle(16).unwrap();
        assert!(matches!(
            coherent_superposition(&ops, |_| ONE, &grid),
            Err(Error::VanishingNorm(_))
        ));
    }

    #[test]
    fn concentrated_weight_approaches_bogoliubov() {
        let n = 10;
        let ops = collective_ops(n).unwrap();
        let grid = QuadratureGrid::full_circle(2000).unwrap();
        let width: f64 = 0.01;
        let coh = coherent_superposition(&ops, |a| C64::new((-(a * a) / (2.0 * width * width)).exp(), 0.0), &grid).unwrap();
        let bs = bogoliubov_state(&ops, 0.0).unwrap();
        assert!(overlap(&bs, &coh).unwrap().norm() > 0.999);
    }

    #[test]
    fn incoherent_average_of_local_spin() {
        // <sigma_x^1> in the g = 1 superposition equals the angular average of cos 2 alpha
        let n = 8;
        let ops = collective_ops(n).unwrap();
        let grid = QuadratureGrid::full_circle(64).unwrap();
        let coh = coherent_superposition(&ops, |_| ONE, &grid).unwrap();
        let sx = coh.expect_with(|v| ops.lift_apply(v, |w| ops.apply_s_x(w))).unwrap().re / n as f64;
        let avg = grid.integrate(|a| (2.0 * a).cos()) / (2.0 * PI);
        assert!((sx - avg).abs() < 1e-12);
        let sxx = coh
            .expect_with(|v| ops.lift_apply(v, |w| ops.apply_s_x(&ops.apply_s_x(w)?)))
            .unwrap()
            .re;
        let pair = (sxx - n as f64) / (n * (n - 1)) as f64;
        let avg_pair = grid.integrate(|a| (2.0 * a).cos().powi(2)) / (2.0 * PI);
        // finite-N coherent state differs from the mixture at O(1/N)
        assert!((pair - avg_pair).abs() < 2.0 / n as f64);
    }
}
