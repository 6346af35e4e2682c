//! Fluctuation operators `W_N(alpha, beta) = exp{i (alpha S_x - beta S_y) / sqrt(2N)}` and
//! their Gaussian and Weyl limits.

use serde::{Deserialize, Serialize};

use crate::algebra::C64;
use crate::dicke::{DickeOperators, DickeState};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    /// divide by `sqrt(2N)`
    MesoscopicSqrtN,
    /// divide by `N`
    MacroscopicN,
}

impl Scaling {
    pub fn divisor(&self, n: usize) -> f64 {
        match self {
            Scaling::MesoscopicSqrtN => (2.0 * n as f64).sqrt(),
            Scaling::MacroscopicN => n as f64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluctuationParams {
    pub alpha: f64,
    pub beta: f64,
    pub scaling: Scaling,
}

impl FluctuationParams {
    pub fn mesoscopic(alpha: f64, beta: f64) -> Self {
        Self {
            alpha,
            beta,
            scaling: Scaling::MesoscopicSqrtN,
        }
    }
}

fn check_state(ops: &DickeOperators, state: &DickeState) -> Result<()> {
    if ops.n() != state.n() {
        return Err(Error::DimensionMismatch {
            left: ops.n(),
            right: state.n(),
        });
    }
    Ok(())
}

/// `W_N` applied to a product vector (both Clifford components).
pub fn apply_w(ops: &DickeOperators, params: &FluctuationParams, v: &nalgebra::DVector<C64>) -> Result<nalgebra::DVector<C64>> {
    let d = params.scaling.divisor(ops.n());
    ops.lift_apply(v, |s| ops.exp_i_planar(params.alpha / d, params.beta / d, s))
}

/// `<state| W_N(alpha, beta) |state>`, exact through the `S_x` eigenbasis.
pub fn fluctuation_expectation(ops: &DickeOperators, state: &DickeState, params: &FluctuationParams) -> Result<C64> {
    check_state(ops, state)?;
    state.expect_with(|v| apply_w(ops, params, v))
}

/// `e^{-(alpha^2 + beta^2)/4}`
pub fn gaussian_target(alpha: f64, beta: f64) -> f64 {
    (-(alpha * alpha + beta * beta) / 4.0).exp()
}

/// Closed form on the ground state: `cos^N(sqrt(alpha^2 + beta^2) / sqrt(2N))`.
pub fn ground_state_closed_form(n: usize, alpha: f64, beta: f64) -> f64 {
    let theta = alpha.hypot(beta) / (2.0 * n as f64).sqrt();
    theta.cos().powi(n as i32)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylProbe {
    /// `<W_N(alpha, 0) W_N(0, beta)>`
    pub product: C64,
    /// `|<W_N(alpha, beta)>|`
    pub gaussian_modulus: f64,
    /// `arg(product / gaussian_modulus)`
    pub phase: f64,
}

/// Ordered product of the two one-parameter fluctuation operators. `reversed` puts
/// `W_N(0, beta)` on the left.
pub fn weyl_relation_probe_ordered(
    ops: &DickeOperators,
    state: &DickeState,
    alpha: f64,
    beta: f64,
    reversed: bool,
) -> Result<WeylProbe> {
    check_state(ops, state)?;
    let wa = FluctuationParams::mesoscopic(alpha, 0.0);
    let wb = FluctuationParams::mesoscopic(0.0, beta);
    let (left, right) = if reversed { (wb, wa) } else { (wa, wb) };
    let product = state.expect_with(|v| {
        let w = apply_w(ops, &right, v)?;
        apply_w(ops, &left, &w)
    })?;
    let gaussian_modulus = fluctuation_expectation(ops, state, &FluctuationParams::mesoscopic(alpha, beta))?.norm();
    let phase = if gaussian_modulus > 0.0 {
        (product / gaussian_modulus).arg()
    } else {
        0.0
    };
    Ok(WeylProbe {
        product,
        gaussian_modulus,
        phase,
    })
}

pub fn weyl_relation_probe(ops: &DickeOperators, state: &DickeState, alpha: f64, beta: f64) -> Result<WeylProbe> {
    weyl_relation_probe_ordered(ops, state, alpha, beta, false)
}

/// Axis of a one-parameter mesoscopic probe `exp(i r S_axis / sqrt N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

/// `<state| exp(i r S_axis / sqrt N) |state>`; on `BS(0)` the `y` and `z` probes tend to
/// `e^{-r^2/2}`.
pub fn bs_gaussian_probe(ops: &DickeOperators, state: &DickeState, r: f64, axis: Axis) -> Result<C64> {
    check_state(ops, state)?;
    let x = r / (ops.n() as f64).sqrt();
    state.expect_with(|v| match axis {
        Axis::X => ops.lift_apply(v, |s| ops.exp_i_sx(x, s)),
        Axis::Y => ops.lift_apply(v, |s| ops.exp_i_planar(0.0, -x, s)),
        Axis::Z => ops.lift_apply(v, |s| {
            Ok(nalgebra::DVector::from_fn(s.len(), |k, _| {
                s[k] * C64::new(0.0, x * ops.sz_value(k)).exp()
            }))
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unitary;
    use crate::dicke::{bogoliubov_state, collective_ops, ground_state};

    #[test]
    fn trivial_arguments() {
        let ops = collective_ops(12).unwrap();
        let gs = ground_state(&ops).unwrap();
        let v = fluctuation_expectation(&ops, &gs, &FluctuationParams::mesoscopic(0.0, 0.0)).unwrap();
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-14);
        let p = weyl_relation_probe(&ops, &gs, 0.0, 1.3).unwrap();
        assert!(p.phase.abs() < 1e-12);
    }

    #[test]
    fn matches_dense_exponential() {
        let ops = collective_ops(6).unwrap();
        let (a, b) = (0.8, -1.7);
        let d = (12.0f64).sqrt();
        let gen = &ops.lifted(&ops.s_x().unwrap()).unwrap().scale_real(a / d)
            - &ops.lifted(&ops.s_y().unwrap()).unwrap().scale_real(b / d);
        let w = unitary(&gen, 1.0).unwrap();
        for state in [ground_state(&ops).unwrap(), bogoliubov_state(&ops, 0.4).unwrap()] {
            let dense = state.expectation(&w).unwrap();
            let fast = fluctuation_expectation(&ops, &state, &FluctuationParams::mesoscopic(a, b)).unwrap();
            assert!((dense - fast).norm() < 1e-12, "{dense} vs {fast}");
        }
    }

    #[test]
    fn ground_state_closed_form_agrees() {
        for n in [4usize, 16, 100] {
            let ops = collective_ops(n).unwrap();
            let gs = ground_state(&ops).unwrap();
            for (a, b) in [(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 1.0)] {
                let v = fluctuation_expectation(&ops, &gs, &FluctuationParams::mesoscopic(a, b)).unwrap();
                assert!((v.re - ground_state_closed_form(n, a, b)).abs() < 1e-12);
                assert!(v.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn n16_within_order_one_over_n() {
        let ops = collective_ops(16).unwrap();
        let gs = ground_state(&ops).unwrap();
        let v = fluctuation_expectation(&ops, &gs, &FluctuationParams::mesoscopic(1.0, 1.0)).unwrap();
        let dev = (v.re - gaussian_target(1.0, 1.0)).abs();
        assert!(dev < 1.0 / 16.0 && dev > 0.0);
    }

    #[test]
    fn reversing_the_order_conjugates_the_phase() {
        let ops = collective_ops(64).unwrap();
        let gs = ground_state(&ops).unwrap();
        let fwd = weyl_relation_probe_ordered(&ops, &gs, 1.0, 0.7, false).unwrap();
        let rev = weyl_relation_probe_ordered(&ops, &gs, 1.0, 0.7, true).unwrap();
        assert!((fwd.phase + rev.phase).abs() < 1e-12);
        assert!((fwd.product - rev.product.conj()).norm() < 1e-12);
    }

    #[test]
    fn bs_probes_tend_to_gaussian() {
        let ops = collective_ops(400).unwrap();
        let bs = bogoliubov_state(&ops, 0.0).unwrap();
        for axis in [Axis::Y, Axis::Z] {
            let v = bs_gaussian_probe(&ops, &bs, 1.0, axis).unwrap();
            let exact = (1.0 / 20.0f64).cos().powi(400);
            assert!((v.re - exact).abs() < 1e-10, "{axis:?}: {v}");
            assert!((v.re - (-0.5f64).exp()).abs() < 5e-3);
        }
        let v = bs_gaussian_probe(&ops, &bs, 1.0, Axis::X).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-10);
    }
}
