//! Closed-form supertransformations `a -> e^{isG} a e^{-isG}` of the one- and two-flavor models.

use super::models::{DOWN, UP};
use super::validate_couplings;
use crate::algebra::spectral::hermitian_function;
use crate::algebra::superdecomp::gauge_generator;
use crate::algebra::{
    anticommutator, commutator, FermionPolynomial, FockBasis, GaugeAngle, LatticeSpec,
    OperatorMatrix, C64, I, ONE,
};
use crate::error::{Error, Result};

/// Relative size below which an eigenvalue of `G` counts as zero when inverting.
const SINGULAR_TOL: f64 = 1e-9;

/// `(cos s)^2 a + e^{2i alpha} (sin s)^2 a^dag + i e^{i alpha} cos s sin s (a^dag a - a a^dag)`
/// on one mode. This is the flow generated by `G_{-alpha}`; the two agree for alpha in {0, pi}.
pub fn baby_flow_closed(s: f64, alpha: GaugeAngle) -> OperatorMatrix {
    let a = OperatorMatrix::from_fn(2, "a", |r, c| if (r, c) == (0, 1) { ONE } else { C64::new(0.0, 0.0) });
    let ad = a.adjoint();
    let (sn, cs) = s.sin_cos();
    let e = alpha.phase();
    let parity = &(&ad * &a) - &(&a * &ad);
    let out = &(&a.scale_real(cs * cs) + &ad.scale(e * e * (sn * sn))) + &parity.scale(I * e * (cs * sn));
    out.with_label(format!("a({s})"))
}

fn fock_operator(basis: &FockBasis, p: FermionPolynomial, label: &str) -> Result<OperatorMatrix> {
    p.to_operator(basis, label)
}

/// Inverse of an invertible Hermitian operator through its eigendecomposition.
fn hermitian_inverse(g: &OperatorMatrix) -> Result<OperatorMatrix> {
    let eig = crate::algebra::hermitian_eigen(g)?;
    let scale = eig.max_abs_value();
    if let Some(small) = eig.values.iter().map(|x| x.abs()).min_by(f64::total_cmp) {
        if small <= SINGULAR_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Singular(format!(
                "generator has eigenvalue {small:.3e} against norm {scale:.3e}"
            )));
        }
    }
    OperatorMatrix::new(eig.map(|x| C64::new(1.0 / x, 0.0)), "G^-1")
}

/// `(a_k - z_k / 2G) e^{-2isG} + z_k / 2G` with `G = sum_i z_i (a_i + a_i^dag)`.
pub fn model_i_flow_closed(k: usize, s: f64, z: &[f64]) -> Result<OperatorMatrix> {
    validate_couplings(z)?;
    if k >= z.len() {
        return Err(Error::InvalidArgument(format!("site {k} outside 0..{}", z.len())));
    }
    let spec = LatticeSpec::new(z.len(), 1)?;
    let basis = FockBasis::full(&spec)?;
    let q = FermionPolynomial::sum(
        z.iter()
            .enumerate()
            .map(|(i, &zi)| FermionPolynomial::annihilator(i).scale(C64::new(zi, 0.0))),
    );
    let q = fock_operator(&basis, q, "Q")?;
    let g = gauge_generator(&q, GaugeAngle::new(0.0));
    let half_inv = hermitian_inverse(&g)?.scale_real(z[k] / 2.0);
    let phase = hermitian_function(&g, "exp(-2isG)", |x| C64::new(0.0, -2.0 * s * x).exp())?;
    let a_k = fock_operator(&basis, FermionPolynomial::annihilator(k), "a")?;
    let out = &(&(&a_k - &half_inv) * &phase) + &half_inv;
    Ok(out.with_label(format!("a_{k}({s})")))
}

/// `x -> (1 - e^{-2isx}) / 2x`, continued to `is` at the origin.
fn damped_phase(s: f64, x: f64) -> C64 {
    if (s * x).abs() < 1e-6 {
        // series: is + s t - (2/3) i s t^2 - s t^3 / 3, t = s x
        let t = s * x;
        return C64::new(s * t * (1.0 - t * t / 3.0), s * (1.0 - 2.0 * t * t / 3.0));
    }
    (ONE - C64::new(0.0, -2.0 * s * x).exp()) / (2.0 * x)
}

/// `(a_up,k(s), a_down,k(s))` from the two closed forms with `G = sum_i z_i n_up,i (a_down,i + h.c.)`:
/// `a_up,k e^{-is(G - z_k (a_down,k + a_down,k^dag))} e^{-isG}` and
/// `a_down,k e^{-2isG} + z_k n_up,k (1 - e^{-2isG}) / 2G`.
pub fn model_ii_flow_closed(k: usize, s: f64, z: &[f64]) -> Result<(OperatorMatrix, OperatorMatrix)> {
    validate_couplings(z)?;
    if k >= z.len() {
        return Err(Error::InvalidArgument(format!("site {k} outside 0..{}", z.len())));
    }
    let spec = LatticeSpec::new(z.len(), 2)?;
    let basis = FockBasis::full(&spec)?;
    let c = |x: f64| C64::new(x, 0.0);
    let number = |m: usize| FermionPolynomial::creator(m).mul(&FermionPolynomial::annihilator(m));
    let q = FermionPolynomial::sum(z.iter().enumerate().map(|(i, &zi)| {
        number(spec.mode(i, UP))
            .mul(&FermionPolynomial::annihilator(spec.mode(i, DOWN)))
            .scale(c(zi))
    }));
    let q = fock_operator(&basis, q, "Q")?;
    let g = gauge_generator(&q, GaugeAngle::new(0.0));
    let up = spec.mode(k, UP);
    let down = spec.mode(k, DOWN);
    let a_up = fock_operator(&basis, FermionPolynomial::annihilator(up), "a_up")?;
    let a_down = fock_operator(&basis, FermionPolynomial::annihilator(down), "a_down")?;
    let n_up = fock_operator(&basis, number(up), "n_up")?;

    let x_k = &a_down + &a_down.adjoint();
    let reduced = (&g - &x_k.scale_real(z[k])).symmetrized();
    let u_reduced = hermitian_function(&reduced, "exp", |x| C64::new(0.0, -s * x).exp())?;
    let u_g = hermitian_function(&g, "exp", |x| C64::new(0.0, -s * x).exp())?;
    let up_s = &(&a_up * &u_reduced) * &u_g;

    let u_2g = hermitian_function(&g, "exp", |x| C64::new(0.0, -2.0 * s * x).exp())?;
    let damped = hermitian_function(&g, "f(G)", |x| damped_phase(s, x))?;
    let down_s = &(&a_down * &u_2g) + &(&n_up * &damped).scale_real(z[k]);
    Ok((
        up_s.with_label(format!("a_up,{k}({s})")),
        down_s.with_label(format!("a_down,{k}({s})")),
    ))
}

/// Largest deviation from the canonical anticommutation relations over a family of
/// annihilators.
pub fn car_residual(ops: &[OperatorMatrix]) -> Result<f64> {
    let Some(first) = ops.first() else {
        return Ok(0.0);
    };
    let id = OperatorMatrix::identity(first.dim());
    let mut worst: f64 = 0.0;
    for (m, am) in ops.iter().enumerate() {
        for (n, an) in ops.iter().enumerate() {
            let mixed = anticommutator(am, &an.adjoint())?;
            let dev = if m == n { (&mixed - &id).norm() } else { mixed.norm() };
            worst = worst.max(dev);
            worst = worst.max(anticommutator(am, an)?.norm());
        }
    }
    Ok(worst)
}

/// `max_{j != k} (||[a_k(s), a_j]||, ||{a_k(s), a_j}||)` for Model I. The anticommutator
/// vanishes at `s = 0` and measures the spread of `a_k(s)` onto other sites.
pub fn model_i_nonlocality(k: usize, s: f64, z: &[f64]) -> Result<(f64, f64)> {
    let a_ks = model_i_flow_closed(k, s, z)?;
    let spec = LatticeSpec::new(z.len(), 1)?;
    let basis = FockBasis::full(&spec)?;
    let mut worst = (0.0f64, 0.0f64);
    for j in (0..z.len()).filter(|&j| j != k) {
        let a_j = FermionPolynomial::annihilator(j).to_operator(&basis, "a")?;
        worst.0 = worst.0.max(commutator(&a_ks, &a_j)?.norm());
        worst.1 = worst.1.max(anticommutator(&a_ks, &a_j)?.norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unitary_flow;
    use crate::lattice::models::{build_baby, build_model_i, build_model_ii};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    const GRID: [f64; 4] = [0.1, 0.7, FRAC_PI_2, 2.0];

    #[test]
    fn baby_closed_form_endpoints() {
        let a = baby_flow_closed(0.0, GaugeAngle::new(0.0));
        let ad = baby_flow_closed(FRAC_PI_2, GaugeAngle::new(0.0));
        assert!((a.get(0, 1) - ONE).norm() < 1e-15);
        assert!((&ad - &a.adjoint()).max_abs() < 1e-15);
        let mid = baby_flow_closed(FRAC_PI_4, GaugeAngle::new(0.0));
        let parity = &(&a.adjoint() * &a) - &(&a * &a.adjoint());
        let expected = &(&a + &a.adjoint()).scale_real(0.5) + &parity.scale(I * 0.5);
        assert!((&mid - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn baby_closed_form_matches_conjugation() {
        for alpha in [0.0, 0.4, 1.3, PI, 5.0] {
            let ga = GaugeAngle::new(alpha);
            let model = build_baby(ga).unwrap();
            let a = model.q.clone().unwrap();
            let g_minus = model.g(GaugeAngle::new(-alpha)).unwrap();
            for s in GRID {
                let closed = baby_flow_closed(s, ga);
                let brute = unitary_flow(&g_minus, s, &a).unwrap();
                assert!((&closed - &brute).max_abs() < 1e-10, "alpha={alpha} s={s}");
            }
        }
        let ga = GaugeAngle::new(0.0);
        let g = build_baby(ga).unwrap().g(ga).unwrap();
        let a = build_baby(ga).unwrap().q.unwrap();
        for s in GRID {
            assert!((&baby_flow_closed(s, ga) - &unitary_flow(&g, s, &a).unwrap()).max_abs() < 1e-10);
        }
    }

    #[test]
    fn model_i_closed_form_matches_conjugation_and_car() {
        let z = [1.0, 2.0, 0.5];
        let model = build_model_i(&z).unwrap();
        let g = model.g(GaugeAngle::new(0.0)).unwrap();
        let basis = FockBasis::full(&model.spec).unwrap();
        for s in GRID {
            let mut flowed = Vec::new();
            for k in 0..z.len() {
                let closed = model_i_flow_closed(k, s, &z).unwrap();
                let a_k = FermionPolynomial::annihilator(k).to_operator(&basis, "a").unwrap();
                let brute = unitary_flow(&g, s, &a_k).unwrap();
                assert!((&closed - &brute).max_abs() < 1e-10, "k={k} s={s}");
                flowed.push(closed);
            }
            assert!(car_residual(&flowed).unwrap() < 1e-10);
        }
    }

    #[test]
    fn model_i_reduces_to_baby_and_identity_at_zero() {
        for s in GRID {
            let one = model_i_flow_closed(0, s, &[1.0]).unwrap();
            assert!((&one - &baby_flow_closed(s, GaugeAngle::new(0.0))).max_abs() < 1e-12);
        }
        let z = [1.0, 1.0];
        let a0 = model_i_flow_closed(1, 0.0, &z).unwrap();
        let basis = FockBasis::full(&LatticeSpec::new(2, 1).unwrap()).unwrap();
        let a1 = FermionPolynomial::annihilator(1).to_operator(&basis, "a").unwrap();
        assert!((&a0 - &a1).max_abs() < 1e-12);
        let flowed: Vec<_> = (0..2).map(|k| model_i_flow_closed(k, 0.3, &z).unwrap()).collect();
        assert!(car_residual(&flowed).unwrap() <= 1e-10);
    }

    #[test]
    fn model_i_flow_is_nonlocal() {
        let (comm, anti) = model_i_nonlocality(0, FRAC_PI_4, &[1.0, 1.0]).unwrap();
        assert!(comm > 1e-3);
        assert!(anti > 1e-3);
        let (_, anti0) = model_i_nonlocality(0, 0.0, &[1.0, 1.0]).unwrap();
        assert!(anti0 < 1e-14);
    }

    #[test]
    fn model_ii_closed_forms_match_conjugation() {
        for z in [vec![1.0], vec![1.0, 0.6], vec![0.8, 1.5, 1.1]] {
            let model = build_model_ii(&z).unwrap();
            let g = model.g(GaugeAngle::new(0.0)).unwrap();
            let basis = FockBasis::full(&model.spec).unwrap();
            for s in GRID {
                let mut flowed = Vec::new();
                for k in 0..z.len() {
                    let (up, down) = model_ii_flow_closed(k, s, &z).unwrap();
                    for (flavor, closed) in [(UP, &up), (DOWN, &down)] {
                        let a = FermionPolynomial::annihilator(model.spec.mode(k, flavor))
                            .to_operator(&basis, "a")
                            .unwrap();
                        let brute = unitary_flow(&g, s, &a).unwrap();
                        assert!((closed - &brute).max_abs() < 1e-10, "z={z:?} k={k} s={s}");
                    }
                    flowed.push(up);
                    flowed.push(down);
                }
                assert!(car_residual(&flowed).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn model_ii_identity_at_zero() {
        let (up, down) = model_ii_flow_closed(0, 0.0, &[1.0]).unwrap();
        let basis = FockBasis::full(&LatticeSpec::new(1, 2).unwrap()).unwrap();
        let a_up = FermionPolynomial::annihilator(0).to_operator(&basis, "a").unwrap();
        let a_down = FermionPolynomial::annihilator(1).to_operator(&basis, "a").unwrap();
        assert!((&up - &a_up).max_abs() < 1e-14);
        assert!((&down - &a_down).max_abs() < 1e-14);
    }

    #[test]
    fn damped_phase_is_continuous() {
        let s = 0.7;
        let at_zero = damped_phase(s, 0.0);
        assert!((at_zero - C64::new(0.0, s)).norm() < 1e-15);
        for x in [1e-7, 2e-6, 1e-3] {
            let exact = (ONE - C64::new(0.0, -2.0 * s * x).exp()) / (2.0 * x);
            assert!((damped_phase(s, x) - exact).norm() < 1e-9);
        }
    }

    #[test]
    fn time_evolution_facts() {
        let m = build_model_i(&[1.0, 2.0]).unwrap();
        let basis = FockBasis::full(&m.spec).unwrap();
        for k in 0..2 {
            let a = FermionPolynomial::annihilator(k).to_operator(&basis, "a").unwrap();
            assert_eq!(commutator(&m.h, &a).unwrap().max_abs(), 0.0);
        }
        let m = build_model_ii(&[1.0, 2.0]).unwrap();
        let basis = FockBasis::full(&m.spec).unwrap();
        for k in 0..2 {
            let a = FermionPolynomial::annihilator(m.spec.mode(k, DOWN)).to_operator(&basis, "a").unwrap();
            assert!(commutator(&m.h, &a).unwrap().max_abs() < 1e-14);
        }
    }
}
