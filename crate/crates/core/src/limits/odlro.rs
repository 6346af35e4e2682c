//! Connected two-site `sigma_x` correlation in permutation-symmetric states.

use crate::dicke::{DickeOperators, DickeState};
use crate::error::{Error, Result};

/// `omega(sigma_x^k sigma_x^j)` for `k != j`: `(<S_x^2> - N) / (N (N - 1))`.
pub fn two_site_xx(ops: &DickeOperators, state: &DickeState) -> Result<f64> {
    let n = ops.n();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("two-site correlations need n >= 2, got {n}")));
    }
    // <S_x^2> = ||S_x psi||^2
    let second = ops.lift_apply(state.vector(), |s| ops.apply_s_x(s))?.norm_squared();
    let nf = n as f64;
    Ok((second - nf) / (nf * (nf - 1.0)))
}

/// `omega(sigma_x^k) = <S_x> / N`
pub fn one_site_x(ops: &DickeOperators, state: &DickeState) -> Result<f64> {
    let sx = state.expect_with(|v| ops.lift_apply(v, |s| ops.apply_s_x(s)))?;
    Ok(sx.re / ops.n() as f64)
}

/// `|omega(sigma_x^k sigma_x^j) - omega(sigma_x^k) omega(sigma_x^j)|`
pub fn odlro(ops: &DickeOperators, state: &DickeState) -> Result<f64> {
    let pair = two_site_xx(ops, state)?;
    let single = one_site_x(ops, state)?;
    Ok((pair - single * single).abs())
}

/// Exact ceiling value `N / (2 (N - 1))`.
pub fn ceiling_odlro_closed_form(n: usize) -> f64 {
    n as f64 / (2.0 * (n as f64 - 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke::{bogoliubov_state, ceiling_state_ladder, collective_ops, ground_state};
    use crate::limits::spinchain::{Pauli, SpinChain};

    #[test]
    fn trichotomy() {
        for n in [2usize, 10, 50, 200] {
            let ops = collective_ops(n).unwrap();
            assert!(odlro(&ops, &ground_state(&ops).unwrap()).unwrap() < 1e-12);
            for a in [0.0, 0.37, 1.2] {
                assert!(odlro(&ops, &bogoliubov_state(&ops, a).unwrap()).unwrap() < 1e-12);
            }
            let (_, psi2) = ceiling_state_ladder(&ops).unwrap();
            let c = odlro(&ops, &psi2).unwrap();
            assert!((c - ceiling_odlro_closed_form(n)).abs() < 1e-12);
            assert!((c - 0.5).abs() <= 2.0 / n as f64);
        }
    }

    #[test]
    fn collective_identity_matches_explicit_sites() {
        let n = 6;
        let ops = collective_ops(n).unwrap();
        let chain = SpinChain::new(n).unwrap();
        let xx = &chain.sigma(1, Pauli::X) * &chain.sigma(4, Pauli::X);
        let (_, psi2) = ceiling_state_ladder(&ops).unwrap();
        for st in [psi2, bogoliubov_state(&ops, 0.2).unwrap()] {
            let v = chain.embed(&st).unwrap();
            let direct = xx.matrix_element(&v, &v).re;
            assert!((direct - two_site_xx(&ops, &st).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn needs_two_sites() {
        let ops = collective_ops(1).unwrap();
        assert!(odlro(&ops, &ground_state(&ops).unwrap()).is_err());
    }
}
