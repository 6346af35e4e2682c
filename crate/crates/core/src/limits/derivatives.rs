//! Time derivative `-i[A, H]` and super derivative `-i[A, G_alpha]` with their closed forms.

use serde::Serialize;

use super::spinchain::{Pauli, SpinChain};
use crate::algebra::{commutator, GaugeAngle, OperatorMatrix, C64};
use crate::dicke::DickeOperators;
use crate::error::Result;

/// Finite-`n` identities are exact; this bound only absorbs rounding.
pub const IDENTITY_TOL: f64 = 1e-10;

pub fn heisenberg_derivative(a: &OperatorMatrix, generator: &OperatorMatrix) -> Result<OperatorMatrix> {
    Ok(commutator(a, generator)?.scale(C64::new(0.0, -1.0)))
}

pub fn super_derivative(a: &OperatorMatrix, g_alpha: &OperatorMatrix) -> Result<OperatorMatrix> {
    heisenberg_derivative(a, g_alpha)
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    /// `||lhs - rhs||` for the closed form derived from the commutators
    pub residual: f64,
    /// same for the literal form, where it differs by a sign or factor
    pub literal_residual: Option<f64>,
}

impl IdentityCheck {
    fn new(name: &str, lhs: &OperatorMatrix, rhs: &OperatorMatrix, literal: Option<&OperatorMatrix>) -> Self {
        Self {
            name: name.to_string(),
            residual: (lhs - rhs).norm(),
            literal_residual: literal.map(|l| (lhs - l).norm()),
        }
    }

    pub fn holds(&self) -> bool {
        self.residual <= IDENTITY_TOL
    }
}

fn i(x: f64) -> C64 {
    C64::new(0.0, x)
}

/// Collective identities on the Dicke sector of size `n`.
pub fn collective_identities(ops: &DickeOperators, alpha: GaugeAngle) -> Result<Vec<IdentityCheck>> {
    let nf = ops.n() as f64;
    let rn = nf.sqrt();
    let sp = ops.lifted(&ops.s_plus()?)?;
    let sm = ops.lifted(&ops.s_minus()?)?;
    let sz = ops.lifted(&ops.s_z()?)?;
    let eta = ops.eta()?;
    let eta_d = eta.adjoint();
    let ee = &eta * &eta_d;
    let f = ops.build_f()?;
    let h = ops.build_hss()?;
    let g = ops.build_g_alpha(alpha)?;
    let ph = alpha.phase();
    let comm_ms = commutator(&sm, &sp)?;

    let mut out = Vec::new();

    let dot_sz = heisenberg_derivative(&sz, &h)?;
    out.push(IdentityCheck::new("dot S_z = 0", &dot_sz, &OperatorMatrix::zeros(ops.dim()), None));

    let dot_eta = heisenberg_derivative(&eta, &h)?;
    let rhs = (&eta * &comm_ms).scale(i(1.0 / nf));
    let literal = (&eta * &comm_ms).scale(i(-1.0 / nf));
    out.push(IdentityCheck::new("dot eta = i eta [S-, S+] / N", &dot_eta, &rhs, Some(&literal)));

    let dot_sp = heisenberg_derivative(&sp, &h)?.scale_real(1.0 / nf);
    let first = (&sp * &sz).scale(i(-1.0 / (nf * nf)));
    let rhs = &first + &(&sp * &ee).scale(i(-2.0 / (nf * nf)));
    let literal = &first - &(&sp * &ee).scale_real(2.0 / (nf * nf));
    out.push(IdentityCheck::new(
        "dot S+ / N = -i S+ S_z / N^2 - 2i S+ eta eta^dag / N^2",
        &dot_sp,
        &rhs,
        Some(&literal),
    ));

    let sz_prime = super_derivative(&sz, &g)?.scale_real(1.0 / nf);
    let rhs = (&(&eta * &sm).scale(ph) - &(&eta_d * &sp).scale(ph.conj())).scale(i(2.0 / (nf * rn)));
    out.push(IdentityCheck::new("S_z' / N", &sz_prime, &rhs, None));

    let sp_prime = super_derivative(&sp, &g)?.scale_real(1.0 / nf);
    let rhs = (&eta * &sz).scale(ph * i(-1.0 / (nf * rn)));
    let literal = (&eta * &sz).scale(ph * i(1.0 / (nf * rn)));
    out.push(IdentityCheck::new(
        "S+' / N = -i e^{i alpha} eta S_z / (N sqrt N)",
        &sp_prime,
        &rhs,
        Some(&literal),
    ));

    let eta_prime = super_derivative(&eta, &g)?;
    let rhs = (&f * &sp).scale(ph.conj() * i(-1.0 / rn));
    let literal = (&sp * &f).scale(i(1.0 / rn));
    out.push(IdentityCheck::new(
        "eta' = -i e^{-i alpha} [eta, eta^dag] S+ / sqrt N",
        &eta_prime,
        &rhs,
        Some(&literal),
    ));
    Ok(out)
}

/// Per-site identities on the explicit chain, site `j = 0`.
pub fn local_identities(chain: &SpinChain, alpha: GaugeAngle) -> Result<Vec<IdentityCheck>> {
    let nf = chain.n() as f64;
    let rn = nf.sqrt();
    let sp = chain.collective(Pauli::Plus);
    let sm = chain.collective(Pauli::Minus);
    let zj = chain.sigma(0, Pauli::Z);
    let pj = chain.sigma(0, Pauli::Plus);
    let mj = chain.sigma(0, Pauli::Minus);
    let eta = chain.eta();
    let eta_d = eta.adjoint();
    let ee = &eta * &eta_d;
    let h = chain.hss();
    let g = chain.g_alpha(alpha);
    let ph = alpha.phase();

    let mut out = Vec::new();

    let dz = heisenberg_derivative(&zj, &h)?;
    let bracket = &(&pj * &sm) - &(&sp * &mj);
    let rhs = bracket.scale(i(-2.0 / nf));
    let literal = bracket.scale(i(-1.0 / nf));
    out.push(IdentityCheck::new(
        "dot sigma_z = -2i (sigma+ S- - S+ sigma-) / N",
        &dz,
        &rhs,
        Some(&literal),
    ));

    let dp = heisenberg_derivative(&pj, &h)?;
    let rhs = &(&sp * &zj).scale(i(-1.0 / nf)) + &(&pj * &ee).scale(i(-2.0 / nf));
    out.push(IdentityCheck::new("dot sigma+", &dp, &rhs, None));

    let zp = super_derivative(&zj, &g)?;
    let rhs = (&(&eta * &mj).scale(ph) - &(&eta_d * &pj).scale(ph.conj())).scale(i(2.0 / rn));
    out.push(IdentityCheck::new("sigma_z'", &zp, &rhs, None));

    let pp = super_derivative(&pj, &g)?;
    let rhs = (&eta * &zj).scale(ph * i(-1.0 / rn));
    out.push(IdentityCheck::new("sigma+'", &pp, &rhs, None));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke::collective_ops;
    use crate::lattice::build_model_i;

    #[test]
    fn collective_identities_hold_at_n8() {
        let ops = collective_ops(8).unwrap();
        for alpha in [0.0, 0.9] {
            for c in collective_identities(&ops, GaugeAngle::new(alpha)).unwrap() {
                assert!(c.holds(), "{c:?}");
            }
        }
    }

    #[test]
    fn literal_forms_that_differ_are_detected() {
        let ops = collective_ops(8).unwrap();
        let checks = collective_identities(&ops, GaugeAngle::new(0.0)).unwrap();
        for c in &checks {
            if let Some(lit) = c.literal_residual {
                assert!(lit > 1e-3, "{c:?}");
            }
        }
    }

    #[test]
    fn local_identities_hold() {
        for n in [2usize, 5] {
            let chain = SpinChain::new(n).unwrap();
            for c in local_identities(&chain, GaugeAngle::new(0.4)).unwrap() {
                assert!(c.holds(), "n={n}: {c:?}");
            }
        }
    }

    #[test]
    fn model_i_time_derivatives_vanish() {
        let m = build_model_i(&[0.5, 1.5, 1.0]).unwrap();
        for a in crate::algebra::fermion_ops(&m.spec).unwrap() {
            assert!(heisenberg_derivative(&a, &m.h).unwrap().norm() < 1e-10);
        }
    }
}
