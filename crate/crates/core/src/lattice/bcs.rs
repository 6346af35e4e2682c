//! The degenerate BCS Hamiltonian in its two forms, `-M^dag M` and `-S_+ S_- / N`, compared
//! against each other and against `-H_SS`.

use serde::{Deserialize, Serialize};

use super::model3::{build_model_iii_fock, PairAlgebraOps};
use crate::algebra::OperatorMatrix;
use crate::dicke::DickeOperators;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BcsRepresentation {
    /// Model III pair sector, `N <= 4`
    Fock,
    /// symmetric sector, any `N` up to the Dicke bound
    Dicke,
}

#[derive(Debug, Clone, Serialize)]
pub struct BcsComparison {
    pub n: usize,
    pub representation: BcsRepresentation,
    /// `||H'_BCS - (-M^dag M)||`
    pub prime_vs_pair: f64,
    /// `||H'_BCS - (-H_SS)||`, the `S_z / N` term on the `eta`-empty component
    pub prime_vs_ss: f64,
    /// `||(4/N) M^dag M||`
    pub scaled_pair_norm: f64,
}

impl BcsComparison {
    /// Both differences are bounded by 1.
    pub fn bounded(&self) -> bool {
        self.prime_vs_pair <= 1.0 + 1e-12 && self.prime_vs_ss <= 1.0 + 1e-12
    }
}

/// Fock-space `(H_BCS = -M^dag M, H'_BCS = -S_+ S_- / N)` with `S_- = -sum b_i`.
pub fn bcs_fock_operators(ops: &PairAlgebraOps) -> (OperatorMatrix, OperatorMatrix) {
    let m = &ops.m_n;
    let h_bcs = (&m.adjoint() * m).scale_real(-1.0).with_label("H_BCS");
    let mut s_minus = OperatorMatrix::zeros(ops.dim());
    for b in &ops.b_ops {
        s_minus = &s_minus - b;
    }
    let h_prime = (&s_minus.adjoint() * &s_minus)
        .scale_real(-1.0 / ops.n() as f64)
        .with_label("H'_BCS");
    (h_bcs, h_prime)
}

pub fn build_bcs(n: usize, representation: BcsRepresentation) -> Result<BcsComparison> {
    match representation {
        BcsRepresentation::Fock => {
            let (model, ops) = build_model_iii_fock(n)?;
            let (h_bcs, h_prime) = bcs_fock_operators(&ops);
            let m = &ops.m_n;
            Ok(BcsComparison {
                n,
                representation,
                prime_vs_pair: (&h_prime - &h_bcs).norm(),
                prime_vs_ss: (&h_prime + &model.h).norm(),
                scaled_pair_norm: (&m.adjoint() * m).scale_real(4.0 / n as f64).norm(),
            })
        }
        BcsRepresentation::Dicke => {
            let ops = DickeOperators::new(n)?;
            let nf = n as f64;
            let prime = ops.bcs_prime_diagonal();
            let hss = ops.hss_diagonal();
            // M^dag M = S_+ S_- / N, diagonal with entries raise_amp(k - 1)^2 / N on both components
            let m = n + 1;
            let pair: Vec<f64> = (0..2 * m)
                .map(|i| {
                    let k = i % m;
                    if k == 0 {
                        0.0
                    } else {
                        ops.raise_amp(k - 1).powi(2) / nf
                    }
                })
                .collect();
            let sup = |a: &[f64], b: &[f64], sign: f64| {
                a.iter().zip(b).map(|(x, y)| (x + sign * y).abs()).fold(0.0, f64::max)
            };
            Ok(BcsComparison {
                n,
                representation,
                prime_vs_pair: sup(&prime, &pair, 1.0),
                prime_vs_ss: sup(&prime, &hss, 1.0),
                scaled_pair_norm: pair.iter().fold(0.0f64, |a, &x| a.max(x)) * 4.0 / nf,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fock_forms_coincide() {
        for n in 1..=4 {
            let c = build_bcs(n, BcsRepresentation::Fock).unwrap();
            assert!(c.prime_vs_pair < 1e-12, "{c:?}");
            assert!((c.prime_vs_ss - 1.0).abs() < 1e-10, "{c:?}");
            assert!(c.bounded());
        }
    }

    #[test]
    fn dicke_matches_fock() {
        for n in 1..=4 {
            let f = build_bcs(n, BcsRepresentation::Fock).unwrap();
            let d = build_bcs(n, BcsRepresentation::Dicke).unwrap();
            assert!((f.prime_vs_ss - d.prime_vs_ss).abs() < 1e-10);
            assert!((f.scaled_pair_norm - d.scaled_pair_norm).abs() < 1e-10);
        }
    }

    #[test]
    fn dicke_bounded_at_large_n() {
        for n in [4usize, 64, 1000] {
            let d = build_bcs(n, BcsRepresentation::Dicke).unwrap();
            assert!(d.prime_vs_pair < 1e-12);
            assert!((d.prime_vs_ss - 1.0).abs() < 1e-12);
            assert!(d.bounded());
        }
        let d = build_bcs(64, BcsRepresentation::Dicke).unwrap();
        assert!((d.scaled_pair_norm - 66.0 / 64.0).abs() < 1e-12);
    }

    #[test]
    fn fock_size_bound() {
        assert!(build_bcs(5, BcsRepresentation::Fock).is_err());
    }
}
