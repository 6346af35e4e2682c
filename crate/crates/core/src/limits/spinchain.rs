//! Explicit `n`-spin chain tensored with one Clifford mode, for per-site checks at small `n`.
//!
//! Index `c 2^n + bits`, bit `j` set when spin `j` is up; `eta = |0><1|` on `c`, as in the
//! Dicke sector.

use nalgebra::DVector;

use crate::algebra::{GaugeAngle, OperatorMatrix, C64, I, ONE, ZERO};
use crate::dicke::quadrature::log_factorials;
use crate::dicke::DickeState;
use crate::error::{Error, Result};

pub const SPIN_CHAIN_MAX_SITES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
    /// `|up><down|`
    Plus,
    /// `|down><up|`
    Minus,
}

impl Pauli {
    /// Entry `<r|sigma|c>` with `0 = down`, `1 = up`.
    fn entry(&self, r: usize, c: usize) -> C64 {
        match (self, r, c) {
            (Pauli::X, 0, 1) | (Pauli::X, 1, 0) => ONE,
            (Pauli::Y, 1, 0) => -I,
            (Pauli::Y, 0, 1) => I,
            (Pauli::Z, 1, 1) => ONE,
            (Pauli::Z, 0, 0) => -ONE,
            (Pauli::Plus, 1, 0) => ONE,
            (Pauli::Minus, 0, 1) => ONE,
            _ => ZERO,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpinChain {
    n: usize,
}

impl SpinChain {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("spin chain needs at least one site".into()));
        }
        if n > SPIN_CHAIN_MAX_SITES {
            return Err(Error::DimensionOverflow {
                what: "spin chain sites",
                requested: n,
                limit: SPIN_CHAIN_MAX_SITES,
            });
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 << self.n
    }

    fn spin_mask(&self) -> usize {
        (1 << self.n) - 1
    }

    /// `sigma` on site `j`, identity on the Clifford mode.
    pub fn sigma(&self, j: usize, which: Pauli) -> OperatorMatrix {
        assert!(j < self.n, "site {j} out of range");
        let rest = !(1usize << j);
        OperatorMatrix::from_fn(self.dim(), format!("sigma{which:?}_{j}"), |r, c| {
            if r & rest != c & rest {
                return ZERO;
            }
            which.entry((r >> j) & 1, (c >> j) & 1)
        })
    }

    /// `sum_j sigma_j`
    pub fn collective(&self, which: Pauli) -> OperatorMatrix {
        let mut acc = OperatorMatrix::zeros(self.dim());
        for j in 0..self.n {
            acc = &acc + &self.sigma(j, which);
        }
        acc.with_label(format!("S{which:?}"))
    }

    pub fn eta(&self) -> OperatorMatrix {
        let m = 1usize << self.n;
        OperatorMatrix::from_fn(self.dim(), "eta", |r, c| {
            if r < m && c == r + m {
                ONE
            } else {
                ZERO
            }
        })
    }

    pub fn hss(&self) -> OperatorMatrix {
        let sp = self.collective(Pauli::Plus);
        let sm = self.collective(Pauli::Minus);
        let eta = self.eta();
        let ee = &eta * &eta.adjoint();
        let comm = &(&sm * &sp) - &(&sp * &sm);
        (&(&sp * &sm) + &(&comm * &ee))
            .scale_real(1.0 / self.n as f64)
            .symmetrized()
            .with_label("H_SS")
    }

    pub fn g_alpha(&self, alpha: GaugeAngle) -> OperatorMatrix {
        let half = (&self.eta() * &self.collective(Pauli::Minus)).scale(alpha.phase());
        (&half + &half.adjoint())
            .scale_real(1.0 / (self.n as f64).sqrt())
            .symmetrized()
            .with_label("G")
    }

    pub fn bcs_prime(&self) -> OperatorMatrix {
        let sp = self.collective(Pauli::Plus);
        (&sp * &sp.adjoint())
            .scale_real(-1.0 / self.n as f64)
            .symmetrized()
            .with_label("H'_BCS")
    }

    /// Embeds a Dicke-sector vector: `|k>` goes to the normalized sum of all configurations
    /// with `k` spins up.
    pub fn embed(&self, state: &DickeState) -> Result<DVector<C64>> {
        if state.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: state.n(),
            });
        }
        let lf = log_factorials(self.n);
        let m = 1usize << self.n;
        let mut out = DVector::from_element(self.dim(), ZERO);
        for c in 0..2 {
            let comp = state.component(c);
            for bits in 0..m {
                let k = (bits & self.spin_mask()).count_ones() as usize;
                let binom = (lf[self.n] - lf[k] - lf[self.n - k]).exp();
                out[c * m + bits] = comp[k] / binom.sqrt();
            }
        }
        Ok(out)
    }
}
