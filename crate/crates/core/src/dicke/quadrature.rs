use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Periodic trapezoidal rule on `[lower, lower + period)`. Exact for trigonometric polynomials
/// of degree below `n_nodes`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    n_nodes: usize,
    lower: f64,
    period: f64,
}

impl QuadratureGrid {
    pub fn new(n_nodes: usize, lower: f64, period: f64) -> Result<Self> {
        if n_nodes == 0 {
            return Err(Error::InvalidArgument("quadrature needs at least one node".into()));
        }
        if !(period > 0.0 && period.is_finite() && lower.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "invalid quadrature interval [{lower}, {lower} + {period})"
            )));
        }
        Ok(Self {
            n_nodes,
            lower,
            period,
        })
    }

    /// `[-pi/2, pi/2)`
    pub fn half_circle(n_nodes: usize) -> Result<Self> {
        Self::new(n_nodes, -FRAC_PI_2, PI)
    }

    /// `[-pi, pi)`
    pub fn full_circle(n_nodes: usize) -> Result<Self> {
        Self::new(n_nodes, -PI, 2.0 * PI)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn weight(&self) -> f64 {
        self.period / self.n_nodes as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.weight();
        (0..self.n_nodes).map(move |j| self.lower + j as f64 * h)
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.weight() * self.nodes().map(f).sum::<f64>()
    }

    pub fn require_nodes(&self, required: usize) -> Result<()> {
        if self.n_nodes < required {
            return Err(Error::CoarseGrid {
                nodes: self.n_nodes,
                required,
            });
        }
        Ok(())
    }
}

/// `ln(k!)` for `k = 0..=n`.
pub fn log_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        out.push(acc);
    }
    out
}

/// `int_{-pi/2}^{pi/2} cos^n` by the Wallis recursion `I_n = (n-1)/n I_{n-2}`.
pub fn wallis_integral(n: usize) -> f64 {
    let mut value = if n.is_multiple_of(2) { PI } else { 2.0 };
    let mut k = if n.is_multiple_of(2) { 2 } else { 3 };
    while k <= n {
        value *= (k - 1) as f64 / k as f64;
        k += 2;
    }
    value
}

/// `pi C(n, n/2) / 2^n` for even `n`, evaluated in log space.
pub fn wallis_binomial_form(n: usize) -> Result<f64> {
    if !n.is_multiple_of(2) {
        return Err(Error::OddParticleNumber(n));
    }
    let lf = log_factorials(n);
    let log = lf[n] - 2.0 * lf[n / 2] - n as f64 * std::f64::consts::LN_2;
    Ok(PI * log.exp())
}
