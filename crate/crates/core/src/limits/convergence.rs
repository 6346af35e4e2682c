//! n-sweeps and the `a + b n^(-p)` extrapolation.

use serde::{Deserialize, Serialize};

use crate::algebra::C64;
use crate::error::{Error, Result};

/// Where a target value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// an established closed form or limit
    Published,
    /// follows from definitions alone
    Trivial,
    /// computed here, by an independent route
    Derived,
}

impl Provenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            Provenance::Published => "published",
            Provenance::Trivial => "trivial",
            Provenance::Derived => "derived",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub value: C64,
    pub provenance: Provenance,
}

impl Target {
    pub fn real(value: f64, provenance: Provenance) -> Self {
        Self {
            value: C64::new(value, 0.0),
            provenance,
        }
    }
}

/// `value(n) ~ limit + amplitude n^(-rate)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub limit: f64,
    /// `None` for a constant series
    pub rate: Option<f64>,
    pub amplitude: f64,
    /// root-mean-square misfit over the fitted points
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSeries {
    pub metric: String,
    pub points: Vec<(usize, C64)>,
    pub target: Option<Target>,
    pub fit: Option<Fit>,
}

impl ConvergenceSeries {
    /// Sorts the points by `n`; order of insertion never matters.
    pub fn new(metric: impl Into<String>, mut points: Vec<(usize, C64)>, target: Option<Target>) -> Self {
        points.sort_by_key(|p| p.0);
        Self {
            metric: metric.into(),
            points,
            target,
            fit: None,
        }
    }

    pub fn real_points(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|(n, v)| (*n as f64, v.re)).collect()
    }

    /// Fits the real parts and stores the result.
    pub fn with_fit(mut self) -> Result<Self> {
        self.fit = Some(extrapolate(&self.real_points())?);
        Ok(self)
    }
}

const RATE_MIN: f64 = -4.0;
const RATE_MAX: f64 = 8.0;
const SCAN: usize = 1200;

/// Least-squares `(a, b)` for a fixed exponent and the sum of squared residuals.
fn linear_fit(points: &[(f64, f64)], p: f64) -> (f64, f64, f64) {
    let m = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(n, v) in points {
        let x = n.powf(-p);
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
    }
    let det = m * sxx - sx * sx;
    if det.abs() <= 1e-300 {
        let a = sy / m;
        let ss = points.iter().map(|&(_, v)| (v - a).powi(2)).sum();
        return (a, 0.0, ss);
    }
    let b = (m * sxy - sx * sy) / det;
    let a = (sy - b * sx) / m;
    let ss = points
        .iter()
        .map(|&(n, v)| (v - a - b * n.powf(-p)).powi(2))
        .sum();
    (a, b, ss)
}

/// Fits `a + b n^(-p)` over the three largest `n`: a linear solve for `(a, b)` nested in a
/// scan plus golden-section search over `p`. Negative `p` describes growth.
pub fn extrapolate(points: &[(f64, f64)]) -> Result<Fit> {
    if points.len() < 3 {
        return Err(Error::SeriesTooShort(points.len()));
    }
    let mut sorted = points.to_vec();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    let tail = &sorted[sorted.len() - 3..];
    if tail.iter().any(|&(n, v)| n.is_nan() || n <= 0.0 || !v.is_finite()) {
        return Err(Error::InvalidArgument("extrapolation needs positive n and finite values".into()));
    }

    let scale = tail.iter().map(|p| p.1.abs()).fold(0.0, f64::max).max(1e-300);
    let spread = tail.iter().map(|p| (p.1 - tail[0].1).abs()).fold(0.0, f64::max);
    if spread <= 1e-14 * scale || spread == 0.0 {
        let a = tail.iter().map(|p| p.1).sum::<f64>() / 3.0;
        let residual = rms(tail, |_| a);
        return Ok(Fit {
            limit: a,
            rate: None,
            amplitude: 0.0,
            residual,
        });
    }

    let cost = |p: f64| linear_fit(tail, p).2;
    let step = (RATE_MAX - RATE_MIN) / SCAN as f64;
    let mut best = (f64::INFINITY, RATE_MIN);
    for i in 0..=SCAN {
        let p = RATE_MIN + i as f64 * step;
        if p.abs() < 0.5 * step {
            continue;
        }
        let c = cost(p);
        if c < best.0 {
            best = (c, p);
        }
    }
    // golden section inside the bracketing cell, kept off p = 0 where the model degenerates
    let (mut lo, mut hi) = ((best.1 - step).max(RATE_MIN), (best.1 + step).min(RATE_MAX));
    if lo < 0.0 && hi > 0.0 {
        if best.1 > 0.0 {
            lo = 1e-6;
        } else {
            hi = -1e-6;
        }
    }
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (cost(x1), cost(x2));
    for _ in 0..200 {
        if (hi - lo).abs() < 1e-13 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = cost(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = cost(x2);
        }
    }
    let p = if f1 <= f2 { x1 } else { x2 };
    let (a, b, _) = linear_fit(tail, p);
    Ok(Fit {
        limit: a,
        rate: Some(p),
        amplitude: b,
        residual: rms(tail, |n| a + b * n.powf(-p)),
    })
}

fn rms(points: &[(f64, f64)], model: impl Fn(f64) -> f64) -> f64 {
    let ss: f64 = points.iter().map(|&(n, v)| (v - model(n)).powi(2)).sum();
    (ss / points.len() as f64).sqrt()
}

/// Least-squares slope of `ln |v|` against `ln n`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::SeriesTooShort(points.len()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(n, v)| (n.ln(), v.abs().ln())).collect();
    linear_slope(&logs)
}

/// Least-squares slope of `v` against `n`.
pub fn linear_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::SeriesTooShort(points.len()));
    }
    let m = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / m;
    let my = points.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("slope needs at least two distinct abscissae".into()));
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series() {
        let f = extrapolate(&[(10.0, 2.5), (20.0, 2.5), (40.0, 2.5)]).unwrap();
        assert_eq!(f.limit, 2.5);
        assert_eq!(f.rate, None);
        assert_eq!(f.residual, 0.0);
    }

    #[test]
    fn synthetic_inverse_n() {
        let pts: Vec<(f64, f64)> = [8.0, 16.0, 64.0, 256.0].iter().map(|&n| (n, 1.0 + 3.0 / n)).collect();
        let f = extrapolate(&pts).unwrap();
        assert!((f.limit - 1.0).abs() < 1e-6, "{f:?}");
        assert!((f.rate.unwrap() - 1.0).abs() < 1e-6, "{f:?}");
        assert!(f.residual < 1e-9);
    }

    #[test]
    fn growth_has_negative_rate() {
        let pts: Vec<(f64, f64)> = [16.0f64, 64.0, 256.0].iter().map(|&n| (n, 0.5 * n.sqrt())).collect();
        let f = extrapolate(&pts).unwrap();
        assert!((f.rate.unwrap() + 0.5).abs() < 1e-6, "{f:?}");
        assert!(f.limit.abs() < 1e-6);
    }

    #[test]
    fn too_short() {
        assert!(matches!(extrapolate(&[(1.0, 1.0), (2.0, 2.0)]), Err(Error::SeriesTooShort(2))));
    }

    #[test]
    fn deterministic_and_order_independent() {
        let a = [(64.0, 0.61), (256.0, 0.607), (1024.0, 0.6066)];
        let b = [a[2], a[0], a[1]];
        assert_eq!(extrapolate(&a).unwrap(), extrapolate(&b).unwrap());
    }

    #[test]
    fn slopes() {
        let pts: Vec<(f64, f64)> = [4.0, 8.0, 16.0].iter().map(|&n| (n, 3.0 / n)).collect();
        assert!((loglog_slope(&pts).unwrap() + 1.0).abs() < 1e-12);
        let lin = [(1.0, 2.0), (3.0, 3.0), (5.0, 4.0)];
        assert!((linear_slope(&lin).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn provenance_names() {
        assert_eq!(serde_json::to_string(&Provenance::Published).unwrap(), "\"published\"");
        assert_eq!(Provenance::Derived.as_str(), "derived");
    }
}
