//! Real symmetric tridiagonal eigenproblems: implicit QL for eigenvalues and inverse
//! iteration with a pivoted tridiagonal solve for eigenvectors.

use crate::error::{Error, Result};

const MAX_QL_SWEEPS: usize = 64;
const INVERSE_ITERATIONS: usize = 3;
/// Eigenvalues closer than this (relative to the spectral radius) share a cluster.
const CLUSTER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    diag: Vec<f64>,
    /// `off[i]` couples `i` and `i + 1`
    off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidArgument("empty tridiagonal matrix".into()));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                left: diag.len(),
                right: off.len() + 1,
            });
        }
        if diag.iter().chain(&off).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite tridiagonal entry".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Gershgorin bound on the spectral radius.
    pub fn radius(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| {
                let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
                self.diag[i].abs() + left + right
            })
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.off[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Ascending eigenvalues by the implicit QL method with Wilkinson-type shifts.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.len();
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(0.0);
        for l in 0..n {
            let mut sweeps = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                sweeps += 1;
                if sweeps > MAX_QL_SWEEPS {
                    return Err(Error::Invariant(format!("QL iteration stalled at index {l}")));
                }
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = g.hypot(1.0);
                g = d[m] - d[l] + e[l] / (g + r.copysign(g));
                let (mut s, mut c, mut p) = (1.0f64, 1.0f64, 0.0f64);
                let mut deflated = false;
                let mut i = m;
                while i > l {
                    i -= 1;
                    let f = s * e[i];
                    let b = c * e[i];
                    r = f.hypot(g);
                    e[i + 1] = r;
                    if r == 0.0 {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        deflated = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if deflated {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }
        d.sort_by(f64::total_cmp);
        Ok(d)
    }

    /// Solves `(T - sigma) x = rhs` by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.len();
        let tiny = f64::EPSILON * self.radius().max(f64::MIN_POSITIVE);
        let mut d: Vec<f64> = self.diag.iter().map(|x| x - sigma).collect();
        if n == 1 {
            let p = if d[0].abs() < tiny { tiny } else { d[0] };
            return vec![rhs[0] / p];
        }
        let mut dl = self.off.clone();
        let mut du = self.off.clone();
        let mut du2 = vec![0.0; n - 1];
        let mut swapped = vec![false; n - 1];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for x in d.iter_mut() {
            if x.abs() < tiny {
                *x = tiny.copysign(if *x == 0.0 { 1.0 } else { *x });
            }
        }
        let mut b = rhs.to_vec();
        for i in 0..n - 1 {
            if swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            } else {
                b[i + 1] -= dl[i] * b[i];
            }
        }
        b[n - 1] /= d[n - 1];
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
        }
        b
    }

    /// Unit eigenvector for a (numerically exact) eigenvalue `lambda`, orthogonalized against
    /// `against`. `seed` varies the start vector within a cluster.
    pub fn eigenvector(&self, lambda: f64, seed: usize, against: &[&[f64]]) -> Vec<f64> {
        let n = self.len();
        let scale = self.radius().max(1.0);
        let sigma = lambda + 1e-13 * scale;
        let mut v: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.5 * ((i as f64 + 1.0) * (0.618_033_988_75 + seed as f64 * 0.414_213_562)).sin())
            .collect();
        normalize(&mut v);
        for _ in 0..INVERSE_ITERATIONS {
            let mut w = self.solve_shifted(sigma, &v);
            for u in against {
                let proj: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
                for (wi, ui) in w.iter_mut().zip(u.iter()) {
                    *wi -= proj * ui;
                }
            }
            normalize(&mut w);
            v = w;
        }
        // fix the overall sign so that the largest component is positive
        let (_, big) = v
            .iter()
            .enumerate()
            .fold((0usize, 0.0f64), |acc, (i, &x)| if x.abs() > acc.1.abs() { (i, x) } else { acc });
        if big < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
        v
    }

    /// Full eigendecomposition; eigenvectors in ascending eigenvalue order. Vectors within a
    /// cluster of nearly equal eigenvalues are re-orthogonalized.
    pub fn eigen_with_values(&self, values: Vec<f64>) -> TridiagEigen {
        let scale = self.radius().max(1.0);
        let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(values.len());
        let mut cluster_start = 0usize;
        for (j, &lambda) in values.iter().enumerate() {
            if j > 0 && (lambda - values[j - 1]).abs() > CLUSTER_TOL * scale {
                cluster_start = j;
            }
            let against: Vec<&[f64]> = vectors[cluster_start..j].iter().map(|v| v.as_slice()).collect();
            let v = self.eigenvector(lambda, j - cluster_start, &against);
            vectors.push(v);
        }
        TridiagEigen { values, vectors }
    }

    pub fn eigen(&self) -> Result<TridiagEigen> {
        let values = self.eigenvalues()?;
        Ok(self.eigen_with_values(values))
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

#[derive(Debug, Clone)]
pub struct TridiagEigen {
    pub values: Vec<f64>,
    /// `vectors[j]` belongs to `values[j]`
    pub vectors: Vec<Vec<f64>>,
}

impl TridiagEigen {
    /// `max |<v_i, v_j> - delta_ij|`
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate().skip(i) {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    /// `max_j ||T v_j - lambda_j v_j||`
    pub fn residual(&self, t: &SymTridiag) -> f64 {
        self.values
            .iter()
            .zip(&self.vectors)
            .map(|(&l, v)| {
                t.apply(v)
                    .iter()
                    .zip(v)
                    .map(|(tv, x)| (tv - l * x).powi(2))
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};

    fn dense(t: &SymTridiag) -> DMatrix<f64> {
        let n = t.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                t.diag()[i]
            } else if j == i + 1 {
                t.off()[i]
            } else if i == j + 1 {
                t.off()[j]
            } else {
                0.0
            }
        })
    }

    #[test]
    fn matches_dense_solver_on_random_matrices() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in [1usize, 2, 3, 10, 40] {
            let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let off: Vec<f64> = (0..n.saturating_sub(1)).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let t = SymTridiag::new(diag, off).unwrap();
            let eig = t.eigen().unwrap();
            let mut reference: Vec<f64> = dense(&t).symmetric_eigen().eigenvalues.iter().copied().collect();
            reference.sort_by(f64::total_cmp);
            for (a, b) in eig.values.iter().zip(&reference) {
                assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
            }
            assert!(eig.orthogonality_defect() < 1e-10, "n={n}");
            assert!(eig.residual(&t) < 1e-10, "n={n}");
        }
    }

    #[test]
    fn degenerate_spectrum_is_orthogonalized() {
        // two decoupled identical blocks: every eigenvalue is doubled
        let t = SymTridiag::new(vec![1.0, 2.0, 1.0, 2.0], vec![0.5, 0.0, 0.5]).unwrap();
        let eig = t.eigen().unwrap();
        assert!(eig.orthogonality_defect() < 1e-10);
        assert!(eig.residual(&t) < 1e-10);
    }

    #[test]
    fn spin_x_spectrum_is_even_integers() {
        let n = 30usize;
        let off: Vec<f64> = (0..n).map(|k| (((k + 1) * (n - k)) as f64).sqrt()).collect();
        let t = SymTridiag::new(vec![0.0; n + 1], off).unwrap();
        let vals = t.eigenvalues().unwrap();
        for (j, v) in vals.iter().enumerate() {
            assert!((v - (2.0 * j as f64 - n as f64)).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(SymTridiag::new(vec![], vec![]).is_err());
        assert!(SymTridiag::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymTridiag::new(vec![f64::NAN], vec![]).is_err());
    }
}
