//! Collective spin operators on the spin-N/2 multiplet and its product with one Clifford mode.
//!
//! Spin basis vector `k` has `k` spins up, so `S_z = 2k - N`. Product index is
//! `c (N + 1) + k`, where `c = 0` is annihilated by `eta` and `eta |1> = |0>`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use super::tridiag::{SymTridiag, TridiagEigen};
use crate::algebra::{GaugeAngle, OperatorMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

pub const DICKE_MAX_N: usize = 20_000;

/// Largest `N` for which dense `(2N + 2)`-dimensional matrices are built.
pub const DICKE_DENSE_MAX_N: usize = 512;

/// Largest `N` for which the `S_x` eigenbasis (an `(N + 1)^2` table) is built.
pub const DICKE_ROTATION_MAX_N: usize = 4096;

#[derive(Debug)]
pub struct DickeOperators {
    n: usize,
    sx_eigen: OnceLock<TridiagEigen>,
}

impl Clone for DickeOperators {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            sx_eigen: self.sx_eigen.clone(),
        }
    }
}

pub fn collective_ops(n: usize) -> Result<DickeOperators> {
    DickeOperators::new(n)
}

impl DickeOperators {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("particle number must be positive".into()));
        }
        if n > DICKE_MAX_N {
            return Err(Error::DimensionOverflow {
                what: "Dicke particle number",
                requested: n,
                limit: DICKE_MAX_N,
            });
        }
        Ok(Self {
            n,
            sx_eigen: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spin_dim(&self) -> usize {
        self.n + 1
    }

    pub fn dim(&self) -> usize {
        2 * (self.n + 1)
    }

    pub fn index(&self, k: usize, c: usize) -> usize {
        debug_assert!(k <= self.n && c < 2);
        c * (self.n + 1) + k
    }

    /// `S_+ |k> = raise_amp(k) |k + 1>`, zero at `k = N`.
    pub fn raise_amp(&self, k: usize) -> f64 {
        if k >= self.n {
            return 0.0;
        }
        (((k + 1) * (self.n - k)) as f64).sqrt()
    }

    pub fn sz_value(&self, k: usize) -> f64 {
        2.0 * k as f64 - self.n as f64
    }

    fn check_spin(&self, v: &DVector<C64>) -> Result<()> {
        if v.len() != self.spin_dim() {
            return Err(Error::DimensionMismatch {
                left: self.spin_dim(),
                right: v.len(),
            });
        }
        Ok(())
    }

    fn check_product(&self, v: &DVector<C64>) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: v.len(),
            });
        }
        Ok(())
    }

    pub fn apply_s_plus(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        self.check_spin(v)?;
        let mut out = DVector::from_element(self.spin_dim(), ZERO);
        for k in 0..self.n {
            out[k + 1] = v[k] * self.raise_amp(k);
        }
        Ok(out)
    }

    pub fn apply_s_minus(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        self.check_spin(v)?;
        let mut out = DVector::from_element(self.spin_dim(), ZERO);
        for k in 0..self.n {
            out[k] = v[k + 1] * self.raise_amp(k);
        }
        Ok(out)
    }

    pub fn apply_s_z(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        self.check_spin(v)?;
        Ok(DVector::from_fn(self.spin_dim(), |k, _| v[k] * self.sz_value(k)))
    }

    /// `S_x = S_+ + S_-`
    pub fn apply_s_x(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        Ok(self.apply_s_plus(v)? + self.apply_s_minus(v)?)
    }

    /// `S_y = -i (S_+ - S_-)`
    pub fn apply_s_y(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        Ok((self.apply_s_plus(v)? - self.apply_s_minus(v)?) * C64::new(0.0, -1.0))
    }

    /// Applies a spin operator to both Clifford components of a product vector.
    pub fn lift_apply(
        &self,
        v: &DVector<C64>,
        f: impl Fn(&DVector<C64>) -> Result<DVector<C64>>,
    ) -> Result<DVector<C64>> {
        self.check_product(v)?;
        let (lower, upper) = self.split(v);
        Ok(self.join(&f(&lower)?, &f(&upper)?))
    }

    /// Spin components `(c = 0, c = 1)` of a product vector.
    pub fn split(&self, v: &DVector<C64>) -> (DVector<C64>, DVector<C64>) {
        let m = self.spin_dim();
        (v.rows(0, m).into_owned(), v.rows(m, m).into_owned())
    }

    pub fn join(&self, c0: &DVector<C64>, c1: &DVector<C64>) -> DVector<C64> {
        let m = self.spin_dim();
        DVector::from_fn(2 * m, |i, _| if i < m { c0[i] } else { c1[i - m] })
    }

    /// `eta` on a product vector: moves the `c = 1` component into `c = 0`.
    pub fn apply_eta(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        self.check_product(v)?;
        let (_, upper) = self.split(v);
        Ok(self.join(&upper, &DVector::from_element(self.spin_dim(), ZERO)))
    }

    pub fn apply_eta_dag(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        self.check_product(v)?;
        let (lower, _) = self.split(v);
        Ok(self.join(&DVector::from_element(self.spin_dim(), ZERO), &lower))
    }

    /// Diagonal of `H_SS = (S_+ S_- + [S_-, S_+] eta eta^dag) / N`: `S_- S_+ / N` on `c = 0`,
    /// `S_+ S_- / N` on `c = 1`.
    pub fn hss_diagonal(&self) -> Vec<f64> {
        let n = self.n;
        let nf = n as f64;
        let mut out = Vec::with_capacity(self.dim());
        for k in 0..=n {
            out.push(((k + 1) * (n - k)) as f64 / nf);
        }
        for k in 0..=n {
            out.push((k * (n + 1 - k)) as f64 / nf);
        }
        out
    }

    /// Diagonal of `H'_BCS = -S_+ S_- / N` on the product space.
    pub fn bcs_prime_diagonal(&self) -> Vec<f64> {
        let n = self.n;
        let nf = n as f64;
        let block: Vec<f64> = (0..=n).map(|k| -((k * (n + 1 - k)) as f64) / nf).collect();
        block.iter().chain(block.iter()).copied().collect()
    }

    /// Largest eigenvalue of the unnormalized block `S_+ S_-` (equivalently `S_- S_+`), in
    /// exact integer arithmetic: `max_k k (N + 1 - k)`.
    pub fn ceiling_block_eigenvalue(&self) -> u128 {
        let n = self.n as u128;
        (0..=n).map(|k| k * (n + 1 - k)).max().unwrap_or(0)
    }

    /// Applies `exp(-i t H)` for a Hamiltonian diagonal in the product basis.
    pub fn evolve_diagonal(&self, diag: &[f64], t: f64, v: &DVector<C64>) -> Result<DVector<C64>> {
        self.check_product(v)?;
        if diag.len() != v.len() {
            return Err(Error::DimensionMismatch {
                left: diag.len(),
                right: v.len(),
            });
        }
        Ok(DVector::from_fn(v.len(), |i, _| v[i] * C64::new(0.0, -t * diag[i]).exp()))
    }

    pub fn sx_tridiagonal(&self) -> SymTridiag {
        let off = (0..self.n).map(|k| self.raise_amp(k)).collect();
        SymTridiag::new(vec![0.0; self.spin_dim()], off).expect("well-formed tridiagonal")
    }

    /// Eigenbasis of `S_x`, whose eigenvalues are exactly `-N, -N + 2, ..., N`.
    pub fn sx_eigen(&self) -> Result<&TridiagEigen> {
        if self.n > DICKE_ROTATION_MAX_N {
            return Err(Error::DimensionOverflow {
                what: "Dicke rotation table",
                requested: self.n,
                limit: DICKE_ROTATION_MAX_N,
            });
        }
        Ok(self.sx_eigen.get_or_init(|| {
            let values = (0..=self.n).map(|j| self.sz_value(j)).collect();
            self.sx_tridiagonal().eigen_with_values(values)
        }))
    }

    /// `exp(i r S_x) v` on a spin vector.
    pub fn exp_i_sx(&self, r: f64, v: &DVector<C64>) -> Result<DVector<C64>> {
        self.check_spin(v)?;
        let eig = self.sx_eigen()?;
        let m = self.spin_dim();
        let mut out = DVector::from_element(m, ZERO);
        for (lambda, u) in eig.values.iter().zip(&eig.vectors) {
            let mut coeff = ZERO;
            for k in 0..m {
                coeff += v[k] * u[k];
            }
            coeff *= C64::new(0.0, r * lambda).exp();
            for k in 0..m {
                out[k] += coeff * u[k];
            }
        }
        Ok(out)
    }

    /// `exp(i phi S_z / 2) v` on a spin vector.
    pub fn exp_i_half_sz(&self, phi: f64, v: &DVector<C64>) -> Result<DVector<C64>> {
        self.check_spin(v)?;
        Ok(DVector::from_fn(self.spin_dim(), |k, _| {
            v[k] * C64::new(0.0, 0.5 * phi * self.sz_value(k)).exp()
        }))
    }

    /// `exp(i (a S_x - b S_y)) v` through `a S_x - b S_y = D (r S_x) D^dag` with
    /// `r = |(a, b)|`, `D = exp(i phi S_z / 2)`, `phi = atan2(b, a)`.
    pub fn exp_i_planar(&self, a: f64, b: f64, v: &DVector<C64>) -> Result<DVector<C64>> {
        let r = a.hypot(b);
        if r == 0.0 {
            self.check_spin(v)?;
            return Ok(v.clone());
        }
        let phi = b.atan2(a);
        let w = self.exp_i_half_sz(-phi, v)?;
        let w = self.exp_i_sx(r, &w)?;
        self.exp_i_half_sz(phi, &w)
    }

    // dense matrices

    fn check_dense(&self) -> Result<()> {
        if self.n > DICKE_DENSE_MAX_N {
            return Err(Error::DimensionOverflow {
                what: "dense Dicke particle number",
                requested: self.n,
                limit: DICKE_DENSE_MAX_N,
            });
        }
        Ok(())
    }

    pub fn s_plus(&self) -> Result<OperatorMatrix> {
        self.check_dense()?;
        let m = self.spin_dim();
        let mut e = DMatrix::from_element(m, m, ZERO);
        for k in 0..self.n {
            e[(k + 1, k)] = C64::new(self.raise_amp(k), 0.0);
        }
        OperatorMatrix::new(e, "S+")
    }

    pub fn s_minus(&self) -> Result<OperatorMatrix> {
        Ok(self.s_plus()?.adjoint().with_label("S-"))
    }

    pub fn s_z(&self) -> Result<OperatorMatrix> {
        self.check_dense()?;
        let vals: Vec<f64> = (0..=self.n).map(|k| self.sz_value(k)).collect();
        Ok(OperatorMatrix::diagonal(&vals, "Sz"))
    }

    pub fn s_x(&self) -> Result<OperatorMatrix> {
        let p = self.s_plus()?;
        Ok((&p + &p.adjoint()).with_label("Sx").with_hint(Some(true)))
    }

    pub fn s_y(&self) -> Result<OperatorMatrix> {
        let p = self.s_plus()?;
        Ok((&p - &p.adjoint())
            .scale(C64::new(0.0, -1.0))
            .with_label("Sy")
            .with_hint(Some(true)))
    }

    /// `1_2 (x) A` for a spin operator `A`.
    pub fn lifted(&self, spin_op: &OperatorMatrix) -> Result<OperatorMatrix> {
        if spin_op.dim() != self.spin_dim() {
            return Err(Error::DimensionMismatch {
                left: self.spin_dim(),
                right: spin_op.dim(),
            });
        }
        Ok(OperatorMatrix::identity(2)
            .kron(spin_op)
            .with_label(spin_op.label().to_string())
            .with_hint(spin_op.hermitian_hint()))
    }

    /// `eta (x) 1`, with `eta = |0><1|`.
    pub fn eta(&self) -> Result<OperatorMatrix> {
        self.check_dense()?;
        let e = OperatorMatrix::from_fn(2, "eta", |r, c| if (r, c) == (0, 1) { ONE } else { ZERO });
        Ok(e.kron(&OperatorMatrix::identity(self.spin_dim())).with_label("eta"))
    }

    /// `H_SS = (1/N) {S_+ S_- + [S_-, S_+] eta eta^dag}`, built from the operator products.
    pub fn build_hss(&self) -> Result<OperatorMatrix> {
        let sp = self.lifted(&self.s_plus()?)?;
        let sm = self.lifted(&self.s_minus()?)?;
        let eta = self.eta()?;
        let ee = &eta * &eta.adjoint();
        let comm = &(&sm * &sp) - &(&sp * &sm);
        let h = &(&sp * &sm) + &(&comm * &ee);
        Ok(h.scale_real(1.0 / self.n as f64).symmetrized().with_label("H_SS"))
    }

    /// `G_alpha = (e^{i alpha} eta S_- + e^{-i alpha} eta^dag S_+) / sqrt(N)`
    pub fn build_g_alpha(&self, alpha: GaugeAngle) -> Result<OperatorMatrix> {
        let sm = self.lifted(&self.s_minus()?)?;
        let eta = self.eta()?;
        let half = (&eta * &sm).scale(alpha.phase());
        let g = &half + &half.adjoint();
        Ok(g.scale_real(1.0 / (self.n as f64).sqrt())
            .symmetrized()
            .with_label(format!("G_{:.4}", alpha.radians())))
    }

    /// `F = [eta, eta^dag]`
    pub fn build_f(&self) -> Result<OperatorMatrix> {
        let eta = self.eta()?;
        Ok((&(&eta * &eta.adjoint()) - &(&eta.adjoint() * &eta)).with_label("F"))
    }

    /// `-S_+ S_- / N`
    pub fn build_bcs_prime(&self) -> Result<OperatorMatrix> {
        let sp = self.lifted(&self.s_plus()?)?;
        let sm = sp.adjoint();
        Ok((&sp * &sm).scale_real(-1.0 / self.n as f64).symmetrized().with_label("H'_BCS"))
    }
}

pub fn build_hss_dicke(ops: &DickeOperators) -> Result<OperatorMatrix> {
    ops.build_hss()
}

pub fn build_g_alpha_dicke(ops: &DickeOperators, alpha: GaugeAngle) -> Result<OperatorMatrix> {
    ops.build_g_alpha(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{commutator, hermitian_eigen, spectrum, unitary_flow};

    #[test]
    fn single_spin_is_pauli() {
        let ops = collective_ops(1).unwrap();
        let sp = ops.s_plus().unwrap();
        assert_eq!(sp.get(1, 0), ONE);
        let sz = ops.s_z().unwrap();
        assert_eq!(sz.get(0, 0).re, -1.0);
        assert_eq!(sz.get(1, 1).re, 1.0);
    }

    #[test]
    fn lowest_weight_amplitude_for_two_spins() {
        let ops = collective_ops(2).unwrap();
        assert!((ops.raise_amp(0) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn commutation_relations_and_casimir() {
        for n in [1usize, 2, 5, 12, 40] {
            let ops = collective_ops(n).unwrap();
            let sp = ops.s_plus().unwrap();
            let sm = ops.s_minus().unwrap();
            let sz = ops.s_z().unwrap();
            let scale = n as f64;
            assert!((&commutator(&sp, &sm).unwrap() - &sz).max_abs() < 1e-10 * scale);
            assert!((&commutator(&sz, &sp).unwrap() - &sp.scale_real(2.0)).max_abs() < 1e-10 * scale);
            assert!((&commutator(&sz, &sm).unwrap() + &sm.scale_real(2.0)).max_abs() < 1e-10 * scale);
            let sx = ops.s_x().unwrap();
            let sy = ops.s_y().unwrap();
            let casimir = &(&(&sx * &sx) + &(&sy * &sy)) + &(&sz * &sz);
            let target = OperatorMatrix::identity(n + 1).scale_real((n * (n + 2)) as f64);
            assert!((&casimir - &target).max_abs() < 1e-10 * scale * scale);
        }
    }

    #[test]
    fn lifted_spin_commutes_with_eta() {
        let ops = collective_ops(4).unwrap();
        let eta = ops.eta().unwrap();
        for op in [ops.s_plus().unwrap(), ops.s_z().unwrap()] {
            let l = ops.lifted(&op).unwrap();
            assert_eq!(commutator(&l, &eta).unwrap().max_abs(), 0.0);
        }
    }

    #[test]
    fn hss_is_gauge_invariant_square() {
        for n in [1usize, 2, 4, 7] {
            let ops = collective_ops(n).unwrap();
            let h = ops.build_hss().unwrap();
            let diag = ops.hss_diagonal();
            let expected = OperatorMatrix::diagonal(&diag, "d");
            assert!((&h - &expected).max_abs() < 1e-12);
            for alpha in [0.0, 1.1] {
                let g = ops.build_g_alpha(GaugeAngle::new(alpha)).unwrap();
                assert!((&(&g * &g) - &h).max_abs() < 1e-10);
            }
            let levels = spectrum(&h).unwrap();
            assert!(levels[0].value.abs() < 1e-12);
            for l in levels.iter().filter(|l| l.value > 1e-9) {
                assert_eq!(l.multiplicity % 2, 0, "n={n}");
            }
            let g = ops.build_g_alpha(GaugeAngle::new(0.3)).unwrap();
            let gv = hermitian_eigen(&g).unwrap().values;
            let m = gv.len();
            for k in 0..m {
                assert!((gv[k] + gv[m - 1 - k]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn gauge_map_through_f() {
        let ops = collective_ops(5).unwrap();
        let f = ops.build_f().unwrap();
        let g0 = ops.build_g_alpha(GaugeAngle::new(0.0)).unwrap();
        for alpha in [std::f64::consts::PI / 7.0, std::f64::consts::PI / 3.0, 1.0] {
            // F has eigenvalues +-1 on the two Clifford components, so e^{i alpha F}
            // rotates the relative phase by 2 alpha
            let ga = ops.build_g_alpha(GaugeAngle::new(alpha)).unwrap();
            let mapped = unitary_flow(&f, alpha / 2.0, &g0).unwrap();
            assert!((&mapped - &ga).max_abs() < 1e-10);
            let g2a = ops.build_g_alpha(GaugeAngle::new(2.0 * alpha)).unwrap();
            let literal = unitary_flow(&f, alpha, &g0).unwrap();
            assert!((&literal - &g2a).max_abs() < 1e-10);
        }
    }

    #[test]
    fn ceiling_block_law() {
        for n in (2..=1000).step_by(2) {
            let ops = collective_ops(n).unwrap();
            let n = n as u128;
            assert_eq!(4 * ops.ceiling_block_eigenvalue(), n * (n + 2));
        }
        let ops = collective_ops(4).unwrap();
        assert_eq!(4 * ops.ceiling_block_eigenvalue(), 24);
    }

    #[test]
    fn exp_sx_matches_dense() {
        for n in [1usize, 2, 6, 20] {
            let ops = collective_ops(n).unwrap();
            let sx = ops.s_x().unwrap();
            let sy = ops.s_y().unwrap();
            let v = DVector::from_fn(n + 1, |k, _| C64::new(1.0 + k as f64, 0.3 * k as f64));
            for r in [0.0, 0.4, 1.7] {
                let dense = crate::algebra::unitary(&sx, r).unwrap().apply(&v);
                let fast = ops.exp_i_sx(r, &v).unwrap();
                assert!((dense - fast).norm() < 1e-10 * v.norm(), "n={n} r={r}");
            }
            let (a, b) = (0.7, -1.3);
            let gen = (&sx.scale_real(a) - &sy.scale_real(b)).with_hint(Some(true));
            let dense = crate::algebra::unitary(&gen, 1.0).unwrap().apply(&v);
            let fast = ops.exp_i_planar(a, b, &v).unwrap();
            assert!((dense - fast).norm() < 1e-10 * v.norm(), "n={n}");
        }
    }

    #[test]
    fn sx_eigenbasis_is_orthonormal_at_large_n() {
        let ops = collective_ops(1024).unwrap();
        let eig = ops.sx_eigen().unwrap();
        assert!(eig.residual(&ops.sx_tridiagonal()) < 1e-9);
        let first = &eig.vectors[0];
        let mid = &eig.vectors[512];
        let dot: f64 = first.iter().zip(mid).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-10);
    }

    #[test]
    fn bounds() {
        assert!(collective_ops(0).is_err());
        assert!(matches!(collective_ops(20_001), Err(Error::DimensionOverflow { .. })));
        let big = collective_ops(600).unwrap();
        assert!(matches!(big.s_plus(), Err(Error::DimensionOverflow { .. })));
    }
}
