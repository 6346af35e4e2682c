use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Largest tolerated `max |A - A^dag|`, relative to `max(1, max |A|)`, for an
/// operator flagged Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense complex square matrix. Every algebra element in the crate (supercharges,
/// generators, fermion and spin operators) is carried by this type.
#[derive(Clone)]
pub struct OperatorMatrix {
    entries: DMatrix<C64>,
    hermitian_hint: Option<bool>,
    label: String,
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorMatrix")
            .field("label", &self.label)
            .field("dim", &self.dim())
            .field("hermitian_hint", &self.hermitian_hint)
            .finish()
    }
}

impl OperatorMatrix {
    pub fn new(entries: DMatrix<C64>, label: impl Into<String>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch {
                left: entries.nrows(),
                right: entries.ncols(),
            });
        }
        if entries.nrows() == 0 {
            return Err(Error::InvalidArgument("operator dimension must be positive".into()));
        }
        Ok(Self {
            entries,
            hermitian_hint: None,
            label: label.into(),
        })
    }

    /// Builds an operator flagged Hermitian, rejecting inputs that are not.
    pub fn hermitian(entries: DMatrix<C64>, label: impl Into<String>) -> Result<Self> {
        let mut op = Self::new(entries, label)?;
        let dev = op.hermitian_deviation();
        if dev > HERMITIAN_TOL * op.max_abs().max(1.0) {
            return Err(Error::NotHermitian {
                label: op.label,
                deviation: dev,
            });
        }
        op.hermitian_hint = Some(true);
        Ok(op)
    }

    /// Replaces the entries by `(A + A^dag) / 2` and flags the result Hermitian.
    /// Use only where the operator is Hermitian by construction.
    pub fn symmetrized(&self) -> Self {
        let e = (&self.entries + self.entries.adjoint()) * C64::new(0.5, 0.0);
        Self {
            entries: e,
            hermitian_hint: Some(true),
            label: self.label.clone(),
        }
    }

    pub fn from_fn(dim: usize, label: impl Into<String>, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self {
            entries: DMatrix::from_fn(dim, dim, f),
            hermitian_hint: None,
            label: label.into(),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: DMatrix::identity(dim, dim),
            hermitian_hint: Some(true),
            label: "1".into(),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: DMatrix::zeros(dim, dim),
            hermitian_hint: Some(true),
            label: "0".into(),
        }
    }

    pub fn diagonal(values: &[f64], label: impl Into<String>) -> Self {
        let n = values.len();
        let mut m = DMatrix::zeros(n, n);
        for (k, v) in values.iter().enumerate() {
            m[(k, k)] = C64::new(*v, 0.0);
        }
        Self {
            entries: m,
            hermitian_hint: Some(true),
            label: label.into(),
        }
    }

    pub fn pauli_x() -> Self {
        Self::hermitian(
            DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
            "sigma_x",
        )
        .expect("Pauli matrices are Hermitian")
    }

    pub fn pauli_y() -> Self {
        Self::hermitian(DMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]), "sigma_y")
            .expect("Pauli matrices are Hermitian")
    }

    pub fn pauli_z() -> Self {
        Self::hermitian(DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]), "sigma_z")
            .expect("Pauli matrices are Hermitian")
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn hermitian_hint(&self) -> Option<bool> {
        self.hermitian_hint
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_hint(mut self, hint: Option<bool>) -> Self {
        self.hermitian_hint = hint;
        self
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
            hermitian_hint: self.hermitian_hint,
            label: format!("{}^dag", self.label),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        let hint = match self.hermitian_hint {
            Some(true) if c.im == 0.0 => Some(true),
            _ => None,
        };
        Self {
            entries: &self.entries * c,
            hermitian_hint: hint,
            label: self.label.clone(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.entries * v
    }

    /// `<x| A |y>`
    pub fn matrix_element(&self, x: &DVector<C64>, y: &DVector<C64>) -> C64 {
        x.dotc(&(&self.entries * y))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self) -> bool {
        match self.hermitian_hint {
            Some(false) => false,
            _ => self.hermitian_deviation() <= HERMITIAN_TOL * self.max_abs().max(1.0),
        }
    }

    /// Operator (spectral) norm: the largest singular value.
    pub fn norm(&self) -> f64 {
        if self.max_abs() == 0.0 {
            return 0.0;
        }
        let gram = self.entries.adjoint() * &self.entries;
        let gram = (&gram + gram.adjoint()) * C64::new(0.5, 0.0);
        let top = gram
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(0.0_f64, f64::max);
        top.max(0.0).sqrt()
    }

    pub fn kron(&self, other: &Self) -> Self {
        let hint = match (self.hermitian_hint, other.hermitian_hint) {
            (Some(true), Some(true)) => Some(true),
            _ => None,
        };
        Self {
            entries: self.entries.kronecker(&other.entries),
            hermitian_hint: hint,
            label: format!("{} (x) {}", self.label, other.label),
        }
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..k {
            out = &out * self;
        }
        out.with_label(format!("{}^{k}", self.label))
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(self * other)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        Ok(self - other)
    }

    /// Compresses the operator onto the column space of an isometry: `V^dag A V`.
    pub fn compress(&self, isometry: &DMatrix<C64>) -> Result<Self> {
        if isometry.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: isometry.nrows(),
            });
        }
        let m = isometry.adjoint() * &self.entries * isometry;
        Self::new(m, format!("{}|sub", self.label)).map(|o| o.with_hint(self.hermitian_hint))
    }
}

fn combine_hint(a: Option<bool>, b: Option<bool>) -> Option<bool> {
    match (a, b) {
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

impl<'a> Mul<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        OperatorMatrix {
            entries: &self.entries * &rhs.entries,
            hermitian_hint: None,
            label: format!("{}*{}", self.label, rhs.label),
        }
    }
}

impl<'a> Add<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        OperatorMatrix {
            entries: &self.entries + &rhs.entries,
            hermitian_hint: combine_hint(self.hermitian_hint, rhs.hermitian_hint),
            label: format!("{}+{}", self.label, rhs.label),
        }
    }
}

impl<'a> Sub<&'a OperatorMatrix> for &'a OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &'a OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        OperatorMatrix {
            entries: &self.entries - &rhs.entries,
            hermitian_hint: combine_hint(self.hermitian_hint, rhs.hermitian_hint),
            label: format!("{}-{}", self.label, rhs.label),
        }
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn neg(self) -> OperatorMatrix {
        self.scale_real(-1.0)
    }
}

impl Mul<C64> for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: C64) -> OperatorMatrix {
        self.scale(rhs)
    }
}

/// Sum of operators of equal dimension; `None` for an empty iterator.
pub fn sum<'a>(ops: impl IntoIterator<Item = &'a OperatorMatrix>) -> Option<OperatorMatrix> {
    let mut it = ops.into_iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, op| &acc + op))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_constructor_rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]);
        assert!(matches!(
            OperatorMatrix::hermitian(m, "a"),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn non_square_is_rejected() {
        let m = DMatrix::<C64>::zeros(2, 3);
        assert!(OperatorMatrix::new(m, "x").is_err());
    }

    #[test]
    fn spectral_norm_of_pauli_and_nilpotent() {
        assert!((OperatorMatrix::pauli_x().norm() - 1.0).abs() < 1e-14);
        let a = OperatorMatrix::new(DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO]), "a")
            .unwrap();
        assert!((a.norm() - 1.0).abs() < 1e-14);
        assert!((a.frobenius() - 1.0).abs() < 1e-14);
        assert_eq!(OperatorMatrix::zeros(3).norm(), 0.0);
    }

    #[test]
    fn pauli_products() {
        let x = OperatorMatrix::pauli_x();
        let y = OperatorMatrix::pauli_y();
        let z = OperatorMatrix::pauli_z();
        let xy = &x * &y;
        let iz = z.scale(I);
        assert!((&xy - &iz).max_abs() < 1e-15);
        assert!(x.kron(&z).is_hermitian());
        assert_eq!(x.kron(&z).dim(), 4);
    }

    #[test]
    fn try_ops_report_dimension_mismatch() {
        let a = OperatorMatrix::identity(2);
        let b = OperatorMatrix::identity(3);
        assert_eq!(
            a.try_mul(&b).unwrap_err(),
            Error::DimensionMismatch { left: 2, right: 3 }
        );
    }
}
