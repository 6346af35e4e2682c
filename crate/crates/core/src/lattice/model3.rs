//! Three flavors per site: the first two bind into pairs `b_i = a_i^1 a_i^2`, the third is a
//! single fermion `a_i^3`. `M = sum z_i b_i / sqrt(N)`, `eta = sum a_i^3 / sqrt(N)`, `Q = M eta`.
//!
//! With the Jordan-Wigner order fixed in `algebra::fermion`, `b_i^dag = -sigma_+^i` on the pair
//! sector, where a pair counts as spin up and the empty site as spin down.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::{validate_couplings, ModelInstance, ModelKind, Representation};
use crate::algebra::{
    anticommutator, commutator, FermionPolynomial, FockBasis, LatticeSpec, OperatorMatrix, C64,
    ONE, ZERO,
};
use crate::error::{Error, Result};

/// Largest site count for the pair-sector representation (dimension `4^N`).
pub const MODEL_III_MAX_SITES: usize = 4;

/// Largest site count for the full Fock representation (dimension `8^N`).
pub const MODEL_III_FULL_FOCK_MAX_SITES: usize = 3;

const FLAVORS: usize = 3;

#[derive(Debug, Clone)]
pub struct PairAlgebraOps {
    pub spec: LatticeSpec,
    pub basis: FockBasis,
    pub representation: Representation,
    pub b_ops: Vec<OperatorMatrix>,
    pub a3_ops: Vec<OperatorMatrix>,
    pub m_n: OperatorMatrix,
    pub eta_n: OperatorMatrix,
}

/// Deviations from the pair-algebra relations and the three statements about `M` and `eta`.
#[derive(Debug, Clone, Serialize)]
pub struct PairResiduals {
    /// `max_i ||b_i^2||`
    pub b_nilpotent: f64,
    /// `max_{i,k} ||[b_i, a_k^3]||`
    pub b_a3_commute: f64,
    /// `max_i ||{b_i, b_i^dag} - 1||` on the pair sector
    pub b_anticommutator: f64,
    /// `||eta eta^dag + eta^dag eta - 1||`
    pub eta_clifford: f64,
    /// `||eta^2||`
    pub eta_nilpotent: f64,
    /// `||[M, M^dag] - (1/N) sum z_i^2 (1 - 2 b_i^dag b_i)||` on the pair sector
    pub m_commutator: f64,
    /// `max(||[M, eta]||, ||[M, eta^dag]||)`
    pub m_eta_commute: f64,
}

impl PairResiduals {
    pub fn max(&self) -> f64 {
        [
            self.b_nilpotent,
            self.b_a3_commute,
            self.b_anticommutator,
            self.eta_clifford,
            self.eta_nilpotent,
            self.m_commutator,
            self.m_eta_commute,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Bitstrings whose first two flavors are both empty or both occupied at every site,
/// in ascending order.
pub fn pair_sector_states(n: usize) -> Vec<u64> {
    let mut states: Vec<u64> = (0..(1u64 << (2 * n)))
        .map(|choice| {
            (0..n).fold(0u64, |acc, i| {
                let pair = (choice >> (2 * i)) & 1;
                let single = (choice >> (2 * i + 1)) & 1;
                acc | (pair * (0b011 << (FLAVORS * i))) | (single << (FLAVORS * i + 2))
            })
        })
        .collect();
    states.sort_unstable();
    states
}

fn is_pair_locked(state: u64, n: usize) -> bool {
    (0..n).all(|i| {
        let bits = (state >> (FLAVORS * i)) & 0b011;
        bits == 0 || bits == 0b011
    })
}

impl PairAlgebraOps {
    fn build(z: &[f64], representation: Representation) -> Result<Self> {
        validate_couplings(z)?;
        let n = z.len();
        let (limit, what) = match representation {
            Representation::PairSector => (MODEL_III_MAX_SITES, "Model III pair-sector sites"),
            Representation::FullFock => (MODEL_III_FULL_FOCK_MAX_SITES, "Model III Fock sites"),
        };
        if n > limit {
            return Err(Error::DimensionOverflow {
                what,
                requested: n,
                limit,
            });
        }
        let spec = LatticeSpec::new(n, FLAVORS)?;
        let basis = match representation {
            Representation::PairSector => FockBasis::new(pair_sector_states(n)),
            Representation::FullFock => FockBasis::full(&spec)?,
        };
        let root = (n as f64).sqrt();
        let pair = |i: usize| {
            FermionPolynomial::annihilator(spec.mode(i, 0))
                .mul(&FermionPolynomial::annihilator(spec.mode(i, 1)))
        };
        let b_ops = (0..n)
            .map(|i| pair(i).to_operator(&basis, format!("b_{i}")))
            .collect::<Result<Vec<_>>>()?;
        let a3_ops = (0..n)
            .map(|i| FermionPolynomial::annihilator(spec.mode(i, 2)).to_operator(&basis, format!("a3_{i}")))
            .collect::<Result<Vec<_>>>()?;
        let m_n = FermionPolynomial::sum(
            z.iter()
                .enumerate()
                .map(|(i, &zi)| pair(i).scale(C64::new(zi / root, 0.0))),
        )
        .to_operator(&basis, "M")?;
        let eta_n = FermionPolynomial::sum(
            (0..n).map(|i| FermionPolynomial::annihilator(spec.mode(i, 2)).scale(C64::new(1.0 / root, 0.0))),
        )
        .to_operator(&basis, "eta")?;
        Ok(Self {
            spec,
            basis,
            representation,
            b_ops,
            a3_ops,
            m_n,
            eta_n,
        })
    }

    pub fn n(&self) -> usize {
        self.spec.n_sites()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `sum_i b_i^dag b_i`
    pub fn pair_number(&self) -> OperatorMatrix {
        let mut out = OperatorMatrix::zeros(self.dim());
        for b in &self.b_ops {
            out = &out + &(&b.adjoint() * b);
        }
        out.with_label("N_pair")
    }

    /// Isometry onto the pair-locked states; the identity in the pair-sector representation.
    pub fn pair_sector_isometry(&self) -> DMatrix<C64> {
        let n = self.n();
        let locked: Vec<usize> = self
            .basis
            .states()
            .iter()
            .enumerate()
            .filter(|(_, &s)| is_pair_locked(s, n))
            .map(|(k, _)| k)
            .collect();
        let mut v = DMatrix::zeros(self.dim(), locked.len());
        for (col, &row) in locked.iter().enumerate() {
            v[(row, col)] = ONE;
        }
        v
    }

    pub fn residuals(&self, z: &[f64]) -> Result<PairResiduals> {
        let n = self.n();
        if z.len() != n {
            return Err(Error::DimensionMismatch {
                left: z.len(),
                right: n,
            });
        }
        let iso = self.pair_sector_isometry();
        let on_sector = |op: &OperatorMatrix| op.compress(&iso);
        let sector_dim = iso.ncols();
        let id = OperatorMatrix::identity(sector_dim);
        let id_full = OperatorMatrix::identity(self.dim());

        let mut b_nilpotent: f64 = 0.0;
        let mut b_a3_commute: f64 = 0.0;
        let mut b_anticommutator: f64 = 0.0;
        let mut expected = OperatorMatrix::zeros(self.dim());
        for (b, &zi) in self.b_ops.iter().zip(z) {
            b_nilpotent = b_nilpotent.max((b * b).norm());
            for a3 in &self.a3_ops {
                b_a3_commute = b_a3_commute.max(commutator(b, a3)?.norm());
            }
            let anti = on_sector(&anticommutator(b, &b.adjoint())?)?;
            b_anticommutator = b_anticommutator.max((&anti - &id).norm());
            let occ = &b.adjoint() * b;
            expected = &expected + &(&id_full - &occ.scale_real(2.0)).scale_real(zi * zi / n as f64);
        }
        let eta = &self.eta_n;
        let eta_d = eta.adjoint();
        let eta_clifford = (&anticommutator(eta, &eta_d)? - &id_full).norm();
        let eta_nilpotent = (eta * eta).norm();
        let mm = commutator(&self.m_n, &self.m_n.adjoint())?;
        let m_commutator = on_sector(&(&mm - &expected))?.norm();
        let m_eta_commute = commutator(&self.m_n, eta)?
            .norm()
            .max(commutator(&self.m_n, &eta_d)?.norm());
        Ok(PairResiduals {
            b_nilpotent,
            b_a3_commute,
            b_anticommutator,
            eta_clifford,
            eta_nilpotent,
            m_commutator,
            m_eta_commute,
        })
    }

    /// `M^dag M + eta eta^dag [M, M^dag]`, which equals `{Q, Q^dag}` identically.
    pub fn h_expansion(&self) -> OperatorMatrix {
        let m = &self.m_n;
        let md = m.adjoint();
        let eta = &self.eta_n;
        let mm = &(m * &md) - &(&md * m);
        (&(&md * m) + &(&(eta * &eta.adjoint()) * &mm)).with_label("H_expansion")
    }

    /// `M^dag M + eta eta^dag (1 - (2/N) sum b^dag b)` for unit couplings.
    pub fn h_expansion_pair_number(&self) -> OperatorMatrix {
        let m = &self.m_n;
        let eta = &self.eta_n;
        let id = OperatorMatrix::identity(self.dim());
        let factor = &id - &self.pair_number().scale_real(2.0 / self.n() as f64);
        (&(&m.adjoint() * m) + &(&(eta * &eta.adjoint()) * &factor)).with_label("H_expansion")
    }
}

/// Model III with couplings `z` in the requested representation.
pub fn build_model_iii_weighted(
    z: &[f64],
    representation: Representation,
) -> Result<(ModelInstance, PairAlgebraOps)> {
    let ops = PairAlgebraOps::build(z, representation)?;
    let q = (&ops.m_n * &ops.eta_n).with_label("Q");
    let model = ModelInstance::from_supercharge(ModelKind::ModelIII, ops.spec, z.to_vec(), representation, q, None);
    Ok((model, ops))
}

/// Model III with unit couplings on the pair sector, `N <= 4`.
pub fn build_model_iii_fock(n: usize) -> Result<(ModelInstance, PairAlgebraOps)> {
    if n == 0 {
        return Err(Error::InvalidArgument("Model III needs at least one site".into()));
    }
    build_model_iii_weighted(&vec![1.0; n], Representation::PairSector)
}

/// Model III with unit couplings on all `8^N` Fock states, `N <= 3`.
pub fn model_iii_full_fock(n: usize) -> Result<(ModelInstance, PairAlgebraOps)> {
    if n == 0 {
        return Err(Error::InvalidArgument("Model III needs at least one site".into()));
    }
    build_model_iii_weighted(&vec![1.0; n], Representation::FullFock)
}

/// Columns `v_{k,c}` at index `c (N+1) + k`: `v_{k,0}` is the normalized symmetric state with
/// `k` pairs and no single fermions, signed as `(-sum b^dag)^k |vac>`; `v_{k,1} = eta^dag v_{k,0}`.
/// Compressing a pair-sector operator with this isometry yields its matrix in the Dicke basis.
pub fn symmetric_pair_isometry(ops: &PairAlgebraOps) -> Result<DMatrix<C64>> {
    let n = ops.n();
    let dim = ops.dim();
    let mut v = DMatrix::zeros(dim, 2 * (n + 1));
    let mut counts = vec![0usize; n + 1];
    let single_mask: u64 = (0..n).map(|i| 1u64 << (FLAVORS * i + 2)).sum();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (row, &state) in ops.basis.states().iter().enumerate() {
        if state & single_mask != 0 || !is_pair_locked(state, n) {
            continue;
        }
        let k = (state.count_ones() / 2) as usize;
        counts[k] += 1;
        members[k].push(row);
    }
    let eta_d = ops.eta_n.adjoint();
    for k in 0..=n {
        if counts[k] == 0 {
            return Err(Error::Invariant(format!("no symmetric state with {k} pairs")));
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let amp = C64::new(sign / (counts[k] as f64).sqrt(), 0.0);
        let mut col = DVector::from_element(dim, ZERO);
        for &row in &members[k] {
            col[row] = amp;
        }
        let raised = eta_d.apply(&col);
        v.set_column(k, &col);
        v.set_column(n + 1 + k, &raised);
    }
    Ok(v)
}

/// `||HV - V (V^dag H V)||` for an isometry `V`.
pub fn invariance_residual(h: &OperatorMatrix, v: &DMatrix<C64>) -> Result<f64> {
    let compressed = h.compress(v)?;
    let hv = h.entries() * v;
    let vc = v * compressed.entries();
    Ok((hv - vc).iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
}

/// `||M_N||` in closed form: the largest lowering amplitude of the spin-N/2 multiplet over `sqrt(N)`.
pub fn collective_lowering_norm(n: usize) -> f64 {
    let nf = n as f64;
    (0..n)
        .map(|k| (((k + 1) * (n - k)) as f64).sqrt())
        .fold(0.0, f64::max)
        / nf.sqrt()
}
