use super::{validate_couplings, ModelInstance, ModelKind, Representation};
use crate::algebra::superdecomp::{nilpotency_residual, NILPOTENCY_TOL};
use crate::algebra::{FermionPolynomial, FockBasis, GaugeAngle, LatticeSpec, OperatorMatrix, C64};
use crate::error::{Error, Result};

pub const MODEL_I_MAX_SITES: usize = 10;
pub const MODEL_II_MAX_SITES: usize = 5;

pub const UP: usize = 0;
pub const DOWN: usize = 1;

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// One mode, `Q = a`.
pub fn build_baby(alpha: GaugeAngle) -> Result<ModelInstance> {
    let spec = LatticeSpec::new(1, 1)?;
    let basis = FockBasis::full(&spec)?;
    let q = FermionPolynomial::annihilator(0).to_operator(&basis, "Q")?;
    Ok(ModelInstance::from_supercharge(
        ModelKind::Baby,
        spec,
        vec![1.0],
        Representation::FullFock,
        q,
        Some(alpha),
    ))
}

/// One flavor per site, `Q = sum_i z_i a_i`. `H` is the multiple `sum z_i^2` of the identity.
pub fn build_model_i(z: &[f64]) -> Result<ModelInstance> {
    validate_couplings(z)?;
    if z.len() > MODEL_I_MAX_SITES {
        return Err(Error::DimensionOverflow {
            what: "Model I sites",
            requested: z.len(),
            limit: MODEL_I_MAX_SITES,
        });
    }
    let spec = LatticeSpec::new(z.len(), 1)?;
    let basis = FockBasis::full(&spec)?;
    let q = FermionPolynomial::sum(
        z.iter()
            .enumerate()
            .map(|(i, &zi)| FermionPolynomial::annihilator(spec.mode(i, 0)).scale(real(zi))),
    )
    .to_operator(&basis, "Q")?;
    let model = ModelInstance::from_supercharge(
        ModelKind::ModelI,
        spec,
        z.to_vec(),
        Representation::FullFock,
        q,
        None,
    );
    let total: f64 = z.iter().map(|x| x * x).sum();
    let expected = OperatorMatrix::identity(model.dim()).scale_real(total);
    let dev = (&model.h - &expected).max_abs();
    if dev > 1e-12 * total.max(1.0) {
        return Err(Error::Invariant(format!(
            "Model I Hamiltonian deviates from (sum z^2) * 1 by {dev:.3e}"
        )));
    }
    Ok(model)
}

/// `sum_i z_i a_i / (sum_k z_k^2)^{1/2}`: a single normalized fermion mode.
pub fn model_i_collective_mode(z: &[f64]) -> Result<OperatorMatrix> {
    validate_couplings(z)?;
    let spec = LatticeSpec::new(z.len(), 1)?;
    let basis = FockBasis::full(&spec)?;
    let norm = z.iter().map(|x| x * x).sum::<f64>().sqrt();
    FermionPolynomial::sum(
        z.iter()
            .enumerate()
            .map(|(i, &zi)| FermionPolynomial::annihilator(i).scale(real(zi / norm))),
    )
    .to_operator(&basis, "eta")
}

/// Spin up/down per site, `Q = sum_i z_i n_{up,i} a_{down,i}`.
pub fn build_model_ii(z: &[f64]) -> Result<ModelInstance> {
    validate_couplings(z)?;
    if z.len() > MODEL_II_MAX_SITES {
        return Err(Error::DimensionOverflow {
            what: "Model II sites",
            requested: z.len(),
            limit: MODEL_II_MAX_SITES,
        });
    }
    let spec = LatticeSpec::new(z.len(), 2)?;
    let basis = FockBasis::full(&spec)?;
    let q = FermionPolynomial::sum(z.iter().enumerate().map(|(i, &zi)| {
        let up = spec.mode(i, UP);
        let down = spec.mode(i, DOWN);
        FermionPolynomial::creator(up)
            .mul(&FermionPolynomial::annihilator(up))
            .mul(&FermionPolynomial::annihilator(down))
            .scale(real(zi))
    }))
    .to_operator(&basis, "Q")?;
    let model = ModelInstance::from_supercharge(
        ModelKind::ModelII,
        spec,
        z.to_vec(),
        Representation::FullFock,
        q,
        None,
    );
    let expected = model_ii_hamiltonian_closed(&spec, z, &basis)?;
    let dev = (&model.h - &expected).max_abs();
    let scale = z.iter().map(|x| x * x).sum::<f64>().max(1.0);
    if dev > 1e-12 * scale {
        return Err(Error::Invariant(format!(
            "Model II Hamiltonian deviates from sum z^2 n_up by {dev:.3e}"
        )));
    }
    Ok(model)
}

/// `sum_i z_i^2 n_{up,i}`
pub(crate) fn model_ii_hamiltonian_closed(
    spec: &LatticeSpec,
    z: &[f64],
    basis: &FockBasis,
) -> Result<OperatorMatrix> {
    FermionPolynomial::sum(z.iter().enumerate().map(|(i, &zi)| {
        let up = spec.mode(i, UP);
        FermionPolynomial::creator(up)
            .mul(&FermionPolynomial::annihilator(up))
            .scale(real(zi * zi))
    }))
    .to_operator(basis, "H_closed")
}

/// Nearest-neighbour hopping candidate `sum_i z_i a_i^dag a_i a_{i+1}` with periodic
/// boundary; it is not nilpotent.
pub fn hopping_candidate(z: &[f64]) -> Result<OperatorMatrix> {
    validate_couplings(z)?;
    let n = z.len();
    let spec = LatticeSpec::new(n, 1)?;
    let basis = FockBasis::full(&spec)?;
    FermionPolynomial::sum(z.iter().enumerate().map(|(i, &zi)| {
        FermionPolynomial::creator(i)
            .mul(&FermionPolynomial::annihilator(i))
            .mul(&FermionPolynomial::annihilator((i + 1) % n))
            .scale(real(zi))
    }))
    .to_operator(&basis, "Q_hop")
}

/// `(residual <= 1e-12, ||Q^2|| / ||Q||^2)`
pub fn nilpotency_check(q: &OperatorMatrix) -> (bool, f64) {
    let residual = nilpotency_residual(q);
    (residual <= NILPOTENCY_TOL, residual)
}
