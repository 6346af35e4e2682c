//! Concrete supersymmetric fermion lattice models on Fock space.

pub mod bcs;
pub mod flows;
pub mod model3;
pub mod models;

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::algebra::superdecomp::gauge_generator;
use crate::algebra::{GaugeAngle, LatticeSpec, OperatorMatrix};
use crate::error::{Error, Result};

pub use bcs::{build_bcs, BcsComparison, BcsRepresentation};
pub use flows::{baby_flow_closed, model_i_flow_closed, model_ii_flow_closed};
pub use model3::{
    build_model_iii_fock, build_model_iii_weighted, model_iii_full_fock, symmetric_pair_isometry,
    PairAlgebraOps,
};
pub use models::{
    build_baby, build_model_i, build_model_ii, hopping_candidate, model_i_collective_mode,
    nilpotency_check,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    Baby,
    ModelI,
    ModelII,
    ModelIII,
    Bcs,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Baby => "baby",
            ModelKind::ModelI => "I",
            ModelKind::ModelII => "II",
            ModelKind::ModelIII => "III",
            ModelKind::Bcs => "bcs",
        }
    }
}

/// The space the operators of a `ModelInstance` act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representation {
    /// all `2^modes` occupation states
    FullFock,
    /// Model III states whose first two flavors are locked into empty or doubly occupied pairs
    PairSector,
}

#[derive(Debug, Clone)]
pub struct ModelInstance {
    pub kind: ModelKind,
    pub spec: LatticeSpec,
    pub couplings: Vec<f64>,
    pub representation: Representation,
    pub q: Option<OperatorMatrix>,
    pub g_alpha: Vec<(GaugeAngle, OperatorMatrix)>,
    pub h: OperatorMatrix,
}

impl ModelInstance {
    pub(crate) fn from_supercharge(
        kind: ModelKind,
        spec: LatticeSpec,
        couplings: Vec<f64>,
        representation: Representation,
        q: OperatorMatrix,
        extra_angle: Option<GaugeAngle>,
    ) -> Self {
        let h = crate::algebra::anticommutator(&q, &q.adjoint())
            .expect("Q is square")
            .symmetrized()
            .with_label("H");
        let mut angles = vec![GaugeAngle::new(0.0), GaugeAngle::new(FRAC_PI_2)];
        if let Some(a) = extra_angle {
            if !angles.contains(&a) {
                angles.insert(0, a);
            }
        }
        let g_alpha = angles
            .into_iter()
            .map(|a| (a, gauge_generator(&q, a)))
            .collect();
        Self {
            kind,
            spec,
            couplings,
            representation,
            q: Some(q),
            g_alpha,
            h,
        }
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// `G_alpha = e^{i alpha} Q + e^{-i alpha} Q^dag`; `None` for models without a supercharge.
    pub fn g(&self, alpha: GaugeAngle) -> Option<OperatorMatrix> {
        if let Some((_, g)) = self.g_alpha.iter().find(|(a, _)| *a == alpha) {
            return Some(g.clone());
        }
        self.q.as_ref().map(|q| gauge_generator(q, alpha))
    }

    pub fn supercharge(&self) -> Result<&OperatorMatrix> {
        self.q
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument(format!("model {} has no supercharge", self.kind.name())))
    }
}

pub(crate) fn validate_couplings(z: &[f64]) -> Result<()> {
    if z.is_empty() {
        return Err(Error::InvalidArgument("at least one coupling is required".into()));
    }
    for (index, &value) in z.iter().enumerate() {
        if !(value > 0.0 && value.is_finite()) {
            return Err(Error::InvalidCoupling { index, value });
        }
    }
    Ok(())
}
