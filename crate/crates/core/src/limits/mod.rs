//! Large-`n` probes: fluctuation operators, ODLRO, derivative identities, the limiting
//! oscillator model and the three-scale behaviour of each state.

pub mod convergence;
pub mod derivatives;
pub mod fluctuation;
pub mod odlro;
pub mod scales;
pub mod spinchain;
pub mod witten;

pub use convergence::{extrapolate, linear_slope, loglog_slope, ConvergenceSeries, Fit, Provenance, Target};
pub use derivatives::{heisenberg_derivative, super_derivative, IdentityCheck};
pub use fluctuation::{
    bs_gaussian_probe, fluctuation_expectation, gaussian_target, weyl_relation_probe, Axis, FluctuationParams,
    Scaling, WeylProbe,
};
pub use odlro::odlro;
pub use witten::{witten_spectrum, WittenLimitModel};
