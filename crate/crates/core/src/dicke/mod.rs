//! Permutation-symmetric sector: the spin-N/2 multiplet of the pairs tensored with the
//! collective Clifford mode `eta`. Exact for `N` up to tens of thousands.

pub mod ops;
pub mod quadrature;
pub mod states;
pub mod tridiag;

pub use ops::{build_g_alpha_dicke, build_hss_dicke, collective_ops, DickeOperators};
pub use quadrature::{wallis_integral, QuadratureGrid};
pub use states::{
    bogoliubov_state, ceiling_g_eigenvector, ceiling_state_integral, ceiling_state_ladder,
    coherent_superposition, ground_state, overlap, product_state_amplitudes, CeilingIntegral,
    DickeState, StateLabel,
};
pub use tridiag::SymTridiag;
