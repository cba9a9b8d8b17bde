//! Malliavin calculus on chaos kernels over a cell grid, bridged to the Fock
//! operators through an isometric embedding.

pub mod calculus;
pub mod chaos;
pub mod evaluate;
pub mod split;

pub use calculus::{
    derivative_at, directional, divergence, divergence_functional, gradient, ito_skorohod,
    n_factorization_residual, number_apply, number_ou, resolvent_sqrt, Gradient, IsometryReport,
};
pub use chaos::{embed, ChaosCoefficients, MarkedChaos, CHAOS_FORMAT, CHAOS_FORMAT_VERSION};
pub use evaluate::{chaos_evaluate, project_chaos, ChaosEvaluator, ProjectedChaos};
pub use split::{bn_split, BnSplit};
