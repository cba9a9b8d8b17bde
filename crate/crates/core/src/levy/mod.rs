//! Finite-activity Lévy processes: exact sampling, the martingale-valued
//! measure on grid cells, multiple and iterated integrals, exponentials.

pub mod exponential;
pub mod grid;
pub mod integrals;
pub mod mc;
pub mod model;
pub mod path;

pub use exponential::{
    brownian_exponential_closed_form, doleans_exp, exp_martingale, ito_representation,
    poisson_exponential_closed_form, poisson_v, poisson_v_inverse, time_norm_sqr, x_integral,
    ItoRepresentation,
};
pub use grid::{CellGrid, MarkBin, StepField};
pub use integrals::{
    cell_increments, iterated_integral, iterated_kernel, iterated_powers, iterated_product,
    product_integral, wiener_levy, wiener_levy_path, CellIncrements, IntegrationMode,
    OffDiagonalKernel,
};
pub use mc::{mc_estimate, mc_estimate_many, sample_functionals, MCStat};
pub use model::{presets, Atom, LevyModel, Preset};
pub use path::{path_rng, sample_path, write_paths_jsonl, JumpEvent, PathRecord, SamplePath};
