//! Run configuration, read from TOML with every field defaulted.

use std::path::{Path, PathBuf};

use chaoskit::fock::level_dim;
use chaoskit::levy::{Atom, CellGrid, LevyModel};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Which checks to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Fock,
    Sim,
    Chaos,
    Malliavin,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Fock => "fock",
            Suite::Sim => "sim",
            Suite::Chaos => "chaos",
            Suite::Malliavin => "malliavin",
            Suite::All => "all",
        }
    }

    /// The concrete suites this one expands to.
    pub fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Fock, Suite::Sim, Suite::Chaos, Suite::Malliavin],
            s => vec![s],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Number of time cells `K`.
    pub k: usize,
    /// Jump-atom groups of the custom model; empty means one bin per atom.
    pub bins: Vec<Vec<usize>>,
    pub horizon: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            k: 64,
            bins: Vec::new(),
            horizon: 1.0,
        }
    }
}

/// Lévy triplet of an extra model checked next to the presets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    #[serde(default)]
    pub b: f64,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default)]
    pub atoms: Vec<Atom>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    /// Random trials per algebraic identity.
    pub trials: usize,
    pub gram_truncation: usize,
    pub spectral_max_level: usize,
    pub spectral_max_d: usize,
    /// Time cells of the grids used for kernel-level Malliavin objects.
    pub kernel_steps: usize,
    pub euler_substeps: Vec<usize>,
    /// Paths per refinement in the Euler convergence study.
    pub convergence_paths: usize,
    /// Fourier arguments of the characteristic-function checks.
    pub fourier_points: Vec<f64>,
    /// Truncations of the exponential chaos-tail check.
    pub tail_truncations: Vec<usize>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            trials: 200,
            gram_truncation: 30,
            spectral_max_level: 6,
            spectral_max_d: 4,
            kernel_steps: 4,
            euler_substeps: vec![8, 16, 32, 64],
            convergence_paths: 4000,
            fourier_points: vec![0.5, 1.0, 2.0],
            tail_truncations: vec![2, 3, 4],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Exact algebraic identities, absolute on unit-scale inputs.
    pub algebraic: f64,
    /// Identities compared relative to the size of their terms.
    pub relative: f64,
    pub spectral: f64,
    /// Per-path agreement of two exact integration routes.
    pub pathwise: f64,
    /// Per-path agreement with a closed form.
    pub closed_form: f64,
    pub quadrature: f64,
    /// Monte-Carlo acceptance half-width in standard errors.
    pub mc_sigmas: f64,
    /// Admissible ratio of central-difference residuals at `2t` and `t`.
    pub fd_ratio: [f64; 2],
    /// Admissible empirical order in `Δt` of the Euler scheme.
    pub euler_order: [f64; 2],
    pub gram_floor: f64,
    /// Relative slack of the tail bound for floating-point rounding.
    pub tail_rounding: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            algebraic: 1e-12,
            relative: 1e-11,
            spectral: 1e-10,
            pathwise: 1e-10,
            closed_form: 1e-12,
            quadrature: 1e-8,
            mc_sigmas: 4.0,
            fd_ratio: [3.5, 4.5],
            euler_order: [0.8, 1.2],
            gram_floor: -1e-12,
            tail_rounding: 1e-13,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Default suite when none is given on the command line.
    pub suite: Option<Suite>,
    /// Dimension of the one-particle space in the algebraic checks.
    pub d: usize,
    /// Fock truncation `M`.
    pub m: usize,
    /// Highest chaos order in the chaos checks.
    pub n: usize,
    pub n_paths: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub grid: GridConfig,
    pub model: Option<ModelConfig>,
    pub checks: CheckConfig,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            suite: None,
            d: 2,
            m: 5,
            n: 3,
            n_paths: 100_000,
            seed: 42,
            out_dir: PathBuf::from("reports"),
            grid: GridConfig::default(),
            model: None,
            checks: CheckConfig::default(),
            tolerances: Tolerances::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    /// The custom model, if configured.
    pub fn custom_model(&self) -> Result<Option<LevyModel>> {
        self.model
            .as_ref()
            .map(|m| {
                LevyModel::new(m.b, m.sigma, m.atoms.clone(), self.grid.horizon)
                    .map_err(CliError::from)
            })
            .transpose()
    }

    /// Grid of the custom model with the configured bins.
    pub fn custom_grid(&self, model: &LevyModel) -> Result<CellGrid> {
        let grid = if self.grid.bins.is_empty() {
            CellGrid::per_atom(model, self.grid.k)?
        } else {
            CellGrid::new(model, self.grid.k, &self.grid.bins)?
        };
        for j in 0..model.atoms().len() {
            grid.atom_bin(j)?;
        }
        Ok(grid)
    }

    /// Rejects configurations that would breach a guard rail or cannot run.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.d == 0 {
            return bad("d must be at least 1".into());
        }
        if self.m < 2 {
            return bad("m must be at least 2".into());
        }
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        level_dim(self.d, self.m + 1)?;
        level_dim(
            self.checks.spectral_max_d,
            self.checks.spectral_max_level + 1,
        )?;
        level_dim(self.checks.spectral_max_d, self.checks.gram_truncation)?;
        if self.n_paths < 2 || self.checks.convergence_paths < 2 {
            return bad("Monte-Carlo checks need at least two paths".into());
        }
        if self.grid.k == 0 || self.checks.kernel_steps == 0 {
            return bad("grids need at least one time cell".into());
        }
        if !(self.grid.horizon > 0.0 && self.grid.horizon.is_finite()) {
            return bad(format!(
                "horizon must be positive, got {}",
                self.grid.horizon
            ));
        }
        if self.checks.euler_substeps.len() < 2 || self.checks.euler_substeps.contains(&0) {
            return bad("the Euler study needs at least two positive substep counts".into());
        }
        if self.checks.tail_truncations.iter().any(|&t| t > self.m + 4) {
            return bad("tail truncations must not exceed m + 4".into());
        }
        let t = &self.tolerances;
        let positive = [
            t.algebraic,
            t.relative,
            t.spectral,
            t.pathwise,
            t.closed_form,
            t.quadrature,
            t.mc_sigmas,
        ];
        if positive.iter().any(|v| v.is_nan() || *v <= 0.0)
            || t.fd_ratio[0] >= t.fd_ratio[1]
            || t.euler_order[0] >= t.euler_order[1]
        {
            return bad("tolerances must be positive and ranges increasing".into());
        }
        if let Some(model) = self.custom_model()? {
            self.custom_grid(&model)?;
        }
        Ok(())
    }
}
