//! Exact path sampling with per-path counter-based random streams.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use super::grid::CellGrid;
use super::model::LevyModel;
use crate::error::{Error, Result};

/// Domain separator for the Brownian-bridge refinement stream.
const BRIDGE_DOMAIN: u64 = 0x6272_6964_6765_0001;

/// Stream for path `index`: identical regardless of how paths are scheduled.
pub fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn bridge_rng(seed: u64, index: u64, substeps: usize) -> ChaCha8Rng {
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ BRIDGE_DOMAIN ^ (substeps as u64).rotate_left(32));
    rng.set_stream(index);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpEvent {
    pub time: f64,
    pub atom: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplePath {
    pub seed: u64,
    pub index: u64,
    pub horizon: f64,
    /// `ΔB_k ~ N(0, Δt)`, empty when `σ = 0`.
    pub brownian_increments: Vec<f64>,
    /// Jump events sorted by time, all in `(0, T]`.
    pub jumps: Vec<JumpEvent>,
}

/// Draws `K` Gaussian increments, then per-atom Poisson counts with uniform jump times.
pub fn sample_path(model: &LevyModel, grid: &CellGrid, seed: u64, index: u64) -> SamplePath {
    let mut rng = path_rng(seed, index);
    let t = model.horizon();
    let sd = grid.dt().sqrt();
    let brownian_increments = if model.sigma() > 0.0 {
        (0..grid.n_steps())
            .map(|_| sd * rng.sample::<f64, _>(StandardNormal))
            .collect()
    } else {
        Vec::new()
    };
    let mut jumps = Vec::new();
    for (atom, a) in model.atoms().iter().enumerate() {
        let count = Poisson::new(a.intensity * t)
            .expect("positive rate")
            .sample(&mut rng) as usize;
        for _ in 0..count {
            let u: f64 = rng.random();
            jumps.push(JumpEvent {
                time: t * (1.0 - u),
                atom,
            });
        }
    }
    jumps.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.atom.cmp(&b.atom)));
    SamplePath {
        seed,
        index,
        horizon: t,
        brownian_increments,
        jumps,
    }
}

impl SamplePath {
    pub fn jump_count(&self, atom: usize) -> usize {
        self.jumps.iter().filter(|j| j.atom == atom).count()
    }

    /// `B(T)`.
    pub fn brownian_terminal(&self) -> f64 {
        self.brownian_increments.iter().sum()
    }

    /// `X(T) = b'T + σB(T) + Σ x_j N_j(T)`.
    pub fn terminal_value(&self, model: &LevyModel) -> f64 {
        model.path_drift() * self.horizon
            + model.sigma() * self.brownian_terminal()
            + self
                .jumps
                .iter()
                .map(|j| model.atoms()[j.atom].size)
                .sum::<f64>()
    }

    /// Brownian increments on the grid refined by `substeps`, drawn by sequential
    /// Brownian-bridge sampling inside each cell so the cell increments are preserved.
    pub fn refined_brownian(&self, grid: &CellGrid, substeps: usize) -> Vec<f64> {
        if substeps <= 1 {
            return self.brownian_increments.clone();
        }
        let mut rng = bridge_rng(self.seed, self.index, substeps);
        let h = grid.dt() / substeps as f64;
        let mut out = Vec::with_capacity(self.brownian_increments.len() * substeps);
        for &total in &self.brownian_increments {
            let mut rest = total;
            for i in 0..substeps {
                let tau = h * (substeps - i) as f64;
                if i + 1 == substeps {
                    out.push(rest);
                    break;
                }
                let z: f64 = rng.sample(StandardNormal);
                let step = rest * h / tau + (h * (tau - h) / tau).sqrt() * z;
                out.push(step);
                rest -= step;
            }
        }
        out
    }

    pub fn record(&self, grid: &CellGrid) -> PathRecord {
        PathRecord {
            grid_hash: grid.spec_hash(),
            seed: self.seed,
            index: self.index,
            brownian_increments: self.brownian_increments.clone(),
            jumps: self.jumps.clone(),
        }
    }
}

/// One line of a path-ensemble export.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub grid_hash: String,
    pub seed: u64,
    pub index: u64,
    pub brownian_increments: Vec<f64>,
    pub jumps: Vec<JumpEvent>,
}

/// Writes one JSON object per path.
pub fn write_paths_jsonl<W: Write>(
    paths: &[SamplePath],
    grid: &CellGrid,
    mut out: W,
) -> Result<()> {
    for p in paths {
        let line = serde_json::to_string(&p.record(grid))
            .map_err(|e| Error::Serialization(e.to_string()))?;
        writeln!(out, "{line}").map_err(|e| Error::Serialization(e.to_string()))?;
    }
    Ok(())
}
