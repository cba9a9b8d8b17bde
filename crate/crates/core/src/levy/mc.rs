//! Monte-Carlo means with standard errors over reproducible path ensembles.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::CellGrid;
use super::model::LevyModel;
use super::path::{sample_path, SamplePath};
use crate::error::{Error, Result};

/// Sample mean and standard error of a complex functional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "McStatRecord", into = "McStatRecord")]
pub struct MCStat {
    pub id: String,
    pub mean: Complex64,
    /// Componentwise standard errors `(re, im)`.
    pub se_parts: (f64, f64),
    pub n_paths: usize,
    pub seed: u64,
}

#[derive(Serialize, Deserialize)]
struct McStatRecord {
    id: String,
    mean_re: f64,
    mean_im: f64,
    se: f64,
    #[serde(default)]
    se_re: f64,
    #[serde(default)]
    se_im: f64,
    n_paths: usize,
    seed: u64,
}

impl From<MCStat> for McStatRecord {
    fn from(s: MCStat) -> Self {
        McStatRecord {
            se: s.se(),
            id: s.id,
            mean_re: s.mean.re,
            mean_im: s.mean.im,
            se_re: s.se_parts.0,
            se_im: s.se_parts.1,
            n_paths: s.n_paths,
            seed: s.seed,
        }
    }
}

impl From<McStatRecord> for MCStat {
    fn from(r: McStatRecord) -> Self {
        MCStat {
            id: r.id,
            mean: Complex64::new(r.mean_re, r.mean_im),
            se_parts: (r.se_re, r.se_im),
            n_paths: r.n_paths,
            seed: r.seed,
        }
    }
}

impl MCStat {
    /// From per-path samples, reduced in index order.
    pub fn from_samples(id: impl Into<String>, samples: &[Complex64], seed: u64) -> Result<Self> {
        let n = samples.len();
        if n < 2 {
            return Err(Error::TooFewPaths(n));
        }
        let nf = n as f64;
        let mean = samples.iter().sum::<Complex64>() / nf;
        let (vr, vi) = samples.iter().fold((0.0, 0.0), |(a, b), z| {
            let d = z - mean;
            (a + d.re * d.re, b + d.im * d.im)
        });
        let se_parts = ((vr / (nf - 1.0) / nf).sqrt(), (vi / (nf - 1.0) / nf).sqrt());
        Ok(MCStat {
            id: id.into(),
            mean,
            se_parts,
            n_paths: n,
            seed,
        })
    }

    /// `sqrt(se_re² + se_im²)`.
    pub fn se(&self) -> f64 {
        self.se_parts.0.hypot(self.se_parts.1)
    }

    /// `|mean - expected| ≤ k · se`.
    pub fn within(&self, expected: Complex64, k: f64) -> bool {
        (self.mean - expected).norm() <= k * self.se()
    }
}

/// Evaluates `functional` on paths `0..n_paths` in parallel; results come back in index order.
pub fn sample_functionals<F, V>(
    model: &LevyModel,
    grid: &CellGrid,
    n_paths: usize,
    seed: u64,
    functional: F,
) -> Vec<V>
where
    F: Fn(&SamplePath) -> V + Sync,
    V: Send,
{
    (0..n_paths as u64)
        .into_par_iter()
        .map(|i| functional(&sample_path(model, grid, seed, i)))
        .collect()
}

/// `E[functional]` with standard error.
pub fn mc_estimate<F>(
    id: &str,
    model: &LevyModel,
    grid: &CellGrid,
    n_paths: usize,
    seed: u64,
    functional: F,
) -> Result<MCStat>
where
    F: Fn(&SamplePath) -> Result<Complex64> + Sync,
{
    if n_paths < 2 {
        return Err(Error::TooFewPaths(n_paths));
    }
    let samples = sample_functionals(model, grid, n_paths, seed, functional)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    MCStat::from_samples(id, &samples, seed)
}

/// Several functionals on one shared ensemble; entry `j` of the returned vector is functional `j`.
pub fn mc_estimate_many<F>(
    ids: &[&str],
    model: &LevyModel,
    grid: &CellGrid,
    n_paths: usize,
    seed: u64,
    functional: F,
) -> Result<Vec<MCStat>>
where
    F: Fn(&SamplePath) -> Result<Vec<Complex64>> + Sync,
{
    if n_paths < 2 {
        return Err(Error::TooFewPaths(n_paths));
    }
    let rows = sample_functionals(model, grid, n_paths, seed, functional)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    ids.iter()
        .enumerate()
        .map(|(j, id)| {
            let col: Vec<Complex64> = rows.iter().map(|r| r[j]).collect();
            MCStat::from_samples(*id, &col, seed)
        })
        .collect()
}
