//! Check suites. Each group runs under its own RNG stream so that adding or
//! reordering groups does not change the others.

pub mod chaos;
pub mod fock;
pub mod malliavin;
pub mod sim;

use std::time::Instant;

use chaoskit::fock::HVector;
use chaoskit::levy::{CellGrid, StepField};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::Result;
use crate::record::CheckRecord;

/// Stream for the check group `label`.
pub fn group_rng(seed: u64, label: &str) -> ChaCha8Rng {
    let h = Sha256::digest(label.as_bytes());
    let mut word = [0u8; 8];
    word.copy_from_slice(&h[..8]);
    ChaCha8Rng::seed_from_u64(seed ^ u64::from_le_bytes(word))
}

/// Collects the records of one suite.
pub struct Runner<'a> {
    pub cfg: &'a RunConfig,
    suite: &'static str,
    records: Vec<CheckRecord>,
}

impl<'a> Runner<'a> {
    pub fn new(cfg: &'a RunConfig, suite: &'static str) -> Self {
        Runner {
            cfg,
            suite,
            records: Vec::new(),
        }
    }

    /// Runs one group; record ids are prefixed with `suite.name.`. A group that
    /// errors yields a single failing record carrying the error message.
    pub fn group(
        &mut self,
        name: &str,
        f: impl FnOnce(&RunConfig, &mut ChaCha8Rng) -> Result<Vec<CheckRecord>>,
    ) {
        let label = format!("{}.{}", self.suite, name);
        let mut rng = group_rng(self.cfg.seed, &label);
        let start = Instant::now();
        let out = f(self.cfg, &mut rng);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let records = match out {
            Ok(rs) => rs
                .into_iter()
                .map(|mut r| {
                    r.check_id = if r.check_id.is_empty() {
                        label.clone()
                    } else {
                        format!("{label}.{}", r.check_id)
                    };
                    r
                })
                .collect(),
            Err(e) => {
                log::error!("{label}: {e}");
                vec![CheckRecord::error(&label, e)]
            }
        };
        for mut r in records {
            r.suite = self.suite.to_string();
            r.runtime_ms = ms;
            log::info!(
                "{} {} ({:.1} ms)",
                r.check_id,
                if r.passed() { "pass" } else { "FAIL" },
                ms
            );
            self.records.push(r);
        }
    }

    pub fn finish(self) -> Vec<CheckRecord> {
        self.records
    }
}

/// Vector of norm uniform in `[0, radius]`, direction Gaussian.
pub(crate) fn vector_in_ball(d: usize, radius: f64, rng: &mut ChaCha8Rng) -> HVector<f64> {
    let r = radius * rng.random::<f64>();
    HVector::random(d, r, rng)
}

/// Largest value; a NaN anywhere makes the result NaN.
pub(crate) fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .fold(0.0, |a, b| if b.is_nan() || b > a { b } else { a })
}

/// Ratio of central-difference residuals at steps `2h` and `h`; about 4 for an `O(h²)` scheme.
pub(crate) fn fd_ratio(residual: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    Ok(residual(2e-2)? / residual(1e-2)?)
}

/// Path count for per-path checks, where each path is a check of its own.
pub(crate) fn pathwise_paths(cfg: &RunConfig) -> usize {
    cfg.n_paths.min(2000)
}

/// Gaussian step field rescaled to `‖f‖ = norm`.
pub(crate) fn random_field(grid: &CellGrid, norm: f64, rng: &mut ChaCha8Rng) -> Result<StepField> {
    let f = StepField::from_fn(grid, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let s = norm / f.norm_sqr(grid)?.sqrt();
    Ok(StepField::from_fn(grid, |k, b| f.get(k, b) * s))
}

/// Step field of constant modulus with random phases, rescaled to `‖f‖ = norm`.
pub(crate) fn phase_field(grid: &CellGrid, norm: f64, rng: &mut ChaCha8Rng) -> Result<StepField> {
    let f = StepField::from_fn(grid, |_, _| {
        Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
    });
    let s = norm / f.norm_sqr(grid)?.sqrt();
    Ok(StepField::from_fn(grid, |k, b| f.get(k, b) * s))
}
