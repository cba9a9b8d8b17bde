//! The duality transform on chaos coefficients: pathwise `Σ I_n(f_n)` and the
//! Monte-Carlo projection back onto kernels.

use num_complex::Complex64;

use super::chaos::{level_weights, ChaosCoefficients};
use crate::error::{Error, Result};
use crate::fock::{factorial, LevelBasis};
use crate::levy::{
    iterated_powers, mc_estimate_many, CellGrid, IntegrationMode, LevyModel, MCStat, SamplePath,
    StepField,
};

/// Precomputed multisets and weights `n!/α!` for repeated pathwise evaluation.
#[derive(Clone, Debug)]
pub struct ChaosEvaluator {
    coeffs: ChaosCoefficients<f64>,
    bases: Vec<LevelBasis>,
    weights: Vec<Vec<f64>>,
    indicators: Vec<StepField>,
    mode: IntegrationMode,
}

impl ChaosEvaluator {
    pub fn new(
        coeffs: &ChaosCoefficients<f64>,
        grid: &CellGrid,
        mode: IntegrationMode,
    ) -> Result<Self> {
        if coeffs.d() != grid.n_cells() {
            return Err(Error::DimensionMismatch {
                expected: grid.n_cells(),
                actual: coeffs.d(),
            });
        }
        let masses = grid.masses();
        if masses
            .iter()
            .zip(coeffs.masses())
            .any(|(a, b)| (a - b).abs() > 1e-12 * a.abs().max(1.0))
        {
            return Err(Error::InvalidKernel(
                "kernel masses do not match the grid".into(),
            ));
        }
        let mut bases = Vec::new();
        let mut weights = Vec::new();
        for n in 0..=coeffs.truncation() {
            let basis = LevelBasis::new(coeffs.d(), n)?;
            let w = basis
                .iter()
                .map(|alpha| {
                    factorial(n)
                        / alpha
                            .iter()
                            .map(|&a| factorial(a as usize))
                            .product::<f64>()
                })
                .collect();
            bases.push(basis);
            weights.push(w);
        }
        let indicators = (0..grid.n_cells())
            .map(|c| StepField::indicator(grid, c))
            .collect();
        Ok(ChaosEvaluator {
            coeffs: coeffs.clone(),
            bases,
            weights,
            indicators,
            mode,
        })
    }

    /// `P_c[a] = a! J_a(1_c^{⊗a})` for every cell and `a ≤ M`.
    fn cell_integrals(&self, path: &SamplePath, grid: &CellGrid) -> Result<Vec<Vec<Complex64>>> {
        let m = self.coeffs.truncation();
        self.indicators
            .iter()
            .map(|h| {
                let j = iterated_powers(h, m, path, grid, self.mode)?;
                Ok(j.iter()
                    .enumerate()
                    .map(|(a, z)| z * factorial(a))
                    .collect())
            })
            .collect()
    }

    /// `I_n(f_n)` for each level: `Σ_α f_n(α) (n!/α!) Π_c P_c[α_c]`.
    pub fn levels(&self, path: &SamplePath, grid: &CellGrid) -> Result<Vec<Complex64>> {
        let p = self.cell_integrals(path, grid)?;
        Ok((0..self.bases.len())
            .map(|n| {
                self.bases[n]
                    .iter()
                    .zip(self.coeffs.level(n))
                    .zip(&self.weights[n])
                    .filter(|((_, f), _)| f.norm_sqr() > 0.0)
                    .map(|((alpha, f), w)| {
                        let prod = alpha
                            .iter()
                            .enumerate()
                            .filter(|(_, &a)| a > 0)
                            .fold(Complex64::new(1.0, 0.0), |acc, (c, &a)| {
                                acc * p[c][a as usize]
                            });
                        f * w * prod
                    })
                    .sum()
            })
            .collect())
    }

    /// `Σ_n I_n(f_n)`.
    pub fn evaluate(&self, path: &SamplePath, grid: &CellGrid) -> Result<Complex64> {
        Ok(self.levels(path, grid)?.iter().sum())
    }
}

/// Pathwise `F = Σ I_n(f_n)`, with `I_n = n! J_n` on each cell.
pub fn chaos_evaluate(
    coeffs: &ChaosCoefficients<f64>,
    path: &SamplePath,
    grid: &CellGrid,
    mode: IntegrationMode,
) -> Result<Complex64> {
    ChaosEvaluator::new(coeffs, grid, mode)?.evaluate(path, grid)
}

/// Kernels estimated from samples of a functional, with standard errors. Approximate.
#[derive(Clone, Debug)]
pub struct ProjectedChaos {
    pub coefficients: ChaosCoefficients<f64>,
    pub standard_errors: Vec<Vec<f64>>,
}

/// `f_n(α) ≈ E[conj(I_n(1_α)) F] α! / (n! n! μ^α)`, `1_α` the indicator of the multiset `α`.
pub fn project_chaos<F>(
    functional: F,
    model: &LevyModel,
    grid: &CellGrid,
    truncation: usize,
    n_paths: usize,
    seed: u64,
    mode: IntegrationMode,
) -> Result<ProjectedChaos>
where
    F: Fn(&SamplePath) -> Result<Complex64> + Sync,
{
    let masses = grid.masses();
    let d = masses.len();
    let mut probes = Vec::new();
    let mut scales = Vec::new();
    for n in 0..=truncation {
        let (basis, w) = level_weights(&masses, n)?;
        for r in 0..basis.len() {
            let mut c = ChaosCoefficients::zeros(masses.clone(), truncation)?;
            c.level_mut(n)[r] = Complex64::new(1.0, 0.0);
            probes.push(ChaosEvaluator::new(&c, grid, mode)?);
            scales.push(1.0 / (factorial(n) * factorial(n) * w[r]));
        }
    }
    let ids: Vec<String> = (0..probes.len()).map(|i| format!("probe{i}")).collect();
    let id_refs: Vec<&str> = ids.iter().map(|s| s.as_str()).collect();
    let stats: Vec<MCStat> = mc_estimate_many(&id_refs, model, grid, n_paths, seed, |path| {
        let f = functional(path)?;
        probes
            .iter()
            .map(|p| Ok(p.evaluate(path, grid)?.conj() * f))
            .collect()
    })?;
    let mut out = ChaosCoefficients::zeros(masses, truncation)?;
    let mut ses = Vec::new();
    let mut k = 0;
    for n in 0..=truncation {
        let dim = crate::fock::level_dim(d, n)?;
        let mut se = Vec::with_capacity(dim);
        for r in 0..dim {
            out.level_mut(n)[r] = stats[k].mean * scales[k];
            se.push(stats[k].se() * scales[k]);
            k += 1;
        }
        ses.push(se);
    }
    Ok(ProjectedChaos {
        coefficients: out,
        standard_errors: ses,
    })
}
