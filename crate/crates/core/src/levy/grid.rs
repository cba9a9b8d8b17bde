//! Cells of `S = [0, T] × R`: uniform time cells crossed with mark bins.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::model::LevyModel;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MarkBin {
    /// The bin `{0}` carrying `σB`.
    Brownian,
    /// A set of atoms, by index.
    Jumps(Vec<usize>),
}

/// Grid of cells `[t_k, t_{k+1}) × bin`, indexed `k * n_bins + b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellGrid {
    horizon: f64,
    n_steps: usize,
    sigma: f64,
    bins: Vec<MarkBin>,
    /// `σ²` for the Brownian bin, `ν(bin)` otherwise.
    rates: Vec<f64>,
    /// Bin of each atom of the model, if any.
    atom_bin: Vec<Option<usize>>,
}

impl CellGrid {
    /// Grid with the given jump groups; the Brownian bin is added first when `σ > 0`.
    pub fn new(model: &LevyModel, n_steps: usize, groups: &[Vec<usize>]) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::InvalidGrid(
                "at least one time cell is required".into(),
            ));
        }
        let mut bins = Vec::new();
        let mut rates = Vec::new();
        if model.sigma() > 0.0 {
            bins.push(MarkBin::Brownian);
            rates.push(model.sigma() * model.sigma());
        }
        let mut atom_bin = vec![None; model.atoms().len()];
        for g in groups {
            if g.is_empty() {
                return Err(Error::InvalidGrid("empty jump bin".into()));
            }
            let mut rate = 0.0;
            for &j in g {
                let a = model
                    .atoms()
                    .get(j)
                    .ok_or_else(|| Error::InvalidGrid(format!("no atom {j}")))?;
                if atom_bin[j].is_some() {
                    return Err(Error::InvalidGrid(format!("atom {j} is in two bins")));
                }
                atom_bin[j] = Some(bins.len());
                rate += a.intensity;
            }
            bins.push(MarkBin::Jumps(g.clone()));
            rates.push(rate);
        }
        if bins.is_empty() {
            return Err(Error::InvalidGrid(
                "grid has no cell of positive mass".into(),
            ));
        }
        Ok(CellGrid {
            horizon: model.horizon(),
            n_steps,
            sigma: model.sigma(),
            bins,
            rates,
            atom_bin,
        })
    }

    /// One bin per atom.
    pub fn per_atom(model: &LevyModel, n_steps: usize) -> Result<Self> {
        let groups: Vec<Vec<usize>> = (0..model.atoms().len()).map(|j| vec![j]).collect();
        Self::new(model, n_steps, &groups)
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.n_steps as f64
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Grid times `t_0 = 0 < ... < t_K = T`.
    pub fn times(&self) -> Vec<f64> {
        (0..=self.n_steps)
            .map(|k| self.horizon * k as f64 / self.n_steps as f64)
            .collect()
    }

    pub fn bins(&self) -> &[MarkBin] {
        &self.bins
    }

    pub fn n_bins(&self) -> usize {
        self.bins.len()
    }

    pub fn n_cells(&self) -> usize {
        self.n_steps * self.bins.len()
    }

    pub fn cell(&self, step: usize, bin: usize) -> usize {
        step * self.bins.len() + bin
    }

    /// `(time step, bin)` of a cell.
    pub fn locate(&self, cell: usize) -> (usize, usize) {
        (cell / self.bins.len(), cell % self.bins.len())
    }

    pub fn brownian_bin(&self) -> Option<usize> {
        self.bins.iter().position(|b| *b == MarkBin::Brownian)
    }

    pub fn is_brownian(&self, bin: usize) -> bool {
        self.bins[bin] == MarkBin::Brownian
    }

    pub fn jump_bins(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.bins.len()).filter(|&b| !self.is_brownian(b))
    }

    /// `σ²` on the Brownian bin, `ν(bin)` on a jump bin.
    pub fn rate(&self, bin: usize) -> f64 {
        self.rates[bin]
    }

    /// `μ(cell) = Δt ρ(bin)`.
    pub fn mass(&self, cell: usize) -> f64 {
        self.dt() * self.rates[cell % self.bins.len()]
    }

    pub fn masses(&self) -> Vec<f64> {
        (0..self.n_cells()).map(|c| self.mass(c)).collect()
    }

    pub fn atom_bin(&self, atom: usize) -> Result<usize> {
        self.atom_bin
            .get(atom)
            .copied()
            .flatten()
            .ok_or(Error::AtomNotCovered(atom))
    }

    /// Time step containing `t`, with `[t_k, t_{k+1})` cells and `T` in the last one.
    pub fn step_of(&self, t: f64) -> usize {
        ((t / self.dt()).floor() as usize).min(self.n_steps - 1)
    }

    /// SHA-256 of the canonical JSON form of the grid.
    pub fn spec_hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("grid serializes");
        hex::encode(Sha256::digest(&json))
    }
}

/// Complex value per cell: an element of `L²(S, μ)` constant on cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepField {
    n_bins: usize,
    values: Vec<Complex64>,
}

impl StepField {
    pub fn zeros(grid: &CellGrid) -> Self {
        StepField {
            n_bins: grid.n_bins(),
            values: vec![Complex64::new(0.0, 0.0); grid.n_cells()],
        }
    }

    pub fn from_values(grid: &CellGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_cells() {
            return Err(Error::DimensionMismatch {
                expected: grid.n_cells(),
                actual: values.len(),
            });
        }
        Ok(StepField {
            n_bins: grid.n_bins(),
            values,
        })
    }

    /// `f(k, b)` from a closure over `(time step, bin)`.
    pub fn from_fn(grid: &CellGrid, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let values = (0..grid.n_cells())
            .map(|c| f(c / grid.n_bins(), c % grid.n_bins()))
            .collect();
        StepField {
            n_bins: grid.n_bins(),
            values,
        }
    }

    /// `c` on every cell of `bin`, zero elsewhere.
    pub fn constant_on_bin(grid: &CellGrid, bin: usize, c: Complex64) -> Self {
        Self::from_fn(grid, |_, b| {
            if b == bin {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Indicator of one cell.
    pub fn indicator(grid: &CellGrid, cell: usize) -> Self {
        let mut f = Self::zeros(grid);
        f.values[cell] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn get(&self, step: usize, bin: usize) -> Complex64 {
        self.values[step * self.n_bins + bin]
    }

    /// Time steps on which `f` is non-zero on some bin.
    pub fn active_steps(&self) -> Vec<bool> {
        self.values
            .chunks(self.n_bins)
            .map(|row| row.iter().any(|z| z.norm_sqr() > 0.0))
            .collect()
    }

    pub(crate) fn check(&self, grid: &CellGrid) -> Result<()> {
        if self.n_bins != grid.n_bins() || self.values.len() != grid.n_cells() {
            return Err(Error::DimensionMismatch {
                expected: grid.n_cells(),
                actual: self.values.len(),
            });
        }
        Ok(())
    }

    /// `∫ conj(f) g dμ`.
    pub fn inner(&self, other: &Self, grid: &CellGrid) -> Result<Complex64> {
        self.check(grid)?;
        other.check(grid)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(c, (f, g))| f.conj() * g * grid.mass(c))
            .sum())
    }

    /// `‖f‖²_{L²(μ)}`.
    pub fn norm_sqr(&self, grid: &CellGrid) -> Result<f64> {
        Ok(self.inner(self, grid)?.re)
    }

    /// `f` set to zero on time steps `>= step`.
    pub fn truncated_at(&self, step: usize) -> Self {
        let mut out = self.clone();
        for z in out.values.iter_mut().skip(step * self.n_bins) {
            *z = Complex64::new(0.0, 0.0);
        }
        out
    }
}
