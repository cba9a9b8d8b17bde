//! The martingale-valued measure on cells, multiple integrals and the
//! time-ordered iterated integrals `J_n`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{CellGrid, StepField};
use super::path::SamplePath;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `M(cell)` for every cell of a grid, on one path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellIncrements {
    pub values: Vec<Complex64>,
}

/// Brownian cells get `σΔB_k`; jump cells get `#jumps - Δt ν(bin)`.
pub fn cell_increments(path: &SamplePath, grid: &CellGrid) -> Result<CellIncrements> {
    let mut values = vec![ZERO; grid.n_cells()];
    let dt = grid.dt();
    for k in 0..grid.n_steps() {
        for b in 0..grid.n_bins() {
            values[grid.cell(k, b)] = if grid.is_brownian(b) {
                let db = path.brownian_increments.get(k).copied().ok_or_else(|| {
                    Error::InvalidGrid(
                        "grid has a Brownian bin but the path has no Brownian increments".into(),
                    )
                })?;
                Complex64::new(grid.sigma() * db, 0.0)
            } else {
                Complex64::new(-dt * grid.rate(b), 0.0)
            };
        }
    }
    for j in &path.jumps {
        let b = grid.atom_bin(j.atom)?;
        values[grid.cell(grid.step_of(j.time), b)] += ONE;
    }
    Ok(CellIncrements { values })
}

/// `Y_f(T) = Σ_cells f(cell) M(cell)`.
pub fn wiener_levy(f: &StepField, incs: &CellIncrements) -> Complex64 {
    f.values()
        .iter()
        .zip(&incs.values)
        .map(|(a, m)| a * m)
        .sum()
}

/// `Y_f(t_k)` for `k = 0..=K`.
pub fn wiener_levy_path(f: &StepField, incs: &CellIncrements, grid: &CellGrid) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(grid.n_steps() + 1);
    let mut acc = ZERO;
    out.push(acc);
    let nb = grid.n_bins();
    for k in 0..grid.n_steps() {
        for b in 0..nb {
            acc += f.values()[k * nb + b] * incs.values[k * nb + b];
        }
        out.push(acc);
    }
    out
}

/// Step kernel on ordered cell tuples whose coefficients vanish on every
/// tuple with a repeated cell.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct OffDiagonalKernel {
    degree: usize,
    entries: BTreeMap<Vec<usize>, Complex64>,
}

impl OffDiagonalKernel {
    pub fn new(degree: usize) -> Self {
        OffDiagonalKernel {
            degree,
            entries: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Complex64)> {
        self.entries.iter()
    }

    /// Adds `value` to the coefficient of the ordered tuple `cells`.
    pub fn add(&mut self, cells: Vec<usize>, value: Complex64) -> Result<()> {
        if cells.len() != self.degree {
            return Err(Error::DimensionMismatch {
                expected: self.degree,
                actual: cells.len(),
            });
        }
        if value != ZERO && (1..cells.len()).any(|i| cells[..i].contains(&cells[i])) {
            return Err(Error::DiagonalEntry(cells));
        }
        *self.entries.entry(cells).or_insert(ZERO) += value;
        Ok(())
    }

    /// Adds `value` on every ordering of `cells`: the symmetric kernel equal to
    /// `value` on the product set of these cells.
    pub fn add_symmetric(&mut self, cells: &[usize], value: Complex64) -> Result<()> {
        let mut perm = cells.to_vec();
        perm.sort_unstable();
        loop {
            self.add(perm.clone(), value)?;
            if !next_permutation(&mut perm) {
                return Ok(());
            }
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len())
        .rev()
        .find(|&j| v[j] > v[i - 1])
        .expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `I_n(f_n) = Σ a_{j_1..j_n} M(A_{j_1}) ... M(A_{j_n})`.
pub fn product_integral(kernel: &OffDiagonalKernel, incs: &CellIncrements) -> Complex64 {
    kernel
        .entries
        .iter()
        .map(|(cells, a)| cells.iter().fold(*a, |acc, &c| acc * incs.values[c]))
        .sum()
}

/// How `J_n` is evaluated along a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum IntegrationMode {
    /// Exact for `σ = 0`: piecewise polynomials between jumps.
    ExactJump,
    /// Exact for models without jumps and grid-aligned integrands.
    ExactBrownian,
    /// Left-point scheme on `substeps` sub-intervals per cell.
    Euler { substeps: usize },
}

impl IntegrationMode {
    /// The exact mode when one applies, otherwise Euler with `substeps`.
    pub fn for_grid(grid: &CellGrid, substeps: usize) -> Self {
        if grid.brownian_bin().is_none() {
            IntegrationMode::ExactJump
        } else if grid.jump_bins().next().is_none() {
            IntegrationMode::ExactBrownian
        } else {
            IntegrationMode::Euler { substeps }
        }
    }
}

/// `Z_0..Z_n` at `T` for `dZ_k = h_k(s) Z_{k-1}(s-) M(ds)`, `Z_0 = 1`.
///
/// `Z_n(T) = J(h_1 ⊗ ... ⊗ h_n)`, with `h_i` evaluated at the `i`-th smallest time.
fn iterate(
    hs: &[&StepField],
    path: &SamplePath,
    grid: &CellGrid,
    mode: IntegrationMode,
) -> Result<Vec<Complex64>> {
    for h in hs {
        h.check(grid)?;
    }
    match mode {
        IntegrationMode::ExactJump => iterate_exact_jump(hs, path, grid),
        IntegrationMode::ExactBrownian => iterate_exact_brownian(hs, path, grid),
        IntegrationMode::Euler { substeps } => iterate_euler(hs, path, grid, substeps.max(1)),
    }
}

fn active(hs: &[&StepField], grid: &CellGrid) -> Vec<bool> {
    let mut act = vec![false; grid.n_steps()];
    for h in hs {
        for (a, b) in act.iter_mut().zip(h.active_steps()) {
            *a |= b;
        }
    }
    act
}

/// Advances the compensator flow `dZ_k/du = -c_k Z_{k-1}` by `u`.
fn drift_flow(z: &mut [Complex64], c: &[Complex64], u: f64) {
    if u == 0.0 {
        return;
    }
    let n = z.len() - 1;
    let old = z.to_vec();
    for k in 1..=n {
        let mut acc = old[k];
        let mut coef = ONE;
        let mut fact = 1.0;
        for i in (0..k).rev() {
            let m = k - i;
            coef *= -c[i + 1] * u;
            fact *= m as f64;
            acc += old[i] * coef / fact;
        }
        z[k] = acc;
    }
}

fn iterate_exact_jump(
    hs: &[&StepField],
    path: &SamplePath,
    grid: &CellGrid,
) -> Result<Vec<Complex64>> {
    if grid.brownian_bin().is_some() || !path.brownian_increments.is_empty() {
        return Err(Error::ModeMismatch(
            "exact jump mode requires sigma = 0".into(),
        ));
    }
    let n = hs.len();
    let mut z = vec![ZERO; n + 1];
    z[0] = ONE;
    let act = active(hs, grid);
    let times = grid.times();
    let mut next_jump = 0;
    let mut c = vec![ZERO; n + 1];
    for k in 0..grid.n_steps() {
        let start = next_jump;
        while next_jump < path.jumps.len() && grid.step_of(path.jumps[next_jump].time) == k {
            next_jump += 1;
        }
        if !act[k] {
            continue;
        }
        for (j, h) in hs.iter().enumerate() {
            c[j + 1] = grid.jump_bins().map(|b| h.get(k, b) * grid.rate(b)).sum();
        }
        let mut s = times[k];
        for ev in &path.jumps[start..next_jump] {
            drift_flow(&mut z, &c, ev.time - s);
            s = ev.time;
            let b = grid.atom_bin(ev.atom)?;
            for j in (1..=n).rev() {
                let dz = hs[j - 1].get(k, b) * z[j - 1];
                z[j] += dz;
            }
        }
        drift_flow(&mut z, &c, times[k + 1] - s);
    }
    Ok(z)
}

/// `c_m = Δt^{m/2} He_m(ΔB/√Δt) / m!`, the `m`-fold iterated integral of `1` over one cell.
fn hermite_block(db: f64, dt: f64, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    let mut fact = vec![1.0; n + 1];
    for i in 1..=n {
        fact[i] = fact[i - 1] * i as f64;
    }
    for (m, o) in out.iter_mut().enumerate() {
        *o = (0..=m / 2)
            .map(|p| {
                db.powi((m - 2 * p) as i32) * (-dt / 2.0).powi(p as i32)
                    / (fact[m - 2 * p] * fact[p])
            })
            .sum();
    }
    out
}

fn iterate_exact_brownian(
    hs: &[&StepField],
    path: &SamplePath,
    grid: &CellGrid,
) -> Result<Vec<Complex64>> {
    let Some(b0) = grid.brownian_bin() else {
        return Err(Error::ModeMismatch(
            "exact Brownian mode requires sigma > 0".into(),
        ));
    };
    if grid.jump_bins().next().is_some() || !path.jumps.is_empty() {
        return Err(Error::ModeMismatch(
            "exact Brownian mode requires a model without jumps".into(),
        ));
    }
    let n = hs.len();
    let mut z = vec![ZERO; n + 1];
    z[0] = ONE;
    let act = active(hs, grid);
    let mut a = vec![ZERO; n + 1];
    for k in 0..grid.n_steps() {
        if !act[k] {
            continue;
        }
        for (j, h) in hs.iter().enumerate() {
            a[j + 1] = h.get(k, b0) * grid.sigma();
        }
        let cm = hermite_block(path.brownian_increments[k], grid.dt(), n);
        let old = z.clone();
        for kk in 1..=n {
            let mut acc = old[kk];
            let mut prod = ONE;
            for i in (0..kk).rev() {
                prod *= a[i + 1];
                acc += old[i] * prod * cm[kk - i];
            }
            z[kk] = acc;
        }
    }
    Ok(z)
}

fn iterate_euler(
    hs: &[&StepField],
    path: &SamplePath,
    grid: &CellGrid,
    substeps: usize,
) -> Result<Vec<Complex64>> {
    let n = hs.len();
    let mut z = vec![ZERO; n + 1];
    z[0] = ONE;
    let fine = grid.n_steps() * substeps;
    let h = grid.dt() / substeps as f64;
    let db = if grid.brownian_bin().is_some() {
        path.refined_brownian(grid, substeps)
    } else {
        Vec::new()
    };
    let mut counts: Vec<Vec<(usize, usize)>> = vec![Vec::new(); fine];
    for ev in &path.jumps {
        let b = grid.atom_bin(ev.atom)?;
        let i = ((ev.time / h).floor() as usize).min(fine - 1);
        match counts[i].iter_mut().find(|(bb, _)| *bb == b) {
            Some(e) => e.1 += 1,
            None => counts[i].push((b, 1)),
        }
    }
    let act = active(hs, grid);
    let nb = grid.n_bins();
    let mut dm = vec![ZERO; nb];
    for k in 0..grid.n_steps() {
        if !act[k] {
            continue;
        }
        for i in k * substeps..(k + 1) * substeps {
            for b in 0..nb {
                dm[b] = if grid.is_brownian(b) {
                    Complex64::new(grid.sigma() * db[i], 0.0)
                } else {
                    Complex64::new(-grid.rate(b) * h, 0.0)
                };
            }
            for &(b, cnt) in &counts[i] {
                dm[b] += cnt as f64;
            }
            for j in (1..=n).rev() {
                let incr: Complex64 = (0..nb).map(|b| hs[j - 1].get(k, b) * dm[b]).sum();
                let dz = incr * z[j - 1];
                z[j] += dz;
            }
        }
    }
    Ok(z)
}

/// `J(h_1 ⊗ ... ⊗ h_n)` over `0 < t_1 < ... < t_n < T`.
pub fn iterated_product(
    hs: &[StepField],
    path: &SamplePath,
    grid: &CellGrid,
    mode: IntegrationMode,
) -> Result<Complex64> {
    let refs: Vec<&StepField> = hs.iter().collect();
    Ok(*iterate(&refs, path, grid, mode)?
        .last()
        .expect("Z_0 exists"))
}

/// `J_k(f^{⊗k})` for `k = 0..=max_order`.
pub fn iterated_powers(
    f: &StepField,
    max_order: usize,
    path: &SamplePath,
    grid: &CellGrid,
    mode: IntegrationMode,
) -> Result<Vec<Complex64>> {
    let refs = vec![f; max_order];
    iterate(&refs, path, grid, mode)
}

/// `J_n(f^{⊗n})`.
pub fn iterated_integral(
    f: &StepField,
    n: usize,
    path: &SamplePath,
    grid: &CellGrid,
    mode: IntegrationMode,
) -> Result<Complex64> {
    Ok(iterated_powers(f, n, path, grid, mode)?[n])
}

/// `J_n` of an off-diagonal step kernel, expanded into products of cell indicators.
pub fn iterated_kernel(
    kernel: &OffDiagonalKernel,
    path: &SamplePath,
    grid: &CellGrid,
    mode: IntegrationMode,
) -> Result<Complex64> {
    let mut acc = ZERO;
    for (cells, a) in kernel.entries() {
        let hs: Vec<StepField> = cells
            .iter()
            .map(|&c| StepField::indicator(grid, c))
            .collect();
        acc += a * iterated_product(&hs, path, grid, mode)?;
    }
    Ok(acc)
}
