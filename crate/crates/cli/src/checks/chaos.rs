//! Multiple integrals and the chaos decomposition on simulated paths.

use chaoskit::fock::factorial;
use chaoskit::levy::*;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{max_of, pathwise_paths, phase_field, random_field, Runner};
use crate::config::RunConfig;
use crate::error::Result;
use crate::record::CheckRecord;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn run(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut r = Runner::new(cfg, "chaos");
    r.group("orthogonality", orthogonality);
    r.group("off_diagonal", off_diagonal);
    r.group("single_cell", single_cell);
    r.group("euler_order", euler_order);
    r.group("duality_tail", duality_tail);
    r.finish()
}

fn preset_models(cfg: &RunConfig) -> Result<Vec<(String, LevyModel, CellGrid)>> {
    presets()
        .into_iter()
        .map(|p| {
            let m = p.model(cfg.grid.horizon)?;
            let g = CellGrid::per_atom(&m, cfg.grid.k)?;
            Ok((p.name(), m, g))
        })
        .collect()
}

/// `E[conj(I_m(f^{⊗m})) I_n(h^{⊗n})] = δ_{mn} n! <f,h>^n`.
fn orthogonality(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let n = cfg.n;
    for (name, m, g) in preset_models(cfg)? {
        let mode = IntegrationMode::for_grid(&g, 1);
        let (f, h) = (random_field(&g, 0.9, rng)?, random_field(&g, 0.9, rng)?);
        let fh = f.inner(&h, &g)?;
        let ids: Vec<String> = (0..=n)
            .flat_map(|i| (0..=n).map(move |j| (i, j)))
            .map(|(i, j)| format!("{name}.m={i}.n={j}"))
            .collect();
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let stats = mc_estimate_many(&refs, &m, &g, cfg.n_paths, cfg.seed, |p| {
            let a = iterated_powers(&f, n, p, &g, mode)?;
            let b = iterated_powers(&h, n, p, &g, mode)?;
            Ok((0..=n)
                .flat_map(|i| (0..=n).map(move |j| (i, j)))
                .map(|(i, j)| (a[i] * factorial(i)).conj() * b[j] * factorial(j))
                .collect())
        })?;
        for i in 0..=n {
            for j in 0..=n {
                let want = if i == j {
                    fh.powu(i as u32) * factorial(i)
                } else {
                    ZERO
                };
                let k = i * (n + 1) + j;
                out.push(CheckRecord::monte_carlo(
                    &ids[k],
                    &stats[k],
                    want,
                    cfg.tolerances.mc_sigmas,
                ));
            }
        }
    }
    Ok(out)
}

/// `I_n(f_n) = n! J_n(f_n)` pathwise for off-diagonal kernels on pure-jump models.
fn off_diagonal(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let paths = pathwise_paths(cfg);
    for (name, m, g) in preset_models(cfg)? {
        if !m.is_pure_jump() {
            continue;
        }
        let nc = g.n_cells();
        for n in 1..=cfg.n.min(nc) {
            let mut kernel = OffDiagonalKernel::new(n);
            let mut added = 0;
            while added < 8 {
                let mut cells: Vec<usize> = Vec::new();
                while cells.len() < n {
                    let c = rng.random_range(0..nc);
                    if !cells.contains(&c) {
                        cells.push(c);
                    }
                }
                cells.sort();
                if kernel.entries().any(|(k, _)| *k == cells) {
                    continue;
                }
                let v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                kernel.add_symmetric(&cells, v)?;
                added += 1;
            }
            let res = sample_functionals(&m, &g, paths, cfg.seed, |p| -> Result<f64> {
                let inc = cell_increments(p, &g)?;
                let lhs = product_integral(&kernel, &inc);
                let rhs =
                    iterated_kernel(&kernel, p, &g, IntegrationMode::ExactJump)? * factorial(n);
                Ok((lhs - rhs).norm() / lhs.norm().max(1.0))
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            out.push(CheckRecord::bound(
                &format!("{name}.n={n}"),
                max_of(res),
                cfg.tolerances.pathwise,
            ));
        }
    }
    Ok(out)
}

fn binom(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `Σ_j C(a,j) (-κ)^{a-j} N(N-1)...(N-j+1)`.
fn charlier(a: usize, count: usize, kappa: f64) -> f64 {
    (0..=a)
        .map(|j| {
            let falling: f64 = (0..j).map(|i| count as f64 - i as f64).product();
            binom(a, j) * (-kappa).powi((a - j) as i32) * falling
        })
        .sum()
}

/// Probabilists' Hermite polynomial.
fn hermite(a: usize, x: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, x);
    if a == 0 {
        return h0;
    }
    for k in 1..a {
        (h0, h1) = (h1, x * h1 - k as f64 * h0);
    }
    h1
}

/// `a! J_a(1_c^{⊗a})` on one cell against the Charlier and Hermite polynomials.
fn single_cell(cfg: &RunConfig, _: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let top = cfg.n + 2;
    let paths = pathwise_paths(cfg);
    for (name, m, g) in preset_models(cfg)? {
        let mode = IntegrationMode::for_grid(&g, 1);
        let cells = [0, g.n_cells() / 2, g.n_cells() - 1];
        let res = sample_functionals(&m, &g, paths, cfg.seed, |p| -> Result<f64> {
            let inc = cell_increments(p, &g)?;
            let mut worst = 0.0;
            for &cell in &cells {
                let j = iterated_powers(&StepField::indicator(&g, cell), top, p, &g, mode)?;
                let mass = g.mass(cell);
                for (a, ja) in j.iter().enumerate() {
                    let want = if m.is_pure_jump() {
                        charlier(a, (inc.values[cell].re + mass).round() as usize, mass)
                    } else {
                        mass.powf(a as f64 / 2.0) * hermite(a, inc.values[cell].re / mass.sqrt())
                    };
                    worst = max_of([
                        worst,
                        (ja * factorial(a) - want).norm() / want.abs().max(1.0),
                    ]);
                }
            }
            Ok(worst)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        out.push(CheckRecord::bound(
            &name,
            max_of(res),
            cfg.tolerances.pathwise,
        ));
    }
    Ok(out)
}

/// Euler scheme for `2 J_2(1)` against `B(T)² - T`: slope of log MSE against log step.
fn euler_order(cfg: &RunConfig, _: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let t = cfg.grid.horizon;
    let b = LevyModel::brownian(t)?;
    let g = CellGrid::per_atom(&b, cfg.grid.k)?;
    let one = StepField::constant_on_bin(&g, 0, Complex64::new(1.0, 0.0));
    let paths = cfg.checks.convergence_paths;
    let exact = sample_functionals(&b, &g, paths.min(200), cfg.seed, |p| -> Result<f64> {
        let j = iterated_integral(&one, 2, p, &g, IntegrationMode::ExactBrownian)? * 2.0;
        let bt = p.brownian_terminal();
        Ok((j - Complex64::new(bt * bt - t, 0.0)).norm())
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let subs = &cfg.checks.euler_substeps;
    let mut mse = Vec::with_capacity(subs.len());
    for &s in subs {
        let e = sample_functionals(&b, &g, paths, cfg.seed, |p| -> Result<f64> {
            let j =
                iterated_integral(&one, 2, p, &g, IntegrationMode::Euler { substeps: s })? * 2.0;
            let bt = p.brownian_terminal();
            Ok((j - Complex64::new(bt * bt - t, 0.0)).norm_sqr())
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        mse.push(e.iter().sum::<f64>() / e.len() as f64);
    }
    let xs: Vec<f64> = subs.iter().map(|&s| (g.dt() / s as f64).ln()).collect();
    let ys: Vec<f64> = mse.iter().map(|e| e.ln()).collect();
    let len = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / len, ys.iter().sum::<f64>() / len);
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let errors: Vec<String> = subs
        .iter()
        .zip(&mse)
        .map(|(s, e)| format!("{s}:{e:.3e}"))
        .collect();
    Ok(vec![
        CheckRecord::bound("exact_hermite", max_of(exact), cfg.tolerances.pathwise),
        CheckRecord::within_range("slope", slope, cfg.tolerances.euler_order).with_note(format!(
            "mean square error by substeps {}",
            errors.join(" ")
        )),
    ])
}

/// `E|𝓔_f(T) - Σ_{n≤M} J_n(f^{⊗n})|² = Σ_{n>M} ‖f‖^{2n}/n!`, decreasing in `M`.
///
/// `f` has constant modulus: a peaked profile makes the squared error heavy-tailed
/// on Poisson paths and its sample standard error unreliable.
fn duality_tail(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let cuts = &cfg.checks.tail_truncations;
    let top = cuts.iter().copied().max().unwrap_or(0);
    for (name, m, g) in preset_models(cfg)? {
        let mode = IntegrationMode::for_grid(&g, 1);
        let f = phase_field(&g, 0.8, rng)?;
        let nf = f.norm_sqr(&g)?;
        let ids: Vec<String> = cuts.iter().map(|c| format!("{name}.M={c}")).collect();
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let stats = mc_estimate_many(&refs, &m, &g, cfg.n_paths, cfg.seed, |p| {
            let e = doleans_exp(&f, p, &g)?;
            let j = iterated_powers(&f, top, p, &g, mode)?;
            Ok(cuts
                .iter()
                .map(|&cut| {
                    let partial: Complex64 = j[..=cut].iter().sum();
                    Complex64::new((e - partial).norm_sqr(), 0.0)
                })
                .collect())
        })?;
        let mut means = Vec::new();
        for ((s, &cut), id) in stats.iter().zip(cuts).zip(&ids) {
            let tail = nf.exp()
                - (0..=cut)
                    .map(|n| nf.powi(n as i32) / factorial(n))
                    .sum::<f64>();
            out.push(CheckRecord::monte_carlo(
                id,
                s,
                Complex64::new(tail, 0.0),
                cfg.tolerances.mc_sigmas,
            ));
            means.push((cut, s.mean.re));
        }
        means.sort_by_key(|&(c, _)| c);
        let decreasing = means
            .windows(2)
            .all(|w| w[1].0 == w[0].0 || w[1].1 < w[0].1);
        out.push(CheckRecord::predicate(
            &format!("{name}.decreasing"),
            decreasing,
            if decreasing { 1.0 } else { 0.0 },
            1.0,
        ));
    }
    Ok(out)
}
