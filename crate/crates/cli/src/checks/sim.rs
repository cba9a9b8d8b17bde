//! Monte-Carlo and pathwise checks on the simulated Lévy processes.

use chaoskit::levy::*;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{max_of, pathwise_paths, Runner};
use crate::config::RunConfig;
use crate::error::Result;
use crate::record::CheckRecord;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The presets, plus the configured model when there is one.
pub(crate) fn models(cfg: &RunConfig) -> Result<Vec<(String, LevyModel, CellGrid)>> {
    let mut out = Vec::new();
    for p in presets() {
        let m = p.model(cfg.grid.horizon)?;
        let g = CellGrid::per_atom(&m, cfg.grid.k)?;
        out.push((p.name(), m, g));
    }
    if let Some(m) = cfg.custom_model()? {
        let g = cfg.custom_grid(&m)?;
        out.push(("custom".to_string(), m, g));
    }
    Ok(out)
}

pub fn run(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut r = Runner::new(cfg, "sim");
    r.group("moments", moments);
    r.group("characteristic_function", characteristic_function);
    r.group("closed_forms", closed_forms);
    r.group("martingales", martingales);
    r.group("ito_representation", ito_representation_check);
    r.group("reproducibility", reproducibility);
    r.finish()
}

/// Cells at the first, middle and last time step of every bin.
fn probe_cells(grid: &CellGrid) -> Vec<usize> {
    let k = grid.n_steps();
    let mut steps = vec![0, k / 2, k - 1];
    steps.dedup();
    (0..grid.n_bins())
        .flat_map(|b| steps.iter().map(move |&s| grid.cell(s, b)))
        .collect()
}

/// `E[M(cell)] = 0` and `E[M(cell)²] = μ(cell)`.
fn moments(cfg: &RunConfig, _: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (name, m, g) in models(cfg)? {
        let cells = probe_cells(&g);
        let ids: Vec<String> = cells
            .iter()
            .flat_map(|c| [format!("mean[{c}]"), format!("square[{c}]")])
            .collect();
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let stats = mc_estimate_many(&refs, &m, &g, cfg.n_paths, cfg.seed, |p| {
            let inc = cell_increments(p, &g)?;
            Ok(cells
                .iter()
                .flat_map(|&c| [inc.values[c], inc.values[c] * inc.values[c]])
                .collect())
        })?;
        for (j, &c) in cells.iter().enumerate() {
            let zero = Complex64::new(0.0, 0.0);
            out.push(CheckRecord::monte_carlo(
                &format!("{name}.{}", ids[2 * j]),
                &stats[2 * j],
                zero,
                cfg.tolerances.mc_sigmas,
            ));
            let mu = Complex64::new(g.mass(c), 0.0);
            out.push(CheckRecord::monte_carlo(
                &format!("{name}.{}", ids[2 * j + 1]),
                &stats[2 * j + 1],
                mu,
                cfg.tolerances.mc_sigmas,
            ));
        }
    }
    Ok(out)
}

/// `E[e^{iuX(T)}] = e^{-Tη(u)}` and `E[X(T)]`.
fn characteristic_function(cfg: &RunConfig, _: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let us = &cfg.checks.fourier_points;
    for (name, m, g) in models(cfg)? {
        let mut ids: Vec<String> = us.iter().map(|u| format!("{name}.u={u}")).collect();
        ids.push(format!("{name}.mean"));
        let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
        let stats = mc_estimate_many(&refs, &m, &g, cfg.n_paths, cfg.seed, |p| {
            let x = p.terminal_value(&m);
            let mut v: Vec<Complex64> = us
                .iter()
                .map(|&u| (Complex64::new(0.0, u * x)).exp())
                .collect();
            v.push(Complex64::new(x, 0.0));
            Ok(v)
        })?;
        for (j, &u) in us.iter().enumerate() {
            let want = (-m.symbol(u) * m.horizon()).exp();
            out.push(CheckRecord::monte_carlo(
                &ids[j],
                &stats[j],
                want,
                cfg.tolerances.mc_sigmas,
            ));
        }
        let want = Complex64::new(m.mean(m.horizon()), 0.0);
        out.push(CheckRecord::monte_carlo(
            &ids[us.len()],
            &stats[us.len()],
            want,
            cfg.tolerances.mc_sigmas,
        ));
    }
    Ok(out)
}

/// Closed forms of the stochastic exponential on the Brownian and Poisson presets.
fn closed_forms(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let t = cfg.grid.horizon;
    let k = cfg.grid.k;
    let n = pathwise_paths(cfg);
    let tol = cfg.tolerances.closed_form;

    let b = LevyModel::brownian(t)?;
    let gb = CellGrid::per_atom(&b, k)?;
    let fb = StepField::from_fn(&gb, |_, _| Complex64::new(rng.random_range(-1.0..1.0), 0.0));
    let brownian = sample_functionals(&b, &gb, n, cfg.seed, |p| -> Result<f64> {
        let (d, e) = (
            doleans_exp(&fb, p, &gb)?,
            brownian_exponential_closed_form(&fb, p, &gb)?,
        );
        Ok((d - e).norm() / e.norm().max(1.0))
    });
    let brownian = max_of(brownian.into_iter().collect::<Result<Vec<_>>>()?);

    let lambda = 1.0;
    let pm = LevyModel::poisson(lambda, t)?;
    let gp = CellGrid::per_atom(&pm, k)?;
    let g: Vec<Complex64> = (0..k)
        .map(|_| Complex64::new(rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8)))
        .collect();
    let f = poisson_v_inverse(&g, &gp)?;
    let v_iso = (time_norm_sqr(&g, &gp) - f.norm_sqr(&gp)?).abs();
    let one = StepField::constant_on_bin(&gp, 0, ONE);
    let poisson = sample_functionals(&pm, &gp, n, cfg.seed, |p| -> Result<(f64, f64)> {
        let (d, e) = (
            doleans_exp(&f, p, &gp)?,
            poisson_exponential_closed_form(&g, lambda, p, &gp)?,
        );
        let doubling = doleans_exp(&one, p, &gp)?;
        let want = 2f64.powi(p.jumps.len() as i32) * (-t).exp();
        Ok((
            (d - e).norm() / e.norm().max(1.0),
            (doubling - want).norm() / want,
        ))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    Ok(vec![
        CheckRecord::bound("brownian_exponential", brownian, tol).with_note(format!("{n} paths")),
        CheckRecord::bound(
            "poisson_exponential",
            max_of(poisson.iter().map(|x| x.0)),
            tol,
        )
        .with_note(format!("{n} paths")),
        CheckRecord::bound("poisson_doubling", max_of(poisson.iter().map(|x| x.1)), tol)
            .with_note(format!("{n} paths")),
        CheckRecord::bound("poisson_isometry", v_iso, cfg.tolerances.algebraic),
    ])
}

/// `E[𝓔_{Y_f}(t)] = 1` and `E[M_f(t)] = 1` at `t = T/2` and `t = T`.
fn martingales(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let k = cfg.grid.k;
    let half = k / 2;
    for (name, m, g) in models(cfg)? {
        let raw = StepField::from_fn(&g, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let norm = raw.norm_sqr(&g)?.sqrt();
        let f = StepField::from_fn(&g, |s, b| raw.get(s, b) * (0.8 / norm));
        let fh = f.truncated_at(half);
        let phi: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let phi_half: Vec<f64> = phi
            .iter()
            .enumerate()
            .map(|(s, &v)| if s < half { v } else { 0.0 })
            .collect();
        let ids = [
            "exponential.T",
            "exponential.half",
            "exp_martingale.T",
            "exp_martingale.half",
        ];
        let stats = mc_estimate_many(&ids, &m, &g, cfg.n_paths, cfg.seed, |p| {
            Ok(vec![
                doleans_exp(&f, p, &g)?,
                doleans_exp(&fh, p, &g)?,
                exp_martingale(&phi, &m, p, &g)?,
                exp_martingale(&phi_half, &m, p, &g)?,
            ])
        })?;
        for (id, s) in ids.iter().zip(&stats) {
            out.push(CheckRecord::monte_carlo(
                &format!("{name}.{id}"),
                s,
                ONE,
                cfg.tolerances.mc_sigmas,
            ));
        }
    }
    Ok(out)
}

/// `M_f(T) = 1 + σ∫ψ₀ dB + ∫∫ψ₁ dÑ`, exactly on pure-jump models.
fn ito_representation_check(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    let n = pathwise_paths(cfg);
    for (name, m, g) in models(cfg)? {
        if !m.is_pure_jump() {
            continue;
        }
        let phi: Vec<f64> = (0..g.n_steps())
            .map(|_| rng.random_range(-1.0..1.0))
            .collect();
        let res = sample_functionals(&m, &g, n, cfg.seed, |p| {
            Ok(ito_representation(&phi, &m, p, &g, IntegrationMode::ExactJump)?.residual())
        })
        .into_iter()
        .collect::<Result<Vec<f64>>>()?;
        out.push(
            CheckRecord::bound(&name, max_of(res), cfg.tolerances.pathwise)
                .with_note(format!("{n} paths")),
        );
    }
    Ok(out)
}

/// Path `(seed, i)` does not depend on the ensemble it is drawn in or the worker count.
fn reproducibility(cfg: &RunConfig, _: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for (name, m, g) in models(cfg)? {
        let n = cfg.n_paths.min(500);
        let parallel = sample_functionals(&m, &g, n, cfg.seed, |p| p.clone());
        let serial: Vec<SamplePath> = (0..n as u64)
            .map(|i| sample_path(&m, &g, cfg.seed, i))
            .collect();
        let same = parallel == serial;
        out.push(CheckRecord::predicate(
            &name,
            same,
            if same { 1.0 } else { 0.0 },
            1.0,
        ));
    }
    Ok(out)
}
