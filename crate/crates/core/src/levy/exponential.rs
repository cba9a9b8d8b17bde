//! Stochastic exponentials `𝓔_{Y_f}`, the exponential martingales `M_f` and
//! the closed forms for the Brownian and Poisson presets.

use num_complex::Complex64;

use super::grid::{CellGrid, StepField};
use super::integrals::{cell_increments, wiener_levy, IntegrationMode};
use super::model::LevyModel;
use super::path::SamplePath;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `exp{Y(T) - σ²/2 Σ_k f(k,0)² Δt} Π_jumps (1 + ΔY) e^{-ΔY}`, with the bilinear square.
pub fn doleans_exp(f: &StepField, path: &SamplePath, grid: &CellGrid) -> Result<Complex64> {
    f.check(grid)?;
    let y = wiener_levy(f, &cell_increments(path, grid)?);
    let mut bracket = ZERO;
    if let Some(b0) = grid.brownian_bin() {
        let s2 = grid.sigma() * grid.sigma();
        for k in 0..grid.n_steps() {
            let v = f.get(k, b0);
            bracket += v * v * s2 * grid.dt();
        }
    }
    let mut product = ONE;
    for ev in &path.jumps {
        let dy = f.get(grid.step_of(ev.time), grid.atom_bin(ev.atom)?);
        product *= (ONE + dy) * (-dy).exp();
    }
    Ok((y - 0.5 * bracket).exp() * product)
}

/// Brownian closed form `exp{σ∫f dB - σ²/2 ∫|f|² ds}` on the Brownian bin.
pub fn brownian_exponential_closed_form(
    f: &StepField,
    path: &SamplePath,
    grid: &CellGrid,
) -> Result<Complex64> {
    let b0 = grid
        .brownian_bin()
        .ok_or_else(|| Error::ModeMismatch("grid has no Brownian bin".into()))?;
    let mut exponent = ZERO;
    for k in 0..grid.n_steps() {
        let v = f.get(k, b0);
        exponent += grid.sigma() * v * path.brownian_increments[k]
            - 0.5 * grid.sigma().powi(2) * v.norm_sqr() * grid.dt();
    }
    Ok(exponent.exp())
}

/// Poisson closed form `exp{-√λ ∫g ds} Π (1 + ΔN(s) g(s)/√λ)` for `g` given per time step.
pub fn poisson_exponential_closed_form(
    g: &[Complex64],
    lambda: f64,
    path: &SamplePath,
    grid: &CellGrid,
) -> Result<Complex64> {
    if g.len() != grid.n_steps() {
        return Err(Error::DimensionMismatch {
            expected: grid.n_steps(),
            actual: g.len(),
        });
    }
    let sl = lambda.sqrt();
    let integral: Complex64 = g.iter().map(|v| v * grid.dt()).sum();
    let product = path
        .jumps
        .iter()
        .fold(ONE, |acc, ev| acc * (ONE + g[grid.step_of(ev.time)] / sl));
    Ok((-sl * integral).exp() * product)
}

fn single_jump_bin(grid: &CellGrid) -> Result<usize> {
    let mut bins = grid.jump_bins();
    match (bins.next(), bins.next(), grid.brownian_bin()) {
        (Some(b), None, None) => Ok(b),
        _ => Err(Error::ModeMismatch(
            "the Poisson isomorphism needs a single jump bin and sigma = 0".into(),
        )),
    }
}

/// The isomorphism `L²(S, μ) -> L²[0, T]` of the Poisson preset: `(Vf)(s) = √λ f(s, 1)`.
pub fn poisson_v(f: &StepField, grid: &CellGrid) -> Result<Vec<Complex64>> {
    let b = single_jump_bin(grid)?;
    let sl = grid.rate(b).sqrt();
    Ok((0..grid.n_steps()).map(|k| sl * f.get(k, b)).collect())
}

/// `V^{-1} g = g / √λ` on the jump bin.
pub fn poisson_v_inverse(g: &[Complex64], grid: &CellGrid) -> Result<StepField> {
    let b = single_jump_bin(grid)?;
    if g.len() != grid.n_steps() {
        return Err(Error::DimensionMismatch {
            expected: grid.n_steps(),
            actual: g.len(),
        });
    }
    let sl = grid.rate(b).sqrt();
    Ok(StepField::from_fn(grid, |k, bin| {
        if bin == b {
            g[k] / sl
        } else {
            ZERO
        }
    }))
}

/// `‖g‖²_{L²[0,T]}` for `g` given per time step.
pub fn time_norm_sqr(g: &[Complex64], grid: &CellGrid) -> f64 {
    g.iter().map(|v| v.norm_sqr() * grid.dt()).sum()
}

/// `X_f(T) = ∫ f dX` for a real `f` given per time step.
pub fn x_integral(
    phi: &[f64],
    model: &LevyModel,
    path: &SamplePath,
    grid: &CellGrid,
) -> Result<f64> {
    if phi.len() != grid.n_steps() {
        return Err(Error::DimensionMismatch {
            expected: grid.n_steps(),
            actual: phi.len(),
        });
    }
    let mut x = 0.0;
    for (k, &p) in phi.iter().enumerate() {
        x += p * model.path_drift() * grid.dt();
        if let Some(db) = path.brownian_increments.get(k) {
            x += p * model.sigma() * db;
        }
    }
    for ev in &path.jumps {
        x += phi[grid.step_of(ev.time)] * model.atoms()[ev.atom].size;
    }
    Ok(x)
}

/// `M_f(T) = exp{i X_f(T) + ∫ η(f(s)) ds}`.
pub fn exp_martingale(
    phi: &[f64],
    model: &LevyModel,
    path: &SamplePath,
    grid: &CellGrid,
) -> Result<Complex64> {
    let x = x_integral(phi, model, path, grid)?;
    let comp: Complex64 = phi.iter().map(|&p| model.symbol(p) * grid.dt()).sum();
    Ok((Complex64::i() * x + comp).exp())
}

/// `M_f(T)` next to its reconstruction `1 + σ∫ψ₀ dB + ∫∫ψ₁ dÑ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ItoRepresentation {
    pub direct: Complex64,
    pub reconstructed: Complex64,
}

impl ItoRepresentation {
    pub fn residual(&self) -> f64 {
        (self.direct - self.reconstructed).norm()
    }
}

/// `(e^{au} - 1) / a`, continuous at `a = 0`.
fn exp_integral(a: Complex64, u: f64) -> Complex64 {
    let z = a * u;
    if z.norm() < 1e-8 {
        u * (ONE + z / 2.0 + z * z / 6.0)
    } else {
        ((z).exp() - ONE) / a
    }
}

/// Rebuilds `M_f(T) - 1` from `ψ₀(s) = iσf(s)M_f(s-)` and `ψ₁(s,x) = (e^{if(s)x} - 1)M_f(s-)`.
///
/// In pure-jump models the compensator integrals are done in closed form between
/// jumps and the reconstruction is exact. Otherwise the Brownian part uses the
/// left-point rule on the refined grid given by `mode`.
pub fn ito_representation(
    phi: &[f64],
    model: &LevyModel,
    path: &SamplePath,
    grid: &CellGrid,
    mode: IntegrationMode,
) -> Result<ItoRepresentation> {
    let direct = exp_martingale(phi, model, path, grid)?;
    let i = Complex64::i();
    let bp = model.path_drift();
    let kappa = |p: f64| -> Complex64 {
        model
            .atoms()
            .iter()
            .map(|a| a.intensity * ((i * p * a.size).exp() - ONE))
            .sum()
    };
    let substeps = match mode {
        IntegrationMode::Euler { substeps } => substeps.max(1),
        IntegrationMode::ExactJump if model.sigma() == 0.0 => 1,
        _ => {
            return Err(Error::ModeMismatch(
                "exact reconstruction needs sigma = 0; use Euler".into(),
            ))
        }
    };
    let h = grid.dt() / substeps as f64;
    let db = if model.sigma() > 0.0 {
        path.refined_brownian(grid, substeps)
    } else {
        Vec::new()
    };
    let mut m = ONE;
    let mut recon = ONE;
    let mut next_jump = 0;
    for k in 0..grid.n_steps() {
        let p = phi[k];
        let kap = kappa(p);
        // between jumps: dM = (i p b' + η(p)) M ds + i σ p M dB, compensator term -κ M ds
        let a = i * p * bp + model.symbol(p);
        for s in 0..substeps {
            let t0 = k as f64 * grid.dt() + s as f64 * h;
            let t1 = t0 + h;
            let mut t = t0;
            let last = k + 1 == grid.n_steps() && s + 1 == substeps;
            let in_sub = |time: f64| if last { time <= t1 } else { time < t1 };
            let m_left = m;
            while next_jump < path.jumps.len() && in_sub(path.jumps[next_jump].time) {
                let ev = path.jumps[next_jump];
                let u = ev.time - t;
                recon -= kap * m * exp_integral(a, u);
                m *= (a * u).exp();
                let psi1 = ((i * p * model.atoms()[ev.atom].size).exp() - ONE) * m;
                recon += psi1;
                m += psi1;
                t = ev.time;
                next_jump += 1;
            }
            let u = t1 - t;
            recon -= kap * m * exp_integral(a, u);
            m *= (a * u).exp();
            if model.sigma() > 0.0 {
                let d = db[k * substeps + s];
                recon += i * model.sigma() * p * m_left * d;
                m *= (i * model.sigma() * p * d).exp();
            }
        }
    }
    Ok(ItoRepresentation {
        direct,
        reconstructed: recon,
    })
}
