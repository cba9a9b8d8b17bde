//! Malliavin calculus on chaos kernels, checked at kernel level and on paths.

use chaoskit::fock::{self, LevelBasis};
use chaoskit::levy::*;
use chaoskit::malliavin::*;
use chaoskit::{ChaosCoefficients64, MarkedChaos64};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{max_of, pathwise_paths, random_field, Runner};
use crate::config::RunConfig;
use crate::error::Result;
use crate::record::CheckRecord;

pub fn run(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut r = Runner::new(cfg, "malliavin");
    r.group("embedding", embedding);
    r.group("eigen_relation", eigen_relation);
    r.group("adjoint", adjoint);
    r.group("number", number);
    r.group("ito_skorohod", ito_skorohod_kernels);
    r.group("ito_skorohod_mc", ito_skorohod_mc);
    r.group("adapted_skorohod", adapted_skorohod);
    r.group("domain", domain);
    r.group("split", split);
    r.group("serialization", serialization);
    r.group("projection", projection);
    r.finish()
}

fn gauss(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// The configured model, or a Brownian part with two jump sizes.
fn kernel_model(cfg: &RunConfig) -> Result<(LevyModel, CellGrid)> {
    let steps = cfg.checks.kernel_steps;
    let m = match cfg.custom_model()? {
        Some(m) => m,
        None => LevyModel::new(
            0.0,
            0.8,
            vec![
                Atom {
                    size: 1.0,
                    intensity: 0.7,
                },
                Atom {
                    size: -0.5,
                    intensity: 0.6,
                },
            ],
            cfg.grid.horizon,
        )?,
    };
    let g = CellGrid::per_atom(&m, steps)?;
    Ok((m, g))
}

fn relative(err: f64, scale: f64) -> f64 {
    err / scale.max(1.0)
}

/// `U∇_M = ∇⁻U`, `Uδ = ∇⁺U`, `U𝓝 = NU` and unitarity of the embedding.
fn embedding(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (_, g) = kernel_model(cfg)?;
    let mu = g.masses();
    let l = cfg.n;
    let (mut unitary, mut grad, mut div, mut num) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..cfg.checks.trials {
        let f = ChaosCoefficients64::random(mu.clone(), l, l, rng)?;
        let h = ChaosCoefficients64::random(mu.clone(), l, l, rng)?;
        let psi = f.embed()?;
        let scale = psi.norm();
        unitary = max_of([
            unitary,
            relative((psi.norm_sqr() - f.norm_sqr()?).abs(), psi.norm_sqr()),
            relative(
                (psi.inner(&h.embed()?)? - f.inner(&h)?).norm(),
                scale * h.norm_sqr()?.sqrt(),
            ),
            relative(
                ChaosCoefficients64::from_fock(mu.clone(), &psi)?.distance(&f)?,
                scale,
            ),
        ]);
        grad = max_of([
            grad,
            relative(
                gradient(&f)?
                    .value
                    .embed(l)?
                    .distance(&fock::grad_minus(&psi)?.value)?,
                scale,
            ),
        ]);
        num = max_of([
            num,
            relative(
                number_apply(&f)
                    .embed()?
                    .distance(&fock::number_apply(&psi))?,
                scale,
            ),
        ]);
        let x = MarkedChaos64::random(mu.clone(), l, rng)?;
        let xs = x.embed(l)?;
        let up = fock::grad_plus(&xs)?;
        div = max_of([
            div,
            relative(
                divergence(&x)?.embed()?.distance(&up.value)? + up.dropped_norm,
                xs.norm(),
            ),
        ]);
    }
    let tol = cfg.tolerances.algebraic;
    Ok(vec![
        CheckRecord::bound("unitary", unitary, tol),
        CheckRecord::bound("gradient", grad, tol),
        CheckRecord::bound("divergence", div, tol),
        CheckRecord::bound("number", num, tol),
    ])
}

/// `D_c 𝓔_f = f(c) 𝓔_f` and `D_h 𝓔_f = <h,f> 𝓔_f` on the exponential kernels.
fn eigen_relation(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (_, g) = kernel_model(cfg)?;
    let d = g.n_cells();
    let top = cfg.n + 2;
    let (mut cellwise, mut directional_err, mut fock_err) = (0.0, 0.0, 0.0);
    for _ in 0..cfg.checks.trials.min(50) {
        let f = random_field(&g, rng.random_range(0.1..1.5), rng)?;
        let e = ChaosCoefficients64::exponential_of(&g, &f, top)?;
        let lower = ChaosCoefficients64::exponential_of(&g, &f, top - 1)?;
        let times = |c: Complex64| {
            lower
                .levels()
                .iter()
                .map(|lv| lv.iter().map(|z| z * c).collect())
                .collect()
        };
        for cell in 0..d {
            let want = ChaosCoefficients64::from_levels(g.masses(), times(f.values()[cell]))?;
            cellwise = max_of([cellwise, derivative_at(&e, cell)?.distance(&want)?]);
        }
        let h: Vec<Complex64> = (0..d).map(|_| gauss(rng)).collect();
        let hf: Complex64 = (0..d)
            .map(|c| h[c].conj() * f.values()[c] * g.mass(c))
            .sum();
        let want = ChaosCoefficients64::from_levels(g.masses(), times(hf))?;
        let dh = directional(&e, &h)?;
        directional_err = max_of([
            directional_err,
            relative(dh.distance(&want)?, want.norm_sqr()?.sqrt()),
        ]);
        let psi = fock::exp_vector(&embed(&f, &g)?, top)?.value;
        fock_err = max_of([fock_err, relative(e.embed()?.distance(&psi)?, psi.norm())]);
    }
    let tol = cfg.tolerances.algebraic;
    Ok(vec![
        CheckRecord::bound("cellwise", cellwise, tol),
        CheckRecord::bound("directional", directional_err, tol),
        CheckRecord::bound("exponential_vector", fock_err, tol),
    ])
}

/// `<δX, F> = <X, DF>`.
fn adjoint(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (_, g) = kernel_model(cfg)?;
    let l = cfg.n;
    let mut worst = 0.0;
    for _ in 0..cfg.checks.trials {
        let x = MarkedChaos64::random(g.masses(), l, rng)?;
        let f = ChaosCoefficients64::random(g.masses(), l, l, rng)?;
        let lhs = divergence(&x)?.inner(&f)?;
        let rhs = x.inner(&gradient(&f)?.value)?;
        worst = max_of([worst, relative((lhs - rhs).norm(), lhs.norm())]);
    }
    Ok(vec![CheckRecord::bound("", worst, cfg.tolerances.relative)])
}

/// `δD = 𝓝`, the Ornstein-Uhlenbeck semigroup and `‖(1+𝓝)^{-1/2}F‖₁ = ‖F‖`.
fn number(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (_, g) = kernel_model(cfg)?;
    let l = cfg.n;
    let (mut fact, mut ou, mut resolvent) = (0.0, 0.0, 0.0);
    for _ in 0..cfg.checks.trials {
        let f = ChaosCoefficients64::random(g.masses(), l, l, rng)?;
        let scale = number_apply(&f).norm_sqr()?.sqrt();
        fact = max_of([fact, relative(n_factorization_residual(&f)?, scale)]);
        let (s, t) = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
        let composed = number_ou(&number_ou(&f, s)?, t)?;
        ou = max_of([
            ou,
            relative(
                composed.distance(&number_ou(&f, s + t)?)?,
                f.norm_sqr()?.sqrt(),
            ),
        ]);
        let n = f.norm_sqr()?;
        resolvent = max_of([
            resolvent,
            relative((resolvent_sqrt(&f).sobolev_norm_sqr()? - n).abs(), n),
        ]);
    }
    let tol = cfg.tolerances.algebraic;
    Ok(vec![
        CheckRecord::bound("factorization", fact, tol),
        CheckRecord::bound("semigroup", ou, tol),
        CheckRecord::bound("resolvent", resolvent, tol),
    ])
}

/// Kernel-level `E[δX conj(δY)] = <X,Y> + <DX, (DY)*>`, and the same identity computed on the Fock side.
fn ito_skorohod_kernels(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (_, g) = kernel_model(cfg)?;
    let (mut identity, mut cross) = (0.0, 0.0);
    for _ in 0..cfg.checks.trials {
        let l = rng.random_range(1..=cfg.n);
        let x = MarkedChaos64::random(g.masses(), l, rng)?;
        let y = MarkedChaos64::random(g.masses(), l, rng)?;
        let rep = ito_skorohod(&x, &y)?;
        identity = max_of([identity, rep.residual() / rep.scale()]);
        let abs = fock::ito_skorohod_abstract(&x.embed(l)?, &y.embed(l)?)?;
        cross = max_of([
            cross,
            (abs.lhs - rep.lhs).norm() / rep.scale(),
            (abs.first_term - rep.first_term).norm() / rep.scale(),
            (abs.second_term - rep.second_term).norm() / rep.scale(),
        ]);
    }
    let tol = cfg.tolerances.spectral;
    Ok(vec![
        CheckRecord::bound("identity", identity, tol),
        CheckRecord::bound("fock_cross_check", cross, tol),
    ])
}

/// `E|δX|²` by simulation against the kernel-level right-hand side.
fn ito_skorohod_mc(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for p in presets() {
        let m = p.model(cfg.grid.horizon)?;
        let g = CellGrid::per_atom(&m, cfg.checks.kernel_steps)?;
        let mode = IntegrationMode::for_grid(&g, 1);
        let mut x = MarkedChaos64::random(g.masses(), 2, rng)?;
        for l in 0..2 {
            x.level_mut(l).iter_mut().for_each(|z| *z *= 0.3);
        }
        let rep = ito_skorohod(&x, &x)?;
        let ev = ChaosEvaluator::new(&divergence(&x)?, &g, mode)?;
        let s = mc_estimate(&p.name(), &m, &g, cfg.n_paths, cfg.seed, |path| {
            Ok(Complex64::new(ev.evaluate(path, &g)?.norm_sqr(), 0.0))
        })?;
        out.push(CheckRecord::monte_carlo(
            &p.name(),
            &s,
            rep.rhs,
            cfg.tolerances.mc_sigmas,
        ));
    }
    Ok(out)
}

/// For adapted step integrands the Skorohod integral is the Itô sum, path by path.
fn adapted_skorohod(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let p = Preset::Poisson { lambda: 1.0 };
    let m = p.model(cfg.grid.horizon)?;
    let g = CellGrid::per_atom(&m, cfg.checks.kernel_steps)?;
    let d = g.n_cells();
    let h: Vec<Complex64> = (0..d).map(|_| gauss(rng)).collect();
    let w: Vec<Complex64> = (0..d).map(|_| gauss(rng)).collect();
    let earlier = |a: usize, b: usize| g.locate(a).0 < g.locate(b).0;
    // X(c) = h(c) (1 + Σ_{c' before c} w(c') M(c'))
    let mut x = MarkedChaos64::zeros(g.masses(), 2)?;
    x.level_mut(0).copy_from_slice(&h);
    let b1 = LevelBasis::new(d, 1)?;
    for cp in 0..d {
        let mut alpha = vec![0u32; d];
        alpha[cp] = 1;
        let rk = b1.rank(&alpha);
        for cc in 0..d {
            if earlier(cp, cc) {
                x.level_mut(1)[rk * d + cc] = h[cc] * w[cp];
            }
        }
    }
    let ev = ChaosEvaluator::new(&divergence(&x)?, &g, IntegrationMode::ExactJump)?;
    let res = sample_functionals(
        &m,
        &g,
        pathwise_paths(cfg),
        cfg.seed,
        |path| -> Result<f64> {
            let inc = cell_increments(path, &g)?;
            let mut ito = Complex64::new(0.0, 0.0);
            for cc in 0..d {
                let mut pred = h[cc];
                for cp in 0..d {
                    if earlier(cp, cc) {
                        pred += h[cc] * w[cp] * inc.values[cp];
                    }
                }
                ito += pred * inc.values[cc];
            }
            Ok(relative((ev.evaluate(path, &g)? - ito).norm(), ito.norm()))
        },
    )
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    Ok(vec![CheckRecord::bound(
        &p.name(),
        max_of(res),
        cfg.tolerances.pathwise,
    )])
}

/// The maximal-domain functionals are nondecreasing in the truncation level.
fn domain(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (_, g) = kernel_model(cfg)?;
    let mu = g.masses();
    let l = cfg.n + 1;
    let mut ok = true;
    for _ in 0..cfg.checks.trials.min(50) {
        let f = ChaosCoefficients64::random(mu.clone(), l, l, rng)?;
        let vals = (0..=l)
            .map(|k| {
                ChaosCoefficients64::from_levels(mu.clone(), f.levels()[..=k].to_vec())?
                    .domain_functional()
            })
            .collect::<chaoskit::Result<Vec<f64>>>()?;
        ok &= vals.windows(2).all(|w| w[1] >= w[0]);
        let x = MarkedChaos64::random(mu.clone(), l, rng)?;
        let vals = (1..=l)
            .map(|k| {
                divergence_functional(&MarkedChaos64::from_levels(
                    mu.clone(),
                    x.levels()[..k].to_vec(),
                )?)
            })
            .collect::<chaoskit::Result<Vec<f64>>>()?;
        ok &= vals.windows(2).all(|w| w[1] >= w[0]);
    }
    Ok(vec![CheckRecord::predicate(
        "monotone",
        ok,
        if ok { 1.0 } else { 0.0 },
        1.0,
    )])
}

/// `D = D^B ⊕ D^N` and the factorization of the chaos space along the Brownian and jump cells.
fn split(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (_, g) = kernel_model(cfg)?;
    let l = cfg.n;
    let (mut grad, mut div, mut parts, mut fact) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..cfg.checks.trials.min(50) {
        let f = ChaosCoefficients64::random(g.masses(), l, l, rng)?;
        let s = bn_split(&f, &g)?;
        let sob = f.sobolev_norm_sqr()?;
        grad = max_of([grad, relative(s.gradient_residual, sob.sqrt())]);
        div = max_of([div, relative(s.divergence_residual, sob)]);
        let total = gradient(&f)?.value.norm_sqr()?;
        let sum = s.gradient_brownian.norm_sqr()? + s.gradient_jump.norm_sqr()?;
        parts = max_of([parts, relative((total - sum).abs(), total)]);
        if let Some(factored) = &s.factored {
            let n = f.embed()?.norm();
            fact = max_of([fact, relative((factored.norm() - n).abs(), n)]);
        }
    }
    let tol = cfg.tolerances.algebraic;
    Ok(vec![
        CheckRecord::bound("gradient", grad, tol),
        CheckRecord::bound("divergence", div, tol),
        CheckRecord::bound("orthogonal_parts", parts, tol),
        CheckRecord::bound("factorization", fact, tol),
    ])
}

/// Chaos coefficients survive the text format unchanged.
fn serialization(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (_, g) = kernel_model(cfg)?;
    let f = ChaosCoefficients64::random(g.masses(), cfg.n, cfg.n, rng)?;
    let back = ChaosCoefficients64::from_json(&f.to_json(Some(&g))?)?;
    let same = back == f && back.content_hash(Some(&g))? == f.content_hash(Some(&g))?;
    Ok(vec![CheckRecord::predicate(
        "round_trip",
        same,
        if same { 1.0 } else { 0.0 },
        1.0,
    )])
}

/// Projecting `𝓔_f(T)` onto the chaos recovers the kernels `f^{⊗n}/n!`.
fn projection(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let m = LevyModel::poisson(1.0, cfg.grid.horizon)?;
    let g = CellGrid::per_atom(&m, 2)?;
    let f = random_field(&g, 0.6, rng)?;
    let top = 2;
    let proj = project_chaos(
        |p| doleans_exp(&f, p, &g),
        &m,
        &g,
        top,
        cfg.n_paths,
        cfg.seed,
        IntegrationMode::ExactJump,
    )?;
    let want = ChaosCoefficients64::exponential_of(&g, &f, top)?;
    let mut out = Vec::new();
    for n in 0..=top {
        for (k, (got, w)) in proj
            .coefficients
            .level(n)
            .iter()
            .zip(want.level(n))
            .enumerate()
        {
            let se = proj.standard_errors[n][k];
            out.push(CheckRecord::estimate(
                &format!("n={n}.k={k}"),
                *got,
                se,
                cfg.n_paths,
                *w,
                cfg.tolerances.mc_sigmas,
            ));
        }
    }
    Ok(out)
}
