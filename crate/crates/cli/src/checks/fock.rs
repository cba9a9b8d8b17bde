//! Algebraic checks on the truncated Fock space.

use chaoskit::fock::*;
use chaoskit::{DenseOperator64, FockVector64, MarkedFock64};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{fd_ratio, max_of, vector_in_ball, Runner};
use crate::config::RunConfig;
use crate::error::Result;
use crate::record::CheckRecord;

fn gauss(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn hermitian(d: usize, rng: &mut ChaCha8Rng) -> DenseOperator64 {
    let raw: Vec<Complex64> = (0..d * d).map(|_| gauss(rng)).collect();
    DenseOperator::from_fn(d, d, |i, j| 0.5 * (raw[i * d + j] + raw[j * d + i].conj()))
}

fn unitary_group(a: &DenseOperator64, t: f64) -> DenseOperator64 {
    let d = a.rows();
    let e = DMatrix::from_fn(d, d, |i, j| a.get(i, j) * Complex64::new(0.0, t)).exp();
    DenseOperator::from_fn(d, d, |i, j| e[(i, j)])
}

pub fn run(cfg: &RunConfig) -> Vec<crate::record::CheckRecord> {
    let mut r = Runner::new(cfg, "fock");
    r.group("exp_gram", check_exp_gram);
    r.group("gram_positivity", check_gram_positivity);
    r.group("ccr", check_ccr);
    r.group("adjoint", check_adjoint_pairs);
    r.group("spectral", check_spectral);
    r.group("number", check_number);
    r.group("q_map", check_q_map);
    r.group("ito_skorohod", check_ito_skorohod);
    r.group("exp_adjunction", check_exp_adjunction);
    r.group("derivatives", check_derivatives);
    r.group("second_quantization", check_second_quantization);
    r.group("normalization", check_normalization_ledger);
    r.group("split", check_split);
    r.finish()
}

/// `|<e_M(f), e_M(g)> - exp<f,g>|` against `sqrt(tail(f) tail(g))` plus rounding slack.
fn check_exp_gram(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let m = cfg.checks.gram_truncation;
    let mut worst = 0.0f64;
    let mut max_residual = 0.0f64;
    for t in 0..cfg.checks.trials {
        let d = 1 + t % cfg.checks.spectral_max_d;
        let (f, g) = (vector_in_ball(d, 1.5, rng), vector_in_ball(d, 1.5, rng));
        let (ef, eg) = (exp_vector(&f, m)?, exp_vector(&g, m)?);
        let residual = (ef.value.inner(&eg.value)? - f.inner(&g)?.exp()).norm();
        let bound = (ef.tail_bound * eg.tail_bound).sqrt()
            + cfg.tolerances.tail_rounding * (f.norm() * g.norm()).exp();
        worst = max_of([worst, residual / bound]);
        max_residual = max_of([max_residual, residual]);
    }
    Ok(vec![
        CheckRecord::within_range("tail_ratio", worst, [0.0, 1.0]),
        CheckRecord::predicate("max_residual", max_residual.is_finite(), max_residual, 0.0),
    ])
}

fn check_gram_positivity(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let mut lowest = f64::INFINITY;
    for t in 0..cfg.checks.trials {
        let mut combo = ExpCombo::new();
        for _ in 0..1 + t % 5 {
            combo.push(gauss(rng), vector_in_ball(cfg.d, 1.5, rng));
        }
        lowest = lowest.min(exp_gram(&combo, &combo)?.re);
    }
    Ok(vec![CheckRecord::predicate(
        "min_self_gram",
        lowest >= cfg.tolerances.gram_floor,
        lowest,
        cfg.tolerances.gram_floor,
    )])
}

fn check_ccr(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let mut worst = 0.0;
    for _ in 0..cfg.checks.trials {
        let (f, g) = (
            vector_in_ball(cfg.d, 1.5, rng),
            vector_in_ball(cfg.d, 1.5, rng),
        );
        let psi = FockVector64::random(cfg.d, cfg.m, cfg.m - 2, rng)?;
        let lhs =
            &annihilate(&f, &create(&g, &psi)?.value)? - &create(&g, &annihilate(&f, &psi)?)?.value;
        worst = max_of([worst, lhs.distance(&psi.scale(f.inner(&g)?))? / psi.norm()]);
    }
    Ok(vec![CheckRecord::bound(
        "relative_residual",
        worst,
        cfg.tolerances.algebraic,
    )])
}

fn check_adjoint_pairs(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (d, m) = (cfg.d, cfg.m);
    let (mut ladder, mut grad, mut shift, mut v) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..cfg.checks.trials {
        let f = vector_in_ball(d, 1.5, rng);
        let (psi, phi) = (
            FockVector64::random(d, m, m - 1, rng)?,
            FockVector64::random(d, m, m, rng)?,
        );
        let lhs = create(&f, &psi)?.value.inner(&phi)?;
        ladder = max_of([ladder, (lhs - psi.inner(&annihilate(&f, &phi)?)?).norm()]);

        let x = MarkedFock64::random(d, m, m - 1, rng)?;
        let lhs = grad_plus(&x)?.value.inner(&phi)?;
        grad = max_of([grad, (lhs - x.inner(&grad_minus(&phi)?.value)?).norm()]);

        let (g, h) = (vector_in_ball(d, 1.5, rng), vector_in_ball(d, 1.5, rng));
        let (a, b) = (ExpCombo::single(g.clone()), ExpCombo::single(h.clone()));
        let lhs = exp_gram(&exp_shift_combo(&f, &a, ShiftMode::U)?, &b)?;
        let rhs = exp_gram(&a, &exp_shift_combo(&f, &b, ShiftMode::UDagger)?)?;
        shift = max_of([shift, (lhs - rhs).norm() / lhs.norm().max(1.0)]);

        let t: f64 = rng.random_range(-2.0..2.0);
        let pair = ProductCombo::single(g, h);
        let lhs = product_gram(&v_map(t, &ExpCombo::single(f.clone())), &pair)?;
        let rhs = exp_gram(&ExpCombo::single(f), &v_map_adjoint(t, &pair)?)?;
        v = max_of([v, (lhs - rhs).norm() / lhs.norm().max(1.0)]);
    }
    let tol = cfg.tolerances.algebraic;
    Ok(vec![
        CheckRecord::bound("annihilate_create", ladder, tol),
        CheckRecord::bound("grad_minus_grad_plus", grad, tol),
        CheckRecord::bound("shift", shift, tol),
        CheckRecord::bound("v_map", v, tol),
    ])
}

/// Norms of `∇⁻_n`, `∇⁺_n`, the isometry `W_n` and the factorizations through `√N`.
fn check_spectral(cfg: &RunConfig, _: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (mut minus, mut plus, mut w_res, mut fact_minus, mut fact_plus) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for d in 1..=cfg.checks.spectral_max_d {
        for n in 0..=cfg.checks.spectral_max_level {
            let gp = operator_matrix::<f64>(&LevelOp::GradPlus, n, d)?;
            plus = max_of([plus, (gp.op_norm() - ((n + 1) as f64).sqrt()).abs()]);
            if n == 0 {
                continue;
            }
            let gm = operator_matrix::<f64>(&LevelOp::GradMinus, n, d)?;
            minus = max_of([minus, (gm.op_norm() - (n as f64).sqrt()).abs()]);
            let w = operator_matrix::<f64>(&LevelOp::W, n, d)?;
            w_res = max_of([w_res, w.unitarity_residual()]);
            let sqrt_n = Complex64::new((n as f64).sqrt(), 0.0);
            fact_minus = max_of([fact_minus, gm.distance(&w.scale(sqrt_n))?]);
            let gp_below = operator_matrix::<f64>(&LevelOp::GradPlus, n - 1, d)?;
            fact_plus = max_of([fact_plus, gp_below.distance(&w.adjoint().scale(sqrt_n))?]);
        }
    }
    let t = &cfg.tolerances;
    Ok(vec![
        CheckRecord::bound("grad_minus_norm", minus, t.spectral),
        CheckRecord::bound("grad_plus_norm", plus, t.spectral),
        CheckRecord::bound("w_isometry", w_res, t.algebraic),
        CheckRecord::bound("grad_minus_is_w_sqrt_n", fact_minus, t.algebraic),
        CheckRecord::bound("grad_plus_is_sqrt_n_w_adjoint", fact_plus, t.algebraic),
    ])
}

fn check_number(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (mut worst, mut semigroup) = (0.0, 0.0);
    for _ in 0..cfg.checks.trials {
        let psi = FockVector64::random(cfg.d, cfg.m, cfg.m, rng)?;
        let nn = grad_plus(&grad_minus(&psi)?.value)?;
        worst = max_of([
            worst,
            nn.value.distance(&number_apply(&psi))? + nn.dropped_norm,
        ]);
        let (s, t) = (rng.random_range(0.0..2.0), rng.random_range(0.0..2.0));
        let a = number_semigroup(&number_semigroup(&psi, s)?, t)?;
        semigroup = max_of([semigroup, a.distance(&number_semigroup(&psi, s + t)?)?]);
    }
    Ok(vec![
        CheckRecord::bound("factorization", worst, cfg.tolerances.algebraic),
        CheckRecord::bound("semigroup", semigroup, cfg.tolerances.algebraic),
    ])
}

/// `<Qψ, Qφ>₁ = <ψ, φ>` and the integral representation of `(1+n)^{-1/2}`.
fn check_q_map(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let mut worst = 0.0;
    for _ in 0..cfg.checks.trials {
        let (psi, phi) = (
            FockVector64::random(cfg.d, cfg.m, cfg.m, rng)?,
            FockVector64::random(cfg.d, cfg.m, cfg.m, rng)?,
        );
        worst = max_of([
            worst,
            (graph_inner(&q_map(&psi), &q_map(&phi))? - psi.inner(&phi)?).norm(),
        ]);
    }
    // π^{-1/2} ∫_0^∞ t^{-1/2} e^{-(1+n)t} dt with t = u², u = s/(1-s)
    let mut quad = 0.0;
    for n in 0..=cfg.checks.spectral_max_level {
        let k = (n + 1) as f64;
        let integrand = |s: f64| {
            let u = s / (1.0 - s);
            2.0 * (-k * u * u).exp() / (1.0 - s).powi(2)
        };
        let value = quadrature::double_exponential::integrate(integrand, 0.0, 1.0, 1e-12).integral
            / std::f64::consts::PI.sqrt();
        quad = max_of([quad, (value - 1.0 / k.sqrt()).abs()]);
    }
    Ok(vec![
        CheckRecord::bound("isometry", worst, cfg.tolerances.algebraic),
        CheckRecord::bound("quadrature", quad, cfg.tolerances.quadrature),
    ])
}

fn check_ito_skorohod(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (mut worst, mut violations) = (0.0, 0usize);
    for _ in 0..cfg.checks.trials {
        let (a, b) = (
            MarkedFock64::random(cfg.d, cfg.m, cfg.m - 1, rng)?,
            MarkedFock64::random(cfg.d, cfg.m, cfg.m - 1, rng)?,
        );
        let rep = ito_skorohod_abstract(&a, &b)?;
        worst = max_of([worst, rep.residual() / rep.lhs.norm().max(1.0)]);
        if !rep.is_contraction(cfg.tolerances.algebraic) {
            violations += 1;
        }
    }
    Ok(vec![
        CheckRecord::bound("relative_residual", worst, cfg.tolerances.relative),
        CheckRecord::predicate(
            "contraction_violations",
            violations == 0,
            violations as f64,
            0.0,
        ),
    ])
}

/// `<V_t e(f), e(g)⊗e(h)> = exp(<f,g> + t<f,h>)` and `<e(f), V_t†(e(g)⊗e(h))>` agree.
fn check_exp_adjunction(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (mut closed, mut adj) = (0.0, 0.0);
    for _ in 0..cfg.checks.trials {
        let (f, g, h) = (
            vector_in_ball(cfg.d, 1.5, rng),
            vector_in_ball(cfg.d, 1.5, rng),
            vector_in_ball(cfg.d, 1.5, rng),
        );
        let t: f64 = rng.random_range(-2.0..2.0);
        let pair = ProductCombo::single(g.clone(), h.clone());
        let lhs = product_gram(&v_map(t, &ExpCombo::single(f.clone())), &pair)?;
        let formula = (f.inner(&g)? + f.inner(&h)? * t).exp();
        let rhs = exp_gram(&ExpCombo::single(f), &v_map_adjoint(t, &pair)?)?;
        let scale = lhs.norm().max(1.0);
        closed = max_of([closed, (lhs - formula).norm() / scale]);
        adj = max_of([adj, (lhs - rhs).norm() / scale]);
    }
    Ok(vec![
        CheckRecord::bound("closed_form", closed, cfg.tolerances.algebraic),
        CheckRecord::bound("adjoint", adj, cfg.tolerances.algebraic),
    ])
}

/// Central differences of `e(g+tf)`, `U†(tf)`, `V_t` and `Γ(e^{itA})` at `t = 0`.
fn check_derivatives(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let d = cfg.d;
    let m = 12;
    let (f, g, h) = (
        HVector::random(d, 0.8, rng),
        HVector::random(d, 0.7, rng),
        HVector::random(d, 0.9, rng),
    );
    let range = cfg.tolerances.fd_ratio;

    let target = create(&f, &exp_vector(&g, m)?.value)?.value;
    let exp_fd = fd_ratio(|t| {
        let p = exp_vector(&g.add(&f.scale(Complex64::new(t, 0.0)))?, m)?.value;
        let q = exp_vector(&g.add(&f.scale(Complex64::new(-t, 0.0)))?, m)?.value;
        let fd = (&p - &q).scale(Complex64::new(0.5 / t, 0.0));
        Ok((0..m)
            .map(|k| fd.level(k).distance(target.level(k)).powi(2))
            .sum::<f64>()
            .sqrt())
    })?;

    // <e(h), U†(tf) e(g)> against <e(h), a†(f) e(g)> = <h,f> e^{<h,g>}
    let eh = ExpCombo::single(h.clone());
    let want = h.inner(&f)? * h.inner(&g)?.exp();
    let shift_fd = fd_ratio(|t| {
        let p = exp_gram(
            &eh,
            &exp_shift_combo(
                &f.scale(Complex64::new(t, 0.0)),
                &ExpCombo::single(g.clone()),
                ShiftMode::UDagger,
            )?,
        )?;
        let q = exp_gram(
            &eh,
            &exp_shift_combo(
                &f.scale(Complex64::new(-t, 0.0)),
                &ExpCombo::single(g.clone()),
                ShiftMode::UDagger,
            )?,
        )?;
        Ok(((p - q) / (2.0 * t) - want).norm())
    })?;

    // <e(g)⊗h', V_t e(f)> against <e(g)⊗h', ∇⁻e(f)>
    let mt = 30;
    let (ef, eg) = (exp_vector(&f, mt)?.value, exp_vector(&g, mt)?.value);
    let want = MarkedFock::product(&eg, &h)?.inner(&grad_minus(&ef)?.value)?;
    let pair = ProductCombo::single(g.clone(), h.clone());
    let v_fd = fd_ratio(|t| {
        let p = product_gram(&pair, &v_map(t, &ExpCombo::single(f.clone())))?;
        let q = product_gram(&pair, &v_map(-t, &ExpCombo::single(f.clone())))?;
        Ok(((p - q) / (2.0 * t) - want).norm())
    })?;

    let a = hermitian(d, rng);
    let psi = FockVector64::random(d, cfg.m, cfg.m, rng)?;
    let target = conservation(&a, &psi)?.scale(Complex64::new(0.0, 1.0));
    let gamma_fd = fd_ratio(|t| {
        let p = second_quantize(&unitary_group(&a, t), &psi)?;
        let q = second_quantize(&unitary_group(&a, -t), &psi)?;
        Ok((&p - &q)
            .scale(Complex64::new(0.5 / t, 0.0))
            .distance(&target)?)
    })?;

    Ok(vec![
        CheckRecord::within_range("exp_vector_ratio", exp_fd, range),
        CheckRecord::within_range("shift_ratio", shift_fd, range),
        CheckRecord::within_range("v_map_ratio", v_fd, range),
        CheckRecord::within_range("second_quantization_ratio", gamma_fd, range),
    ])
}

fn check_second_quantization(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let d = cfg.d;
    let (mut gamma, mut lambda) = (0.0, 0.0);
    for _ in 0..cfg.checks.trials {
        let raw: Vec<Complex64> = (0..d * d).map(|_| gauss(rng)).collect();
        let raw = DenseOperator::from_row_major(d, d, raw)?;
        let t = raw.scale(Complex64::new(0.9 / raw.op_norm(), 0.0));
        let f = vector_in_ball(d, 1.0, rng);
        let tf = HVector::new(t.apply(f.coeffs())?);
        let lhs = second_quantize(&t, &exp_vector(&f, cfg.m)?.value)?;
        gamma = max_of([gamma, lhs.distance(&exp_vector(&tf, cfg.m)?.value)?]);

        let a = hermitian(d, rng);
        let g = vector_in_ball(d, 1.0, rng);
        let mt = 30;
        let lhs = exp_vector(&f, mt)?
            .value
            .inner(&conservation(&a, &exp_vector(&g, mt)?.value)?)?;
        let rhs = f.inner(&HVector::new(a.apply(g.coeffs())?))? * f.inner(&g)?.exp();
        lambda = max_of([lambda, (lhs - rhs).norm() / rhs.norm().max(1.0)]);
    }
    Ok(vec![
        CheckRecord::bound("gamma_on_exponentials", gamma, cfg.tolerances.algebraic),
        CheckRecord::bound("lambda_matrix_elements", lambda, cfg.tolerances.algebraic),
    ])
}

/// `∇⁻ f^{⊙n} = n f^{⊙(n-1)} ⊗ f` and the `Γ̂` functionals against their `⊗`-side values.
fn check_normalization_ledger(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let (mut powers, mut functionals) = (0.0, 0.0);
    for _ in 0..cfg.checks.trials {
        let f = vector_in_ball(cfg.d, 1.5, rng);
        for n in 1..=cfg.m {
            let lhs = ladder::grad_minus_level(&normalization::to_odot(&tensor_power(&f, n)?))?
                .expect("n >= 1");
            let rhs = MarkedTensor::product(
                &normalization::to_odot(&tensor_power(&f, n - 1)?)
                    .scale(Complex64::new(n as f64, 0.0)),
                &f,
            )?;
            powers = max_of([powers, lhs.distance(&rhs) / rhs.norm().max(1.0)]);
        }
        let psi = FockVector64::random(cfg.d, cfg.m, cfg.m, rng)?;
        let hat = normalization::to_hat(&psi);
        let g = grad_minus(&psi)?;
        functionals = max_of([
            functionals,
            (normalization::hat_domain_functional(&hat) - g.graph_functional).abs(),
            (normalization::hat_norm_sqr(&hat) - psi.norm_sqr()).abs(),
            (g.value.norm_sqr() - g.graph_functional).abs(),
        ]);
    }
    Ok(vec![
        CheckRecord::bound("odot_powers", powers, cfg.tolerances.algebraic),
        CheckRecord::bound("domain_functionals", functionals, cfg.tolerances.algebraic),
    ])
}

/// `Γ(H₁ ⊕ H₂) ≅ Γ(H₁) ⊗ Γ(H₂)` and the split of `∇^±`.
fn check_split(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckRecord>> {
    let d = cfg.d.max(2);
    let p = Partition::new(d, &(0..d / 2).collect::<Vec<_>>())?;
    let (mut unitary, mut exps, mut gm, mut gp) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..cfg.checks.trials {
        let (psi, phi) = (
            FockVector64::random(d, cfg.m, cfg.m, rng)?,
            FockVector64::random(d, cfg.m, cfg.m, rng)?,
        );
        let (x, y) = (split_iso(&psi, &p)?, split_iso(&phi, &p)?);
        unitary = max_of([
            unitary,
            (x.inner(&y)? - psi.inner(&phi)?).norm(),
            merge(&x, &p)?.distance(&psi)?,
        ]);
        gm = max_of([gm, split_grad_minus_residual(&psi, &p)?]);
        gp = max_of([
            gp,
            split_grad_plus_residual(&MarkedFock64::random(d, cfg.m, cfg.m - 1, rng)?, &p)?,
        ]);

        let f = vector_in_ball(d, 1.2, rng);
        let (f1, f2): (Vec<_>, Vec<_>) = (
            p.first().iter().map(|&i| f.get(i)).collect(),
            p.second().iter().map(|&i| f.get(i)).collect(),
        );
        let lhs = split_iso(&exp_vector(&f, cfg.m)?.value, &p)?;
        let rhs = SplitFock::product(
            &exp_vector(&HVector::new(f1), cfg.m)?.value,
            &exp_vector(&HVector::new(f2), cfg.m)?.value,
            cfg.m,
        )?;
        for n1 in 0..=cfg.m {
            for n2 in 0..=cfg.m - n1 {
                let block = lhs
                    .block(n1, n2)
                    .iter()
                    .zip(rhs.block(n1, n2))
                    .map(|(a, b)| (a - b).norm());
                exps = max_of(std::iter::once(exps).chain(block));
            }
        }
    }
    let tol = cfg.tolerances.algebraic;
    Ok(vec![
        CheckRecord::bound("unitary", unitary, tol),
        CheckRecord::bound("exponential_factorization", exps, tol),
        CheckRecord::bound("grad_minus", gm, tol),
        CheckRecord::bound("grad_plus", gp, tol),
    ])
}
