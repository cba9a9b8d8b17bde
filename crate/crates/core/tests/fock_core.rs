mod common;

use chaoskit::fock::*;
use chaoskit::Error;
use common::*;
use num_complex::Complex64;

fn hv(v: &[(f64, f64)]) -> HVector<f64> {
    HVector::new(v.iter().map(|&(a, b)| c(a, b)).collect())
}

#[test]
fn inner_product_is_conjugate_linear_on_the_left() {
    let e = hv(&[(1.0, 0.0), (0.0, 0.0)]);
    assert_eq!(e.inner(&e).unwrap(), c(1.0, 0.0));
    let f = hv(&[(0.0, 1.0), (0.0, 0.0)]);
    assert_eq!(f.inner(&e).unwrap(), c(0.0, -1.0));
    let mut r = rng(1);
    let (f, g) = (vec_in_ball(5, 2.0, &mut r), vec_in_ball(5, 2.0, &mut r));
    let naive: Complex64 = (0..5).map(|i| f.get(i).conj() * g.get(i)).sum();
    assert!((f.inner(&g).unwrap() - naive).norm() <= 1e-14);
    assert!(matches!(
        f.inner(&HVector::zeros(4)),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn tensor_power_matches_dense_oracle() {
    let f = hv(&[(0.3, -0.2)]);
    assert_eq!(tensor_power(&f, 0).unwrap().coeffs(), &[c(1.0, 0.0)]);
    let one = hv(&[(1.0, 0.0)]);
    let t = tensor_power(&one, 3).unwrap();
    assert_eq!(t.coeffs().len(), 1);
    assert!((t.coeffs()[0] - c(1.0, 0.0)).norm() < 1e-15);

    let f = hv(&[(0.6, 0.0), (0.8, 0.0)]);
    let t = tensor_power(&f, 4).unwrap();
    assert!((t.norm() - 1.0).abs() < 1e-14);
    let dense = Dense::power(f.coeffs(), 4).project();
    assert!(max_diff(t.coeffs(), &dense) < 1e-14);

    let mut r = rng(2);
    for _ in 0..20 {
        let (f, g) = (vec_in_ball(3, 1.3, &mut r), vec_in_ball(3, 1.3, &mut r));
        for n in 0..6 {
            let lhs = tensor_power(&f, n)
                .unwrap()
                .inner(&tensor_power(&g, n).unwrap());
            let rhs = f.inner(&g).unwrap().powu(n as u32);
            assert!((lhs - rhs).norm() < 1e-13);
            let dense = Dense::power(f.coeffs(), n).project();
            assert!(max_diff(tensor_power(&f, n).unwrap().coeffs(), &dense) < 1e-13);
        }
    }
}

#[test]
fn exponential_vectors_and_their_gram_kernel() {
    let zero = HVector::<f64>::zeros(3);
    let e0 = exp_vector(&zero, 6).unwrap();
    assert_eq!(e0.value, FockVector::vacuum(3, 6).unwrap());
    assert_eq!(e0.tail_bound, 0.0);

    let one = hv(&[(1.0, 0.0)]);
    let e = exp_vector(&one, 25).unwrap();
    let gram = e.value.inner(&e.value).unwrap();
    assert!((gram.re - std::f64::consts::E).abs() <= e.tail_bound + 1e-15);
    assert!(e.tail_bound < 1e-25);

    let mut r = rng(3);
    for _ in 0..50 {
        let (f, g) = (vec_in_ball(3, 1.0, &mut r), vec_in_ball(3, 1.0, &mut r));
        let (ef, eg) = (exp_vector(&f, 30).unwrap(), exp_vector(&g, 30).unwrap());
        let exact = f.inner(&g).unwrap().exp();
        assert!((ef.value.inner(&eg.value).unwrap() - exact).norm() <= 1e-12);
    }
    // the level-n block is f^{⊗n}/√n!
    let f = vec_in_ball(2, 1.0, &mut r);
    let e = exp_vector(&f, 5).unwrap();
    for n in 0..=5 {
        let t = tensor_power(&f, n)
            .unwrap()
            .scale(c(1.0 / factorial(n).sqrt(), 0.0));
        assert!(e.value.level(n).distance(&t) < 1e-15);
    }
}

#[test]
fn exponential_tail_is_the_series_remainder() {
    for &x in &[0.1f64, 1.0, 2.25, 5.0] {
        for m in [0usize, 3, 10] {
            let partial: f64 = (0..=m).map(|n| x.powi(n as i32) / factorial(n)).sum();
            let rem = x.exp() - partial;
            assert!((exp_tail(x, m) - rem).abs() <= 1e-14 * x.exp());
        }
    }
}

#[test]
fn exp_gram_examples() {
    let zero = ExpCombo::single(HVector::<f64>::zeros(2));
    assert_eq!(exp_gram(&zero, &zero).unwrap(), c(1.0, 0.0));
    let f = hv(&[(1.0, 0.0), (0.0, 0.0)]);
    let g = hv(&[(0.0, 0.0), (0.0, 2.0)]);
    let (a, b) = (ExpCombo::single(f.clone()), ExpCombo::single(g.clone()));
    assert!((exp_gram(&a, &b).unwrap() - c(1.0, 0.0)).norm() < 1e-15);

    let mut r = rng(4);
    for _ in 0..100 {
        let (f, g) = (vec_in_ball(3, 1.5, &mut r), vec_in_ball(3, 1.5, &mut r));
        let mut combo = ExpCombo::new();
        combo.push(c(1.0, 0.0), f.clone());
        combo.push(c(-1.0, 0.0), g.clone());
        let self_gram = exp_gram(&combo, &combo).unwrap();
        let formula =
            f.norm().powi(2).exp() + g.norm().powi(2).exp() - 2.0 * f.inner(&g).unwrap().exp().re;
        assert!((self_gram.re - formula).abs() < 1e-12 * formula.abs().max(1.0));
        assert!(self_gram.im.abs() < 1e-12);
        // eigenvalues of the 2×2 kernel matrix are non-negative
        let (k11, k22, k12) = (
            f.norm().powi(2).exp(),
            g.norm().powi(2).exp(),
            f.inner(&g).unwrap().exp(),
        );
        let tr = k11 + k22;
        let det = k11 * k22 - k12.norm_sqr();
        let lo = 0.5 * (tr - (tr * tr - 4.0 * det).max(0.0).sqrt());
        assert!(lo >= -1e-12 * tr);
        assert!(self_gram.re >= -1e-12);
    }
}

#[test]
fn annihilation_examples() {
    let mut r = rng(5);
    let f = vec_in_ball(3, 1.0, &mut r);
    let vac = FockVector::vacuum(3, 4).unwrap();
    assert!(annihilate(&f, &vac).unwrap().norm() == 0.0);

    let one = hv(&[(1.0, 0.0)]);
    let e = exp_vector(&one, 8).unwrap().value;
    let a = annihilate(&one, &e).unwrap();
    for n in 0..8 {
        assert!(a.level(n).distance(e.level(n)) < 1e-14);
    }
    assert!(a.level(8).is_zero());

    // a(f) g^{⊙3} = 3<f,g> g^{⊙2}, read through f^{⊙n} = √n! f^{⊗n}
    for _ in 0..10 {
        let (f, g) = (vec_in_ball(2, 1.5, &mut r), vec_in_ball(2, 1.5, &mut r));
        let g3 = FockVector::from_level(tensor_power(&g, 3).unwrap(), 3).unwrap();
        let lhs = annihilate(&f, &g3)
            .unwrap()
            .level(2)
            .scale(c(factorial(3).sqrt(), 0.0));
        let rhs = tensor_power(&g, 2)
            .unwrap()
            .scale(f.inner(&g).unwrap() * 3.0 * factorial(2).sqrt());
        assert!(lhs.distance(&rhs) < 1e-13);
    }
}

#[test]
fn ladder_operators_match_dense_oracles() {
    let mut r = rng(6);
    for d in 1..=3 {
        for n in 0..=4 {
            let psi = SymTensor::random(d, n, &mut r).unwrap();
            let f = vec_in_ball(d, 1.5, &mut r);
            let dense = Dense::from_sym(&psi);
            assert!(max_diff(&dense.project(), psi.coeffs()) < 1e-13);
            // a†(f) = √(n+1) Sym(f ⊗ ψ)
            let up = Dense::prepend(&dense, f.coeffs())
                .symmetrize()
                .scale(((n + 1) as f64).sqrt());
            let ours = chaoskit::fock::ladder::raise_level(&f, &psi).unwrap();
            assert!(max_diff(ours.coeffs(), &up.project()) < 1e-12);
            if n > 0 {
                // a(f) = √n (<f| ⊗ I)
                let down = dense.contract_first(f.coeffs()).scale((n as f64).sqrt());
                let ours = chaoskit::fock::ladder::lower_level(&f, &psi)
                    .unwrap()
                    .unwrap();
                assert!(max_diff(ours.coeffs(), &down.project()) < 1e-12);
                // ∇⁻ ψ = √n ψ read in H_s^{⊗(n-1)} ⊗ H, the last slot free
                let g = chaoskit::fock::ladder::grad_minus_level(&psi)
                    .unwrap()
                    .unwrap();
                for j in 0..d {
                    let e = HVector::<f64>::basis(d, j);
                    // contracting the free slot equals contracting any slot by symmetry
                    let slot = dense
                        .contract_first(e.coeffs())
                        .scale((n as f64).sqrt())
                        .project();
                    assert!(max_diff(g.slot(j).coeffs(), &slot) < 1e-12);
                }
            }
        }
    }
}

#[test]
fn creation_examples() {
    let f = hv(&[(0.5, 0.25), (-1.0, 0.0)]);
    let vac = FockVector::vacuum(2, 3).unwrap();
    let out = create(&f, &vac).unwrap();
    assert_eq!(out.dropped_norm, 0.0);
    assert_eq!(out.value.level(1).coeffs(), f.coeffs());
    assert!(matches!(
        create(&f, &FockVector::vacuum(2, 0).unwrap()),
        Err(Error::Unsupported(_))
    ));

    let mut r = rng(7);
    for _ in 0..50 {
        let d = 3;
        let f = vec_in_ball(d, 1.5, &mut r);
        let psi = fock(d, 6, 5, &mut r);
        let phi = fock(d, 6, 6, &mut r);
        let lhs = create(&f, &psi).unwrap();
        assert_eq!(lhs.dropped_norm, 0.0);
        let rhs = annihilate(&f, &phi).unwrap();
        assert!((lhs.value.inner(&phi).unwrap() - psi.inner(&rhs).unwrap()).norm() < 1e-13);
    }
    let psi = fock(2, 3, 3, &mut r);
    assert!(create(&f, &psi).unwrap().dropped_norm > 0.0);
}

/// `‖a†(f)e_M(g) - (e_M(g+tf) - e_M(g-tf))/2t‖` for halving steps.
fn central_difference_ratio(res: impl Fn(f64) -> f64) -> f64 {
    res(2e-2) / res(1e-2)
}

#[test]
fn creation_is_the_derivative_of_exponential_vectors() {
    let mut r = rng(8);
    for _ in 0..5 {
        let (f, g) = (vec_in_ball(2, 1.0, &mut r), vec_in_ball(2, 1.0, &mut r));
        let m = 12;
        let target = create(&f, &exp_vector(&g, m).unwrap().value).unwrap().value;
        let res = |t: f64| {
            let p = exp_vector(&g.add(&f.scale(c(t, 0.0))).unwrap(), m)
                .unwrap()
                .value;
            let q = exp_vector(&g.add(&f.scale(c(-t, 0.0))).unwrap(), m)
                .unwrap()
                .value;
            let fd = (&p - &q).scale(c(0.5 / t, 0.0));
            // compare below the top level, which the truncated creation drops
            (0..m)
                .map(|k| fd.level(k).distance(target.level(k)).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        let ratio = central_difference_ratio(res);
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn canonical_commutation_relations() {
    let mut r = rng(9);
    for _ in 0..200 {
        let d = 1 + (r.random::<u32>() % 4) as usize;
        let m = 6;
        let (f, g) = (vec_in_ball(d, 1.5, &mut r), vec_in_ball(d, 1.5, &mut r));
        let psi = fock(d, m, m - 2, &mut r);
        let a_adag = annihilate(&f, &create(&g, &psi).unwrap().value).unwrap();
        let adag_a = create(&g, &annihilate(&f, &psi).unwrap()).unwrap().value;
        let lhs = &a_adag - &adag_a;
        let rhs = psi.scale(f.inner(&g).unwrap());
        assert!(lhs.distance(&rhs).unwrap() <= 1e-12 * psi.norm());
    }
}

use rand::Rng;

#[test]
fn exponential_shifts() {
    let mut r = rng(10);
    let g = vec_in_ball(3, 1.0, &mut r);
    let a = ExpCombo::single(g.clone());
    let zero = HVector::zeros(3);
    assert_eq!(exp_shift_combo(&zero, &a, ShiftMode::U).unwrap(), a);
    let f = vec_in_ball(3, 1.0, &mut r);
    let shifted = exp_shift_combo(&f, &ExpCombo::single(zero.clone()), ShiftMode::UDagger).unwrap();
    assert_eq!(shifted.terms[0].1, f);
    assert_eq!(shifted.terms[0].0, c(1.0, 0.0));

    for _ in 0..100 {
        let (f, g, h) = (
            vec_in_ball(3, 1.5, &mut r),
            vec_in_ball(3, 1.5, &mut r),
            vec_in_ball(3, 1.5, &mut r),
        );
        let t: f64 = r.random_range(-2.0..2.0);
        let th = h.scale(c(t, 0.0));
        let lhs = exp_gram(
            &exp_shift_combo(&th, &ExpCombo::single(f.clone()), ShiftMode::U).unwrap(),
            &ExpCombo::single(g.clone()),
        );
        let rhs = exp_gram(
            &ExpCombo::single(f.clone()),
            &exp_shift_combo(&th, &ExpCombo::single(g.clone()), ShiftMode::UDagger).unwrap(),
        );
        let (lhs, rhs) = (lhs.unwrap(), rhs.unwrap());
        assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }

    let emb = EmbeddedCombo::new(ExpCombo::single(g.clone()), 3, 10).unwrap();
    let out = exp_shift(&f, &ShiftOperand::Embedded(emb), ShiftMode::UDagger).unwrap();
    let ShiftOperand::Embedded(out) = out else {
        panic!("kind preserved")
    };
    let want = exp_vector(&g.add(&f).unwrap(), 10).unwrap().value;
    assert!(out.vector.distance(&want).unwrap() < 1e-14);
    let bare = ShiftOperand::Vector(FockVector::vacuum(3, 2).unwrap());
    assert!(matches!(
        exp_shift(&f, &bare, ShiftMode::U),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn v_map_and_its_adjoint() {
    let mut r = rng(11);
    let f = vec_in_ball(2, 1.0, &mut r);
    let v0 = v_map(0.0, &ExpCombo::single(f.clone()));
    assert_eq!(v0.terms[0].2, HVector::zeros(2));

    for _ in 0..100 {
        let (f, g, h) = (
            vec_in_ball(3, 1.5, &mut r),
            vec_in_ball(3, 1.5, &mut r),
            vec_in_ball(3, 1.5, &mut r),
        );
        let t: f64 = r.random_range(-2.0..2.0);
        let vf = v_map(t, &ExpCombo::single(f.clone()));
        let gh = ProductCombo::single(g.clone(), h.clone());
        let lhs = product_gram(&vf, &gh).unwrap();
        let closed = (f.inner(&g).unwrap() + f.inner(&h).unwrap() * t).exp();
        assert!((lhs - closed).norm() <= 1e-12 * closed.norm().max(1.0));
        let rhs = exp_gram(
            &ExpCombo::single(f.clone()),
            &v_map_adjoint(t, &gh).unwrap(),
        )
        .unwrap();
        assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
    }
}

#[test]
fn universal_annihilation() {
    let vac = FockVector::<f64>::vacuum(2, 4).unwrap();
    let g = grad_minus(&vac).unwrap();
    assert_eq!(g.value.norm(), 0.0);
    assert_eq!(g.graph_functional, 0.0);

    let mut r = rng(12);
    let f = vec_in_ball(3, 1.2, &mut r);
    let m = 7;
    let e = exp_vector(&f, m).unwrap().value;
    let lhs = grad_minus(&e).unwrap().value;
    let rhs = MarkedFock::product(&e, &f).unwrap();
    for n in 0..m {
        assert!(lhs.levels()[n].distance(&rhs.levels()[n]) < 1e-13);
    }

    // ∇⁻_3 f^{⊙3} = 3 f^{⊙2} ⊗ f
    let f = vec_in_ball(2, 1.5, &mut r);
    let p3 = normalization::to_odot(&tensor_power(&f, 3).unwrap());
    let lhs = chaoskit::fock::ladder::grad_minus_level(&p3)
        .unwrap()
        .unwrap();
    let p2 = normalization::to_odot(&tensor_power(&f, 2).unwrap()).scale(c(3.0, 0.0));
    let rhs = MarkedTensor::product(&p2, &f).unwrap();
    assert!(lhs.distance(&rhs) < 1e-13);

    for _ in 0..20 {
        let psi = fock(3, 5, 5, &mut r);
        let g = grad_minus(&psi).unwrap();
        let functional: f64 = (0..=5).map(|n| n as f64 * psi.level(n).norm_sqr()).sum();
        assert!((g.graph_functional - functional).abs() < 1e-13);
        assert!((g.value.norm_sqr() - functional).abs() < 1e-13);
        let hat = normalization::to_hat(&psi);
        assert!((normalization::hat_domain_functional(&hat) - functional).abs() < 1e-13);
        assert!((normalization::hat_norm_sqr(&hat) - psi.norm_sqr()).abs() < 1e-13);
        assert!(
            normalization::from_hat(&hat)
                .unwrap()
                .distance(&psi)
                .unwrap()
                < 1e-14
        );
    }
}

#[test]
fn universal_creation() {
    let g = hv(&[(0.0, 1.0), (0.5, 0.0)]);
    let vac = FockVector::vacuum(2, 3).unwrap();
    let phi = MarkedFock::product(&vac, &g).unwrap();
    assert_eq!(grad_plus(&phi).unwrap().value.level(1).coeffs(), g.coeffs());

    let mut r = rng(13);
    for _ in 0..50 {
        let phi = marked(3, 6, 5, &mut r);
        let psi = fock(3, 6, 6, &mut r);
        let up = grad_plus(&phi).unwrap();
        assert_eq!(up.dropped_norm, 0.0);
        let down = grad_minus(&psi).unwrap().value;
        assert!((up.value.inner(&psi).unwrap() - phi.inner(&down).unwrap()).norm() < 1e-13);
    }

    // ∇⁺(e(f) ⊗ g) = a†(g) e(f)
    let (f, g) = (vec_in_ball(3, 1.0, &mut r), vec_in_ball(3, 1.0, &mut r));
    let e = exp_vector(&f, 6).unwrap().value;
    let lhs = grad_plus(&MarkedFock::product(&e, &g).unwrap())
        .unwrap()
        .value;
    let rhs = create(&g, &e).unwrap().value;
    assert!(lhs.distance(&rhs).unwrap() < 1e-14);

    // ‖∇⁺_n(f^{⊗n} ⊗ f)‖ = √(n+1) ‖f^{⊗n} ⊗ f‖ for unit f
    let f = vec_in_ball(3, 1.0, &mut r);
    let f = f.scale(c(1.0 / f.norm(), 0.0));
    for n in 0..6 {
        let x = MarkedTensor::product(&tensor_power(&f, n).unwrap(), &f).unwrap();
        let y = chaoskit::fock::ladder::grad_plus_level(&x).unwrap();
        assert!((y.norm() - ((n + 1) as f64).sqrt() * x.norm()).abs() < 1e-13);
    }

    // ∇⁺_n(f^{⊙n} ⊗ g) = Symm(f^{⊙n}, g) = √(n+1)-scaled dense symmetrization of f^{⊗n} ⊗ g
    let g = vec_in_ball(3, 1.0, &mut r);
    for n in 0..4 {
        let x = MarkedTensor::product(&tensor_power(&f, n).unwrap(), &g).unwrap();
        let y = chaoskit::fock::ladder::grad_plus_level(&x).unwrap();
        let dense = Dense::power(f.coeffs(), n)
            .prepend(g.coeffs())
            .symmetrize()
            .scale(((n + 1) as f64).sqrt());
        assert!(max_diff(y.coeffs(), &dense.project()) < 1e-13);
    }
}

#[test]
fn level_operator_spectra() {
    for d in 1..=4 {
        for n in 1..=6 {
            if level_dim(d, n).unwrap() > 200 {
                continue;
            }
            let gm = operator_matrix::<f64>(&LevelOp::GradMinus, n, d).unwrap();
            assert!(
                (gm.op_norm() - (n as f64).sqrt()).abs() < 1e-10,
                "d={d} n={n}"
            );
            let w = operator_matrix::<f64>(&LevelOp::W, n, d).unwrap();
            assert!(w.unitarity_residual() <= 1e-12);
            // ∇⁻ = W √N and ∇⁺ = √N W* on the matching levels
            let sqrt_n =
                DenseOperator::identity(level_dim(d, n).unwrap()).scale(c((n as f64).sqrt(), 0.0));
            assert!(gm.distance(&w.matmul(&sqrt_n).unwrap()).unwrap() < 1e-12);
            let gp = operator_matrix::<f64>(&LevelOp::GradPlus, n - 1, d).unwrap();
            assert!(
                gp.distance(&w.adjoint().scale(c((n as f64).sqrt(), 0.0)))
                    .unwrap()
                    < 1e-12
            );
        }
        for n in 0..=5 {
            if level_dim(d, n).unwrap() * d > 200 {
                continue;
            }
            let gp = operator_matrix::<f64>(&LevelOp::GradPlus, n, d).unwrap();
            assert!(
                (gp.op_norm() - ((n + 1) as f64).sqrt()).abs() < 1e-10,
                "d={d} n={n}"
            );
        }
    }
    let m = operator_matrix::<f64>(&LevelOp::GradMinus, 3, 2).unwrap();
    assert!((m.op_norm() - 3f64.sqrt()).abs() < 1e-10);
    let m = operator_matrix::<f64>(&LevelOp::GradPlus, 2, 3).unwrap();
    assert!((m.op_norm() - 3f64.sqrt()).abs() < 1e-10);
    let w4 = operator_matrix::<f64>(&LevelOp::W, 4, 2).unwrap();
    assert!(w4.unitarity_residual() <= 1e-12);
    assert!(matches!(
        LevelOp::<f64>::from_name("nabla_sideways"),
        Err(Error::UnknownOperator(_))
    ));
    assert_eq!(
        LevelOp::<f64>::from_name("grad_minus").unwrap(),
        LevelOp::GradMinus
    );
}

#[test]
fn dense_operator_csv_cells() {
    let a = DenseOperator::from_row_major(1, 2, vec![c(1.5, -2.0), c(0.0, 0.25)]).unwrap();
    let csv = a.to_csv();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(csv.as_bytes());
    let row = reader.records().next().unwrap().unwrap();
    assert_eq!(&row[0], "1.5,-2");
    assert_eq!(&row[1], "0,0.25");
}

#[test]
fn number_operator_and_semigroup() {
    let mut r = rng(14);
    let psi = fock(2, 5, 5, &mut r);
    assert_eq!(number_semigroup(&psi, 0.0).unwrap(), psi);
    let l3 = FockVector::from_level(SymTensor::random(2, 3, &mut r).unwrap(), 5).unwrap();
    let s = number_semigroup(&l3, 2f64.ln()).unwrap();
    assert!(s.distance(&l3.scale(c(0.125, 0.0))).unwrap() < 1e-15);
    assert!(matches!(
        number_semigroup(&psi, -1.0),
        Err(Error::NegativeTime(_))
    ));
    for _ in 0..100 {
        let psi = fock(3, 6, 5, &mut r);
        let n = number_apply(&psi);
        let gg = grad_plus(&grad_minus(&psi).unwrap().value).unwrap();
        assert_eq!(gg.dropped_norm, 0.0);
        assert!(gg.value.distance(&n).unwrap() <= 1e-12);
    }
}

fn hermitian(d: usize, r: &mut rand_chacha::ChaCha8Rng) -> DenseOperator<f64> {
    let raw: Vec<Complex64> = (0..d * d).map(|_| gauss(r)).collect();
    DenseOperator::from_fn(d, d, |i, j| 0.5 * (raw[i * d + j] + raw[j * d + i].conj()))
}

#[test]
fn second_quantization_and_conservation() {
    let mut r = rng(15);
    let d = 3;
    let psi = fock(d, 5, 5, &mut r);
    let id = DenseOperator::identity(d);
    assert!(second_quantize(&id, &psi).unwrap().distance(&psi).unwrap() < 1e-14);
    assert!(
        conservation(&id, &psi)
            .unwrap()
            .distance(&number_apply(&psi))
            .unwrap()
            < 1e-14
    );

    // Γ(T) e(f) = e(Tf) for a contraction T
    let raw_entries: Vec<Complex64> = (0..d * d).map(|_| gauss(&mut r)).collect();
    let raw = DenseOperator::from_row_major(d, d, raw_entries).unwrap();
    let t = raw.scale(c(0.9 / raw.op_norm(), 0.0));
    let f = vec_in_ball(d, 1.3, &mut r);
    let lhs = second_quantize(&t, &exp_vector(&f, 6).unwrap().value).unwrap();
    let tf = HVector::new(t.apply(f.coeffs()).unwrap());
    let rhs = exp_vector(&tf, 6).unwrap().value;
    assert!(lhs.distance(&rhs).unwrap() <= 1e-12);
    let big = raw.scale(c(1.5 / raw.op_norm(), 0.0));
    assert!(matches!(
        second_quantize(&big, &psi),
        Err(Error::NotContraction(_))
    ));
    assert!(matches!(
        conservation(&raw, &psi),
        Err(Error::NotSelfAdjoint(_))
    ));

    // <e(f), Λ(A) e(g)> = <f, Ag> e^{<f,g>}
    let a = hermitian(d, &mut r);
    let (f, g) = (vec_in_ball(d, 1.0, &mut r), vec_in_ball(d, 1.0, &mut r));
    let m = 30;
    let (ef, eg) = (exp_vector(&f, m).unwrap(), exp_vector(&g, m).unwrap());
    let lhs = ef
        .value
        .inner(&conservation(&a, &eg.value).unwrap())
        .unwrap();
    let ag = HVector::new(a.apply(g.coeffs()).unwrap());
    let rhs = f.inner(&ag).unwrap() * f.inner(&g).unwrap().exp();
    assert!((lhs - rhs).norm() < 1e-12);

    // d/dt Γ(e^{itA}) at 0 is iΛ(A)
    let psi = fock(d, 4, 4, &mut r);
    let target = conservation(&a, &psi).unwrap().scale(c(0.0, 1.0));
    let u = |t: f64| {
        let m = nalgebra::DMatrix::from_fn(d, d, |i, j| a.get(i, j) * c(0.0, t));
        let e = m.exp();
        DenseOperator::from_fn(d, d, |i, j| e[(i, j)])
    };
    let res = |t: f64| {
        let p = second_quantize(&u(t), &psi).unwrap();
        let q = second_quantize(&u(-t), &psi).unwrap();
        (&p - &q).scale(c(0.5 / t, 0.0)).distance(&target).unwrap()
    };
    let ratio = res(2e-2) / res(1e-2);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn q_map_is_an_isometry_onto_the_graph_norm() {
    let vac = FockVector::<f64>::vacuum(2, 3).unwrap();
    assert_eq!(q_map(&vac), vac);
    let mut r = rng(16);
    let mut l3 = SymTensor::random(2, 3, &mut r).unwrap();
    l3 = l3.scale(c(1.0 / l3.norm(), 0.0));
    let psi = FockVector::from_level(l3, 4).unwrap();
    let q = q_map(&psi);
    assert!((graph_inner(&q, &q).unwrap().re - 1.0).abs() < 1e-14);
    for _ in 0..50 {
        let (psi, phi) = (fock(3, 5, 5, &mut r), fock(3, 5, 5, &mut r));
        let lhs = graph_inner(&q_map(&psi), &q_map(&phi)).unwrap();
        assert!((lhs - psi.inner(&phi).unwrap()).norm() < 1e-12);
    }
    // π^{-1/2} ∫_0^∞ t^{-1/2} e^{-t} e^{-tn} dt = (1+n)^{-1/2}, after t = u² and u = s/(1-s)
    for n in 0..=6 {
        let k = (n + 1) as f64;
        let integrand = |s: f64| {
            let u = s / (1.0 - s);
            2.0 * (-k * u * u).exp() / (1.0 - s).powi(2)
        };
        let out = quadrature::double_exponential::integrate(integrand, 0.0, 1.0, 1e-12);
        let value = out.integral / std::f64::consts::PI.sqrt();
        assert!((value - 1.0 / k.sqrt()).abs() < 1e-8, "n={n}: {value}");
    }
}

#[test]
fn abstract_ito_skorohod_identity() {
    let g = hv(&[(0.6, 0.0), (0.0, 0.8)]);
    let vac = FockVector::vacuum(2, 3).unwrap();
    let phi = MarkedFock::product(&vac, &g).unwrap();
    let rep = ito_skorohod_abstract(&phi, &phi).unwrap();
    assert!((rep.lhs - c(1.0, 0.0)).norm() < 1e-15);
    assert!((rep.rhs - c(1.0, 0.0)).norm() < 1e-15);
    assert_eq!(rep.second_term, c(0.0, 0.0));

    // second term on exponential vectors: <e(f1), e(f2)> <g1, f2> <f1, g2>
    let mut r = rng(17);
    let d = 3;
    let (f1, f2, g1, g2) = (
        vec_in_ball(d, 0.8, &mut r),
        vec_in_ball(d, 0.8, &mut r),
        vec_in_ball(d, 1.0, &mut r),
        vec_in_ball(d, 1.0, &mut r),
    );
    let m = 30;
    let mk = |f: &HVector<f64>, g: &HVector<f64>| {
        let mut e = exp_vector(f, m).unwrap().value;
        e.levels_mut()[m] = SymTensor::zeros(d, m).unwrap();
        MarkedFock::product(&e, g).unwrap()
    };
    let rep = ito_skorohod_abstract(&mk(&f1, &g1), &mk(&f2, &g2)).unwrap();
    let closed = f1.inner(&f2).unwrap().exp() * g1.inner(&f2).unwrap() * f1.inner(&g2).unwrap();
    assert!((rep.second_term - closed).norm() < 1e-10);

    for _ in 0..200 {
        let d = 1 + (r.random::<u32>() % 4) as usize;
        let m = 2 + (r.random::<u32>() % 5) as usize;
        let (p1, p2) = (marked(d, m, m - 1, &mut r), marked(d, m, m - 1, &mut r));
        let rep = ito_skorohod_abstract(&p1, &p2).unwrap();
        assert!(rep.residual() <= 1e-11 * rep.lhs.norm().max(1.0));
        assert!(rep.is_contraction(1e-12));
    }
    let full = marked(2, 3, 3, &mut r);
    assert!(matches!(
        ito_skorohod_abstract(&full, &full),
        Err(Error::NotTruncationSafe { .. })
    ));
}

#[test]
fn direct_sum_split() {
    let mut r = rng(18);
    let d = 4;
    let p = Partition::new(d, &[0, 2]).unwrap();
    let f = vec_in_ball(d, 1.2, &mut r);
    let m = 6;
    let e = exp_vector(&f, m).unwrap().value;
    let x = split_iso(&e, &p).unwrap();
    let f1 = HVector::new(vec![f.get(0), f.get(2)]);
    let f2 = HVector::new(vec![f.get(1), f.get(3)]);
    let y = SplitFock::product(
        &exp_vector(&f1, m).unwrap().value,
        &exp_vector(&f2, m).unwrap().value,
        m,
    )
    .unwrap();
    assert!((x.inner(&x).unwrap() - y.inner(&x).unwrap()).norm() < 1e-13);
    for n1 in 0..=m {
        for n2 in 0..=m - n1 {
            assert!(max_diff(x.block(n1, n2), y.block(n1, n2)) < 1e-14);
        }
    }

    let f_on_first = HVector::new(vec![f.get(0), c(0.0, 0.0), f.get(2), c(0.0, 0.0)]);
    let x = split_iso(&exp_vector(&f_on_first, m).unwrap().value, &p).unwrap();
    for n1 in 0..=m {
        for n2 in 1..=m - n1 {
            assert!(x.block(n1, n2).iter().all(|z| z.norm() == 0.0));
        }
    }

    for _ in 0..100 {
        let psi = fock(d, 5, 4, &mut r);
        let x = split_iso(&psi, &p).unwrap();
        assert!((x.norm() - psi.norm()).abs() < 1e-14);
        assert_eq!(merge(&x, &p).unwrap(), psi);
        assert!(split_grad_minus_residual(&psi, &p).unwrap() <= 1e-12);
        let phi = marked(d, 5, 4, &mut r);
        assert!(split_grad_plus_residual(&phi, &p).unwrap() <= 1e-12);
    }
    assert!(matches!(
        Partition::new(3, &[0, 0]),
        Err(Error::InvalidPartition(_))
    ));
    assert!(matches!(
        Partition::new(3, &[3]),
        Err(Error::InvalidPartition(_))
    ));
    assert!(matches!(
        Partition::new(2, &[0, 1]),
        Err(Error::InvalidPartition(_))
    ));
}

#[test]
fn guard_rails() {
    assert!(matches!(level_dim(40, 10), Err(Error::GuardRail { .. })));
    assert!(matches!(
        FockVector::<f64>::zeros(40, 10),
        Err(Error::GuardRail { .. })
    ));
    assert_eq!(level_dim(4, 3).unwrap(), 20);
}

#[test]
fn v_map_derivative_is_the_universal_annihilator() {
    let mut r = rng(19);
    for _ in 0..5 {
        let (f, g, h) = (
            vec_in_ball(3, 1.0, &mut r),
            vec_in_ball(3, 1.0, &mut r),
            vec_in_ball(3, 1.0, &mut r),
        );
        let m = 30;
        let (ef, eg) = (
            exp_vector(&f, m).unwrap().value,
            exp_vector(&g, m).unwrap().value,
        );
        let target = MarkedFock::product(&eg, &h)
            .unwrap()
            .inner(&grad_minus(&ef).unwrap().value)
            .unwrap();
        let pair = ProductCombo::single(g.clone(), h.clone());
        let res = |t: f64| {
            let p = product_gram(&pair, &v_map(t, &ExpCombo::single(f.clone()))).unwrap();
            let q = product_gram(&pair, &v_map(-t, &ExpCombo::single(f.clone()))).unwrap();
            ((p - q) / (2.0 * t) - target).norm()
        };
        let ratio = res(2e-2) / res(1e-2);
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }
}

#[test]
fn single_precision_algebra() {
    use chaoskit::{FockVector32, HVector32};
    let f = HVector32::new(vec![
        num_complex::Complex32::new(0.3, -0.1),
        num_complex::Complex32::new(0.2, 0.4),
    ]);
    let g = HVector32::new(vec![
        num_complex::Complex32::new(-0.5, 0.0),
        num_complex::Complex32::new(0.1, 0.1),
    ]);
    let mut r = rng(20);
    let psi = FockVector32::random(2, 5, 3, &mut r).unwrap();
    let lhs = &annihilate(&f, &create(&g, &psi).unwrap().value).unwrap()
        - &create(&g, &annihilate(&f, &psi).unwrap()).unwrap().value;
    assert!(lhs.distance(&psi.scale(f.inner(&g).unwrap())).unwrap() < 1e-5);
    let e = exp_vector(&f, 12).unwrap().value;
    assert!((e.norm_sqr() - f.norm().powi(2).exp()).abs() < 1e-5);
}
