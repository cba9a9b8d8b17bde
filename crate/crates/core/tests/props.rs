mod common;

use chaoskit::fock::basis::binomial;
use chaoskit::fock::*;
use common::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn seeded(seed: u64) -> rand_chacha::ChaCha8Rng {
    rng(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_a_bijection(d in 1usize..5, n in 0usize..6) {
        let basis = LevelBasis::new(d, n).unwrap();
        prop_assert_eq!(basis.len(), binomial(n + d - 1, n));
        for (r, alpha) in basis.iter().enumerate() {
            prop_assert_eq!(basis.rank(alpha), r);
            prop_assert_eq!(alpha.iter().sum::<u32>() as usize, n);
        }
    }

    #[test]
    fn tensor_power_coordinates(seed in any::<u64>(), d in 1usize..4, n in 0usize..6) {
        let mut r = seeded(seed);
        let f = vec_in_ball(d, 1.5, &mut r);
        let t = tensor_power(&f, n).unwrap();
        let basis = LevelBasis::new(d, n).unwrap();
        for (k, alpha) in basis.iter().enumerate() {
            let afact: f64 = alpha.iter().map(|&a| factorial(a as usize)).product();
            let mono: Complex64 = alpha.iter().enumerate().map(|(i, &a)| f.get(i).powu(a)).product();
            let want = mono * (factorial(n) / afact).sqrt();
            prop_assert!((t.coeffs()[k] - want).norm() <= 1e-13);
        }
    }

    #[test]
    fn gram_matrices_are_positive(seed in any::<u64>(), d in 1usize..5, k in 1usize..5) {
        let mut r = seeded(seed);
        let mut combo = ExpCombo::new();
        for _ in 0..k {
            combo.push(gauss(&mut r), vec_in_ball(d, 1.5, &mut r));
        }
        prop_assert!(exp_gram(&combo, &combo).unwrap().re >= -1e-12);
    }

    #[test]
    fn ladder_adjoint_pairs(seed in any::<u64>(), d in 1usize..5, m in 2usize..7) {
        let mut r = seeded(seed);
        let f = vec_in_ball(d, 1.5, &mut r);
        let psi = fock(d, m, m - 1, &mut r);
        let phi = fock(d, m, m, &mut r);
        let up = create(&f, &psi).unwrap().value;
        let down = annihilate(&f, &phi).unwrap();
        prop_assert!((up.inner(&phi).unwrap() - psi.inner(&down).unwrap()).norm() <= 1e-12);

        let x = marked(d, m, m - 1, &mut r);
        let gp = grad_plus(&x).unwrap().value;
        let gm = grad_minus(&phi).unwrap().value;
        prop_assert!((gp.inner(&phi).unwrap() - x.inner(&gm).unwrap()).norm() <= 1e-12);
    }

    #[test]
    fn ccr_on_truncation_safe_vectors(seed in any::<u64>(), d in 1usize..5, m in 2usize..7) {
        let mut r = seeded(seed);
        let (f, g) = (vec_in_ball(d, 1.5, &mut r), vec_in_ball(d, 1.5, &mut r));
        let psi = fock(d, m, m - 2, &mut r);
        let lhs = &annihilate(&f, &create(&g, &psi).unwrap().value).unwrap()
            - &create(&g, &annihilate(&f, &psi).unwrap()).unwrap().value;
        prop_assert!(lhs.distance(&psi.scale(f.inner(&g).unwrap())).unwrap() <= 1e-12 * psi.norm());
    }

    #[test]
    fn number_factorizes(seed in any::<u64>(), d in 1usize..5, m in 1usize..7) {
        let mut r = seeded(seed);
        let psi = fock(d, m, m, &mut r);
        let nn = grad_plus(&grad_minus(&psi).unwrap().value).unwrap();
        prop_assert_eq!(nn.dropped_norm, 0.0);
        prop_assert!(nn.value.distance(&number_apply(&psi)).unwrap() <= 1e-12);
    }

    #[test]
    fn semigroup_composes(seed in any::<u64>(), s in 0.0f64..2.0, t in 0.0f64..2.0) {
        let mut r = seeded(seed);
        let psi = fock(3, 5, 5, &mut r);
        let a = number_semigroup(&number_semigroup(&psi, s).unwrap(), t).unwrap();
        let b = number_semigroup(&psi, s + t).unwrap();
        prop_assert!(a.distance(&b).unwrap() <= 1e-14);
        prop_assert!(b.norm() <= psi.norm() + 1e-15);
    }

    #[test]
    fn hat_and_odot_round_trips(seed in any::<u64>(), d in 1usize..4, n in 0usize..6) {
        let mut r = seeded(seed);
        let t = SymTensor::<f64>::random(d, n, &mut r).unwrap();
        prop_assert!(normalization::from_odot(&normalization::to_odot(&t)).distance(&t) <= 1e-13);
        let f = vec_in_ball(d, 1.2, &mut r);
        let odot = normalization::to_odot(&tensor_power(&f, n).unwrap());
        prop_assert!((odot.norm() - factorial(n).sqrt() * f.norm().powi(n as i32)).abs() <= 1e-12);
    }

    #[test]
    fn skorohod_identity_holds(seed in any::<u64>(), d in 1usize..5, m in 2usize..6) {
        let mut r = seeded(seed);
        let (a, b) = (marked(d, m, m - 1, &mut r), marked(d, m, m - 1, &mut r));
        let rep = ito_skorohod_abstract(&a, &b).unwrap();
        prop_assert!(rep.residual() <= 1e-11 * rep.lhs.norm().max(1.0));
        prop_assert!(rep.is_contraction(1e-12));
    }

    #[test]
    fn split_is_unitary(seed in any::<u64>(), m in 1usize..5, cut in 1usize..4) {
        let mut r = seeded(seed);
        let d = 4;
        let first: Vec<usize> = (0..cut).collect();
        let p = Partition::new(d, &first).unwrap();
        let (psi, phi) = (fock(d, m, m, &mut r), fock(d, m, m, &mut r));
        let (x, y) = (split_iso(&psi, &p).unwrap(), split_iso(&phi, &p).unwrap());
        prop_assert!((x.inner(&y).unwrap() - psi.inner(&phi).unwrap()).norm() <= 1e-13);
        prop_assert!(merge(&x, &p).unwrap().distance(&psi).unwrap() <= 1e-14);
    }
}
