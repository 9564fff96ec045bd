//! Invariants as property tests.

use hanner_core::analysis::*;
use hanner_core::inequality::*;
use hanner_core::io::{instance_to_json, parse_instance, InstanceFile};
use hanner_core::rearrangement::swap_sort_psd;
use hanner_core::rng::SplitMix64;
use hanner_core::schatten::{g_func, schatten_2x2};
use hanner_core::{ComplexMatrix2, DiagBlockMatrix, PExponent, RealMatrix2};
use num_complex::Complex64;
use proptest::prelude::*;

fn p(v: f64) -> PExponent {
    PExponent::new(v).unwrap()
}

fn modulus() -> impl Strategy<Value = f64> {
    (-3.0f64..3.0).prop_map(|e| 10f64.powf(e))
}

fn cplx() -> impl Strategy<Value = Complex64> {
    (modulus(), 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn matrix() -> impl Strategy<Value = ComplexMatrix2> {
    (cplx(), cplx(), cplx(), cplx()).prop_map(|(a, b, c, d)| ComplexMatrix2::new(a, b, c, d))
}

fn block(max_n: usize) -> impl Strategy<Value = DiagBlockMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        let v = || proptest::collection::vec(cplx(), n);
        (v(), v(), v(), v()).prop_map(|(a, b, c, d)| DiagBlockMatrix::new(a, b, c, d).unwrap())
    })
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(2.0), 1.0f64..6.0]
}

fn pos_matrix() -> impl Strategy<Value = RealMatrix2> {
    (modulus(), modulus(), modulus(), modulus()).prop_map(|(a, b, c, d)| RealMatrix2::new(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn norm_is_unitarily_invariant(m in matrix(), t in 0.0..6.3f64, s in 0.0..6.3f64, pv in exponent()) {
        let rot = m.mul_row(0, Complex64::from_polar(1.0, t)).mul_col(1, Complex64::from_polar(1.0, s));
        let x = schatten_2x2(&m, p(pv)).unwrap();
        let y = schatten_2x2(&rot, p(pv)).unwrap();
        prop_assert!((x - y).abs() <= 1e-12 * x);
        let tr = ComplexMatrix2::new(m.a, m.c, m.b, m.d);
        prop_assert!((schatten_2x2(&tr, p(pv)).unwrap() - x).abs() <= 1e-12 * x);
    }

    #[test]
    fn norm_is_homogeneous_and_monotone_in_p(m in matrix(), k in modulus(), p1 in 1.0..3.0f64, dp in 0.0..3.0f64) {
        let x = schatten_2x2(&m, p(p1)).unwrap();
        prop_assert!((schatten_2x2(&m.scale(k), p(p1)).unwrap() - k * x).abs() <= 1e-12 * k * x);
        prop_assert!(schatten_2x2(&m, p(p1 + dp)).unwrap() <= x * (1.0 + 1e-12));
    }

    #[test]
    fn relabeling_keeps_norm(bm in block(5), seed in any::<u64>(), pv in exponent()) {
        let mut sigma: Vec<usize> = (0..bm.n()).collect();
        SplitMix64::new(seed).shuffle(&mut sigma);
        let x = bm.block_norm(p(pv)).unwrap();
        prop_assert!((bm.permute(&sigma).block_norm(p(pv)).unwrap() - x).abs() <= 1e-12 * x);
        prop_assert_eq!(bm.sing().sing(), bm.sing());
    }

    #[test]
    fn theorem1_chain(bm in block(5), pv in exponent()) {
        let r = check_theorem1(&bm, p(pv)).unwrap();
        prop_assert!(r.holds, "{:?}", r);
    }

    #[test]
    fn lemma1_chain(m in matrix(), pv in exponent()) {
        prop_assert!(check_lemma1(&m, p(pv)).unwrap().holds);
    }

    #[test]
    fn g_superadditivity(x in pos_matrix(), y in pos_matrix(), pv in exponent()) {
        prop_assert!(check_g_superadd(&x, &y, p(pv)).unwrap().holds);
    }

    #[test]
    fn hanner_scalar(u in proptest::collection::vec(cplx(), 1..6), seed in any::<u64>(), pv in exponent()) {
        let mut rng = SplitMix64::new(seed);
        let v: Vec<Complex64> = u.iter().map(|_| Complex64::from_polar(rng.log_uniform(1e-3, 1e3), rng.phase())).collect();
        prop_assert!(check_scalar_hanner(&u, &v, p(pv)).unwrap().holds);
    }

    #[test]
    fn psd_family_statements(seed in any::<u64>(), n in 1usize..6, pv in exponent(), boundary in any::<bool>()) {
        let pb = sample_psd(&mut SplitMix64::new(seed), n, boundary);
        prop_assert!(check_theorem2(&pb, p(pv)).unwrap().holds);
        prop_assert!(check_pos_block_2x2(&pb, p(pv)).unwrap().holds);
        if n >= 2 {
            prop_assert!(check_lemma2(&pb.pair_state(0, 1).unwrap(), p(pv)).unwrap().holds);
        }
    }

    #[test]
    fn swap_sort_is_monotone(seed in any::<u64>(), n in 1usize..7, pv in 1.0..2.0f64) {
        let pb = sample_psd(&mut SplitMix64::new(seed), n, false);
        let r = swap_sort_psd(&pb, p(pv)).unwrap();
        let scale = r.initial_pow.max(1e-300);
        for s in &r.steps {
            prop_assert!(s.delta <= 1e-10 * scale);
        }
        let total: f64 = r.steps.iter().map(|s| s.delta).sum();
        prop_assert!((total - (r.final_pow - r.initial_pow)).abs() <= 1e-10 * scale);
    }

    #[test]
    fn directional_derivative_bound(a in pos_matrix(), b in pos_matrix(), pv in exponent()) {
        let d = g_directional_derivative(&a, &b, p(pv)).unwrap().value;
        let gb = g_func(&b, p(pv)).unwrap();
        let tol = 1e-9 * (1.0 + gb.abs().max(d.abs()));
        if pv <= 2.0 {
            prop_assert!(d <= gb + tol, "{} > {}", d, gb);
        }
        if pv >= 2.0 {
            prop_assert!(d >= gb - tol, "{} < {}", d, gb);
        }
    }

    #[test]
    fn critical_identities(a in 0.05..1.52f64, b in 0.05..1.52f64, h in 0.01..0.99f64, pv in 1.0..5.0f64) {
        let Ok(s) = CriticalState::new(a, b, h, pv) else { return Ok(()); };
        prop_assume!(s.is_interior());
        let phi = phi_matrix(&s).unwrap();
        let scale = phi.rows.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        for r in phi.kernel_residual() {
            prop_assert!(r.abs() <= 1e-10 * scale);
        }
        let d = det_identity(&s).unwrap();
        prop_assert!(d.residual.abs() <= 1e-9 * d.lhs.abs().max(1.0));
        let dir = DirectionMatrix::new(0.3, 1.0, 0.7, 2.0);
        let x = f_eval(&s, &dir).unwrap();
        prop_assert!((x - f_eval_trace(&s, &dir).unwrap()).abs() <= 1e-10 * x.abs().max(1.0));
    }

    #[test]
    fn bracket_is_negative_off_two(h in 0.001..0.999f64, pv in 1.0..8.0f64) {
        prop_assume!((pv - 2.0).abs() > 1e-3);
        prop_assert!(det_bracket(h, pv) < 0.0);
    }

    #[test]
    fn instances_round_trip(bm in block(4), seed in any::<u64>()) {
        let pb = sample_psd(&mut SplitMix64::new(seed), 3, true);
        for inst in [InstanceFile::Block(bm.clone()), InstanceFile::Psd(pb)] {
            prop_assert_eq!(parse_instance(&instance_to_json(&inst)).unwrap(), inst);
        }
    }

    #[test]
    fn search_is_deterministic(seed in any::<u64>()) {
        let ps = [p(1.0), p(3.0)];
        let a = random_search(Checker::Theorem1, Family::General, &ps, 5, seed, 1e-9).unwrap();
        let b = random_search(Checker::Theorem1, Family::General, &ps, 5, seed, 1e-9).unwrap();
        prop_assert_eq!(a, b);
    }
}
