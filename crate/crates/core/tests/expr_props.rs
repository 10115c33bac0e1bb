use cartan_core::expr::registry::eval_prim;
use cartan_core::expr::{differentiate, eval_numeric, hadamard_factor, normalize, PrimId, SmoothExpr};
use cartan_core::random;
use cartan_core::Poly;
use proptest::prelude::*;

fn point(seed: u64, n: usize) -> Vec<f64> {
    // a fixed irrational-looking point keeps clear of the Step boundaries
    (0..n).map(|i| 0.31 + 0.17 * i as f64 + (seed % 7) as f64 * 0.05).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn mixed_partials_commute(seed in any::<u64>()) {
        let e = random::expr(&mut random::rng(seed), 3, 3);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let ij = differentiate(&differentiate(&e, i).unwrap(), j).unwrap();
            let ji = differentiate(&differentiate(&e, j).unwrap(), i).unwrap();
            prop_assert_eq!(ij, ji);
        }
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let f = random::expr(&mut g, 2, 3);
        let h = random::expr(&mut g, 2, 3);
        let fh = SmoothExpr::Product(vec![f.clone(), h.clone()]);
        let lhs = Poly::from_expr(&differentiate(&fh, 0).unwrap()).unwrap();
        let df = Poly::from_expr(&differentiate(&f, 0).unwrap()).unwrap();
        let dh = Poly::from_expr(&differentiate(&h, 0).unwrap()).unwrap();
        let (f, h) = (Poly::from_expr(&f).unwrap(), Poly::from_expr(&h).unwrap());
        prop_assert_eq!(lhs, &df * &h + &f * &dh);
    }

    #[test]
    fn normal_form_evaluates_like_the_tree(seed in any::<u64>()) {
        let e = random::expr(&mut random::rng(seed), 3, 4);
        let p = point(seed, 3);
        let direct = eval_numeric(&e, &p);
        let normal = eval_numeric(&normalize(&e).unwrap(), &p);
        prop_assert!((direct - normal).abs() <= 1e-9 * (1.0 + direct.abs()), "{direct} vs {normal}");
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        let e = random::expr(&mut random::rng(seed), 2, 4);
        let n = normalize(&e).unwrap();
        prop_assert_eq!(normalize(&n).unwrap(), n);
    }

    #[test]
    fn hadamard_round_trip(seed in any::<u64>(), i in 0usize..3) {
        let q = random::poly(&mut random::rng(seed), 3, 3, 4);
        let p = &Poly::gen(i) * &q;
        let a = hadamard_factor(&p, i).unwrap();
        prop_assert_eq!(&Poly::gen(i) * &a, p);
        prop_assert_eq!(a, q);
    }

    #[test]
    fn primitive_derivatives_match_finite_differences(t in -0.9f64..0.9, k in 0usize..5) {
        let id = [PrimId::Beta(0), PrimId::Beta(1), PrimId::Exp, PrimId::Sin, PrimId::Cos][k];
        let e = SmoothExpr::Prim(id, vec![SmoothExpr::Gen(0)]);
        let exact = eval_numeric(&differentiate(&e, 0).unwrap(), &[t]);
        let h = 1e-5;
        let fd = (eval_prim(id, &[t + h]) - eval_prim(id, &[t - h])) / (2.0 * h);
        prop_assert!((exact - fd).abs() < 1e-5 * (1.0 + exact.abs()), "{id:?} at {t}: {exact} vs {fd}");
    }

    #[test]
    fn step_derivatives_match_finite_differences(u in 0.1f64..2.0, v in 0.1f64..2.0) {
        let e = SmoothExpr::step(SmoothExpr::Gen(0), SmoothExpr::Gen(1));
        let h = 1e-5;
        for i in 0..2 {
            let exact = eval_numeric(&differentiate(&e, i).unwrap(), &[u, v]);
            let mut hi = [u, v];
            let mut lo = [u, v];
            hi[i] += h;
            lo[i] -= h;
            let fd = (eval_numeric(&e, &hi) - eval_numeric(&e, &lo)) / (2.0 * h);
            prop_assert!((exact - fd).abs() < 1e-5 * (1.0 + exact.abs()), "slot {i}: {exact} vs {fd}");
        }
    }
}
