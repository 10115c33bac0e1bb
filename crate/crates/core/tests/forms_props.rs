use cartan_core::forms::pushforward;
use cartan_core::random;
use cartan_core::{DifferentialForm, RingHom, RingPresentation};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn d_squares_to_zero(seed in any::<u64>()) {
        let r = RingPresentation::free(4);
        let a = random::form(&mut random::rng(seed), &r, 3, 4);
        prop_assert!(a.d().unwrap().d().unwrap().is_zero());
    }

    #[test]
    fn wedge_is_associative(seed in any::<u64>()) {
        let r = RingPresentation::free(3);
        let mut g = random::rng(seed);
        let (a, b, c) = (random::form(&mut g, &r, 1, 3), random::form(&mut g, &r, 1, 3), random::form(&mut g, &r, 1, 3));
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), p in 0usize..4, q in 0usize..4) {
        let r = RingPresentation::free(4);
        let mut g = random::rng(seed);
        let a = random::form_of_degree(&mut g, &r, p, 1);
        let b = random::form_of_degree(&mut g, &r, q, 1);
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let expected = if (p * q) % 2 == 0 { ba } else { ba.neg() };
        prop_assert_eq!(ab, expected);
    }

    #[test]
    fn d_is_a_graded_derivation(seed in any::<u64>(), p in 0usize..3) {
        let r = RingPresentation::free(3);
        let mut g = random::rng(seed);
        let a = random::form_of_degree(&mut g, &r, p, 2);
        let b = random::form(&mut g, &r, 2, 2);
        let lhs = a.wedge(&b).unwrap().d().unwrap();
        let second = a.wedge(&b.d().unwrap()).unwrap();
        let second = if p % 2 == 0 { second } else { second.neg() };
        let rhs = a.d().unwrap().wedge(&b).unwrap().add(&second).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pushforward_commutes_with_d_and_wedge(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let s = RingPresentation::free(2);
        let t = RingPresentation::free(3);
        let f = RingHom::new(s.clone(), t, (0..2).map(|_| random::poly(&mut g, 3, 2, 2)).collect()).unwrap();
        let a = random::form(&mut g, &s, 2, 3);
        let b = random::form(&mut g, &s, 1, 2);
        prop_assert_eq!(pushforward(&f, &a.d().unwrap()).unwrap(), pushforward(&f, &a).unwrap().d().unwrap());
        prop_assert_eq!(
            pushforward(&f, &a.wedge(&b).unwrap()).unwrap(),
            pushforward(&f, &a).unwrap().wedge(&pushforward(&f, &b).unwrap()).unwrap()
        );
    }

    #[test]
    fn pushforward_is_functorial(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let (a, b, c) = (RingPresentation::free(2), RingPresentation::free(2), RingPresentation::free(3));
        let f = RingHom::new(a.clone(), b.clone(), (0..2).map(|_| random::poly(&mut g, 2, 2, 2)).collect()).unwrap();
        let h = RingHom::new(b, c.clone(), (0..2).map(|_| random::poly(&mut g, 3, 1, 2)).collect()).unwrap();
        let images = f.images().iter().map(|p| h.apply(p)).collect::<Result<Vec<_>, _>>().unwrap();
        let hf = RingHom::new(a.clone(), c, images).unwrap();
        let form = random::form(&mut g, &a, 1, 3);
        prop_assert_eq!(pushforward(&hf, &form).unwrap(), pushforward(&h, &pushforward(&f, &form).unwrap()).unwrap());
    }
}

#[test]
fn quotient_forms_reduce() {
    use cartan_core::Poly;
    let q = RingPresentation::quotient(vec!["x".into(), "y".into()], vec![Poly::gen(0) * Poly::gen(1)]).unwrap();
    // y dx + x dy is d(xy), which vanishes in the quotient complex
    let a = DifferentialForm::monomial(&q, &[0], Poly::gen(1)).unwrap();
    let b = DifferentialForm::monomial(&q, &[1], Poly::gen(0)).unwrap();
    assert!(a.add(&b).unwrap().is_zero());
    assert!(!a.is_zero());
}
