use cartan_core::cartan::{ad_d, verify_cartan, GradedOperator, VectorField};
use cartan_core::random;
use cartan_core::{Poly, RingPresentation};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn bracket_jacobi_and_antisymmetry(seed in any::<u64>()) {
        let r = RingPresentation::free(3);
        let mut g = random::rng(seed);
        let (u, v, w) = (random::vector_field(&mut g, &r, 2), random::vector_field(&mut g, &r, 2), random::vector_field(&mut g, &r, 2));
        let a = u.bracket(&v.bracket(&w).unwrap()).unwrap();
        let b = v.bracket(&w.bracket(&u).unwrap()).unwrap();
        let c = w.bracket(&u.bracket(&v).unwrap()).unwrap();
        prop_assert!(a.add(&b).unwrap().add(&c).unwrap().is_zero());
        prop_assert!(u.bracket(&v).unwrap().add(&v.bracket(&u).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn bracket_acts_as_commutator(seed in any::<u64>()) {
        let r = RingPresentation::free(2);
        let mut g = random::rng(seed);
        let (v, w) = (random::vector_field(&mut g, &r, 2), random::vector_field(&mut g, &r, 2));
        let f = random::poly(&mut g, 2, 3, 4);
        let lhs = v.bracket(&w).unwrap().apply(&f).unwrap();
        let rhs = v.apply(&w.apply(&f).unwrap()).unwrap() - w.apply(&v.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn contraction_is_function_linear(seed in any::<u64>()) {
        let r = RingPresentation::free(3);
        let mut g = random::rng(seed);
        let v = random::vector_field(&mut g, &r, 2);
        let w = random::vector_field(&mut g, &r, 2);
        let f = random::poly(&mut g, 3, 2, 3);
        let a = random::form(&mut g, &r, 2, 4);
        let lhs = v.scale(&f).unwrap().contract(&a).unwrap();
        prop_assert_eq!(lhs, v.contract(&a).unwrap().mul_function(&f).unwrap());
        let sum = v.add(&w).unwrap().contract(&a).unwrap();
        prop_assert_eq!(sum, v.contract(&a).unwrap().add(&w.contract(&a).unwrap()).unwrap());
        // ι is an odd derivation and squares to zero
        prop_assert!(v.contract(&v.contract(&a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn lie_derivative_is_a_derivation_of_wedge(seed in any::<u64>(), p in 0usize..3) {
        let r = RingPresentation::free(3);
        let mut g = random::rng(seed);
        let v = random::vector_field(&mut g, &r, 2);
        let a = random::form_of_degree(&mut g, &r, p, 1);
        let b = random::form(&mut g, &r, 1, 2);
        let lhs = v.lie_derivative(&a.wedge(&b).unwrap()).unwrap();
        let rhs = v.lie_derivative(&a).unwrap().wedge(&b).unwrap()
            .add(&a.wedge(&v.lie_derivative(&b).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cartan_identities_hold(seed in any::<u64>()) {
        let r = RingPresentation::free(2);
        let mut g = random::rng(seed);
        let (v, w) = (random::vector_field(&mut g, &r, 2), random::vector_field(&mut g, &r, 2));
        let forms: Vec<_> = (0..6).map(|_| random::form(&mut g, &r, 2, 3)).collect();
        let report = verify_cartan(&r, &v, &w, &forms).unwrap();
        prop_assert!(report.all_pass(), "{:?}", report);
    }

    #[test]
    fn ad_d_squares_to_zero(seed in any::<u64>()) {
        let r = RingPresentation::free(3);
        let mut g = random::rng(seed);
        let x = random::operator(&mut g, &r, 2);
        let twice = ad_d(&ad_d(&x));
        let a = random::form(&mut g, &r, 2, 3);
        prop_assert!(twice.apply(&a).unwrap().is_zero());
    }
}

#[test]
fn a_wrong_identity_is_caught() {
    // L_v ≠ ι_v d alone: the harness must report a witness when sides differ
    let r = RingPresentation::free(2);
    let v = VectorField::new(&r, vec![Poly::gen(1), Poly::zero()]).unwrap();
    let lie = GradedOperator::Lie(v.clone());
    let half = GradedOperator::compose(GradedOperator::Contraction(v), GradedOperator::ExteriorD);
    let forms = cartan_core::cartan::spanning_forms(&r, 1);
    let w = cartan_core::cartan::disagreement(&lie, &half, &forms).unwrap();
    assert!(w.is_some());
}
