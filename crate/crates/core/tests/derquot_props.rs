use cartan_core::cartan::VectorField;
use cartan_core::derquot::{canonical_pair_cross, class_bracket, class_equal, in_j, DerClass, TangentField};
use cartan_core::random;
use cartan_core::{Poly, Ring, RingPresentation};
use proptest::prelude::*;
use rand::Rng;

fn names() -> Vec<String> {
    vec!["x".into(), "y".into()]
}
fn ambient() -> Ring {
    RingPresentation::free_named(names())
}
fn cross() -> Ring {
    RingPresentation::quotient(names(), vec![Poly::gen(0) * Poly::gen(1)]).unwrap()
}
fn xy() -> Poly {
    Poly::gen(0) * Poly::gen(1)
}

/// `x a_1 ∂x + y a_2 ∂y` with random `a_i`.
fn tangent<R: Rng>(g: &mut R) -> VectorField {
    let a1 = random::poly(g, 2, 2, 3);
    let a2 = random::poly(g, 2, 2, 3);
    VectorField::new(&ambient(), vec![Poly::gen(0) * a1, Poly::gen(1) * a2]).unwrap()
}

/// A random element of `J`: both coefficients multiples of `xy`.
fn null<R: Rng>(g: &mut R) -> VectorField {
    let b1 = random::poly(g, 2, 1, 2);
    let b2 = random::poly(g, 2, 1, 2);
    VectorField::new(&ambient(), vec![xy() * b1, xy() * b2]).unwrap()
}

fn class(v: &VectorField) -> DerClass {
    DerClass::from_field(v, &cross()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn certificates_verify(seed in any::<u64>()) {
        let v = tangent(&mut random::rng(seed));
        let t = TangentField::certify(&v, &cross()).unwrap();
        prop_assert!(t.verify().unwrap());
    }

    #[test]
    fn action_respects_the_ideal(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let t = TangentField::certify(&tangent(&mut g), &cross()).unwrap();
        let f = random::poly(&mut g, 2, 2, 3);
        let h = random::poly(&mut g, 2, 2, 3);
        prop_assert_eq!(t.act(&(f.clone() + xy() * h)).unwrap(), t.act(&f).unwrap());
    }

    #[test]
    fn pair_is_additive_and_kills_j(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let (v, w, j) = (tangent(&mut g), tangent(&mut g), null(&mut g));
        let (p1, q1) = canonical_pair_cross(&class(&v)).unwrap();
        let (p2, q2) = canonical_pair_cross(&class(&w)).unwrap();
        let sum = canonical_pair_cross(&class(&v).add(&class(&w)).unwrap()).unwrap();
        prop_assert_eq!(sum, (p1.clone() + p2, q1.clone() + q2));
        prop_assert!(in_j(&j, cross().ideal()).unwrap());
        prop_assert_eq!(canonical_pair_cross(&class(&v.add(&j).unwrap())).unwrap(), (p1, q1));
        prop_assert!(class_equal(&class(&v), &class(&v.add(&j).unwrap())).unwrap());
    }

    #[test]
    fn class_bracket_satisfies_jacobi(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let (a, b, c) = (class(&tangent(&mut g)), class(&tangent(&mut g)), class(&tangent(&mut g)));
        let t1 = class_bracket(&a, &class_bracket(&b, &c).unwrap()).unwrap();
        let t2 = class_bracket(&b, &class_bracket(&c, &a).unwrap()).unwrap();
        let t3 = class_bracket(&c, &class_bracket(&a, &b).unwrap()).unwrap();
        prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().is_zero().unwrap());
    }

    #[test]
    fn bracket_is_well_defined_on_classes(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let (v, w, j) = (tangent(&mut g), tangent(&mut g), null(&mut g));
        let plain = class_bracket(&class(&v), &class(&w)).unwrap();
        let moved = class_bracket(&class(&v.add(&j).unwrap()), &class(&w)).unwrap();
        prop_assert!(class_equal(&plain, &moved).unwrap());
    }
}
