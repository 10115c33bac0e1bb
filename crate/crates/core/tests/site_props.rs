use std::collections::BTreeMap;

use cartan_core::cartan::{spanning_forms, VectorField};
use cartan_core::expr::rat;
use cartan_core::random;
use cartan_core::site::{
    check_restriction_squares, glue_derivations, Interval, LocalDerivationFamily, Open, OpenBox,
    OpenPoset, PresheafCDGA, Region,
};
use cartan_core::{Ring, RingPresentation};
use proptest::prelude::*;

fn line() -> Ring {
    RingPresentation::free_named(vec!["x".into()])
}

fn interval(a: i64, b: i64) -> Region {
    Region::Boxes(vec![OpenBox(vec![Interval::bounded(rat(a, 1), rat(b, 1))])])
}

fn cover() -> Vec<Open> {
    vec![
        Open::new("A", interval(-3, -1)),
        Open::new("B", interval(-2, 2)),
        Open::new("C", interval(1, 3)),
    ]
}

fn presheaf() -> PresheafCDGA {
    let mut opens = vec![Open::new("M", interval(-3, 3))];
    opens.extend(cover());
    let rels: Vec<(String, String)> = ["A", "B", "C"].iter().map(|s| (s.to_string(), "M".to_string())).collect();
    PresheafCDGA::new(OpenPoset::new(opens, &rels).unwrap(), line()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn glue_after_restrict_is_identity(seed in any::<u64>()) {
        let v = random::vector_field(&mut random::rng(seed), &line(), 3);
        let locals = vec![v.clone(); 3];
        prop_assert_eq!(glue_derivations(&cover(), &locals).unwrap(), v);
    }

    #[test]
    fn zero_top_forces_zero_family(seed in any::<u64>(), mask in 0u8..8) {
        let p = presheaf();
        let r = line();
        let mut g = random::rng(seed);
        let mut fields = BTreeMap::new();
        fields.insert("M".to_string(), VectorField::zero(&r));
        for (k, name) in ["A", "B", "C"].iter().enumerate() {
            let v = if mask & (1 << k) != 0 { random::vector_field(&mut g, &r, 2) } else { VectorField::zero(&r) };
            fields.insert(name.to_string(), v);
        }
        let fam = LocalDerivationFamily::new(&p, &fields).unwrap();
        let commutes = check_restriction_squares(&p, &fam, &spanning_forms(&r, 1)).unwrap().commutes();
        let all_zero = fam.components().iter().all(VectorField::is_zero);
        prop_assert_eq!(commutes, all_zero);
    }

    #[test]
    fn mismatched_locals_do_not_glue(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let v = random::vector_field(&mut g, &line(), 2);
        let w = random::vector_field(&mut g, &line(), 2);
        prop_assume!(v != w);
        prop_assert!(glue_derivations(&cover(), &[v.clone(), v, w]).is_err());
    }
}

#[test]
fn poset_rejects_bad_order() {
    let opens = vec![Open::new("M", interval(-1, 1)), Open::new("U", interval(-2, 2))];
    let rels = vec![("U".to_string(), "M".to_string())];
    assert!(OpenPoset::new(opens, &rels).is_err());
}
