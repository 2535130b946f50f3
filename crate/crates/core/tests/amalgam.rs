use proptest::prelude::*;
use respk_core::amalgam::{prop45_witness, theorem41_pipeline, Amalgam, Conjugacy, SurfaceOutcome};
use respk_core::cert::surface_alphabet;
use respk_core::error::Error;
use respk_core::words::gamma;
use respk_core::{Config, Word};

fn surface_word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop_oneof![1..=4i32, -4..=-1i32], 0..=max).prop_map(|v| Word::from_signed(&v))
}

fn abelianization(w: &Word) -> Vec<i64> {
    let mut v = vec![0i64; 4];
    for l in w.letters() {
        v[l.gen as usize] += if l.inv { -1 } else { 1 };
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn group_laws(a in surface_word(8), b in surface_word(8), c in surface_word(8)) {
        let src = Amalgam::surface(1);
        let (a, b, c) = (src.from_word(&a), src.from_word(&b), src.from_word(&c));
        prop_assert_eq!(src.mul(&src.mul(&a, &b), &c), src.mul(&a, &src.mul(&b, &c)));
        prop_assert_eq!(src.mul(&a, &src.inv(&a)), src.identity());
        prop_assert_eq!(src.from_word(&src.to_word(&a)), a);
    }

    #[test]
    fn cyclic_reduction(w in surface_word(10)) {
        let src = Amalgam::surface(1);
        let a = src.from_word(&w);
        let (core, f) = src.cyclic_reduce(&a);
        prop_assert_eq!(src.conjugate(&f, &core), a);
        prop_assert!(core.syl() <= 1 || core.syl() % 2 == 0);
    }

    #[test]
    fn conjugates_are_recovered(w in surface_word(10), s in surface_word(8)) {
        let src = Amalgam::surface(1);
        let g = src.cyclic_reduce(&src.from_word(&w)).0;
        let h = src.conjugate(&src.from_word(&s), &g);
        match src.is_conjugate(&g, &h, 100_000).unwrap() {
            Conjugacy::Conjugate(f) => {
                prop_assert_eq!(src.conjugate(&f, &h), g.clone());
                prop_assert_eq!(src.cyclic_reduce(&h).0.syl(), g.syl());
            }
            Conjugacy::NotConjugate => prop_assert!(false, "missed a conjugate pair"),
        }
    }

    #[test]
    fn abelianization_separates(g in surface_word(8), h in surface_word(8)) {
        prop_assume!(abelianization(&g) != abelianization(&h));
        let src = Amalgam::surface(1);
        let verdict = src.is_conjugate(&src.from_word(&g), &src.from_word(&h), 100_000).unwrap();
        prop_assert_eq!(verdict, Conjugacy::NotConjugate);
    }

    #[test]
    fn successes_have_equal_syllable_length(g in surface_word(8), h in surface_word(8)) {
        let src = Amalgam::surface(1);
        let (ga, ha) = (src.cyclic_reduce(&src.from_word(&g)).0, src.cyclic_reduce(&src.from_word(&h)).0);
        if let Conjugacy::Conjugate(_) = src.is_conjugate(&ga, &ha, 100_000).unwrap() {
            prop_assert_eq!(ga.syl(), ha.syl());
        }
    }
}

fn parse(s: &str) -> Word {
    surface_alphabet(1).parse(s).unwrap()
}

#[test]
fn witnesses_respect_the_identification() {
    let cfg = Config::default();
    let src = Amalgam::surface(1);
    for (g, h) in
        [("x1*x'1", "y1"), ("x1*x'1", "x1*x'1*x1*y'1"), ("x1*x'1", "y1*y'1"), ("x1*x'1", "x1*x1^-1*y1^-1*x1*y1*x'1")]
    {
        let w = prop45_witness(&parse(g), &parse(h), 1, 2, &cfg).unwrap();
        let gam = gamma(1);
        assert_eq!(w.hom.phi[0].order_of(&gam), w.hom.gamma_order);
        assert_eq!(w.hom.phi[1].order_of(&gam), w.hom.gamma_order);
        let ga = src.from_word(&parse(g));
        for (s, x) in src.parts(&ga) {
            assert_eq!(w.hom.apply(&src, &src.syllable(s, x)).syl(), 1, "{g} vs {h}");
        }
        assert!(w.report.passed());
    }
}

#[test]
fn pipeline_outcomes() {
    let cfg = Config::default();
    match theorem41_pipeline(&parse("x1*x'1"), &parse("x'1*x1"), 1, 2, &cfg).unwrap() {
        SurfaceOutcome::Conjugator(f) => {
            let src = Amalgam::surface(1);
            let (g, h, f) = (src.from_word(&parse("x1*x'1")), src.from_word(&parse("x'1*x1")), src.from_word(&f));
            assert_eq!(src.conjugate(&f, &h), g);
        }
        SurfaceOutcome::Witness(_) => panic!("rotations are conjugate"),
    }
    // g swapped in when only h is long
    assert!(matches!(
        theorem41_pipeline(&parse("x1"), &parse("x1*x'1"), 1, 2, &cfg).unwrap(),
        SurfaceOutcome::Witness(_)
    ));
    // both in one factor: the γ-preserving automorphisms cannot raise the length
    let err = theorem41_pipeline(&parse("x1"), &parse("y1"), 1, 2, &cfg).unwrap_err();
    assert!(matches!(err, Error::NormalizationFailed(_)), "{err}");
}
