use proptest::prelude::*;
use respk_core::cert::{self, Certificate, FreeNode, FreeStep, Outcome};
use respk_core::pgroups::GroupExpr;
use respk_core::separate::{
    double_coset_decide, double_coset_witness, separate_conjugacy_free, ConjOutcome, FreeWitness,
};
use respk_core::words::{gamma, is_conjugate_free};
use respk_core::{Alphabet, Config, Execution, Word};

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop_oneof![1..=2i32, -2..=-1i32], 0..=max).prop_map(|v| Word::from_signed(&v))
}

/// Conjugacy by brute force: some rotation of one cyclic core is the other.
fn rotation_oracle(g: &Word, h: &Word) -> bool {
    let (a, b) = (g.cyclic_reduce().0, h.cyclic_reduce().0);
    a.len() == b.len() && (0..a.len().max(1)).any(|k| a.rotate(k) == b)
}

fn witness(g: &Word, h: &Word, p: u32, cfg: &Config) -> FreeWitness {
    match separate_conjugacy_free(g, h, p, 2, cfg).unwrap() {
        ConjOutcome::Witness(w) => *w,
        ConjOutcome::Conjugator(f) => panic!("unexpected conjugator {f}"),
    }
}

/// Child pairs shrink and stay non-conjugate.
fn check_tree(node: &FreeNode) {
    let Some(lift) = &node.lift else { return };
    for c in &lift.children {
        assert!(c.g.len() + c.h.len() < node.g.len() + node.h.len(), "recursion measure did not drop");
        assert!(is_conjugate_free(&c.g, &c.h).is_none(), "child pair is conjugate");
        check_tree(c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn separation_is_sound(g in word(5), h in word(5), p in prop_oneof![Just(2u32), Just(3)]) {
        let cfg = Config::with_prime(p);
        match separate_conjugacy_free(&g, &h, p, 2, &cfg).unwrap() {
            ConjOutcome::Conjugator(f) => {
                prop_assert!(rotation_oracle(&g, &h));
                prop_assert_eq!(f.mul(&h).mul(&f.inv()), g);
            }
            ConjOutcome::Witness(w) => {
                prop_assert!(!rotation_oracle(&g, &h));
                check_tree(&w.root);
                let c = Certificate::free(p, Alphabet::standard(2), w.root, &w.report, cfg.enum_cap);
                let text = cert::emit(&c);
                let back = cert::parse(&text).unwrap();
                prop_assert_eq!(&back, &c);
                prop_assert!(cert::verify(&back, Execution::Sequential).unwrap().passed());
            }
        }
    }

    #[test]
    fn conjugate_pairs_are_recognised(g in word(6), f in word(6)) {
        let h = f.mul(&g).mul(&f.inv());
        match separate_conjugacy_free(&g, &h, 2, 2, &Config::default()).unwrap() {
            ConjOutcome::Conjugator(c) => prop_assert_eq!(c.mul(&h).mul(&c.inv()), g),
            ConjOutcome::Witness(_) => prop_assert!(false, "separated a conjugate pair"),
        }
    }

    #[test]
    fn double_coset_relations_are_found(g in word(5), a in -3i64..=3, b in -3i64..=3) {
        let gam = gamma(1);
        let h = gam.pow(a).mul(&g).mul(&gam.pow(-b));
        let (a2, b2) = double_coset_decide(&g, &h, &gam).expect("related by construction");
        prop_assert_eq!(gam.pow(a2).mul(&g), h.mul(&gam.pow(b2)));
    }

    #[test]
    fn double_coset_witnesses_hold(g in word(4), h in word(4)) {
        let gam = gamma(1);
        prop_assume!(double_coset_decide(&g, &h, &gam).is_none());
        let w = double_coset_witness(&g, &h, 1, 2, &Config::default()).unwrap();
        let t = w.hom.target();
        let c = w.hom.apply(&gam);
        for a in 0..w.modulus as i64 {
            for b in 0..w.modulus as i64 {
                let lhs = t.mul(&t.pow(&c, a), &w.hom.apply(&g));
                let rhs = t.mul(&w.hom.apply(&h), &t.pow(&c, b));
                prop_assert_ne!(lhs, rhs);
            }
        }
        let cert = Certificate::double_coset(2, 1, g, h, &w.hom, w.modulus, 1000);
        prop_assert!(cert::verify(&cert::parse(&cert::emit(&cert)).unwrap(), Execution::Sequential).unwrap().passed());
    }
}

#[test]
fn certificates_are_deterministic() {
    let (g, h) = (Word::from_signed(&[-1, -2, 1, 2]), Word::from_signed(&[-2, -1, 2, 1]));
    let emit = |exec: Execution| {
        let cfg = Config { execution: exec, ..Config::with_prime(3) };
        let w = witness(&g, &h, 3, &cfg);
        cert::emit(&Certificate::free(3, Alphabet::standard(2), w.root, &w.report, cfg.enum_cap))
    };
    let first = emit(Execution::Parallel);
    assert_eq!(first, emit(Execution::Parallel));
    assert_eq!(first, emit(Execution::Sequential));
}

#[test]
fn wreath_certificate_round_trip() {
    let (g, h) = (Word::from_signed(&[-1, -2, 1, 2]), Word::from_signed(&[-2, -1, 2, 1]));
    let w = witness(&g, &h, 2, &Config::default());
    assert_eq!(w.root.step, FreeStep::Induced);
    assert!(matches!(w.root.target, GroupExpr::Wreath(..)));
    let c = Certificate::free(2, Alphabet::standard(2), w.root, &w.report, 1_000_000);
    let text = cert::emit(&c);
    assert_eq!(cert::emit(&cert::parse(&text).unwrap()), text);
}

#[test]
fn forged_claims_are_rejected() {
    // a single-node certificate claiming x and y⁻¹ x y are separated by C(2)
    let text = "respk-certificate 1\ntool respk 0.1.0\nkind free-separation\nprime 2\nalphabet x y\nnode root\nrank 2\nstep cyclic\ng x\nh y^-1*x*y\ntarget C(2)\nimage 1\nimage 0\nchildren 0\nverification full-enumeration\ncap 100\noutcome pass\nend\n";
    let report = cert::verify(&cert::parse(text).unwrap(), Execution::Sequential).unwrap();
    match report.outcome {
        Outcome::Fail(why) => assert!(why.contains("conjugate"), "{why}"),
        Outcome::Pass => panic!("forged certificate passed"),
    }
}
