use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reesjump_core::dispatch::{bundled_corpus, negative_corpus};
use reesjump_core::fuzz::mutate;
use reesjump_core::homalg::{FPModule, Mode};
use reesjump_core::parse::parse_polynomial;
use reesjump_core::pid::{smith_normal_form, LPoly, PIDMatrix, PidRing, UPoly};
use reesjump_core::rees::{rees_module, rees_ring, sp0, sp1, Filtration};
use reesjump_core::task::{parse_syntax, parse_task, print_task, Overrides};
use reesjump_core::{FieldDesc, GradedRingDesc, Polynomial, RingRef};

fn ring3() -> RingRef {
    GradedRingDesc::standard(FieldDesc::Rationals, &["x", "y", "z"])
}

/// Polynomial texts over x, y, z with small coefficients.
fn poly_text() -> impl Strategy<Value = String> {
    let term = (-4i64..=4, 0u32..3, 0u32..3, 0u32..3).prop_map(|(c, a, b, d)| format!("({c})*x^{a}*y^{b}*z^{d}"));
    prop::collection::vec(term, 1..5).prop_map(|ts| ts.join(" + "))
}

/// Homogeneous polynomial texts of degree `d` over x, y, z.
fn homogeneous_text(d: u32) -> impl Strategy<Value = String> {
    let term = (1i64..=4, 0..=d, 0..=d).prop_map(move |(c, a, b)| {
        let a = a.min(d);
        let b = b.min(d - a);
        format!("{c}*x^{a}*y^{b}*z^{}", d - a - b)
    });
    prop::collection::vec(term, 1..4).prop_map(|ts| ts.join(" - "))
}

fn parse(r: &RingRef, t: &str) -> Polynomial {
    parse_polynomial(r, t).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, .. ProptestConfig::default() })]

    #[test]
    fn ring_axioms(a in poly_text(), b in poly_text(), c in poly_text()) {
        let r = ring3();
        let (a, b, c) = (parse(&r, &a), parse(&r, &b), parse(&r, &c));
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn printing_round_trips(a in poly_text()) {
        let r = ring3();
        let p = parse(&r, &a);
        prop_assert_eq!(parse(&r, &p.to_string()), p);
    }

    #[test]
    fn hilbert_ignores_generator_order(g1 in homogeneous_text(2), g2 in homogeneous_text(2), g3 in homogeneous_text(3)) {
        let r = ring3();
        let gens = vec![parse(&r, &g1), parse(&r, &g2), parse(&r, &g3)];
        let mut rev = gens.clone();
        rev.reverse();
        let a = FPModule::cyclic(&r, &gens, Mode::Graded).unwrap();
        let b = FPModule::cyclic(&r, &rev, Mode::Graded).unwrap();
        prop_assert_eq!(a.hilbert_profile(0, 8).unwrap(), b.hilbert_profile(0, 8).unwrap());
        let gb = a.gb().unwrap();
        prop_assert!(gb.verify().unwrap());
        for g in b.presentation().columns() {
            prop_assert!(gb.contains(g).unwrap());
        }
    }

    #[test]
    fn rees_specializations_recover_the_module(g1 in homogeneous_text(2), g2 in homogeneous_text(3)) {
        let r = ring3();
        let m = FPModule::cyclic(&r, &[parse(&r, &g1), parse(&r, &g2)], Mode::Graded).unwrap();
        let rr = rees_ring(&r).unwrap();
        let mt = rees_module(&rr, &m, &Filtration::CanonicalGraded).unwrap().tilde;
        prop_assert_eq!(sp0(&rr, &mt).unwrap().hilbert_profile(0, 8).unwrap(), m.hilbert_profile(0, 8).unwrap());
        let ungraded = m.with_mode(Mode::Ungraded).unwrap();
        prop_assert_eq!(sp1(&rr, &mt).unwrap().dimension().unwrap(), ungraded.dimension().unwrap());
    }

    #[test]
    fn smith_forms_verify(entries in prop::collection::vec(prop::collection::vec(-3i64..=3, 0..4), 6), laurent in any::<bool>(), shifts in prop::collection::vec(-2i64..=2, 6)) {
        let field = FieldDesc::Rationals;
        let polys: Vec<UPoly> = entries.iter().map(|c| UPoly::from_ints(field, c)).collect();
        let a = if laurent {
            let rows = (0..2)
                .map(|i| (0..3).map(|j| LPoly::new(shifts[i * 3 + j], polys[i * 3 + j].clone())).collect())
                .collect();
            PIDMatrix::new(PidRing::Laurent, field, 2, 3, rows).unwrap()
        } else {
            PIDMatrix::from_upolys(PidRing::Polynomial, field, vec![polys[0..3].to_vec(), polys[3..6].to_vec()])
        };
        let s = smith_normal_form(&a);
        prop_assert!(s.verify().unwrap());
    }

    #[test]
    fn mutated_tasks_never_panic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (_, base) in bundled_corpus().iter().chain(&negative_corpus()) {
            let text = mutate(base, &mut rng);
            if let Err(e) = parse_syntax(&text, &Overrides::default()) {
                prop_assert!(e.exit_code() == 2, "{e}");
            }
        }
    }
}

#[test]
fn corpus_print_round_trip() {
    for (name, text) in bundled_corpus().iter().chain(&negative_corpus()) {
        let Ok(task) = parse_syntax(text, &Overrides::default()) else { panic!("{name} does not parse") };
        let printed = print_task(&task);
        let again = parse_syntax(&printed, &Overrides::default()).unwrap();
        assert_eq!(again, task, "{name}");
        assert_eq!(print_task(&again), printed, "{name}");
    }
    for (name, text) in bundled_corpus() {
        assert!(parse_task(&text, &Overrides::default()).is_ok(), "{name}");
    }
}
