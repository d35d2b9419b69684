mod common;

use common::{fixture, lit, meta, rule, valid_fixtures};
use ddmr::engine::{EngineState, Order};
use ddmr::generate::{generate_theory, Family};
use ddmr::oracle::{
    applicable, check_equivalence, compare, discarded, oracle_extension, oracle_extension_within, step, OracleError,
    TagStore,
};
use ddmr::{parse_theory, Extension, Mode, Sign, Subject, TaggedFormula, Theory, Variant};

fn tag(sign: Sign, mode: Mode, subject: Subject) -> TaggedFormula {
    TaggedFormula { sign, mode, subject }
}

fn store(tags: &[(Sign, Mode, Subject)]) -> TagStore {
    let mut s = TagStore::default();
    for (sign, mode, subject) in tags {
        s.insert(tag(*sign, *mode, subject.clone())).unwrap();
    }
    s
}

#[test]
fn fixtures_agree_with_the_engine() {
    for name in valid_fixtures() {
        for v in [Variant::Simple, Variant::Cautious] {
            let diff = check_equivalence(&fixture(&name), v).unwrap();
            assert!(diff.is_empty(), "{name} {}: {diff:?}", v.as_str());
        }
    }
}

#[test]
fn empty_theory() {
    let e = oracle_extension(&Theory::default(), Variant::Cautious).unwrap();
    assert_eq!(e, Extension::default());
    assert!(check_equivalence(&Theory::default(), Variant::Simple).unwrap().is_empty());
}

#[test]
fn budget_and_validation_are_enforced() {
    let t = fixture("example1.ddl");
    assert!(matches!(
        oracle_extension_within(&t, Variant::Cautious, 10),
        Err(OracleError::Budget { size: 27, budget: 10 })
    ));
    assert!(matches!(oracle_extension(&fixture("modal_fact.ddl"), Variant::Simple), Err(OracleError::Invalid(_))));
}

#[test]
fn store_keeps_one_sign() {
    let mut s = TagStore::default();
    assert!(s.insert(tag(Sign::Plus, Mode::C, lit("a"))).unwrap());
    assert!(!s.insert(tag(Sign::Plus, Mode::C, lit("a"))).unwrap());
    assert!(s.insert(tag(Sign::Minus, Mode::C, lit("a"))).is_err());
    assert!(s.insert(tag(Sign::Minus, Mode::O, lit("a"))).unwrap());
    assert_eq!(s.len(), 2);
}

#[test]
fn applicability() {
    let r = rule("r: => C b");
    assert!(!applicable(&TagStore::default(), &r, 0));
    assert!(applicable(&store(&[(Sign::Plus, Mode::C, meta("r"))]), &r, 0));

    let r = rule("r: ~O(q) => C b");
    let own = (Sign::Plus, Mode::C, meta("r"));
    assert!(!applicable(&store(std::slice::from_ref(&own)), &r, 0));
    assert!(applicable(&store(&[own.clone(), (Sign::Minus, Mode::O, lit("q"))]), &r, 0));
    assert!(discarded(&store(&[own.clone(), (Sign::Plus, Mode::O, lit("q"))]), &r, 0));

    let chi = rule("chi: g => C ~l");
    assert!(discarded(&store(&[(Sign::Minus, Mode::C, lit("g"))]), &chi, 0));
}

#[test]
fn chain_positions() {
    let mu = rule("mu: f2 => O a * b * c");
    let base = vec![(Sign::Plus, Mode::C, meta("mu")), (Sign::Plus, Mode::C, lit("f2"))];
    assert!(applicable(&store(&base), &mu, 0));
    assert!(!applicable(&store(&base), &mu, 1));
    let mut violated = base.clone();
    violated.push((Sign::Plus, Mode::O, lit("a")));
    violated.push((Sign::Plus, Mode::C, lit("~a")));
    assert!(applicable(&store(&violated), &mu, 1));
    // b complied with, so the third element is not owed
    violated.push((Sign::Plus, Mode::O, lit("b")));
    violated.push((Sign::Minus, Mode::C, lit("~b")));
    assert!(!applicable(&store(&violated), &mu, 2));
    assert!(discarded(&store(&violated), &mu, 2));
}

#[test]
fn first_step_decides_facts() {
    let t = parse_theory("fact a. r: a => C b.").unwrap();
    let s = step(&t, &TagStore::default(), Variant::Cautious).unwrap();
    assert!(s.holds(Sign::Plus, Mode::C, &lit("a")));
    assert!(s.holds(Sign::Minus, Mode::C, &lit("~a")));
    assert!(s.holds(Sign::Plus, Mode::C, &meta("r")));
    assert_eq!(s.get(Mode::C, &lit("b")), None);
}

#[test]
fn step_is_monotone() {
    for seed in 0..100 {
        let t = generate_theory(Family::Random, 30, seed);
        let mut s = TagStore::default();
        loop {
            let next = step(&t, &s, Variant::Cautious).unwrap();
            assert!(s.formulas().is_subset(&next.formulas()), "seed {seed}");
            if next.len() == s.len() {
                break;
            }
            s = next;
        }
    }
}

#[test]
fn fixpoints_of_the_worked_examples() {
    let e = oracle_extension(&fixture("example6.ddl"), Variant::Cautious).unwrap();
    for s in ["alpha", "~alpha"] {
        assert!(e.is_proved(Mode::P, &meta(s)));
        assert!(e.is_refuted(Mode::C, &meta(s)));
    }
    let e = oracle_extension(&fixture("example3.ddl"), Variant::Cautious).unwrap();
    assert!(e.is_proved(Mode::O, &lit("~l")));
    assert!(e.is_refuted(Mode::P, &lit("l")));
    assert!(e.is_proved(Mode::C, &lit("q")));
}

#[test]
fn broken_team_defeat_is_caught() {
    let t = fixture("example1.ddl");
    let mut s = EngineState::new(&t, Variant::Cautious).unwrap();
    s.disable_team_defeat();
    s.run(Order::Canonical);
    let oracle = oracle_extension(&t, Variant::Cautious).unwrap();
    let diff = compare(&s.extension(), &oracle);
    assert!(diff.iter().any(|m| m.mode == Mode::C && m.subject == lit("l")), "{diff:?}");
    assert!(diff[0].to_string().contains("oracle"));
}
