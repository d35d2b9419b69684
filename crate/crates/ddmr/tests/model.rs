mod common;

use std::collections::BTreeSet;

use common::{fixture, lit, meta, rule};
use ddmr::{Complement, Literal, Mode, RuleRef, Subject};
use proptest::prelude::*;

proptest! {
    #[test]
    fn complement_is_an_involution(atom in "[a-z][a-z0-9_]{0,6}", positive: bool) {
        let l = Literal { atom, positive };
        prop_assert_ne!(l.complement(), l.clone());
        prop_assert_eq!(l.complement().complement(), l.clone());
        let s = Subject::Literal(l);
        prop_assert_eq!(s.complement().complement(), s);
    }

    #[test]
    fn rule_refs_complement_polarity(label in "[a-z]{1,6}", positive: bool) {
        let r = RuleRef { label: label.clone(), positive };
        prop_assert_eq!(r.complement(), RuleRef { label, positive: !positive });
    }
}

#[test]
fn content_equality_ignores_labels() {
    let a = rule("gamma: a => C b");
    let b = rule("zeta: a => C b");
    assert!(a.content_equal(&b));
    assert!(!a.content_equal(&rule("zeta: a => C ~b")));
    assert!(!a.content_equal(&rule("zeta: a => O b")));
    assert!(!a.content_equal(&rule("zeta: a ~> C b")));
    assert!(!a.content_equal(&rule("zeta: a, c => C b")));
}

#[test]
fn meta_rules_are_recognised() {
    assert!(!rule("a1: a => C b").is_meta());
    assert!(rule("m: => C (a1: a => C b)").is_meta());
    assert!(rule("m: (a1: a => C b) => C c").is_meta());
    assert!(rule("m: O[(a1: a => C b)] => C c").is_meta());
    let m = rule("m: (x: a => C b) => O (y: c => C d) * e");
    let nested: Vec<&str> = m.nested().iter().map(|r| r.label.as_str()).collect();
    assert_eq!(nested, ["x", "y"]);
    assert_eq!(m.concluded_labels(), ["y"]);
}

#[test]
fn herbrand_base_of_team_defeat() {
    let t = fixture("example1.ddl");
    let hb = t.herbrand_base();
    // seven atoms in both polarities, six labels in both polarities
    assert_eq!(hb.len(), 26);
    assert!(hb.contains(&lit("~g")));
    assert!(hb.contains(&meta("~chi")));
    assert_eq!(t.modal_herbrand_base().len(), 78);
}

#[test]
fn herbrand_base_includes_nested_rules() {
    let t = fixture("execution1.ddl");
    let hb = t.herbrand_base();
    for label in ["gamma", "nu", "kappa", "~gamma", "~kappa"] {
        assert!(hb.contains(&meta(label)), "{label}");
    }
    for l in ["a", "~a", "c", "~c", "f1", "~f2"] {
        assert!(hb.contains(&lit(l)), "{l}");
    }
}

#[test]
fn size_counts_literals_rules_and_pairs() {
    assert_eq!(fixture("sigma16.ddl").size(), 16);
    assert_eq!(fixture("example1.ddl").size(), 27);
    assert_eq!(fixture("loop.ddl").size(), 3);
}

#[test]
fn extended_superiority_lifts_concluded_pairs() {
    let t = fixture("example8.ddl");
    let ext = t.extended_superiority();
    let want: BTreeSet<(String, String)> = [("beta1", "alpha1"), ("beta1", "alpha2"), ("beta2", "alpha1"), ("beta2", "alpha2")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    assert_eq!(ext, t.superiority.union(&want).cloned().collect());
}

#[test]
fn top_level_and_label_lookup() {
    let t = fixture("execution1.ddl");
    assert!(t.is_top_level("alpha"));
    assert!(!t.is_top_level("gamma"));
    assert!(t.superior("gamma", "theta"));
    assert!(!t.superior("theta", "gamma"));
    let rules = t.rule_by_label();
    assert_eq!(rules["kappa"].mode, Mode::P);
    assert_eq!(rules.len(), 8);
}
