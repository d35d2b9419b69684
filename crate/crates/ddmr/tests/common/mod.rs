#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use ddmr::{parse_theory, Literal, Rule, RuleRef, Subject, Theory};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> Theory {
    let src = fs::read_to_string(fixture_dir().join(name)).expect("fixture readable");
    parse_theory(&src).expect("fixture parses")
}

/// Every fixture file name that validates.
pub fn valid_fixtures() -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(fixture_dir())
        .unwrap()
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.ends_with(".ddl") && n != "modal_fact.ddl")
        .collect();
    names.sort();
    names
}

/// Parses a single rule written without the final dot.
pub fn rule(src: &str) -> Rule {
    let mut t = parse_theory(&format!("{src}.")).expect("rule parses");
    assert_eq!(t.rules.len(), 1);
    t.rules.remove(0)
}

pub fn lit(s: &str) -> Subject {
    match s.strip_prefix('~') {
        Some(a) => Subject::Literal(Literal::neg(a)),
        None => Subject::Literal(Literal::pos(s)),
    }
}

pub fn meta(s: &str) -> Subject {
    match s.strip_prefix('~') {
        Some(a) => Subject::Rule(RuleRef::neg(a)),
        None => Subject::Rule(RuleRef::pos(s)),
    }
}
