//! Well-formedness checks. Validation never fails; it reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::model::{Arrow, Complement, Element, Item, Mode, Rule, Theory};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    DuplicateLabel(String),
    InconsistentLabel(String),
    NestedMetaRule(String),
    ModalFact(String),
    ChainOnDefeater(String),
    ChainOnNonObligation(String),
    EmptyConsequent(String),
    UnknownLabel(String),
    DuplicateChainElement(String),
    BadIdentifier(String),
    ConstitutiveOperator(String),
    CyclicSuperiority,
    CyclicExtendedSuperiority,
    ContradictoryFacts(String),
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::DuplicateLabel(l) => write!(f, "duplicate label `{l}`"),
            Issue::InconsistentLabel(l) => write!(f, "label `{l}` is used with different content"),
            Issue::NestedMetaRule(l) => write!(f, "nesting depth exceeds one inside `{l}`"),
            Issue::ModalFact(x) => write!(f, "modal fact `{x}`"),
            Issue::ChainOnDefeater(l) => write!(f, "chain on defeater `{l}`"),
            Issue::ChainOnNonObligation(l) => write!(f, "chain on C/P rule `{l}`"),
            Issue::EmptyConsequent(l) => write!(f, "empty consequent in `{l}`"),
            Issue::UnknownLabel(l) => write!(f, "superiority names unknown label `{l}`"),
            Issue::DuplicateChainElement(l) => write!(f, "duplicate chain element in `{l}`"),
            Issue::BadIdentifier(x) => write!(f, "bad identifier `{x}`"),
            Issue::ConstitutiveOperator(l) => write!(f, "C used as a modal operator in `{l}`"),
            Issue::CyclicSuperiority => write!(f, "cyclic superiority"),
            Issue::CyclicExtendedSuperiority => write!(f, "cyclic extended superiority"),
            Issue::ContradictoryFacts(a) => write!(f, "contradictory facts `{a}` and `~{a}`"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

fn ident_ok(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

pub fn validate(t: &Theory) -> Report {
    let mut r = Report::default();

    for f in &t.facts {
        match f {
            Item::Literal(l) => {
                if !ident_ok(&l.atom) {
                    r.errors.push(Issue::BadIdentifier(l.atom.clone()));
                }
            }
            other => r.errors.push(Issue::ModalFact(other.to_string())),
        }
    }
    for l in t.fact_literals() {
        if l.positive && t.is_fact(&l.complement()) {
            r.warnings.push(Issue::ContradictoryFacts(l.atom.clone()));
        }
    }

    let mut top = BTreeSet::new();
    for rule in &t.rules {
        if !top.insert(rule.label.as_str()) {
            r.errors.push(Issue::DuplicateLabel(rule.label.clone()));
        }
        for n in rule.nested() {
            if n.is_meta() {
                r.errors.push(Issue::NestedMetaRule(rule.label.clone()));
            }
        }
    }

    let mut by_label: BTreeMap<&str, &Rule> = BTreeMap::new();
    let mut stack: Vec<&Rule> = t.rules.iter().collect();
    let mut reported = BTreeSet::new();
    while let Some(rule) = stack.pop() {
        check_shape(rule, &mut r);
        match by_label.get(rule.label.as_str()) {
            Some(prev) if !prev.content_equal(rule) => {
                if reported.insert(rule.label.as_str()) {
                    r.errors.push(Issue::InconsistentLabel(rule.label.clone()));
                }
            }
            Some(_) => {}
            None => {
                by_label.insert(&rule.label, rule);
            }
        }
        stack.extend(rule.nested());
    }

    for (a, b) in &t.superiority {
        for l in [a, b] {
            if !by_label.contains_key(l.as_str()) {
                r.errors.push(Issue::UnknownLabel(l.clone()));
            }
        }
    }
    if has_cycle(&t.superiority) {
        r.warnings.push(Issue::CyclicSuperiority);
    }
    let ext = t.extended_superiority();
    if ext != t.superiority && has_cycle(&ext) {
        r.warnings.push(Issue::CyclicExtendedSuperiority);
    }
    r
}

fn check_shape(rule: &Rule, r: &mut Report) {
    if !ident_ok(&rule.label) {
        r.errors.push(Issue::BadIdentifier(rule.label.clone()));
    }
    for item in &rule.antecedent {
        let atom = match item {
            Item::Literal(l) => Some(&l.atom),
            Item::Modal(m) => Some(&m.inner.atom),
            _ => None,
        };
        if let Some(a) = atom.filter(|a| !ident_ok(a)) {
            r.errors.push(Issue::BadIdentifier(a.clone()));
        }
        if let Item::Modal(m) = item {
            if m.mode == Mode::C {
                r.errors.push(Issue::ConstitutiveOperator(rule.label.clone()));
            }
        }
        if let Item::Deontic(d) = item {
            if d.mode == Mode::C {
                r.errors.push(Issue::ConstitutiveOperator(rule.label.clone()));
            }
        }
    }
    match rule.consequent.len() {
        0 => r.errors.push(Issue::EmptyConsequent(rule.label.clone())),
        1 => {}
        _ => {
            if rule.arrow == Arrow::Defeater {
                r.errors.push(Issue::ChainOnDefeater(rule.label.clone()));
            } else if rule.mode != Mode::O {
                r.errors.push(Issue::ChainOnNonObligation(rule.label.clone()));
            }
        }
    }
    let mut seen: Vec<&Element> = Vec::new();
    for e in &rule.consequent {
        if let Element::Literal(l) = e {
            if !ident_ok(&l.atom) {
                r.errors.push(Issue::BadIdentifier(l.atom.clone()));
            }
        }
        if seen.contains(&e) {
            r.errors.push(Issue::DuplicateChainElement(rule.label.clone()));
        }
        seen.push(e);
    }
}

/// Whether the directed graph given by `pairs` has a cycle (self-loops count).
pub fn has_cycle(pairs: &BTreeSet<(String, String)>) -> bool {
    let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (a, b) in pairs {
        adj.entry(a).or_default().push(b);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state: BTreeMap<&str, u8> = BTreeMap::new();
    for &start in adj.keys() {
        if state.get(start).copied().unwrap_or(0) != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        state.insert(start, 1);
        while let Some((node, next)) = stack.pop() {
            let succ = adj.get(node).map(Vec::as_slice).unwrap_or(&[]);
            if next < succ.len() {
                stack.push((node, next + 1));
                let s = succ[next];
                match state.get(s).copied().unwrap_or(0) {
                    1 => return true,
                    0 => {
                        state.insert(s, 1);
                        stack.push((s, 0));
                    }
                    _ => {}
                }
            } else {
                state.insert(node, 2);
            }
        }
    }
    false
}
