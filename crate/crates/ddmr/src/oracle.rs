//! A slow, literal evaluator of the proof conditions, used as ground truth
//! for the engine.
//!
//! Each step recomputes applicability of every rule from the tag store alone
//! and adds every tagged formula whose condition holds. Negative tags are
//! derived the same way (they are constructive), so the least fixpoint of
//! `step` is the extension; pairs it never decides are undetermined.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::conflict::Variant;
use crate::engine;
use crate::model::{
    Complement, Element, Extension, Item, Literal, Mode, Rule, RuleRef, Sign, Subject, TaggedFormula,
    Theory,
};
use crate::validate::{validate, Report};

/// Largest theory size the oracle accepts unless overridden by the
/// `DDMR_ORACLE_BUDGET` environment variable.
pub const DEFAULT_BUDGET: usize = 200;

#[derive(Clone, Debug, Error)]
pub enum OracleError {
    #[error("theory size {size} exceeds the oracle budget {budget}")]
    Budget { size: usize, budget: usize },
    #[error("theory has validation errors")]
    Invalid(Report),
    #[error("both signs derived for {0}")]
    Incoherent(String),
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
}

/// The budget in force: `DDMR_ORACLE_BUDGET` if set to a number, else the
/// default.
pub fn budget() -> usize {
    std::env::var("DDMR_ORACLE_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Established tagged formulas, at most one sign per mode and subject.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TagStore {
    tags: HashMap<Subject, [Option<Sign>; 3]>,
}

impl TagStore {
    pub fn get(&self, mode: Mode, s: &Subject) -> Option<Sign> {
        self.tags.get(s).and_then(|t| t[mode.index()])
    }

    pub fn holds(&self, sign: Sign, mode: Mode, s: &Subject) -> bool {
        self.get(mode, s) == Some(sign)
    }

    /// Adds a formula; returns whether it was new. Fails if the opposite sign
    /// is already present.
    pub fn insert(&mut self, f: TaggedFormula) -> Result<bool, OracleError> {
        let slot = &mut self.tags.entry(f.subject.clone()).or_default()[f.mode.index()];
        match *slot {
            Some(s) if s == f.sign => Ok(false),
            Some(_) => Err(OracleError::Incoherent(describe(&f))),
            None => {
                *slot = Some(f.sign);
                Ok(true)
            }
        }
    }

    pub fn len(&self) -> usize {
        self.tags.values().flatten().filter(|s| s.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn formulas(&self) -> BTreeSet<TaggedFormula> {
        let mut out = BTreeSet::new();
        for (s, tags) in &self.tags {
            for mode in Mode::ALL {
                if let Some(sign) = tags[mode.index()] {
                    out.insert(TaggedFormula { sign, mode, subject: s.clone() });
                }
            }
        }
        out
    }
}

fn describe(f: &TaggedFormula) -> String {
    format!("{} {}", f.mode.as_str(), f.subject)
}

fn is(x: &Literal) -> impl Fn(&Element) -> bool + '_ {
    move |e| matches!(e, Element::Literal(y) if y == x)
}

fn lit(l: &Literal) -> Subject {
    Subject::Literal(l.clone())
}

fn sign_of(positive: bool) -> Sign {
    if positive {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn flip(s: Sign) -> Sign {
    match s {
        Sign::Plus => Sign::Minus,
        Sign::Minus => Sign::Plus,
    }
}

/// The tag an antecedent item needs.
fn item_need(item: &Item) -> (Sign, Mode, Subject) {
    match item {
        Item::Literal(l) => (Sign::Plus, Mode::C, lit(l)),
        Item::Modal(m) => (sign_of(!m.negated), m.mode, lit(&m.inner)),
        Item::Rule(x) => (Sign::Plus, Mode::C, Subject::Rule(x.subject())),
        Item::Deontic(d) => (sign_of(!d.negated), d.mode, Subject::Rule(d.expr.subject())),
    }
}

/// The two tags needed to move past a chain element: it is obligatory and it
/// was violated.
fn chain_need(e: &Element) -> [(Sign, Mode, Subject); 2] {
    match e {
        Element::Literal(l) => [(Sign::Plus, Mode::O, lit(l)), (Sign::Plus, Mode::C, lit(&l.complement()))],
        Element::Rule(x) => {
            let s = Subject::Rule(x.subject());
            [(Sign::Plus, Mode::O, s.clone()), (Sign::Minus, Mode::C, s)]
        }
    }
}

fn own_need(rule: &Rule) -> (Sign, Mode, Subject) {
    (Sign::Plus, Mode::C, Subject::Rule(RuleRef::pos(&rule.label)))
}

/// Whether `rule` is applicable at chain position `index` (0-based).
pub fn applicable(store: &TagStore, rule: &Rule, index: usize) -> bool {
    assert!(index < rule.consequent.len(), "index {index} out of range for `{}`", rule.label);
    let ok = |(s, m, x): (Sign, Mode, Subject)| store.holds(s, m, &x);
    ok(own_need(rule))
        && rule.antecedent.iter().all(|a| ok(item_need(a)))
        && rule.consequent[..index].iter().all(|e| chain_need(e).into_iter().all(ok))
}

/// Whether `rule` is discarded at chain position `index`: some requirement
/// of applicability has been refuted.
pub fn discarded(store: &TagStore, rule: &Rule, index: usize) -> bool {
    assert!(index < rule.consequent.len(), "index {index} out of range for `{}`", rule.label);
    let bad = |(s, m, x): (Sign, Mode, Subject)| store.holds(flip(s), m, &x);
    bad(own_need(rule))
        || rule.antecedent.iter().any(|a| bad(item_need(a)))
        || rule.consequent[..index].iter().any(|e| chain_need(e).into_iter().any(bad))
}

type Occ = (usize, usize);

struct Opposer {
    occ: Occ,
    defenders: Vec<Occ>,
}

struct Step<'a> {
    t: &'a Theory,
    v: Variant,
    rules: Vec<&'a Rule>,
    by_label: HashMap<&'a str, &'a Rule>,
    top: HashSet<&'a str>,
    app: Vec<Vec<bool>>,
    dis: Vec<Vec<bool>>,
    store: &'a TagStore,
}

impl<'a> Step<'a> {
    fn new(t: &'a Theory, v: Variant, store: &'a TagStore) -> Step<'a> {
        let rules = t.rules_appearing();
        let app = rules
            .iter()
            .map(|r| (0..r.consequent.len()).map(|i| applicable(store, r, i)).collect())
            .collect();
        let dis = rules
            .iter()
            .map(|r| (0..r.consequent.len()).map(|i| discarded(store, r, i)).collect())
            .collect();
        Step {
            t,
            v,
            by_label: rules.iter().map(|r| (r.label.as_str(), *r)).collect(),
            top: t.rules.iter().map(|r| r.label.as_str()).collect(),
            rules,
            app,
            dis,
            store,
        }
    }

    fn occurrences(&self, mode: Mode, pred: impl Fn(&Element) -> bool) -> Vec<Occ> {
        let mut out = Vec::new();
        for (r, rule) in self.rules.iter().enumerate() {
            if rule.mode != mode {
                continue;
            }
            for (i, e) in rule.consequent.iter().enumerate() {
                if pred(e) {
                    out.push((r, i));
                }
            }
        }
        out
    }

    fn stronger(&self, a: Occ, b: Occ) -> bool {
        self.t.superior(&self.rules[a.0].label, &self.rules[b.0].label)
    }

    fn app(&self, o: Occ) -> bool {
        self.app[o.0][o.1]
    }

    fn dis(&self, o: Occ) -> bool {
        self.dis[o.0][o.1]
    }

    /// Evaluates the shared shape of every proof condition and returns
    /// whether the positive and the negative body hold.
    fn contest(&self, supporters: &[Occ], opposers: &[Opposer]) -> (bool, bool) {
        let supporters: Vec<Occ> =
            supporters.iter().copied().filter(|o| self.rules[o.0].is_defeasible()).collect();
        let plus = supporters.iter().any(|s| self.app(*s))
            && opposers
                .iter()
                .all(|o| self.dis(o.occ) || o.defenders.iter().any(|d| self.app(*d)));
        let minus = supporters.iter().all(|s| self.dis(*s))
            || opposers
                .iter()
                .any(|o| self.app(o.occ) && o.defenders.iter().all(|d| self.dis(*d)));
        (plus, minus)
    }

    fn literal(&self, mode: Mode, l: &Literal) -> (bool, bool) {
        let nl = l.complement();
        let with_defenders = |attackers: Vec<Occ>, defenders: Vec<Occ>| -> Vec<Opposer> {
            attackers
                .into_iter()
                .map(|g| Opposer {
                    occ: g,
                    defenders: defenders.iter().copied().filter(|z| self.stronger(*z, g)).collect(),
                })
                .collect()
        };
        match mode {
            Mode::C => {
                if self.t.is_fact(l) {
                    return (true, false);
                }
                if self.t.is_fact(&nl) {
                    return (false, true);
                }
                let sup = self.occurrences(Mode::C, is(l));
                let opp = with_defenders(self.occurrences(Mode::C, is(&nl)), sup.clone());
                self.contest(&sup, &opp)
            }
            Mode::O => {
                let sup = self.occurrences(Mode::O, is(l));
                let mut att = self.occurrences(Mode::O, is(&nl));
                att.extend(self.occurrences(Mode::P, is(&nl)));
                let opp = with_defenders(att, sup.clone());
                self.contest(&sup, &opp)
            }
            Mode::P => {
                let s = lit(l);
                if self.store.holds(Sign::Plus, Mode::O, &s) {
                    return (true, false);
                }
                let sup = self.occurrences(Mode::P, is(l));
                let mut def = self.occurrences(Mode::O, is(l));
                def.extend(sup.iter().copied());
                let opp = with_defenders(self.occurrences(Mode::O, is(&nl)), def);
                let (plus, minus) = self.contest(&sup, &opp);
                (plus, minus && self.store.holds(Sign::Minus, Mode::O, &s))
            }
        }
    }

    fn rule(&self, mode: Mode, x: &RuleRef) -> (bool, bool) {
        let content = self.by_label[x.label.as_str()];
        if mode == Mode::C {
            if x.positive && self.top.contains(x.label.as_str()) {
                return (true, false);
            }
            let blocked = self.t.rules.iter().any(|w| self.v.conflicts(true, w, x.positive, content));
            if blocked {
                return (false, true);
            }
        }
        if mode == Mode::P && self.store.holds(Sign::Plus, Mode::O, &Subject::Rule(x.clone())) {
            return (true, false);
        }
        let concludes_x = |e: &Element| matches!(e, Element::Rule(y) if y.subject() == *x);
        let sup = self.occurrences(mode, concludes_x);
        let (attack, defend): (&[Mode], &[Mode]) = match mode {
            Mode::C => (&[Mode::C], &[Mode::C]),
            Mode::O => (&[Mode::O, Mode::P], &[Mode::O]),
            Mode::P => (&[Mode::O], &[Mode::O, Mode::P]),
        };
        let mut opp = Vec::new();
        for &am in attack {
            for (r, rule) in self.rules.iter().enumerate() {
                if rule.mode != am {
                    continue;
                }
                for (j, e) in rule.consequent.iter().enumerate() {
                    let Element::Rule(e) = e else { continue };
                    if !self.v.conflicts(e.positive, &e.rule, x.positive, content) {
                        continue;
                    }
                    let g = (r, j);
                    let mut defenders = Vec::new();
                    for &dm in defend {
                        for (z, zr) in self.rules.iter().enumerate() {
                            if zr.mode != dm {
                                continue;
                            }
                            for (k, f) in zr.consequent.iter().enumerate() {
                                let Element::Rule(f) = f else { continue };
                                let d = (z, k);
                                let wins = match self.v {
                                    Variant::Simple => {
                                        f.positive == x.positive
                                            && (f.label() == x.label || f.label() == e.label())
                                            && self.stronger(d, g)
                                    }
                                    Variant::Cautious => {
                                        z != r
                                            && self.v.conflicts(f.positive, &f.rule, e.positive, &e.rule)
                                            && (self.stronger(d, g)
                                                || (!self.stronger(g, d)
                                                    && self.t.superior(f.label(), e.label())))
                                    }
                                };
                                if wins {
                                    defenders.push(d);
                                }
                            }
                        }
                    }
                    opp.push(Opposer { occ: g, defenders });
                }
            }
        }
        let (plus, minus) = self.contest(&sup, &opp);
        if mode == Mode::P {
            return (plus, minus && self.store.holds(Sign::Minus, Mode::O, &Subject::Rule(x.clone())));
        }
        (plus, minus)
    }
}

/// One application of the consequence operator: the input store plus every
/// tagged formula whose proof condition it satisfies.
pub fn step(t: &Theory, store: &TagStore, v: Variant) -> Result<TagStore, OracleError> {
    let ctx = Step::new(t, v, store);
    let mut next = store.clone();
    for (mode, subject) in t.modal_herbrand_base() {
        if store.get(mode, &subject).is_some() {
            continue;
        }
        let (plus, minus) = match &subject {
            Subject::Literal(l) => ctx.literal(mode, l),
            Subject::Rule(x) => ctx.rule(mode, x),
        };
        if plus && minus {
            return Err(OracleError::Incoherent(format!("{} {subject}", mode.as_str())));
        }
        if plus || minus {
            next.insert(TaggedFormula { sign: sign_of(plus), mode, subject })?;
        }
    }
    Ok(next)
}

/// The least fixpoint of [`step`], refusing theories over the budget.
pub fn oracle_extension(t: &Theory, v: Variant) -> Result<Extension, OracleError> {
    oracle_extension_within(t, v, budget())
}

pub fn oracle_extension_within(t: &Theory, v: Variant, budget: usize) -> Result<Extension, OracleError> {
    let report = validate(t);
    if !report.is_ok() {
        return Err(OracleError::Invalid(report));
    }
    let size = t.size();
    if size > budget {
        return Err(OracleError::Budget { size, budget });
    }
    let mut store = TagStore::default();
    loop {
        let next = step(t, &store, v)?;
        if next.len() == store.len() {
            break;
        }
        store = next;
    }
    let mut e = Extension::default();
    for (mode, subject) in t.modal_herbrand_base() {
        match store.get(mode, &subject) {
            Some(Sign::Plus) => e.proved.insert((mode, subject)),
            Some(Sign::Minus) => e.refuted.insert((mode, subject)),
            None => e.undetermined.insert((mode, subject)),
        };
    }
    Ok(e)
}

/// A pair the engine and the oracle classify differently.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mismatch {
    pub mode: Mode,
    pub subject: Subject,
    pub engine: &'static str,
    pub oracle: &'static str,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: engine {}, oracle {}", self.mode.as_str(), self.subject, self.engine, self.oracle)
    }
}

fn class(e: &Extension, key: &(Mode, Subject)) -> &'static str {
    if e.proved.contains(key) {
        "+"
    } else if e.refuted.contains(key) {
        "-"
    } else if e.undetermined.contains(key) {
        "undetermined"
    } else {
        "absent"
    }
}

/// Every pair on which two extensions disagree.
pub fn compare(engine: &Extension, oracle: &Extension) -> Vec<Mismatch> {
    let keys: BTreeSet<&(Mode, Subject)> = [engine, oracle]
        .into_iter()
        .flat_map(|e| e.proved.iter().chain(&e.refuted).chain(&e.undetermined))
        .collect();
    keys.into_iter()
        .filter_map(|k| {
            let (a, b) = (class(engine, k), class(oracle, k));
            (a != b).then(|| Mismatch { mode: k.0, subject: k.1.clone(), engine: a, oracle: b })
        })
        .collect()
}

/// Runs engine and oracle on the same theory and reports disagreements.
pub fn check_equivalence(t: &Theory, v: Variant) -> Result<Vec<Mismatch>, OracleError> {
    let oracle = oracle_extension(t, v)?;
    let engine = engine::compute_extension(t, v)?;
    Ok(compare(&engine, &oracle))
}
