//! Simple and cautious conflict between rules, and the opposition/support
//! index built from them.

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{Arrow, Complement, Element, Mode, Rule, RuleExpr, RuleRef, Theory};

/// Which conflict relation governs the meta level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variant {
    Simple,
    Cautious,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Simple => "simple",
            Variant::Cautious => "cautious",
        }
    }

    /// Conflict between two rules taken with a polarity each.
    pub fn conflicts(self, pa: bool, a: &Rule, pb: bool, b: &Rule) -> bool {
        match self {
            Variant::Simple => simple(pa, a, pb, b),
            Variant::Cautious => cautious(pa, a, pb, b),
        }
    }

    pub fn exprs_conflict(self, a: &RuleExpr, b: &RuleExpr) -> bool {
        self.conflicts(a.positive, &a.rule, b.positive, &b.rule)
    }
}

fn rule_elements(r: &Rule) -> impl Iterator<Item = &RuleExpr> {
    r.consequent.iter().filter_map(|e| match e {
        Element::Rule(x) => Some(x),
        Element::Literal(_) => None,
    })
}

fn negation_shape(pa: bool, a: &Rule, pb: bool, b: &Rule) -> bool {
    pa != pb && a.content_equal(b)
}

fn simple(pa: bool, a: &Rule, pb: bool, b: &Rule) -> bool {
    if negation_shape(pa, a, pb, b) {
        return true;
    }
    pa && pb
        && a.label != b.label
        && rule_elements(a).any(|e| rule_elements(b).any(|f| simple_expr(e, f)))
}

fn simple_expr(e: &RuleExpr, f: &RuleExpr) -> bool {
    simple(e.positive, &e.rule, f.positive, &f.rule)
}

fn single_complementary(a: &Rule, b: &Rule) -> bool {
    a.consequent.len() == 1
        && b.consequent.len() == 1
        && a.consequent[0] == b.consequent[0].complement()
}

fn chain_clash(c: &[Element], d: &[Element]) -> bool {
    for (x, y) in c.iter().zip(d) {
        if *x == y.complement() {
            return true;
        }
        if x != y {
            return false;
        }
    }
    c.len() != d.len()
}

/// The positive-positive cases: same antecedent with clashing heads, or
/// meta-rules with clashing concluded rules.
fn content_clash(a: &Rule, b: &Rule) -> bool {
    if a.antecedent == b.antecedent {
        if a.mode == b.mode && single_complementary(a, b) {
            return true;
        }
        let op = matches!((a.mode, b.mode), (Mode::O, Mode::P) | (Mode::P, Mode::O));
        if op && single_complementary(a, b) {
            return true;
        }
        let both_o = a.mode == Mode::O
            && b.mode == Mode::O
            && a.arrow == Arrow::Defeasible
            && b.arrow == Arrow::Defeasible;
        if both_o && chain_clash(&a.consequent, &b.consequent) {
            return true;
        }
    }
    false
}

fn cautious(pa: bool, a: &Rule, pb: bool, b: &Rule) -> bool {
    if negation_shape(pa, a, pb, b) {
        return true;
    }
    if !(pa && pb) || a.label == b.label {
        return false;
    }
    content_clash(a, b)
        || rule_elements(a).any(|e| {
            rule_elements(b).any(|f| cautious(e.positive, &e.rule, f.positive, &f.rule))
        })
}

pub fn simply_conflicts(a: &RuleExpr, b: &RuleExpr) -> bool {
    Variant::Simple.exprs_conflict(a, b)
}

pub fn cautiously_conflicts(a: &RuleExpr, b: &RuleExpr) -> bool {
    Variant::Cautious.exprs_conflict(a, b)
}

/// Rule modes that may attack a subject proved with `mode`.
pub fn attacker_modes(mode: Mode) -> &'static [Mode] {
    match mode {
        Mode::C => &[Mode::C],
        Mode::O => &[Mode::O, Mode::P],
        Mode::P => &[Mode::O],
    }
}

/// Rule modes that may defend a subject proved with `mode`.
pub fn defender_modes(mode: Mode) -> &'static [Mode] {
    match mode {
        Mode::C => &[Mode::C],
        Mode::O => &[Mode::O],
        Mode::P => &[Mode::O, Mode::P],
    }
}

/// Per-rule opposition and support sets plus the subject-level conflict
/// relation over every rule expression of the Herbrand base.
#[derive(Clone, Debug, Default)]
pub struct ConflictIndex {
    pub variant: Option<Variant>,
    /// Label to the labels of the rules that conclude it (either polarity).
    pub producers: BTreeMap<String, BTreeSet<String>>,
    /// Per mode, label to the rules of the attacking modes whose conclusions
    /// clash with what the rule puts at stake.
    pub opp: [BTreeMap<String, BTreeSet<String>>; 3],
    /// Per mode, label to the rules of the defending modes whose conclusions
    /// clash with a conclusion of some member of `opp`.
    pub supp: [BTreeMap<String, BTreeSet<String>>; 3],
    /// Per mode, label to the opposers already known to be defeated.
    pub infd: [BTreeMap<String, BTreeSet<String>>; 3],
    /// Rule expression to the rule expressions it conflicts with.
    pub conflicting: BTreeMap<RuleRef, BTreeSet<RuleRef>>,
}

impl ConflictIndex {
    pub fn build(t: &Theory, v: Variant) -> ConflictIndex {
        let rules = t.rules_appearing();
        let by_label: BTreeMap<&str, &Rule> =
            rules.iter().map(|r| (r.label.as_str(), *r)).collect();
        let mut ix = ConflictIndex { variant: Some(v), ..Default::default() };
        for r in &rules {
            for p in [true, false] {
                ix.conflicting.entry(RuleRef { label: r.label.clone(), positive: p }).or_default();
            }
        }
        let relate = |ix: &mut ConflictIndex, a: RuleRef, b: RuleRef| {
            ix.conflicting.entry(a.clone()).or_default().insert(b.clone());
            ix.conflicting.entry(b).or_default().insert(a);
        };

        // negation shape: group by content
        let mut by_content: BTreeMap<Rule, Vec<&str>> = BTreeMap::new();
        for r in &rules {
            let mut key = (*r).clone();
            key.label.clear();
            by_content.entry(key).or_default().push(&r.label);
        }
        for group in by_content.values() {
            for a in group {
                for b in group {
                    relate(&mut ix, RuleRef::pos(*a), RuleRef::neg(*b));
                }
            }
        }

        // same-antecedent clashes
        if v == Variant::Cautious {
            let mut by_body: BTreeMap<_, Vec<&Rule>> = BTreeMap::new();
            for r in &rules {
                by_body.entry(&r.antecedent).or_default().push(*r);
            }
            for group in by_body.values() {
                for (i, a) in group.iter().enumerate() {
                    for b in &group[i + 1..] {
                        if content_clash(a, b) {
                            relate(&mut ix, RuleRef::pos(&a.label), RuleRef::pos(&b.label));
                        }
                    }
                }
            }
        }

        // meta-rules whose concluded rules clash
        let mut carriers: BTreeMap<RuleRef, BTreeSet<&str>> = BTreeMap::new();
        for r in &rules {
            for e in rule_elements(r) {
                carriers.entry(e.subject()).or_default().insert(&r.label);
                ix.producers.entry(e.label().to_string()).or_default().insert(r.label.clone());
            }
        }
        let element_level = ix.conflicting.clone();
        for (e, metas) in &carriers {
            for f in element_level.get(e).into_iter().flatten() {
                for m in metas {
                    for n in carriers.get(f).into_iter().flatten() {
                        if m != n {
                            relate(&mut ix, RuleRef::pos(*m), RuleRef::pos(*n));
                        }
                    }
                }
            }
        }

        // what each rule puts at stake: its concluded rules if it is a
        // meta-rule, itself otherwise
        let carriers_of = |ix: &ConflictIndex, targets: &[RuleRef], modes: &[Mode]| {
            let mut out = BTreeSet::new();
            for t in targets {
                for s in ix.conflicting.get(t).into_iter().flatten() {
                    for g in carriers.get(s).into_iter().flatten() {
                        if modes.contains(&by_label[g].mode) {
                            out.insert(g.to_string());
                        }
                    }
                }
            }
            out
        };
        for r in &rules {
            let concl: Vec<RuleRef> = rule_elements(r).map(RuleExpr::subject).collect();
            let at_stake = if concl.is_empty() { vec![RuleRef::pos(&r.label)] } else { concl };
            for mode in Mode::ALL {
                let mut opp = carriers_of(&ix, &at_stake, attacker_modes(mode));
                opp.remove(&r.label);
                let mut supp = BTreeSet::new();
                for g in &opp {
                    let g_concl: Vec<RuleRef> =
                        rule_elements(by_label[g.as_str()]).map(RuleExpr::subject).collect();
                    supp.extend(carriers_of(&ix, &g_concl, defender_modes(mode)));
                }
                supp.remove(&r.label);
                ix.opp[mode.index()].insert(r.label.clone(), opp);
                ix.supp[mode.index()].insert(r.label.clone(), supp);
                ix.infd[mode.index()].insert(r.label.clone(), BTreeSet::new());
            }
        }
        ix
    }

    pub fn opp(&self, mode: Mode, label: &str) -> BTreeSet<String> {
        self.opp[mode.index()].get(label).cloned().unwrap_or_default()
    }

    pub fn supp(&self, mode: Mode, label: &str) -> BTreeSet<String> {
        self.supp[mode.index()].get(label).cloned().unwrap_or_default()
    }

    pub fn conflicts_with(&self, a: &RuleRef) -> impl Iterator<Item = &RuleRef> {
        self.conflicting.get(a).into_iter().flatten()
    }
}
