//! The object language: literals, modal literals, rules, meta-rules, theories
//! and the structural utilities defined over them.

use std::collections::{BTreeMap, BTreeSet};

/// A propositional atom or its negation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: String,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: impl Into<String>) -> Self {
        Literal { atom: atom.into(), positive: true }
    }

    pub fn neg(atom: impl Into<String>) -> Self {
        Literal { atom: atom.into(), positive: false }
    }
}

/// Constitutive, obligation or permission.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    C,
    O,
    P,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::C, Mode::O, Mode::P];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::C => "C",
            Mode::O => "O",
            Mode::P => "P",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// `O l`, `P l`, `~O l` or `~P l`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModalLiteral {
    pub mode: Mode,
    pub negated: bool,
    pub inner: Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arrow {
    Defeasible,
    Defeater,
}

/// A rule asserted (`positive`) or denied inside a meta-rule.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleExpr {
    pub positive: bool,
    pub rule: Box<Rule>,
}

impl RuleExpr {
    pub fn label(&self) -> &str {
        &self.rule.label
    }

    /// The label-and-polarity view used as a subject of meta tags.
    pub fn subject(&self) -> RuleRef {
        RuleRef { label: self.rule.label.clone(), positive: self.positive }
    }
}

/// `O[r]`, `P[r]`, `~O[r]` or `~P[r]` over a rule expression.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DeonticRuleExpr {
    pub mode: Mode,
    pub negated: bool,
    pub expr: RuleExpr,
}

/// One position of a consequent chain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Literal(Literal),
    Rule(RuleExpr),
}

impl Element {
    pub fn subject(&self) -> Subject {
        match self {
            Element::Literal(l) => Subject::Literal(l.clone()),
            Element::Rule(r) => Subject::Rule(r.subject()),
        }
    }
}

/// One member of a rule body.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Item {
    Literal(Literal),
    Modal(ModalLiteral),
    Rule(RuleExpr),
    Deontic(DeonticRuleExpr),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub label: String,
    pub antecedent: BTreeSet<Item>,
    pub arrow: Arrow,
    pub mode: Mode,
    /// A single element unless this is a defeasible O-rule.
    pub consequent: Vec<Element>,
}

impl Rule {
    pub fn is_defeasible(&self) -> bool {
        self.arrow == Arrow::Defeasible
    }

    /// True when any body item or head element is a rule expression.
    pub fn is_meta(&self) -> bool {
        self.antecedent.iter().any(|i| matches!(i, Item::Rule(_) | Item::Deontic(_)))
            || self.consequent.iter().any(|e| matches!(e, Element::Rule(_)))
    }

    /// Equality of everything except the label.
    pub fn content_equal(&self, other: &Rule) -> bool {
        self.arrow == other.arrow
            && self.mode == other.mode
            && self.antecedent == other.antecedent
            && self.consequent == other.consequent
    }

    /// Rules embedded in the body and head, in textual order.
    pub fn nested(&self) -> Vec<&Rule> {
        let mut out = Vec::new();
        for item in &self.antecedent {
            match item {
                Item::Rule(r) => out.push(&*r.rule),
                Item::Deontic(d) => out.push(&*d.expr.rule),
                _ => {}
            }
        }
        for e in &self.consequent {
            if let Element::Rule(r) = e {
                out.push(&*r.rule);
            }
        }
        out
    }

    /// Labels of the rules concluded by this rule (empty for standard rules).
    pub fn concluded_labels(&self) -> Vec<&str> {
        self.consequent
            .iter()
            .filter_map(|e| match e {
                Element::Rule(r) => Some(r.label()),
                Element::Literal(_) => None,
            })
            .collect()
    }

    fn size(&self) -> usize {
        let body: usize = self
            .antecedent
            .iter()
            .map(|i| match i {
                Item::Literal(_) | Item::Modal(_) => 1,
                Item::Rule(r) => r.rule.size(),
                Item::Deontic(d) => d.expr.rule.size(),
            })
            .sum();
        let head: usize = self
            .consequent
            .iter()
            .map(|e| match e {
                Element::Literal(_) => 1,
                Element::Rule(r) => r.rule.size(),
            })
            .sum();
        1 + body + head
    }
}

/// A rule label with a polarity: the subject of a meta tag.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RuleRef {
    pub label: String,
    pub positive: bool,
}

impl RuleRef {
    pub fn pos(label: impl Into<String>) -> Self {
        RuleRef { label: label.into(), positive: true }
    }

    pub fn neg(label: impl Into<String>) -> Self {
        RuleRef { label: label.into(), positive: false }
    }
}

/// What a tagged formula is about: a literal or a rule expression.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Subject {
    Literal(Literal),
    Rule(RuleRef),
}

impl Subject {
    pub fn level(&self) -> Level {
        match self {
            Subject::Literal(_) => Level::Literal,
            Subject::Rule(_) => Level::Meta,
        }
    }
}

/// Involutive negation of the outermost polarity.
pub trait Complement {
    fn complement(&self) -> Self;
}

impl Complement for Literal {
    fn complement(&self) -> Self {
        Literal { atom: self.atom.clone(), positive: !self.positive }
    }
}

impl Complement for ModalLiteral {
    fn complement(&self) -> Self {
        ModalLiteral { mode: self.mode, negated: !self.negated, inner: self.inner.clone() }
    }
}

impl Complement for RuleExpr {
    fn complement(&self) -> Self {
        RuleExpr { positive: !self.positive, rule: self.rule.clone() }
    }
}

impl Complement for DeonticRuleExpr {
    fn complement(&self) -> Self {
        DeonticRuleExpr { mode: self.mode, negated: !self.negated, expr: self.expr.clone() }
    }
}

impl Complement for RuleRef {
    fn complement(&self) -> Self {
        RuleRef { label: self.label.clone(), positive: !self.positive }
    }
}

impl Complement for Subject {
    fn complement(&self) -> Self {
        match self {
            Subject::Literal(l) => Subject::Literal(l.complement()),
            Subject::Rule(r) => Subject::Rule(r.complement()),
        }
    }
}

impl Complement for Element {
    fn complement(&self) -> Self {
        match self {
            Element::Literal(l) => Element::Literal(l.complement()),
            Element::Rule(r) => Element::Rule(r.complement()),
        }
    }
}

/// Facts, rules and a superiority relation over rule labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    /// Only plain literals are admitted; anything else is reported by validation.
    pub facts: BTreeSet<Item>,
    pub rules: Vec<Rule>,
    /// `(a, b)` means rule `a` is superior to rule `b`.
    pub superiority: BTreeSet<(String, String)>,
}

impl Theory {
    pub fn fact_literals(&self) -> impl Iterator<Item = &Literal> {
        self.facts.iter().filter_map(|f| match f {
            Item::Literal(l) => Some(l),
            _ => None,
        })
    }

    pub fn is_fact(&self, l: &Literal) -> bool {
        self.facts.contains(&Item::Literal(l.clone()))
    }

    /// Every rule appearing in the theory, top-level first, then nested rules,
    /// each label once.
    pub fn rules_appearing(&self) -> Vec<&Rule> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for r in &self.rules {
            if seen.insert(r.label.as_str()) {
                out.push(r);
            }
        }
        for r in &self.rules {
            for n in r.nested() {
                if seen.insert(n.label.as_str()) {
                    out.push(n);
                }
            }
        }
        out
    }

    pub fn is_top_level(&self, label: &str) -> bool {
        self.rules.iter().any(|r| r.label == label)
    }

    pub fn superior(&self, a: &str, b: &str) -> bool {
        self.superiority.contains(&(a.to_string(), b.to_string()))
    }

    /// Literals and their complements, and every appearing rule label in both
    /// polarities.
    pub fn herbrand_base(&self) -> BTreeSet<Subject> {
        let mut hb = BTreeSet::new();
        let add_lit = |hb: &mut BTreeSet<Subject>, l: &Literal| {
            hb.insert(Subject::Literal(l.clone()));
            hb.insert(Subject::Literal(l.complement()));
        };
        for f in &self.facts {
            match f {
                Item::Literal(l) => add_lit(&mut hb, l),
                Item::Modal(m) => add_lit(&mut hb, &m.inner),
                _ => {}
            }
        }
        for r in self.rules_appearing() {
            hb.insert(Subject::Rule(RuleRef::pos(r.label.clone())));
            hb.insert(Subject::Rule(RuleRef::neg(r.label.clone())));
            for item in &r.antecedent {
                match item {
                    Item::Literal(l) => add_lit(&mut hb, l),
                    Item::Modal(m) => add_lit(&mut hb, &m.inner),
                    _ => {}
                }
            }
            for e in &r.consequent {
                if let Element::Literal(l) = e {
                    add_lit(&mut hb, l);
                }
            }
        }
        hb
    }

    pub fn modal_herbrand_base(&self) -> BTreeSet<(Mode, Subject)> {
        let hb = self.herbrand_base();
        Mode::ALL
            .iter()
            .flat_map(|m| hb.iter().map(move |s| (*m, s.clone())))
            .collect()
    }

    /// Literal occurrences plus rule occurrences plus two per superiority pair.
    pub fn size(&self) -> usize {
        self.facts.len()
            + self.rules.iter().map(Rule::size).sum::<usize>()
            + 2 * self.superiority.len()
    }

    /// `>` plus the pairs of meta-rules whose concluded rules are ordered by `>`.
    pub fn extended_superiority(&self) -> BTreeSet<(String, String)> {
        let mut out = self.superiority.clone();
        let metas: Vec<&Rule> =
            self.rules.iter().filter(|r| !r.concluded_labels().is_empty()).collect();
        for a in &metas {
            for b in &metas {
                let lifted = a.concluded_labels().iter().any(|ca| {
                    b.concluded_labels().iter().any(|cb| self.superior(ca, cb))
                });
                if lifted {
                    out.insert((a.label.clone(), b.label.clone()));
                }
            }
        }
        out
    }

    /// Index from label to the rule carrying it (first occurrence).
    pub fn rule_by_label(&self) -> BTreeMap<&str, &Rule> {
        self.rules_appearing().into_iter().map(|r| (r.label.as_str(), r)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Literal,
    Meta,
}

/// `±∂□ l` or `±∂ᵐ□ r`; the level follows from the subject kind.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedFormula {
    pub sign: Sign,
    pub mode: Mode,
    pub subject: Subject,
}

impl TaggedFormula {
    pub fn level(&self) -> Level {
        self.subject.level()
    }
}

/// The decided tags of a theory and the pairs left open at the fixpoint.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Extension {
    pub proved: BTreeSet<(Mode, Subject)>,
    pub refuted: BTreeSet<(Mode, Subject)>,
    pub undetermined: BTreeSet<(Mode, Subject)>,
}

/// Result of asking whether a tagged formula holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Proved,
    Refuted,
    Undetermined,
}

impl Extension {
    pub fn is_proved(&self, mode: Mode, subject: &Subject) -> bool {
        self.proved.contains(&(mode, subject.clone()))
    }

    pub fn is_refuted(&self, mode: Mode, subject: &Subject) -> bool {
        self.refuted.contains(&(mode, subject.clone()))
    }

    pub fn contains(&self, f: &TaggedFormula) -> bool {
        match f.sign {
            Sign::Plus => self.is_proved(f.mode, &f.subject),
            Sign::Minus => self.is_refuted(f.mode, &f.subject),
        }
    }

    /// Subjects of one of the twelve sets.
    pub fn set(&self, sign: Sign, level: Level, mode: Mode) -> BTreeSet<Subject> {
        let src = match sign {
            Sign::Plus => &self.proved,
            Sign::Minus => &self.refuted,
        };
        src.iter()
            .filter(|(m, s)| *m == mode && s.level() == level)
            .map(|(_, s)| s.clone())
            .collect()
    }

    /// Proved when the formula is in the matching set, refuted when the
    /// opposite-sign formula is.
    pub fn outcome(&self, f: &TaggedFormula) -> Outcome {
        let (yes, no) = (self.is_proved(f.mode, &f.subject), self.is_refuted(f.mode, &f.subject));
        match (f.sign, yes, no) {
            (Sign::Plus, true, _) | (Sign::Minus, _, true) => Outcome::Proved,
            (Sign::Plus, _, true) | (Sign::Minus, true, _) => Outcome::Refuted,
            _ => Outcome::Undetermined,
        }
    }

    pub fn decided(&self) -> usize {
        self.proved.len() + self.refuted.len()
    }
}
