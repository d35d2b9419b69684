//! Seeded theory generators for benchmarks and property tests.
//!
//! Every family is deterministic in `(target, seed)` and tops up with fresh
//! facts so the size lands on the target whenever the family's building
//! block fits.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::model::{
    Arrow, Complement, DeonticRuleExpr, Element, Item, Literal, ModalLiteral, Mode, Rule, RuleExpr, Theory,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// A line of constitutive rules, each firing the next.
    Chain,
    /// Copies of the team-defeat block (three rules each way, two priorities).
    Team,
    /// Meta-rules that each need the previous nested rule, with occasional
    /// weaker removals.
    MetaChain,
    /// Mixed random theories with every construct of the language.
    Random,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Chain, Family::Team, Family::MetaChain, Family::Random];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Chain => "chain",
            Family::Team => "team",
            Family::MetaChain => "meta-chain",
            Family::Random => "random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Family, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown family `{s}` (expected chain, team, meta-chain or random)"))
    }
}

pub fn generate_theory(family: Family, target: usize, seed: u64) -> Theory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = match family {
        Family::Chain => chain(target),
        Family::Team => team(target),
        Family::MetaChain => meta_chain(target),
        Family::Random => random(target, &mut rng),
    };
    pad(&mut t, target);
    t
}

fn rule(label: String, body: Vec<Item>, arrow: Arrow, mode: Mode, head: Vec<Element>) -> Rule {
    Rule { label, antecedent: body.into_iter().collect(), arrow, mode, consequent: head }
}

fn l(atom: String) -> Literal {
    Literal::pos(atom)
}

fn pad(t: &mut Theory, target: usize) {
    let mut i = 0;
    while t.size() < target {
        t.facts.insert(Item::Literal(l(format!("pad{i}"))));
        i += 1;
    }
}

fn chain(target: usize) -> Theory {
    let mut t = Theory::default();
    if target < 4 {
        return t;
    }
    t.facts.insert(Item::Literal(l("p0".into())));
    let n = (target - 1) / 3;
    for i in 1..=n {
        t.rules.push(rule(
            format!("r{i}"),
            vec![Item::Literal(l(format!("p{}", i - 1)))],
            Arrow::Defeasible,
            Mode::C,
            vec![Element::Literal(l(format!("p{i}")))],
        ));
    }
    t
}

/// One team-defeat block measures 27.
const TEAM_BLOCK: usize = 27;

fn team(target: usize) -> Theory {
    let mut t = Theory::default();
    if target == 0 {
        return t;
    }
    let blocks = (target / TEAM_BLOCK).max(1);
    for k in 0..blocks {
        let atom = |s: &str| l(format!("{s}{k}"));
        for f in ["a", "b", "c", "d", "e"] {
            t.facts.insert(Item::Literal(atom(f)));
        }
        let goal = atom("l");
        let specs = [
            ("alpha", "a", true),
            ("beta", "b", true),
            ("gamma", "c", true),
            ("phi", "d", false),
            ("psi", "e", false),
            ("chi", "g", false),
        ];
        for (name, body, positive) in specs {
            let head = if positive { goal.clone() } else { Literal::neg(goal.atom.clone()) };
            t.rules.push(rule(
                format!("{name}{k}"),
                vec![Item::Literal(atom(body))],
                Arrow::Defeasible,
                Mode::C,
                vec![Element::Literal(head)],
            ));
        }
        t.superiority.insert((format!("alpha{k}"), format!("phi{k}")));
        t.superiority.insert((format!("beta{k}"), format!("psi{k}")));
    }
    t
}

fn step_rule(i: usize) -> Rule {
    rule(
        format!("s{i}"),
        vec![Item::Literal(l(format!("q{i}")))],
        Arrow::Defeasible,
        Mode::C,
        vec![Element::Literal(l(format!("q{}", i + 1)))],
    )
}

fn expr(r: &Rule, positive: bool) -> RuleExpr {
    RuleExpr { positive, rule: Box::new(r.clone()) }
}

fn meta_chain(target: usize) -> Theory {
    let mut t = Theory::default();
    if target < 4 {
        return t;
    }
    t.facts.insert(Item::Literal(l("q0".into())));
    t.rules.push(step_rule(0));
    let mut i = 1;
    loop {
        let removal = i % 5 == 0;
        let cost = 7 + if removal { 6 } else { 0 };
        if t.size() + cost > target {
            break;
        }
        t.rules.push(rule(
            format!("m{i}"),
            vec![Item::Rule(expr(&step_rule(i - 1), true))],
            Arrow::Defeasible,
            Mode::C,
            vec![Element::Rule(expr(&step_rule(i), true))],
        ));
        if removal {
            t.rules.push(rule(
                format!("n{i}"),
                vec![],
                Arrow::Defeasible,
                Mode::C,
                vec![Element::Rule(expr(&step_rule(i), false))],
            ));
            t.superiority.insert((format!("m{i}"), format!("n{i}")));
        }
        i += 1;
    }
    t
}

struct RandomGen<'r> {
    rng: &'r mut ChaCha8Rng,
    atoms: Vec<String>,
    pool: Vec<Rule>,
}

impl RandomGen<'_> {
    fn literal(&mut self) -> Literal {
        let atom = self.atoms.choose(self.rng).expect("non-empty atoms").clone();
        Literal { atom, positive: self.rng.gen_bool(0.6) }
    }

    fn mode(&mut self) -> Mode {
        *[Mode::C, Mode::C, Mode::O, Mode::P].choose(self.rng).expect("non-empty")
    }

    fn deontic(&mut self) -> Mode {
        if self.rng.gen_bool(0.6) {
            Mode::O
        } else {
            Mode::P
        }
    }

    fn literal_item(&mut self) -> Item {
        if self.rng.gen_bool(0.7) {
            Item::Literal(self.literal())
        } else {
            let mode = self.deontic();
            let negated = self.rng.gen_bool(0.3);
            Item::Modal(ModalLiteral { mode, negated, inner: self.literal() })
        }
    }

    fn body(&mut self, with_rules: bool) -> Vec<Item> {
        let n = self.rng.gen_range(0..=2);
        (0..n)
            .map(|_| {
                if with_rules && !self.pool.is_empty() && self.rng.gen_bool(0.35) {
                    let x = self.pool_expr();
                    if self.rng.gen_bool(0.5) {
                        Item::Rule(x)
                    } else {
                        let mode = self.deontic();
                        Item::Deontic(DeonticRuleExpr { mode, negated: self.rng.gen_bool(0.3), expr: x })
                    }
                } else {
                    self.literal_item()
                }
            })
            .collect()
    }

    fn pool_expr(&mut self) -> RuleExpr {
        let r = self.pool.choose(self.rng).expect("non-empty pool").clone();
        RuleExpr { positive: self.rng.gen_bool(0.65), rule: Box::new(r) }
    }

    /// A head for a rule of `mode` and `arrow`, drawing elements from `elem`.
    fn head(&mut self, mode: Mode, arrow: Arrow, mut elem: impl FnMut(&mut Self) -> Element) -> Vec<Element> {
        let len = if mode == Mode::O && arrow == Arrow::Defeasible && self.rng.gen_bool(0.4) {
            self.rng.gen_range(2..=3)
        } else {
            1
        };
        let mut out: Vec<Element> = Vec::new();
        for _ in 0..len * 3 {
            if out.len() == len {
                break;
            }
            let e = elem(self);
            if !out.contains(&e) {
                out.push(e);
            }
        }
        out
    }

    fn arrow(&mut self) -> Arrow {
        if self.rng.gen_bool(0.2) {
            Arrow::Defeater
        } else {
            Arrow::Defeasible
        }
    }

    fn standard(&mut self, label: String) -> Rule {
        let mode = self.mode();
        let arrow = self.arrow();
        let body = self.body(false);
        let head = self.head(mode, arrow, |g| Element::Literal(g.literal()));
        rule(label, body, arrow, mode, head)
    }

    /// Turns a copy of a rule into one that clashes with it: complementary
    /// head, swapped O/P mode, or a chain extended past the original.
    fn clash(&mut self, r: &mut Rule) {
        match self.rng.gen_range(0..3) {
            0 => r.consequent[0] = r.consequent[0].complement(),
            1 if r.mode != Mode::C => {
                r.mode = if r.mode == Mode::O { Mode::P } else { Mode::O };
                r.consequent.truncate(1);
                r.consequent[0] = r.consequent[0].complement();
            }
            _ if r.mode == Mode::O && r.arrow == Arrow::Defeasible && r.consequent.len() < 3 => {
                let e = Element::Literal(self.literal());
                if !r.consequent.contains(&e) {
                    r.consequent.push(e);
                }
            }
            _ => r.consequent[0] = r.consequent[0].complement(),
        }
        if r.consequent.len() > 1 && (r.mode != Mode::O || r.arrow != Arrow::Defeasible) {
            r.consequent.truncate(1);
        }
        let mut seen = Vec::new();
        r.consequent.retain(|e| {
            let fresh = !seen.contains(e);
            seen.push(e.clone());
            fresh
        });
    }

    fn meta(&mut self, label: String) -> Rule {
        let mode = self.mode();
        let arrow = self.arrow();
        let body = self.body(true);
        let head = self.head(mode, arrow, |g| {
            if g.rng.gen_bool(0.75) {
                Element::Rule(g.pool_expr())
            } else {
                Element::Literal(g.literal())
            }
        });
        rule(label, body, arrow, mode, head)
    }
}

/// A mixed theory of size at most `target` (when `target` allows any rule
/// at all): facts, standard rules, meta-rules over a pool of nested rules
/// that includes content-equal clones, chains, defeaters, modal literals
/// and a superiority relation that may contain cycles.
fn random(target: usize, rng: &mut ChaCha8Rng) -> Theory {
    let mut t = Theory::default();
    if target == 0 {
        return t;
    }
    let n_atoms = rng.gen_range(3..=5);
    let atoms: Vec<String> = ["a", "b", "c", "d", "e"][..n_atoms].iter().map(|s| s.to_string()).collect();
    let mut g = RandomGen { rng, atoms, pool: Vec::new() };

    let n_pool = g.rng.gen_range(1..=4);
    for i in 0..n_pool {
        let r = if i > 0 && g.rng.gen_bool(0.5) {
            let mut twin = g.pool[g.rng.gen_range(0..g.pool.len())].clone();
            twin.label = format!("n{i}");
            if g.rng.gen_bool(0.5) {
                g.clash(&mut twin);
            }
            twin
        } else {
            g.standard(format!("n{i}"))
        };
        g.pool.push(r);
    }

    let n_facts = g.rng.gen_range(0..=3);
    for _ in 0..n_facts {
        let f = g.literal();
        t.facts.insert(Item::Literal(f));
    }
    // pool rules sometimes also stand at the top level
    let mut labels: Vec<String> = Vec::new();
    for r in g.pool.clone() {
        if g.rng.gen_bool(0.2) && t.size() + r_size(&r) <= target {
            labels.push(r.label.clone());
            t.rules.push(r);
        }
    }
    let mut misses = 0;
    let mut i = 0;
    while misses < 8 {
        let label = format!("r{i}");
        let r = if g.rng.gen_bool(0.45) { g.meta(label) } else { g.standard(label) };
        if t.size() + r_size(&r) + 2 > target {
            misses += 1;
            continue;
        }
        labels.push(r.label.clone());
        t.rules.push(r);
        i += 1;
    }
    let mut all: Vec<String> = labels;
    all.extend(t.rules_appearing().iter().map(|r| r.label.clone()));
    let all: Vec<String> = all.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    while all.len() >= 2 && t.size() + 2 <= target && g.rng.gen_bool(0.75) {
        let a = all.choose(g.rng).expect("non-empty").clone();
        let b = all.choose(g.rng).expect("non-empty").clone();
        if a != b {
            t.superiority.insert((a, b));
        } else {
            break;
        }
    }
    t
}

fn r_size(r: &Rule) -> usize {
    let t = Theory { rules: vec![r.clone()], ..Default::default() };
    t.size()
}
