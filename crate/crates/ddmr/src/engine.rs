//! The extension engine: a worklist fixpoint over the modal Herbrand base.
//!
//! Every rule appearing in the theory (top-level or nested) is compiled into a
//! list of requirements: its own `+∂ᵐC` tag, one per antecedent item, and two
//! per chain element (the obligation and its violation). Deciding a tag
//! updates the rules watching it, which in turn re-queues the pairs whose
//! conditions mention those rules.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::conflict::{attacker_modes, defender_modes, ConflictIndex, Variant};
use crate::model::{
    Complement, Element, Extension, Item, Literal, Mode, Outcome, RuleRef, Sign, Subject,
    TaggedFormula, Theory,
};
use crate::validate::{validate, Report};

#[derive(Clone, Debug, Error)]
pub enum EngineError {
    #[error("theory has validation errors: {}", list(.0))]
    Invalid(Report),
    #[error("`{0}` is not in the modal Herbrand base")]
    UnknownSubject(String),
}

fn list(r: &Report) -> String {
    r.errors.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Order in which pending pairs are visited within a pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// Literals before rules, then lexicographic by subject, then mode.
    Canonical,
    /// A permutation drawn from the seed.
    Shuffled(u64),
}

/// A cell of an obligation rule's violation matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cell {
    Null,
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Occ {
    rule: usize,
    index: usize,
}

#[derive(Clone, Copy, Debug)]
struct Req {
    pair: usize,
    want: Sign,
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    Base,
    Chain(usize, usize),
}

#[derive(Debug)]
struct RuleData {
    label: String,
    mode: Mode,
    defeasible: bool,
    heads: Vec<usize>,
}

#[derive(Debug, Default)]
struct RuleRun {
    pending: usize,
    failed: bool,
    /// Leading chain elements whose two cells are both `+`.
    chain_ok: usize,
    /// First chain element with a `-` cell.
    chain_fail: Option<usize>,
    matrix: [Vec<Cell>; 2],
}

#[derive(Debug)]
struct Opposer {
    occ: Occ,
    /// Applicable rules that would defeat this opposer.
    defenders: Vec<Occ>,
}

#[derive(Debug, Default, Clone, Copy)]
struct Base {
    fact: bool,
    complement_fact: bool,
    top: bool,
    blocked: bool,
}

#[derive(Debug)]
struct PairData {
    supporters: Vec<Occ>,
    opposers: Vec<Opposer>,
    base: Base,
}

/// Counters from one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub passes: usize,
    pub visits: usize,
    /// Pairs that only the closing full sweep could decide; always zero when
    /// change propagation is complete.
    pub late: usize,
}

/// The mutable state of one extension computation.
pub struct EngineState {
    variant: Variant,
    subjects: Vec<Subject>,
    sid: HashMap<Subject, usize>,
    rules: Vec<RuleData>,
    rid: HashMap<String, usize>,
    pairs: Vec<PairData>,
    watchers: Vec<Vec<(usize, Req, Slot)>>,
    deps: Vec<Vec<usize>>,
    run: Vec<RuleRun>,
    status: Vec<Option<Sign>>,
    /// Per pair, the candidate rules still able to support it.
    support: Vec<Vec<Occ>>,
    /// Per pair, which opposers are known to be defeated.
    infd: Vec<Vec<bool>>,
    conflicts: ConflictIndex,
    superiority: HashSet<(usize, usize)>,
    deltas: Vec<Vec<(usize, Sign)>>,
    undecided: usize,
    dirty: Vec<bool>,
    queue: Vec<usize>,
    stats: Stats,
    no_team_defeat: bool,
}

fn mode_of(pair: usize, n: usize) -> Mode {
    Mode::ALL[pair / n]
}

impl EngineState {
    pub fn new(t: &Theory, variant: Variant) -> Result<EngineState, EngineError> {
        let report = validate(t);
        if !report.is_ok() {
            return Err(EngineError::Invalid(report));
        }
        Ok(Self::build(t, variant))
    }

    fn build(t: &Theory, variant: Variant) -> EngineState {
        let subjects: Vec<Subject> = t.herbrand_base().into_iter().collect();
        let n = subjects.len();
        let sid: HashMap<Subject, usize> =
            subjects.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let pid = |m: Mode, s: &Subject| m.index() * n + sid[s];
        let appearing = t.rules_appearing();
        let rid: HashMap<String, usize> =
            appearing.iter().enumerate().map(|(i, r)| (r.label.clone(), i)).collect();

        let mut watchers: Vec<Vec<(usize, Req, Slot)>> = vec![Vec::new(); 3 * n];
        let mut run = Vec::with_capacity(appearing.len());
        let mut rules = Vec::with_capacity(appearing.len());
        let mut heads: HashMap<(Mode, usize), Vec<Occ>> = HashMap::new();
        for (r, rule) in appearing.iter().enumerate() {
            let mut base = vec![Req {
                pair: pid(Mode::C, &Subject::Rule(RuleRef::pos(&rule.label))),
                want: Sign::Plus,
            }];
            for item in &rule.antecedent {
                let (mode, subject, want) = match item {
                    Item::Literal(l) => (Mode::C, Subject::Literal(l.clone()), Sign::Plus),
                    Item::Modal(m) => (m.mode, Subject::Literal(m.inner.clone()), sign(!m.negated)),
                    Item::Rule(x) => (Mode::C, Subject::Rule(x.subject()), Sign::Plus),
                    Item::Deontic(d) => (d.mode, Subject::Rule(d.expr.subject()), sign(!d.negated)),
                };
                base.push(Req { pair: pid(mode, &subject), want });
            }
            let mut seen = HashSet::new();
            base.retain(|q| seen.insert((q.pair, q.want)));
            for q in &base {
                watchers[q.pair].push((r, *q, Slot::Base));
            }
            let mut rule_heads = Vec::new();
            for (j, e) in rule.consequent.iter().enumerate() {
                let s = e.subject();
                rule_heads.push(sid[&s]);
                heads.entry((rule.mode, sid[&s])).or_default().push(Occ { rule: r, index: j });
                let pass = match e {
                    Element::Literal(l) => [
                        Req { pair: pid(Mode::O, &s), want: Sign::Plus },
                        Req { pair: pid(Mode::C, &Subject::Literal(l.complement())), want: Sign::Plus },
                    ],
                    Element::Rule(_) => [
                        Req { pair: pid(Mode::O, &s), want: Sign::Plus },
                        Req { pair: pid(Mode::C, &s), want: Sign::Minus },
                    ],
                };
                for (w, q) in pass.iter().enumerate() {
                    watchers[q.pair].push((r, *q, Slot::Chain(j, w)));
                }
            }
            let k = rule.consequent.len();
            run.push(RuleRun {
                pending: base.len(),
                matrix: [vec![Cell::Null; k], vec![Cell::Null; k]],
                ..Default::default()
            });
            rules.push(RuleData {
                label: rule.label.clone(),
                mode: rule.mode,
                defeasible: rule.is_defeasible(),
                heads: rule_heads,
            });
        }

        let superiority: HashSet<(usize, usize)> = t
            .superiority
            .iter()
            .filter_map(|(a, b)| Some((*rid.get(a)?, *rid.get(b)?)))
            .collect();
        let sup = |a: usize, b: usize| superiority.contains(&(a, b));
        let sup_label = |a: &str, b: &str| t.superior(a, b);
        let conflicts = ConflictIndex::build(t, variant);
        let occs = |modes: &[Mode], s: usize| -> Vec<Occ> {
            modes.iter().flat_map(|m| heads.get(&(*m, s)).into_iter().flatten().copied()).collect()
        };
        let top: HashSet<&str> = t.rules.iter().map(|r| r.label.as_str()).collect();
        let blocked: HashSet<&RuleRef> = t
            .rules
            .iter()
            .flat_map(|r| conflicts.conflicts_with(&RuleRef::pos(&r.label)))
            .collect();

        let mut pairs = Vec::with_capacity(3 * n);
        for mode in Mode::ALL {
            for subject in &subjects {
                let s = sid[subject];
                let supporters: Vec<Occ> = occs(&[mode], s)
                    .into_iter()
                    .filter(|o| rules[o.rule].defeasible)
                    .collect();
                let mut opposers = Vec::new();
                let mut base = Base::default();
                match subject {
                    Subject::Literal(l) => {
                        let c = sid[&Subject::Literal(l.complement())];
                        let defenders = occs(defender_modes(mode), s);
                        for g in occs(attacker_modes(mode), c) {
                            let d = defenders.iter().copied().filter(|z| sup(z.rule, g.rule));
                            opposers.push(Opposer { occ: g, defenders: d.collect() });
                        }
                        if mode == Mode::C {
                            base.fact = t.is_fact(l);
                            base.complement_fact = t.is_fact(&l.complement());
                        }
                    }
                    Subject::Rule(x) => {
                        for f in conflicts.conflicts_with(x) {
                            let fs = sid[&Subject::Rule(f.clone())];
                            for g in occs(attacker_modes(mode), fs) {
                                let mut defenders = Vec::new();
                                match variant {
                                    Variant::Simple => {
                                        let mut labels = vec![&x.label, &f.label];
                                        labels.dedup();
                                        for chi in labels {
                                            let target = RuleRef { label: chi.clone(), positive: x.positive };
                                            let ts = sid[&Subject::Rule(target)];
                                            defenders.extend(
                                                occs(defender_modes(mode), ts)
                                                    .into_iter()
                                                    .filter(|z| sup(z.rule, g.rule)),
                                            );
                                        }
                                    }
                                    Variant::Cautious => {
                                        for h in conflicts.conflicts_with(f) {
                                            let hs = sid[&Subject::Rule(h.clone())];
                                            defenders.extend(
                                                occs(defender_modes(mode), hs).into_iter().filter(|z| {
                                                    z.rule != g.rule
                                                        && (sup(z.rule, g.rule)
                                                            || (!sup(g.rule, z.rule)
                                                                && sup_label(&h.label, &f.label)))
                                                }),
                                            );
                                        }
                                    }
                                }
                                opposers.push(Opposer { occ: g, defenders });
                            }
                        }
                        if mode == Mode::C {
                            base.top = x.positive && top.contains(x.label.as_str());
                            base.blocked = blocked.contains(x);
                        }
                    }
                }
                pairs.push(PairData { supporters, opposers, base });
            }
        }

        let mut deps: Vec<Vec<usize>> = vec![Vec::new(); rules.len()];
        for (p, data) in pairs.iter().enumerate() {
            let mut touch = |o: &Occ| deps[o.rule].push(p);
            data.supporters.iter().for_each(&mut touch);
            for o in &data.opposers {
                touch(&o.occ);
                o.defenders.iter().for_each(&mut touch);
            }
        }
        for d in &mut deps {
            d.sort_unstable();
            d.dedup();
        }
        let support = (0..3 * n)
            .map(|p| occs(&[mode_of(p, n)], p % n))
            .collect();
        let infd = pairs.iter().map(|d| vec![false; d.opposers.len()]).collect();

        EngineState {
            variant,
            subjects,
            sid,
            rules,
            rid,
            pairs,
            watchers,
            deps,
            run,
            status: vec![None; 3 * n],
            support,
            infd,
            conflicts,
            superiority,
            deltas: vec![Vec::new()],
            undecided: 3 * n,
            dirty: vec![false; 3 * n],
            queue: Vec::new(),
            stats: Stats::default(),
            no_team_defeat: false,
        }
    }

    fn n(&self) -> usize {
        self.subjects.len()
    }

    fn pair_id(&self, mode: Mode, s: &Subject) -> Option<usize> {
        self.sid.get(s).map(|i| mode.index() * self.n() + i)
    }

    fn subject(&self, p: usize) -> &Subject {
        &self.subjects[p % self.n()]
    }

    fn mode(&self, p: usize) -> Mode {
        mode_of(p, self.n())
    }

    fn applicable(&self, o: Occ) -> bool {
        let r = &self.run[o.rule];
        r.pending == 0 && !r.failed && r.chain_ok >= o.index
    }

    fn discarded(&self, o: Occ) -> bool {
        let r = &self.run[o.rule];
        r.failed || r.chain_fail.is_some_and(|j| j < o.index)
    }

    fn enqueue(&mut self, p: usize) {
        if self.status[p].is_none() && !self.dirty[p] {
            self.dirty[p] = true;
            self.queue.push(p);
        }
    }

    /// Records a decision and propagates it to the rules watching it.
    fn settle(&mut self, p: usize, s: Sign) {
        if self.status[p].is_some() {
            return;
        }
        self.status[p] = Some(s);
        self.undecided -= 1;
        if let Some(d) = self.deltas.last_mut() {
            d.push((p, s));
        }
        let watchers = std::mem::take(&mut self.watchers[p]);
        for (r, req, slot) in &watchers {
            let ok = s == req.want;
            let was_failed = self.run[*r].failed;
            let old_fail = self.run[*r].chain_fail;
            let run = &mut self.run[*r];
            match slot {
                Slot::Base => {
                    if ok {
                        run.pending -= 1;
                    } else {
                        run.failed = true;
                    }
                }
                Slot::Chain(j, w) => {
                    run.matrix[*w][*j] = if ok { Cell::Plus } else { Cell::Minus };
                    if !ok {
                        run.chain_fail = Some(run.chain_fail.map_or(*j, |f| f.min(*j)));
                    }
                    let k = run.matrix[0].len();
                    while run.chain_ok < k
                        && run.matrix[0][run.chain_ok] == Cell::Plus
                        && run.matrix[1][run.chain_ok] == Cell::Plus
                    {
                        run.chain_ok += 1;
                    }
                }
            }
            if self.run[*r].failed && !was_failed {
                self.delete_rule(*r);
            } else if self.run[*r].chain_fail != old_fail {
                self.prune_support(*r);
            }
            for q in self.deps[*r].clone() {
                self.enqueue(q);
            }
        }
        self.watchers[p] = watchers;
        if self.mode(p) == Mode::O {
            self.enqueue(p + self.n());
        }
    }

    /// Drops a rule with a falsified antecedent from every support set and
    /// from the superiority relation, in both orientations.
    fn delete_rule(&mut self, r: usize) {
        self.prune_support(r);
        self.superiority.retain(|&(a, b)| a != r && b != r);
    }

    fn prune_support(&mut self, r: usize) {
        let n = self.n();
        let mode = self.rules[r].mode;
        for (j, &h) in self.rules[r].heads.iter().enumerate() {
            let o = Occ { rule: r, index: j };
            if self.discarded(o) {
                self.support[mode.index() * n + h].retain(|x| *x != o);
            }
        }
    }

    fn witness(&self, p: usize) -> Option<Occ> {
        let d = &self.pairs[p];
        if d.base.complement_fact || d.base.blocked {
            return None;
        }
        d.supporters.iter().copied().find(|o| self.applicable(*o))
    }

    /// Team defeat: marks opposers beaten by an applicable defender and
    /// reports whether every opposer is now discarded or beaten.
    fn team_defeat(&mut self, p: usize) -> bool {
        let mut all = true;
        for i in 0..self.pairs[p].opposers.len() {
            if self.infd[p][i] {
                continue;
            }
            let o = &self.pairs[p].opposers[i];
            if self.discarded(o.occ) {
                continue;
            }
            if !self.no_team_defeat && o.defenders.iter().any(|z| self.applicable(*z)) {
                self.infd[p][i] = true;
                if let Subject::Rule(x) = self.subject(p) {
                    let beaten = self.rules[o.occ.rule].label.clone();
                    let m = self.mode(p).index();
                    self.conflicts.infd[m].entry(x.label.clone()).or_default().insert(beaten);
                }
            } else {
                all = false;
            }
        }
        all
    }

    fn undefeated_attacker(&self, q: usize, w: Occ) -> bool {
        self.pairs[q]
            .opposers
            .iter()
            .any(|o| o.occ == w && o.defenders.iter().all(|z| self.discarded(*z)))
    }

    fn refutable(&self, p: usize) -> bool {
        let d = &self.pairs[p];
        if d.base.fact || d.base.top {
            return false;
        }
        if d.base.complement_fact || d.base.blocked {
            return true;
        }
        if self.mode(p) == Mode::P && self.status[p - self.n()] != Some(Sign::Minus) {
            return false;
        }
        d.supporters.iter().all(|o| self.discarded(*o))
            || d.opposers.iter().any(|o| {
                self.applicable(o.occ) && o.defenders.iter().all(|z| self.discarded(*z))
            })
    }

    /// Pairs the witness of `p` attacks, in the modes the case refutes.
    fn attacked(&self, p: usize) -> Vec<usize> {
        let n = self.n();
        let modes: &[Mode] = match self.mode(p) {
            Mode::C => &[Mode::C],
            Mode::O => &[Mode::O, Mode::P],
            Mode::P => &[Mode::O],
        };
        let targets: Vec<usize> = match self.subject(p) {
            Subject::Literal(l) => vec![self.sid[&Subject::Literal(l.complement())]],
            Subject::Rule(x) => self
                .conflicts
                .conflicts_with(x)
                .map(|f| self.sid[&Subject::Rule(f.clone())])
                .collect(),
        };
        targets
            .iter()
            .flat_map(|t| modes.iter().map(move |m| m.index() * n + t))
            .collect()
    }

    fn refute_via(&mut self, q: usize, w: Occ) {
        if self.status[q].is_some() {
            return;
        }
        let b = self.pairs[q].base;
        if b.fact || b.top {
            return;
        }
        if self.mode(q) == Mode::P && self.status[q - self.n()] != Some(Sign::Minus) {
            return;
        }
        if self.undefeated_attacker(q, w) {
            self.settle(q, Sign::Minus);
        }
    }

    fn check(&mut self, p: usize, w: Occ) -> bool {
        let all = self.team_defeat(p);
        for q in self.attacked(p) {
            self.refute_via(q, w);
        }
        if all {
            self.settle(p, Sign::Plus);
            if self.mode(p) == Mode::O {
                let n = self.n();
                self.settle(p + n, Sign::Plus);
            }
        }
        all
    }

    fn visit(&mut self, p: usize) {
        if self.status[p].is_some() {
            return;
        }
        self.stats.visits += 1;
        let d = &self.pairs[p];
        let via_o = self.mode(p) == Mode::P && self.status[p - self.n()] == Some(Sign::Plus);
        if d.base.fact || d.base.top || via_o {
            self.settle(p, Sign::Plus);
            return;
        }
        if let Some(w) = self.witness(p) {
            if self.check(p, w) {
                return;
            }
        }
        if self.refutable(p) {
            self.settle(p, Sign::Minus);
        }
    }

    /// Facts, their guarded complements, top-level rules and the rules that
    /// conflict with a top-level rule.
    fn seed(&mut self) {
        let n = self.n();
        for p in 0..n {
            let b = self.pairs[p].base;
            if b.fact || b.top {
                self.settle(p, Sign::Plus);
            }
        }
        for p in 0..n {
            let b = self.pairs[p].base;
            if (b.complement_fact && !b.fact) || (b.blocked && !b.top) {
                self.settle(p, Sign::Minus);
            }
        }
    }

    fn order_keys(&self, order: Order) -> Vec<usize> {
        let total = 3 * self.n();
        let mut ids: Vec<usize> = (0..total).collect();
        match order {
            Order::Canonical => {
                let n = self.n();
                ids.sort_by_key(|&p| (p % n, p / n));
            }
            Order::Shuffled(seed) => ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
        }
        let mut rank = vec![0; total];
        for (i, p) in ids.into_iter().enumerate() {
            rank[p] = i;
        }
        rank
    }

    /// Runs to the fixpoint.
    pub fn run(&mut self, order: Order) -> Stats {
        let rank = self.order_keys(order);
        self.seed();
        let mut pending: Vec<usize> = (0..self.status.len()).filter(|&p| self.status[p].is_none()).collect();
        loop {
            while !pending.is_empty() {
                self.stats.passes += 1;
                self.deltas.push(Vec::new());
                pending.sort_by_key(|&p| rank[p]);
                self.queue.clear();
                for &p in &pending {
                    self.dirty[p] = false;
                }
                for p in pending {
                    self.visit(p);
                }
                pending = std::mem::take(&mut self.queue);
                pending.retain(|&p| self.status[p].is_none());
            }
            let before = self.undecided;
            let mut sweep: Vec<usize> =
                (0..self.status.len()).filter(|&p| self.status[p].is_none()).collect();
            sweep.sort_by_key(|&p| rank[p]);
            for p in sweep {
                self.visit(p);
            }
            let late = before - self.undecided;
            if late == 0 {
                break;
            }
            self.stats.late += late;
            pending = std::mem::take(&mut self.queue);
        }
        self.stats
    }

    pub fn extension(&self) -> Extension {
        let mut e = Extension::default();
        for (p, st) in self.status.iter().enumerate() {
            let key = (self.mode(p), self.subject(p).clone());
            match st {
                Some(Sign::Plus) => e.proved.insert(key),
                Some(Sign::Minus) => e.refuted.insert(key),
                None => e.undetermined.insert(key),
            };
        }
        e
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn conflict_index(&self) -> &ConflictIndex {
        &self.conflicts
    }

    /// Pairs still undecided.
    pub fn mhb(&self) -> BTreeSet<(Mode, Subject)> {
        (0..self.status.len())
            .filter(|&p| self.status[p].is_none())
            .map(|p| (self.mode(p), self.subject(p).clone()))
            .collect()
    }

    pub fn status(&self, mode: Mode, s: &Subject) -> Option<Sign> {
        self.pair_id(mode, s).and_then(|p| self.status[p])
    }

    /// The obligation / violation rows of a rule's matrix.
    pub fn matrix(&self, label: &str) -> Option<[Vec<Cell>; 2]> {
        self.rid.get(label).map(|&r| self.run[r].matrix.clone())
    }

    /// Remaining (unsatisfied) antecedent items of a rule, counting its own
    /// `+∂ᵐC` requirement.
    pub fn remaining_antecedent(&self, label: &str) -> Option<usize> {
        self.rid.get(label).map(|&r| self.run[r].pending)
    }

    /// Labels of the rules still able to support `(mode, s)`.
    pub fn support(&self, mode: Mode, s: &Subject) -> BTreeSet<String> {
        self.pair_id(mode, s)
            .map(|p| self.support[p].iter().map(|o| self.rules[o.rule].label.clone()).collect())
            .unwrap_or_default()
    }

    /// The superiority relation after pruning deleted rules.
    pub fn superiority(&self) -> BTreeSet<(String, String)> {
        self.superiority
            .iter()
            .map(|&(a, b)| (self.rules[a].label.clone(), self.rules[b].label.clone()))
            .collect()
    }

    /// Tags decided in each pass, seeding first.
    pub fn deltas(&self) -> Vec<Vec<TaggedFormula>> {
        self.deltas
            .iter()
            .map(|d| {
                d.iter()
                    .map(|&(p, sign)| TaggedFormula { sign, mode: self.mode(p), subject: self.subject(p).clone() })
                    .collect()
            })
            .collect()
    }

    fn literal_pair(&self, l: &Literal, mode: Mode) -> usize {
        self.pair_id(mode, &Subject::Literal(l.clone())).expect("literal in the Herbrand base")
    }

    fn rule_pair(&self, r: &RuleRef, mode: Mode) -> usize {
        self.pair_id(mode, &Subject::Rule(r.clone())).expect("rule in the Herbrand base")
    }

    fn occ_of(&self, p: usize, witness: &str) -> Option<Occ> {
        let r = *self.rid.get(witness)?;
        self.pairs[p].supporters.iter().copied().find(|o| o.rule == r)
    }

    /// One check of a literal with a given witness: team defeat, refutation
    /// of what the witness attacks unopposed, and proof when nothing is left
    /// standing. Returns whether the literal was proved.
    pub fn check_literal(&mut self, l: &Literal, mode: Mode, witness: &str) -> bool {
        let p = self.literal_pair(l, mode);
        match self.occ_of(p, witness) {
            Some(w) if self.status[p].is_none() && self.applicable(w) => self.check(p, w),
            _ => false,
        }
    }

    /// [`EngineState::check_literal`] for a rule subject.
    pub fn check_rule(&mut self, r: &RuleRef, mode: Mode, witness: &str) -> bool {
        let p = self.rule_pair(r, mode);
        match self.occ_of(p, witness) {
            Some(w) if self.status[p].is_none() && self.applicable(w) => self.check(p, w),
            _ => false,
        }
    }

    pub fn prove_literal(&mut self, l: &Literal, mode: Mode) {
        let p = self.literal_pair(l, mode);
        self.settle(p, Sign::Plus);
    }

    pub fn refute_literal(&mut self, l: &Literal, mode: Mode) {
        let p = self.literal_pair(l, mode);
        self.settle(p, Sign::Minus);
    }

    pub fn prove_rule(&mut self, r: &RuleRef, mode: Mode) {
        let p = self.rule_pair(r, mode);
        self.settle(p, Sign::Plus);
    }

    pub fn refute_rule(&mut self, r: &RuleRef, mode: Mode) {
        let p = self.rule_pair(r, mode);
        self.settle(p, Sign::Minus);
    }

    /// Breaks the engine on purpose: opposers can only be discarded, never
    /// defeated. Used to check that the oracle comparison catches it.
    #[doc(hidden)]
    pub fn disable_team_defeat(&mut self) {
        self.no_team_defeat = true;
    }

    /// Performs only the seeding phase.
    pub fn seed_only(&mut self) {
        self.seed();
    }
}

fn sign(positive: bool) -> Sign {
    if positive {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// The extension of a validated theory under a conflict variant.
pub fn compute_extension(t: &Theory, v: Variant) -> Result<Extension, EngineError> {
    compute_with(t, v, Order::Canonical).map(|(e, _)| e)
}

/// [`compute_extension`] with an explicit visiting order, returning the run
/// counters too.
pub fn compute_with(t: &Theory, v: Variant, order: Order) -> Result<(Extension, Stats), EngineError> {
    let mut s = EngineState::new(t, v)?;
    let stats = s.run(order);
    Ok((s.extension(), stats))
}

/// Whether a tagged formula holds in the theory's extension.
pub fn query(t: &Theory, v: Variant, f: &TaggedFormula) -> Result<Outcome, EngineError> {
    if !t.herbrand_base().contains(&f.subject) {
        return Err(EngineError::UnknownSubject(f.subject.to_string()));
    }
    Ok(compute_extension(t, v)?.outcome(f))
}

/// A pair decided differently by the two variants.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Divergence {
    pub mode: Mode,
    pub subject: Subject,
    pub simple: Outcome,
    pub cautious: Outcome,
}

fn status_of(e: &Extension, mode: Mode, s: &Subject) -> Outcome {
    if e.is_proved(mode, s) {
        Outcome::Proved
    } else if e.is_refuted(mode, s) {
        Outcome::Refuted
    } else {
        Outcome::Undetermined
    }
}

/// Every pair whose status differs between the simple and cautious variants.
pub fn diff_variants(t: &Theory) -> Result<Vec<Divergence>, EngineError> {
    let simple = compute_extension(t, Variant::Simple)?;
    let cautious = compute_extension(t, Variant::Cautious)?;
    let mut out = Vec::new();
    for (mode, subject) in t.modal_herbrand_base() {
        let a = status_of(&simple, mode, &subject);
        let b = status_of(&cautious, mode, &subject);
        if a != b {
            out.push(Divergence { mode, subject, simple: a, cautious: b });
        }
    }
    Ok(out)
}
