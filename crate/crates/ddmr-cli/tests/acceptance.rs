//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::collections::BTreeSet;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use ddmr::bench::{bench_one, log_log_slope};
use ddmr::engine::{compute_with, Order};
use ddmr::generate::{generate_theory, Family};
use ddmr::oracle::{compare, oracle_extension_within};
use ddmr::text::parse_tagged_formula;
use ddmr::validate::{has_cycle, validate, Issue};
use ddmr::{
    compute_extension, parse_theory, Complement, Extension, Level, Literal, Mode, Sign, Subject, Theory, Variant,
};

const EXAMPLE1_LIMIT: Duration = Duration::from_secs(1);
const PROPERTY_LIMIT: Duration = Duration::from_secs(60);
const SCALE_LIMIT: Duration = Duration::from_secs(60);
const MAX_SLOPE: f64 = 5.0;
const THEORIES: u64 = 1000;
const SHUFFLED_THEORIES: u64 = 100;
const SHUFFLES: u64 = 10;
const MAX_SIZE: usize = 60;
const SCALE_SIZES: [usize; 3] = [100, 1_000, 10_000];
const VARIANTS: [Variant; 2] = [Variant::Simple, Variant::Cautious];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../ddmr/fixtures")
}

fn load(name: &str) -> Theory {
    let src = fs::read_to_string(fixtures().join(name)).expect("fixture readable");
    parse_theory(&src).expect("fixture parses")
}

fn ext(t: &Theory, v: Variant) -> Extension {
    compute_extension(t, v).expect("fixture validates")
}

/// Fails with the first listed tagged formula missing from `e`.
fn holds(e: &Extension, v: Variant, formulas: &[&str]) -> Result<(), String> {
    for f in formulas {
        let tf = parse_tagged_formula(f).map_err(|err| format!("{f}: {err}"))?;
        if !e.contains(&tf) {
            return Err(format!("{}: {f} missing", v.as_str()));
        }
    }
    Ok(())
}

fn lits(names: &[&str]) -> BTreeSet<Subject> {
    names
        .iter()
        .map(|n| match n.strip_prefix('~') {
            Some(a) => Subject::Literal(Literal::neg(a)),
            None => Subject::Literal(Literal::pos(*n)),
        })
        .collect()
}

fn show(s: &BTreeSet<Subject>) -> String {
    s.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn random_theory(seed: u64) -> Theory {
    let target = 8 + (seed as usize * 7) % (MAX_SIZE - 7);
    generate_theory(Family::Random, target, seed)
}

fn random_extension(t: &Theory, v: Variant, order: Order) -> Result<Extension, String> {
    let (e, stats) = compute_with(t, v, order).map_err(|e| e.to_string())?;
    if stats.late != 0 {
        return Err(format!("closing sweep decided {} pairs", stats.late));
    }
    Ok(e)
}

fn example1() -> Outcome {
    let t = load("example1.ddl");
    let facts = lits(&["a", "b", "c", "d", "e"]);
    for v in VARIANTS {
        let start = Instant::now();
        let e = ext(&t, v);
        let took = start.elapsed();
        let mut want = facts.clone();
        want.insert(Subject::Literal(Literal::pos("l")));
        let got = e.set(Sign::Plus, Level::Literal, Mode::C);
        if got != want {
            return Err(format!("{}: +dC = {{{}}}", v.as_str(), show(&got)));
        }
        holds(&e, v, &["-dC ~l"])?;
        if took >= EXAMPLE1_LIMIT {
            return Err(format!("{}: took {took:?}", v.as_str()));
        }
    }
    Ok("+dC = F and l, -dC ~l in both variants".into())
}

fn example3() -> Outcome {
    let t = load("example3.ddl");
    for v in VARIANTS {
        let e = ext(&t, v);
        let mut c = lits(&["l", "q"]);
        c.extend(lits(&["a", "b", "c", "d", "e"]));
        let want = [(Mode::C, c), (Mode::O, lits(&["~l", "p"])), (Mode::P, lits(&["~l", "p"]))];
        for (m, w) in want {
            let got = e.set(Sign::Plus, Level::Literal, m);
            if got != w {
                return Err(format!("{}: +d{m} = {{{}}}", v.as_str(), show(&got)));
            }
        }
        let minus_p = e.set(Sign::Minus, Level::Literal, Mode::P);
        let need = lits(&["l", "~p", "q", "~q"]);
        if !need.is_subset(&minus_p) {
            return Err(format!("{}: -dP = {{{}}}", v.as_str(), show(&minus_p)));
        }
    }
    Ok("+dC, +dO, +dP exact; -dP covers the listed literals".into())
}

fn execution1() -> Outcome {
    let t = load("execution1.ddl");
    let (s, c) = (ext(&t, Variant::Simple), ext(&t, Variant::Cautious));
    for (v, e) in [(Variant::Simple, &s), (Variant::Cautious, &c)] {
        holds(
            e,
            v,
            &[
                "+dmC alpha", "+dmC beta", "+dmC zeta", "+dmC theta", "+dmC mu", "+dmC gamma", "-dmC nu",
                "-dmC kappa", "+dC f1", "+dC f2", "+dC ~a", "+dC b", "+dO a", "+dO b", "-dO c",
            ],
        )?;
    }
    if s != c {
        return Err("variants disagree".into());
    }
    Ok("listed memberships hold and variants agree".into())
}

fn execution2() -> Outcome {
    let t = load("execution2.ddl");
    holds(
        &ext(&t, Variant::Cautious),
        Variant::Cautious,
        &["+dmO eta", "+dmO ~zeta", "+dmO kappa", "-dmO theta", "-dmP theta", "-dmO mu", "+dC ~c", "+dO c"],
    )?;
    holds(&ext(&t, Variant::Simple), Variant::Simple, &["-dmO ~zeta"])?;
    let out = Command::new(env!("CARGO_BIN_EXE_ddmr"))
        .args(["diff", "--format", "json"])
        .arg(fixtures().join("execution2.ddl"))
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("diff exited with {}", out.status));
    }
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let got: BTreeSet<(String, String)> = rows
        .as_array()
        .ok_or("diff output is not an array")?
        .iter()
        .map(|r| (r["mode"].as_str().unwrap_or("").to_string(), r["subject"].as_str().unwrap_or("").to_string()))
        .collect();
    // mu follows from ~zeta: under the cautious reading kappa and mu clash.
    let want: BTreeSet<(String, String)> = [("mO", "~zeta"), ("mP", "~zeta"), ("mO", "mu"), ("mP", "mu")]
        .iter()
        .map(|(m, s)| (m.to_string(), s.to_string()))
        .collect();
    if got != want {
        return Err(format!("diff reported {got:?}"));
    }
    Ok("cautious and simple memberships hold; diff is ~zeta plus mu".into())
}

fn example6() -> Outcome {
    let t = load("example6.ddl");
    for v in VARIANTS {
        holds(&ext(&t, v), v, &["+dmP alpha", "+dmP ~alpha", "-dmC alpha", "-dmC ~alpha"])?;
    }
    Ok("both permissions proved, neither rule constituted".into())
}

fn example8() -> Outcome {
    let t = load("example8.ddl");
    holds(&ext(&t, Variant::Cautious), Variant::Cautious, &["+dmC gamma", "+dmC zeta"])?;
    if !validate(&t).warnings.contains(&Issue::CyclicExtendedSuperiority) {
        return Err("no cyclic extended superiority warning".into());
    }
    Ok("gamma and zeta proved; cycle warned".into())
}

fn sigma() -> Outcome {
    let n = load("sigma16.ddl").size();
    if n != 16 {
        return Err(format!("size {n}"));
    }
    Ok("size 16".into())
}

fn coherence() -> Outcome {
    let start = Instant::now();
    for v in VARIANTS {
        for seed in 0..THEORIES {
            let t = random_theory(seed);
            if t.size() > MAX_SIZE {
                return Err(format!("seed {seed}: size {}", t.size()));
            }
            let e = random_extension(&t, v, Order::Canonical)?;
            if let Some(p) = e.proved.intersection(&e.refuted).next() {
                return Err(format!("{} seed {seed}: {p:?} both proved and refuted", v.as_str()));
            }
        }
    }
    let took = start.elapsed();
    if took >= PROPERTY_LIMIT {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{} theories x 2 variants in {took:.1?}", THEORIES))
}

fn consistence() -> Outcome {
    let mut checked = 0;
    for v in VARIANTS {
        for seed in 0..THEORIES {
            let t = random_theory(seed);
            if has_cycle(&t.superiority) || (v == Variant::Cautious && has_cycle(&t.extended_superiority())) {
                continue;
            }
            checked += 1;
            let e = random_extension(&t, v, Order::Canonical)?;
            let rules = t.rule_by_label();
            let mut proved_rules = Vec::new();
            for (m, s) in &e.proved {
                match s {
                    Subject::Literal(l) => {
                        let clash = e.is_proved(*m, &Subject::Literal(l.complement()));
                        if clash && *m == Mode::O {
                            return Err(format!("{} seed {seed}: O {l} and O ~{l}", v.as_str()));
                        }
                        if clash && *m == Mode::C && !(t.is_fact(l) && t.is_fact(&l.complement())) {
                            return Err(format!("{} seed {seed}: C {l} clash without facts", v.as_str()));
                        }
                    }
                    Subject::Rule(x) if *m == Mode::C => proved_rules.push(x),
                    Subject::Rule(_) => {}
                }
            }
            for a in &proved_rules {
                for b in &proved_rules {
                    let (ra, rb) = (rules[a.label.as_str()], rules[b.label.as_str()]);
                    let both_top = a.positive && b.positive && t.is_top_level(&a.label) && t.is_top_level(&b.label);
                    if v.conflicts(a.positive, ra, b.positive, rb) && !both_top {
                        return Err(format!("{} seed {seed}: {a} and {b} both proved", v.as_str()));
                    }
                }
            }
        }
    }
    if checked < THEORIES as usize {
        return Err(format!("only {checked} acyclic theory runs"));
    }
    Ok(format!("{checked} acyclic theory runs"))
}

fn oracle_equivalence() -> Outcome {
    for v in VARIANTS {
        for seed in 0..THEORIES {
            let t = random_theory(seed);
            let engine = random_extension(&t, v, Order::Canonical)?;
            let oracle = oracle_extension_within(&t, v, MAX_SIZE).map_err(|e| e.to_string())?;
            if let Some(m) = compare(&engine, &oracle).first() {
                return Err(format!("{} seed {seed}: {m}", v.as_str()));
            }
        }
    }
    let golden = fixtures().join("golden");
    let mut files = 0;
    for entry in fs::read_dir(&golden).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default().to_string();
        let Some((stem, variant)) = name.strip_suffix(".json").and_then(|n| n.rsplit_once('.')) else {
            continue;
        };
        let out = Command::new(env!("CARGO_BIN_EXE_ddmr"))
            .args(["extension", "--format", "json", "--oracle", "--variant", variant])
            .arg(fixtures().join(format!("{stem}.ddl")))
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{name}: exit {}", out.status));
        }
        let want = fs::read(&path).map_err(|e| e.to_string())?;
        if out.stdout != want {
            return Err(format!("{name}: output differs from golden"));
        }
        files += 1;
    }
    if files == 0 {
        return Err("no golden files".into());
    }
    Ok(format!("{} theories x 2 variants; {files} golden runs agree", THEORIES))
}

fn closure_and_order() -> Outcome {
    for v in VARIANTS {
        for seed in 0..THEORIES {
            let t = random_theory(seed);
            let e = random_extension(&t, v, Order::Canonical)?;
            for (m, s) in &e.proved {
                if *m == Mode::O && !e.is_proved(Mode::P, s) {
                    return Err(format!("{} seed {seed}: O {s} without P", v.as_str()));
                }
            }
            for (m, s) in &e.refuted {
                if *m == Mode::P && !e.is_refuted(Mode::O, s) {
                    return Err(format!("{} seed {seed}: -P {s} without -O", v.as_str()));
                }
            }
            if seed >= SHUFFLED_THEORIES {
                continue;
            }
            for k in 0..SHUFFLES {
                let shuffled = random_extension(&t, v, Order::Shuffled(seed * 31 + k))?;
                if shuffled != e {
                    return Err(format!("{} seed {seed} shuffle {k}: extension differs", v.as_str()));
                }
            }
        }
    }
    Ok(format!("closure over {THEORIES} theories; {SHUFFLES} shuffles x {SHUFFLED_THEORIES} theories"))
}

fn scaling() -> Outcome {
    let mut notes = Vec::new();
    for family in [Family::Chain, Family::Team, Family::MetaChain] {
        for v in VARIANTS {
            let mut points = Vec::new();
            for target in SCALE_SIZES {
                let r = bench_one(family, target, 0, v).map_err(|e| e.to_string())?;
                if r.wall_time_ms >= SCALE_LIMIT.as_secs_f64() * 1000.0 {
                    return Err(format!("{family} {} size {}: {:.0} ms", v.as_str(), r.size, r.wall_time_ms));
                }
                points.push((r.size as f64, r.wall_time_ms));
            }
            let slope = log_log_slope(&points).ok_or("degenerate timings")?;
            if slope > MAX_SLOPE {
                return Err(format!("{family} {}: slope {slope:.2}", v.as_str()));
            }
            if v == Variant::Cautious {
                let last = points.last().map(|p| p.1).unwrap_or_default();
                notes.push(format!("{family} slope {slope:.2}, {last:.0} ms at 10^4"));
            }
        }
    }
    Ok(notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("example 1 team defeat", example1),
        ("example 3 extension", example3),
        ("first execution trace", execution1),
        ("second execution trace and variant diff", execution2),
        ("example 6 permissions", example6),
        ("example 8 cyclic extended superiority", example8),
        ("size metric", sigma),
        ("coherence", coherence),
        ("consistence", consistence),
        ("oracle equivalence", oracle_equivalence),
        ("O implies P and order independence", closure_and_order),
        ("scaling", scaling),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{took:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{took:.1?}]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
