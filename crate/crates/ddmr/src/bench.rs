//! Engine timing over generated families.

use std::time::Instant;

use crate::conflict::Variant;
use crate::engine::{EngineError, EngineState, Order};
use crate::generate::{generate_theory, Family};

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub family: Family,
    /// Size of the generated theory.
    pub size: usize,
    pub variant: Variant,
    pub wall_time_ms: f64,
    pub decided: usize,
    pub undetermined: usize,
}

pub const CSV_HEADER: &str = "family,size,variant,wall_time_ms,decided,undetermined";

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.3},{},{}",
            self.family,
            self.size,
            self.variant.as_str(),
            self.wall_time_ms,
            self.decided,
            self.undetermined
        )
    }
}

/// Times one engine run; generation is excluded.
pub fn bench_one(family: Family, target: usize, seed: u64, variant: Variant) -> Result<BenchRecord, EngineError> {
    let t = generate_theory(family, target, seed);
    let start = Instant::now();
    let mut state = EngineState::new(&t, variant)?;
    state.run(Order::Canonical);
    let e = state.extension();
    let wall_time_ms = start.elapsed().as_secs_f64() * 1000.0;
    Ok(BenchRecord {
        family,
        size: t.size(),
        variant,
        wall_time_ms,
        decided: e.decided(),
        undetermined: e.undetermined.len(),
    })
}

/// One record per family, size and variant, in that order.
pub fn run_bench(
    families: &[Family],
    sizes: &[usize],
    seed: u64,
    variants: &[Variant],
) -> Result<Vec<BenchRecord>, EngineError> {
    let mut out = Vec::new();
    for &family in families {
        for &size in sizes {
            for &variant in variants {
                out.push(bench_one(family, size, seed, variant)?);
            }
        }
    }
    Ok(out)
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in records {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// Least-squares slope of log(time) against log(size). `None` with fewer
/// than two usable points.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
