//! Seeded experiments over random instances: optimum distribution and work
//! counters, per (n, m) cell.

use crate::error::Result;
use crate::generators::{derive_seed, random_instance, RandomSpec};
use crate::problem::Fraction;
use crate::solver::solve_optimal;
use crate::stats::mean_std;

/// Default numerator range for random draws.
pub const DEFAULT_MAX_VALUE: i64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct BenchParams {
    pub n: usize,
    pub m_values: Vec<i64>,
    pub runs: u64,
    pub max_value: i64,
    pub seed: u64,
}

/// One result row.
#[derive(Clone, Debug)]
pub struct StatsRow {
    pub n: usize,
    pub m: i64,
    pub runs: u64,
    /// Mean optimum discrepancy.
    pub mean: f64,
    /// Sample standard deviation; absent for a single run.
    pub std: Option<f64>,
    /// Mean counters per solve.
    pub arcs_added: f64,
    pub batches_added: f64,
    pub bfs_arc_visits: f64,
    pub augmentations: f64,
}

/// The block counts exercised by default: 1, 2, `floor(lg n)`,
/// `floor(sqrt n)`, and `n/2`, deduplicated.
pub fn default_m_values(n: usize) -> Vec<i64> {
    let mut out = vec![
        1i64,
        2,
        if n >= 2 { n.ilog2() as i64 } else { 0 },
        (n as f64).sqrt().floor() as i64,
        n as i64 / 2,
    ];
    // m = n is excluded: every y_k < d forces sum y < nd = md, so no
    // instance with that shape exists and the sampler would spin.
    out.retain(|&m| m >= 1 && m < n as i64);
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        out.push(1);
    }
    out
}

/// Default repetition count: a million solved elements, capped at ten
/// thousand runs.
pub fn default_runs(n: usize) -> u64 {
    (1_000_000 / n as u64).clamp(1, 10_000)
}

/// Run the experiment.  Each (m, i) cell derives its own seed from the base
/// seed, so results are independent of row order and can be reproduced or
/// sharded without touching any other cell's stream.
pub fn run_bench(params: &BenchParams) -> Result<Vec<StatsRow>> {
    let mut rows = Vec::with_capacity(params.m_values.len());
    for &m in &params.m_values {
        let row_seed = derive_seed(params.seed, m as u64);
        let mut samples: Vec<Fraction> = Vec::with_capacity(params.runs as usize);
        let mut totals = [0u128; 4];
        for i in 0..params.runs {
            let spec = RandomSpec {
                n: params.n,
                m,
                max_value: params.max_value,
                seed: derive_seed(row_seed, i),
            };
            let p = random_instance(&spec)?;
            let res = solve_optimal(&p)?;
            samples.push(res.optimum);
            totals[0] += res.counters.arcs_added as u128;
            totals[1] += res.counters.batches_added as u128;
            totals[2] += res.counters.bfs_arc_visits as u128;
            totals[3] += res.counters.augmentations as u128;
        }
        let (mean, std) = mean_std(&samples)?;
        let per_run = |total: u128| total as f64 / params.runs as f64;
        rows.push(StatsRow {
            n: params.n,
            m,
            runs: params.runs,
            mean,
            std,
            arcs_added: per_run(totals[0]),
            batches_added: per_run(totals[1]),
            bfs_arc_visits: per_run(totals[2]),
            augmentations: per_run(totals[3]),
        });
    }
    Ok(rows)
}

fn std_text(std: Option<f64>) -> String {
    match std {
        Some(s) => format!("{s:.3}"),
        None => "null".into(),
    }
}

/// CSV rendering, `null` for a missing deviation.
pub fn csv(rows: &[StatsRow]) -> String {
    let mut out = String::from("n,m,runs,mean,std,arcs_added,batches,bfs_visits,augmentations\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{:.3},{},{:.3},{:.3},{:.3},{:.3}\n",
            r.n,
            r.m,
            r.runs,
            r.mean,
            std_text(r.std),
            r.arcs_added,
            r.batches_added,
            r.bfs_arc_visits,
            r.augmentations
        ));
    }
    out
}

/// Fixed-width text rendering of the same numbers.
pub fn table(rows: &[StatsRow]) -> String {
    let mut out = String::from(
        "     n      m    runs    mean     std      arcs   batches    visits    augs\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{:>6} {:>6} {:>7} {:>7.3} {:>7} {:>9.1} {:>9.1} {:>9.1} {:>7.1}\n",
            r.n,
            r.m,
            r.runs,
            r.mean,
            std_text(r.std),
            r.arcs_added,
            r.batches_added,
            r.bfs_arc_visits,
            r.augmentations
        ));
    }
    out
}
