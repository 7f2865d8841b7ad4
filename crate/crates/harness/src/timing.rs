//! Wall-clock timing of the approximation step.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{HarnessError, Result};
use crate::experiment::{run_experiment, ExperimentConfig, ResultRow};

pub const DEFAULT_RUNS: usize = 4;

/// Median of a nonempty sample; the mean of the two middle values for an
/// even count.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

/// Evaluates the grid on one worker (unless `cfg.parallelism` says
/// otherwise), timing each approximation `runs` times and reporting the
/// median. Data and the oracle are built once per seed and never timed.
pub fn time_methods(cfg: &ExperimentConfig, runs: usize) -> Result<Vec<ResultRow>> {
    if runs == 0 {
        return Err(HarnessError::Usage("need at least one timing run".into()));
    }
    let serial = ExperimentConfig { parallelism: Some(cfg.parallelism.unwrap_or(1)), timing_runs: runs, ..cfg.clone() };
    run_experiment(&serial)
}

/// Text table of median seconds with one line per `(d, l)` and one column
/// per method, taking the median across seeds.
pub fn timing_table(rows: &[ResultRow]) -> String {
    let mut methods: Vec<&str> = Vec::new();
    for r in rows {
        if !methods.contains(&r.method.as_str()) {
            methods.push(&r.method);
        }
    }
    let mut cells: BTreeMap<(usize, usize), BTreeMap<&str, Vec<f64>>> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.status.starts_with("ok")) {
        cells.entry((r.d, r.l)).or_default().entry(&r.method).or_default().push(r.runtime_ms);
    }
    let mut out = String::new();
    let _ = write!(out, "{:>6} {:>6}", "d", "l");
    for m in &methods {
        let _ = write!(out, " {m:>11}");
    }
    out.push('\n');
    for ((d, l), by_method) in &cells {
        let _ = write!(out, "{d:>6} {l:>6}");
        for m in &methods {
            match by_method.get(m) {
                Some(t) => {
                    let _ = write!(out, " {:>11.4}", median(t) / 1e3);
                }
                None => {
                    let _ = write!(out, " {:>11}", "-");
                }
            }
        }
        out.push('\n');
    }
    out
}
