//! Experiment grid: data generation, exact oracle, every approximation over
//! the `l` grid, subspace distances, relative errors and optional bounds.
//!
//! Seeds: each experiment seed `s` derives a graph seed, a sample seed and
//! one selection seed per `(l, axis)` through [`mix`]. Every method at the
//! same `(s, l, axis)` uses the same selection, so the relative error of a
//! method and its column-sampling reference share one sketch.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use nyspca_core::approx::approximate;
use nyspca_core::bounds::{cs_bound_with, nystrom_bound_with, SketchSpectra};
use nyspca_core::simgen::{precision_band, precision_random, sample_mvn, PrecisionModel};
use nyspca_core::subspace::{delta, projector, Projector};
use nyspca_core::{center_columns, sample_uniform, Axis, Basis, ExactPca, Mat, Method, Route, Selection};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::io::load;
use crate::timing::median;

/// Environment variable naming the default worker count.
pub const THREADS_ENV: &str = "NYSPCA_THREADS";

#[derive(Debug, Clone)]
pub enum DataSource {
    /// Rows drawn from `N(0, Ω⁻¹)` for a generated precision matrix `Ω`.
    Simulated { model: PrecisionModel, n: usize, p: usize },
    File(PathBuf),
    Matrix { label: String, x: Arc<Mat> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LRule {
    /// Ten points from `⌈3d/2⌉` to `min(15d, ⌊2p/5⌋)`, see [`expand_l_grid`].
    PaperGrid,
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub source: DataSource,
    pub d_list: Vec<usize>,
    pub l_rule: LRule,
    pub methods: Vec<Method>,
    pub seeds: Vec<u64>,
    pub route: Route,
    pub center: bool,
    /// Evaluate the Nyström and column-sampling theorem bounds for `v_nys`
    /// and `v_cs` rows.
    pub with_bounds: bool,
    /// Compute the exact PCA oracle (needed for `delta`). Timing runs may
    /// switch it off.
    pub compute_oracle: bool,
    /// Worker threads; `None` reads [`THREADS_ENV`], falling back to rayon's
    /// default.
    pub parallelism: Option<usize>,
    /// Repetitions of the timed approximation per cell; the reported
    /// runtime is their median.
    pub timing_runs: usize,
}

impl ExperimentConfig {
    pub fn new(source: DataSource) -> Self {
        ExperimentConfig {
            source,
            d_list: vec![5],
            l_rule: LRule::PaperGrid,
            methods: vec![Method::VNys, Method::VCs],
            seeds: vec![0],
            route: Route::Stable,
            center: true,
            with_bounds: false,
            compute_oracle: true,
            parallelism: None,
            timing_runs: 1,
        }
    }
}

/// One grid cell. `relative_error` is `delta / delta_reference`; it is 1 for
/// the reference method itself and blank when the reference is exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub condition: String,
    pub n: usize,
    pub p: usize,
    pub d: usize,
    pub l: usize,
    pub method: String,
    pub seed: u64,
    pub delta: Option<f64>,
    pub relative_error: Option<f64>,
    pub bound_total: Option<f64>,
    pub gap: Option<f64>,
    pub pd_shift: f64,
    pub runtime_ms: f64,
    pub status: String,
}

pub const RESULT_COLUMNS: [&str; 14] = [
    "condition",
    "n",
    "p",
    "d",
    "l",
    "method",
    "seed",
    "delta",
    "relative_error",
    "bound_total",
    "gap",
    "pd_shift",
    "runtime_ms",
    "status",
];

/// splitmix64 finalizer over `seed ⊕ tags`.
pub fn mix(seed: u64, tags: &[u64]) -> u64 {
    let mut z = seed;
    for &t in tags {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(t.wrapping_mul(0xd1b5_4a32_d192_ed03));
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
    }
    z
}

fn axis_tag(axis: Axis) -> u64 {
    match axis {
        Axis::Columns => 0,
        Axis::Rows => 1,
    }
}

/// Selection shared by all methods at `(seed, l, axis)`.
pub fn selection_for(seed: u64, l: usize, axis: Axis, q: usize) -> Result<Selection> {
    Ok(sample_uniform(q, l, mix(seed, &[2, l as u64, axis_tag(axis)]), axis)?)
}

/// Ten equally spaced sketch sizes from `⌈3d/2⌉` to `min(15d, ⌊2p/5⌋)`,
/// rounded to the nearest integer and deduplicated.
pub fn expand_l_grid(d: usize, p: usize) -> Result<Vec<usize>> {
    if d == 0 || p < 4 {
        return Err(HarnessError::Usage(format!("l grid needs d >= 1 and p >= 4, got d = {d}, p = {p}")));
    }
    let lo = (3 * d).div_ceil(2);
    let hi = (15 * d).min(2 * p / 5);
    if lo > hi {
        return Err(HarnessError::Usage(format!(
            "empty l grid for d = {d}, p = {p}: lower end {lo} exceeds upper end {hi}"
        )));
    }
    let step = (hi - lo) as f64 / 9.0;
    let mut grid: Vec<usize> = (0..10).map(|i| (lo as f64 + step * i as f64).round() as usize).collect();
    grid[9] = hi;
    grid.dedup();
    Ok(grid)
}

pub fn condition_label(source: &DataSource) -> String {
    match source {
        DataSource::Simulated { model: PrecisionModel::Random { x }, .. } => format!("random({x})"),
        DataSource::Simulated { model: PrecisionModel::Band { b }, .. } => format!("band({b})"),
        DataSource::File(path) => path.file_name().map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned()),
        DataSource::Matrix { label, .. } => label.clone(),
    }
}

/// Data matrix for one experiment seed plus the precision shift applied.
pub fn realize(source: &DataSource, seed: u64) -> Result<(Mat, f64)> {
    match source {
        DataSource::Simulated { model, n, p } => {
            let (omega, spec) = match *model {
                PrecisionModel::Random { x } => precision_random(*p, x, mix(seed, &[0]))?,
                PrecisionModel::Band { b } => precision_band(*p, b)?,
            };
            Ok((sample_mvn(*n, &omega, mix(seed, &[1]))?, spec.pd_shift))
        }
        DataSource::File(path) => Ok((load(path)?, 0.0)),
        DataSource::Matrix { x, .. } => Ok(((**x).clone(), 0.0)),
    }
}

fn l_values(rule: &LRule, d: usize, p: usize) -> Result<Vec<usize>> {
    match rule {
        LRule::PaperGrid => expand_l_grid(d, p),
        LRule::Explicit(v) => Ok(v.clone()),
    }
}

fn pool(parallelism: Option<usize>) -> Result<rayon::ThreadPool> {
    let threads = parallelism
        .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()))
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HarnessError::Usage(format!("cannot start {threads} worker threads: {e}")))
}

fn validate(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.d_list.is_empty() || cfg.d_list.contains(&0) {
        return Err(HarnessError::Usage("d list must be nonempty and positive".into()));
    }
    if cfg.methods.is_empty() {
        return Err(HarnessError::Usage("no methods requested".into()));
    }
    if cfg.seeds.is_empty() {
        return Err(HarnessError::Usage("no seeds requested".into()));
    }
    if let LRule::Explicit(v) = &cfg.l_rule {
        if v.is_empty() || v.contains(&0) {
            return Err(HarnessError::Usage("explicit l list must be nonempty and positive".into()));
        }
    }
    Ok(())
}

/// Everything computed once per experiment seed.
struct Instance {
    x: Mat,
    pd_shift: f64,
    oracle: Option<ExactPca>,
}

impl Instance {
    fn build(cfg: &ExperimentConfig, seed: u64) -> Result<Instance> {
        let (raw, pd_shift) = realize(&cfg.source, seed)?;
        let x = if cfg.center { center_columns(&raw) } else { raw };
        let oracle = if cfg.compute_oracle || cfg.with_bounds { Some(ExactPca::new(&x)?) } else { None };
        Ok(Instance { x, pd_shift, oracle })
    }

    fn exact_projector(&self, v_target: bool, d: usize) -> Result<Option<Projector>> {
        let Some(pca) = &self.oracle else { return Ok(None) };
        let b = if v_target { pca.v_basis(d)? } else { pca.u_basis(d)? };
        Ok(Some(projector(&b.b, d)?))
    }
}

fn selection(x: &Mat, seed: u64, l: usize, method: Method) -> Result<Selection> {
    let axis = method.axis();
    let q = match axis {
        Axis::Columns => x.cols(),
        Axis::Rows => x.rows(),
    };
    if l > q {
        return Err(HarnessError::Usage(format!("l = {l} exceeds the {q} available {axis:?}")));
    }
    selection_for(seed, l, axis, q)
}

/// Runs one approximation `runs` times and reports the last basis with
/// the median elapsed milliseconds.
pub fn timed_approximation(x: &Mat, method: Method, sel: &Selection, route: Route, runs: usize) -> Result<(Basis, f64)> {
    let mut times = Vec::with_capacity(runs.max(1));
    let mut basis = None;
    for _ in 0..runs.max(1) {
        let t = Instant::now();
        let b = approximate(method, x, sel, route)?;
        times.push(t.elapsed().as_secs_f64() * 1e3);
        basis = Some(b);
    }
    Ok((basis.expect("at least one run"), median(&times)))
}

fn distance(exact: &Option<Projector>, b: &Basis, d: usize) -> Result<Option<f64>> {
    match exact {
        None => Ok(None),
        Some(pe) => {
            if b.ncols() < d {
                return Err(nyspca_core::Error::Rank { requested: d, rank: b.ncols() }.into());
            }
            Ok(Some(delta(&projector(&b.b, d)?, pe)?))
        }
    }
}

struct CellOutcome {
    delta: Option<f64>,
    relative_error: Option<f64>,
    bound_total: Option<f64>,
    gap: Option<f64>,
    runtime_ms: f64,
    status: String,
}

fn run_cell(cfg: &ExperimentConfig, inst: &Instance, seed: u64, d: usize, l: usize, method: Method) -> Result<CellOutcome> {
    let x = &inst.x;
    if method == Method::Exact {
        let sel = Selection::all(x.cols(), Axis::Columns);
        let (b, ms) = timed_approximation(x, method, &sel, cfg.route, cfg.timing_runs)?;
        let dv = distance(&inst.exact_projector(true, d)?, &b, d)?;
        return Ok(CellOutcome {
            delta: dv,
            relative_error: dv.map(|_| 0.0),
            bound_total: None,
            gap: None,
            runtime_ms: ms,
            status: "ok".into(),
        });
    }
    let sel = selection(x, seed, l, method)?;
    let (basis, ms) = timed_approximation(x, method, &sel, cfg.route, cfg.timing_runs)?;
    let exact = inst.exact_projector(method.targets_v(), d)?;
    let dv = distance(&exact, &basis, d)?;
    let mut status = String::from("ok");

    let reference = method.reference();
    let relative_error = match dv {
        None => None,
        Some(dv) => {
            let dr = if method == reference {
                dv
            } else {
                let rsel = selection(x, seed, l, reference)?;
                let rb = approximate(reference, x, &rsel, cfg.route)?;
                distance(&exact, &rb, d)?.expect("oracle present")
            };
            if dr < 1e-12 {
                status = format!("ok; reference {reference} is exact, relative error undefined");
                None
            } else {
                Some(dv / dr)
            }
        }
    };

    let (mut bound_total, mut gap) = (None, None);
    if cfg.with_bounds && matches!(method, Method::VNys | Method::VCs) {
        let eig = inst.oracle.as_ref().expect("bounds need the oracle").eigvals();
        let report = SketchSpectra::with_eig_s(x, &sel, eig).and_then(|s| {
            if method == Method::VNys {
                nystrom_bound_with(x, &sel, d, &s)
            } else {
                cs_bound_with(x, &sel, d, &s)
            }
        });
        match report {
            Ok(r) => {
                bound_total = Some(r.total);
                gap = Some(r.gap);
            }
            Err(e) => status = format!("ok; bound unavailable: {e}"),
        }
    }
    Ok(CellOutcome { delta: dv, relative_error, bound_total, gap, runtime_ms: ms, status })
}

#[derive(Clone, Copy)]
struct Cell {
    seed_idx: usize,
    d: usize,
    l: usize,
    method: Method,
}

fn cells(cfg: &ExperimentConfig, p: usize) -> Result<Vec<Cell>> {
    let mut out = Vec::new();
    for seed_idx in 0..cfg.seeds.len() {
        for &d in &cfg.d_list {
            for l in l_values(&cfg.l_rule, d, p)? {
                for &method in &cfg.methods {
                    out.push(Cell { seed_idx, d, l, method });
                }
            }
        }
    }
    Ok(out)
}

fn data_shape(cfg: &ExperimentConfig) -> Result<(usize, usize)> {
    Ok(match &cfg.source {
        DataSource::Simulated { n, p, .. } => (*n, *p),
        DataSource::File(path) => {
            if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
                load(path)?.shape()
            } else {
                let h = crate::dmat::read_header_from(path)?;
                (h.rows, h.cols)
            }
        }
        DataSource::Matrix { x, .. } => x.shape(),
    })
}

fn row(label: &str, shape: (usize, usize), seed: u64, c: &Cell, pd_shift: f64) -> ResultRow {
    ResultRow {
        condition: label.to_string(),
        n: shape.0,
        p: shape.1,
        d: c.d,
        l: c.l,
        method: c.method.tag().to_string(),
        seed,
        delta: None,
        relative_error: None,
        bound_total: None,
        gap: None,
        pd_shift,
        runtime_ms: 0.0,
        status: String::new(),
    }
}

/// Evaluates the whole grid. Rows come back ordered by seed, `d`, `l`
/// and method (in the configured order); per-cell failures are recorded
/// in `status` and never abort the run.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    validate(cfg)?;
    let shape = data_shape(cfg)?;
    let label = condition_label(&cfg.source);
    let grid = cells(cfg, shape.1)?;
    let pool = pool(cfg.parallelism)?;

    let instances: Vec<std::result::Result<Instance, String>> = pool.install(|| {
        cfg.seeds.par_iter().map(|&s| Instance::build(cfg, s).map_err(|e| e.to_string())).collect()
    });

    let rows = pool.install(|| {
        grid.par_iter()
            .map(|c| {
                let seed = cfg.seeds[c.seed_idx];
                match &instances[c.seed_idx] {
                    Err(e) => {
                        let mut r = row(&label, shape, seed, c, 0.0);
                        r.status = format!("error: {e}");
                        r
                    }
                    Ok(inst) => {
                        let mut r = row(&label, shape, seed, c, inst.pd_shift);
                        match run_cell(cfg, inst, seed, c.d, c.l, c.method) {
                            Ok(o) => {
                                r.delta = o.delta;
                                r.relative_error = o.relative_error;
                                r.bound_total = o.bound_total;
                                r.gap = o.gap;
                                r.runtime_ms = o.runtime_ms;
                                r.status = o.status;
                            }
                            Err(e) => r.status = format!("error: {e}"),
                        }
                        r
                    }
                }
            })
            .collect()
    });
    Ok(rows)
}

pub fn write_results_csv(path: impl AsRef<Path>, rows: &[ResultRow]) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    write_results(file, rows).map_err(|e| HarnessError::Csv { path: path.into(), source: e })
}

pub fn write_results<W: std::io::Write>(w: W, rows: &[ResultRow]) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(w);
    if rows.is_empty() {
        w.write_record(RESULT_COLUMNS)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results_csv(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(|e| HarnessError::Csv { path: path.into(), source: e })?;
    r.deserialize()
        .collect::<std::result::Result<Vec<ResultRow>, _>>()
        .map_err(|e| HarnessError::Csv { path: path.into(), source: e })
}
