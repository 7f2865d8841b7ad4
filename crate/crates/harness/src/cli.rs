//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nyspca_core::approx::approximate;
use nyspca_core::bounds::{
    corollary_bounds, corollary_input, cs_bound_with, nystrom_bound_with, sketch_coherence, BoundReport,
    SketchSpectra,
};
use nyspca_core::simgen::{precision_band, precision_random, sample_mvn, PrecisionModel};
use nyspca_core::subspace::{delta, projector};
use nyspca_core::{center_columns, Axis, ExactPca, Method, Route};

use crate::error::{HarnessError, Result};
use crate::experiment::{
    mix, read_results_csv, run_experiment, selection_for, write_results, write_results_csv, DataSource,
    ExperimentConfig, LRule,
};
use crate::io::{load, save};
use crate::plot::relative_error_svg;
use crate::timing::{time_methods, timing_table, DEFAULT_RUNS};

#[derive(Debug, Parser)]
#[command(name = "nyspca", version, about = "Nyström and column-sampling approximate PCA")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate Gaussian data from a sparse precision matrix.
    Simgen(SimgenArgs),
    /// Exact leading right singular vectors of the centered data.
    Pca(PcaArgs),
    /// One approximate basis.
    Approx(ApproxArgs),
    /// Relative-error grid over sketch sizes, methods and seeds.
    Compare(CompareArgs),
    /// Theorem and corollary bounds for one sketch.
    Bounds(BoundsArgs),
    /// Median approximation runtimes over repeated runs.
    Bench(BenchArgs),
    /// Render an SVG of relative error against l from a results CSV.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Space,
    Stable,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Route {
        match r {
            RouteArg::Space => Route::Space,
            RouteArg::Stable => Route::Stable,
        }
    }
}

/// `random:<x>` or `band:<b>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelArg(pub PrecisionModel);

impl FromStr for ModelArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (kind, value) = s.split_once(':').ok_or_else(|| format!("expected random:<x> or band:<b>, got {s:?}"))?;
        match kind {
            "random" => {
                let x: f64 = value.parse().map_err(|_| format!("bad edge probability {value:?}"))?;
                Ok(ModelArg(PrecisionModel::Random { x }))
            }
            "band" => {
                let b: usize = value.parse().map_err(|_| format!("bad bandwidth {value:?}"))?;
                Ok(ModelArg(PrecisionModel::Band { b }))
            }
            _ => Err(format!("unknown model {kind:?}; use random:<x> or band:<b>")),
        }
    }
}

/// `paper` or a comma-separated list of sketch sizes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LGridArg(pub LRule);

impl FromStr for LGridArg {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "paper" {
            return Ok(LGridArg(LRule::PaperGrid));
        }
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad l value {t:?}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(|v| LGridArg(LRule::Explicit(v)))
    }
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct SimgenArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub model: ModelArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output matrix; `.csv` for text, anything else for DMAT.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the precision matrix here.
    #[arg(long)]
    pub precision_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PcaArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub out: PathBuf,
    /// Use the data as given instead of centering columns.
    #[arg(long)]
    pub no_center: bool,
}

#[derive(Debug, Args)]
pub struct ApproxArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "stable")]
    pub route: RouteArg,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub no_center: bool,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Data matrix file. Mutually exclusive with `--model`.
    #[arg(long = "in", conflicts_with = "model")]
    pub input: Option<PathBuf>,
    #[arg(long, requires_all = ["n", "p"])]
    pub model: Option<ModelArg>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    /// Comma-separated target dimensions.
    #[arg(long, value_delimiter = ',', default_value = "5")]
    pub d: Vec<usize>,
    #[arg(long, default_value = "paper")]
    pub l_grid: LGridArg,
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "v_nys,v_cs")]
    pub methods: Vec<Method>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub seeds: Vec<u64>,
    #[arg(long, value_enum, default_value = "stable")]
    pub route: RouteArg,
    #[arg(long)]
    pub no_center: bool,
    /// Worker threads (defaults to NYSPCA_THREADS, then all cores).
    #[arg(long)]
    pub threads: Option<usize>,
}

impl GridArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let source = match (&self.input, &self.model) {
            (Some(path), None) => DataSource::File(path.clone()),
            (None, Some(m)) => DataSource::Simulated {
                model: m.0,
                n: self.n.expect("required by clap"),
                p: self.p.expect("required by clap"),
            },
            _ => return Err(HarnessError::Usage("give exactly one of --in or --model".into())),
        };
        let mut cfg = ExperimentConfig::new(source);
        cfg.d_list = self.d.clone();
        cfg.l_rule = self.l_grid.0.clone();
        cfg.methods = self.methods.clone();
        cfg.seeds = self.seeds.clone();
        cfg.route = self.route.into();
        cfg.center = !self.no_center;
        cfg.parallelism = self.threads;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    /// Results CSV; stdout when absent.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Also write an SVG plot of relative error against l.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Evaluate the theorem bounds for v_nys and v_cs rows.
    #[arg(long)]
    pub bounds: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub l: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub no_center: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, default_value_t = DEFAULT_RUNS)]
    pub runs: usize,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Compute the exact oracle so `delta` is filled in (never timed).
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Results CSV written by `compare`.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value = "relative error")]
    pub title: String,
}

/// Parses `args` and runs the command, returning the process exit code.
/// Help and version requests exit with 0; any parse failure with 1.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn write_err(path: &Path) -> impl Fn(std::io::Error) -> HarnessError + '_ {
    move |e| HarnessError::io(path, e)
}

fn stdout_err(e: std::io::Error) -> HarnessError {
    HarnessError::io("<stdout>", e)
}

fn load_centered(path: &Path, no_center: bool) -> Result<nyspca_core::Mat> {
    let x = load(path)?;
    Ok(if no_center { x } else { center_columns(&x) })
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Simgen(a) => {
            let (omega, spec) = match a.model.0 {
                PrecisionModel::Random { x } => precision_random(a.p, x, mix(a.seed, &[0]))?,
                PrecisionModel::Band { b } => precision_band(a.p, b)?,
            };
            let x = sample_mvn(a.n, &omega, mix(a.seed, &[1]))?;
            save(&a.out, &x)?;
            if let Some(path) = &a.precision_out {
                save(path, &omega)?;
            }
            writeln!(out, "wrote {} x {} to {}; edges {}, pd_shift {}", a.n, a.p, a.out.display(), spec.edges, spec.pd_shift)
                .map_err(stdout_err)?;
        }
        Command::Pca(a) => {
            let x = load_centered(&a.input, a.no_center)?;
            let basis = ExactPca::new(&x)?.v_basis(a.d)?;
            save(&a.out, &basis.b)?;
            let ev = basis.eigvals.unwrap_or_default();
            writeln!(out, "eigenvalues: {ev:?}").map_err(stdout_err)?;
        }
        Command::Approx(a) => {
            let x = load_centered(&a.input, a.no_center)?;
            let axis = a.method.axis();
            let q = if axis == Axis::Columns { x.cols() } else { x.rows() };
            let sel = selection_for(a.seed, a.l, axis, q)?;
            let basis = approximate(a.method, &x, &sel, a.route.into())?.truncate(a.d)?;
            save(&a.out, &basis.b)?;
            writeln!(out, "{} basis {} x {}, orthonormal: {}", a.method, basis.b.rows(), basis.b.cols(), basis.orthonormal)
                .map_err(stdout_err)?;
        }
        Command::Compare(a) => {
            let mut cfg = a.grid.config()?;
            cfg.with_bounds = a.bounds;
            let rows = run_experiment(&cfg)?;
            match &a.csv {
                Some(path) => write_results_csv(path, &rows)?,
                None => write_results(&mut *out, &rows).map_err(|e| HarnessError::Csv { path: "<stdout>".into(), source: e })?,
            }
            if let Some(path) = &a.plot {
                let title = crate::experiment::condition_label(&cfg.source);
                std::fs::write(path, relative_error_svg(&rows, &title)).map_err(write_err(path))?;
            }
        }
        Command::Bounds(a) => bounds_command(&a, out)?,
        Command::Bench(a) => {
            let mut cfg = a.grid.config()?;
            cfg.compute_oracle = a.oracle;
            let rows = time_methods(&cfg, a.runs)?;
            if let Some(path) = &a.csv {
                write_results_csv(path, &rows)?;
            }
            out.write_all(timing_table(&rows).as_bytes()).map_err(stdout_err)?;
        }
        Command::Plot(a) => {
            let rows = read_results_csv(&a.input)?;
            std::fs::write(&a.out, relative_error_svg(&rows, &a.title)).map_err(write_err(&a.out))?;
        }
    }
    Ok(())
}

fn bounds_command(a: &BoundsArgs, out: &mut dyn Write) -> Result<()> {
    let x = load_centered(&a.input, a.no_center)?;
    let (n, p) = x.shape();
    let sel = selection_for(a.seed, a.l, Axis::Columns, p)?;
    let pca = ExactPca::new(&x)?;
    let pe = projector(&pca.v_basis(a.d)?.b, a.d)?;
    let spectra = SketchSpectra::with_eig_s(&x, &sel, pca.eigvals())?;

    let v_nys = approximate(Method::VNys, &x, &sel, Route::Stable)?;
    let v_cs = approximate(Method::VCs, &x, &sel, Route::Stable)?;
    let d_nys = delta(&projector(&v_nys.b, a.d)?, &pe)?;
    let d_cs = delta(&projector(&v_cs.b, a.d)?, &pe)?;

    let thm1 = nystrom_bound_with(&x, &sel, a.d, &spectra)?;
    let thm2 = cs_bound_with(&x, &sel, a.d, &spectra)?;
    let c = sketch_coherence(&x, &sel)?;
    let (cor_nys, cor_cs) = corollary_bounds(c, p, a.l, n, thm2.gap, &corollary_input(&v_nys, a.d)?, a.d)?;

    let reports: [(&BoundReport, f64); 4] = [(&thm1, d_nys), (&thm2, d_cs), (&cor_nys, d_nys), (&cor_cs, d_cs)];
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let csv_err = |e| HarnessError::Csv { path: a.csv.clone().unwrap_or_else(|| "<stdout>".into()), source: e };
        w.write_record(["kind", "d", "l", "seed", "gap", "term1", "term2", "total", "coherence", "clamped", "delta"])
            .map_err(csv_err)?;
        for (r, dv) in reports {
            w.write_record([
                r.kind.tag().to_string(),
                r.d.to_string(),
                r.l.to_string(),
                a.seed.to_string(),
                format!("{:?}", r.gap),
                format!("{:?}", r.term1),
                format!("{:?}", r.term2),
                format!("{:?}", r.total),
                r.coherence.map(|c| format!("{c:?}")).unwrap_or_default(),
                r.clamped.to_string(),
                format!("{dv:?}"),
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| HarnessError::io("<buffer>", e))?;
    }
    match &a.csv {
        Some(path) => std::fs::write(path, &buf).map_err(write_err(path))?,
        None => out.write_all(&buf).map_err(stdout_err)?,
    }
    Ok(())
}
