//! The `fairgraph` command line: generate, cluster, eval, sweep, plot.
//!
//! Exit codes: 0 success, 2 usage or invalid input, 3 solver failure,
//! 4 I/O or file-format error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::admm::{admm_solve_penalized, format_trace, round_with_confidence, AdmmConfig, AdmmVariant};
use crate::error::Error;
use crate::graph::{ClusterAssignment, SensitiveAttributes};
use crate::io::{format_g17, load_edge_list, load_labels, load_labels_any, load_sensitive, save_edge_list, save_labels, save_sensitive};
use crate::metrics::score_report;
use crate::numerics::EigenOrdering;
use crate::plot::render_svg;
use crate::sbm::{
    generate_sbm, generate_weighted_two_cluster, sample_sensitive_correlated, SbmParams, WeightedTwoClusterParams,
};
use crate::spectral::{build_penalized, fair_spectral, MultiKStrategy, SolverConfig};
use crate::sweep::{format_sweep_csv, linspace, load_sweep_csv, run_sweep_with_progress, Algo, Metric, SweepSpec};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "fairgraph", version, about = "Fair graph clustering with spectral and ADMM solvers")]
pub struct Cli {
    /// Seed for every random stage.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Suppress summaries and progress on stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a synthetic graph with ground truth and protected groups.
    Generate(GenerateArgs),
    /// Cluster a graph with the spectral or ADMM solver.
    Cluster(ClusterArgs),
    /// Score a clustering against ground truth and protected groups.
    Eval(EvalArgs),
    /// Sweep the fairness weight and summarize the tradeoff.
    Sweep(SweepArgs),
    /// Render a sweep CSV as an SVG chart.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Sbm,
    Weighted2,
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or_else(|| format!("expected lo,hi, got {s:?}"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("bad number {x:?}"));
    Ok((num(lo)?, num(hi)?))
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value = "sbm")]
    pub model: Model,
    /// Community sizes, e.g. `1000,1000`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    /// Within-community edge probability (sbm).
    #[arg(long)]
    pub p_in: Option<f64>,
    /// Between-community edge probability (sbm).
    #[arg(long)]
    pub p_out: Option<f64>,
    /// Within-cluster weight range `lo,hi` (weighted2).
    #[arg(long, value_parser = parse_range)]
    pub w_in: Option<(f64, f64)>,
    /// Between-cluster weight range `lo,hi` (weighted2).
    #[arg(long, value_parser = parse_range)]
    pub w_out: Option<(f64, f64)>,
    /// Keep an unweighted edge with the drawn probability (weighted2).
    #[arg(long)]
    pub bernoulli: bool,
    /// Probability of the `+1` protected group.
    #[arg(long, default_value_t = 0.5)]
    pub sens_p: f64,
    /// Probability that a node's group copies its community (two communities only).
    #[arg(long, default_value_t = 0.0)]
    pub sens_agreement: f64,
    /// Writes `<prefix>.el`, `<prefix>.truth.csv` and `<prefix>.sens.csv`.
    #[arg(long)]
    pub out_prefix: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Svd,
    Admm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Laplacian,
    Bisect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    Magnitude,
    Algebraic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Standard,
    Lagged,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value = "svd")]
    pub algo: AlgoArg,
    /// Balance weight.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    /// Which eigenvector counts as second in the two-way split.
    #[arg(long, value_enum, default_value = "magnitude")]
    pub ordering: OrderingArg,
    /// Center multi-level indicators before penalizing.
    #[arg(long)]
    pub center_indicators: bool,
    /// Normalize embedding rows before k-means.
    #[arg(long)]
    pub normalize_rows: bool,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub sens: PathBuf,
    /// Fairness weight; one value per group for multi-level attributes
    /// (a single value is repeated).
    #[arg(long, value_delimiter = ',', default_value = "0", allow_negative_numbers = true)]
    pub lambda: Vec<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Write the ADMM residual trace as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub sens: PathBuf,
    /// Graph used for the objective column (two clusters only).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub lambda: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub sens: PathBuf,
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub lambda_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda_max: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Balance weights to sweep.
    #[arg(long = "mu", value_delimiter = ',', default_value = "-1,1", allow_negative_numbers = true)]
    pub mus: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[command(flatten)]
    pub solver: SweepSolverArgs,
}

/// Solver flags for sweeps (`mu` comes from the sweep grid).
#[derive(Debug, Args)]
pub struct SweepSolverArgs {
    #[arg(long, value_enum, default_value = "svd")]
    pub algo: AlgoArg,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum)]
    pub strategy: Option<StrategyArg>,
    #[arg(long, value_enum, default_value = "magnitude")]
    pub ordering: OrderingArg,
    #[arg(long)]
    pub center_indicators: bool,
    #[arg(long)]
    pub normalize_rows: bool,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "ami")]
    pub metric: String,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn conflict(a: &str, b: &str) -> Self {
        CliError::usage(format!("{a} cannot be combined with {b}"))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::NotSymmetric(_) | Error::NoConvergence(..) | Error::Diverged { .. } => EXIT_SOLVER,
            Error::Io { .. } | Error::Parse { .. } => EXIT_IO,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors are reported on stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Generate(a) => generate(cli, a),
        Command::Cluster(a) => cluster(cli, a),
        Command::Eval(a) => eval(cli, a),
        Command::Sweep(a) => sweep(cli, a),
        Command::Plot(a) => plot(cli, a),
    }
}

fn note(cli: &Cli, msg: impl AsRef<str>) {
    if !cli.quiet {
        eprintln!("{}", msg.as_ref());
    }
}

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::io(path, e).into()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn generate(cli: &Cli, a: &GenerateArgs) -> CliResult<()> {
    let prefix = match (&a.out_prefix, &cli.out) {
        (Some(_), Some(_)) => return Err(CliError::conflict("--out-prefix", "--out")),
        (Some(p), None) | (None, Some(p)) => p.clone(),
        (None, None) => return Err(CliError::usage("--out-prefix is required")),
    };
    let seed = cli.seed.unwrap_or(0);
    let (g, truth) = match a.model {
        Model::Sbm => {
            if a.w_in.is_some() {
                return Err(CliError::conflict("--model sbm", "--w-in"));
            }
            if a.w_out.is_some() {
                return Err(CliError::conflict("--model sbm", "--w-out"));
            }
            if a.bernoulli {
                return Err(CliError::conflict("--model sbm", "--bernoulli"));
            }
            let (Some(p_in), Some(p_out)) = (a.p_in, a.p_out) else {
                return Err(CliError::usage("--model sbm needs --p-in and --p-out"));
            };
            let k = a.sizes.len();
            let psi = ndarray::Array2::from_shape_fn((k, k), |(i, j)| if i == j { p_in } else { p_out });
            generate_sbm(&SbmParams {
                sizes: a.sizes.clone(),
                psi,
                seed,
            })?
        }
        Model::Weighted2 => {
            if a.p_in.is_some() {
                return Err(CliError::conflict("--model weighted2", "--p-in"));
            }
            if a.p_out.is_some() {
                return Err(CliError::conflict("--model weighted2", "--p-out"));
            }
            if a.sizes.len() != 2 {
                return Err(CliError::usage("--model weighted2 needs exactly two --sizes"));
            }
            let w_in = a.w_in.unwrap_or((0.5, 1.0));
            let w_out = a.w_out.unwrap_or((0.0, 0.5));
            generate_weighted_two_cluster(&WeightedTwoClusterParams {
                sizes: (a.sizes[0], a.sizes[1]),
                within_range: w_in,
                between_range: w_out,
                seed,
                bernoulli: a.bernoulli,
            })?
        }
    };
    if a.sens_agreement != 0.0 && truth.k() != 2 {
        return Err(CliError::usage("--sens-agreement needs exactly two communities"));
    }
    let sens_seed = seed.wrapping_add(0x5e45_1717);
    let s = if truth.k() == 2 {
        sample_sensitive_correlated(&truth, a.sens_p, a.sens_agreement, sens_seed)?
    } else {
        crate::sbm::sample_sensitive(g.n(), a.sens_p, sens_seed)?
    };

    save_edge_list(&g, with_suffix(&prefix, ".el"))?;
    save_labels(truth.labels(), with_suffix(&prefix, ".truth.csv"))?;
    save_sensitive(&s, with_suffix(&prefix, ".sens.csv"))?;

    let groups = s.group_labels();
    let plus = groups.iter().filter(|&&x| x == 1).count();
    note(
        cli,
        format!(
            "n={} edges={} groups: -1={} +1={}",
            g.n(),
            g.edge_count(),
            groups.len() - plus,
            plus
        ),
    );
    Ok(())
}

struct Resolved {
    solver: SolverConfig,
    algo: Algo,
    admm: AdmmConfig,
}

#[allow(clippy::too_many_arguments)]
fn resolve_solver(
    algo: AlgoArg,
    k: usize,
    strategy: Option<StrategyArg>,
    ordering: OrderingArg,
    center_indicators: bool,
    normalize_rows: bool,
    admm_flags: (Option<f64>, Option<f64>, Option<usize>, Option<f64>, Option<VariantArg>),
    seed: u64,
) -> CliResult<Resolved> {
    if k < 2 {
        return Err(CliError::usage(format!("--k must be at least 2, got {k}")));
    }
    let (rho, beta, max_iter, tol, variant) = admm_flags;
    let algo = match algo {
        AlgoArg::Svd => {
            for (set, flag) in [
                (rho.is_some(), "--rho"),
                (beta.is_some(), "--beta"),
                (max_iter.is_some(), "--max-iter"),
                (tol.is_some(), "--tol"),
                (variant.is_some(), "--variant"),
            ] {
                if set {
                    return Err(CliError::conflict("--algo svd", flag));
                }
            }
            Algo::Svd
        }
        AlgoArg::Admm => {
            if k != 2 {
                return Err(CliError::conflict("--algo admm", "--k other than 2"));
            }
            if strategy.is_some() {
                return Err(CliError::conflict("--algo admm", "--strategy"));
            }
            Algo::Admm
        }
    };
    if k == 2 && strategy.is_some() && algo == Algo::Svd {
        log::info!("--strategy has no effect with --k 2");
    }
    let mut solver = SolverConfig::binary(0.0, 1.0);
    solver.k = k;
    solver.multi_k_strategy = match strategy {
        Some(StrategyArg::Bisect) => MultiKStrategy::RecursiveBisection,
        _ => MultiKStrategy::LaplacianKMeans,
    };
    solver.ordering = match ordering {
        OrderingArg::Magnitude => EigenOrdering::LargestMagnitude,
        OrderingArg::Algebraic => EigenOrdering::LargestAlgebraic,
    };
    solver.center_indicators = center_indicators;
    solver.normalize_rows = normalize_rows;
    solver.seed = seed;

    let mut admm = AdmmConfig::new(solver.clone());
    if let Some(r) = rho {
        admm.rho = r;
    }
    if let Some(b) = beta {
        admm.beta = b;
    }
    if let Some(m) = max_iter {
        admm.max_iter = m;
    }
    if let Some(t) = tol {
        admm.tol = t;
    }
    if let Some(VariantArg::Lagged) = variant {
        admm.variant = AdmmVariant::Lagged;
    }
    admm.validate()?;
    Ok(Resolved { solver, algo, admm })
}

fn expand_lambdas(lambdas: &[f64], s: &SensitiveAttributes) -> CliResult<Vec<f64>> {
    let want = s.penalty_count();
    match lambdas.len() {
        1 => Ok(vec![lambdas[0]; want]),
        l if l == want => Ok(lambdas.to_vec()),
        l => Err(CliError::usage(format!(
            "--lambda has {l} values but the attributes need 1 or {want}"
        ))),
    }
}

fn cluster(cli: &Cli, a: &ClusterArgs) -> CliResult<()> {
    let sa = &a.solver;
    let mut r = resolve_solver(
        sa.algo,
        sa.k,
        sa.strategy,
        sa.ordering,
        sa.center_indicators,
        sa.normalize_rows,
        (sa.rho, sa.beta, sa.max_iter, sa.tol, sa.variant),
        cli.seed.unwrap_or(0),
    )?;
    if a.trace.is_some() && r.algo != Algo::Admm {
        return Err(CliError::conflict("--trace", "--algo svd"));
    }
    let g = load_edge_list(&a.graph)?;
    let s = load_sensitive(&a.sens, g.n())?;
    r.solver.lambdas = expand_lambdas(&a.lambda, &s)?;
    r.solver.mu = sa.mu;
    let penalized = build_penalized(&g, &s, &r.solver)?;

    let pred = match r.algo {
        Algo::Svd => fair_spectral(&penalized, &r.solver)?,
        Algo::Admm => {
            let cfg = AdmmConfig {
                solver: r.solver.clone(),
                ..r.admm
            };
            let sol = admm_solve_penalized(&penalized, &cfg)?;
            if let Some(path) = &a.trace {
                std::fs::write(path, format_trace(&sol.trace)).map_err(|e| Error::io(path, e))?;
            }
            if !sol.converged {
                note(
                    cli,
                    format!(
                        "admm: stopped at max-iter {} (split residual {:e}, diagonal residual {:e})",
                        sol.state.iteration, sol.state.residual_split, sol.state.residual_diag
                    ),
                );
            }
            let rounding = round_with_confidence(&sol.state)?;
            if rounding.low_confidence {
                note(cli, "warning: leading eigenvalues of P are nearly tied; rounding is low-confidence");
            }
            rounding.assignment
        }
    };

    // node 0 always lands in cluster 0, so equal partitions give equal files
    let pred = pred.canonical();
    emit(cli, &crate::io::format_labels(pred.labels()))?;

    if pred.k() == 2 {
        let obj = crate::spectral::objective_value(&penalized, &pred)?;
        note(cli, format!("objective={}", format_g17(obj)));
    }
    if pred.is_degenerate() {
        note(cli, "warning: every node landed in one cluster");
    }
    Ok(())
}

fn opt_num(x: Option<f64>) -> String {
    x.map(format_g17).unwrap_or_default()
}

pub const EVAL_HEADER: &str =
    "temporal_ami,temporal_ari,temporal_v,specificity_ami,specificity_ari,specificity_v,balance,objective";

fn eval(cli: &Cli, a: &EvalArgs) -> CliResult<()> {
    let pred = load_labels_any(&a.pred)?;
    let n = pred.len();
    let pred = ClusterAssignment::from_labels(pred)?;
    let s = load_sensitive(&a.sens, n)?;
    let truth = a.truth.as_ref().map(|p| load_labels(p, n)).transpose()?;

    let penalized = match &a.graph {
        Some(path) => {
            let g = load_edge_list(path)?;
            let mut cfg = SolverConfig::binary(0.0, a.mu.unwrap_or(1.0));
            cfg.lambdas = expand_lambdas(a.lambda.as_deref().unwrap_or(&[0.0]), &s)?;
            Some(build_penalized(&g, &s, &cfg)?)
        }
        None => {
            if a.lambda.is_some() {
                return Err(CliError::usage("--lambda needs --graph"));
            }
            if a.mu.is_some() {
                return Err(CliError::usage("--mu needs --graph"));
            }
            None
        }
    };
    let r = score_report(&pred, truth.as_deref(), &s, penalized.as_ref())?;
    let t = r.temporal;
    let text = format!(
        "{EVAL_HEADER}\n{},{},{},{},{},{},{},{}\n",
        opt_num(t.map(|t| t.ami)),
        opt_num(t.map(|t| t.ari)),
        opt_num(t.map(|t| t.v_measure)),
        format_g17(r.specificity.ami),
        format_g17(r.specificity.ari),
        format_g17(r.specificity.v_measure),
        format_g17(r.balance),
        opt_num(r.objective)
    );
    emit(cli, &text)
}

fn sweep(cli: &Cli, a: &SweepArgs) -> CliResult<()> {
    if a.steps == 0 {
        return Err(CliError::usage("--steps must be at least 1"));
    }
    if a.lambda_min > a.lambda_max {
        return Err(CliError::usage(format!(
            "--lambda-min {} is greater than --lambda-max {}",
            a.lambda_min, a.lambda_max
        )));
    }
    if a.steps > 1 && a.lambda_min == a.lambda_max {
        return Err(CliError::usage("--lambda-min equals --lambda-max; use --steps 1"));
    }
    let seeds = match (&a.seeds, cli.seed) {
        (Some(_), Some(_)) => return Err(CliError::conflict("--seeds", "--seed")),
        (Some(s), None) => s.clone(),
        (None, s) => vec![s.unwrap_or(0)],
    };
    let sa = &a.solver;
    let r = resolve_solver(
        sa.algo,
        sa.k,
        sa.strategy,
        sa.ordering,
        sa.center_indicators,
        sa.normalize_rows,
        (sa.rho, sa.beta, sa.max_iter, sa.tol, sa.variant),
        0,
    )?;

    let g = load_edge_list(&a.graph)?;
    let s = load_sensitive(&a.sens, g.n())?;
    let truth = a.truth.as_ref().map(|p| load_labels(p, g.n())).transpose()?;
    let spec = SweepSpec {
        lambda_grid: linspace(a.lambda_min, a.lambda_max, a.steps),
        mu_values: a.mus.clone(),
        algo: r.algo,
        graph: g,
        sensitive: s,
        truth,
        seeds,
        solver: r.solver,
        admm: r.admm,
    };
    let quiet = cli.quiet;
    let points = run_sweep_with_progress(&spec, |done, total| {
        if !quiet && (done == total || done % 10 == 0) {
            eprintln!("sweep: {done}/{total}");
        }
    })?;
    for p in &points {
        if let Some(e) = &p.error {
            note(cli, format!("sweep point mu={} lambda={} seed={}: {e}", p.mu, p.lambda, p.seed));
        }
    }
    emit(cli, &format_sweep_csv(&points))
}

fn plot(cli: &Cli, a: &PlotArgs) -> CliResult<()> {
    let metric: Metric = a.metric.parse()?;
    let points = load_sweep_csv(&a.input)?;
    if points.is_empty() {
        return Err(Error::parse(&a.input, 0, "sweep CSV has no data rows").into());
    }
    emit(cli, &render_svg(&points, metric))
}
