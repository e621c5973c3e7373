//! Fairness-weight sweeps and the tradeoff-curve summary.
//!
//! Every point of a sweep is scored against the ground truth ("temporal")
//! and against the protected groups ("specificity"). The tradeoff curve puts
//! `1 - specificity` on the x axis and `temporal` on the y axis, keeps the
//! Pareto frontier and integrates it with the trapezoid rule, holding the
//! end values flat out to `x = 0` and `x = 1`.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::admm::{admm_solve_penalized, round_assignment, AdmmConfig};
use crate::error::{Error, Result};
use crate::graph::{ClusterAssignment, Graph, SensitiveAttributes};
use crate::io::format_g17;
use crate::metrics::{balance, Scores};
use crate::spectral::{build_penalized, fair_spectral, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Algo {
    #[default]
    Svd,
    Admm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Ami,
    Ari,
    V,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Ami, Metric::Ari, Metric::V];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Ami => "ami",
            Metric::Ari => "ari",
            Metric::V => "v",
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ami" => Ok(Metric::Ami),
            "ari" => Ok(Metric::Ari),
            "v" => Ok(Metric::V),
            _ => Err(Error::InvalidParameter(format!("unknown metric {s:?} (expected ami, ari or v)"))),
        }
    }
}

/// `count` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub lambda_grid: Vec<f64>,
    pub mu_values: Vec<f64>,
    pub algo: Algo,
    pub graph: Graph,
    pub sensitive: SensitiveAttributes,
    pub truth: Option<Vec<usize>>,
    pub seeds: Vec<u64>,
    /// Template for every point; `lambdas`, `mu` and `seed` are overwritten.
    pub solver: SolverConfig,
    /// ADMM parameters when `algo` is [`Algo::Admm`]; its solver field is ignored.
    pub admm: AdmmConfig,
}

impl SweepSpec {
    /// Spectral sweep over `lambda_grid` at the given `mu` values with one seed.
    pub fn new(graph: Graph, sensitive: SensitiveAttributes, truth: Option<Vec<usize>>) -> Self {
        let solver = SolverConfig::binary(0.0, 1.0);
        SweepSpec {
            lambda_grid: linspace(-1.0, 1.0, 101),
            mu_values: vec![-1.0, 1.0],
            algo: Algo::Svd,
            graph,
            sensitive,
            truth,
            seeds: vec![0],
            admm: AdmmConfig::new(solver.clone()),
            solver,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda_grid.is_empty() || self.mu_values.is_empty() || self.seeds.is_empty() {
            return Err(Error::InvalidParameter("lambda grid, mu values and seeds must be non-empty".into()));
        }
        if self.lambda_grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidParameter("lambda grid must be strictly increasing".into()));
        }
        if self.lambda_grid.iter().chain(&self.mu_values).any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("lambda and mu values must be finite".into()));
        }
        let n = self.graph.n();
        if self.sensitive.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: self.sensitive.n(),
            });
        }
        if let Some(t) = &self.truth {
            if t.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: t.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub mu: f64,
    pub lambda: f64,
    pub seed: u64,
    pub degenerate: bool,
    /// `NaN` when the sweep has no ground truth.
    pub temporal_ami: f64,
    pub specificity_ami: f64,
    pub temporal_ari: f64,
    pub specificity_ari: f64,
    pub temporal_v: f64,
    pub specificity_v: f64,
    pub balance: f64,
    pub assignment_hash: String,
    /// Solver failure for this point, if any.
    pub error: Option<String>,
}

impl SweepPoint {
    pub fn temporal(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Ami => self.temporal_ami,
            Metric::Ari => self.temporal_ari,
            Metric::V => self.temporal_v,
        }
    }

    pub fn specificity(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Ami => self.specificity_ami,
            Metric::Ari => self.specificity_ari,
            Metric::V => self.specificity_v,
        }
    }

    fn failed(mu: f64, lambda: f64, seed: u64, message: String) -> Self {
        SweepPoint {
            mu,
            lambda,
            seed,
            degenerate: true,
            temporal_ami: 0.0,
            specificity_ami: 0.0,
            temporal_ari: 0.0,
            specificity_ari: 0.0,
            temporal_v: 0.0,
            specificity_v: 0.0,
            balance: 0.0,
            assignment_hash: "error".into(),
            error: Some(message),
        }
    }
}

/// First 16 hex digits of SHA-256 over the labels as little-endian `u32`s.
pub fn assignment_hash(labels: &[usize]) -> String {
    let mut h = Sha256::new();
    for &l in labels {
        h.update((l as u32).to_le_bytes());
    }
    h.finalize().iter().take(8).fold(String::new(), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn solve_point(spec: &SweepSpec, mu: f64, lambda: f64, seed: u64) -> Result<ClusterAssignment> {
    let mut cfg = spec.solver.clone();
    cfg.mu = mu;
    cfg.lambdas = vec![lambda; spec.sensitive.penalty_count()];
    cfg.seed = seed;
    let penalized = build_penalized(&spec.graph, &spec.sensitive, &cfg)?;
    match spec.algo {
        Algo::Svd => fair_spectral(&penalized, &cfg),
        Algo::Admm => {
            let admm = AdmmConfig {
                solver: cfg,
                ..spec.admm.clone()
            };
            round_assignment(&admm_solve_penalized(&penalized, &admm)?.state)
        }
    }
}

fn score_point(spec: &SweepSpec, mu: f64, lambda: f64, seed: u64, pred: &ClusterAssignment) -> Result<SweepPoint> {
    let labels = pred.labels();
    let degenerate = pred.is_degenerate();
    let nan = Scores {
        ami: f64::NAN,
        ari: f64::NAN,
        v_measure: f64::NAN,
    };
    let temporal = match &spec.truth {
        Some(t) => Scores::compute(t, labels)?,
        None => nan,
    };
    let specificity = Scores::compute(&spec.sensitive.group_labels(), labels)?;
    Ok(SweepPoint {
        mu,
        lambda,
        seed,
        degenerate,
        temporal_ami: temporal.ami,
        specificity_ami: specificity.ami,
        temporal_ari: temporal.ari,
        specificity_ari: specificity.ari,
        temporal_v: temporal.v_measure,
        specificity_v: specificity.v_measure,
        balance: balance(pred, &spec.sensitive)?,
        assignment_hash: assignment_hash(labels),
        error: None,
    })
}

/// Solves and scores every `(mu, lambda, seed)` combination, sorted by mu,
/// then lambda, then seed.
/// Points run in parallel; a failing point becomes a degenerate row carrying
/// the error message instead of aborting the sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepPoint>> {
    run_sweep_with_progress(spec, |_, _| {})
}

/// Like [`run_sweep`]; `progress(done, total)` is called as points finish.
pub fn run_sweep_with_progress<F>(spec: &SweepSpec, progress: F) -> Result<Vec<SweepPoint>>
where
    F: Fn(usize, usize) + Sync,
{
    spec.validate()?;
    let mut mus = spec.mu_values.clone();
    mus.sort_by(f64::total_cmp);
    let mut seeds = spec.seeds.clone();
    seeds.sort_unstable();
    let mut grid = Vec::new();
    for &mu in &mus {
        for &lambda in &spec.lambda_grid {
            for &seed in &seeds {
                grid.push((mu, lambda, seed));
            }
        }
    }
    let total = grid.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let points = grid
        .par_iter()
        .map(|&(mu, lambda, seed)| {
            let point = solve_point(spec, mu, lambda, seed)
                .and_then(|pred| score_point(spec, mu, lambda, seed, &pred))
                .unwrap_or_else(|e| {
                    log::warn!("sweep point mu = {mu}, lambda = {lambda}, seed = {seed} failed: {e}");
                    SweepPoint::failed(mu, lambda, seed, e.to_string())
                });
            progress(done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1, total);
            point
        })
        .collect();
    Ok(points)
}

fn coords(p: &SweepPoint, metric: Metric) -> Option<(f64, f64)> {
    let (s, t) = (p.specificity(metric), p.temporal(metric));
    (s.is_finite() && t.is_finite()).then(|| (s.clamp(0.0, 1.0), t.clamp(0.0, 1.0)))
}

/// Points not dominated under (lower specificity, higher temporal score),
/// sorted by specificity ascending. Among points at identical coordinates
/// the one with smaller `|lambda|` is kept. Scores are clamped into
/// `[0, 1]`; points with missing scores are skipped.
pub fn pareto_front(points: &[SweepPoint], metric: Metric) -> Vec<SweepPoint> {
    let mut cand: Vec<(f64, f64, usize)> = points
        .iter()
        .enumerate()
        .filter_map(|(i, p)| coords(p, metric).map(|(s, t)| (s, t, i)))
        .collect();
    cand.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(b.1.total_cmp(&a.1))
            .then(points[a.2].lambda.abs().total_cmp(&points[b.2].lambda.abs()))
            .then(a.2.cmp(&b.2))
    });
    let mut front = Vec::new();
    let mut best_t = f64::NEG_INFINITY;
    for (_, t, i) in cand {
        if t > best_t {
            best_t = t;
            front.push(points[i].clone());
        }
    }
    front
}

/// Area under the Pareto frontier of `(1 - specificity, temporal)` after
/// dropping degenerate points; 0 when nothing is left.
pub fn tradeoff_auc(points: &[SweepPoint], metric: Metric) -> f64 {
    let live: Vec<SweepPoint> = points.iter().filter(|p| !p.degenerate).cloned().collect();
    let front = pareto_front(&live, metric);
    let mut xy: Vec<(f64, f64)> = front
        .iter()
        .filter_map(|p| coords(p, metric).map(|(s, t)| (1.0 - s, t)))
        .collect();
    if xy.is_empty() {
        return 0.0;
    }
    xy.reverse();
    let (x0, y0) = xy[0];
    let (xn, yn) = xy[xy.len() - 1];
    let mut area = x0 * y0 + (1.0 - xn) * yn;
    for w in xy.windows(2) {
        area += (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0;
    }
    area.clamp(0.0, 1.0)
}

pub const CSV_HEADER: &str = "mu,lambda,seed,degenerate,temporal_ami,specificity_ami,temporal_ari,specificity_ari,temporal_v,specificity_v,balance,assignment_hash";

fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format_g17(x)
    }
}

/// Sweep CSV with a trailing `# auc_ami=...,auc_ari=...,auc_v=...` line.
pub fn format_sweep_csv(points: &[SweepPoint]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for p in points {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            num(p.mu),
            num(p.lambda),
            p.seed,
            p.degenerate,
            num(p.temporal_ami),
            num(p.specificity_ami),
            num(p.temporal_ari),
            num(p.specificity_ari),
            num(p.temporal_v),
            num(p.specificity_v),
            num(p.balance),
            p.assignment_hash
        );
    }
    let _ = writeln!(
        out,
        "# auc_ami={},auc_ari={},auc_v={}",
        format_g17(tradeoff_auc(points, Metric::Ami)),
        format_g17(tradeoff_auc(points, Metric::Ari)),
        format_g17(tradeoff_auc(points, Metric::V))
    );
    out
}

pub fn parse_sweep_csv(text: &str, path: &Path) -> Result<Vec<SweepPoint>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(Error::parse(path, 1, "unexpected sweep CSV header")),
    }
    let mut points = Vec::new();
    for (idx, raw) in lines {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 12 {
            return Err(Error::parse(path, lineno, format!("expected 12 fields, found {}", f.len())));
        }
        let real = |i: usize| -> Result<f64> {
            if f[i].is_empty() {
                return Ok(f64::NAN);
            }
            f[i]
                .parse()
                .map_err(|_| Error::parse(path, lineno, format!("bad number {:?}", f[i])))
        };
        let seed = f[2]
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad seed {:?}", f[2])))?;
        let degenerate = f[3]
            .parse()
            .map_err(|_| Error::parse(path, lineno, format!("bad flag {:?}", f[3])))?;
        points.push(SweepPoint {
            mu: real(0)?,
            lambda: real(1)?,
            seed,
            degenerate,
            temporal_ami: real(4)?,
            specificity_ami: real(5)?,
            temporal_ari: real(6)?,
            specificity_ari: real(7)?,
            temporal_v: real(8)?,
            specificity_v: real(9)?,
            balance: real(10)?,
            assignment_hash: f[11].to_string(),
            error: None,
        });
    }
    Ok(points)
}

pub fn load_sweep_csv(path: impl AsRef<Path>) -> Result<Vec<SweepPoint>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_sweep_csv(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn pt(spec: f64, temp: f64, lambda: f64) -> SweepPoint {
        SweepPoint {
            mu: 1.0,
            lambda,
            seed: 0,
            degenerate: false,
            temporal_ami: temp,
            specificity_ami: spec,
            temporal_ari: temp,
            specificity_ari: spec,
            temporal_v: temp,
            specificity_v: spec,
            balance: 1.0,
            assignment_hash: String::new(),
            error: None,
        }
    }

    #[test]
    fn auc_hand_values() {
        assert_eq!(tradeoff_auc(&[pt(0.0, 1.0, 0.0)], Metric::Ami), 1.0);
        assert_eq!(tradeoff_auc(&[pt(1.0, 0.0, 0.0)], Metric::Ami), 0.0);
        let three = [pt(0.0, 0.5, 0.0), pt(0.5, 0.8, 0.1), pt(1.0, 1.0, 0.2)];
        assert!((tradeoff_auc(&three, Metric::Ami) - 0.775).abs() < 1e-12);
        assert_eq!(tradeoff_auc(&[], Metric::Ami), 0.0);
        let mut d = pt(0.0, 1.0, 0.0);
        d.degenerate = true;
        assert_eq!(tradeoff_auc(&[d], Metric::Ami), 0.0);
    }

    #[test]
    fn negative_scores_clamp() {
        assert_eq!(tradeoff_auc(&[pt(-0.2, -0.1, 0.0)], Metric::Ari), 0.0);
        assert_eq!(tradeoff_auc(&[pt(-0.2, 1.0, 0.0)], Metric::Ari), 1.0);
    }

    #[test]
    fn pareto_basics() {
        let a = pt(0.2, 0.9, 0.0);
        let dominated = pt(0.3, 0.8, 0.1);
        let b = pt(0.5, 0.95, 0.2);
        let front = pareto_front(&[dominated.clone(), b.clone(), a.clone()], Metric::Ami);
        assert_eq!(front, vec![a.clone(), b]);
        assert_eq!(pareto_front(&[a.clone()], Metric::Ami), vec![a]);

        let far = pt(0.2, 0.9, -0.5);
        let near = pt(0.2, 0.9, 0.1);
        assert_eq!(pareto_front(&[far, near.clone()], Metric::Ami), vec![near]);
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-1.0, 1.0, 101);
        assert_eq!((g[0], g[50], g[100]), (-1.0, 0.0, 1.0));
        assert_eq!(linspace(0.3, 0.3, 1), vec![0.3]);
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(assignment_hash(&[0, 1]), assignment_hash(&[0, 1]));
        assert_ne!(assignment_hash(&[0, 1]), assignment_hash(&[1, 0]));
        assert_eq!(assignment_hash(&[]).len(), 16);
    }

    #[test]
    fn csv_round_trip() {
        let mut p = pt(0.25, 0.5, -0.3);
        p.temporal_v = f64::NAN;
        let text = format_sweep_csv(&[p.clone()]);
        assert!(text.lines().last().unwrap().starts_with("# auc_ami="));
        let back = parse_sweep_csv(&text, Path::new("s.csv")).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].lambda, p.lambda);
        assert!(back[0].temporal_v.is_nan());
        assert_eq!(format_sweep_csv(&back), text);
    }
}
