//! Fair spectral clustering on the penalized matrix
//! `Ã = A - mu 11^T - sum_g lambda_g s_g s_g^T`.
//!
//! Two clusters: take the eigenvector paired with the second eigenvalue of
//! `Ã` (singular-value order by default) and split nodes by sign. More than
//! two clusters: either k-means on the bottom of the spectrum of the
//! Laplacian `D - Ã`, or repeated bisection of the cluster with the most
//! remaining structure.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::graph::{ClusterAssignment, Graph, SensitiveAttributes};
use crate::numerics::{build_laplacian, kmeans, leading_eigenpairs, EigenOrdering, LaplacianMode};

/// Strategy for `k > 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MultiKStrategy {
    #[default]
    LaplacianKMeans,
    RecursiveBisection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// One weight for binary attributes, one per level for multi-level ones.
    pub lambdas: Vec<f64>,
    pub mu: f64,
    pub k: usize,
    pub multi_k_strategy: MultiKStrategy,
    /// Which eigenvector counts as "second" in the two-way split.
    pub ordering: EigenOrdering,
    /// Center multi-level indicators (`s_g - |V_g|/n 1`) before penalizing.
    pub center_indicators: bool,
    /// Scale embedding rows to unit length before k-means.
    pub normalize_rows: bool,
    pub kmeans_restarts: usize,
    pub seed: u64,
}

impl SolverConfig {
    pub fn binary(lambda: f64, mu: f64) -> Self {
        SolverConfig {
            lambdas: vec![lambda],
            mu,
            k: 2,
            multi_k_strategy: MultiKStrategy::default(),
            ordering: EigenOrdering::default(),
            center_indicators: false,
            normalize_rows: false,
            kmeans_restarts: 10,
            seed: 0,
        }
    }

    pub fn with_k(mut self, k: usize, strategy: MultiKStrategy) -> Self {
        self.k = k;
        self.multi_k_strategy = strategy;
        self
    }

    pub fn with_lambdas(mut self, lambdas: Vec<f64>) -> Self {
        self.lambdas = lambdas;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidParameter(format!("k must be at least 2, got {}", self.k)));
        }
        if self.lambdas.is_empty() {
            return Err(Error::InvalidParameter("at least one lambda is required".into()));
        }
        if !self.mu.is_finite() || self.lambdas.iter().any(|l| !l.is_finite()) {
            return Err(Error::InvalidParameter("lambda and mu must be finite".into()));
        }
        Ok(())
    }
}

/// The symmetric matrix both solvers work on.
#[derive(Debug, Clone, PartialEq)]
pub struct PenalizedMatrix {
    pub matrix: Array2<f64>,
}

impl PenalizedMatrix {
    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    /// Principal submatrix on `nodes`.
    pub fn restrict(&self, nodes: &[usize]) -> PenalizedMatrix {
        let m = Array2::from_shape_fn((nodes.len(), nodes.len()), |(a, b)| {
            self.matrix[[nodes[a], nodes[b]]]
        });
        PenalizedMatrix { matrix: m }
    }
}

/// `Ã = A - mu 11^T - sum_g lambda_g s_g s_g^T`.
pub fn build_penalized(g: &Graph, s: &SensitiveAttributes, cfg: &SolverConfig) -> Result<PenalizedMatrix> {
    cfg.validate()?;
    let n = g.n();
    if s.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: s.n(),
        });
    }
    if cfg.lambdas.len() != s.penalty_count() {
        return Err(Error::InvalidParameter(format!(
            "{} lambda value(s) given for {} penalty vector(s)",
            cfg.lambdas.len(),
            s.penalty_count()
        )));
    }
    let mut vectors = s.penalty_vectors();
    if cfg.center_indicators && matches!(s, SensitiveAttributes::MultiLevel { .. }) {
        for v in &mut vectors {
            let mean = v.sum() / n as f64;
            v.mapv_inplace(|x| x - mean);
        }
    }

    let mut m = g.adjacency().mapv(|a| a - cfg.mu);
    for (v, &lambda) in vectors.iter().zip(&cfg.lambdas) {
        if lambda == 0.0 {
            continue;
        }
        for i in 0..n {
            let li = lambda * v[i];
            if li == 0.0 {
                continue;
            }
            let mut row = m.row_mut(i);
            for (j, x) in row.iter_mut().enumerate() {
                *x -= li * v[j];
            }
        }
    }
    Ok(PenalizedMatrix { matrix: m })
}

fn sign_labels(v: &Array1<f64>) -> Vec<usize> {
    // sign(0) counts as +1
    v.iter().map(|&x| usize::from(x >= 0.0)).collect()
}

/// Second eigenpair of `m` under `ordering`.
fn second_eigenpair(m: &Array2<f64>, ordering: EigenOrdering) -> Result<(f64, Array1<f64>)> {
    let pairs = leading_eigenpairs(m, 2, ordering)?;
    Ok((pairs.values[1], pairs.vectors.column(1).to_owned()))
}

/// Two-way split by the sign of the second eigenvector (singular-value order).
pub fn fair_spectral_binary(penalized: &PenalizedMatrix) -> Result<ClusterAssignment> {
    fair_spectral_binary_with(penalized, EigenOrdering::default())
}

pub fn fair_spectral_binary_with(
    penalized: &PenalizedMatrix,
    ordering: EigenOrdering,
) -> Result<ClusterAssignment> {
    let n = penalized.n();
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two nodes".into()));
    }
    let (_, v) = second_eigenpair(&penalized.matrix, ordering)?;
    ClusterAssignment::new(sign_labels(&v), 2)
}

/// k-way clustering by k-means on the eigenvectors of the `k` smallest
/// eigenvalues of `L = D - Ã`, with `D` the row sums of `Ã`.
pub fn fair_spectral_k(penalized: &PenalizedMatrix, cfg: &SolverConfig) -> Result<ClusterAssignment> {
    let n = penalized.n();
    let k = cfg.k;
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds node count {n}")));
    }
    let laplacian = build_laplacian(&penalized.matrix, LaplacianMode::Degree)?;
    let pairs = leading_eigenpairs(&laplacian.matrix, k, EigenOrdering::SmallestAlgebraic)?;
    let mut embedding = pairs.vectors;
    if cfg.normalize_rows {
        for mut row in embedding.rows_mut() {
            let norm = row.dot(&row).sqrt();
            if norm > 0.0 {
                row /= norm;
            }
        }
    }
    kmeans(&embedding, k, cfg.kmeans_restarts, cfg.seed)
}

/// Repeated two-way splits until `k` clusters exist.
///
/// Each round bisects the cluster whose principal submatrix of `Ã` has the
/// largest second eigenvalue (ties: larger cluster, then lower minimum node
/// id). Singletons are never split. When the sign split of a cluster puts
/// every node on one side, the cluster is cut at the median of its second
/// eigenvector instead.
pub fn recursive_bisection(penalized: &PenalizedMatrix, cfg: &SolverConfig) -> Result<ClusterAssignment> {
    let n = penalized.n();
    let k = cfg.k;
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds node count {n}")));
    }
    if k == 2 {
        return fair_spectral_binary_with(penalized, cfg.ordering);
    }

    struct Candidate {
        nodes: Vec<usize>,
        score: f64,
        split: Option<(Vec<usize>, Vec<usize>)>,
    }

    let analyse = |nodes: Vec<usize>| -> Result<Candidate> {
        if nodes.len() < 2 {
            return Ok(Candidate {
                nodes,
                score: f64::NEG_INFINITY,
                split: None,
            });
        }
        let sub = penalized.restrict(&nodes);
        let (value, v) = second_eigenpair(&sub.matrix, cfg.ordering)?;
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (local, &node) in nodes.iter().enumerate() {
            if v[local] >= 0.0 {
                pos.push(node);
            } else {
                neg.push(node);
            }
        }
        if pos.is_empty() || neg.is_empty() {
            let mut order: Vec<usize> = (0..nodes.len()).collect();
            order.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));
            let half = nodes.len() / 2;
            neg = order[..half].iter().map(|&l| nodes[l]).collect();
            pos = order[half..].iter().map(|&l| nodes[l]).collect();
            neg.sort_unstable();
            pos.sort_unstable();
        }
        Ok(Candidate {
            nodes,
            score: value,
            split: Some((neg, pos)),
        })
    };

    let mut clusters = vec![analyse((0..n).collect())?];
    // the first round always splits the whole node set
    let mut first = true;
    while clusters.len() < k {
        let pick = if first {
            0
        } else {
            clusters
                .iter()
                .enumerate()
                .filter(|(_, c)| c.split.is_some())
                .max_by(|(_, a), (_, b)| {
                    a.score
                        .total_cmp(&b.score)
                        .then(a.nodes.len().cmp(&b.nodes.len()))
                        .then(b.nodes[0].cmp(&a.nodes[0]))
                })
                .map(|(i, _)| i)
                .ok_or_else(|| Error::InvalidParameter(format!("cannot reach k = {k} clusters")))?
        };
        first = false;
        let target = clusters.remove(pick);
        let (left, right) = target.split.expect("splittable cluster");
        clusters.insert(pick, analyse(right)?);
        clusters.insert(pick, analyse(left)?);
    }

    // label clusters by their smallest node id
    clusters.sort_by_key(|c| c.nodes[0]);
    let mut labels = vec![0; n];
    for (id, c) in clusters.iter().enumerate() {
        for &node in &c.nodes {
            labels[node] = id;
        }
    }
    ClusterAssignment::new(labels, k)
}

/// Dispatches on `cfg.k` and `cfg.multi_k_strategy`.
pub fn fair_spectral(penalized: &PenalizedMatrix, cfg: &SolverConfig) -> Result<ClusterAssignment> {
    cfg.validate()?;
    match (cfg.k, cfg.multi_k_strategy) {
        (2, _) => fair_spectral_binary_with(penalized, cfg.ordering),
        (_, MultiKStrategy::LaplacianKMeans) => fair_spectral_k(penalized, cfg),
        (_, MultiKStrategy::RecursiveBisection) => recursive_bisection(penalized, cfg),
    }
}

/// `y^T Ã y` for the `±1` view of a two-cluster assignment.
pub fn objective_value(penalized: &PenalizedMatrix, c: &ClusterAssignment) -> Result<f64> {
    let y = c.signs()?;
    if y.len() != penalized.n() {
        return Err(Error::DimensionMismatch {
            expected: penalized.n(),
            actual: y.len(),
        });
    }
    Ok(sign_quadratic(&penalized.matrix, &y))
}

pub(crate) fn sign_quadratic(m: &Array2<f64>, y: &[i8]) -> f64 {
    let mut total = 0.0;
    for (i, row) in m.rows().into_iter().enumerate() {
        let yi = f64::from(y[i]);
        let inner: f64 = row.iter().zip(y).map(|(a, &yj)| a * f64::from(yj)).sum();
        total += yi * inner;
    }
    total
}
