//! Graph, protected-attribute and cluster-assignment types.
//!
//! Everything here is immutable once constructed; constructors validate the
//! invariants the solvers rely on (symmetric weights in `[0, 1]` with a zero
//! diagonal, well-formed attribute encodings, labels below `k`).

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Undirected weighted graph stored as a dense symmetric adjacency matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Array2<f64>,
}

impl Graph {
    /// Validates and wraps an adjacency matrix.
    ///
    /// The matrix must be square, exactly symmetric, have a zero diagonal and
    /// carry weights in `[0, 1]`.
    pub fn new(adjacency: Array2<f64>) -> Result<Self> {
        let (rows, cols) = adjacency.dim();
        if rows == 0 {
            return Err(Error::InvalidGraph("graph must have at least one node".into()));
        }
        if rows != cols {
            return Err(Error::InvalidGraph(format!("adjacency is {rows}x{cols}, not square")));
        }
        for i in 0..rows {
            if adjacency[[i, i]] != 0.0 {
                return Err(Error::InvalidGraph(format!(
                    "non-zero diagonal entry at node {i}: {}",
                    adjacency[[i, i]]
                )));
            }
            for j in 0..rows {
                let w = adjacency[[i, j]];
                if !(0.0..=1.0).contains(&w) {
                    return Err(Error::InvalidGraph(format!(
                        "weight {w} at ({i}, {j}) outside [0, 1]"
                    )));
                }
                if w != adjacency[[j, i]] {
                    return Err(Error::InvalidGraph(format!(
                        "asymmetric weights at ({i}, {j}): {w} vs {}",
                        adjacency[[j, i]]
                    )));
                }
            }
        }
        Ok(Graph { adjacency })
    }

    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Result<Self> {
        Graph::new(Array2::zeros((n, n)))
    }

    pub fn n(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn adjacency(&self) -> &Array2<f64> {
        &self.adjacency
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency[[i, j]]
    }

    /// Number of unordered pairs with non-zero weight.
    pub fn edge_count(&self) -> usize {
        let n = self.n();
        (0..n)
            .map(|i| (i + 1..n).filter(|&j| self.adjacency[[i, j]] != 0.0).count())
            .sum()
    }

    /// True when every weight is exactly 0 or 1.
    pub fn is_unweighted(&self) -> bool {
        self.adjacency.iter().all(|&w| w == 0.0 || w == 1.0)
    }
}

/// How raw point coordinates are turned into edge weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PointAdjacency {
    /// `1 / d(x_i, x_j)`, rescaled by the largest such value into `(0, 1]`.
    InverseDistance,
    /// Weight 1 when `d(x_i, x_j) <= tau`, else 0.
    Threshold(f64),
}

/// Builds a similarity graph from points in `R^d` using Euclidean distances.
pub fn adjacency_from_points(points: &[Vec<f64>], mode: PointAdjacency) -> Result<Graph> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidParameter("need at least two points".into()));
    }
    let dim = points[0].len();
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: p.len(),
        });
    }
    if let PointAdjacency::Threshold(tau) = mode {
        if !(tau > 0.0) {
            return Err(Error::InvalidParameter(format!("threshold must be positive, got {tau}")));
        }
    }

    let dist = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    };

    let mut adjacency = Array2::zeros((n, n));
    match mode {
        PointAdjacency::Threshold(tau) => {
            for i in 0..n {
                for j in i + 1..n {
                    if dist(&points[i], &points[j]) <= tau {
                        adjacency[[i, j]] = 1.0;
                        adjacency[[j, i]] = 1.0;
                    }
                }
            }
        }
        PointAdjacency::InverseDistance => {
            let mut max_w: f64 = 0.0;
            for i in 0..n {
                for j in i + 1..n {
                    let d = dist(&points[i], &points[j]);
                    if d == 0.0 {
                        return Err(Error::InvalidParameter(format!(
                            "points {i} and {j} coincide; inverse-distance weight undefined"
                        )));
                    }
                    let w = 1.0 / d;
                    adjacency[[i, j]] = w;
                    adjacency[[j, i]] = w;
                    max_w = max_w.max(w);
                }
            }
            adjacency.mapv_inplace(|w| (w / max_w).min(1.0));
        }
    }
    Graph::new(adjacency)
}

/// Per-node protected-group membership.
#[derive(Debug, Clone, PartialEq)]
pub enum SensitiveAttributes {
    /// Signed binary attribute, every entry is `-1` or `+1`.
    Binary(Vec<i8>),
    /// One-hot membership in one of `levels` attribute-level combinations.
    /// Stored as the index of the single active indicator per node.
    MultiLevel { groups: Vec<usize>, levels: usize },
}

impl SensitiveAttributes {
    pub fn binary(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::InvalidAttributes("no nodes".into()));
        }
        if let Some((i, s)) = signs.iter().enumerate().find(|(_, &s)| s != 1 && s != -1) {
            return Err(Error::InvalidAttributes(format!("entry {i} is {s}, expected -1 or +1")));
        }
        Ok(SensitiveAttributes::Binary(signs))
    }

    /// Multi-level attributes from indicator vectors `s_1..s_m`; each node must
    /// have exactly one active indicator.
    pub fn from_indicators(indicators: &[Vec<u8>]) -> Result<Self> {
        let levels = indicators.len();
        if levels == 0 {
            return Err(Error::InvalidAttributes("no indicator vectors".into()));
        }
        let n = indicators[0].len();
        if n == 0 {
            return Err(Error::InvalidAttributes("no nodes".into()));
        }
        if let Some(v) = indicators.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: v.len(),
            });
        }
        let mut groups = Vec::with_capacity(n);
        for i in 0..n {
            let mut active = None;
            for (g, v) in indicators.iter().enumerate() {
                match v[i] {
                    0 => {}
                    1 if active.is_none() => active = Some(g),
                    1 => {
                        return Err(Error::InvalidAttributes(format!(
                            "node {i} has more than one active indicator"
                        )))
                    }
                    other => {
                        return Err(Error::InvalidAttributes(format!(
                            "indicator {g} has entry {other} at node {i}"
                        )))
                    }
                }
            }
            match active {
                Some(g) => groups.push(g),
                None => {
                    return Err(Error::InvalidAttributes(format!("node {i} has no active indicator")))
                }
            }
        }
        Ok(SensitiveAttributes::MultiLevel { groups, levels })
    }

    /// Multi-level attributes from per-node group indices in `0..levels`.
    pub fn from_groups(groups: Vec<usize>, levels: usize) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::InvalidAttributes("no nodes".into()));
        }
        if let Some((i, g)) = groups.iter().enumerate().find(|(_, &g)| g >= levels) {
            return Err(Error::InvalidAttributes(format!("node {i} has group {g} >= {levels}")));
        }
        Ok(SensitiveAttributes::MultiLevel { groups, levels })
    }

    pub fn n(&self) -> usize {
        match self {
            SensitiveAttributes::Binary(s) => s.len(),
            SensitiveAttributes::MultiLevel { groups, .. } => groups.len(),
        }
    }

    /// Number of penalty vectors (1 for binary, `levels` otherwise).
    pub fn penalty_count(&self) -> usize {
        match self {
            SensitiveAttributes::Binary(_) => 1,
            SensitiveAttributes::MultiLevel { levels, .. } => *levels,
        }
    }

    /// Group index per node: binary `-1 -> 0`, `+1 -> 1`.
    pub fn group_labels(&self) -> Vec<usize> {
        match self {
            SensitiveAttributes::Binary(s) => s.iter().map(|&v| usize::from(v > 0)).collect(),
            SensitiveAttributes::MultiLevel { groups, .. } => groups.clone(),
        }
    }

    /// Number of distinct group ids the encoding can express.
    pub fn group_count(&self) -> usize {
        match self {
            SensitiveAttributes::Binary(_) => 2,
            SensitiveAttributes::MultiLevel { levels, .. } => *levels,
        }
    }

    /// The vectors `s_g` entering the fairness penalty: the signed vector for
    /// binary attributes, one indicator per level otherwise.
    pub fn penalty_vectors(&self) -> Vec<Array1<f64>> {
        match self {
            SensitiveAttributes::Binary(s) => vec![s.iter().map(|&v| f64::from(v)).collect()],
            SensitiveAttributes::MultiLevel { groups, levels } => (0..*levels)
                .map(|g| groups.iter().map(|&h| if h == g { 1.0 } else { 0.0 }).collect())
                .collect(),
        }
    }
}

/// Hard cluster labels in `0..k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClusterAssignment {
    labels: Vec<usize>,
    k: usize,
}

impl ClusterAssignment {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidAssignment("k must be positive".into()));
        }
        if let Some((i, l)) = labels.iter().enumerate().find(|(_, &l)| l >= k) {
            return Err(Error::InvalidAssignment(format!("node {i} has label {l} >= k = {k}")));
        }
        Ok(ClusterAssignment { labels, k })
    }

    /// Uses `max label + 1` as the cluster count.
    pub fn from_labels(labels: Vec<usize>) -> Result<Self> {
        let k = labels.iter().copied().max().map_or(1, |m| m + 1);
        ClusterAssignment::new(labels, k)
    }

    /// Binary assignment from a sign vector: `-1 -> 0`, `+1 -> 1`.
    pub fn from_signs(signs: &[i8]) -> Self {
        ClusterAssignment {
            labels: signs.iter().map(|&s| usize::from(s > 0)).collect(),
            k: 2,
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<usize> {
        self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// `y in {-1, +1}^n` view of a two-cluster assignment.
    pub fn signs(&self) -> Result<Vec<i8>> {
        if self.k != 2 {
            return Err(Error::InvalidAssignment(format!(
                "sign view needs k = 2, assignment has k = {}",
                self.k
            )));
        }
        Ok(self.labels.iter().map(|&l| if l == 1 { 1 } else { -1 }).collect())
    }

    /// Same partition with labels renumbered in order of first appearance.
    pub fn canonical(&self) -> ClusterAssignment {
        let mut map = vec![usize::MAX; self.k];
        let mut next = 0;
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                if map[l] == usize::MAX {
                    map[l] = next;
                    next += 1;
                }
                map[l]
            })
            .collect();
        ClusterAssignment { labels, k: self.k }
    }

    /// All nodes share one label.
    pub fn is_degenerate(&self) -> bool {
        self.labels.windows(2).all(|w| w[0] == w[1])
    }

    /// Number of distinct labels actually used.
    pub fn used_clusters(&self) -> usize {
        let mut seen = vec![false; self.k];
        for &l in &self.labels {
            seen[l] = true;
        }
        seen.into_iter().filter(|&b| b).count()
    }
}
