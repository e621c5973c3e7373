//! Synthetic graphs from the stochastic block model.
//!
//! All generators draw from `ChaCha8Rng::seed_from_u64(seed)`, visiting pairs
//! `(i, j)` with `i < j` in row-major order, one draw per pair.

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{ClusterAssignment, Graph, SensitiveAttributes};

#[derive(Debug, Clone, PartialEq)]
pub struct SbmParams {
    pub sizes: Vec<usize>,
    /// `k x k` symmetric matrix of connection probabilities.
    pub psi: Array2<f64>,
    pub seed: u64,
}

impl SbmParams {
    /// Two blocks with probability `p_in` inside a block and `p_out` across.
    pub fn planted(sizes: (usize, usize), p_in: f64, p_out: f64, seed: u64) -> Self {
        SbmParams {
            sizes: vec![sizes.0, sizes.1],
            psi: ndarray::array![[p_in, p_out], [p_out, p_in]],
            seed,
        }
    }

    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        if k == 0 || self.sizes.contains(&0) {
            return Err(Error::InvalidParameter("community sizes must be positive".into()));
        }
        if self.psi.dim() != (k, k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                actual: self.psi.nrows(),
            });
        }
        for a in 0..k {
            for b in 0..k {
                let p = self.psi[[a, b]];
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::InvalidParameter(format!("psi[{a}][{b}] = {p} outside [0, 1]")));
                }
                if p != self.psi[[b, a]] {
                    return Err(Error::InvalidParameter("psi must be symmetric".into()));
                }
            }
        }
        Ok(())
    }
}

fn block_labels(sizes: &[usize]) -> Vec<usize> {
    sizes
        .iter()
        .enumerate()
        .flat_map(|(c, &s)| std::iter::repeat_n(c, s))
        .collect()
}

/// Unweighted graph with edge `(i, j)` present with probability `psi[a][b]`
/// for communities `a`, `b`, plus the ground-truth assignment.
pub fn generate_sbm(params: &SbmParams) -> Result<(Graph, ClusterAssignment)> {
    params.validate()?;
    let truth = block_labels(&params.sizes);
    let n = truth.len();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut a = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            let p = params.psi[[truth[i], truth[j]]];
            if rng.random::<f64>() < p {
                a[[i, j]] = 1.0;
                a[[j, i]] = 1.0;
            }
        }
    }
    let k = params.k();
    Ok((Graph::new(a)?, ClusterAssignment::new(truth, k)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedTwoClusterParams {
    pub sizes: (usize, usize),
    pub within_range: (f64, f64),
    pub between_range: (f64, f64),
    pub seed: u64,
    /// Treat the drawn value as an edge probability and keep an unweighted
    /// edge with that probability, instead of using it as the weight.
    pub bernoulli: bool,
}

impl WeightedTwoClusterParams {
    pub fn new(sizes: (usize, usize), within: (f64, f64), between: (f64, f64), seed: u64) -> Self {
        WeightedTwoClusterParams {
            sizes,
            within_range: within,
            between_range: between,
            seed,
            bernoulli: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.sizes.0 == 0 || self.sizes.1 == 0 {
            return Err(Error::InvalidParameter("cluster sizes must be positive".into()));
        }
        for (name, (lo, hi)) in [("within", self.within_range), ("between", self.between_range)] {
            if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} range [{lo}, {hi}] is not a sub-interval of [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

fn uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        // still consume a draw so the stream layout does not depend on the ranges
        let _ = rng.random::<f64>();
        lo
    } else {
        lo + (hi - lo) * rng.random::<f64>()
    }
}

/// Complete weighted graph on two clusters; within-cluster weights are
/// uniform on `within_range`, between-cluster weights on `between_range`.
pub fn generate_weighted_two_cluster(params: &WeightedTwoClusterParams) -> Result<(Graph, ClusterAssignment)> {
    params.validate()?;
    let truth = block_labels(&[params.sizes.0, params.sizes.1]);
    let n = truth.len();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut a = Array2::zeros((n, n));
    for i in 0..n {
        for j in i + 1..n {
            let range = if truth[i] == truth[j] {
                params.within_range
            } else {
                params.between_range
            };
            let mut w = uniform(&mut rng, range);
            if params.bernoulli {
                w = if rng.random::<f64>() < w { 1.0 } else { 0.0 };
            }
            a[[i, j]] = w;
            a[[j, i]] = w;
        }
    }
    Ok((Graph::new(a)?, ClusterAssignment::new(truth, 2)?))
}

/// Independent binary attributes, `+1` with probability `p`.
pub fn sample_sensitive(n: usize, p: f64, seed: u64) -> Result<SensitiveAttributes> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p = {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signs = (0..n).map(|_| if rng.random::<f64>() < p { 1 } else { -1 }).collect();
    SensitiveAttributes::binary(signs)
}

/// Binary attributes tied to a two-community ground truth: with probability
/// `agreement` node `i` copies its community (`0 -> -1`, `1 -> +1`),
/// otherwise it draws `+1` with probability `p`. `agreement = 0` is
/// [`sample_sensitive`].
pub fn sample_sensitive_correlated(
    truth: &ClusterAssignment,
    p: f64,
    agreement: f64,
    seed: u64,
) -> Result<SensitiveAttributes> {
    if !(0.0..=1.0).contains(&agreement) {
        return Err(Error::InvalidParameter(format!("agreement = {agreement} outside [0, 1]")));
    }
    if truth.k() != 2 {
        return Err(Error::InvalidParameter("correlated attributes need two communities".into()));
    }
    let base = sample_sensitive(truth.n(), p, seed)?;
    if agreement == 0.0 {
        return Ok(base);
    }
    let SensitiveAttributes::Binary(mut signs) = base else {
        unreachable!("sample_sensitive is binary")
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    for (s, &l) in signs.iter_mut().zip(truth.labels()) {
        if rng.random::<f64>() < agreement {
            *s = if l == 1 { 1 } else { -1 };
        }
    }
    SensitiveAttributes::binary(signs)
}
