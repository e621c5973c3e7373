//! Clustering scores, group balance and block-model diagnostics.

mod likelihood;
mod scores;

pub use likelihood::{estimate_psi, sbm_loglik};
pub use scores::{
    ami, ari, expected_mutual_information, homogeneity_completeness_v, v_measure, ContingencyTable, VMeasure,
};

use crate::error::{Error, Result};
use crate::graph::{ClusterAssignment, SensitiveAttributes};
use crate::spectral::{objective_value, PenalizedMatrix};

/// Smallest within-cluster ratio between the counts of any two protected
/// groups. Only groups present somewhere in `s` count; with fewer than two
/// such groups the value is 1.
pub fn balance(c: &ClusterAssignment, s: &SensitiveAttributes) -> Result<f64> {
    if c.n() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: c.n(),
            actual: s.n(),
        });
    }
    let groups = s.group_labels();
    let g = s.group_count();
    let mut counts = vec![vec![0u64; g]; c.k()];
    let mut present = vec![false; g];
    for (&l, &h) in c.labels().iter().zip(&groups) {
        counts[l][h] += 1;
        present[h] = true;
    }
    if present.iter().filter(|&&p| p).count() < 2 {
        return Ok(1.0);
    }
    let mut best = 1.0f64;
    for row in counts.iter().filter(|row| row.iter().any(|&x| x > 0)) {
        let live = row.iter().zip(&present).filter(|(_, &p)| p).map(|(&x, _)| x);
        let (lo, hi) = live.fold((u64::MAX, 0), |(lo, hi), x| (lo.min(x), hi.max(x)));
        best = best.min(lo as f64 / hi as f64);
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scores {
    pub ami: f64,
    pub ari: f64,
    pub v_measure: f64,
}

impl Scores {
    pub fn compute(truth: &[usize], pred: &[usize]) -> Result<Self> {
        Ok(Scores {
            ami: ami(truth, pred)?,
            ari: ari(truth, pred)?,
            v_measure: v_measure(truth, pred)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    /// Against ground truth, when known.
    pub temporal: Option<Scores>,
    /// Against the protected-group labels.
    pub specificity: Scores,
    pub balance: f64,
    /// `y^T Ã y`, two-cluster assignments only.
    pub objective: Option<f64>,
}

pub fn score_report(
    pred: &ClusterAssignment,
    truth: Option<&[usize]>,
    s: &SensitiveAttributes,
    penalized: Option<&PenalizedMatrix>,
) -> Result<ScoreReport> {
    let labels = pred.labels();
    let temporal = truth.map(|t| Scores::compute(t, labels)).transpose()?;
    let specificity = Scores::compute(&s.group_labels(), labels)?;
    let objective = match penalized {
        Some(m) if pred.k() == 2 => Some(objective_value(m, pred)?),
        _ => None,
    };
    Ok(ScoreReport {
        temporal,
        specificity,
        balance: balance(pred, s)?,
        objective,
    })
}
