//! Block-model parameter estimates and log-likelihood.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::graph::{ClusterAssignment, Graph};

const CLAMP: f64 = 1e-12;

fn check(g: &Graph, c: &ClusterAssignment) -> Result<()> {
    if g.n() != c.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            actual: c.n(),
        });
    }
    if !g.is_unweighted() {
        log::warn!("block-model estimate on a weighted graph; weights are used as fractional edges");
    }
    Ok(())
}

/// Mean edge weight between each pair of clusters (`i < j` within a
/// cluster); pairs of clusters with no node pairs get 0.
pub fn estimate_psi(g: &Graph, c: &ClusterAssignment) -> Result<Array2<f64>> {
    check(g, c)?;
    let k = c.k();
    let labels = c.labels();
    let mut sum = Array2::<f64>::zeros((k, k));
    let mut count = Array2::<f64>::zeros((k, k));
    for i in 0..g.n() {
        for j in i + 1..g.n() {
            let (a, b) = (labels[i].min(labels[j]), labels[i].max(labels[j]));
            sum[[a, b]] += g.weight(i, j);
            count[[a, b]] += 1.0;
        }
    }
    Ok(Array2::from_shape_fn((k, k), |(a, b)| {
        let (a, b) = (a.min(b), a.max(b));
        if count[[a, b]] > 0.0 {
            sum[[a, b]] / count[[a, b]]
        } else {
            0.0
        }
    }))
}

/// `sum_{i<j} A_ij ln M_ij + (1 - A_ij) ln(1 - M_ij)` with
/// `M_ij = psi[c_i][c_j]` clamped into `[1e-12, 1 - 1e-12]`.
pub fn sbm_loglik(g: &Graph, c: &ClusterAssignment, psi: &Array2<f64>) -> Result<f64> {
    check(g, c)?;
    let k = c.k();
    if psi.dim() != (k, k) {
        return Err(Error::DimensionMismatch {
            expected: k,
            actual: psi.nrows(),
        });
    }
    let labels = c.labels();
    let mut total = 0.0;
    for i in 0..g.n() {
        for j in i + 1..g.n() {
            let m = psi[[labels[i], labels[j]]].clamp(CLAMP, 1.0 - CLAMP);
            let a = g.weight(i, j);
            total += a * m.ln() + (1.0 - a) * (1.0 - m).ln();
        }
    }
    Ok(total)
}
