//! Proximal operator of the nuclear norm restricted to the PSD cone.

use ndarray::Array2;

use super::eigen::sym_eig;
use crate::error::{Error, Result};

/// Soft-thresholds the eigenvalues of a symmetric matrix and clips them at
/// zero: `V diag(max(lambda_j - threshold, 0)) V^T`.
///
/// This is `argmin_{P >= 0} threshold * ||P||_* + 1/2 ||P - m||_F^2`.
/// The result is exactly symmetric.
pub fn svt_psd(m: &Array2<f64>, threshold: f64) -> Result<Array2<f64>> {
    if !(threshold >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "threshold must be non-negative, got {threshold}"
        )));
    }
    let eig = sym_eig(m)?;
    let shrunk = eig.eigenvalues.mapv(|l| (l - threshold).max(0.0));
    let p = eig.reassemble(&shrunk);
    Ok(symmetrize(&p))
}

/// `(m + m^T) / 2`, exactly symmetric.
pub fn symmetrize(m: &Array2<f64>) -> Array2<f64> {
    let n = m.nrows();
    let mut out = m.clone();
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (m[[i, j]] + m[[j, i]]);
            out[[i, j]] = avg;
            out[[j, i]] = avg;
        }
    }
    out
}
