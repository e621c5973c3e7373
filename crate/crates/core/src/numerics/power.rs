use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eigen::orientation;
use crate::error::{Error, Result};

/// Leading eigenpair of a symmetric PSD matrix by power iteration.
///
/// Stops once `||m v - lambda v|| < tol * ||m||_F`. The start vector is a
/// fixed pseudo-random vector so results are reproducible; the returned
/// vector uses the crate-wide sign convention.
pub fn power_iteration(m: &Array2<f64>, tol: f64, max_iter: usize) -> Result<(f64, Array1<f64>)> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: m.ncols(),
        });
    }
    let fro = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    if fro == 0.0 {
        let mut e = Array1::zeros(n);
        e[0] = 1.0;
        return Ok((0.0, e));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x0070_7733);
    let mut v: Array1<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
    v /= v.dot(&v).sqrt();

    for _ in 0..max_iter {
        let mv = m.dot(&v);
        let lambda = v.dot(&mv);
        let residual = (&mv - &(&v * lambda)).mapv(|x| x * x).sum().sqrt();
        if residual < tol * fro {
            let flip = orientation(v.as_slice().expect("contiguous"));
            return Ok((lambda, v * flip));
        }
        let norm = mv.dot(&mv).sqrt();
        if norm == 0.0 {
            return Ok((0.0, v));
        }
        v = mv / norm;
    }
    Err(Error::NoConvergence("power iteration", max_iter))
}
