//! Dense symmetric eigendecomposition.
//!
//! Householder reduction to tridiagonal form followed by the implicit QL
//! iteration (the EISPACK `tred2`/`tql2` pair). The working matrix is kept
//! transposed so that both the reduction's column sweeps and the plane
//! rotations in the QL step walk contiguous memory.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

/// Eigenpairs of a symmetric matrix, eigenvalues in non-increasing order.
/// Column `j` of `eigenvectors` belongs to `eigenvalues[j]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub eigenvalues: Array1<f64>,
    pub eigenvectors: Array2<f64>,
}

impl SymmetricEigen {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(values) V^T` for a replacement spectrum.
    pub fn reassemble(&self, values: &Array1<f64>) -> Array2<f64> {
        let scaled = &self.eigenvectors * &values.view().insert_axis(ndarray::Axis(0));
        scaled.dot(&self.eigenvectors.t())
    }
}

const MAX_QL_SWEEPS: usize = 60;

/// Largest `|m_ij - m_ji|` relative to the largest entry magnitude.
pub fn relative_asymmetry(m: &Array2<f64>) -> f64 {
    let n = m.nrows();
    let scale = m.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((m[[i, j]] - m[[j, i]]).abs());
        }
    }
    worst / scale
}

pub(crate) fn check_symmetric(m: &Array2<f64>) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            actual: m.ncols(),
        });
    }
    let asym = relative_asymmetry(m);
    if asym > 1e-10 {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Eigenvalues come back sorted descending by algebraic value. Each
/// eigenvector is oriented so its largest-magnitude entry (lowest index on
/// ties) is positive.
pub fn sym_eig(m: &Array2<f64>) -> Result<SymmetricEigen> {
    check_symmetric(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(SymmetricEigen {
            eigenvalues: Array1::zeros(0),
            eigenvectors: Array2::zeros((0, 0)),
        });
    }

    // `w[c * n + r]` holds V[r][c]; starts as the (symmetrized) input.
    let mut w = vec![0.0; n * n];
    for r in 0..n {
        for c in 0..n {
            w[c * n + r] = 0.5 * (m[[r, c]] + m[[c, r]]);
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut w, &mut d, &mut e);
    tql2(n, &mut w, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].total_cmp(&d[a]).then(a.cmp(&b)));

    let mut eigenvalues = Array1::zeros(n);
    let mut eigenvectors = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues[dst] = d[src];
        let col = &w[src * n..(src + 1) * n];
        let flip = orientation(col);
        for r in 0..n {
            eigenvectors[[r, dst]] = flip * col[r];
        }
    }
    Ok(SymmetricEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// `+1` or `-1` so that the largest-magnitude entry becomes positive.
pub(crate) fn orientation(v: &[f64]) -> f64 {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[best].abs() {
            best = i;
        }
    }
    if v.get(best).copied().unwrap_or(0.0) < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn tred2(n: usize, w: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    // V[r][c] == w[c * n + r]
    macro_rules! v {
        ($r:expr, $c:expr) => {
            w[($c) * n + ($r)]
        };
    }

    for j in 0..n {
        d[j] = v!(n - 1, j);
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v!(i - 1, j);
                v!(i, j) = 0.0;
                v!(j, i) = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                v!(j, i) = f;
                g = e[j] + v!(j, j) * f;
                let col = &w[j * n..j * n + i];
                for k in j + 1..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = &mut w[j * n..j * n + i];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = v!(i - 1, j);
                v!(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate transformations.
    for i in 0..n - 1 {
        v!(n - 1, i) = v!(i, i);
        v!(i, i) = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v!(k, i + 1) / h;
            }
            for j in 0..=i {
                let (head, tail) = w.split_at_mut((i + 1) * n);
                let next = &tail[..=i];
                let col = &mut head[j * n..j * n + i + 1];
                let g: f64 = next.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
                for k in 0..=i {
                    col[k] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v!(k, i + 1) = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v!(n - 1, j);
        v!(n - 1, j) = 0.0;
    }
    v!(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

fn tql2(n: usize, w: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        // e[n - 1] is zero, so m < n always
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_QL_SWEEPS {
                    return Err(Error::NoConvergence("symmetric QL iteration", MAX_QL_SWEEPS));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    // rotate columns i and i+1 of V (rows of w)
                    let (lo, hi) = w.split_at_mut((i + 1) * n);
                    let vi = &mut lo[i * n..];
                    let vi1 = &mut hi[..n];
                    for k in 0..n {
                        let hk = vi1[k];
                        vi1[k] = s * vi[k] + c * hk;
                        vi[k] = c * vi[k] - s * hk;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, seed: u64) -> Array2<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Array2::zeros((n, n));
        for i in 0..n {
            for j in i..n {
                let x: f64 = rng.random_range(-1.0..1.0);
                m[[i, j]] = x;
                m[[j, i]] = x;
            }
        }
        m
    }

    #[test]
    fn identity() {
        let e = sym_eig(&Array2::eye(3)).unwrap();
        assert_eq!(e.eigenvalues.to_vec(), vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn two_by_two_swap() {
        let e = sym_eig(&array![[0.0, 1.0], [1.0, 0.0]]).unwrap();
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] + 1.0).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = e.eigenvectors.column(0);
        let v1 = e.eigenvectors.column(1);
        assert!((v0[0] - h).abs() < 1e-15 && (v0[1] - h).abs() < 1e-15);
        // lowest index wins the magnitude tie, so the first entry is positive
        assert!((v1[0] - h).abs() < 1e-15 && (v1[1] + h).abs() < 1e-15);
    }

    #[test]
    fn reconstructs_random_matrices() {
        for (n, seed) in [(1, 1), (2, 2), (8, 3), (37, 4), (120, 5)] {
            let m = random_symmetric(n, seed);
            let e = sym_eig(&m).unwrap();
            let rec = e.reassemble(&e.eigenvalues);
            let err = (&rec - &m).mapv(|x| x * x).sum().sqrt();
            let norm = m.mapv(|x| x * x).sum().sqrt();
            assert!(err < 1e-12 * norm.max(1.0), "n={n} err={err}");
            let gram = e.eigenvectors.t().dot(&e.eigenvectors);
            let orth = (&gram - &Array2::<f64>::eye(n)).iter().fold(0.0f64, |a, x| a.max(x.abs()));
            assert!(orth < 1e-12, "n={n} orth={orth}");
            for w in e.eigenvalues.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn zero_and_diagonal_matrices() {
        let e = sym_eig(&Array2::zeros((4, 4))).unwrap();
        assert!(e.eigenvalues.iter().all(|&x| x == 0.0));
        let e = sym_eig(&Array2::from_diag(&array![3.0, -2.0, 1.0])).unwrap();
        assert_eq!(e.eigenvalues.to_vec(), vec![3.0, 1.0, -2.0]);
    }

    #[test]
    fn rejects_asymmetric() {
        assert!(matches!(
            sym_eig(&array![[0.0, 1.0], [0.0, 0.0]]),
            Err(Error::NotSymmetric(_))
        ));
    }
}
