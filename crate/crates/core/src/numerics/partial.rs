//! A few extreme eigenpairs of a symmetric matrix.
//!
//! Small matrices go through the dense solver. Larger ones use Lanczos with
//! full reorthogonalization, which only needs matrix-vector products and
//! converges in a few dozen steps when the wanted eigenvalues are separated
//! from the bulk (the planted-partition regime). If Lanczos stalls the dense
//! solver is used instead.

use ndarray::{Array1, Array2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::eigen::{check_symmetric, orientation, sym_eig, SymmetricEigen};
use crate::error::Result;

/// Which end of the spectrum is wanted, and in what order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenOrdering {
    /// Descending `|lambda|`, equal magnitudes broken by larger algebraic
    /// value. This is the singular-value ordering of a symmetric matrix.
    #[default]
    LargestMagnitude,
    /// Descending algebraic value.
    LargestAlgebraic,
    /// Ascending algebraic value.
    SmallestAlgebraic,
}

/// Selected eigenpairs in the requested order; column `j` of `vectors`
/// belongs to `values[j]`.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Array2<f64>,
}

const DENSE_CUTOFF: usize = 160;
const RELATIVE_TIE: f64 = 1e-10;
const RESIDUAL_TOL: f64 = 1e-11;

/// Indices of `values` in the order given by `ordering`.
pub fn spectrum_order(values: &[f64], ordering: EigenOrdering) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    match ordering {
        EigenOrdering::LargestAlgebraic => {
            idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
            idx
        }
        EigenOrdering::SmallestAlgebraic => {
            idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
            idx
        }
        EigenOrdering::LargestMagnitude => {
            let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let tie = RELATIVE_TIE * scale;
            let mut out = Vec::with_capacity(values.len());
            while !idx.is_empty() {
                let top = idx.iter().fold(0.0f64, |m, &i| m.max(values[i].abs()));
                // among near-equal magnitudes take the algebraically largest
                let pos = idx
                    .iter()
                    .enumerate()
                    .filter(|(_, &i)| values[i].abs() >= top - tie)
                    .max_by(|(_, &a), (_, &b)| values[a].total_cmp(&values[b]).then(b.cmp(&a)))
                    .map(|(p, _)| p)
                    .expect("non-empty candidate set");
                out.push(idx.remove(pos));
            }
            out
        }
    }
}

/// Picks `count` eigenpairs from a full decomposition.
pub fn select_eigenpairs(eig: &SymmetricEigen, count: usize, ordering: EigenOrdering) -> EigenPairs {
    let values = eig.eigenvalues.to_vec();
    let order = spectrum_order(&values, ordering);
    let n = eig.n();
    let count = count.min(n);
    let mut vectors = Array2::zeros((n, count));
    let mut picked = Vec::with_capacity(count);
    for (dst, &src) in order.iter().take(count).enumerate() {
        picked.push(values[src]);
        vectors.column_mut(dst).assign(&eig.eigenvectors.column(src));
    }
    EigenPairs {
        values: picked,
        vectors,
    }
}

/// The first `count` eigenpairs of `m` under `ordering`. Eigenvectors follow
/// the same sign convention as [`sym_eig`].
pub fn leading_eigenpairs(m: &Array2<f64>, count: usize, ordering: EigenOrdering) -> Result<EigenPairs> {
    check_symmetric(m)?;
    let n = m.nrows();
    if n <= DENSE_CUTOFF || count * 4 >= n {
        return Ok(select_eigenpairs(&sym_eig(m)?, count, ordering));
    }
    match lanczos(m, count, ordering) {
        Some(pairs) => Ok(pairs),
        None => {
            log::debug!("lanczos did not settle for n = {n}; using dense eigensolver");
            Ok(select_eigenpairs(&sym_eig(m)?, count, ordering))
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn orthogonalize(w: &mut [f64], basis: &[Array1<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let q = q.as_slice().expect("contiguous");
            let c = dot(q, w);
            axpy(-c, q, w);
        }
    }
}

fn random_unit(n: usize, rng: &mut ChaCha8Rng, basis: &[Array1<f64>]) -> Option<Array1<f64>> {
    for _ in 0..4 {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        orthogonalize(&mut v, basis);
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-8 {
            return Some(Array1::from(v) / norm);
        }
    }
    None
}

fn lanczos(m: &Array2<f64>, count: usize, ordering: EigenOrdering) -> Option<EigenPairs> {
    let n = m.nrows();
    let max_dim = n.min((4 * count + 80).max(160));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_1a2c);
    let mut basis: Vec<Array1<f64>> = Vec::with_capacity(max_dim);
    let mut alpha: Vec<f64> = Vec::with_capacity(max_dim);
    let mut beta: Vec<f64> = Vec::with_capacity(max_dim);
    basis.push(random_unit(n, &mut rng, &[])?);

    let mut scale: f64 = 0.0;
    loop {
        let j = basis.len() - 1;
        let mut w = m.dot(&basis[j]).to_vec();
        let a = dot(basis[j].as_slice()?, &w);
        alpha.push(a);
        orthogonalize(&mut w, &basis);
        let b = dot(&w, &w).sqrt();
        scale = scale.max(a.abs() + b);
        let dim = j + 1;

        let complete = dim == n;
        let check = complete || dim == max_dim || (dim >= count + 20 && dim % 10 == 0);
        if check {
            let mut t = Array2::zeros((dim, dim));
            for i in 0..dim {
                t[[i, i]] = alpha[i];
                if i + 1 < dim {
                    t[[i, i + 1]] = beta[i];
                    t[[i + 1, i]] = beta[i];
                }
            }
            let ritz = sym_eig(&t).ok()?;
            let values = ritz.eigenvalues.to_vec();
            let order = spectrum_order(&values, ordering);
            let theta_scale = values.iter().fold(scale, |acc, v| acc.max(v.abs()));
            let wanted = &order[..count.min(dim)];
            let converged = complete
                || wanted
                    .iter()
                    .all(|&i| (b * ritz.eigenvectors[[dim - 1, i]]).abs() <= RESIDUAL_TOL * theta_scale);
            if converged && wanted.len() == count {
                let mut vectors = Array2::zeros((n, count));
                let mut picked = Vec::with_capacity(count);
                for (dst, &src) in wanted.iter().enumerate() {
                    let mut v = vec![0.0; n];
                    for (k, q) in basis.iter().enumerate() {
                        axpy(ritz.eigenvectors[[k, src]], q.as_slice()?, &mut v);
                    }
                    let norm = dot(&v, &v).sqrt();
                    let flip = orientation(&v) / norm;
                    for (r, x) in v.iter().enumerate() {
                        vectors[[r, dst]] = flip * x;
                    }
                    picked.push(values[src]);
                }
                return Some(EigenPairs {
                    values: picked,
                    vectors,
                });
            }
            if complete || dim == max_dim {
                return None;
            }
        }

        if b <= 1e-10 * scale.max(f64::MIN_POSITIVE) {
            // invariant subspace reached; restart in its orthogonal complement
            beta.push(0.0);
            basis.push(random_unit(n, &mut rng, &basis)?);
        } else {
            beta.push(b);
            basis.push(Array1::from(w) / b);
        }
    }
}
