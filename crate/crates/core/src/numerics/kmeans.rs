//! Lloyd's algorithm with k-means++ seeding and restarts.

use ndarray::{Array2, ArrayView1};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::ClusterAssignment;

const MAX_LLOYD_ITERS: usize = 300;
const MOVE_TOL: f64 = 1e-9;

/// Outcome of the best restart.
#[derive(Debug, Clone)]
pub struct KMeansFit {
    pub assignment: ClusterAssignment,
    pub centroids: Array2<f64>,
    /// Within-cluster sum of squares of the returned assignment.
    pub wcss: f64,
    /// Objective after each assignment step of the winning run.
    pub history: Vec<f64>,
}

/// Clusters the rows of `rows` into `k` groups; the best of `restarts` runs
/// by within-cluster sum of squares wins (earliest run on ties).
pub fn kmeans(rows: &Array2<f64>, k: usize, restarts: usize, seed: u64) -> Result<ClusterAssignment> {
    kmeans_fit(rows, k, restarts, seed).map(|f| f.assignment)
}

pub fn kmeans_fit(rows: &Array2<f64>, k: usize, restarts: usize, seed: u64) -> Result<KMeansFit> {
    let (n, d) = rows.dim();
    if n == 0 || d == 0 {
        return Err(Error::InvalidParameter("k-means needs a non-empty n x d input".into()));
    }
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("k = {k} must lie in 1..={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<KMeansFit> = None;
    for _ in 0..restarts.max(1) {
        let fit = lloyd(rows, k, &mut rng)?;
        if best.as_ref().is_none_or(|b| fit.wcss < b.wcss) {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn sq_dist(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn plus_plus_init(rows: &Array2<f64>, k: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let n = rows.nrows();
    let mut chosen = vec![rng.random_range(0..n)];
    let mut d2: Vec<f64> = (0..n).map(|i| sq_dist(rows.row(i), rows.row(chosen[0]))).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &w) in d2.iter().enumerate() {
                if w > 0.0 && target < w {
                    pick = i;
                    break;
                }
                target -= w;
            }
            // rounding can run past the end; fall back to the last positive weight
            if d2[pick] == 0.0 {
                pick = d2.iter().rposition(|&w| w > 0.0).expect("positive total");
            }
            pick
        } else {
            // fewer distinct points than k
            let free: Vec<usize> = (0..n).filter(|i| !chosen.contains(i)).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen.push(next);
        for (i, di) in d2.iter_mut().enumerate() {
            *di = di.min(sq_dist(rows.row(i), rows.row(next)));
        }
    }
    let mut centroids = Array2::zeros((k, rows.ncols()));
    for (c, &i) in chosen.iter().enumerate() {
        centroids.row_mut(c).assign(&rows.row(i));
    }
    centroids
}

fn assign(rows: &Array2<f64>, centroids: &Array2<f64>, labels: &mut [usize]) -> f64 {
    let mut total = 0.0;
    for (i, row) in rows.rows().into_iter().enumerate() {
        let mut best = (f64::INFINITY, 0);
        for (c, centroid) in centroids.rows().into_iter().enumerate() {
            let d = sq_dist(row, centroid);
            if d < best.0 {
                best = (d, c);
            }
        }
        labels[i] = best.1;
        total += best.0;
    }
    total
}

fn lloyd(rows: &Array2<f64>, k: usize, rng: &mut ChaCha8Rng) -> Result<KMeansFit> {
    let (n, d) = rows.dim();
    let mut centroids = plus_plus_init(rows, k, rng);
    let mut labels = vec![0; n];
    let mut history = Vec::new();

    for _ in 0..MAX_LLOYD_ITERS {
        history.push(assign(rows, &centroids, &mut labels));

        let mut sums = Array2::<f64>::zeros((k, d));
        let mut counts = vec![0usize; k];
        for (i, &l) in labels.iter().enumerate() {
            sums.row_mut(l).scaled_add(1.0, &rows.row(i));
            counts[l] += 1;
        }
        let mut next = centroids.clone();
        for c in 0..k {
            if counts[c] > 0 {
                next.row_mut(c).assign(&(&sums.row(c) / counts[c] as f64));
            } else {
                // re-seed an empty cluster at the point farthest from its centroid
                let far = (0..n)
                    .max_by(|&a, &b| {
                        sq_dist(rows.row(a), centroids.row(labels[a]))
                            .total_cmp(&sq_dist(rows.row(b), centroids.row(labels[b])))
                            .then(b.cmp(&a))
                    })
                    .expect("n > 0");
                next.row_mut(c).assign(&rows.row(far));
            }
        }
        let shift = (0..k)
            .map(|c| sq_dist(next.row(c), centroids.row(c)).sqrt())
            .fold(0.0f64, f64::max);
        centroids = next;
        if shift < MOVE_TOL {
            break;
        }
    }
    let wcss = assign(rows, &centroids, &mut labels);
    history.push(wcss);

    // canonical labels: order of first appearance
    let mut remap = vec![usize::MAX; k];
    let mut next_id = 0;
    for l in labels.iter_mut() {
        if remap[*l] == usize::MAX {
            remap[*l] = next_id;
            next_id += 1;
        }
        *l = remap[*l];
    }
    let mut reordered = Array2::zeros((k, d));
    let mut spare = next_id;
    for (old, &new) in remap.iter().enumerate() {
        let slot = if new == usize::MAX {
            spare += 1;
            spare - 1
        } else {
            new
        };
        reordered.row_mut(slot).assign(&centroids.row(old));
    }

    Ok(KMeansFit {
        assignment: ClusterAssignment::new(labels, k)?,
        centroids: reordered,
        wcss,
        history,
    })
}
