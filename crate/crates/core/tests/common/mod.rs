//! Independent reference implementations shared by the integration tests.
//! Nothing here calls into the library code it checks.
#![allow(dead_code)]

use std::collections::HashMap;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

fn counts(labels: &[usize]) -> HashMap<usize, u64> {
    let mut m = HashMap::new();
    for &l in labels {
        *m.entry(l).or_insert(0) += 1;
    }
    m
}

fn joint(u: &[usize], v: &[usize]) -> HashMap<(usize, usize), u64> {
    let mut m = HashMap::new();
    for (&a, &b) in u.iter().zip(v) {
        *m.entry((a, b)).or_insert(0) += 1;
    }
    m
}

fn entropy(c: &HashMap<usize, u64>, n: f64) -> f64 {
    c.values().map(|&x| x as f64 / n).map(|p| -p * p.ln()).sum()
}

/// Same partition, checked pair by pair.
pub fn same_partition(u: &[usize], v: &[usize]) -> bool {
    (0..u.len()).all(|i| (0..u.len()).all(|j| (u[i] == u[j]) == (v[i] == v[j])))
}

/// Expected MI with exact hypergeometric probabilities from integer binomials.
pub fn emi_oracle(u: &[usize], v: &[usize]) -> f64 {
    let n = u.len() as u64;
    let (cu, cv) = (counts(u), counts(v));
    let mut emi = 0.0;
    for &a in cu.values() {
        for &b in cv.values() {
            let denom = binom(n, a);
            for nij in 1..=a.min(b) {
                // P(n_ij) = C(b, nij) C(n - b, a - nij) / C(n, a)
                let num = binom(b, nij) * binom(n - b, a - nij);
                if num == 0 {
                    continue;
                }
                let p = num as f64 / denom as f64;
                let nf = n as f64;
                let x = nij as f64;
                emi += p * x / nf * (nf * x / (a as f64 * b as f64)).ln();
            }
        }
    }
    emi
}

pub fn mi_oracle(u: &[usize], v: &[usize]) -> f64 {
    let n = u.len() as f64;
    let (cu, cv) = (counts(u), counts(v));
    joint(u, v)
        .iter()
        .map(|(&(a, b), &x)| {
            let p = x as f64 / n;
            p * (p / ((cu[&a] as f64 / n) * (cv[&b] as f64 / n))).ln()
        })
        .sum()
}

pub fn ami_oracle(u: &[usize], v: &[usize]) -> f64 {
    let (cu, cv) = (counts(u), counts(v));
    if cu.len() < 2 || cv.len() < 2 {
        return 0.0;
    }
    if same_partition(u, v) {
        return 1.0;
    }
    let n = u.len() as f64;
    let emi = emi_oracle(u, v);
    let denom = 0.5 * (entropy(&cu, n) + entropy(&cv, n)) - emi;
    if denom == 0.0 {
        return 0.0;
    }
    (mi_oracle(u, v) - emi) / denom
}

/// Rand-index counts by enumerating every pair of nodes.
pub fn ari_oracle(u: &[usize], v: &[usize]) -> f64 {
    if counts(u).len() < 2 || counts(v).len() < 2 {
        return 0.0;
    }
    if same_partition(u, v) {
        return 1.0;
    }
    let n = u.len();
    let (mut both, mut in_u, mut in_v, mut all) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            let a = u[i] == u[j];
            let b = v[i] == v[j];
            both += u64::from(a && b);
            in_u += u64::from(a);
            in_v += u64::from(b);
            all += 1;
        }
    }
    let expected = in_u as f64 * in_v as f64 / all as f64;
    let max = 0.5 * (in_u + in_v) as f64;
    if max - expected == 0.0 {
        return 0.0;
    }
    (both as f64 - expected) / (max - expected)
}

pub fn v_oracle(truth: &[usize], pred: &[usize]) -> (f64, f64, f64) {
    let n = truth.len() as f64;
    let (ct, cp) = (counts(truth), counts(pred));
    let j = joint(truth, pred);
    let h_t = entropy(&ct, n);
    let h_p = entropy(&cp, n);
    // H(T|P) = H(T,P) - H(P)
    let h_joint: f64 = j.values().map(|&x| x as f64 / n).map(|p| -p * p.ln()).sum();
    let h_t_given_p = h_joint - h_p;
    let h_p_given_t = h_joint - h_t;
    let hom = if h_t == 0.0 { 1.0 } else { 1.0 - h_t_given_p / h_t };
    let com = if h_p == 0.0 { 1.0 } else { 1.0 - h_p_given_t / h_p };
    let v = if hom + com == 0.0 { 0.0 } else { 2.0 * hom * com / (hom + com) };
    (hom, com, v)
}

/// Minimum over non-empty clusters and ordered pairs of present groups of
/// count(g) / count(h).
pub fn balance_oracle(clusters: &[usize], groups: &[usize]) -> f64 {
    let present: Vec<usize> = {
        let mut g: Vec<usize> = counts(groups).into_keys().collect();
        g.sort_unstable();
        g
    };
    if present.len() < 2 {
        return 1.0;
    }
    let mut best = 1.0f64;
    let mut cl: Vec<usize> = counts(clusters).into_keys().collect();
    cl.sort_unstable();
    for c in cl {
        let count = |g: usize| clusters.iter().zip(groups).filter(|(&x, &y)| x == c && y == g).count();
        for &g in &present {
            for &h in &present {
                if g == h {
                    continue;
                }
                let (cg, ch) = (count(g), count(h));
                let r = if ch == 0 { 0.0 } else { cg as f64 / ch as f64 };
                best = best.min(r);
            }
        }
    }
    best
}

/// `max_y y^T m y` over all sign vectors (n <= 20).
pub fn brute_force_max(m: &Array2<f64>) -> f64 {
    let n = m.nrows();
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1 << n) {
        let y: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 }).collect();
        let mut v = 0.0;
        for i in 0..n {
            for j in 0..n {
                v += y[i] * m[[i, j]] * y[j];
            }
        }
        best = best.max(v);
    }
    best
}

pub fn signs_value(m: &Array2<f64>, labels: &[usize]) -> f64 {
    let y: Vec<f64> = labels.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect();
    let n = y.len();
    let mut v = 0.0;
    for i in 0..n {
        for j in 0..n {
            v += y[i] * m[[i, j]] * y[j];
        }
    }
    v
}

pub fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
    let mut m = Array2::zeros((n, n));
    for i in 0..n {
        for j in i..n {
            let x = rng.random_range(-1.0..1.0);
            m[[i, j]] = x;
            m[[j, i]] = x;
        }
    }
    m
}

/// Minimizes a smooth function of a few variables by cyclic golden-section
/// line searches along the coordinate axes.
pub fn coordinate_minimize<F: Fn(&[f64]) -> f64>(f: F, start: &[f64], radius: f64, sweeps: usize) -> Vec<f64> {
    let mut x = start.to_vec();
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..sweeps {
        for k in 0..x.len() {
            let (mut lo, mut hi) = (x[k] - radius, x[k] + radius);
            let eval = |t: f64, x: &mut Vec<f64>| {
                let keep = x[k];
                x[k] = t;
                let v = f(x);
                x[k] = keep;
                v
            };
            for _ in 0..200 {
                let a = hi - phi * (hi - lo);
                let b = lo + phi * (hi - lo);
                if eval(a, &mut x) < eval(b, &mut x) {
                    hi = b;
                } else {
                    lo = a;
                }
            }
            x[k] = 0.5 * (lo + hi);
        }
    }
    x
}

pub struct ZProblem {
    pub b: Array2<f64>,
    pub p: Array2<f64>,
    pub gamma: Array2<f64>,
    pub alpha: [f64; 2],
    pub rho: f64,
}

impl ZProblem {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        ZProblem {
            b: random_symmetric(2, rng),
            p: random_symmetric(2, rng),
            gamma: random_symmetric(2, rng),
            alpha: [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)],
            rho: rng.random_range(0.5..2.0),
        }
    }

    /// Subproblem objective at symmetric `Z = [[x0, x2], [x2, x1]]`.
    pub fn objective(&self, x: &[f64]) -> f64 {
        let z = [[x[0], x[2]], [x[2], x[1]]];
        let mut v = 0.0;
        for i in 0..2 {
            v += self.alpha[i] * (z[i][i] - 1.0) + 0.5 * self.rho * (z[i][i] - 1.0).powi(2);
            for j in 0..2 {
                let d = self.p[[i, j]] - z[i][j];
                v += self.b[[i, j]] * z[j][i] + self.gamma[[i, j]] * d + 0.5 * self.rho * d * d;
            }
        }
        v
    }
}

pub struct PProblem {
    pub z: Array2<f64>,
    pub gamma: Array2<f64>,
    pub rho: f64,
    pub beta: f64,
}

impl PProblem {
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        PProblem {
            z: random_symmetric(2, rng).mapv(|x| 2.0 * x),
            gamma: random_symmetric(2, rng),
            rho: rng.random_range(0.5..2.0),
            beta: rng.random_range(0.0..1.0),
        }
    }

    pub fn objective(&self, p: &[[f64; 2]; 2], nuclear: f64) -> f64 {
        let mut v = self.beta * nuclear;
        for i in 0..2 {
            for j in 0..2 {
                let d = p[i][j] - self.z[[i, j]];
                v += self.gamma[[i, j]] * d + 0.5 * self.rho * d * d;
            }
        }
        v
    }

    /// Searches PSD matrices `R(theta) diag(a, b) R(theta)^T` with `a, b >= 0`.
    /// For fixed `theta` the objective separates into two clamped 1-D
    /// quadratics; `theta` is found by a grid followed by golden-section.
    pub fn minimize(&self) -> Array2<f64> {
        let inner = |theta: f64| -> (f64, [[f64; 2]; 2]) {
            let (c, s) = (theta.cos(), theta.sin());
            let e = [[c, s], [-s, c]];
            // target W = Z - Gamma / rho; with P = sum d_k e_k e_k^T the objective
            // equals rho/2 sum (d_k - e_k^T W e_k)^2 + beta sum d_k + const
            let w = |i: usize, j: usize| self.z[[i, j]] - self.gamma[[i, j]] / self.rho;
            let mut p = [[0.0; 2]; 2];
            let mut nuclear = 0.0;
            for ek in e {
                let q = ek[0] * ek[0] * w(0, 0) + 2.0 * ek[0] * ek[1] * w(0, 1) + ek[1] * ek[1] * w(1, 1);
                let d = (q - self.beta / self.rho).max(0.0);
                nuclear += d;
                for i in 0..2 {
                    for j in 0..2 {
                        p[i][j] += d * ek[i] * ek[j];
                    }
                }
            }
            (self.objective(&p, nuclear), p)
        };
        let grid = 2000;
        let step = std::f64::consts::PI / grid as f64;
        let best = (0..grid)
            .map(|k| k as f64 * step)
            .min_by(|a, b| inner(*a).0.total_cmp(&inner(*b).0))
            .unwrap();
        let (mut lo, mut hi) = (best - step, best + step);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..200 {
            let a = hi - phi * (hi - lo);
            let b = lo + phi * (hi - lo);
            if inner(a).0 < inner(b).0 {
                hi = b;
            } else {
                lo = a;
            }
        }
        let p = inner(0.5 * (lo + hi)).1;
        Array2::from_shape_fn((2, 2), |(i, j)| p[i][j])
    }

    /// Objective at `R(theta) diag(a, b) R(theta)^T` with `a, b >= 0`.
    pub fn at(&self, theta: f64, a: f64, b: f64) -> f64 {
        let (c, s) = (theta.cos(), theta.sin());
        let p = [
            [a * c * c + b * s * s, (a - b) * c * s],
            [(a - b) * c * s, a * s * s + b * c * c],
        ];
        self.objective(&p, a + b)
    }

    /// Objective at a symmetric PSD 2x2 matrix, where the nuclear norm is the trace.
    pub fn value(&self, p: &Array2<f64>) -> f64 {
        let (a, b, c) = (p[[0, 0]], p[[1, 1]], p[[0, 1]]);
        self.objective(&[[a, c], [c, b]], a + b)
    }
}

pub fn labels_from(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..k)).collect()
}
