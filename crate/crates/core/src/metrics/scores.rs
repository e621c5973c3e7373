//! Partition comparison scores built on a contingency table.

use crate::error::{Error, Result};

/// Cross-tabulation of two labelings. Rows follow the sorted distinct values
/// of the first labeling, columns those of the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<u64>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub total: u64,
}

fn dense_ids(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut distinct: Vec<usize> = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let ids = labels
        .iter()
        .map(|l| distinct.binary_search(l).expect("present"))
        .collect();
    (ids, distinct.len())
}

impl ContingencyTable {
    pub fn new(u: &[usize], v: &[usize]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                actual: v.len(),
            });
        }
        let (ru, r) = dense_ids(u);
        let (cv, c) = dense_ids(v);
        let mut counts = vec![vec![0u64; c]; r];
        for (&a, &b) in ru.iter().zip(&cv) {
            counts[a][b] += 1;
        }
        let row_sums = counts.iter().map(|row| row.iter().sum()).collect();
        let col_sums = (0..c).map(|j| counts.iter().map(|row| row[j]).sum()).collect();
        Ok(ContingencyTable {
            counts,
            row_sums,
            col_sums,
            total: u.len() as u64,
        })
    }

    pub fn rows(&self) -> usize {
        self.row_sums.len()
    }

    pub fn cols(&self) -> usize {
        self.col_sums.len()
    }

    /// Both labelings induce the same partition.
    pub fn same_partition(&self) -> bool {
        self.rows() == self.cols()
            && self
                .counts
                .iter()
                .all(|row| row.iter().filter(|&&x| x > 0).count() == 1)
    }

    /// Mutual information in nats.
    pub fn mutual_information(&self) -> f64 {
        let n = self.total as f64;
        let mut mi = 0.0;
        for (i, row) in self.counts.iter().enumerate() {
            for (j, &nij) in row.iter().enumerate() {
                if nij > 0 {
                    let nij = nij as f64;
                    let outer = self.row_sums[i] as f64 * self.col_sums[j] as f64;
                    mi += nij / n * (n * nij / outer).ln();
                }
            }
        }
        mi.max(0.0)
    }
}

fn entropy(sums: &[u64], total: u64) -> f64 {
    let n = total as f64;
    sums.iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Expected mutual information of two labelings with these marginals under
/// random permutation (hypergeometric cell counts).
pub fn expected_mutual_information(table: &ContingencyTable) -> f64 {
    let n = table.total as usize;
    let nf = n as f64;
    // ln k! for k = 0..=n
    let mut lfact = vec![0.0f64; n + 1];
    for k in 1..=n {
        lfact[k] = lfact[k - 1] + (k as f64).ln();
    }
    let mut emi = 0.0;
    for &a in &table.row_sums {
        let a = a as usize;
        for &b in &table.col_sums {
            let b = b as usize;
            let lo = (a + b).saturating_sub(n).max(1);
            let hi = a.min(b);
            let fixed = lfact[a] + lfact[b] + lfact[n - a] + lfact[n - b] - lfact[n];
            for nij in lo..=hi {
                let log_p = fixed - lfact[nij] - lfact[a - nij] - lfact[b - nij] - lfact[n + nij - a - b];
                let nijf = nij as f64;
                let term = nijf / nf * (nf * nijf / (a as f64 * b as f64)).ln();
                emi += term * log_p.exp();
            }
        }
    }
    emi
}

/// Adjusted mutual information, arithmetic-mean normalization.
///
/// A labeling with a single cluster on either side scores 0; identical
/// partitions score exactly 1.
pub fn ami(u: &[usize], v: &[usize]) -> Result<f64> {
    let t = ContingencyTable::new(u, v)?;
    if t.rows() < 2 || t.cols() < 2 {
        return Ok(0.0);
    }
    if t.same_partition() {
        return Ok(1.0);
    }
    let mi = t.mutual_information();
    let emi = expected_mutual_information(&t);
    let mean = 0.5 * (entropy(&t.row_sums, t.total) + entropy(&t.col_sums, t.total));
    let denom = mean - emi;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok((mi - emi) / denom)
}

fn pairs(x: u64) -> f64 {
    (x as f64) * (x.saturating_sub(1) as f64) / 2.0
}

/// Adjusted Rand index. Single-cluster labelings score 0, identical
/// partitions exactly 1, and a zero denominator maps to 0.
pub fn ari(u: &[usize], v: &[usize]) -> Result<f64> {
    let t = ContingencyTable::new(u, v)?;
    if t.rows() < 2 || t.cols() < 2 {
        return Ok(0.0);
    }
    if t.same_partition() {
        return Ok(1.0);
    }
    let index: f64 = t.counts.iter().flatten().map(|&x| pairs(x)).sum();
    let sa: f64 = t.row_sums.iter().map(|&x| pairs(x)).sum();
    let sb: f64 = t.col_sums.iter().map(|&x| pairs(x)).sum();
    let expected = sa * sb / pairs(t.total);
    let max = 0.5 * (sa + sb);
    let denom = max - expected;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok((index - expected) / denom)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VMeasure {
    pub homogeneity: f64,
    pub completeness: f64,
    pub v_measure: f64,
}

/// Homogeneity, completeness and their harmonic mean for `truth` vs `pred`.
pub fn homogeneity_completeness_v(truth: &[usize], pred: &[usize]) -> Result<VMeasure> {
    let t = ContingencyTable::new(truth, pred)?;
    let n = t.total as f64;
    let h_truth = entropy(&t.row_sums, t.total);
    let h_pred = entropy(&t.col_sums, t.total);
    let (mut h_truth_given_pred, mut h_pred_given_truth) = (0.0, 0.0);
    for (i, row) in t.counts.iter().enumerate() {
        for (j, &nij) in row.iter().enumerate() {
            if nij > 0 {
                let nij = nij as f64;
                h_truth_given_pred -= nij / n * (nij / t.col_sums[j] as f64).ln();
                h_pred_given_truth -= nij / n * (nij / t.row_sums[i] as f64).ln();
            }
        }
    }
    let homogeneity = if h_truth == 0.0 { 1.0 } else { 1.0 - h_truth_given_pred / h_truth };
    let completeness = if h_pred == 0.0 { 1.0 } else { 1.0 - h_pred_given_truth / h_pred };
    let v_measure = if homogeneity + completeness == 0.0 {
        0.0
    } else {
        2.0 * homogeneity * completeness / (homogeneity + completeness)
    };
    Ok(VMeasure {
        homogeneity,
        completeness,
        v_measure,
    })
}

pub fn v_measure(truth: &[usize], pred: &[usize]) -> Result<f64> {
    homogeneity_completeness_v(truth, pred).map(|m| m.v_measure)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_and_permuted() {
        let u = [0, 0, 1, 1, 2];
        let v = [5, 5, 3, 3, 9];
        assert_eq!(ami(&u, &v).unwrap(), 1.0);
        assert_eq!(ari(&u, &v).unwrap(), 1.0);
        assert!((v_measure(&u, &v).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(ari(&[0, 0, 1, 1], &[1, 1, 0, 0]).unwrap(), 1.0);
    }

    #[test]
    fn constant_labelings() {
        let u = [0, 0, 1, 1];
        let c = [0, 0, 0, 0];
        assert_eq!(ami(&c, &u).unwrap(), 0.0);
        assert_eq!(ari(&u, &c).unwrap(), 0.0);
        let m = homogeneity_completeness_v(&u, &c).unwrap();
        assert_eq!((m.homogeneity, m.completeness, m.v_measure), (0.0, 1.0, 0.0));
    }

    #[test]
    fn crossed_halves() {
        // pairs: (0,1) same/diff, (2,3) same/diff ... index 0, expected 2*2/6
        let u = [0, 0, 1, 1];
        let v = [0, 1, 0, 1];
        assert!((ari(&u, &v).unwrap() - (-0.5)).abs() < 1e-15);
        assert!(ami(&u, &v).unwrap() < 0.0);
        assert_eq!(v_measure(&u, &v).unwrap(), 0.0);
    }

    #[test]
    fn length_mismatch() {
        assert!(ami(&[0, 1], &[0]).is_err());
        assert!(ari(&[0, 1], &[0]).is_err());
        assert!(v_measure(&[0, 1], &[0]).is_err());
    }

    #[test]
    fn contingency_sums() {
        let t = ContingencyTable::new(&[0, 0, 1, 2], &[1, 1, 1, 0]).unwrap();
        assert_eq!(t.counts, vec![vec![0, 2], vec![0, 1], vec![1, 0]]);
        assert_eq!(t.row_sums, vec![2, 1, 1]);
        assert_eq!(t.col_sums, vec![1, 3]);
        assert_eq!(t.total, 4);
    }
}
