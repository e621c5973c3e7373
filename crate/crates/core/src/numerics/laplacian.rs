use ndarray::Array2;

use super::eigen::check_symmetric;
use crate::error::Result;

/// How the diagonal term of `L = D - M` is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LaplacianMode {
    /// `D` is the diagonal matrix of row sums of `M`.
    #[default]
    Degree,
    /// `D` is `M`'s own diagonal, taken literally.
    LiteralDiag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix {
    pub matrix: Array2<f64>,
}

pub fn build_laplacian(m: &Array2<f64>, mode: LaplacianMode) -> Result<LaplacianMatrix> {
    check_symmetric(m)?;
    let n = m.nrows();
    let mut matrix = -m;
    for i in 0..n {
        let d = match mode {
            LaplacianMode::Degree => m.row(i).sum(),
            LaplacianMode::LiteralDiag => m[[i, i]],
        };
        matrix[[i, i]] += d;
    }
    Ok(LaplacianMatrix { matrix })
}
