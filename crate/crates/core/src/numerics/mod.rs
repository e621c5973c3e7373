//! Dense symmetric linear algebra and clustering kernels shared by the solvers.

mod eigen;
mod kmeans;
mod laplacian;
mod partial;
mod power;
mod prox;

pub use eigen::{relative_asymmetry, sym_eig, SymmetricEigen};
pub use kmeans::{kmeans, kmeans_fit, KMeansFit};
pub use laplacian::{build_laplacian, LaplacianMatrix, LaplacianMode};
pub use partial::{leading_eigenpairs, select_eigenpairs, spectrum_order, EigenOrdering, EigenPairs};
pub use power::power_iteration;
pub use prox::{svt_psd, symmetrize};

use ndarray::Array2;

pub fn frobenius_norm(m: &Array2<f64>) -> f64 {
    m.iter().map(|x| x * x).sum::<f64>().sqrt()
}
