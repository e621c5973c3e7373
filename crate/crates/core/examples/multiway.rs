//! Three communities with a three-level protected attribute, clustered
//! with both multi-way strategies.

use ndarray::Array2;

use fairgraph::metrics::{ami, balance};
use fairgraph::sbm::{generate_sbm, SbmParams};
use fairgraph::spectral::{build_penalized, fair_spectral, MultiKStrategy, SolverConfig};
use fairgraph::SensitiveAttributes;

fn main() -> fairgraph::Result<()> {
    let psi = Array2::from_shape_fn((3, 3), |(a, b)| if a == b { 0.8 } else { 0.05 });
    let (g, truth) = generate_sbm(&SbmParams {
        sizes: vec![60, 60, 60],
        psi,
        seed: 11,
    })?;
    // groups cycle through nodes, so every community holds all three
    let s = SensitiveAttributes::from_groups((0..g.n()).map(|i| i % 3).collect(), 3)?;

    for strategy in [MultiKStrategy::LaplacianKMeans, MultiKStrategy::RecursiveBisection] {
        for lambda in [0.0, -0.05] {
            let mut cfg = SolverConfig::binary(0.0, 1.0).with_k(3, strategy).with_lambdas(vec![lambda; 3]);
            cfg.center_indicators = true;
            let pred = fair_spectral(&build_penalized(&g, &s, &cfg)?, &cfg)?;
            println!(
                "{strategy:?} lambda {lambda:>5}: temporal AMI {:.3}, balance {:.3}, clusters used {}",
                ami(truth.labels(), pred.labels())?,
                balance(&pred, &s)?,
                pred.used_clusters()
            );
        }
    }
    Ok(())
}
