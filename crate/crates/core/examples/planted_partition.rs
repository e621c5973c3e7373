//! Recover two planted communities of 1000 nodes each with the spectral
//! solver, ignoring fairness (lambda = 0, mu = 1).

use std::time::Instant;

use fairgraph::metrics::{ami, balance};
use fairgraph::sbm::{generate_sbm, sample_sensitive, SbmParams};
use fairgraph::spectral::{build_penalized, fair_spectral_binary, SolverConfig};

fn main() -> fairgraph::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let start = Instant::now();
    let (g, truth) = generate_sbm(&SbmParams::planted((1000, 1000), 0.90, 0.05, seed))?;
    let s = sample_sensitive(g.n(), 0.5, seed + 1000)?;
    println!("generated n = {} with {} edges in {:.2?}", g.n(), g.edge_count(), start.elapsed());

    let t = Instant::now();
    let m = build_penalized(&g, &s, &SolverConfig::binary(0.0, 1.0))?;
    let pred = fair_spectral_binary(&m)?;
    println!("clustered in {:.2?}", t.elapsed());

    println!("temporal AMI    {:.4}", ami(truth.labels(), pred.labels())?);
    println!("specificity AMI {:.4}", ami(&s.group_labels(), pred.labels())?);
    println!("balance         {:.4}", balance(&pred, &s)?);
    Ok(())
}
