//! Small weighted two-cluster graph (20 + 10 nodes) clustered at a few
//! fairness weights, showing how the split moves from the planted
//! communities towards the protected attribute.

use fairgraph::metrics::score_report;
use fairgraph::sbm::{generate_weighted_two_cluster, sample_sensitive, WeightedTwoClusterParams};
use fairgraph::spectral::{build_penalized, fair_spectral_binary, SolverConfig};

fn main() -> fairgraph::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let params = WeightedTwoClusterParams::new((20, 10), (0.5, 1.0), (0.0, 0.5), seed);
    let (g, truth) = generate_weighted_two_cluster(&params)?;
    let s = sample_sensitive(g.n(), 0.5, seed + 77)?;

    println!("{:>7} {:>9} {:>9} {:>8} {:>10}", "lambda", "temporal", "specific", "balance", "objective");
    for lambda in [0.0, -0.1, -0.2, -0.3, -0.4, -0.6] {
        let m = build_penalized(&g, &s, &SolverConfig::binary(lambda, 1.0))?;
        let pred = fair_spectral_binary(&m)?;
        let r = score_report(&pred, Some(truth.labels()), &s, Some(&m))?;
        println!(
            "{lambda:>7.2} {:>9.3} {:>9.3} {:>8.3} {:>10.3}",
            r.temporal.map_or(f64::NAN, |t| t.ami),
            r.specificity.ami,
            r.balance,
            r.objective.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
