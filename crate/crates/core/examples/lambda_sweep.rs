//! Sweep the fairness weight from -1 to 1 at mu = 1 on a 2 x 1000 node
//! planted partition and print the tradeoff table and its area.

use fairgraph::sbm::{generate_sbm, sample_sensitive, SbmParams};
use fairgraph::sweep::{linspace, run_sweep, tradeoff_auc, Metric, SweepSpec};

fn main() -> fairgraph::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let steps: usize = std::env::args().nth(2).and_then(|s| s.parse().ok()).unwrap_or(101);
    let (g, truth) = generate_sbm(&SbmParams::planted((1000, 1000), 0.90, 0.05, seed))?;
    let s = sample_sensitive(g.n(), 0.5, seed + 1000)?;

    let mut spec = SweepSpec::new(g, s, Some(truth.into_labels()));
    spec.lambda_grid = linspace(-1.0, 1.0, steps);
    spec.mu_values = vec![1.0];
    let points = run_sweep(&spec)?;

    println!("{:>8} {:>10} {:>12} {:>8}", "lambda", "temporal", "specificity", "balance");
    for p in &points {
        let flag = if p.degenerate { "  one cluster" } else { "" };
        println!(
            "{:>8.3} {:>10.4} {:>12.4} {:>8.3}{flag}",
            p.lambda, p.temporal_ami, p.specificity_ami, p.balance
        );
    }
    for m in Metric::ALL {
        println!("AUC ({}) = {:.4}", m.name(), tradeoff_auc(&points, m));
    }
    Ok(())
}
