//! Runs the ADMM relaxation next to the spectral solver on a small planted
//! graph and reports whether the rounded partitions agree.

use fairgraph::admm::{admm_solve_penalized, format_trace, round_with_confidence, AdmmConfig};
use fairgraph::sbm::{generate_sbm, sample_sensitive, SbmParams};
use fairgraph::spectral::{build_penalized, fair_spectral_binary, SolverConfig};

fn main() -> fairgraph::Result<()> {
    let (g, _) = generate_sbm(&SbmParams::planted((25, 20), 0.8, 0.1, 3))?;
    let s = sample_sensitive(g.n(), 0.5, 3)?;

    for lambda in [0.0, -0.1, -0.25] {
        let cfg = SolverConfig::binary(lambda, 1.0);
        let m = build_penalized(&g, &s, &cfg)?;
        let spectral = fair_spectral_binary(&m)?;
        let sol = admm_solve_penalized(&m, &AdmmConfig::new(cfg).with_max_iter(500))?;
        let rounded = round_with_confidence(&sol.state)?;
        println!(
            "lambda {lambda:>5}: {} iterations, converged {}, split residual {:.2e}, agree {}{}",
            sol.state.iteration,
            sol.converged,
            sol.state.residual_split,
            rounded.assignment.canonical() == spectral.canonical(),
            if rounded.low_confidence { " (low confidence)" } else { "" }
        );
        if lambda == 0.0 {
            // last few trace rows
            let trace = format_trace(&sol.trace);
            let lines: Vec<&str> = trace.lines().collect();
            println!("{}", lines[0]);
            for l in &lines[lines.len() - 3..] {
                println!("{l}");
            }
        }
    }
    Ok(())
}
