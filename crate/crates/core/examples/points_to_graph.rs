//! Builds similarity graphs from 2-D points (two noisy rings of samples)
//! and clusters them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fairgraph::metrics::ami;
use fairgraph::spectral::{build_penalized, fair_spectral_binary, SolverConfig};
use fairgraph::{adjacency_from_points, PointAdjacency, SensitiveAttributes};

fn main() -> fairgraph::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut points = Vec::new();
    let mut truth = Vec::new();
    for (c, center) in [(0usize, (0.0, 0.0)), (1, (4.0, 0.0))] {
        for _ in 0..40 {
            let x: f64 = center.0 + rng.random_range(-1.0..1.0);
            let y: f64 = center.1 + rng.random_range(-1.0..1.0);
            points.push(vec![x, y]);
            truth.push(c);
        }
    }
    let s = SensitiveAttributes::binary((0..points.len()).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect())?;

    for (name, mode) in [
        ("threshold 1.5", PointAdjacency::Threshold(1.5)),
        ("inverse distance", PointAdjacency::InverseDistance),
    ] {
        let g = adjacency_from_points(&points, mode)?;
        let m = build_penalized(&g, &s, &SolverConfig::binary(0.0, 1.0))?;
        let pred = fair_spectral_binary(&m)?;
        println!("{name:>16}: {} edges, AMI {:.3}", g.edge_count(), ami(&truth, pred.labels())?);
    }
    Ok(())
}
