//! Writes a generated graph, its labels and attributes to disk, reads them
//! back and checks nothing changed.

use fairgraph::io::{load_edge_list, load_labels, load_sensitive, save_edge_list, save_labels, save_sensitive};
use fairgraph::sbm::{generate_weighted_two_cluster, sample_sensitive, WeightedTwoClusterParams};

fn main() -> fairgraph::Result<()> {
    let dir = std::env::temp_dir().join(format!("fairgraph-io-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| fairgraph::Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    let (g, truth) = generate_weighted_two_cluster(&WeightedTwoClusterParams::new((6, 4), (0.5, 1.0), (0.0, 0.5), 2))?;
    let s = sample_sensitive(g.n(), 0.5, 2)?;

    let (el, tr, sp) = (dir.join("g.el"), dir.join("truth.csv"), dir.join("sens.csv"));
    save_edge_list(&g, &el)?;
    save_labels(truth.labels(), &tr)?;
    save_sensitive(&s, &sp)?;

    let g2 = load_edge_list(&el)?;
    println!("edges {} -> {}, bit-identical weights: {}", g.edge_count(), g2.edge_count(), g == g2);
    println!("labels identical: {}", load_labels(&tr, g.n())? == truth.labels());
    println!("attributes identical: {}", load_sensitive(&sp, g.n())? == s);
    println!("first lines of {}:", el.display());
    let text = std::fs::read_to_string(&el).unwrap_or_default();
    for line in text.lines().take(4) {
        println!("  {line}");
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(())
}
