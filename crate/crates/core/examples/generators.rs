//! Random geometric graphs and Barabasi-Albert graphs, and loading a sample
//! directory written to disk.
//!
//! ```bash
//! cargo run --release --example generators
//! ```

use graphkss::generators::{barabasi_albert, grg};
use graphkss::graph::write_graph;
use graphkss::{GeneratorSpec, SampleDirectory, Topology};

fn main() -> graphkss::Result<()> {
    println!("torus edge probability pi r^2 = {:.4}", std::f64::consts::PI * 0.04);
    for topology in [Topology::Torus, Topology::Square] {
        let densities: Vec<f64> = (0..200).map(|seed| grg(30, 0.2, topology, seed).map(|g| g.density())).collect::<graphkss::Result<_>>()?;
        let mean = densities.iter().sum::<f64>() / densities.len() as f64;
        println!("GRG r=0.2 {topology:?}: mean density {mean:.4}");
    }

    let tree = barabasi_albert(30, 1, 1.0, 3)?;
    println!("BA m=1: {} edges on 30 vertices, max degree {}", tree.edge_count(), tree.max_degree());
    for alpha in [0.0, 1.0, 2.0] {
        let g = barabasi_albert(30, 2, alpha, 3)?;
        println!("BA m=2 alpha={alpha}: {} edges, max degree {}", g.edge_count(), g.max_degree());
    }

    // a directory of graph files is how external generator samples come in
    let dir = std::env::temp_dir().join("graphkss-generators");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir)?;
    let spec = GeneratorSpec::BarabasiAlbert { n: 25, m: 2, alpha: 1.0 };
    for (k, g) in spec.sample_many(10, 99, 0)?.iter().enumerate() {
        write_graph(g, dir.join(format!("sample-{k:03}.txt")))?;
    }
    let samples = SampleDirectory::open(&dir)?;
    println!("loaded {} samples on {} vertices from {}", samples.len(), samples.n(), dir.display());
    Ok(())
}
