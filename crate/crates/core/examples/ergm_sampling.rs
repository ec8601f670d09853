//! Edge-two-star ERGM: exact conditionals, exact enumeration on small graphs
//! and Glauber sampling.
//!
//! ```bash
//! cargo run --release --example ergm_sampling
//! ```

use graphkss::ergm::{ChainSchedule, CountScaling};
use graphkss::{ErgmModel, Graph, PairIndex};

fn main() -> graphkss::Result<()> {
    let model = ErgmModel::e2s(-2.0, 0.1, 4)?;
    let dist = model.enumerate_distribution()?;
    let mean_edges: f64 = dist.iter().map(|(g, p)| p * g.edge_count() as f64).sum();
    println!("n=4: {} graphs, exact E[edges] = {mean_edges:.4}", dist.len());

    // conditional of a pair given the rest; independent of the pair itself
    let star = Graph::from_edges(4, [(0, 1), (0, 2)])?;
    let s = star.pair_index(0, 3)?;
    println!("q(x_03 = 1 | rest) on a two-star: {:.4}", model.conditional_edge_prob(&star, s)?);

    let chain = model.sample_chain(20_000, ChainSchedule::for_vertices(4), 7);
    let mc_edges = chain.iter().map(|g| g.edge_count() as f64).sum::<f64>() / chain.len() as f64;
    println!("Glauber chain estimate of E[edges] = {mc_edges:.4}");

    let big = ErgmModel::e2s(-2.0, 0.0, 20)?;
    let x = big.sample(1);
    println!("n=20 sample: {} edges, density {:.3}", x.edge_count(), x.density());

    // injective scaling counts ordered edges and averaged two-stars
    let injective = ErgmModel::e2s(-1.0, 0.05, 20)?.with_scaling(CountScaling::Injective);
    println!("injective statistics of that sample: {:?}", injective.statistics(&x)?);
    println!("q at pair 0 under both scalings: {:.4} vs {:.4}",
        big.conditional_edge_prob(&x, PairIndex(0))?,
        injective.conditional_edge_prob(&x, PairIndex(0))?);
    Ok(())
}
