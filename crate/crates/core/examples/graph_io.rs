//! Building graphs, pair indexing, summary statistics and the text format.
//!
//! ```bash
//! cargo run --example graph_io
//! ```

use graphkss::graph::{read_graph, write_graph};
use graphkss::{Graph, PairIndex, SummaryStatisticKind};

fn main() -> graphkss::Result<()> {
    // a 4-cycle with one chord
    let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])?;
    println!("n={} edges={} two-stars={} triangles={}", g.n(), g.edge_count(), g.two_star_count(), g.triangle_count());
    println!("degrees {:?}, density {:.3}", g.degrees(), g.density());

    // pairs are ranked lexicographically: (0,1)=0, (0,2)=1, ..., (3,4)=9
    for s in 0..g.pair_count() {
        let (i, j) = g.pair_unindex(PairIndex(s))?;
        let bideg = g.summary_statistic(PairIndex(s), SummaryStatisticKind::Bidegree)?;
        let cn = g.summary_statistic(PairIndex(s), SummaryStatisticKind::CommonNeighbours)?;
        println!("pair {s}: ({i},{j}) edge={} bidegree={bideg} common={cn}", g.has_edge(i, j));
    }

    let flipped = g.flip_edge(g.pair_index(1, 3)?)?;
    println!("after flipping (1,3): {} edges, hamming {}", flipped.edge_count(), g.hamming_distance(&flipped)?);

    let dir = std::env::temp_dir().join("graphkss-graph-io");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("chorded-cycle.txt");
    write_graph(&g, &path)?;
    print!("{}", std::fs::read_to_string(&path)?);
    assert_eq!(read_graph(&path)?, g);
    Ok(())
}
