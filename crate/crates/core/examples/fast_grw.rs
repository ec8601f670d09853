//! Stein kernel matrix for the geometric random walk kernel, computed by
//! dense inversion per pair of flips and by rank-2 inverse updates.
//!
//! ```bash
//! cargo run --release --example fast_grw -- 14
//! ```

use std::time::Instant;

use graphkss::stein::{dense_grw_stein_matrix, fast_grw_stein_matrix, select_pairs};
use graphkss::{ErgmModel, PairSelection, ScoreSource};

fn main() -> graphkss::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(12);
    let model = ErgmModel::e2s(-2.0, 0.0, n)?;
    let x = model.sample(4);
    // lambda has to stay below 1 / (max degree)^2 for the series to converge
    let d = (x.max_degree() + 1) as f64;
    let lambda = 0.5 / (d * d);
    let pairs = select_pairs(x.pair_count(), PairSelection::Resample { size: 40, seed: 8 })?;

    let t = Instant::now();
    let dense = dense_grw_stein_matrix(ScoreSource::Exact(&model), &x, lambda, &pairs)?;
    let dense_ms = t.elapsed().as_secs_f64() * 1e3;
    let t = Instant::now();
    let fast = fast_grw_stein_matrix(ScoreSource::Exact(&model), &x, lambda, &pairs)?;
    let fast_ms = t.elapsed().as_secs_f64() * 1e3;

    let err = (&dense.h - &fast.h).abs().max();
    println!("n={n}, lambda={lambda:.4}, B={}", pairs.len());
    println!("dense {dense_ms:.1} ms, rank-2 updates {fast_ms:.1} ms, max entry difference {err:.2e}");
    println!("statistic {:.6} vs {:.6}", dense.statistic(), fast.statistic());
    Ok(())
}
