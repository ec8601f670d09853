//! Maintaining a matrix inverse under symmetric rank-2 perturbations
//! `B + mu (e_i e_j^T + e_j e_i^T)`.
//!
//! ```bash
//! cargo run --example rank2_update
//! ```

use graphkss::linalg::{InverseState, UpdateChain};
use graphkss::Error;
use nalgebra::DMatrix;

fn main() -> graphkss::Result<()> {
    let n = 6;
    let b = DMatrix::from_fn(n, n, |i, j| if i == j { 4.0 } else { 1.0 / (1.0 + (i + j) as f64) });
    let mut state = InverseState::invert(&b)?;
    let mut m = b.clone();
    for (i, j, mu) in [(0, 3, 0.5), (1, 2, -0.25), (0, 3, -0.5)] {
        // O(1) grand sum of the updated inverse, before committing
        let predicted = state.toggled_grw_sum(i, j, mu)?;
        state.apply_rank2(i, j, mu)?;
        m[(i, j)] += mu;
        m[(j, i)] += mu;
        let direct = m.clone().try_inverse().ok_or(Error::SingularMatrix)?;
        println!(
            "update ({i},{j},{mu:+}): entry error {:.1e}, sum {predicted:.10} vs {:.10}",
            (state.inverse() - &direct).abs().max(),
            direct.sum()
        );
    }

    // lazy chain: stores the update vectors instead of the dense inverse
    let base = InverseState::invert(&b)?;
    let mut chain = UpdateChain::new(&base);
    chain.apply(0, 1, 0.3)?;
    chain.apply(2, 5, -0.2)?;
    println!("chain of {} updates, total {:.10}", chain.len(), chain.total());

    // the update formula can fail where the perturbed matrix is invertible
    let b = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 2.0]);
    let state = InverseState::invert(&b)?;
    match state.rank2_update(0, 1, 1.0) {
        Err(e) => println!("[[1,1],[1,2]] with mu=1: {e}; direct inverse exists: {}",
            DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 2.0]).try_inverse().is_some()),
        Ok(_) => println!("unexpected success"),
    }
    Ok(())
}
