use std::time::Instant;

use graphkss::stein::{dense_grw_stein_matrix, fast_grw_stein_matrix, select_pairs};
use graphkss::{ErgmModel, PairSelection, ScoreSource};

fn median_ms(runs: usize, mut f: impl FnMut()) -> f64 {
    let mut times: Vec<f64> = (0..runs)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed().as_secs_f64() * 1e3
        })
        .collect();
    times.sort_by(f64::total_cmp);
    times[runs / 2]
}

fn compare(n: usize, b: usize, runs: usize) {
    let model = ErgmModel::e2s(-2.0, 0.0, n).unwrap();
    let x = model.sample(11);
    let d = (x.max_degree() + 1) as f64;
    let lambda = 0.5 / (d * d);
    let pairs = select_pairs(x.pair_count(), PairSelection::Resample { size: b, seed: 3 }).unwrap();
    let score = ScoreSource::Exact(&model);
    let dense = dense_grw_stein_matrix(score, &x, lambda, &pairs).unwrap();
    let fast = fast_grw_stein_matrix(score, &x, lambda, &pairs).unwrap();
    let scale = dense.h.abs().max().max(1.0);
    assert!((&dense.h - &fast.h).abs().max() <= 1e-8 * scale);

    let dense_ms = median_ms(runs, || {
        dense_grw_stein_matrix(score, &x, lambda, &pairs).unwrap();
    });
    let fast_ms = median_ms(runs, || {
        fast_grw_stein_matrix(score, &x, lambda, &pairs).unwrap();
    });
    assert!(2.0 * fast_ms <= dense_ms, "n={n} B={b}: fast {fast_ms:.1} ms, dense {dense_ms:.1} ms");
}

#[test]
fn rank2_path_beats_dense_inversion() {
    compare(12, 40, 5);
}

#[test]
#[ignore = "dense reference takes minutes per run at this size"]
fn rank2_path_beats_dense_inversion_full_size() {
    compare(20, 200, 20);
}
