//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line straight to
//! stdout (bypassing capture) and then asserts. Tests share a lock so heavy
//! simulations never overlap the timing measurements.

use std::collections::HashMap;
use std::io::Write;
use std::sync::{Mutex, OnceLock};
use std::time::Instant;

use graphkss::ergm::ErgmModel;
use graphkss::experiments::{cmd_assess_samples, runtime_row, ConfigFile, RunOptions};
use graphkss::generators::{barabasi_albert, GeneratorSpec, Topology};
use graphkss::graph::{write_graph, Graph, PairIndex, SummaryStatisticKind};
use graphkss::kernels::{
    class_count, gram_matrix, graphlet_features, is_connected_class, kernel_eval, KernelSpec, GRAPHLETS_4,
};
use graphkss::linalg::InverseState;
use graphkss::mctest::{rejection_rate, run_test, NullModel, TestConfig};
use graphkss::stein::{kss_squared, ConditionalEstimator, PairSelection, ScoreSource, SteinConvention};
use graphkss::Error;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(id: u32, name: &str, ok: bool, detail: String) {
    let line = format!("{} criterion {id:>2} {name}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                g.set_edge(i, j, true).unwrap();
            }
        }
    }
    g
}

fn edge_mask(x: &Graph) -> usize {
    (0..x.pair_count())
        .filter(|&s| x.has_pair(PairIndex(s)).unwrap())
        .fold(0, |m, s| m | 1 << s)
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

fn is_connected(x: &Graph) -> bool {
    let n = x.n();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for u in 0..n {
            if x.has_edge(v, u) && !seen[u] {
                seen[u] = true;
                stack.push(u);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[test]
fn c01_stein_identity_exact() {
    let _g = serial();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for (b1, b2) in [(-2.0, 0.0), (1.0, 0.2), (0.5, -0.3)] {
        let model = ErgmModel::e2s(b1, b2, 4).unwrap();
        let dist = model.enumerate_distribution().unwrap();
        assert_eq!(dist.len(), 64);
        let total: f64 = dist.iter().map(|(_, p)| p).sum();
        for _ in 0..10 {
            let f: Vec<f64> = (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let fx = |g: &Graph| f[edge_mask(g)];
            let mut expectation = 0.0;
            for (x, p) in &dist {
                let pairs = x.pair_count();
                let mut op = 0.0;
                for s in 0..pairs {
                    let s = PairIndex(s);
                    let q1 = model.conditional_edge_prob(x, s).unwrap();
                    let on = x.with_pair(s, true).unwrap();
                    let off = x.with_pair(s, false).unwrap();
                    op += q1 * fx(&on) + (1.0 - q1) * fx(&off) - fx(x);
                }
                expectation += p / total * op / pairs as f64;
            }
            worst = worst.max(expectation.abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "stein identity",
        worst <= 1e-10 && secs < 5.0,
        format!("max |E[A f]| = {worst:.2e} over 30 functions, {secs:.2} s"),
    );
}

fn symmetric_toggle(b: &DMatrix<f64>, i: usize, j: usize, mu: f64) -> DMatrix<f64> {
    let mut m = b.clone();
    m[(i, j)] += mu;
    m[(j, i)] += mu;
    m
}

#[test]
fn c02_rank2_update() {
    let _g = serial();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_entry = 0.0f64;
    let mut worst_sum = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(2..=40);
        let mut b: DMatrix<f64> = DMatrix::zeros(n, n);
        for p in 0..n {
            for q in p + 1..n {
                let v = rng.gen_range(-1.0..1.0);
                b[(p, q)] = v;
                b[(q, p)] = v;
            }
        }
        for p in 0..n {
            let off: f64 = (0..n).filter(|&q| q != p).map(|q| b[(p, q)].abs()).sum();
            b[(p, p)] = off + 2.0 + rng.gen::<f64>();
        }
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let mu = rng.gen_range(-1.0..1.0);
        let state = InverseState::invert(&b).unwrap();
        let updated = state.rank2_update(i, j, mu).unwrap();
        let direct = symmetric_toggle(&b, i, j, mu).try_inverse().unwrap();
        worst_entry = worst_entry.max((updated.inverse() - &direct).abs().max());
        let sum = state.toggled_grw_sum(i, j, mu).unwrap();
        worst_sum = worst_sum.max((sum - direct.sum()).abs());
    }
    let b = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 2.0]);
    let state = InverseState::invert(&b).unwrap();
    let refused = matches!(state.rank2_update(0, 1, 1.0), Err(Error::SingularUpdate { .. }));
    let direct_ok = symmetric_toggle(&b, 0, 1, 1.0).try_inverse().is_some();
    let secs = start.elapsed().as_secs_f64();
    report(
        2,
        "rank-2 update",
        worst_entry <= 1e-8 && worst_sum <= 1e-8 && refused && direct_ok && secs < 30.0,
        format!(
            "entry err {worst_entry:.1e}, sum err {worst_sum:.1e}, counterexample refused={refused} invertible={direct_ok}, {secs:.2} s"
        ),
    );
}

fn grw_series(x: &Graph, y: &Graph, lambda: f64, terms: usize) -> f64 {
    let (n, m) = (x.n(), y.n());
    let dim = n * m;
    let mut w = DMatrix::<f64>::zeros(dim, dim);
    for a in 0..n {
        for b in 0..n {
            if !x.has_edge(a, b) {
                continue;
            }
            for c in 0..m {
                for d in 0..m {
                    if y.has_edge(c, d) {
                        w[(a * m + c, b * m + d)] = 1.0;
                    }
                }
            }
        }
    }
    let mut v = nalgebra::DVector::from_element(dim, 1.0);
    let mut total = 0.0;
    let mut scale = 1.0;
    for _ in 0..terms {
        total += scale * v.sum();
        v = &w * v;
        scale *= lambda;
    }
    total
}

fn bfs_histogram(x: &Graph) -> HashMap<usize, u64> {
    let n = x.n();
    let mut hist = HashMap::new();
    for src in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[src] = 0;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for u in 0..n {
                if x.has_edge(v, u) && dist[u] == usize::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        for (t, &d) in dist.iter().enumerate() {
            if t != src && d != usize::MAX {
                *hist.entry(d).or_insert(0) += 1;
            }
        }
    }
    hist
}

fn brute_force_sp(x: &Graph, y: &Graph) -> f64 {
    let hx = bfs_histogram(x);
    let hy = bfs_histogram(y);
    hx.iter().map(|(d, c)| (c * hy.get(d).copied().unwrap_or(0)) as f64).sum()
}

/// Smallest edge bitmask over all relabellings of an induced subgraph.
fn canonical_mask(x: &Graph, vertices: &[usize]) -> u32 {
    let k = vertices.len();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = u32::MAX;
    loop {
        let mut mask = 0u32;
        let mut bit = 0;
        for a in 0..k {
            for b in a + 1..k {
                if x.has_edge(vertices[perm[a]], vertices[perm[b]]) {
                    mask |= 1 << bit;
                }
                bit += 1;
            }
        }
        best = best.min(mask);
        // next lexicographic permutation
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
            break;
        };
        let j = (i + 1..k).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
    best
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for last in k - 1..n {
        for mut s in subsets(last, k - 1) {
            s.push(last);
            out.push(s);
        }
    }
    out
}

/// Representative edge lists for the named 4-vertex classes.
fn representative_4(name: &str) -> Vec<(usize, usize)> {
    match name {
        "empty" => vec![],
        "one-edge" => vec![(0, 1)],
        "two-disjoint-edges" => vec![(0, 1), (2, 3)],
        "two-path+isolated" => vec![(0, 1), (1, 2)],
        "triangle+isolated" => vec![(0, 1), (1, 2), (0, 2)],
        "star" => vec![(0, 1), (0, 2), (0, 3)],
        "path" => vec![(0, 1), (1, 2), (2, 3)],
        "four-cycle" => vec![(0, 1), (1, 2), (2, 3), (0, 3)],
        "paw" => vec![(0, 1), (1, 2), (0, 2), (2, 3)],
        "diamond" => vec![(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)],
        "complete" => vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        other => panic!("unknown class {other}"),
    }
}

fn brute_force_graphlets(x: &Graph, size: usize, class_of: &HashMap<u32, usize>) -> Vec<u64> {
    let mut counts = vec![0u64; class_of.len()];
    for s in subsets(x.n(), size) {
        counts[class_of[&canonical_mask(x, &s)]] += 1;
    }
    counts
}

#[test]
fn c03_kernel_oracles() {
    let _g = serial();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut failures = Vec::new();

    let graphs: Vec<Graph> = (0..10).map(|_| random_graph(10, 0.3, &mut rng)).collect();
    let specs = ["const", "gveh:1", "krw:3", "grw:0.01", "sp", "wl:1", "wl:3", "glet:3", "glet:4", "conglet:4"];
    let mut worst_ratio = f64::NEG_INFINITY;
    for text in specs {
        let spec: KernelSpec = text.parse().unwrap();
        let gram = gram_matrix(&spec, &graphs).unwrap();
        let asym = (&gram - gram.transpose()).abs().max();
        let eig = gram.clone().symmetric_eigen().eigenvalues;
        let (lo, hi) = (eig.min(), eig.max());
        worst_ratio = worst_ratio.max(-lo / hi.max(1e-300));
        if asym > 1e-9 * hi.abs().max(1.0) || lo < -1e-8 * hi {
            failures.push(format!("{text} not symmetric PSD (min {lo:e}, max {hi:e})"));
        }
    }

    let mut grw_err = 0.0f64;
    for _ in 0..20 {
        let x = random_graph(6, 0.5, &mut rng);
        let y = random_graph(6, 0.5, &mut rng);
        let lambda = 0.02;
        let value = kernel_eval(&KernelSpec::grw(lambda).unwrap(), &x, &y).unwrap();
        grw_err = grw_err.max((value - grw_series(&x, &y, lambda, 60)).abs());
    }
    if grw_err > 1e-6 {
        failures.push(format!("grw series error {grw_err:e}"));
    }

    let mut sp_err = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(2..=6);
        let x = random_graph(n, 0.4, &mut rng);
        let y = random_graph(n, 0.4, &mut rng);
        let value = kernel_eval(&KernelSpec::ShortestPath, &x, &y).unwrap();
        sp_err = sp_err.max((value - brute_force_sp(&x, &y)).abs());
    }
    if sp_err > 0.0 {
        failures.push(format!("sp mismatch {sp_err}"));
    }

    let mut class_of_4 = HashMap::new();
    for (idx, name) in GRAPHLETS_4.iter().enumerate() {
        let rep = Graph::from_edges(4, representative_4(name)).unwrap();
        class_of_4.insert(canonical_mask(&rep, &[0, 1, 2, 3]), idx);
    }
    let mut class_of_3 = HashMap::new();
    for edges in 0..4usize {
        let all = [(0, 1), (1, 2), (0, 2)];
        let rep = Graph::from_edges(3, all[..edges].to_vec()).unwrap();
        class_of_3.insert(canonical_mask(&rep, &[0, 1, 2]), edges);
    }
    let distinct_4 = class_of_4.len();
    let connected_4 = (0..class_count(4)).filter(|&c| is_connected_class(4, c)).count();
    let connected_reps = GRAPHLETS_4
        .iter()
        .filter(|name| is_connected(&Graph::from_edges(4, representative_4(name)).unwrap()))
        .count();
    let mut graphlet_mismatch = 0;
    for _ in 0..50 {
        let p = rng.gen_range(0.1..0.9);
        let x = random_graph(8, p, &mut rng);
        for (size, class_of) in [(3, &class_of_3), (4, &class_of_4)] {
            let feats = graphlet_features(&x, size, false).unwrap();
            if feats.iter().sum::<u64>() != binomial(8, size) || feats != brute_force_graphlets(&x, size, class_of) {
                graphlet_mismatch += 1;
            }
        }
    }
    if graphlet_mismatch > 0 {
        failures.push(format!("{graphlet_mismatch} graphlet count mismatches"));
    }
    if class_count(4) != 11 || distinct_4 != 11 || connected_4 != 6 || connected_reps != 6 {
        failures.push(format!(
            "class counts: table {} distinct {distinct_4} connected {connected_4}/{connected_reps}",
            class_count(4)
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 120.0 {
        failures.push(format!("took {secs:.1} s"));
    }
    report(
        3,
        "kernel oracles",
        failures.is_empty(),
        if failures.is_empty() {
            format!(
                "{} kernels PSD (worst -min/max {worst_ratio:.1e}), grw err {grw_err:.1e}, sp exact, graphlets exact, 11 classes / 6 connected, {secs:.2} s",
                specs.len()
            )
        } else {
            failures.join("; ")
        },
    );
}

const POWER_KERNELS: [&str; 4] = ["const", "wl:1", "wl:3", "glet:3"];
const POWER_GRID: [f64; 3] = [-0.5, 0.0, 0.5];

/// Rejection rates `[kernel][beta2]` for the E2S null `(-2, 0)`, shared by
/// the calibration and power criteria.
fn e2s_rates() -> &'static Vec<Vec<f64>> {
    static RATES: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    RATES.get_or_init(|| {
        let null = ErgmModel::e2s(-2.0, 0.0, 20).unwrap();
        POWER_KERNELS
            .iter()
            .enumerate()
            .map(|(k, text)| {
                let cfg = TestConfig::new(NullModel::Ergm(null.clone()), text.parse().unwrap());
                POWER_GRID
                    .iter()
                    .enumerate()
                    .map(|(g, &b2)| {
                        let alt = GeneratorSpec::Ergm(ErgmModel::e2s(-2.0, b2, 20).unwrap());
                        rejection_rate(&alt, &cfg, 100, 1000 * (k as u64 * 10 + g as u64)).unwrap().rate
                    })
                    .collect()
            })
            .collect()
    })
}

#[test]
fn c04_type_one_calibration() {
    let _g = serial();
    let start = Instant::now();
    let rates = e2s_rates();
    let null_col = POWER_GRID.iter().position(|&b| b == 0.0).unwrap();
    let summary: Vec<String> = POWER_KERNELS
        .iter()
        .zip(rates)
        .map(|(k, r)| format!("{k}={:.2}", r[null_col]))
        .collect();
    let ok = rates.iter().all(|r| (0.013..=0.115).contains(&r[null_col]));
    report(
        4,
        "type-I calibration",
        ok,
        format!("{} in [0.013, 0.115], {:.1} s", summary.join(" "), start.elapsed().as_secs_f64()),
    );
}

#[test]
fn c05_power_monotonicity() {
    let _g = serial();
    let rates = e2s_rates();
    let null_col = POWER_GRID.iter().position(|&b| b == 0.0).unwrap();
    let wl1 = &rates[POWER_KERNELS.iter().position(|&k| k == "wl:1").unwrap()];
    let lift_ok = POWER_GRID
        .iter()
        .enumerate()
        .filter(|(_, b)| (b.abs() - 0.5).abs() < 1e-12)
        .all(|(g, _)| wl1[g] >= wl1[null_col] + 0.15);
    let minimal_ok = rates.iter().all(|r| r.iter().all(|&v| v >= r[null_col]));
    let table: Vec<String> = POWER_KERNELS
        .iter()
        .zip(rates)
        .map(|(k, r)| format!("{k}=[{}]", r.iter().map(|v| format!("{v:.2}")).collect::<Vec<_>>().join(",")))
        .collect();
    report(
        5,
        "power monotonicity",
        lift_ok && minimal_ok,
        format!("beta2 {POWER_GRID:?}: {}", table.join(" ")),
    );
}

#[test]
fn c06_constant_kernel_conventions() {
    let _g = serial();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut literal_nonzero = 0;
    let mut flip_err = 0.0f64;
    for t in 0..100u64 {
        let n = rng.gen_range(3..=12);
        let model = ErgmModel::e2s(rng.gen_range(-2.0..1.0), rng.gen_range(-0.3..0.3), n).unwrap();
        let x = model.sample(t);
        let selection = if t % 2 == 0 {
            PairSelection::All
        } else {
            PairSelection::Resample { size: 25, seed: t }
        };
        let score = ScoreSource::Exact(&model);
        let lit = kss_squared(score, &x, &KernelSpec::Constant, SteinConvention::Literal, selection).unwrap();
        if lit != 0.0 {
            literal_nonzero += 1;
        }
        if selection == PairSelection::All {
            let flip = kss_squared(score, &x, &KernelSpec::Constant, SteinConvention::FlipFeature, selection).unwrap();
            let residual: f64 = (0..x.pair_count())
                .map(|s| {
                    let s = PairIndex(s);
                    model.conditional_edge_prob(&x, s).unwrap() - x.has_pair(s).unwrap() as u8 as f64
                })
                .sum::<f64>()
                / x.pair_count() as f64;
            flip_err = flip_err.max((flip - residual * residual).abs());
        }
    }
    let null = ErgmModel::e2s(-2.0, 0.0, 12).unwrap();
    let cfg = TestConfig {
        convention: SteinConvention::Literal,
        simulations: 50,
        ..TestConfig::new(NullModel::Ergm(null), KernelSpec::Constant)
    };
    let complete = Graph::complete(12);
    let outcomes: Vec<bool> = (0..5u64)
        .map(|seed| {
            let x = if seed == 0 { complete.clone() } else { ErgmModel::e2s(1.0, 0.0, 12).unwrap().sample(seed) };
            run_test(&x, &TestConfig { seed, ..cfg.clone() }).unwrap().reject
        })
        .collect();
    let never = outcomes.iter().all(|r| !r);
    report(
        6,
        "constant kernel conventions",
        literal_nonzero == 0 && never && flip_err <= 1e-12,
        format!("literal nonzero {literal_nonzero}/100, literal rejections {}/5, flip err {flip_err:.1e}", outcomes.iter().filter(|r| **r).count()),
    );
}

#[test]
fn c07_agrasst_consistency() {
    let _g = serial();
    let n = 10;
    let model = ErgmModel::edge_only(-1.0, n).unwrap();
    let gen = GeneratorSpec::Ergm(model.clone());
    let inputs: Vec<Graph> = (0..50u64).map(|t| model.sample(10_000 + t)).collect();
    let spec = KernelSpec::wl(1);
    let mut medians = Vec::new();
    for (k, count) in [50usize, 500, 5000].into_iter().enumerate() {
        // a separate fit per input, so the median reflects typical estimation error
        let mut diffs: Vec<f64> = inputs
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let samples = gen.sample_many(count, 7 + i as u64, 40 + k as u64).unwrap();
                let est = ConditionalEstimator::fit(SummaryStatisticKind::Density, &samples).unwrap();
                let sel = PairSelection::Resample { size: 30, seed: i as u64 };
                let a = kss_squared(ScoreSource::Estimated(&est), x, &spec, SteinConvention::FlipFeature, sel).unwrap();
                let e = kss_squared(ScoreSource::Exact(&model), x, &spec, SteinConvention::FlipFeature, sel).unwrap();
                (a - e).abs()
            })
            .collect();
        diffs.sort_by(f64::total_cmp);
        medians.push(0.5 * (diffs[24] + diffs[25]));
    }
    let ok = medians.windows(2).all(|w| w[1] < w[0]);
    report(
        7,
        "agrasst consistency",
        ok,
        format!(
            "median |agrasst - kss| at 50/500/5000 samples: {:.3e} / {:.3e} / {:.3e}",
            medians[0], medians[1], medians[2]
        ),
    );
}

#[test]
fn c08_grg_torus_dip() {
    let _g = serial();
    let grg = |r| GeneratorSpec::Grg { n: 20, r, topology: Topology::Torus };
    let cfg = TestConfig::new(
        NullModel::Generator {
            generator: grg(0.3),
            kind: SummaryStatisticKind::Bidegree,
            fit_samples: 100,
        },
        KernelSpec::Constant,
    );
    let rates: Vec<f64> = [0.30, 0.45, 0.60]
        .iter()
        .map(|&r| rejection_rate(&grg(r), &cfg, 100, 8000).unwrap().rate)
        .collect();
    report(
        8,
        "grg torus dip",
        rates[1] < rates[2],
        format!("const rates at r=0.30/0.45/0.60: {:.2}/{:.2}/{:.2}", rates[0], rates[1], rates[2]),
    );
}

#[test]
fn c09_barabasi_albert_structure() {
    let _g = serial();
    let n = 30;
    let mut tree_failures = 0;
    let mut m2_failures = 0;
    for seed in 0..500u64 {
        let g = barabasi_albert(n, 1, 1.0, seed).unwrap();
        if g.edge_count() != n - 1 || !is_connected(&g) {
            tree_failures += 1;
        }
        let g2 = barabasi_albert(n, 2, 1.0, seed).unwrap();
        if g2.edge_count() != 1 + 2 * (n - 2) {
            m2_failures += 1;
        }
    }
    report(
        9,
        "barabasi-albert structure",
        tree_failures == 0 && m2_failures == 0,
        format!("n={n}, 500 seeds: non-trees {tree_failures}, m=2 edge-count misses {m2_failures}"),
    );
}

#[test]
fn c10_runtime_ordering() {
    let _g = serial();
    let row = |text: &str| {
        let spec: KernelSpec = text.parse().unwrap();
        runtime_row(&spec, "dense", 20, 10, 9, 200, 10).unwrap().avg_ms
    };
    let (c, w, s) = (row("const"), row("wl:1"), row("sp"));
    report(
        10,
        "runtime ordering",
        c < w && w < s && s >= 100.0 * c,
        format!("dense n=20 avg ms: const {c:.3}, wl1 {w:.3}, sp {s:.3} (sp/const = {:.0}x)", s / c),
    );
}

/// Writes `samples` once, then assesses each observed graph against them;
/// returns the rejection count of every assessment and the row count.
fn assess_rejections(dir: &std::path::Path, observed: &[Graph], samples: &[Graph], kernels: &str) -> (Vec<usize>, usize) {
    let sample_dir = dir.join("samples");
    std::fs::create_dir_all(&sample_dir).unwrap();
    for (i, g) in samples.iter().enumerate() {
        write_graph(g, sample_dir.join(format!("g{i:04}.txt"))).unwrap();
    }
    let text = format!(
        "experiment = assess-samples\n[assess]\nobserved = observed.txt\nsamples = samples\nstatistics = [density, bidegree, common-neighbours]\n[test]\nkernels = {kernels}\nb = 200\n"
    );
    let config_path = dir.join("assess.conf");
    std::fs::write(&config_path, text).unwrap();
    let mut rows = 0;
    let counts = observed
        .iter()
        .enumerate()
        .map(|(k, x)| {
            write_graph(x, dir.join("observed.txt")).unwrap();
            let cfg = ConfigFile::load(&config_path).unwrap();
            let opts = RunOptions {
                out: dir.join("assess.csv"),
                seed: 11 + k as u64,
                workers: 1,
            };
            let result = cmd_assess_samples(&cfg, &opts).unwrap();
            rows = result.len();
            result.iter().filter(|r| r.reject).count()
        })
        .collect();
    (counts, rows)
}

#[test]
fn c11_assess_samples_calibration() {
    let _g = serial();
    let tmp = tempfile::tempdir().unwrap();
    let kernels = "[const, wl:1, wl:3, glet:3, conglet:4, sp, gveh:1]";

    let same = GeneratorSpec::Grg { n: 20, r: 0.3, topology: Topology::Torus };
    let samples = same.sample_many(100, 21, 1).unwrap();
    let observed = same.sample_many(60, 21, 2).unwrap();
    let (same_counts, rows_same) = assess_rejections(&tmp.path().join("same"), &observed, &samples, kernels);
    let draws = same_counts.len() as f64;
    let mean = same_counts.iter().sum::<usize>() as f64 / draws;
    let var = same_counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / (draws - 1.0);
    let se = (var / draws).sqrt();
    let mut sorted = same_counts.clone();
    sorted.sort_unstable();
    let median = sorted[sorted.len() / 2];

    let sparse = GeneratorSpec::Ergm(ErgmModel::e2s(-2.0, 0.0, 20).unwrap());
    let samples = sparse.sample_many(100, 22, 1).unwrap();
    let density_kernels = "[const, wl:1, glet:3, gveh:1]";
    let (mis, rows_mis) = assess_rejections(&tmp.path().join("mismatch"), &[Graph::complete(20)], &samples, density_kernels);

    report(
        11,
        "assess-samples calibration",
        mean <= 1.0 + 2.0 * se && mis[0] == rows_mis,
        format!(
            "same generator: {rows_same} rows x {} observed graphs, rejections per assessment {same_counts:?} (mean {mean:.2} +- {se:.2}, median {median}), expected at most 1; complete vs sparse rejects {}/{rows_mis}",
            same_counts.len(),
            mis[0]
        ),
    );
}
