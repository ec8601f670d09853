//! Stein operator, Stein kernel and the kernel Stein statistics for graphs.
//!
//! For a vertex pair `s` the Stein operator reduces to
//! `A^(s) f(x) = c_s (f(x^(s,1)) - f(x^(s,0)))` with `c_s = q1(x, s) - x_s`,
//! where `q1` is the conditional probability that `s` carries an edge. The
//! statistics are `(1/B^2) sum_{b,b'} h(s_b, s_b')` over the selected pairs.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ergm::ErgmModel;
use crate::error::{Error, Result};
use crate::graph::{Graph, PairIndex, StatValue, SummaryStatisticKind};
use crate::kernels::{Embedding, KernelSpec, SignedTerm};
use crate::linalg::InverseState;

/// How the Stein kernel combines the flipped graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SteinConvention {
    /// `h(s, s') = c_s c_s' k(x^{flip s}, x^{flip s'})`.
    #[default]
    FlipFeature,
    /// The four-term expansion of `<A^(s) k(x, .), A^(s') k(x, .)>`, which
    /// vanishes identically for a constant kernel.
    Literal,
}

impl fmt::Display for SteinConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SteinConvention::FlipFeature => "flip",
            SteinConvention::Literal => "literal",
        })
    }
}

impl FromStr for SteinConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<SteinConvention> {
        match s.trim().to_ascii_lowercase().as_str() {
            "flip" | "flip-feature" | "flipfeature" => Ok(SteinConvention::FlipFeature),
            "literal" => Ok(SteinConvention::Literal),
            other => Err(Error::InvalidArgument(format!("unknown Stein convention `{other}`"))),
        }
    }
}

/// Which vertex pairs enter the statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSelection {
    /// Every pair once.
    All,
    /// `size` pairs drawn uniformly with replacement.
    Resample { size: usize, seed: u64 },
}

pub fn select_pairs(pair_count: usize, selection: PairSelection) -> Result<Vec<PairIndex>> {
    if pair_count == 0 {
        return Err(Error::InvalidArgument("graph has no vertex pairs".into()));
    }
    match selection {
        PairSelection::All => Ok((0..pair_count).map(PairIndex).collect()),
        PairSelection::Resample { size, seed } => {
            if size == 0 {
                return Err(Error::InvalidArgument("resample size must be at least 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..size).map(|_| PairIndex(rng.gen_range(0..pair_count))).collect())
        }
    }
}

/// Present and total observation counts of one estimator bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BinCount {
    pub present: u64,
    pub total: u64,
}

/// Edge probabilities estimated by relative frequencies, binned by a summary
/// statistic of the vertex pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalEstimator {
    kind: SummaryStatisticKind,
    table: BTreeMap<StatValue, BinCount>,
    fallback_prob: f64,
    n: Option<usize>,
}

impl ConditionalEstimator {
    /// Counts, for every sample and pair, the pair's statistic value together
    /// with whether the pair is an edge.
    pub fn fit(kind: SummaryStatisticKind, samples: &[Graph]) -> Result<ConditionalEstimator> {
        let first = samples
            .first()
            .ok_or_else(|| Error::InvalidArgument("cannot fit an estimator on zero samples".into()))?;
        let n = first.n();
        if let Some(bad) = samples.iter().find(|g| g.n() != n) {
            return Err(Error::IncompatibleGraphs(format!(
                "estimator samples have {} and {} vertices",
                n,
                bad.n()
            )));
        }
        let mut table: BTreeMap<StatValue, BinCount> = BTreeMap::new();
        for z in samples {
            for i in 0..n {
                for j in i + 1..n {
                    let bin = table.entry(z.summary_statistic_at(i, j, kind)).or_default();
                    bin.total += 1;
                    bin.present += z.has_edge(i, j) as u64;
                }
            }
        }
        let mut est = ConditionalEstimator::from_table(kind, table)?;
        est.n = Some(n);
        Ok(est)
    }

    /// Builds an estimator from explicit bin counts. The fallback for unseen
    /// bins is the pooled edge frequency over all bins.
    pub fn from_table(kind: SummaryStatisticKind, table: BTreeMap<StatValue, BinCount>) -> Result<ConditionalEstimator> {
        if table.is_empty() {
            return Err(Error::InvalidArgument("estimator table is empty".into()));
        }
        let (mut present, mut total) = (0u64, 0u64);
        for (value, bin) in &table {
            if bin.total == 0 || bin.present > bin.total {
                return Err(Error::InvalidArgument(format!(
                    "bin {value} has present={} total={}",
                    bin.present, bin.total
                )));
            }
            present += bin.present;
            total += bin.total;
        }
        Ok(ConditionalEstimator {
            kind,
            table,
            fallback_prob: present as f64 / total as f64,
            n: None,
        })
    }

    /// The estimator refitted without one of its fitting samples, by
    /// subtracting that sample's counts. `z` must have been part of the fit.
    pub fn without_sample(&self, z: &Graph) -> Result<ConditionalEstimator> {
        let n = z.n();
        if self.n.is_some_and(|m| m != n) {
            return Err(Error::IncompatibleGraphs(format!(
                "estimator fitted on {} vertices, sample has {n}",
                self.n.unwrap_or(0)
            )));
        }
        let mut table = self.table.clone();
        for i in 0..n {
            for j in i + 1..n {
                let value = z.summary_statistic_at(i, j, self.kind);
                let bin = table
                    .get_mut(&value)
                    .filter(|b| b.total > 0)
                    .ok_or_else(|| Error::InvalidArgument(format!("sample bin {value} not in the fitted table")))?;
                bin.total -= 1;
                bin.present = bin
                    .present
                    .checked_sub(z.has_edge(i, j) as u64)
                    .ok_or_else(|| Error::InvalidArgument(format!("sample edge count exceeds bin {value}")))?;
            }
        }
        table.retain(|_, b| b.total > 0);
        let mut est = ConditionalEstimator::from_table(self.kind, table)?;
        est.n = self.n;
        Ok(est)
    }

    pub fn kind(&self) -> SummaryStatisticKind {
        self.kind
    }

    pub fn table(&self) -> &BTreeMap<StatValue, BinCount> {
        &self.table
    }

    /// Global edge frequency, used for bins never seen during fitting.
    pub fn fallback_prob(&self) -> f64 {
        self.fallback_prob
    }

    /// Vertex count of the fitting samples, when known.
    pub fn vertex_count(&self) -> Option<usize> {
        self.n
    }

    pub fn probability(&self, value: &StatValue) -> f64 {
        match self.table.get(value) {
            Some(bin) => bin.present as f64 / bin.total as f64,
            None => self.fallback_prob,
        }
    }

    /// Estimated `q(x^(s,1) | t(x, s))`.
    pub fn q1(&self, x: &Graph, s: PairIndex) -> Result<f64> {
        let value = x.summary_statistic(s, self.kind)?;
        Ok(self.probability(&value))
    }

    /// Writes `stat_value,present,total` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(["stat_value", "present", "total"])?;
        for (value, bin) in &self.table {
            writer.write_record([value.to_string(), bin.present.to_string(), bin.total.to_string()])?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(kind: SummaryStatisticKind, input: R) -> Result<ConditionalEstimator> {
        let mut reader = csv::Reader::from_reader(input);
        let mut table = BTreeMap::new();
        for (row, record) in reader.records().enumerate() {
            let record = record?;
            let line = row + 2;
            let parse_err = |message: String| Error::Parse { line, message };
            if record.len() != 3 {
                return Err(parse_err(format!("expected 3 fields, found {}", record.len())));
            }
            let value = StatValue::parse(kind, &record[0]).map_err(|e| parse_err(e.to_string()))?;
            let count = |k: usize| {
                record[k]
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| parse_err(format!("bad count `{}`", &record[k])))
            };
            let bin = BinCount {
                present: count(1)?,
                total: count(2)?,
            };
            if table.insert(value, bin).is_some() {
                return Err(parse_err(format!("duplicate bin {value}")));
            }
        }
        ConditionalEstimator::from_table(kind, table)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn load(kind: SummaryStatisticKind, path: impl AsRef<Path>) -> Result<ConditionalEstimator> {
        ConditionalEstimator::read_csv(kind, std::fs::File::open(path)?)
    }
}

/// Where the conditional edge probabilities come from.
#[derive(Debug, Clone, Copy)]
pub enum ScoreSource<'a> {
    Exact(&'a ErgmModel),
    Estimated(&'a ConditionalEstimator),
}

impl ScoreSource<'_> {
    fn check(&self, x: &Graph) -> Result<()> {
        let n = match self {
            ScoreSource::Exact(model) => Some(model.n()),
            ScoreSource::Estimated(est) => est.vertex_count(),
        };
        match n {
            Some(n) if n != x.n() => Err(Error::IncompatibleGraphs(format!(
                "score source expects {n} vertices, graph has {}",
                x.n()
            ))),
            _ => Ok(()),
        }
    }

    fn q1_at(&self, x: &Graph, i: usize, j: usize) -> f64 {
        match self {
            ScoreSource::Exact(model) => model.conditional_edge_prob_at(x, i, j),
            ScoreSource::Estimated(est) => est.probability(&x.summary_statistic_at(i, j, est.kind())),
        }
    }

    pub fn q1(&self, x: &Graph, s: PairIndex) -> Result<f64> {
        self.check(x)?;
        let (i, j) = x.pair_unindex(s)?;
        Ok(self.q1_at(x, i, j))
    }
}

/// `c_s = q1(x, s) - x_s`.
pub fn stein_coefficient(score: ScoreSource<'_>, x: &Graph, s: PairIndex) -> Result<f64> {
    let q1 = score.q1(x, s)?;
    Ok(q1 - x.has_pair(s)? as u8 as f64)
}

/// Explicit Stein kernel matrix over a list of (possibly repeated) pairs.
#[derive(Debug, Clone)]
pub struct SteinKernelMatrix {
    pub h: DMatrix<f64>,
    pub pairs: Vec<PairIndex>,
}

impl SteinKernelMatrix {
    /// `(1/B^2) sum H`.
    pub fn statistic(&self) -> f64 {
        let b = self.pairs.len() as f64;
        self.h.sum() / (b * b)
    }
}

/// Distinct pairs in ascending order, their multiplicities and Stein
/// coefficients, and the position of every input pair in that list.
struct PairSummary {
    distinct: Vec<PairIndex>,
    multiplicity: Vec<usize>,
    coefficient: Vec<f64>,
    present: Vec<bool>,
    position: Vec<usize>,
}

fn summarize_pairs(score: ScoreSource<'_>, x: &Graph, pairs: &[PairIndex]) -> Result<PairSummary> {
    score.check(x)?;
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("pair list is empty".into()));
    }
    let mut distinct: Vec<PairIndex> = pairs.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut multiplicity = vec![0usize; distinct.len()];
    let mut position = Vec::with_capacity(pairs.len());
    for s in pairs {
        let k = distinct.binary_search(s).expect("pair is in the distinct list");
        multiplicity[k] += 1;
        position.push(k);
    }
    let mut coefficient = Vec::with_capacity(distinct.len());
    let mut present = Vec::with_capacity(distinct.len());
    for &s in &distinct {
        let (i, j) = x.pair_unindex(s)?;
        let xs = x.has_edge(i, j);
        coefficient.push(score.q1_at(x, i, j) - xs as u8 as f64);
        present.push(xs);
    }
    Ok(PairSummary {
        distinct,
        multiplicity,
        coefficient,
        present,
        position,
    })
}

/// Embedding indices of `x^(s,1)` and `x^(s,0)` for distinct pair `k`; the
/// base graph sits at 0 and the flip of pair `k` at `k + 1`.
fn forced_indices(present: bool, k: usize) -> (usize, usize) {
    if present {
        (0, k + 1)
    } else {
        (k + 1, 0)
    }
}

/// Explicit `B x B` Stein kernel matrix. Kernel values come from one Gram
/// matrix over `x` and its distinct flips.
pub fn stein_kernel_matrix(
    score: ScoreSource<'_>,
    x: &Graph,
    pairs: &[PairIndex],
    spec: &KernelSpec,
    convention: SteinConvention,
) -> Result<SteinKernelMatrix> {
    let summary = summarize_pairs(score, x, pairs)?;
    let gram = Embedding::flip_family(spec, x, &summary.distinct)?.gram();
    let b = pairs.len();
    let h = DMatrix::from_fn(b, b, |p, q| {
        let (k, l) = (summary.position[p], summary.position[q]);
        let c = summary.coefficient[k] * summary.coefficient[l];
        match convention {
            SteinConvention::FlipFeature => c * gram[(k + 1, l + 1)],
            SteinConvention::Literal => {
                let (k1, k0) = forced_indices(summary.present[k], k);
                let (l1, l0) = forced_indices(summary.present[l], l);
                c * (gram[(k1, l1)] - gram[(k1, l0)] - gram[(k0, l1)] + gram[(k0, l0)])
            }
        }
    });
    Ok(SteinKernelMatrix {
        h,
        pairs: pairs.to_vec(),
    })
}

/// Statistic over an explicit pair list, computed as an RKHS norm without
/// forming the `B x B` matrix.
pub fn stein_statistic(
    score: ScoreSource<'_>,
    x: &Graph,
    pairs: &[PairIndex],
    spec: &KernelSpec,
    convention: SteinConvention,
) -> Result<f64> {
    let summary = summarize_pairs(score, x, pairs)?;
    let embedding = Embedding::flip_family(spec, x, &summary.distinct)?;
    let terms: Vec<SignedTerm> = (0..summary.distinct.len())
        .filter(|&k| summary.coefficient[k] != 0.0)
        .map(|k| {
            let weight = summary.coefficient[k] * summary.multiplicity[k] as f64;
            match convention {
                SteinConvention::FlipFeature => SignedTerm {
                    weight,
                    plus: k + 1,
                    minus: None,
                },
                SteinConvention::Literal => {
                    let (plus, minus) = forced_indices(summary.present[k], k);
                    SignedTerm {
                        weight,
                        plus,
                        minus: Some(minus),
                    }
                }
            }
        })
        .collect();
    let b = pairs.len() as f64;
    Ok(embedding.quadratic_form(&terms) / (b * b))
}

/// gKSS (exact score) or AgraSSt (estimated score) statistic.
pub fn kss_squared(
    score: ScoreSource<'_>,
    x: &Graph,
    spec: &KernelSpec,
    convention: SteinConvention,
    selection: PairSelection,
) -> Result<f64> {
    let pairs = select_pairs(x.pair_count(), selection)?;
    stein_statistic(score, x, &pairs, spec, convention)
}

/// AgraSSt: the kernel Stein statistic with estimated conditionals.
pub fn agrasst_squared(
    estimator: &ConditionalEstimator,
    x: &Graph,
    spec: &KernelSpec,
    convention: SteinConvention,
    selection: PairSelection,
) -> Result<f64> {
    kss_squared(ScoreSource::Estimated(estimator), x, spec, convention, selection)
}

fn grw_inputs(x: &Graph, lambda: f64, distinct: &[PairIndex]) -> Result<Vec<Graph>> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidKernel(format!("GRW lambda must be positive, got {lambda}")));
    }
    let flips = distinct.iter().map(|&s| x.flip_edge(s)).collect::<Result<Vec<_>>>()?;
    let worst = flips.iter().map(Graph::max_degree).max().unwrap_or(0).max(x.max_degree());
    let bound = lambda * (worst * worst) as f64;
    if bound >= 1.0 {
        return Err(Error::DivergentKernel { bound });
    }
    Ok(flips)
}

fn grw_system(a: &Graph, b: &Graph, lambda: f64) -> DMatrix<f64> {
    let adj = |g: &Graph| {
        let mut m = DMatrix::zeros(g.n(), g.n());
        for (i, j) in g.edges() {
            m[(i, j)] = 1.0;
            m[(j, i)] = 1.0;
        }
        m
    };
    let dim = a.n() * b.n();
    DMatrix::identity(dim, dim) - adj(a).kronecker(&adj(b)) * lambda
}

fn dense_grw(a: &Graph, b: &Graph, lambda: f64) -> Result<f64> {
    let system = grw_system(a, b, lambda);
    let ones = DVector::from_element(system.nrows(), 1.0);
    Ok(system.lu().solve(&ones).ok_or(Error::SingularKernel)?.sum())
}

fn assemble(summary: &PairSummary, values: &DMatrix<f64>, pairs: &[PairIndex]) -> SteinKernelMatrix {
    let b = pairs.len();
    let h = DMatrix::from_fn(b, b, |p, q| {
        let (k, l) = (summary.position[p], summary.position[q]);
        summary.coefficient[k] * summary.coefficient[l] * values[(k, l)]
    });
    SteinKernelMatrix {
        h,
        pairs: pairs.to_vec(),
    }
}

/// GRW flip-feature Stein matrix with one dense linear solve per pair of
/// flipped graphs. Reference path for [`fast_grw_stein_matrix`].
pub fn dense_grw_stein_matrix(
    score: ScoreSource<'_>,
    x: &Graph,
    lambda: f64,
    pairs: &[PairIndex],
) -> Result<SteinKernelMatrix> {
    let summary = summarize_pairs(score, x, pairs)?;
    let flips = grw_inputs(x, lambda, &summary.distinct)?;
    let m = flips.len();
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|k| (k..m).map(|l| dense_grw(&flips[k], &flips[l], lambda)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    Ok(assemble(&summary, &symmetric_from_rows(m, rows), pairs))
}

fn symmetric_from_rows(m: usize, rows: Vec<Vec<f64>>) -> DMatrix<f64> {
    let mut values = DMatrix::zeros(m, m);
    for (k, row) in rows.into_iter().enumerate() {
        for (off, v) in row.into_iter().enumerate() {
            values[(k, k + off)] = v;
            values[(k + off, k)] = v;
        }
    }
    values
}

/// Applies the perturbation `sign * (e_i e_j^T + e_j e_i^T) kron A(g)` to
/// `I - lambda A kron A` as two rank-2 updates per edge of `g`. `index`
/// maps a product vertex to the state's (possibly restricted) indexing.
fn toggle_factor(
    state: &mut InverseState,
    g: &Graph,
    lambda: f64,
    sign: f64,
    index: impl Fn(usize, usize) -> usize,
    endpoints: (usize, usize),
    first_factor: bool,
) -> Result<()> {
    let (i, j) = endpoints;
    let mu = -lambda * sign;
    let at = |a: usize, u: usize| if first_factor { index(a, u) } else { index(u, a) };
    for (u, v) in g.edges() {
        state.apply_rank2(at(i, u), at(j, v), mu)?;
        state.apply_rank2(at(i, v), at(j, u), mu)?;
    }
    Ok(())
}

/// GRW flip-feature Stein matrix from maintained inverses.
///
/// `C_0 = (I - lambda A kron A)^-1` is inverted once. Flipping pair
/// `s = (i, j)` in the first factor changes the system by
/// `-lambda sign (e_i e_j^T + e_j e_i^T) kron A`, applied as rank-2 updates
/// to obtain `(I - lambda A_s kron A)^-1` for every distinct `s`. Each entry
/// then flips `s'` in the second factor on a state restricted to the `2n`
/// product vertices `(., u')`, `(., v')` that this touches; the grand sum of
/// the result is the kernel value. Any numerically singular update falls
/// back to a dense solve for that row or entry.
pub fn fast_grw_stein_matrix(
    score: ScoreSource<'_>,
    x: &Graph,
    lambda: f64,
    pairs: &[PairIndex],
) -> Result<SteinKernelMatrix> {
    let summary = summarize_pairs(score, x, pairs)?;
    let flips = grw_inputs(x, lambda, &summary.distinct)?;
    let n = x.n();
    let index = move |a: usize, b: usize| a * n + b;
    let base = InverseState::invert(&grw_system(x, x, lambda)).map_err(|_| Error::SingularKernel)?;
    let ends: Vec<(usize, usize)> = summary
        .distinct
        .iter()
        .map(|&s| x.pair_unindex(s))
        .collect::<Result<_>>()?;
    let sign = |k: usize| if summary.present[k] { -1.0 } else { 1.0 };
    let m = flips.len();
    let rows: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|k| -> Result<Vec<f64>> {
            let mut row_state = base.clone();
            if toggle_factor(&mut row_state, x, lambda, sign(k), index, ends[k], true).is_err() {
                row_state = InverseState::invert(&grw_system(&flips[k], x, lambda))
                    .map_err(|_| Error::SingularKernel)?;
            }
            (k..m)
                .map(|l| {
                    let (u, v) = ends[l];
                    let subset: Vec<usize> = (0..n).map(|a| index(a, u)).chain((0..n).map(|a| index(a, v))).collect();
                    let mut local = row_state.restrict(&subset);
                    // local index of (a, u) is a, of (a, v) is n + a
                    let local_index = |a: usize, w: usize| if w == u { a } else { n + a };
                    match toggle_factor(&mut local, &flips[k], lambda, sign(l), local_index, (u, v), false) {
                        Ok(()) => Ok(local.total()),
                        Err(_) => dense_grw(&flips[k], &flips[l], lambda),
                    }
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(assemble(&summary, &symmetric_from_rows(m, rows), pairs))
}
