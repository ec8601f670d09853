//! Graph kernels.
//!
//! Every kernel is available as a direct pairwise function and through
//! [`Embedding`], which prepares a batch of graphs once (feature vectors,
//! spectra or bitsets) so that Gram matrices and RKHS quadratic forms over
//! the batch avoid repeated work.

mod graphlet;
mod shortest_path;
mod walk;
mod wl;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, PairIndex};

pub use graphlet::{class_count, graphlet_features, is_connected_class, GRAPHLETS_3, GRAPHLETS_4};
pub use shortest_path::{all_pairs_distances, distance_histogram, shortest_path_kernel};
pub use walk::{geometric_random_walk, k_step_random_walk, weighted_walk_sum, ProductGraph};
pub use wl::{weisfeiler_lehman, wl_features};

use walk::WalkSpectrum;

/// Default KRW weight `lambda_t` for `t >= 1`.
pub const DEFAULT_KRW_LAMBDA: f64 = 1.0 / 3.0;

/// Sorted `(coordinate, value)` pairs.
pub type SparseVec = Vec<(u32, f64)>;

pub(crate) fn sparse_dot(a: &SparseVec, b: &SparseVec) -> f64 {
    let (mut p, mut q, mut acc) = (0, 0, 0.0);
    while p < a.len() && q < b.len() {
        match a[p].0.cmp(&b[q].0) {
            std::cmp::Ordering::Less => p += 1,
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal => {
                acc += a[p].1 * b[q].1;
                p += 1;
                q += 1;
            }
        }
    }
    acc
}

/// Choice of graph kernel and its hyperparameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    Constant,
    /// Gaussian vertex-edge histogram with bandwidth `sigma`.
    Gveh { sigma: f64 },
    /// `K`-step random walk with `lambda_0 = 1`, `lambda_t = lambda`.
    KStepRandomWalk { steps: usize, lambda: f64 },
    GeometricRandomWalk { lambda: f64 },
    ShortestPath,
    WeisfeilerLehman { levels: usize },
    Graphlet { size: usize },
    ConnectedGraphlet { size: usize },
}

impl KernelSpec {
    pub fn gveh(sigma: f64) -> Result<KernelSpec> {
        KernelSpec::Gveh { sigma }.validated()
    }

    pub fn k_step(steps: usize) -> KernelSpec {
        KernelSpec::KStepRandomWalk {
            steps,
            lambda: DEFAULT_KRW_LAMBDA,
        }
    }

    pub fn grw(lambda: f64) -> Result<KernelSpec> {
        KernelSpec::GeometricRandomWalk { lambda }.validated()
    }

    pub fn wl(levels: usize) -> KernelSpec {
        KernelSpec::WeisfeilerLehman { levels }
    }

    pub fn graphlet(size: usize) -> Result<KernelSpec> {
        KernelSpec::Graphlet { size }.validated()
    }

    pub fn connected_graphlet(size: usize) -> Result<KernelSpec> {
        KernelSpec::ConnectedGraphlet { size }.validated()
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelSpec::Gveh { sigma } if !(sigma > 0.0 && sigma.is_finite()) => Err(
                Error::InvalidKernel(format!("GVEH bandwidth must be positive, got {sigma}")),
            ),
            KernelSpec::KStepRandomWalk { lambda, .. } if !lambda.is_finite() => {
                Err(Error::InvalidKernel(format!("KRW weight must be finite, got {lambda}")))
            }
            KernelSpec::GeometricRandomWalk { lambda } if !(lambda > 0.0 && lambda.is_finite()) => {
                Err(Error::InvalidKernel(format!("GRW lambda must be positive, got {lambda}")))
            }
            KernelSpec::Graphlet { size } | KernelSpec::ConnectedGraphlet { size } if size != 3 && size != 4 => {
                Err(Error::InvalidKernel(format!("graphlet size must be 3 or 4, got {size}")))
            }
            _ => Ok(()),
        }
    }

    fn validated(self) -> Result<KernelSpec> {
        self.validate()?;
        Ok(self)
    }

    /// Short kernel family name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            KernelSpec::Constant => "const",
            KernelSpec::Gveh { .. } => "gveh",
            KernelSpec::KStepRandomWalk { .. } => "krw",
            KernelSpec::GeometricRandomWalk { .. } => "grw",
            KernelSpec::ShortestPath => "sp",
            KernelSpec::WeisfeilerLehman { .. } => "wl",
            KernelSpec::Graphlet { .. } => "glet",
            KernelSpec::ConnectedGraphlet { .. } => "conglet",
        }
    }

    /// Hyperparameter as text; empty for parameterless kernels.
    pub fn param(&self) -> String {
        match *self {
            KernelSpec::Constant | KernelSpec::ShortestPath => String::new(),
            KernelSpec::Gveh { sigma } => format!("{sigma}"),
            KernelSpec::KStepRandomWalk { steps, lambda } => {
                if lambda == DEFAULT_KRW_LAMBDA {
                    format!("{steps}")
                } else {
                    format!("{steps}:{lambda}")
                }
            }
            KernelSpec::GeometricRandomWalk { lambda } => format!("{lambda}"),
            KernelSpec::WeisfeilerLehman { levels } => format!("{levels}"),
            KernelSpec::Graphlet { size } | KernelSpec::ConnectedGraphlet { size } => format!("{size}"),
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let param = self.param();
        if param.is_empty() {
            f.write_str(self.name())
        } else {
            write!(f, "{}:{}", self.name(), param)
        }
    }
}

impl FromStr for KernelSpec {
    type Err = Error;

    /// Parses `const`, `sp`, `gveh:<sigma>`, `krw:<K>[:<lambda>]`,
    /// `grw:<lambda>`, `wl:<h>`, `glet:<l>`, `conglet:<l>`.
    fn from_str(text: &str) -> Result<KernelSpec> {
        let text = text.trim();
        let mut parts = text.split(':');
        let name = parts.next().unwrap_or_default().to_ascii_lowercase();
        let args: Vec<&str> = parts.collect();
        let bad = || Error::InvalidKernel(format!("cannot parse kernel `{text}`"));
        let float = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
        let int = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
        let spec = match (name.as_str(), args.as_slice()) {
            ("const" | "constant", []) => KernelSpec::Constant,
            ("sp" | "shortest-path", []) => KernelSpec::ShortestPath,
            ("gveh", [s]) => KernelSpec::Gveh { sigma: float(s)? },
            ("krw", [k]) => KernelSpec::k_step(int(k)?),
            ("krw", [k, l]) => KernelSpec::KStepRandomWalk {
                steps: int(k)?,
                lambda: float(l)?,
            },
            ("grw", [l]) => KernelSpec::GeometricRandomWalk { lambda: float(l)? },
            ("wl", [h]) => KernelSpec::WeisfeilerLehman { levels: int(h)? },
            ("glet", [l]) => KernelSpec::Graphlet { size: int(l)? },
            ("conglet", [l]) => KernelSpec::ConnectedGraphlet { size: int(l)? },
            _ => return Err(bad()),
        };
        spec.validated()
    }
}

/// `exp(-||h(x) - h(x')||^2 / (2 sigma^2))` with index vertex labels, where
/// the squared histogram distance is twice the number of differing pairs.
pub fn gveh(x: &Graph, x2: &Graph, sigma: f64) -> Result<f64> {
    let differing = x.hamming_distance(x2)?;
    Ok(gveh_from_distance(differing, sigma))
}

fn gveh_from_distance(differing_pairs: usize, sigma: f64) -> f64 {
    let squared = 2.0 * differing_pairs as f64;
    (-squared / (2.0 * sigma * sigma)).exp()
}

fn graphlet_sparse(counts: Vec<u64>) -> SparseVec {
    counts
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(i, c)| (i as u32, c as f64))
        .collect()
}

fn histogram_sparse(hist: Vec<u64>) -> SparseVec {
    hist.into_iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, c)| c > 0)
        .map(|(i, c)| (i as u32, c as f64))
        .collect()
}

/// Evaluates `k(x, x2)`.
pub fn kernel_eval(spec: &KernelSpec, x: &Graph, x2: &Graph) -> Result<f64> {
    spec.validate()?;
    // fixed argument order keeps floating-point results exactly symmetric
    let (x, x2) = if x <= x2 { (x, x2) } else { (x2, x) };
    match *spec {
        KernelSpec::Constant => Ok(1.0),
        KernelSpec::Gveh { sigma } => gveh(x, x2, sigma),
        KernelSpec::KStepRandomWalk { steps, lambda } => Ok(k_step_random_walk(x, x2, steps, lambda)),
        KernelSpec::GeometricRandomWalk { lambda } => geometric_random_walk(x, x2, lambda),
        KernelSpec::ShortestPath => Ok(shortest_path_kernel(x, x2)),
        KernelSpec::WeisfeilerLehman { levels } => Ok(weisfeiler_lehman(x, x2, levels)),
        KernelSpec::Graphlet { size } | KernelSpec::ConnectedGraphlet { size } => {
            let connected = matches!(spec, KernelSpec::ConnectedGraphlet { .. });
            let a = graphlet_features(x, size, connected)?;
            let b = graphlet_features(x2, size, connected)?;
            Ok(a.iter().zip(&b).map(|(p, q)| (*p as f64) * (*q as f64)).sum())
        }
    }
}

#[derive(Debug, Clone)]
enum Prepared {
    /// Constant kernel over this many graphs; every feature is `[1]`.
    Constant(usize),
    Features(Vec<SparseVec>),
    Spectra(Vec<WalkSpectrum>),
    Graphs(Vec<Graph>),
}

/// One term `weight * (phi(plus) - phi(minus))` of an RKHS element built from
/// embedded graphs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedTerm {
    pub weight: f64,
    pub plus: usize,
    pub minus: Option<usize>,
}

/// A batch of graphs prepared for one kernel.
#[derive(Debug, Clone)]
pub struct Embedding {
    spec: KernelSpec,
    prepared: Prepared,
}

impl Embedding {
    pub fn new(spec: &KernelSpec, graphs: &[Graph]) -> Result<Embedding> {
        spec.validate()?;
        let prepared = match *spec {
            KernelSpec::Constant => Prepared::Constant(graphs.len()),
            KernelSpec::ShortestPath => {
                Prepared::Features(graphs.iter().map(|g| histogram_sparse(distance_histogram(g))).collect())
            }
            KernelSpec::WeisfeilerLehman { levels } => {
                let refs: Vec<&Graph> = graphs.iter().collect();
                Prepared::Features(wl_features(&refs, levels))
            }
            KernelSpec::Graphlet { size } | KernelSpec::ConnectedGraphlet { size } => {
                let connected = matches!(spec, KernelSpec::ConnectedGraphlet { .. });
                let feats = graphs
                    .iter()
                    .map(|g| graphlet_features(g, size, connected).map(graphlet_sparse))
                    .collect::<Result<Vec<_>>>()?;
                Prepared::Features(feats)
            }
            KernelSpec::Gveh { .. } => {
                if let Some(first) = graphs.first() {
                    if let Some(bad) = graphs.iter().find(|g| g.n() != first.n()) {
                        return Err(Error::IncompatibleGraphs(format!(
                            "GVEH needs equal vertex counts ({} vs {})",
                            first.n(),
                            bad.n()
                        )));
                    }
                }
                Prepared::Graphs(graphs.to_vec())
            }
            KernelSpec::KStepRandomWalk { .. } | KernelSpec::GeometricRandomWalk { .. } => {
                let spectra: Vec<WalkSpectrum> = graphs.iter().map(WalkSpectrum::new).collect();
                if let KernelSpec::GeometricRandomWalk { lambda } = *spec {
                    let worst = spectra.iter().map(WalkSpectrum::max_degree).max().unwrap_or(0);
                    walk::check_convergence(lambda, worst, worst)?;
                }
                Prepared::Spectra(spectra)
            }
        };
        Ok(Embedding {
            spec: *spec,
            prepared,
        })
    }

    /// Embeds `base` followed by `base` with each pair in `flips` toggled
    /// (element `k + 1` is the flip of `flips[k]`).
    pub fn flip_family(spec: &KernelSpec, base: &Graph, flips: &[PairIndex]) -> Result<Embedding> {
        spec.validate()?;
        if let KernelSpec::Constant = spec {
            for &s in flips {
                base.pair_unindex(s)?;
            }
            return Ok(Embedding {
                spec: *spec,
                prepared: Prepared::Constant(flips.len() + 1),
            });
        }
        if let KernelSpec::Graphlet { size } | KernelSpec::ConnectedGraphlet { size } = *spec {
            let connected = matches!(spec, KernelSpec::ConnectedGraphlet { .. });
            let base_counts = graphlet::full_counts(base, size)?;
            let mut feats = Vec::with_capacity(flips.len() + 1);
            feats.push(graphlet_sparse(graphlet::restrict_counts(base_counts.clone(), size, connected)));
            for &s in flips {
                let counts = graphlet::flipped_class_counts(base, &base_counts, s, size)?;
                feats.push(graphlet_sparse(graphlet::restrict_counts(counts, size, connected)));
            }
            return Ok(Embedding {
                spec: *spec,
                prepared: Prepared::Features(feats),
            });
        }
        let mut graphs = Vec::with_capacity(flips.len() + 1);
        graphs.push(base.clone());
        for &s in flips {
            graphs.push(base.flip_edge(s)?);
        }
        Embedding::new(spec, &graphs)
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        match &self.prepared {
            Prepared::Constant(count) => *count,
            Prepared::Features(f) => f.len(),
            Prepared::Spectra(s) => s.len(),
            Prepared::Graphs(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `k(g_a, g_b)` for two embedded graphs.
    pub fn eval(&self, a: usize, b: usize) -> f64 {
        let (a, b) = (a.min(b), a.max(b));
        match (&self.prepared, self.spec) {
            (Prepared::Constant(_), _) => 1.0,
            (Prepared::Features(f), _) => sparse_dot(&f[a], &f[b]),
            (Prepared::Spectra(s), KernelSpec::GeometricRandomWalk { lambda }) => s[a].geometric(&s[b], lambda),
            (Prepared::Spectra(s), KernelSpec::KStepRandomWalk { steps, lambda }) => {
                s[a].k_step(&s[b], steps, lambda)
            }
            (Prepared::Graphs(g), KernelSpec::Gveh { sigma }) => {
                let d = g[a].hamming_distance(&g[b]).expect("equal sizes checked at embedding");
                gveh_from_distance(d, sigma)
            }
            _ => unreachable!("preparation matches kernel family"),
        }
    }

    pub fn gram(&self) -> DMatrix<f64> {
        let m = self.len();
        let rows: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|a| (a..m).map(|b| self.eval(a, b)).collect())
            .collect();
        let mut gram = DMatrix::zeros(m, m);
        for (a, row) in rows.into_iter().enumerate() {
            for (off, v) in row.into_iter().enumerate() {
                gram[(a, a + off)] = v;
                gram[(a + off, a)] = v;
            }
        }
        gram
    }

    /// `|| sum_t w_t (phi(plus_t) - phi(minus_t)) ||^2` in the RKHS.
    ///
    /// Linear feature kernels accumulate the element explicitly, taking each
    /// difference before weighting so that identical features cancel exactly.
    /// The rest merge terms into per-graph weights and evaluate `w^T K w`.
    pub fn quadratic_form(&self, terms: &[SignedTerm]) -> f64 {
        match &self.prepared {
            Prepared::Constant(_) => {
                // differences of the constant feature are exactly zero
                let acc: f64 = terms.iter().filter(|t| t.minus.is_none()).map(|t| t.weight).sum();
                acc * acc
            }
            Prepared::Features(feats) => {
                let dim = feats
                    .iter()
                    .filter_map(|f| f.last().map(|&(i, _)| i as usize + 1))
                    .max()
                    .unwrap_or(0);
                let mut acc = vec![0.0; dim];
                let mut diff: Vec<f64> = vec![0.0; dim];
                let mut touched: Vec<u32> = Vec::new();
                for t in terms {
                    match t.minus {
                        None => {
                            for &(i, v) in &feats[t.plus] {
                                acc[i as usize] += t.weight * v;
                            }
                        }
                        Some(minus) => {
                            touched.clear();
                            for &(i, v) in &feats[t.plus] {
                                diff[i as usize] += v;
                                touched.push(i);
                            }
                            for &(i, v) in &feats[minus] {
                                diff[i as usize] -= v;
                                touched.push(i);
                            }
                            for &i in &touched {
                                let d = std::mem::take(&mut diff[i as usize]);
                                if d != 0.0 {
                                    acc[i as usize] += t.weight * d;
                                }
                            }
                        }
                    }
                }
                acc.iter().map(|v| v * v).sum()
            }
            _ => {
                let mut weights = vec![0.0; self.len()];
                for t in terms {
                    weights[t.plus] += t.weight;
                    if let Some(minus) = t.minus {
                        weights[minus] -= t.weight;
                    }
                }
                let active: Vec<usize> = (0..weights.len()).filter(|&a| weights[a] != 0.0).collect();
                let mut total = 0.0;
                for (p, &a) in active.iter().enumerate() {
                    total += weights[a] * weights[a] * self.eval(a, a);
                    for &b in &active[p + 1..] {
                        total += 2.0 * weights[a] * weights[b] * self.eval(a, b);
                    }
                }
                total
            }
        }
    }

}

/// `G[a, b] = k(graphs[a], graphs[b])`.
pub fn gram_matrix(spec: &KernelSpec, graphs: &[Graph]) -> Result<DMatrix<f64>> {
    Ok(Embedding::new(spec, graphs)?.gram())
}

/// Writes a Gram matrix as CSV: a header of graph ids, then one row per graph.
pub fn write_gram_csv<W: Write>(ids: &[String], gram: &DMatrix<f64>, out: W) -> Result<()> {
    if ids.len() != gram.nrows() || !gram.is_square() {
        return Err(Error::InvalidArgument("ids do not match Gram matrix size".into()));
    }
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(ids)?;
    for row in gram.row_iter() {
        writer.write_record(row.iter().map(|v| format!("{v}")))?;
    }
    writer.flush()?;
    Ok(())
}
