//! Random graph generators and a file-backed sample source.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::ergm::ErgmModel;
use crate::error::{Error, Result};
use crate::graph::{read_graph, Graph};

/// Deterministic sub-seed for item `index` of stream `stream`.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(stream);
    rng.set_word_pos(u128::from(index) * 2);
    rng.next_u64()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Unit torus: per-coordinate distance `min(|d|, 1 - |d|)`.
    Torus,
    /// Unit square with Euclidean distance.
    Square,
}

/// Geometric random graph: `n` uniform points in `[0, 1)^2`, an edge iff the
/// distance is strictly below `r`.
pub fn grg(n: usize, r: f64, topology: Topology, seed: u64) -> Result<Graph> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("GRG radius must be positive, got {r}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen(), rng.gen())).collect();
    let wrap = |d: f64| match topology {
        Topology::Torus => d.min(1.0 - d),
        Topology::Square => d,
    };
    let r2 = r * r;
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            let dx = wrap((points[i].0 - points[j].0).abs());
            let dy = wrap((points[i].1 - points[j].1).abs());
            if dx * dx + dy * dy < r2 {
                g.toggle_pair_in_place(i, j);
            }
        }
    }
    Ok(g)
}

/// Preferential attachment from a complete seed graph on `m` vertices. Each
/// arriving vertex draws `m` distinct targets one at a time with probability
/// proportional to `deg(v)^alpha + 1`, refreshing degrees between draws.
pub fn barabasi_albert(n: usize, m: usize, alpha: f64, seed: u64) -> Result<Graph> {
    if m == 0 || m >= n {
        return Err(Error::InvalidArgument(format!("Barabasi-Albert needs 1 <= m < n, got m={m}, n={n}")));
    }
    if !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("non-finite attachment power {alpha}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    let mut deg = vec![0usize; n];
    for i in 0..m {
        for j in i + 1..m {
            g.toggle_pair_in_place(i, j);
            deg[i] += 1;
            deg[j] += 1;
        }
    }
    let mut chosen = vec![false; n];
    let mut weights = Vec::with_capacity(n);
    for v in m..n {
        for _ in 0..m {
            weights.clear();
            weights.extend((0..v).map(|u| {
                if chosen[u] {
                    0.0
                } else if deg[u] == 0 {
                    // 0^alpha + 1 with the convention 0^0 = 1
                    if alpha == 0.0 { 2.0 } else if alpha > 0.0 { 1.0 } else { f64::INFINITY }
                } else {
                    (deg[u] as f64).powf(alpha) + 1.0
                }
            }));
            let u = draw_weighted(&weights, &mut rng);
            chosen[u] = true;
            g.toggle_pair_in_place(u, v);
            deg[u] += 1;
            deg[v] += 1;
        }
        chosen[..v].iter_mut().for_each(|c| *c = false);
    }
    Ok(g)
}

/// Index drawn proportionally to `weights`; infinite weights share all mass.
fn draw_weighted(weights: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let infinite: Vec<usize> = (0..weights.len()).filter(|&k| weights[k].is_infinite()).collect();
    if !infinite.is_empty() {
        return infinite[rng.gen_range(0..infinite.len())];
    }
    let total: f64 = weights.iter().sum();
    let mut target = rng.gen::<f64>() * total;
    let mut last = 0;
    for (k, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            last = k;
            if target < w {
                return k;
            }
            target -= w;
        }
    }
    last
}

/// A samplable graph model.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Grg { n: usize, r: f64, topology: Topology },
    BarabasiAlbert { n: usize, m: usize, alpha: f64 },
    Ergm(ErgmModel),
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GeneratorSpec::Grg { r, .. } if !(r > 0.0) => {
                Err(Error::InvalidArgument(format!("GRG radius must be positive, got {r}")))
            }
            GeneratorSpec::BarabasiAlbert { n, m, .. } if m == 0 || m >= n => {
                Err(Error::InvalidArgument(format!("Barabasi-Albert needs 1 <= m < n, got m={m}, n={n}")))
            }
            _ => Ok(()),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            GeneratorSpec::Grg { n, .. } | GeneratorSpec::BarabasiAlbert { n, .. } => *n,
            GeneratorSpec::Ergm(model) => model.n(),
        }
    }

    pub fn sample(&self, seed: u64) -> Result<Graph> {
        match self {
            GeneratorSpec::Grg { n, r, topology } => grg(*n, *r, *topology, seed),
            GeneratorSpec::BarabasiAlbert { n, m, alpha } => barabasi_albert(*n, *m, *alpha, seed),
            GeneratorSpec::Ergm(model) => Ok(model.sample(seed)),
        }
    }

    /// `count` independent draws; draw `k` uses `derive_seed(seed, stream, k)`.
    pub fn sample_many(&self, count: usize, seed: u64, stream: u64) -> Result<Vec<Graph>> {
        self.validate()?;
        (0..count as u64)
            .into_par_iter()
            .map(|k| self.sample(derive_seed(seed, stream, k)))
            .collect()
    }
}

/// Graph files from one directory, read in lexicographic file-name order.
#[derive(Debug, Clone)]
pub struct SampleDirectory {
    paths: Vec<PathBuf>,
    graphs: Vec<Graph>,
    cursor: usize,
}

impl SampleDirectory {
    pub fn open(dir: impl AsRef<Path>) -> Result<SampleDirectory> {
        let dir = dir.as_ref();
        let ingest = |message: String| Error::Ingest {
            path: dir.to_path_buf(),
            message,
        };
        let entries = fs::read_dir(dir).map_err(|e| ingest(e.to_string()))?;
        let mut paths = Vec::new();
        for entry in entries {
            let entry = entry.map_err(|e| ingest(e.to_string()))?;
            let path = entry.path();
            let hidden = entry.file_name().to_string_lossy().starts_with('.');
            if path.is_file() && !hidden {
                paths.push(path);
            }
        }
        paths.sort();
        if paths.is_empty() {
            return Err(ingest("directory contains no graph files".into()));
        }
        let mut graphs = Vec::with_capacity(paths.len());
        for path in &paths {
            let g = read_graph(path).map_err(|e| Error::Ingest {
                path: path.clone(),
                message: e.to_string(),
            })?;
            if let Some(first) = graphs.first() {
                let first: &Graph = first;
                if first.n() != g.n() {
                    return Err(Error::Ingest {
                        path: path.clone(),
                        message: format!("has {} vertices, earlier samples have {}", g.n(), first.n()),
                    });
                }
            }
            graphs.push(g);
        }
        Ok(SampleDirectory {
            paths,
            graphs,
            cursor: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// Common vertex count.
    pub fn n(&self) -> usize {
        self.graphs[0].n()
    }

    pub fn paths(&self) -> &[PathBuf] {
        &self.paths
    }

    pub fn graphs(&self) -> &[Graph] {
        &self.graphs
    }

    /// Next unread sample; `None` once every file has been returned.
    pub fn next_sample(&mut self) -> Option<Graph> {
        let g = self.graphs.get(self.cursor).cloned();
        if g.is_some() {
            self.cursor += 1;
        }
        g
    }

    pub fn into_graphs(self) -> Vec<Graph> {
        self.graphs
    }
}
