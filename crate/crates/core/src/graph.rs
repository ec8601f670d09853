//! Undirected simple graphs on labelled vertices.
//!
//! Vertex pairs `(i, j)` with `i < j` are numbered lexicographically, so a
//! graph on `n` vertices has `N = n(n-1)/2` pair slots `0..N`. Adjacency is
//! stored as one bitset row per vertex.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Position of a vertex pair in lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairIndex(pub usize);

impl PairIndex {
    pub fn get(self) -> usize {
        self.0
    }
}

/// Number of unordered vertex pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic rank of `(i, j)`, `i < j < n`.
pub fn pair_index(i: usize, j: usize, n: usize) -> Result<PairIndex> {
    if i >= j || j >= n {
        return Err(Error::InvalidPair { i, j, n });
    }
    Ok(PairIndex(i * n - i * (i + 1) / 2 + (j - i - 1)))
}

/// Inverse of [`pair_index`].
pub fn pair_unindex(s: PairIndex, n: usize) -> Result<(usize, usize)> {
    if s.0 >= pair_count(n) {
        return Err(Error::InvalidPair { i: s.0, j: s.0, n });
    }
    let mut start = 0;
    for i in 0..n - 1 {
        let row = n - i - 1;
        if s.0 < start + row {
            return Ok((i, i + 1 + (s.0 - start)));
        }
        start += row;
    }
    unreachable!("pair index bounded by pair_count")
}

/// Conditioning statistic used to estimate edge probabilities from samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SummaryStatisticKind {
    Density,
    Bidegree,
    CommonNeighbours,
}

impl SummaryStatisticKind {
    pub fn name(self) -> &'static str {
        match self {
            SummaryStatisticKind::Density => "density",
            SummaryStatisticKind::Bidegree => "bidegree",
            SummaryStatisticKind::CommonNeighbours => "common-neighbours",
        }
    }
}

impl fmt::Display for SummaryStatisticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SummaryStatisticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "density" => Ok(Self::Density),
            "bidegree" => Ok(Self::Bidegree),
            "common-neighbours" | "common-neighbors" | "cn" => Ok(Self::CommonNeighbours),
            other => Err(Error::InvalidArgument(format!(
                "unknown summary statistic `{other}`"
            ))),
        }
    }
}

/// Value of a summary statistic at one vertex pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StatValue {
    /// The single unconditional bin.
    Unconditional,
    /// Endpoint degrees with the pair's own edge removed, ascending.
    Bidegree(u32, u32),
    CommonNeighbours(u32),
}

impl fmt::Display for StatValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatValue::Unconditional => write!(f, "0"),
            StatValue::Bidegree(a, b) => write!(f, "{a}:{b}"),
            StatValue::CommonNeighbours(c) => write!(f, "{c}"),
        }
    }
}

impl StatValue {
    pub fn parse(kind: SummaryStatisticKind, text: &str) -> Result<StatValue> {
        let bad = || Error::InvalidArgument(format!("bad {kind} statistic value `{text}`"));
        let text = text.trim();
        match kind {
            SummaryStatisticKind::Density => match text {
                "0" => Ok(StatValue::Unconditional),
                _ => Err(bad()),
            },
            SummaryStatisticKind::Bidegree => {
                let (a, b) = text.split_once(':').ok_or_else(bad)?;
                let a: u32 = a.trim().parse().map_err(|_| bad())?;
                let b: u32 = b.trim().parse().map_err(|_| bad())?;
                Ok(StatValue::Bidegree(a.min(b), a.max(b)))
            }
            SummaryStatisticKind::CommonNeighbours => {
                text.parse().map(StatValue::CommonNeighbours).map_err(|_| bad())
            }
        }
    }
}

/// Ordered by vertex count, then adjacency bits; the order only serves to
/// make pairwise computations independent of argument order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            rows: vec![0; n * words],
        }
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.insert(i, j);
            }
        }
        g
    }

    /// Builds a graph from an edge list, rejecting self-loops, duplicates
    /// and out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            let (i, j) = (a.min(b), a.max(b));
            if i == j || j >= n {
                return Err(Error::InvalidPair { i: a, j: b, n });
            }
            if g.has_edge(i, j) {
                return Err(Error::InvalidArgument(format!("duplicate edge ({i}, {j})")));
            }
            g.insert(i, j);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N = n(n-1)/2`.
    pub fn pair_count(&self) -> usize {
        pair_count(self.n)
    }

    pub fn pair_index(&self, i: usize, j: usize) -> Result<PairIndex> {
        pair_index(i, j, self.n)
    }

    pub fn pair_unindex(&self, s: PairIndex) -> Result<(usize, usize)> {
        pair_unindex(s, self.n)
    }

    #[inline]
    fn row(&self, v: usize) -> &[u64] {
        &self.rows[v * self.words..(v + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn has_pair(&self, s: PairIndex) -> Result<bool> {
        let (i, j) = self.pair_unindex(s)?;
        Ok(self.has_edge(i, j))
    }

    #[inline]
    fn toggle(&mut self, i: usize, j: usize) {
        self.rows[i * self.words + j / 64] ^= 1 << (j % 64);
        self.rows[j * self.words + i / 64] ^= 1 << (i % 64);
    }

    fn insert(&mut self, i: usize, j: usize) {
        if !self.has_edge(i, j) {
            self.toggle(i, j);
        }
    }

    /// Sets the indicator of the pair `(i, j)`.
    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) -> Result<()> {
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::InvalidPair { i, j, n: self.n });
        }
        if self.has_edge(i, j) != present {
            self.toggle(i, j);
        }
        Ok(())
    }

    /// Copy of the graph with the indicator of pair `s` toggled.
    pub fn flip_edge(&self, s: PairIndex) -> Result<Graph> {
        let (i, j) = self.pair_unindex(s)?;
        let mut g = self.clone();
        g.toggle(i, j);
        Ok(g)
    }

    /// Copy of the graph with pair `s` forced to `present`.
    pub fn with_pair(&self, s: PairIndex, present: bool) -> Result<Graph> {
        let (i, j) = self.pair_unindex(s)?;
        let mut g = self.clone();
        g.set_edge(i, j, present)?;
        Ok(g)
    }

    pub(crate) fn toggle_pair_in_place(&mut self, i: usize, j: usize) {
        self.toggle(i, j);
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    /// `S_2(x) = sum_v C(deg v, 2)`.
    pub fn two_star_count(&self) -> usize {
        (0..self.n)
            .map(|v| {
                let d = self.degree(v);
                d * d.saturating_sub(1) / 2
            })
            .sum()
    }

    pub fn triangle_count(&self) -> usize {
        let mut total = 0;
        for (i, j) in self.edges() {
            total += self.common_neighbour_count(i, j);
        }
        total / 3
    }

    pub fn density(&self) -> f64 {
        match self.pair_count() {
            0 => 0.0,
            npairs => self.edge_count() as f64 / npairs as f64,
        }
    }

    /// Neighbours of `v` in increasing order.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(v).iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.neighbours(i).filter(move |&j| j > i).map(move |j| (i, j)))
    }

    pub fn common_neighbour_count(&self, i: usize, j: usize) -> usize {
        self.row(i)
            .iter()
            .zip(self.row(j))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Number of vertex pairs whose edge status differs between the graphs.
    pub fn hamming_distance(&self, other: &Graph) -> Result<usize> {
        if self.n != other.n {
            return Err(Error::IncompatibleGraphs(format!(
                "{} vs {} vertices",
                self.n, other.n
            )));
        }
        let bits: usize = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum();
        Ok(bits / 2)
    }

    /// Evaluates `t(x_{-s})`; the indicator of `s` itself never enters.
    pub fn summary_statistic(&self, s: PairIndex, kind: SummaryStatisticKind) -> Result<StatValue> {
        let (i, j) = self.pair_unindex(s)?;
        Ok(self.summary_statistic_at(i, j, kind))
    }

    pub(crate) fn summary_statistic_at(&self, i: usize, j: usize, kind: SummaryStatisticKind) -> StatValue {
        match kind {
            SummaryStatisticKind::Density => StatValue::Unconditional,
            SummaryStatisticKind::Bidegree => {
                let own = self.has_edge(i, j) as usize;
                let a = (self.degree(i) - own) as u32;
                let b = (self.degree(j) - own) as u32;
                StatValue::Bidegree(a.min(b), a.max(b))
            }
            SummaryStatisticKind::CommonNeighbours => {
                StatValue::CommonNeighbours(self.common_neighbour_count(i, j) as u32)
            }
        }
    }

    /// Serializes in the plain-text graph format.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for (i, j) in self.edges() {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }

    /// Parses the plain-text graph format: `n=<count>` followed by one
    /// `i j` edge per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut graph: Option<Graph> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            match graph.as_mut() {
                None => {
                    let count = line
                        .strip_prefix("n=")
                        .or_else(|| line.strip_prefix("n ="))
                        .ok_or_else(|| parse_err(format!("expected `n=<count>`, found `{line}`")))?;
                    let n: usize = count
                        .trim()
                        .parse()
                        .map_err(|_| parse_err(format!("bad vertex count `{count}`")))?;
                    graph = Some(Graph::empty(n));
                }
                Some(g) => {
                    let mut fields = line.split_whitespace();
                    let mut next = |what: &str| -> Result<usize> {
                        let tok = fields
                            .next()
                            .ok_or_else(|| parse_err(format!("missing {what} vertex")))?;
                        tok.parse()
                            .map_err(|_| parse_err(format!("bad vertex index `{tok}`")))
                    };
                    let a = next("first")?;
                    let b = next("second")?;
                    if fields.next().is_some() {
                        return Err(parse_err("trailing fields after edge".into()));
                    }
                    let (i, j) = (a.min(b), a.max(b));
                    if j >= g.n {
                        return Err(parse_err(format!("vertex {j} out of range for n={}", g.n)));
                    }
                    if i == j {
                        return Err(parse_err(format!("self-loop at vertex {i}")));
                    }
                    if g.has_edge(i, j) {
                        return Err(parse_err(format!("duplicate edge {i} {j}")));
                    }
                    g.insert(i, j);
                }
            }
        }
        graph.ok_or(Error::Parse {
            line: 0,
            message: "missing `n=<count>` header".into(),
        })
    }
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph> {
    let text = fs::read_to_string(path)?;
    Graph::parse(&text)
}

pub fn write_graph(graph: &Graph, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, graph.to_text())?;
    Ok(())
}
