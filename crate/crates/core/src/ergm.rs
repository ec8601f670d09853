//! Exponential random graph models with edge and two-star terms.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{pair_count, Graph, PairIndex};

/// Largest vertex count accepted by [`ErgmModel::enumerate_distribution`].
pub const MAX_ENUMERATION_VERTICES: usize = 5;

pub fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErgmTerm {
    Edge,
    TwoStar,
}

impl fmt::Display for ErgmTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErgmTerm::Edge => "edge",
            ErgmTerm::TwoStar => "twostar",
        })
    }
}

impl FromStr for ErgmTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<ErgmTerm> {
        match s.trim().to_ascii_lowercase().as_str() {
            "edge" | "edges" => Ok(ErgmTerm::Edge),
            "twostar" | "two-star" | "2star" | "kstar2" => Ok(ErgmTerm::TwoStar),
            other => Err(Error::InvalidArgument(format!("unknown ERGM term `{other}`"))),
        }
    }
}

/// How subgraph counts enter the exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CountScaling {
    /// `E(x)` and `S_2(x)` as plain counts.
    #[default]
    Raw,
    /// Edge-preserving injections divided by `n (n-1) ... (n - v_H + 3)`:
    /// `2 E(x)` for the edge and `2 S_2(x) / n` for the two-star.
    Injective,
}

/// Glauber schedule for drawing several samples from one model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainSchedule {
    pub burn_in: usize,
    pub thinning: usize,
}

impl ChainSchedule {
    /// `10 N` burn-in steps and `N` steps between retained samples.
    pub fn for_vertices(n: usize) -> ChainSchedule {
        let pairs = pair_count(n).max(1);
        ChainSchedule {
            burn_in: 10 * pairs,
            thinning: pairs,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErgmModel {
    terms: Vec<ErgmTerm>,
    beta: Vec<f64>,
    n: usize,
    scaling: CountScaling,
}

impl ErgmModel {
    pub fn new(terms: Vec<ErgmTerm>, beta: Vec<f64>, n: usize) -> Result<ErgmModel> {
        if terms.len() != beta.len() {
            return Err(Error::InvalidArgument(format!(
                "{} ERGM terms but {} coefficients",
                terms.len(),
                beta.len()
            )));
        }
        if n < 2 {
            return Err(Error::InvalidArgument(format!("ERGM needs n >= 2, got {n}")));
        }
        if let Some(b) = beta.iter().find(|b| !b.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite ERGM coefficient {b}")));
        }
        Ok(ErgmModel {
            terms,
            beta,
            n,
            scaling: CountScaling::Raw,
        })
    }

    /// Edge plus two-star model with coefficients `(beta_edge, beta_twostar)`.
    pub fn e2s(beta_edge: f64, beta_two_star: f64, n: usize) -> Result<ErgmModel> {
        ErgmModel::new(vec![ErgmTerm::Edge, ErgmTerm::TwoStar], vec![beta_edge, beta_two_star], n)
    }

    /// Bernoulli random graph with edge probability `logistic(beta_edge)`.
    pub fn edge_only(beta_edge: f64, n: usize) -> Result<ErgmModel> {
        ErgmModel::new(vec![ErgmTerm::Edge], vec![beta_edge], n)
    }

    pub fn with_scaling(mut self, scaling: CountScaling) -> ErgmModel {
        self.scaling = scaling;
        self
    }

    pub fn terms(&self) -> &[ErgmTerm] {
        &self.terms
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scaling(&self) -> CountScaling {
        self.scaling
    }

    /// Same model with the coefficient of `term` replaced (added if absent).
    pub fn with_coefficient(&self, term: ErgmTerm, value: f64) -> ErgmModel {
        let mut out = self.clone();
        match out.terms.iter().position(|&t| t == term) {
            Some(k) => out.beta[k] = value,
            None => {
                out.terms.push(term);
                out.beta.push(value);
            }
        }
        out
    }

    fn check(&self, x: &Graph) -> Result<()> {
        if x.n() != self.n {
            return Err(Error::IncompatibleGraphs(format!(
                "model has {} vertices, graph has {}",
                self.n,
                x.n()
            )));
        }
        Ok(())
    }

    /// Sufficient statistics `t(x)` aligned with the terms.
    pub fn statistics(&self, x: &Graph) -> Result<Vec<f64>> {
        self.check(x)?;
        Ok(self
            .terms
            .iter()
            .map(|term| match (term, self.scaling) {
                (ErgmTerm::Edge, CountScaling::Raw) => x.edge_count() as f64,
                (ErgmTerm::Edge, CountScaling::Injective) => 2.0 * x.edge_count() as f64,
                (ErgmTerm::TwoStar, CountScaling::Raw) => x.two_star_count() as f64,
                (ErgmTerm::TwoStar, CountScaling::Injective) => {
                    2.0 * x.two_star_count() as f64 / self.n as f64
                }
            })
            .collect())
    }

    /// `beta . t(x)`; the normalising constant is never formed.
    pub fn log_unnormalized_density(&self, x: &Graph) -> Result<f64> {
        let t = self.statistics(x)?;
        Ok(t.iter().zip(&self.beta).map(|(t, b)| t * b).sum())
    }

    /// `beta . (t(x^(s,1)) - t(x^(s,0)))` given the degrees of the endpoints
    /// with the pair itself removed.
    fn change_logit(&self, deg_i: usize, deg_j: usize) -> f64 {
        let mut z = 0.0;
        for (term, b) in self.terms.iter().zip(&self.beta) {
            let delta = match (term, self.scaling) {
                (ErgmTerm::Edge, CountScaling::Raw) => 1.0,
                (ErgmTerm::Edge, CountScaling::Injective) => 2.0,
                (ErgmTerm::TwoStar, CountScaling::Raw) => (deg_i + deg_j) as f64,
                (ErgmTerm::TwoStar, CountScaling::Injective) => 2.0 * (deg_i + deg_j) as f64 / self.n as f64,
            };
            z += b * delta;
        }
        z
    }

    /// `q(x^(s,1) | x_{-s})`, independent of `x_s`.
    pub fn conditional_edge_prob(&self, x: &Graph, s: PairIndex) -> Result<f64> {
        self.check(x)?;
        let (i, j) = x.pair_unindex(s)?;
        Ok(self.conditional_edge_prob_at(x, i, j))
    }

    pub(crate) fn conditional_edge_prob_at(&self, x: &Graph, i: usize, j: usize) -> f64 {
        let own = x.has_edge(i, j) as usize;
        logistic(self.change_logit(x.degree(i) - own, x.degree(j) - own))
    }

    /// Edge probability of the independent starting graph: the logistic of
    /// the edge term's change statistic alone.
    pub fn initial_edge_prob(&self) -> f64 {
        let z: f64 = self
            .terms
            .iter()
            .zip(&self.beta)
            .filter(|(t, _)| **t == ErgmTerm::Edge)
            .map(|(_, b)| match self.scaling {
                CountScaling::Raw => *b,
                CountScaling::Injective => 2.0 * b,
            })
            .sum();
        logistic(z)
    }

    /// Runs `steps` Glauber updates from an independent Bernoulli start.
    pub fn gibbs_sample(&self, steps: usize, seed: u64) -> Result<Graph> {
        if steps == 0 {
            return Err(Error::InvalidArgument("Glauber dynamics needs at least one step".into()));
        }
        let mut chain = GlauberChain::new(self, seed);
        chain.run(steps);
        Ok(chain.graph)
    }

    /// One draw after the default burn-in.
    pub fn sample(&self, seed: u64) -> Graph {
        let mut chain = GlauberChain::new(self, seed);
        chain.run(ChainSchedule::for_vertices(self.n).burn_in);
        chain.graph
    }

    /// `count` draws from a single chain under `schedule`.
    pub fn sample_chain(&self, count: usize, schedule: ChainSchedule, seed: u64) -> Vec<Graph> {
        let mut chain = GlauberChain::new(self, seed);
        chain.run(schedule.burn_in);
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            if k > 0 {
                chain.run(schedule.thinning);
            }
            out.push(chain.graph.clone());
        }
        out
    }

    /// Every graph on `n` vertices with its exact probability. Graph number
    /// `m` has pair `s` present iff bit `s` of `m` is set.
    pub fn enumerate_distribution(&self) -> Result<Vec<(Graph, f64)>> {
        if self.n > MAX_ENUMERATION_VERTICES {
            return Err(Error::TooLarge { n: self.n });
        }
        let pairs = pair_count(self.n);
        let mut graphs = Vec::with_capacity(1 << pairs);
        for mask in 0u32..1 << pairs {
            let mut g = Graph::empty(self.n);
            for s in 0..pairs {
                if mask >> s & 1 == 1 {
                    let (i, j) = g.pair_unindex(PairIndex(s))?;
                    g.set_edge(i, j, true)?;
                }
            }
            let logp = self.log_unnormalized_density(&g)?;
            graphs.push((g, logp));
        }
        let top = graphs.iter().map(|(_, l)| *l).fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = graphs.iter().map(|(_, l)| (l - top).exp()).sum();
        Ok(graphs
            .into_iter()
            .map(|(g, l)| (g, (l - top).exp() / z))
            .collect())
    }
}

/// Glauber dynamics with incrementally maintained degrees.
struct GlauberChain<'a> {
    model: &'a ErgmModel,
    graph: Graph,
    degrees: Vec<usize>,
    rng: ChaCha8Rng,
}

impl<'a> GlauberChain<'a> {
    fn new(model: &'a ErgmModel, seed: u64) -> GlauberChain<'a> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = model.initial_edge_prob();
        let n = model.n;
        let mut graph = Graph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen::<f64>() < p {
                    graph.toggle_pair_in_place(i, j);
                }
            }
        }
        let degrees = graph.degrees();
        GlauberChain {
            model,
            graph,
            degrees,
            rng,
        }
    }

    fn run(&mut self, steps: usize) {
        let n = self.model.n;
        for _ in 0..steps {
            // uniform ordered pair of distinct vertices is a uniform unordered pair
            let i = self.rng.gen_range(0..n);
            let mut j = self.rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let present = self.graph.has_edge(i, j);
            let own = present as usize;
            let q = logistic(self.model.change_logit(self.degrees[i] - own, self.degrees[j] - own));
            let next = self.rng.gen::<f64>() < q;
            if next != present {
                self.graph.toggle_pair_in_place(i, j);
                if next {
                    self.degrees[i] += 1;
                    self.degrees[j] += 1;
                } else {
                    self.degrees[i] -= 1;
                    self.degrees[j] -= 1;
                }
            }
        }
    }
}
