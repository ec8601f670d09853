//! Monte Carlo goodness-of-fit test and rejection-rate estimation.

use rayon::prelude::*;

use crate::ergm::ErgmModel;
use crate::error::{Error, Result};
use crate::generators::{derive_seed, GeneratorSpec};
use crate::graph::{Graph, SummaryStatisticKind};
use crate::kernels::KernelSpec;
use crate::stein::{kss_squared, ConditionalEstimator, PairSelection, ScoreSource, SteinConvention};

const STREAM_OBSERVED_PAIRS: u64 = 1;
const STREAM_NULL_GRAPHS: u64 = 2;
const STREAM_NULL_PAIRS: u64 = 3;
const STREAM_FIT: u64 = 4;
const STREAM_TRIAL_GRAPH: u64 = 5;

/// Null model under test and how its conditional probabilities are obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum NullModel {
    /// gKSS: exact ERGM conditionals; null networks simulated from the model.
    Ergm(ErgmModel),
    /// AgraSSt: conditionals estimated from `fit_samples` draws of the
    /// generator, binned by `kind`. Null networks come from the same
    /// generator on a disjoint seed stream.
    Generator {
        generator: GeneratorSpec,
        kind: SummaryStatisticKind,
        fit_samples: usize,
    },
    /// AgraSSt on a fixed sample set. Every sample serves once as a null
    /// network, so the number of null statistics is the number of samples.
    /// Each network, observed or null, is scored by the estimator fitted on
    /// all the other networks, which keeps the observed statistic
    /// exchangeable with the null ones when the observed network comes from
    /// the same generator.
    Samples { samples: Vec<Graph>, kind: SummaryStatisticKind },
}

impl NullModel {
    fn n(&self) -> Option<usize> {
        match self {
            NullModel::Ergm(m) => Some(m.n()),
            NullModel::Generator { generator, .. } => Some(generator.n()),
            NullModel::Samples { samples, .. } => samples.first().map(Graph::n),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestConfig {
    pub null: NullModel,
    pub kernel: KernelSpec,
    pub convention: SteinConvention,
    /// Pairs resampled per statistic (`B`).
    pub resample_size: usize,
    /// Simulated null networks (`l`).
    pub simulations: usize,
    /// Test level (`a`).
    pub level: f64,
    pub seed: u64,
}

impl TestConfig {
    /// `B = 200`, `l = 200`, `a = 0.05`, flip-feature convention.
    pub fn new(null: NullModel, kernel: KernelSpec) -> TestConfig {
        TestConfig {
            null,
            kernel,
            convention: SteinConvention::FlipFeature,
            resample_size: 200,
            simulations: 200,
            level: 0.05,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.resample_size == 0 {
            return Err(Error::InvalidArgument("resample size B must be at least 1".into()));
        }
        if self.simulations == 0 {
            return Err(Error::InvalidArgument("number of simulated networks l must be at least 1".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::InvalidArgument(format!("test level must lie in (0, 1), got {}", self.level)));
        }
        self.kernel.validate()?;
        match &self.null {
            NullModel::Generator { generator, fit_samples, .. } => {
                generator.validate()?;
                if *fit_samples == 0 {
                    return Err(Error::InvalidArgument("estimator needs at least one fitting sample".into()));
                }
            }
            NullModel::Samples { samples, .. } if samples.len() < 2 => {
                return Err(Error::InvalidArgument("sample set needs at least two graphs".into()));
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestOutcome {
    pub tau: f64,
    pub null_taus: Vec<f64>,
    /// Empirical `(1 - a)` quantile of the null statistics.
    pub threshold: f64,
    pub reject: bool,
    pub p_value: f64,
}

/// The `ceil((1 - a)(l + 1))`-th smallest null statistic, or `+inf` when that
/// rank exceeds `l`.
pub fn empirical_threshold(null_taus: &[f64], level: f64) -> f64 {
    let l = null_taus.len();
    let rank = ((1.0 - level) * (l + 1) as f64 - 1e-9).ceil() as usize;
    if rank == 0 || rank > l {
        return if rank == 0 { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    let mut sorted = null_taus.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted[rank - 1]
}

/// `(1 + #{tau_i >= tau}) / (l + 1)`.
pub fn monte_carlo_p_value(tau: f64, null_taus: &[f64]) -> f64 {
    let exceed = null_taus.iter().filter(|&&t| t >= tau).count();
    (1 + exceed) as f64 / (null_taus.len() + 1) as f64
}

enum Score {
    Exact(ErgmModel),
    Estimated(ConditionalEstimator),
}

impl Score {
    fn source(&self) -> ScoreSource<'_> {
        match self {
            Score::Exact(m) => ScoreSource::Exact(m),
            Score::Estimated(e) => ScoreSource::Estimated(e),
        }
    }
}

/// Runs the test of `x` against `cfg.null`: statistic of `x` on resampled
/// pairs, statistics of simulated null networks each on fresh pairs, and
/// rejection iff the observed statistic strictly exceeds the empirical
/// `(1 - a)` quantile.
pub fn run_test(x: &Graph, cfg: &TestConfig) -> Result<TestOutcome> {
    cfg.validate()?;
    if let Some(n) = cfg.null.n() {
        if n != x.n() {
            return Err(Error::IncompatibleGraphs(format!(
                "null model has {n} vertices, observed graph has {}",
                x.n()
            )));
        }
    }
    let score = match &cfg.null {
        NullModel::Ergm(m) => Score::Exact(m.clone()),
        NullModel::Generator {
            generator,
            kind,
            fit_samples,
        } => {
            let samples = generator.sample_many(*fit_samples, cfg.seed, STREAM_FIT)?;
            Score::Estimated(ConditionalEstimator::fit(*kind, &samples)?)
        }
        NullModel::Samples { samples, kind } => {
            let mut pooled = samples.clone();
            pooled.push(x.clone());
            Score::Estimated(ConditionalEstimator::fit(*kind, &pooled)?)
        }
    };
    let statistic_with = |score: &Score, g: &Graph, pair_seed: u64| {
        kss_squared(
            score.source(),
            g,
            &cfg.kernel,
            cfg.convention,
            PairSelection::Resample {
                size: cfg.resample_size,
                seed: pair_seed,
            },
        )
    };
    let statistic = |g: &Graph, pair_seed: u64| statistic_with(&score, g, pair_seed);
    let held_out = |g: &Graph| -> Result<Score> {
        match &score {
            Score::Estimated(est) => Ok(Score::Estimated(est.without_sample(g)?)),
            Score::Exact(_) => unreachable!("sample nulls use an estimator"),
        }
    };
    let observed_pairs = derive_seed(cfg.seed, STREAM_OBSERVED_PAIRS, 0);
    let tau = match &cfg.null {
        NullModel::Samples { .. } => statistic_with(&held_out(x)?, x, observed_pairs)?,
        _ => statistic(x, observed_pairs)?,
    };
    let null_count = match &cfg.null {
        NullModel::Samples { samples, .. } => samples.len(),
        _ => cfg.simulations,
    };
    let null_taus = (0..null_count)
        .into_par_iter()
        .map(|i| {
            let graph_seed = derive_seed(cfg.seed, STREAM_NULL_GRAPHS, i as u64);
            let pair_seed = derive_seed(cfg.seed, STREAM_NULL_PAIRS, i as u64);
            match &cfg.null {
                NullModel::Samples { samples, .. } => statistic_with(&held_out(&samples[i])?, &samples[i], pair_seed),
                NullModel::Ergm(m) => statistic(&m.sample(graph_seed), pair_seed),
                NullModel::Generator { generator, .. } => statistic(&generator.sample(graph_seed)?, pair_seed),
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let threshold = empirical_threshold(&null_taus, cfg.level);
    Ok(TestOutcome {
        tau,
        threshold,
        reject: tau > threshold,
        p_value: monte_carlo_p_value(tau, &null_taus),
        null_taus,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RejectionRate {
    pub rejections: usize,
    pub trials: usize,
    pub rate: f64,
    /// Binomial standard error `sqrt(rate (1 - rate) / trials)`.
    pub stderr: f64,
}

impl RejectionRate {
    pub fn from_counts(rejections: usize, trials: usize) -> RejectionRate {
        let rate = rejections as f64 / trials as f64;
        RejectionRate {
            rejections,
            trials,
            rate,
            stderr: (rate * (1.0 - rate) / trials as f64).sqrt(),
        }
    }
}

/// Tests `trials` independent draws from `observed` against `cfg.null`.
/// Trial `t` uses seed `seed + t` for both its observed graph and its test.
pub fn rejection_rate(observed: &GeneratorSpec, cfg: &TestConfig, trials: usize, seed: u64) -> Result<RejectionRate> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    observed.validate()?;
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let trial_seed = seed.wrapping_add(t);
            let x = observed.sample(derive_seed(trial_seed, STREAM_TRIAL_GRAPH, 0))?;
            let trial_cfg = TestConfig {
                seed: trial_seed,
                ..cfg.clone()
            };
            run_test(&x, &trial_cfg).map(|o| o.reject)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(RejectionRate::from_counts(outcomes.iter().filter(|&&r| r).count(), trials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Topology;

    #[test]
    fn threshold_rule() {
        let taus: Vec<f64> = (1..=19).map(f64::from).collect();
        // ceil(0.95 * 20) = 19
        assert_eq!(empirical_threshold(&taus, 0.05), 19.0);
        let taus: Vec<f64> = (1..=200).map(f64::from).collect();
        // ceil(0.95 * 201) = 191
        assert_eq!(empirical_threshold(&taus, 0.05), 191.0);
        assert_eq!(empirical_threshold(&[1.0, 2.0], 0.05), f64::INFINITY);
    }

    #[test]
    fn p_value_bounds() {
        let taus = [0.1, 0.2, 0.3];
        assert_eq!(monte_carlo_p_value(1.0, &taus), 0.25);
        assert_eq!(monte_carlo_p_value(0.0, &taus), 1.0);
        assert_eq!(monte_carlo_p_value(0.2, &taus), 0.75);
    }

    fn small_cfg(null: NullModel, kernel: KernelSpec) -> TestConfig {
        TestConfig {
            resample_size: 30,
            simulations: 39,
            seed: 5,
            ..TestConfig::new(null, kernel)
        }
    }

    #[test]
    fn literal_constant_never_rejects() {
        let m = ErgmModel::e2s(-2.0, 0.0, 10).unwrap();
        let mut cfg = small_cfg(NullModel::Ergm(m), KernelSpec::Constant);
        cfg.convention = SteinConvention::Literal;
        let out = run_test(&Graph::complete(10), &cfg).unwrap();
        assert_eq!(out.tau, 0.0);
        assert!(out.null_taus.iter().all(|&t| t == 0.0));
        assert!(!out.reject);
        assert_eq!(out.p_value, 1.0);
    }

    #[test]
    fn deterministic_outcome() {
        let m = ErgmModel::e2s(-2.0, 0.0, 10).unwrap();
        let cfg = small_cfg(NullModel::Ergm(m.clone()), KernelSpec::wl(1));
        let x = m.sample(77);
        let a = run_test(&x, &cfg).unwrap();
        let b = run_test(&x, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.p_value >= 1.0 / 40.0 && a.p_value <= 1.0);
        assert_eq!(a.reject, a.tau > a.threshold);
    }

    #[test]
    fn dense_graph_rejected_against_sparse_null() {
        let null = ErgmModel::e2s(-2.0, 0.0, 12).unwrap();
        let cfg = small_cfg(NullModel::Ergm(null), KernelSpec::wl(1));
        let complete = GeneratorSpec::Grg { n: 12, r: 0.75, topology: Topology::Torus };
        let rate = rejection_rate(&complete, &cfg, 5, 0).unwrap();
        assert_eq!(rate.rate, 1.0);
        assert_eq!(rate.stderr, 0.0);
    }

    #[test]
    fn agrasst_generator_null() {
        let generator = GeneratorSpec::Grg { n: 12, r: 0.3, topology: Topology::Torus };
        let null = NullModel::Generator {
            generator: generator.clone(),
            kind: SummaryStatisticKind::Bidegree,
            fit_samples: 20,
        };
        let cfg = small_cfg(null, KernelSpec::Constant);
        let rate = rejection_rate(&generator, &cfg, 1, 3).unwrap();
        assert!(rate.rate == 0.0 || rate.rate == 1.0);
        let samples = generator.sample_many(15, 1, 0).unwrap();
        let cfg = small_cfg(NullModel::Samples { samples, kind: SummaryStatisticKind::Density }, KernelSpec::wl(1));
        let out = run_test(&generator.sample(99).unwrap(), &cfg).unwrap();
        assert_eq!(out.null_taus.len(), 15);
    }

    #[test]
    fn config_validation() {
        let m = ErgmModel::edge_only(0.0, 5).unwrap();
        let mut cfg = small_cfg(NullModel::Ergm(m), KernelSpec::Constant);
        cfg.level = 1.0;
        assert!(run_test(&Graph::empty(5), &cfg).is_err());
        cfg.level = 0.05;
        assert!(matches!(run_test(&Graph::empty(6), &cfg), Err(Error::IncompatibleGraphs(_))));
        cfg.simulations = 0;
        assert!(run_test(&Graph::empty(5), &cfg).is_err());
    }
}
