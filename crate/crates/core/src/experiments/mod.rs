//! Experiment drivers behind the command-line tool: power curves, assessment
//! of a sample set against an observed network, and kernel runtime tables.

mod config;

use std::collections::HashSet;
use std::fs::OpenOptions;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::ergm::{CountScaling, ErgmModel, ErgmTerm};
use crate::error::{Error, Result};
use crate::generators::{derive_seed, GeneratorSpec, SampleDirectory, Topology};
use crate::graph::{read_graph, SummaryStatisticKind};
use crate::kernels::KernelSpec;
use crate::mctest::{rejection_rate, run_test, NullModel, TestConfig};
use crate::stein::{kss_squared, PairSelection, ScoreSource, SteinConvention};

pub use config::ConfigFile;

pub const POWER_HEADER: [&str; 9] = [
    "experiment", "kernel", "param", "statistic", "alt_value", "rate", "stderr", "trials", "elapsed_ms",
];
pub const ASSESS_HEADER: [&str; 8] = ["kernel", "param", "statistic", "tau", "threshold", "p_value", "reject", "nulls"];
pub const RUNTIME_HEADER: [&str; 9] = ["kernel", "param", "regime", "n", "min_ms", "avg_ms", "max_ms", "graphs", "repeats"];

const STREAM_CELL: u64 = 100;
const STREAM_RUNTIME: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    PowerCurve,
    AssessSamples,
    RuntimeBench,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::PowerCurve => "power-curve",
            ExperimentKind::AssessSamples => "assess-samples",
            ExperimentKind::RuntimeBench => "runtime-bench",
        }
    }
}

/// Command-line settings shared by every experiment.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    pub seed: u64,
    pub workers: usize,
}

/// Test statistic: exact ERGM conditionals or estimated ones binned by a
/// summary statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StatisticChoice {
    Exact,
    Estimated(SummaryStatisticKind),
}

impl StatisticChoice {
    pub fn name(self) -> &'static str {
        match self {
            StatisticChoice::Exact => "exact",
            StatisticChoice::Estimated(kind) => kind.name(),
        }
    }
}

impl std::str::FromStr for StatisticChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<StatisticChoice> {
        match s.trim() {
            "exact" | "gkss" => Ok(StatisticChoice::Exact),
            other => other.parse().map(StatisticChoice::Estimated),
        }
    }
}

fn check_experiment(cfg: &ConfigFile, kind: ExperimentKind) -> Result<()> {
    if let Some(name) = cfg.string("experiment")? {
        if name != kind.name() {
            return Err(cfg.error("experiment", format!("config is for `{name}`, command is `{}`", kind.name())));
        }
    }
    Ok(())
}

/// Reads the model in `[section]`: `model = ergm | grg-torus | grg-square | ba`.
pub fn parse_model(cfg: &ConfigFile, section: &str) -> Result<GeneratorSpec> {
    let key = |k: &str| format!("{section}.{k}");
    let model = cfg.require_string(&key("model"))?;
    let n: usize = cfg.require(&key("n"))?;
    let spec = match model.as_str() {
        "ergm" | "e2s" => {
            let terms: Vec<ErgmTerm> = cfg
                .list(&key("terms"))?
                .unwrap_or_else(|| vec![ErgmTerm::Edge, ErgmTerm::TwoStar]);
            let beta: Vec<f64> = cfg.require_list(&key("beta"))?;
            let scaling = match cfg.string(&key("scaling"))?.as_deref() {
                None | Some("raw") => CountScaling::Raw,
                Some("injective") => CountScaling::Injective,
                Some(other) => return Err(cfg.error(&key("scaling"), format!("unknown scaling `{other}`"))),
            };
            let m = ErgmModel::new(terms, beta, n).map_err(|e| cfg.error(&key("beta"), e.to_string()))?;
            GeneratorSpec::Ergm(m.with_scaling(scaling))
        }
        "grg-torus" | "grg-square" => GeneratorSpec::Grg {
            n,
            r: cfg.require(&key("r"))?,
            topology: if model == "grg-torus" { Topology::Torus } else { Topology::Square },
        },
        "ba" | "barabasi-albert" => GeneratorSpec::BarabasiAlbert {
            n,
            m: cfg.require(&key("m"))?,
            alpha: cfg.get_or(&key("alpha"), 1.0)?,
        },
        other => return Err(cfg.error(&key("model"), format!("unknown model `{other}`"))),
    };
    spec.validate().map_err(|e| cfg.error(&key("model"), e.to_string()))?;
    Ok(spec)
}

/// `base` with the named parameter set to `value`.
pub fn with_parameter(base: &GeneratorSpec, parameter: &str, value: f64) -> Result<GeneratorSpec> {
    let bad = || Error::InvalidArgument(format!("parameter `{parameter}` does not apply to this model"));
    let spec = match (base, parameter) {
        (GeneratorSpec::Ergm(m), "beta1" | "edge") => GeneratorSpec::Ergm(m.with_coefficient(ErgmTerm::Edge, value)),
        (GeneratorSpec::Ergm(m), "beta2" | "twostar") => {
            GeneratorSpec::Ergm(m.with_coefficient(ErgmTerm::TwoStar, value))
        }
        (GeneratorSpec::Grg { n, topology, .. }, "r") => GeneratorSpec::Grg {
            n: *n,
            r: value,
            topology: *topology,
        },
        (GeneratorSpec::BarabasiAlbert { n, m, .. }, "alpha") => GeneratorSpec::BarabasiAlbert {
            n: *n,
            m: *m,
            alpha: value,
        },
        (GeneratorSpec::BarabasiAlbert { n, alpha, .. }, "m") if value.fract() == 0.0 && value >= 1.0 => {
            GeneratorSpec::BarabasiAlbert {
                n: *n,
                m: value as usize,
                alpha: *alpha,
            }
        }
        _ => return Err(bad()),
    };
    spec.validate()?;
    Ok(spec)
}

struct TestSettings {
    kernels: Vec<KernelSpec>,
    convention: SteinConvention,
    resample_size: usize,
    simulations: usize,
    level: f64,
}

fn parse_test_settings(cfg: &ConfigFile) -> Result<TestSettings> {
    let kernels: Vec<KernelSpec> = cfg.require_list("test.kernels")?;
    let settings = TestSettings {
        kernels,
        convention: cfg.get_or("test.convention", SteinConvention::FlipFeature)?,
        resample_size: cfg.get_or("test.b", 200)?,
        simulations: cfg.get_or("test.l", 200)?,
        level: cfg.get_or("test.level", 0.05)?,
    };
    if settings.resample_size == 0 {
        return Err(cfg.error("test.b", "must be at least 1"));
    }
    if settings.simulations == 0 {
        return Err(cfg.error("test.l", "must be at least 1"));
    }
    if !(settings.level > 0.0 && settings.level < 1.0) {
        return Err(cfg.error("test.level", "must lie in (0, 1)"));
    }
    Ok(settings)
}

fn open_writer(path: &Path, header: &[&str], append: bool) -> Result<csv::Writer<std::fs::File>> {
    let file = OpenOptions::new()
        .create(true)
        .write(true)
        .append(append)
        .truncate(!append)
        .open(path)?;
    let mut writer = csv::Writer::from_writer(file);
    if !append {
        writer.write_record(header)?;
        writer.flush()?;
    }
    Ok(writer)
}

/// One row of the power-curve table.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerRow {
    pub experiment: String,
    pub kernel: String,
    pub param: String,
    pub statistic: String,
    pub alt_value: f64,
    pub rate: f64,
    pub stderr: f64,
    pub trials: usize,
    pub elapsed_ms: f64,
}

impl PowerRow {
    fn key(&self) -> [String; 5] {
        [
            self.experiment.clone(),
            self.kernel.clone(),
            self.param.clone(),
            self.statistic.clone(),
            format!("{}", self.alt_value),
        ]
    }

    fn record(&self) -> Vec<String> {
        let mut r: Vec<String> = self.key().into();
        r.extend([
            format!("{}", self.rate),
            format!("{}", self.stderr),
            self.trials.to_string(),
            format!("{:.3}", self.elapsed_ms),
        ]);
        r
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PowerSummary {
    pub computed: Vec<PowerRow>,
    pub skipped: usize,
}

/// Keys of the rows already present in a power-curve output file.
fn completed_cells(path: &Path) -> Result<Option<HashSet<[String; 5]>>> {
    if !path.exists() || std::fs::metadata(path)?.len() == 0 {
        return Ok(None);
    }
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != POWER_HEADER {
        return Err(Error::InvalidArgument(format!(
            "{} exists but is not a power-curve table",
            path.display()
        )));
    }
    let mut done = HashSet::new();
    for record in reader.records() {
        let record = record?;
        done.insert([0, 1, 2, 3, 4].map(|k| record[k].to_string()));
    }
    Ok(Some(done))
}

/// For each kernel and alternative value, the rejection rate of the null
/// model on graphs drawn from the alternative. Rows already in the output
/// file are skipped, so an interrupted run resumes where it stopped.
pub fn cmd_power_curve(cfg: &ConfigFile, opts: &RunOptions) -> Result<PowerSummary> {
    check_experiment(cfg, ExperimentKind::PowerCurve)?;
    let experiment = cfg.string("name")?.unwrap_or_else(|| cfg.stem().to_string());
    let null = parse_model(cfg, "null")?;
    let parameter = cfg.require_string("alternative.parameter")?;
    let values: Vec<f64> = cfg.require_list("alternative.values")?;
    let alternatives = values
        .iter()
        .map(|&v| with_parameter(&null, &parameter, v).map_err(|e| cfg.error("alternative.parameter", e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    let settings = parse_test_settings(cfg)?;
    let default_statistic = match null {
        GeneratorSpec::Ergm(_) => StatisticChoice::Exact,
        _ => StatisticChoice::Estimated(SummaryStatisticKind::Bidegree),
    };
    let statistic: StatisticChoice = cfg.get_or("test.statistic", default_statistic)?;
    let trials: usize = cfg.get_or("test.trials", 100)?;
    let fit_samples: usize = cfg.get_or("test.fit_samples", 100)?;
    if trials == 0 {
        return Err(cfg.error("test.trials", "must be at least 1"));
    }
    if fit_samples == 0 {
        return Err(cfg.error("test.fit_samples", "must be at least 1"));
    }
    let null_model = match (statistic, &null) {
        (StatisticChoice::Exact, GeneratorSpec::Ergm(m)) => NullModel::Ergm(m.clone()),
        (StatisticChoice::Exact, _) => {
            return Err(cfg.error("test.statistic", "exact conditionals need an ERGM null"));
        }
        (StatisticChoice::Estimated(kind), _) => NullModel::Generator {
            generator: null.clone(),
            kind,
            fit_samples,
        },
    };
    cfg.finish()?;

    let done = completed_cells(&opts.out)?;
    let mut writer = open_writer(&opts.out, &POWER_HEADER, done.is_some())?;
    let done = done.unwrap_or_default();
    let mut summary = PowerSummary::default();
    for (ki, kernel) in settings.kernels.iter().enumerate() {
        for (vi, (value, alternative)) in values.iter().zip(&alternatives).enumerate() {
            let mut row = PowerRow {
                experiment: experiment.clone(),
                kernel: kernel.name().to_string(),
                param: kernel.param(),
                statistic: statistic.name().to_string(),
                alt_value: *value,
                rate: 0.0,
                stderr: 0.0,
                trials,
                elapsed_ms: 0.0,
            };
            if done.contains(&row.key()) {
                summary.skipped += 1;
                continue;
            }
            let cell = (ki * values.len() + vi) as u64;
            let test = TestConfig {
                null: null_model.clone(),
                kernel: *kernel,
                convention: settings.convention,
                resample_size: settings.resample_size,
                simulations: settings.simulations,
                level: settings.level,
                seed: 0,
            };
            let start = Instant::now();
            let rate = rejection_rate(alternative, &test, trials, derive_seed(opts.seed, STREAM_CELL, cell))?;
            row.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
            row.rate = rate.rate;
            row.stderr = rate.stderr;
            writer.write_record(row.record())?;
            writer.flush()?;
            summary.computed.push(row);
        }
    }
    Ok(summary)
}

/// One kernel and statistic combination of a sample assessment.
#[derive(Debug, Clone, PartialEq)]
pub struct AssessRow {
    pub kernel: String,
    pub param: String,
    pub statistic: String,
    pub tau: f64,
    pub threshold: f64,
    pub p_value: f64,
    pub reject: bool,
    pub nulls: usize,
}

fn ingest_error(path: &Path, e: Error) -> Error {
    match e {
        Error::Ingest { .. } => e,
        other => Error::Ingest {
            path: path.to_path_buf(),
            message: other.to_string(),
        },
    }
}

/// Tests one observed network against a directory of generator samples for
/// every kernel and statistic kind. The samples fit the estimator and serve
/// as the null networks.
pub fn cmd_assess_samples(cfg: &ConfigFile, opts: &RunOptions) -> Result<Vec<AssessRow>> {
    check_experiment(cfg, ExperimentKind::AssessSamples)?;
    let observed_path = cfg
        .path("assess.observed")?
        .ok_or_else(|| cfg.error("assess.observed", "missing required key"))?;
    let samples_path = cfg
        .path("assess.samples")?
        .ok_or_else(|| cfg.error("assess.samples", "missing required key"))?;
    let kinds: Vec<SummaryStatisticKind> = cfg
        .list("assess.statistics")?
        .unwrap_or_else(|| vec![SummaryStatisticKind::Bidegree]);
    if kinds.is_empty() {
        return Err(cfg.error("assess.statistics", "list must not be empty"));
    }
    let settings = parse_test_settings(cfg)?;
    cfg.finish()?;

    let observed = read_graph(&observed_path).map_err(|e| ingest_error(&observed_path, e))?;
    let samples = SampleDirectory::open(&samples_path)?;
    if samples.n() != observed.n() {
        return Err(Error::Ingest {
            path: samples_path,
            message: format!("samples have {} vertices, observed graph has {}", samples.n(), observed.n()),
        });
    }
    let samples = samples.into_graphs();
    let mut writer = open_writer(&opts.out, &ASSESS_HEADER, false)?;
    let mut rows = Vec::new();
    for kernel in &settings.kernels {
        for &kind in &kinds {
            let test = TestConfig {
                null: NullModel::Samples {
                    samples: samples.clone(),
                    kind,
                },
                kernel: *kernel,
                convention: settings.convention,
                resample_size: settings.resample_size,
                simulations: settings.simulations,
                level: settings.level,
                seed: opts.seed,
            };
            let outcome = run_test(&observed, &test)?;
            let row = AssessRow {
                kernel: kernel.name().to_string(),
                param: kernel.param(),
                statistic: kind.name().to_string(),
                tau: outcome.tau,
                threshold: outcome.threshold,
                p_value: outcome.p_value,
                reject: outcome.reject,
                nulls: outcome.null_taus.len(),
            };
            writer.write_record([
                row.kernel.clone(),
                row.param.clone(),
                row.statistic.clone(),
                format!("{}", row.tau),
                format!("{}", row.threshold),
                format!("{}", row.p_value),
                row.reject.to_string(),
                row.nulls.to_string(),
            ])?;
            rows.push(row);
        }
    }
    writer.flush()?;
    Ok(rows)
}

/// Timing summary for one kernel, density regime and graph size.
#[derive(Debug, Clone, PartialEq)]
pub struct RuntimeRow {
    pub kernel: String,
    pub param: String,
    pub regime: String,
    pub n: usize,
    pub min_ms: f64,
    pub avg_ms: f64,
    pub max_ms: f64,
    pub graphs: usize,
    pub repeats: usize,
}

/// Sparse `(-2, 0)` or dense `(1, 0)` edge/two-star model.
pub fn regime_model(regime: &str, n: usize) -> Result<ErgmModel> {
    match regime {
        "sparse" => ErgmModel::e2s(-2.0, 0.0, n),
        "dense" => ErgmModel::e2s(1.0, 0.0, n),
        other => Err(Error::InvalidArgument(format!("unknown regime `{other}`"))),
    }
}

/// Median wall time in milliseconds of `repeats` runs of `f`, after one
/// discarded warm-up run.
pub fn median_runtime_ms(repeats: usize, mut f: impl FnMut() -> Result<f64>) -> Result<f64> {
    f()?;
    let mut times = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let start = Instant::now();
        std::hint::black_box(f()?);
        times.push(start.elapsed().as_secs_f64() * 1e3);
    }
    times.sort_by(f64::total_cmp);
    let mid = times.len() / 2;
    Ok(if times.len() % 2 == 1 {
        times[mid]
    } else {
        0.5 * (times[mid - 1] + times[mid])
    })
}

/// Per graph, the median runtime of the resampled statistic; over graphs,
/// the minimum, mean and maximum of those medians.
pub fn runtime_row(kernel: &KernelSpec, regime: &str, n: usize, graphs: usize, repeats: usize, resample_size: usize, seed: u64) -> Result<RuntimeRow> {
    let model = regime_model(regime, n)?;
    let stream = STREAM_RUNTIME + n as u64 * 2 + (regime == "dense") as u64;
    let mut medians = Vec::with_capacity(graphs);
    for k in 0..graphs as u64 {
        let x = model.sample(derive_seed(seed, stream, k));
        let selection = PairSelection::Resample {
            size: resample_size,
            seed: derive_seed(seed, stream + 1000, k),
        };
        medians.push(median_runtime_ms(repeats, || {
            kss_squared(ScoreSource::Exact(&model), &x, kernel, SteinConvention::FlipFeature, selection)
        })?);
    }
    let min = medians.iter().copied().fold(f64::INFINITY, f64::min);
    let max = medians.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(RuntimeRow {
        kernel: kernel.name().to_string(),
        param: kernel.param(),
        regime: regime.to_string(),
        n,
        min_ms: min,
        avg_ms: medians.iter().sum::<f64>() / graphs as f64,
        max_ms: max,
        graphs,
        repeats,
    })
}

/// Runtime table over kernels, density regimes and graph sizes.
pub fn cmd_runtime_bench(cfg: &ConfigFile, opts: &RunOptions) -> Result<Vec<RuntimeRow>> {
    check_experiment(cfg, ExperimentKind::RuntimeBench)?;
    let kernels: Vec<KernelSpec> = cfg.require_list("test.kernels")?;
    let resample_size: usize = cfg.get_or("test.b", 200)?;
    let regimes: Vec<String> = cfg
        .list("runtime.regimes")?
        .unwrap_or_else(|| vec!["sparse".into(), "dense".into()]);
    for r in &regimes {
        regime_model(r, 2).map_err(|e| cfg.error("runtime.regimes", e.to_string()))?;
    }
    let sizes: Vec<usize> = cfg.list("runtime.sizes")?.unwrap_or_else(|| vec![20, 40]);
    let graphs: usize = cfg.get_or("runtime.graphs", 100)?;
    let repeats: usize = cfg.get_or("runtime.repeats", 10)?;
    if graphs == 0 || repeats == 0 {
        return Err(cfg.error("runtime.graphs", "graphs and repeats must be at least 1"));
    }
    if resample_size == 0 {
        return Err(cfg.error("test.b", "must be at least 1"));
    }
    if let Some(&n) = sizes.iter().find(|&&n| n < 2) {
        return Err(cfg.error("runtime.sizes", format!("graph size {n} is below 2")));
    }
    cfg.finish()?;

    let mut writer = open_writer(&opts.out, &RUNTIME_HEADER, false)?;
    let mut rows = Vec::new();
    for kernel in &kernels {
        for regime in &regimes {
            for &n in &sizes {
                let row = runtime_row(kernel, regime, n, graphs, repeats, resample_size, opts.seed)?;
                writer.write_record([
                    row.kernel.clone(),
                    row.param.clone(),
                    row.regime.clone(),
                    row.n.to_string(),
                    format!("{:.4}", row.min_ms),
                    format!("{:.4}", row.avg_ms),
                    format!("{:.4}", row.max_ms),
                    row.graphs.to_string(),
                    row.repeats.to_string(),
                ])?;
                writer.flush()?;
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// Loads `config` and runs `kind` on a pool of `opts.workers` threads.
pub fn run_experiment(kind: ExperimentKind, config: &Path, opts: &RunOptions) -> Result<()> {
    let cfg = ConfigFile::load(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    pool.install(|| match kind {
        ExperimentKind::PowerCurve => cmd_power_curve(&cfg, opts).map(|_| ()),
        ExperimentKind::AssessSamples => cmd_assess_samples(&cfg, opts).map(|_| ()),
        ExperimentKind::RuntimeBench => cmd_runtime_bench(&cfg, opts).map(|_| ()),
    })
}

/// Process exit code for an error: 2 for configuration, 3 for ingestion,
/// 1 otherwise.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Config { .. } => 2,
        Error::Ingest { .. } => 3,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(dir: &Path, name: &str) -> RunOptions {
        RunOptions {
            out: dir.join(name),
            seed: 7,
            workers: 1,
        }
    }

    const POWER: &str = "
experiment = power-curve
name = tiny
[null]
model = ergm
n = 8
beta = [-1.0, 0.0]
[alternative]
parameter = beta2
values = [0.0, 0.3]
[test]
kernels = [const, wl:1]
B = 20
l = 19
trials = 3
";

    #[test]
    fn power_curve_writes_and_resumes() {
        let dir = tempfile::tempdir().unwrap();
        let o = opts(dir.path(), "power.csv");
        let cfg = ConfigFile::parse(POWER).unwrap();
        let first = cmd_power_curve(&cfg, &o).unwrap();
        assert_eq!(first.computed.len(), 4);
        let text = std::fs::read_to_string(&o.out).unwrap();
        assert!(text.starts_with("experiment,kernel,param,statistic,alt_value,rate,stderr,trials,elapsed_ms\n"));
        assert_eq!(text.lines().count(), 5);
        for row in &first.computed {
            let count = row.rate * row.trials as f64;
            assert!((count - count.round()).abs() < 1e-9);
        }
        let again = cmd_power_curve(&ConfigFile::parse(POWER).unwrap(), &o).unwrap();
        assert!(again.computed.is_empty());
        assert_eq!(again.skipped, 4);
        assert_eq!(std::fs::read_to_string(&o.out).unwrap(), text);
    }

    #[test]
    fn power_curve_is_stable_apart_from_timing() {
        let dir = tempfile::tempdir().unwrap();
        let strip = |p: &Path| {
            std::fs::read_to_string(p)
                .unwrap()
                .lines()
                .map(|l| l.rsplit_once(',').unwrap().0.to_string())
                .collect::<Vec<_>>()
        };
        let a = opts(dir.path(), "a.csv");
        let b = opts(dir.path(), "b.csv");
        cmd_power_curve(&ConfigFile::parse(POWER).unwrap(), &a).unwrap();
        cmd_power_curve(&ConfigFile::parse(POWER).unwrap(), &b).unwrap();
        assert_eq!(strip(&a.out), strip(&b.out));
    }

    #[test]
    fn config_errors() {
        let dir = tempfile::tempdir().unwrap();
        let o = opts(dir.path(), "x.csv");
        let no_kernels = POWER.replace("kernels = [const, wl:1]", "kernels = []");
        assert!(matches!(
            cmd_power_curve(&ConfigFile::parse(&no_kernels).unwrap(), &o),
            Err(Error::Config { .. })
        ));
        let typo = POWER.replace("trials = 3", "trails = 3");
        assert!(matches!(cmd_power_curve(&ConfigFile::parse(&typo).unwrap(), &o), Err(Error::Config { .. })));
        let wrong = POWER.replace("parameter = beta2", "parameter = r");
        let err = cmd_power_curve(&ConfigFile::parse(&wrong).unwrap(), &o).unwrap_err();
        assert_eq!(exit_code(&err), 2);
    }

    #[test]
    fn alternative_parameters() {
        let grg = GeneratorSpec::Grg { n: 5, r: 0.3, topology: Topology::Torus };
        assert_eq!(
            with_parameter(&grg, "r", 0.45).unwrap(),
            GeneratorSpec::Grg { n: 5, r: 0.45, topology: Topology::Torus }
        );
        let ba = GeneratorSpec::BarabasiAlbert { n: 10, m: 1, alpha: 1.0 };
        assert!(with_parameter(&ba, "m", 2.5).is_err());
        assert!(with_parameter(&ba, "m", 10.0).is_err());
        assert!(with_parameter(&ba, "alpha", 2.0).is_ok());
    }

    #[test]
    fn assess_samples_missing_directory() {
        let dir = tempfile::tempdir().unwrap();
        crate::graph::write_graph(&crate::graph::Graph::empty(6), dir.path().join("obs.txt")).unwrap();
        let text = "experiment = assess-samples\n[assess]\nobserved = obs.txt\nsamples = nowhere\n[test]\nkernels = [const]\n";
        let cfg_path = dir.path().join("assess.conf");
        std::fs::write(&cfg_path, text).unwrap();
        let err = run_experiment(ExperimentKind::AssessSamples, &cfg_path, &opts(dir.path(), "r.csv")).unwrap_err();
        assert_eq!(exit_code(&err), 3);
    }

    #[test]
    fn runtime_rows_are_ordered_summaries() {
        let row = runtime_row(&KernelSpec::wl(1), "dense", 10, 3, 3, 20, 1).unwrap();
        assert!(row.min_ms <= row.avg_ms && row.avg_ms <= row.max_ms);
        assert_eq!((row.graphs, row.repeats), (3, 3));
    }
}
