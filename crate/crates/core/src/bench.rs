//! Metrics, the repeated-run experiment harness with median aggregation,
//! and report serialization.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{
    circle_constraint_holds, load_csv, CsvSchema, Dataset, DatasetOracle, ExternalOracle, Oracle, SyntheticKind,
    SyntheticOracle, DEFAULT_TIMEOUT,
};
use crate::engine::{self, AcquisitionConfig, EngineConfig, Phase, RunStatus, Strategy};
use crate::error::{Error, Result};
use crate::idw::{CoincidenceThreshold, Idw, WeightKind};
use crate::optim::PsoConfig;
use crate::predictor::{Mlp, MlpConfig, Predictor};
use crate::space::{
    compute_bounds, dedup_pool, Bounds, FeatureVector, ProblemSpec, ScalingTransform, TargetKind, TargetVector,
};

/// Root-mean-square error over all target components.
pub fn rmse<Y: AsRef<[f64]>>(truth: &[Y], pred: &[Y]) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::NoLabeledSamples);
    }
    if truth.len() != pred.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: pred.len(),
        });
    }
    let mut total = 0.0;
    let mut count = 0usize;
    for (t, p) in truth.iter().zip(pred) {
        let (t, p) = (t.as_ref(), p.as_ref());
        if t.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: t.len(),
                got: p.len(),
            });
        }
        total += t.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        count += t.len();
    }
    Ok((total / count as f64).sqrt())
}

fn class_of(y: &[f64]) -> usize {
    if y.len() == 1 {
        usize::from(y[0] >= 0.5)
    } else {
        let mut best = 0;
        for i in 1..y.len() {
            if y[i] > y[best] {
                best = i;
            }
        }
        best
    }
}

/// Fraction of rows whose predicted class matches the label. Single-output
/// rows are thresholded at 0.5, otherwise the argmax is compared.
pub fn accuracy<Y: AsRef<[f64]>>(truth: &[Y], pred: &[Y]) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::NoLabeledSamples);
    }
    if truth.len() != pred.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: pred.len(),
        });
    }
    let hits = truth
        .iter()
        .zip(pred)
        .filter(|(t, p)| class_of(t.as_ref()) == class_of(p.as_ref()))
        .count();
    Ok(hits as f64 / truth.len() as f64)
}

/// Median of finite values; the mean of the two middle values for even
/// counts. `None` when empty.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let h = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[h] } else { 0.5 * (v[h - 1] + v[h]) })
}

/// Box for population-mode external oracles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsFile {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ProblemConfig {
    /// `x⁴ sin²(x²/3)` on a uniform grid over `[-3, 3]`.
    QuarticSine {
        #[serde(default = "default_pool_size")]
        pool_size: usize,
    },
    /// Unit-disc indicator on random points of `[-2, 2]²`, redrawn per run.
    Circle {
        #[serde(default = "default_pool_size")]
        pool_size: usize,
        #[serde(default)]
        constrained: bool,
    },
    Dataset {
        csv: PathBuf,
        schema: CsvSchema,
    },
    /// Child process answering queries over a box.
    External {
        command: String,
        bounds: BoundsFile,
        n_targets: usize,
        task: TargetKind,
        #[serde(default = "default_timeout_secs")]
        timeout_secs: f64,
    },
}

fn default_pool_size() -> usize {
    1000
}

fn default_timeout_secs() -> f64 {
    DEFAULT_TIMEOUT.as_secs_f64()
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig::QuarticSine {
            pool_size: default_pool_size(),
        }
    }
}

impl ProblemConfig {
    pub fn task(&self) -> TargetKind {
        match self {
            ProblemConfig::QuarticSine { .. } => TargetKind::Regression,
            ProblemConfig::Circle { .. } => TargetKind::Classification,
            ProblemConfig::Dataset { schema, .. } => schema.task.unwrap_or(TargetKind::Regression),
            ProblemConfig::External { task, .. } => *task,
        }
    }

    /// Network used when the experiment does not configure one.
    pub fn default_predictor(&self) -> MlpConfig {
        match self {
            ProblemConfig::QuarticSine { .. } => MlpConfig::regression(),
            ProblemConfig::Circle { .. } => MlpConfig {
                warm_start: true,
                ..MlpConfig::classification(vec![10, 10])
            },
            _ => match self.task() {
                TargetKind::Regression => MlpConfig {
                    warm_start: true,
                    ..MlpConfig::regression()
                },
                TargetKind::Classification => MlpConfig {
                    warm_start: true,
                    ..MlpConfig::classification(vec![10, 10, 10])
                },
            },
        }
    }
}

/// Everything needed to reproduce an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemConfig,
    pub strategies: Vec<Strategy>,
    pub delta: f64,
    pub omega: f64,
    pub weight: WeightKind,
    pub coincidence_eps: f64,
    pub n_init: usize,
    pub n_max: usize,
    pub batch: usize,
    pub runs: usize,
    pub seed: u64,
    /// Standard deviation of additive noise on synthetic regression targets.
    pub noise: f64,
    pub enum_threshold: usize,
    pub density_neighbors: Option<usize>,
    pub pso: PsoConfig,
    pub predictor: Option<MlpConfig>,
    /// Worker threads for parallel runs; all available cores when unset.
    pub workers: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let engine = EngineConfig::default();
        Self {
            problem: ProblemConfig::default(),
            strategies: Strategy::ALL.to_vec(),
            delta: 0.0,
            omega: 0.0,
            weight: WeightKind::default(),
            coincidence_eps: 1e-12,
            n_init: engine.n_init,
            n_max: engine.n_max,
            batch: engine.batch,
            runs: 50,
            seed: 0,
            noise: 0.0,
            enum_threshold: engine.enum_threshold,
            density_neighbors: None,
            pso: PsoConfig::default(),
            predictor: None,
            workers: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::config("runs must be at least 1"));
        }
        if self.strategies.is_empty() {
            return Err(Error::config("no strategy selected"));
        }
        if !(self.noise >= 0.0) {
            return Err(Error::config("noise must be non-negative"));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers must be at least 1"));
        }
        self.acquisition()?;
        self.engine(Strategy::Ideal, 0).validate()?;
        self.predictor_config().validate()
    }

    pub fn predictor_config(&self) -> MlpConfig {
        self.predictor.clone().unwrap_or_else(|| self.problem.default_predictor())
    }

    fn acquisition(&self) -> Result<AcquisitionConfig<f64>> {
        let mut acq = AcquisitionConfig::new(self.delta, self.omega)?;
        acq.idw = Idw::new(self.weight, CoincidenceThreshold::new(self.coincidence_eps)?);
        Ok(acq)
    }

    fn engine(&self, strategy: Strategy, seed: u64) -> EngineConfig {
        EngineConfig {
            n_init: self.n_init,
            n_max: self.n_max,
            batch: self.batch,
            enum_threshold: self.enum_threshold,
            strategy,
            pso: self.pso.clone(),
            density_neighbors: self.density_neighbors,
            seed,
        }
    }
}

/// Seed for one purpose of one run, derived from the master seed.
pub fn derive_seed(master: u64, run: usize, purpose: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream((run as u64) << 8 | purpose);
    rng.next_u64()
}

const PURPOSE_ENGINE: u64 = 0;
const PURPOSE_ORACLE: u64 = 1;
const PURPOSE_POOL: u64 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Rmse,
    Accuracy,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvaluationSet {
    /// Dense grid over the feature box, scored against noise-free values.
    Grid,
    FullPool,
    FeasiblePool,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub queries: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub run: usize,
    pub seed: u64,
    pub status: RunStatus,
    pub n_init_total: usize,
    pub queries: usize,
    pub retrains: usize,
    /// Infeasible answers among the queries made after initialization.
    pub infeasible_after_init: usize,
    pub infeasible_fraction_after_init: f64,
    pub curve: Vec<CurvePoint>,
    /// Pool indices in query order (pool problems only).
    pub pool_indices: Vec<usize>,
}

impl RunReport {
    pub fn initial_metric(&self) -> Option<f64> {
        self.curve.first().map(|p| p.value)
    }

    pub fn final_metric(&self) -> Option<f64> {
        self.curve.last().map(|p| p.value)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyReport {
    pub strategy: Strategy,
    pub runs: Vec<RunReport>,
    pub failed_runs: usize,
    /// Median across the runs that have a value at each query count.
    pub median_curve: Vec<CurvePoint>,
    pub median_initial: Option<f64>,
    pub median_final: Option<f64>,
    pub median_infeasible_fraction_after_init: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub metric: MetricKind,
    pub evaluation_set: EvaluationSet,
    pub n_features: usize,
    pub n_targets: usize,
    /// Class names in encoding order, for dataset classification.
    pub class_labels: Option<Vec<String>>,
    pub strategies: Vec<StrategyReport>,
}

impl ExperimentReport {
    pub fn strategy(&self, s: Strategy) -> Option<&StrategyReport> {
        self.strategies.iter().find(|r| r.strategy == s)
    }

    /// Whether every run of every strategy failed to initialize.
    pub fn all_runs_failed(&self) -> bool {
        self.strategies.iter().all(|s| s.failed_runs == s.runs.len())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// `strategy,run,queries,value` for every retrain of every run.
    pub fn curves_csv(&self) -> String {
        let mut out = String::from("strategy,run,queries,value\n");
        for s in &self.strategies {
            for r in &s.runs {
                for p in &r.curve {
                    let _ = writeln!(out, "{},{},{},{}", s.strategy, r.run, p.queries, p.value);
                }
            }
        }
        out
    }

    pub fn median_curves_csv(&self) -> String {
        let mut out = String::from("strategy,queries,median\n");
        for s in &self.strategies {
            for p in &s.median_curve {
                let _ = writeln!(out, "{},{},{}", s.strategy, p.queries, p.value);
            }
        }
        out
    }

    /// Writes `report.json`, `curves.csv` and `median_curves.csv`.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json()?)?;
        std::fs::write(dir.join("curves.csv"), self.curves_csv())?;
        std::fs::write(dir.join("median_curves.csv"), self.median_curves_csv())?;
        Ok(())
    }

    pub fn read_from(dir: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(dir.as_ref().join("report.json"))?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Fixed-width table of median initial and final metrics per strategy.
    pub fn summary_table(&self) -> String {
        let metric = match self.metric {
            MetricKind::Rmse => "rmse",
            MetricKind::Accuracy => "accuracy",
            MetricKind::None => "metric",
        };
        let fmt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
        let mut out = format!(
            "{:<8} {:>5} {:>7} {:>14} {:>14} {:>11}\n",
            "strategy",
            "runs",
            "failed",
            format!("init {metric}"),
            format!("final {metric}"),
            "infeasible"
        );
        for s in &self.strategies {
            let _ = writeln!(
                out,
                "{:<8} {:>5} {:>7} {:>14} {:>14} {:>11}",
                s.strategy.label(),
                s.runs.len(),
                s.failed_runs,
                fmt(s.median_initial),
                fmt(s.median_final),
                fmt(s.median_infeasible_fraction_after_init)
            );
        }
        out
    }
}

/// Problem data shared by all runs of an experiment.
enum Prepared {
    Quartic {
        spec: ProblemSpec<f64>,
        grid: Vec<Vec<f64>>,
        truth: Vec<Vec<f64>>,
    },
    Circle {
        pool_size: usize,
        constrained: bool,
    },
    Dataset {
        spec: ProblemSpec<f64>,
        dataset: Dataset,
        labels: Vec<TargetVector<f64>>,
    },
    External {
        spec: ProblemSpec<f64>,
        command: String,
        timeout: Duration,
        n_targets: usize,
    },
}

const QUARTIC_LIMIT: f64 = 3.0;
const CIRCLE_LIMIT: f64 = 2.0;
const EVAL_GRID_POINTS: usize = 1000;

fn grid(lo: f64, hi: f64, count: usize) -> Vec<FeatureVector<f64>> {
    (0..count)
        .map(|i| {
            let t = if count == 1 { 0.5 } else { i as f64 / (count - 1) as f64 };
            FeatureVector::from_finite(vec![lo + (hi - lo) * t])
        })
        .collect()
}

fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    Ok(match &cfg.problem {
        ProblemConfig::QuarticSine { pool_size } => {
            if *pool_size < 2 {
                return Err(Error::config("pool_size must be at least 2"));
            }
            let pool = grid(-QUARTIC_LIMIT, QUARTIC_LIMIT, *pool_size);
            let eval = grid(-QUARTIC_LIMIT, QUARTIC_LIMIT, EVAL_GRID_POINTS);
            let truth = eval.iter().map(|x| vec![crate::data::quartic_sine_clean(x[0])]).collect();
            Prepared::Quartic {
                spec: ProblemSpec::pool(pool, 1, TargetKind::Regression)?,
                grid: eval.into_iter().map(FeatureVector::into_vec).collect(),
                truth,
            }
        }
        ProblemConfig::Circle {
            pool_size,
            constrained,
        } => {
            if *pool_size == 0 {
                return Err(Error::EmptyPool);
            }
            Prepared::Circle {
                pool_size: *pool_size,
                constrained: *constrained,
            }
        }
        ProblemConfig::Dataset { csv, schema } => {
            let dataset = load_csv(csv, schema)?;
            let (pool, kept) = dedup_pool(dataset.features.clone())?;
            let labels: Vec<TargetVector<f64>> = kept.iter().map(|&i| dataset.targets[i].clone()).collect();
            Prepared::Dataset {
                spec: ProblemSpec::pool(pool, dataset.n_targets(), dataset.kind)?,
                dataset,
                labels,
            }
        }
        ProblemConfig::External {
            command,
            bounds,
            n_targets,
            task,
            timeout_secs,
        } => {
            if *n_targets == 0 {
                return Err(Error::config("n_targets must be positive"));
            }
            if !(*timeout_secs > 0.0) {
                return Err(Error::config("timeout must be positive"));
            }
            let b = Bounds::new(bounds.lower.clone(), bounds.upper.clone())?;
            Prepared::External {
                spec: ProblemSpec::population(b, None, *n_targets, *task),
                command: command.clone(),
                timeout: Duration::from_secs_f64(*timeout_secs),
                n_targets: *n_targets,
            }
        }
    })
}

impl Prepared {
    fn metric_kind(&self) -> MetricKind {
        match self {
            Prepared::Quartic { .. } => MetricKind::Rmse,
            Prepared::Circle { .. } => MetricKind::Accuracy,
            Prepared::Dataset { dataset, .. } => match dataset.kind {
                TargetKind::Regression => MetricKind::Rmse,
                TargetKind::Classification => MetricKind::Accuracy,
            },
            Prepared::External { .. } => MetricKind::None,
        }
    }

    fn evaluation_set(&self) -> EvaluationSet {
        match self {
            Prepared::Quartic { .. } => EvaluationSet::Grid,
            Prepared::Circle { constrained: true, .. } => EvaluationSet::FeasiblePool,
            Prepared::Circle { .. } | Prepared::Dataset { .. } => EvaluationSet::FullPool,
            Prepared::External { .. } => EvaluationSet::None,
        }
    }

    fn dims(&self) -> (usize, usize) {
        match self {
            Prepared::Quartic { .. } => (1, 1),
            Prepared::Circle { .. } => (2, 1),
            Prepared::Dataset { spec, .. } | Prepared::External { spec, .. } => (spec.n_features(), spec.n_targets()),
        }
    }
}

/// One problem instance: the spec, an oracle, and the evaluation data.
struct Instance {
    spec: ProblemSpec<f64>,
    oracle: Box<dyn Oracle<f64>>,
    eval_x: Vec<Vec<f64>>,
    eval_y: Vec<Vec<f64>>,
}

fn instance(prep: &Prepared, cfg: &ExperimentConfig, run: usize) -> Result<Instance> {
    let oracle_seed = derive_seed(cfg.seed, run, PURPOSE_ORACLE);
    Ok(match prep {
        Prepared::Quartic { spec, grid, truth } => Instance {
            spec: spec.clone(),
            oracle: Box::new(SyntheticOracle::new(SyntheticKind::QuarticSine, cfg.noise, oracle_seed)?),
            eval_x: grid.clone(),
            eval_y: truth.clone(),
        },
        Prepared::Circle {
            pool_size,
            constrained,
        } => {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, run, PURPOSE_POOL));
            let points: Vec<FeatureVector<f64>> = (0..*pool_size)
                .map(|_| {
                    FeatureVector::from_finite(vec![
                        rng.random_range(-CIRCLE_LIMIT..CIRCLE_LIMIT),
                        rng.random_range(-CIRCLE_LIMIT..CIRCLE_LIMIT),
                    ])
                })
                .collect();
            let spec = ProblemSpec::pool(points, 1, TargetKind::Classification)?;
            let kind = if *constrained {
                SyntheticKind::CircleConstrained
            } else {
                SyntheticKind::Circle
            };
            let oracle = SyntheticOracle::new(kind, 0.0, oracle_seed)?;
            let (mut eval_x, mut eval_y) = (Vec::new(), Vec::new());
            for x in spec.pool_points().expect("pool problem") {
                if *constrained && !circle_constraint_holds(x) {
                    continue;
                }
                let label = oracle.truth(x)?.target().expect("feasible point").to_vec();
                eval_x.push(x.to_vec());
                eval_y.push(label);
            }
            Instance {
                spec,
                oracle: Box::new(oracle),
                eval_x,
                eval_y,
            }
        }
        Prepared::Dataset { spec, labels, .. } => Instance {
            spec: spec.clone(),
            oracle: Box::new(DatasetOracle::new(labels.clone())),
            eval_x: spec.pool_points().expect("pool problem").iter().map(|x| x.to_vec()).collect(),
            eval_y: labels.iter().map(|y| y.to_vec()).collect(),
        },
        Prepared::External {
            spec,
            command,
            timeout,
            n_targets,
        } => Instance {
            spec: spec.clone(),
            oracle: Box::new(ExternalOracle::spawn_command_line(command, *timeout)?.expect_targets(*n_targets)),
            eval_x: Vec::new(),
            eval_y: Vec::new(),
        },
    })
}

fn run_one(prep: &Prepared, cfg: &ExperimentConfig, strategy: Strategy, run: usize) -> Result<RunReport> {
    let seed = derive_seed(cfg.seed, run, PURPOSE_ENGINE);
    let mut inst = instance(prep, cfg, run)?;
    let transform = ScalingTransform::new(compute_bounds(&inst.spec)?);
    let mut predictor = Mlp::new(cfg.predictor_config())?.with_input_scaling(transform);
    let kind = prep.metric_kind();
    let (eval_x, eval_y) = (&inst.eval_x, &inst.eval_y);
    let mut metric = |p: &Mlp<f64>| -> Result<f64> {
        let pred = eval_x.iter().map(|x| p.predict_slice(x)).collect::<Result<Vec<_>>>()?;
        match kind {
            MetricKind::Rmse => rmse(eval_y, &pred),
            MetricKind::Accuracy => accuracy(eval_y, &pred),
            MetricKind::None => Ok(f64::NAN),
        }
    };
    let metric_fn: Option<&mut engine::MetricFn<'_, Mlp<f64>>> = match kind {
        MetricKind::None => None,
        _ => Some(&mut metric),
    };
    let out = engine::run(
        &cfg.engine(strategy, seed),
        &cfg.acquisition()?,
        &inst.spec,
        &mut predictor,
        &mut inst.oracle,
        metric_fn,
    )?;
    let active: Vec<_> = out.trace.iter().filter(|r| r.phase == Phase::Active).collect();
    let infeasible_after_init = active.iter().filter(|r| !r.feasible).count();
    Ok(RunReport {
        run,
        seed,
        status: out.status,
        n_init_total: out.n_init_total,
        queries: out.state.query_count(),
        retrains: out.retrains,
        infeasible_after_init,
        infeasible_fraction_after_init: if active.is_empty() {
            0.0
        } else {
            infeasible_after_init as f64 / active.len() as f64
        },
        curve: out
            .curve
            .iter()
            .map(|&(queries, value)| CurvePoint { queries, value })
            .collect(),
        pool_indices: out.state.consumed().to_vec(),
    })
}

/// Per-query-count medians across runs, carrying each run's latest value
/// forward so every run contributes at every count from its first retrain.
pub fn median_curve(runs: &[&[CurvePoint]]) -> Vec<CurvePoint> {
    let counts: std::collections::BTreeSet<usize> = runs.iter().flat_map(|c| c.iter().map(|p| p.queries)).collect();
    let mut by_count: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for curve in runs {
        let mut k = 0;
        let mut last = None;
        for &n in &counts {
            while k < curve.len() && curve[k].queries <= n {
                last = Some(curve[k].value);
                k += 1;
            }
            if let Some(v) = last {
                by_count.entry(n).or_default().push(v);
            }
        }
    }
    by_count
        .into_iter()
        .filter_map(|(queries, v)| median(&v).map(|value| CurvePoint { queries, value }))
        .collect()
}

fn aggregate(strategy: Strategy, runs: Vec<RunReport>) -> StrategyReport {
    let ok: Vec<&RunReport> = runs.iter().filter(|r| r.status == RunStatus::Completed).collect();
    let curves: Vec<&[CurvePoint]> = ok.iter().map(|r| r.curve.as_slice()).collect();
    let collect = |f: fn(&RunReport) -> Option<f64>| -> Vec<f64> { ok.iter().filter_map(|r| f(r)).collect() };
    StrategyReport {
        strategy,
        failed_runs: runs.len() - ok.len(),
        median_curve: median_curve(&curves),
        median_initial: median(&collect(RunReport::initial_metric)),
        median_final: median(&collect(RunReport::final_metric)),
        median_infeasible_fraction_after_init: median(&collect(|r| Some(r.infeasible_fraction_after_init))),
        runs,
    }
}

/// Runs every configured strategy `runs` times. Runs execute in parallel;
/// run `r` of every strategy shares the same seeds, so all strategies start
/// from the same initial design. Init failures are recorded in the report;
/// any other error aborts the experiment.
pub fn run_benchmark(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let prep = prepare(cfg)?;
    let jobs: Vec<(Strategy, usize)> = cfg
        .strategies
        .iter()
        .flat_map(|&s| (0..cfg.runs).map(move |r| (s, r)))
        .collect();
    let exec = || {
        jobs.par_iter()
            .map(|&(s, r)| run_one(&prep, cfg, s, r))
            .collect::<Result<Vec<_>>>()
    };
    let results = match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::config(e.to_string()))?
            .install(exec)?,
        None => exec()?,
    };
    let mut results = results.into_iter();
    let strategies = cfg
        .strategies
        .iter()
        .map(|&s| aggregate(s, results.by_ref().take(cfg.runs).collect()))
        .collect();
    let (n_features, n_targets) = prep.dims();
    Ok(ExperimentReport {
        config: cfg.clone(),
        metric: prep.metric_kind(),
        evaluation_set: prep.evaluation_set(),
        n_features,
        n_targets,
        class_labels: match &prep {
            Prepared::Dataset { dataset, .. } => dataset.class_labels().map(<[String]>::to_vec),
            _ => None,
        },
        strategies,
    })
}
