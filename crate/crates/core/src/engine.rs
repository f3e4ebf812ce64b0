//! The acquisition function, query selection for pools and populations,
//! the active-learning loop, and the greedy and random baselines.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::Oracle;
use crate::density::{compute_density, DensityTable};
use crate::error::{Error, Result};
use crate::idw::Idw;
use crate::init::{lhs_init, pool_init, InitResult};
use crate::optim::{pso_maximize, PsoConfig};
use crate::predictor::Predictor;
use crate::scalar::Scalar;
use crate::space::{
    compute_bounds, satisfies, sq_dist, Bounds, FeatureVector, KnownConstraint, LearnerState, ProblemSpec,
    QueryResult, SamplingMode, ScalingTransform,
};

const MAX_RANDOM_REJECTIONS: usize = 1_000_000;

/// Per-target weight `c_i(x)`, evaluated at the unscaled point. Must be
/// non-negative.
pub type TargetWeight<T> = Arc<dyn Fn(&[T], usize) -> T + Send + Sync>;

#[derive(Clone)]
pub struct AcquisitionConfig<T> {
    /// Weight of the IDW distance term.
    pub delta: T,
    /// Weight of the pool density term.
    pub omega: T,
    /// `None` means `c_i ≡ 1`.
    pub target_weights: Option<TargetWeight<T>>,
    pub idw: Idw<T>,
}

impl<T: Scalar> Default for AcquisitionConfig<T> {
    fn default() -> Self {
        Self {
            delta: T::zero(),
            omega: T::zero(),
            target_weights: None,
            idw: Idw::default(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for AcquisitionConfig<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AcquisitionConfig")
            .field("delta", &self.delta)
            .field("omega", &self.omega)
            .field("target_weights", &self.target_weights.is_some())
            .field("idw", &self.idw)
            .finish()
    }
}

impl<T: Scalar> AcquisitionConfig<T> {
    pub fn new(delta: T, omega: T) -> Result<Self> {
        let cfg = Self {
            delta,
            omega,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta >= T::zero()) || !self.delta.is_finite() {
            return Err(Error::config("delta must be a non-negative number"));
        }
        if !(self.omega >= T::zero()) || !self.omega.is_finite() {
            return Err(Error::config("omega must be a non-negative number"));
        }
        Ok(())
    }

    fn weight(&self, x: &[T], i: usize) -> T {
        match &self.target_weights {
            Some(c) => c(x, i),
            None => T::one(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Ideal,
    Greedy,
    Random,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Ideal, Strategy::Greedy, Strategy::Random];

    pub fn label(self) -> &'static str {
        match self {
            Strategy::Ideal => "ideal",
            Strategy::Greedy => "greedy",
            Strategy::Random => "random",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineConfig {
    /// Labeled samples requested from initialization.
    pub n_init: usize,
    /// Total query budget, infeasible queries included.
    pub n_max: usize,
    /// Feasible queries between retrains.
    pub batch: usize,
    /// Largest pool searched exhaustively; bigger pools use PSO plus the
    /// nearest unconsumed point.
    pub enum_threshold: usize,
    pub strategy: Strategy,
    pub pso: PsoConfig,
    /// Neighbours used for the density; defaults to the feature dimension.
    pub density_neighbors: Option<usize>,
    pub seed: u64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            n_init: 4,
            n_max: 30,
            batch: 1,
            enum_threshold: 20_000,
            strategy: Strategy::Ideal,
            pso: PsoConfig::default(),
            density_neighbors: None,
            seed: 0,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_init == 0 {
            return Err(Error::config("n_init must be positive"));
        }
        if self.n_init > self.n_max {
            return Err(Error::config("n_init must not exceed n_max"));
        }
        if self.batch == 0 {
            return Err(Error::config("batch must be at least 1"));
        }
        self.pso.validate()
    }
}

/// Scaled copies of everything the learner has seen, kept in step with a
/// [`LearnerState`].
#[derive(Clone, Debug)]
pub struct ScaledSamples<T> {
    transform: ScalingTransform<T>,
    all: Vec<Vec<T>>,
    feasible: Vec<Vec<T>>,
    targets: Vec<Option<Vec<T>>>,
}

impl<T: Scalar> ScaledSamples<T> {
    pub fn new(transform: ScalingTransform<T>) -> Self {
        Self {
            transform,
            all: Vec::new(),
            feasible: Vec::new(),
            targets: Vec::new(),
        }
    }

    pub fn from_state(transform: ScalingTransform<T>, state: &LearnerState<T>) -> Result<Self> {
        let mut s = Self::new(transform);
        for (x, r) in state.samples() {
            s.push(x, r)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, x: &FeatureVector<T>, result: &QueryResult<T>) -> Result<()> {
        let xs = self.transform.scale_slice(x)?;
        if result.is_feasible() {
            self.feasible.push(xs.clone());
        }
        self.targets.push(result.target().map(|y| y.to_vec()));
        self.all.push(xs);
        Ok(())
    }

    pub fn transform(&self) -> &ScalingTransform<T> {
        &self.transform
    }

    pub fn all(&self) -> &[Vec<T>] {
        &self.all
    }

    pub fn feasible(&self) -> &[Vec<T>] {
        &self.feasible
    }
}

/// Evaluates `a(x)` at a point given both unscaled and scaled.
struct Acquirer<'a, T, P: ?Sized> {
    cfg: &'a AcquisitionConfig<T>,
    samples: &'a ScaledSamples<T>,
    predictor: &'a P,
    scratch: Vec<T>,
}

impl<'a, T: Scalar, P: Predictor<T> + ?Sized> Acquirer<'a, T, P> {
    fn new(cfg: &'a AcquisitionConfig<T>, samples: &'a ScaledSamples<T>, predictor: &'a P) -> Result<Self> {
        if samples.feasible.is_empty() {
            return Err(Error::NoLabeledSamples);
        }
        Ok(Self {
            cfg,
            samples,
            predictor,
            scratch: Vec::with_capacity(samples.all.len()),
        })
    }

    fn eval(&mut self, x: &[T], xs: &[T], rho: T) -> Result<T> {
        let prediction = self.predictor.predict_slice(x)?;
        let s2 = self.cfg.idw.variance(
            xs,
            &self.samples.all,
            &self.samples.targets,
            &prediction,
            &mut self.scratch,
        );
        let z = if self.cfg.delta > T::zero() {
            self.cfg.idw.distance(xs, &self.samples.all)
        } else {
            T::zero()
        };
        let mut total = T::zero();
        for (i, s) in s2.into_iter().enumerate() {
            total = total + self.cfg.weight(x, i) * (s + self.cfg.delta * z);
        }
        Ok((T::one() + self.cfg.omega * rho) * total)
    }
}

/// `a(x) = (1 + ω ρ) Σ_i c_i(x) (s_i²(x) + δ z(x))`. Pass `rho = None` in
/// population mode, where the density is taken as one.
pub fn acquisition<T: Scalar, P: Predictor<T> + ?Sized>(
    cfg: &AcquisitionConfig<T>,
    samples: &ScaledSamples<T>,
    predictor: &P,
    x: &FeatureVector<T>,
    rho: Option<T>,
) -> Result<T> {
    let xs = samples.transform.scale_slice(x)?;
    Acquirer::new(cfg, samples, predictor)?.eval(x, &xs, rho.unwrap_or_else(T::one))
}

/// A selected query: the point and, in pool mode, its index.
#[derive(Clone, Debug, PartialEq)]
pub struct Selection<T> {
    pub point: FeatureVector<T>,
    pub pool_index: Option<usize>,
}

/// A pool with its scaled coordinates.
#[derive(Clone, Debug)]
pub struct ScaledPool<'a, T> {
    pub points: &'a [FeatureVector<T>],
    pub scaled: Vec<Vec<T>>,
    pub bounds: Bounds<T>,
}

impl<'a, T: Scalar> ScaledPool<'a, T> {
    pub fn new(points: &'a [FeatureVector<T>], transform: &ScalingTransform<T>) -> Result<Self> {
        Ok(Self {
            points,
            scaled: points.iter().map(|p| transform.scale_slice(p)).collect::<Result<_>>()?,
            bounds: Bounds::enclosing(points)?,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn free(&self, state: &LearnerState<T>) -> Result<Vec<usize>> {
        let free: Vec<usize> = (0..self.len()).filter(|&j| !state.is_consumed(j)).collect();
        if free.is_empty() {
            Err(Error::PoolExhausted)
        } else {
            Ok(free)
        }
    }

    /// Nearest unconsumed point to `x` in scaled space, ties to lowest index.
    fn nearest_free(&self, xs: &[T], free: &[usize]) -> usize {
        let mut best = (free[0], sq_dist(xs, &self.scaled[free[0]]));
        for &j in &free[1..] {
            let d = sq_dist(xs, &self.scaled[j]);
            if d < best.1 {
                best = (j, d);
            }
        }
        best.0
    }

    fn select(&self, j: usize) -> Selection<T> {
        Selection {
            point: self.points[j].clone(),
            pool_index: Some(j),
        }
    }
}

fn finite_or_neg_inf<T: Scalar>(v: T) -> T {
    if v.is_finite() {
        v
    } else {
        T::neg_infinity()
    }
}

/// Argmax of `f` over `free`, ties to the first (lowest) index.
fn argmax_over<T: Scalar>(free: &[usize], mut f: impl FnMut(usize) -> Result<T>) -> Result<usize> {
    let mut best = (free[0], finite_or_neg_inf(f(free[0])?));
    for &j in &free[1..] {
        let v = finite_or_neg_inf(f(j)?);
        if v > best.1 {
            best = (j, v);
        }
    }
    Ok(best.0)
}

/// Runs PSO on `f`, forwarding the first error raised inside the objective.
fn pso_with_errors<T: Scalar, R: Rng + ?Sized>(
    mut f: impl FnMut(&[T]) -> Result<T>,
    bounds: &Bounds<T>,
    cfg: &PsoConfig,
    rng: &mut R,
) -> Result<(FeatureVector<T>, T)> {
    let mut failure = None;
    let res = pso_maximize(
        |x: &[T]| match f(x) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                T::nan()
            }
        },
        bounds,
        cfg,
        rng,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok((res.position, res.value)),
    }
}

/// IDEAL selection from a pool: exhaustive argmax of `a` over unconsumed
/// points when the pool has at most `enum_threshold` points, otherwise PSO
/// over the pool's box followed by the nearest unconsumed point.
#[allow(clippy::too_many_arguments)]
pub fn select_next_pool<T, P, R>(
    cfg: &AcquisitionConfig<T>,
    samples: &ScaledSamples<T>,
    state: &LearnerState<T>,
    predictor: &P,
    pool: &ScaledPool<'_, T>,
    density: Option<&DensityTable<T>>,
    enum_threshold: usize,
    pso: &PsoConfig,
    rng: &mut R,
) -> Result<Selection<T>>
where
    T: Scalar,
    P: Predictor<T> + ?Sized,
    R: Rng + ?Sized,
{
    let free = pool.free(state)?;
    let mut acq = Acquirer::new(cfg, samples, predictor)?;
    let j = if pool.len() <= enum_threshold {
        argmax_over(&free, |j| {
            let rho = density.map_or(T::one(), |d| d.get(j));
            acq.eval(&pool.points[j], &pool.scaled[j], rho)
        })?
    } else {
        let t = &samples.transform;
        let mut xs = vec![T::zero(); t.dim()];
        let (best, _) = pso_with_errors(
            |x| {
                t.scale_into(x, &mut xs);
                acq.eval(x, &xs, T::one())
            },
            &pool.bounds,
            pso,
            rng,
        )?;
        pool.nearest_free(&t.scale_slice(&best)?, &free)
    };
    Ok(pool.select(j))
}

/// IDEAL selection in a box: PSO on `a`, with points violating the known
/// constraint scored `-inf`.
pub fn select_next_population<T, P, R>(
    cfg: &AcquisitionConfig<T>,
    samples: &ScaledSamples<T>,
    predictor: &P,
    bounds: &Bounds<T>,
    known_constraint: Option<&KnownConstraint<T>>,
    pso: &PsoConfig,
    rng: &mut R,
) -> Result<Selection<T>>
where
    T: Scalar,
    P: Predictor<T> + ?Sized,
    R: Rng + ?Sized,
{
    let mut acq = Acquirer::new(cfg, samples, predictor)?;
    let t = &samples.transform;
    let mut xs = vec![T::zero(); t.dim()];
    let (best, value) = pso_with_errors(
        |x| {
            if !satisfies(known_constraint, x) {
                return Ok(T::neg_infinity());
            }
            t.scale_into(x, &mut xs);
            acq.eval(x, &xs, T::one())
        },
        bounds,
        pso,
        rng,
    )?;
    if value == T::neg_infinity() {
        return Err(Error::NoFeasiblePoint);
    }
    Ok(Selection {
        point: best,
        pool_index: None,
    })
}

fn min_sq_dist<T: Scalar>(xs: &[T], samples: &[Vec<T>]) -> T {
    samples
        .iter()
        .map(|s| sq_dist(xs, s))
        .fold(T::infinity(), T::min)
}

/// Greedy max-min selection in a pool: the unconsumed point farthest (in
/// scaled space) from every queried sample, ties to lowest index.
pub fn select_next_greedy_pool<T: Scalar>(
    samples: &ScaledSamples<T>,
    state: &LearnerState<T>,
    pool: &ScaledPool<'_, T>,
) -> Result<Selection<T>> {
    if samples.all.is_empty() {
        return Err(Error::NoLabeledSamples);
    }
    let free = pool.free(state)?;
    let j = argmax_over(&free, |j| Ok(min_sq_dist(&pool.scaled[j], &samples.all)))?;
    Ok(pool.select(j))
}

/// Greedy max-min selection in a box, by PSO.
pub fn select_next_greedy_population<T: Scalar, R: Rng + ?Sized>(
    samples: &ScaledSamples<T>,
    bounds: &Bounds<T>,
    known_constraint: Option<&KnownConstraint<T>>,
    pso: &PsoConfig,
    rng: &mut R,
) -> Result<Selection<T>> {
    if samples.all.is_empty() {
        return Err(Error::NoLabeledSamples);
    }
    let t = &samples.transform;
    let mut xs = vec![T::zero(); t.dim()];
    let (best, value) = pso_with_errors(
        |x| {
            if !satisfies(known_constraint, x) {
                return Ok(T::neg_infinity());
            }
            t.scale_into(x, &mut xs);
            Ok(min_sq_dist(&xs, &samples.all))
        },
        bounds,
        pso,
        rng,
    )?;
    if value == T::neg_infinity() {
        return Err(Error::NoFeasiblePoint);
    }
    Ok(Selection {
        point: best,
        pool_index: None,
    })
}

/// Uniform draw over unconsumed pool indices.
pub fn select_next_random_pool<T: Scalar, R: Rng + ?Sized>(
    state: &LearnerState<T>,
    pool: &ScaledPool<'_, T>,
    rng: &mut R,
) -> Result<Selection<T>> {
    let free = pool.free(state)?;
    Ok(pool.select(free[rng.random_range(0..free.len())]))
}

/// Uniform draw over the box, redrawn until the known constraint holds.
pub fn select_next_random_population<T: Scalar, R: Rng + ?Sized>(
    bounds: &Bounds<T>,
    known_constraint: Option<&KnownConstraint<T>>,
    rng: &mut R,
) -> Result<Selection<T>> {
    for _ in 0..MAX_RANDOM_REJECTIONS {
        let x: Vec<T> = (0..bounds.dim())
            .map(|i| {
                let (lo, hi) = (bounds.lower()[i].as_f64(), bounds.upper()[i].as_f64());
                T::lit(if hi > lo { rng.random_range(lo..=hi) } else { lo })
            })
            .collect();
        if satisfies(known_constraint, &x) {
            return Ok(Selection {
                point: FeatureVector::from_finite(x),
                pool_index: None,
            });
        }
    }
    Err(Error::NoFeasiblePoint)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Init,
    Active,
}

/// One oracle call. `metric` is set when the predictor was retrained right
/// after this query and a metric callback was supplied.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryRecord<T> {
    /// Query count after this call, starting at 1.
    pub step: usize,
    pub phase: Phase,
    pub x: FeatureVector<T>,
    pub pool_index: Option<usize>,
    pub feasible: bool,
    pub metric: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Completed,
    /// Initialization could not collect the requested labeled samples within
    /// the budget.
    InitFailed,
}

#[derive(Clone, Debug)]
pub struct RunOutcome<T> {
    pub status: RunStatus,
    pub state: LearnerState<T>,
    pub trace: Vec<QueryRecord<T>>,
    /// `(query count, metric)` after every retrain.
    pub curve: Vec<(usize, f64)>,
    /// Queries spent by initialization.
    pub n_init_total: usize,
    pub retrains: usize,
}

/// Called after every retrain with the fitted predictor.
pub type MetricFn<'a, P> = dyn FnMut(&P) -> Result<f64> + 'a;

/// Independent random streams for the pieces of one run.
fn stream(seed: u64, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(purpose);
    rng
}

struct Loop<'m, 'p, T, P: ?Sized> {
    state: LearnerState<T>,
    samples: ScaledSamples<T>,
    trace: Vec<QueryRecord<T>>,
    curve: Vec<(usize, f64)>,
    fit_rng: ChaCha8Rng,
    metric: Option<&'m mut MetricFn<'p, P>>,
    retrains: usize,
}

impl<T: Scalar, P: Predictor<T> + ?Sized> Loop<'_, '_, T, P> {
    fn record(&mut self, phase: Phase, x: FeatureVector<T>, result: QueryResult<T>, pool_index: Option<usize>) -> Result<()> {
        self.samples.push(&x, &result)?;
        self.trace.push(QueryRecord {
            step: self.state.query_count() + 1,
            phase,
            x: x.clone(),
            pool_index,
            feasible: result.is_feasible(),
            metric: None,
        });
        self.state.record(x, result, pool_index)
    }

    fn retrain(&mut self, predictor: &mut P) -> Result<()> {
        let (xs, ys): (Vec<_>, Vec<_>) = self.state.labeled().unzip();
        predictor.fit(&xs, &ys, self.fit_rng.random())?;
        self.retrains += 1;
        if let Some(metric) = self.metric.as_mut() {
            let value = metric(predictor)?;
            self.curve.push((self.state.query_count(), value));
            if let Some(last) = self.trace.last_mut() {
                last.metric = Some(value);
            }
        }
        Ok(())
    }
}

/// Runs initialization and then the active-learning loop until `n_max`
/// queries are spent or the pool is exhausted.
///
/// The predictor is retrained after the initial design and then each time
/// `batch` new labeled samples have arrived, plus once at the end if labeled
/// data arrived since the last fit. Infeasible queries never trigger a
/// retrain.
pub fn run<T, P, O>(
    cfg: &EngineConfig,
    acq: &AcquisitionConfig<T>,
    spec: &ProblemSpec<T>,
    predictor: &mut P,
    oracle: &mut O,
    metric: Option<&mut MetricFn<'_, P>>,
) -> Result<RunOutcome<T>>
where
    T: Scalar,
    P: Predictor<T> + ?Sized,
    O: Oracle<T> + ?Sized,
{
    cfg.validate()?;
    acq.validate()?;
    let mut init_rng = stream(cfg.seed, 0);
    let mut select_rng = stream(cfg.seed, 1);
    let transform = ScalingTransform::new(compute_bounds(spec)?);
    let pool = match spec.pool_points() {
        Some(points) => Some(ScaledPool::new(points, &transform)?),
        None => None,
    };
    let density = match &pool {
        Some(p) if cfg.strategy == Strategy::Ideal && acq.omega > T::zero() => {
            let k = cfg.density_neighbors.unwrap_or(spec.n_features());
            Some(compute_density(&transform, p.points, k)?)
        }
        _ => None,
    };

    let init: InitResult<T> = match spec.mode() {
        SamplingMode::Pool(points) => pool_init(points, oracle, cfg.n_init, cfg.n_max, &mut init_rng)?,
        SamplingMode::Population {
            bounds,
            known_constraint,
        } => lhs_init(bounds, known_constraint.as_ref(), oracle, cfg.n_init, cfg.n_max, &mut init_rng)?,
    };

    let mut lp = Loop {
        state: LearnerState::new(pool.as_ref().map_or(0, |p| p.len())),
        samples: ScaledSamples::new(transform),
        trace: Vec::with_capacity(cfg.n_max),
        curve: Vec::new(),
        fit_rng: stream(cfg.seed, 2),
        metric,
        retrains: 0,
    };
    let n_init_total = init.n_init_total;
    for q in init.queried {
        lp.record(Phase::Init, q.x, q.result, q.pool_index)?;
    }
    if !init.success {
        return Ok(RunOutcome {
            status: RunStatus::InitFailed,
            state: lp.state,
            trace: lp.trace,
            curve: lp.curve,
            n_init_total,
            retrains: 0,
        });
    }

    lp.retrain(predictor)?;
    let mut pending = 0;
    while lp.state.query_count() < cfg.n_max {
        if let Some(p) = &pool {
            if lp.state.consumed().len() == p.len() {
                break;
            }
        }
        let sel = match (&pool, cfg.strategy) {
            (Some(p), Strategy::Ideal) => select_next_pool(
                acq,
                &lp.samples,
                &lp.state,
                predictor,
                p,
                density.as_ref(),
                cfg.enum_threshold,
                &cfg.pso,
                &mut select_rng,
            )?,
            (Some(p), Strategy::Greedy) => select_next_greedy_pool(&lp.samples, &lp.state, p)?,
            (Some(p), Strategy::Random) => select_next_random_pool(&lp.state, p, &mut select_rng)?,
            (None, strategy) => {
                let (bounds, constraint) = match spec.mode() {
                    SamplingMode::Population {
                        bounds,
                        known_constraint,
                    } => (bounds, known_constraint.as_ref()),
                    SamplingMode::Pool(_) => unreachable!("pool handled above"),
                };
                match strategy {
                    Strategy::Ideal => select_next_population(
                        acq,
                        &lp.samples,
                        predictor,
                        bounds,
                        constraint,
                        &cfg.pso,
                        &mut select_rng,
                    )?,
                    Strategy::Greedy => {
                        select_next_greedy_population(&lp.samples, bounds, constraint, &cfg.pso, &mut select_rng)?
                    }
                    Strategy::Random => select_next_random_population(bounds, constraint, &mut select_rng)?,
                }
            }
        };
        let result = oracle.query(&sel.point, sel.pool_index)?;
        let feasible = result.is_feasible();
        lp.record(Phase::Active, sel.point, result, sel.pool_index)?;
        if feasible {
            pending += 1;
            if pending >= cfg.batch {
                lp.retrain(predictor)?;
                pending = 0;
            }
        }
    }
    if pending > 0 {
        lp.retrain(predictor)?;
    }

    Ok(RunOutcome {
        status: RunStatus::Completed,
        state: lp.state,
        trace: lp.trace,
        curve: lp.curve,
        n_init_total,
        retrains: lp.retrains,
    })
}
