//! Oracles answering queries (synthetic functions, labeled datasets, and
//! external processes) plus CSV ingestion with one-hot encoding.

mod dataset;
mod external;

pub use dataset::{load_csv, ColumnMeta, ColumnRole, CsvSchema, Dataset};
pub use external::{ExternalOracle, DEFAULT_TIMEOUT};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{FeatureVector, QueryResult, TargetVector};

/// The process being learned. `pool_index` is set when the query comes from
/// a pool.
pub trait Oracle<T: Scalar> {
    fn query(&mut self, x: &FeatureVector<T>, pool_index: Option<usize>) -> Result<QueryResult<T>>;
}

impl<T: Scalar, O: Oracle<T> + ?Sized> Oracle<T> for Box<O> {
    fn query(&mut self, x: &FeatureVector<T>, pool_index: Option<usize>) -> Result<QueryResult<T>> {
        (**self).query(x, pool_index)
    }
}

/// `x⁴ sin²(x²/3)` plus Gaussian noise of standard deviation `noise_sd`.
pub fn quartic_sine<T: Scalar, R: Rng + ?Sized>(x: T, noise_sd: T, rng: &mut R) -> T {
    let clean = quartic_sine_clean(x);
    if noise_sd > T::zero() {
        let eta: f64 = StandardNormal.sample(rng);
        clean + noise_sd * T::lit(eta)
    } else {
        clean
    }
}

pub fn quartic_sine_clean<T: Scalar>(x: T) -> T {
    let s = (x * x / T::lit(3.0)).sin();
    x.powi(4) * s * s
}

/// Whether `x` lies in the region `3 x₂ ≤ √3 |x₁|` where the constrained
/// circle problem is defined.
pub fn circle_constraint_holds<T: Scalar>(x: &[T]) -> bool {
    T::lit(3.0) * x[1] <= T::lit(3f64.sqrt()) * x[0].abs()
}

/// Indicator of the closed unit disc as a single-output label, or
/// `Infeasible` outside the wedge when `constrained`.
pub fn circle_indicator<T: Scalar>(x: &[T], constrained: bool) -> Result<QueryResult<T>> {
    if x.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: x.len() });
    }
    if constrained && !circle_constraint_holds(x) {
        return Ok(QueryResult::Infeasible);
    }
    let inside = x[0] * x[0] + x[1] * x[1] <= T::one();
    let label = if inside { T::one() } else { T::zero() };
    Ok(QueryResult::Labeled(TargetVector::from_finite(vec![label])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SyntheticKind {
    QuarticSine,
    Circle,
    CircleConstrained,
}

/// Closed-form test processes. Noise only perturbs regression targets.
#[derive(Clone, Debug)]
pub struct SyntheticOracle<T> {
    kind: SyntheticKind,
    noise_sd: T,
    rng: ChaCha8Rng,
}

impl<T: Scalar> SyntheticOracle<T> {
    pub fn new(kind: SyntheticKind, noise_sd: T, seed: u64) -> Result<Self> {
        if !(noise_sd >= T::zero()) {
            return Err(Error::config("noise standard deviation must be non-negative"));
        }
        Ok(Self {
            kind,
            noise_sd,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn kind(&self) -> SyntheticKind {
        self.kind
    }

    /// Noise-free value, used for evaluating predictors.
    pub fn truth(&self, x: &[T]) -> Result<QueryResult<T>> {
        match self.kind {
            SyntheticKind::QuarticSine => Ok(QueryResult::Labeled(TargetVector::from_finite(vec![
                quartic_sine_clean(x[0]),
            ]))),
            SyntheticKind::Circle => circle_indicator(x, false),
            SyntheticKind::CircleConstrained => circle_indicator(x, true),
        }
    }
}

impl<T: Scalar> Oracle<T> for SyntheticOracle<T> {
    fn query(&mut self, x: &FeatureVector<T>, _pool_index: Option<usize>) -> Result<QueryResult<T>> {
        match self.kind {
            SyntheticKind::QuarticSine => {
                if x.dim() != 1 {
                    return Err(Error::DimensionMismatch { expected: 1, got: x.dim() });
                }
                let y = quartic_sine(x[0], self.noise_sd, &mut self.rng);
                Ok(QueryResult::Labeled(TargetVector::from_finite(vec![y])))
            }
            _ => self.truth(x),
        }
    }
}

/// Answers pool queries from stored labels. Never infeasible.
#[derive(Clone, Debug)]
pub struct DatasetOracle<T> {
    labels: Vec<TargetVector<T>>,
}

impl<T: Scalar> DatasetOracle<T> {
    pub fn new(labels: Vec<TargetVector<T>>) -> Self {
        Self { labels }
    }

    pub fn labels(&self) -> &[TargetVector<T>] {
        &self.labels
    }
}

impl<T: Scalar> Oracle<T> for DatasetOracle<T> {
    fn query(&mut self, _x: &FeatureVector<T>, pool_index: Option<usize>) -> Result<QueryResult<T>> {
        let j = pool_index.ok_or_else(|| Error::config("dataset oracle answers pool queries only"))?;
        self.labels
            .get(j)
            .cloned()
            .map(QueryResult::Labeled)
            .ok_or(Error::IndexOutOfRange(j))
    }
}
