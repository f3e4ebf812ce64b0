//! Feature and target vectors, the sampling domain, and the affine scaling
//! onto `[-1, 1]^n` that every distance in the crate is measured in.

use std::collections::HashSet;
use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn check_finite<T: Scalar>(values: &[T]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

/// A point in feature space. One-hot encoded categorical features occupy
/// `{0, 1}` coordinates like any other component.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector<T>(Vec<T>);

impl<T: Scalar> FeatureVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        check_finite(&values)?;
        Ok(Self(values))
    }

    /// Caller guarantees every component is finite.
    pub(crate) fn from_finite(values: Vec<T>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self(values)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }
}

impl<T> AsRef<[T]> for FeatureVector<T> {
    fn as_ref(&self) -> &[T] {
        &self.0
    }
}

impl<T> Deref for FeatureVector<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

/// A target value: real numbers for regression, per-class probabilities (or
/// one-hot labels) for classification.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetVector<T>(Vec<T>);

impl<T: Scalar> TargetVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        check_finite(&values)?;
        Ok(Self(values))
    }

    pub(crate) fn from_finite(values: Vec<T>) -> Self {
        Self(values)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }
}

impl<T> AsRef<[T]> for TargetVector<T> {
    fn as_ref(&self) -> &[T] {
        &self.0
    }
}

impl<T> Deref for TargetVector<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetKind {
    Regression,
    Classification,
}

/// Outcome of querying the process at a feature vector.
#[derive(Clone, Debug, PartialEq)]
pub enum QueryResult<T> {
    Labeled(TargetVector<T>),
    /// The target is undefined at the queried point.
    Infeasible,
}

impl<T> QueryResult<T> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, QueryResult::Labeled(_))
    }

    pub fn target(&self) -> Option<&TargetVector<T>> {
        match self {
            QueryResult::Labeled(y) => Some(y),
            QueryResult::Infeasible => None,
        }
    }
}

/// Axis-aligned box `[lower, upper]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bounds<T> {
    lower: FeatureVector<T>,
    upper: FeatureVector<T>,
}

impl<T: Scalar> Bounds<T> {
    pub fn new(lower: Vec<T>, upper: Vec<T>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(Error::InvalidBounds("zero-dimensional box".into()));
        }
        let lower = FeatureVector::new(lower)?;
        let upper = FeatureVector::new(upper)?;
        if let Some(i) = (0..lower.dim()).find(|&i| lower[i] > upper[i]) {
            return Err(Error::InvalidBounds(format!(
                "lower bound exceeds upper bound at component {i}"
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &FeatureVector<T> {
        &self.lower
    }

    pub fn upper(&self) -> &FeatureVector<T> {
        &self.upper
    }

    pub fn width(&self, i: usize) -> T {
        self.upper[i] - self.lower[i]
    }

    /// Components where `lower == upper`.
    pub fn degenerate_components(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.lower[i] == self.upper[i])
            .collect()
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degenerate_components().is_empty()
    }

    pub fn contains(&self, x: &[T]) -> bool {
        x.len() == self.dim()
            && x
                .iter()
                .enumerate()
                .all(|(i, &v)| v >= self.lower[i] && v <= self.upper[i])
    }

    /// Componentwise min/max over a non-empty set of points.
    pub fn enclosing<V: AsRef<[T]>>(points: &[V]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyPool)?.as_ref();
        let mut lower = first.to_vec();
        let mut upper = first.to_vec();
        for p in points.iter().skip(1) {
            let p = p.as_ref();
            if p.len() != lower.len() {
                return Err(Error::DimensionMismatch {
                    expected: lower.len(),
                    got: p.len(),
                });
            }
            for (i, &v) in p.iter().enumerate() {
                lower[i] = lower[i].min(v);
                upper[i] = upper[i].max(v);
            }
        }
        Self::new(lower, upper)
    }
}

/// Per-feature affine map sending `lower` to `-1` and `upper` to `+1`.
///
/// Degenerate components (zero width) map to `0` and so never contribute to
/// distances.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingTransform<T> {
    bounds: Bounds<T>,
    center: Vec<T>,
    gain: Vec<T>,
}

impl<T: Scalar> ScalingTransform<T> {
    pub fn new(bounds: Bounds<T>) -> Self {
        let two = T::lit(2.0);
        let center = (0..bounds.dim())
            .map(|i| (bounds.upper[i] + bounds.lower[i]) / two)
            .collect();
        let gain = (0..bounds.dim())
            .map(|i| {
                let w = bounds.width(i);
                if w > T::zero() {
                    two / w
                } else {
                    T::zero()
                }
            })
            .collect();
        Self {
            bounds,
            center,
            gain,
        }
    }

    pub fn bounds(&self) -> &Bounds<T> {
        &self.bounds
    }

    pub fn dim(&self) -> usize {
        self.bounds.dim()
    }

    /// Scales `x` into `out` without allocating.
    pub fn scale_into(&self, x: &[T], out: &mut [T]) {
        debug_assert_eq!(x.len(), self.dim());
        for i in 0..x.len() {
            out[i] = self.gain[i] * (x[i] - self.center[i]);
        }
    }

    pub fn scale_slice(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_dim(x.len())?;
        let mut out = vec![T::zero(); x.len()];
        self.scale_into(x, &mut out);
        Ok(out)
    }

    pub fn scale(&self, x: &FeatureVector<T>) -> Result<FeatureVector<T>> {
        Ok(FeatureVector::from_finite(self.scale_slice(x)?))
    }

    /// Inverse of [`scale`](Self::scale) on non-degenerate components;
    /// degenerate components return the fixed bound value.
    pub fn unscale_slice(&self, s: &[T]) -> Vec<T> {
        s.iter()
            .enumerate()
            .map(|(i, &v)| {
                if self.gain[i] > T::zero() {
                    v / self.gain[i] + self.center[i]
                } else {
                    self.center[i]
                }
            })
            .collect()
    }

    pub fn scaled_sq_distance(&self, x: &FeatureVector<T>, xk: &FeatureVector<T>) -> Result<T> {
        self.check_dim(x.dim())?;
        self.check_dim(xk.dim())?;
        Ok((0..x.dim())
            .map(|i| {
                let d = self.gain[i] * (xk[i] - x[i]);
                d * d
            })
            .sum())
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got,
            });
        }
        Ok(())
    }
}

/// Squared Euclidean distance between two already-scaled points.
#[inline]
pub fn sq_dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (&u, &v) in a.iter().zip(b) {
        let d = u - v;
        acc = acc + d * d;
    }
    acc
}

/// Known constraint `g(x) <= 0`; a point is admissible when the returned
/// value is non-positive.
pub type KnownConstraint<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;

pub fn satisfies<T: Scalar>(constraint: Option<&KnownConstraint<T>>, x: &[T]) -> bool {
    constraint.is_none_or(|g| g(x) <= T::zero())
}

#[derive(Clone)]
pub enum SamplingMode<T> {
    /// Finite, duplicate-free set of candidate points.
    Pool(Vec<FeatureVector<T>>),
    /// Any point of the box that satisfies the optional known constraint.
    Population {
        bounds: Bounds<T>,
        known_constraint: Option<KnownConstraint<T>>,
    },
}

impl<T: fmt::Debug> fmt::Debug for SamplingMode<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplingMode::Pool(p) => f.debug_tuple("Pool").field(&p.len()).finish(),
            SamplingMode::Population {
                bounds,
                known_constraint,
            } => f
                .debug_struct("Population")
                .field("bounds", bounds)
                .field("known_constraint", &known_constraint.is_some())
                .finish(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProblemSpec<T> {
    mode: SamplingMode<T>,
    n_features: usize,
    n_targets: usize,
    kind: TargetKind,
}

impl<T: Scalar> ProblemSpec<T> {
    /// Pool-based problem. Exact duplicates are removed, keeping the first
    /// occurrence; use [`dedup_pool`] directly to recover the index map.
    pub fn pool(points: Vec<FeatureVector<T>>, n_targets: usize, kind: TargetKind) -> Result<Self> {
        let (pool, _) = dedup_pool(points)?;
        let n_features = pool[0].dim();
        Ok(Self {
            mode: SamplingMode::Pool(pool),
            n_features,
            n_targets,
            kind,
        })
    }

    pub fn population(
        bounds: Bounds<T>,
        known_constraint: Option<KnownConstraint<T>>,
        n_targets: usize,
        kind: TargetKind,
    ) -> Self {
        Self {
            n_features: bounds.dim(),
            mode: SamplingMode::Population {
                bounds,
                known_constraint,
            },
            n_targets,
            kind,
        }
    }

    pub fn mode(&self) -> &SamplingMode<T> {
        &self.mode
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_targets(&self) -> usize {
        self.n_targets
    }

    pub fn kind(&self) -> TargetKind {
        self.kind
    }

    pub fn pool_points(&self) -> Option<&[FeatureVector<T>]> {
        match &self.mode {
            SamplingMode::Pool(p) => Some(p),
            SamplingMode::Population { .. } => None,
        }
    }

    pub fn known_constraint(&self) -> Option<&KnownConstraint<T>> {
        match &self.mode {
            SamplingMode::Population {
                known_constraint, ..
            } => known_constraint.as_ref(),
            SamplingMode::Pool(_) => None,
        }
    }
}

fn bit_key<T: Scalar>(x: &[T]) -> Vec<u64> {
    // -0.0 and 0.0 compare equal, so they must hash equal.
    x.iter()
        .map(|&v| if v == T::zero() { 0 } else { v.as_f64().to_bits() })
        .collect()
}

/// Removes exact duplicates, keeping the first occurrence. Returns the
/// surviving points and their indices in the input.
pub fn dedup_pool<T: Scalar>(
    points: Vec<FeatureVector<T>>,
) -> Result<(Vec<FeatureVector<T>>, Vec<usize>)> {
    let n = points.first().ok_or(Error::EmptyPool)?.dim();
    let mut seen = HashSet::with_capacity(points.len());
    let mut kept = Vec::with_capacity(points.len());
    let mut pool = Vec::with_capacity(points.len());
    for (i, p) in points.into_iter().enumerate() {
        if p.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.dim(),
            });
        }
        if seen.insert(bit_key(&p)) {
            kept.push(i);
            pool.push(p);
        }
    }
    Ok((pool, kept))
}

/// Number of distinct points (exact comparison).
pub(crate) fn count_distinct<T: Scalar, V: AsRef<[T]>>(points: &[V]) -> usize {
    points
        .iter()
        .map(|p| bit_key(p.as_ref()))
        .collect::<HashSet<_>>()
        .len()
}

/// Smallest box containing the sampling domain.
pub fn compute_bounds<T: Scalar>(spec: &ProblemSpec<T>) -> Result<Bounds<T>> {
    match &spec.mode {
        SamplingMode::Pool(points) => Bounds::enclosing(points),
        SamplingMode::Population { bounds, .. } => Ok(bounds.clone()),
    }
}

/// Everything the learner has queried so far.
#[derive(Clone, Debug)]
pub struct LearnerState<T> {
    samples: Vec<(FeatureVector<T>, QueryResult<T>)>,
    feasible: Vec<usize>,
    consumed: Vec<usize>,
    consumed_mask: Vec<bool>,
}

impl<T: Scalar> LearnerState<T> {
    /// `pool_size` is zero in population mode.
    pub fn new(pool_size: usize) -> Self {
        Self {
            samples: Vec::new(),
            feasible: Vec::new(),
            consumed: Vec::new(),
            consumed_mask: vec![false; pool_size],
        }
    }

    /// Records one oracle call.
    pub fn record(
        &mut self,
        x: FeatureVector<T>,
        result: QueryResult<T>,
        pool_index: Option<usize>,
    ) -> Result<()> {
        if let Some(j) = pool_index {
            match self.consumed_mask.get(j) {
                None => return Err(Error::IndexOutOfRange(j)),
                Some(true) => return Err(Error::AlreadyConsumed(j)),
                Some(false) => {}
            }
            self.consumed_mask[j] = true;
            self.consumed.push(j);
        }
        if result.is_feasible() {
            self.feasible.push(self.samples.len());
        }
        self.samples.push((x, result));
        Ok(())
    }

    pub fn samples(&self) -> &[(FeatureVector<T>, QueryResult<T>)] {
        &self.samples
    }

    /// Indices into [`samples`](Self::samples) with a labeled result.
    pub fn feasible_indices(&self) -> &[usize] {
        &self.feasible
    }

    pub fn labeled(&self) -> impl Iterator<Item = (&FeatureVector<T>, &TargetVector<T>)> + '_ {
        self.feasible.iter().map(move |&k| {
            let (x, r) = &self.samples[k];
            (x, r.target().expect("feasible index holds a label"))
        })
    }

    /// Consumed pool indices in query order.
    pub fn consumed(&self) -> &[usize] {
        &self.consumed
    }

    pub fn is_consumed(&self, j: usize) -> bool {
        self.consumed_mask.get(j).copied().unwrap_or(false)
    }

    pub fn pool_size(&self) -> usize {
        self.consumed_mask.len()
    }

    pub fn query_count(&self) -> usize {
        self.samples.len()
    }

    pub fn infeasible_count(&self) -> usize {
        self.samples.len() - self.feasible.len()
    }
}
