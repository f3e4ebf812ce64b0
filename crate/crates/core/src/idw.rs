//! Inverse-distance weighting: weights, normalized coefficients, the IDW
//! variance (uncertainty) and the IDW distance (exploration).
//!
//! The free functions mirror the public contract and take raw feature
//! vectors plus a [`ScalingTransform`]. [`Idw`] works on points that are
//! already scaled and is what the engine uses in its inner loops.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{sq_dist, FeatureVector, LearnerState, ScalingTransform, TargetVector};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    /// `1 / d²`
    Basic,
    /// `exp(-d²) / d²`
    #[default]
    Exponential,
}

/// Squared scaled distance at or below which a query point is treated as
/// coinciding with a sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoincidenceThreshold<T>(T);

impl<T: Scalar> CoincidenceThreshold<T> {
    pub fn new(eps: T) -> Result<Self> {
        if eps > T::zero() && eps.is_finite() {
            Ok(Self(eps))
        } else {
            Err(Error::config("coincidence threshold must be positive"))
        }
    }

    pub fn get(self) -> T {
        self.0
    }
}

impl<T: Scalar> Default for CoincidenceThreshold<T> {
    fn default() -> Self {
        Self(T::lit(1e-12))
    }
}

/// Weight of a sample at squared distance `d2`. Callers handle `d2 <= eps`.
#[inline]
pub fn idw_weight<T: Scalar>(kind: WeightKind, d2: T) -> T {
    debug_assert!(d2 > T::zero());
    match kind {
        WeightKind::Basic => d2.recip(),
        WeightKind::Exponential => (-d2).exp() / d2,
    }
}

/// IDW evaluator over pre-scaled points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Idw<T> {
    pub kind: WeightKind,
    pub eps: CoincidenceThreshold<T>,
}

impl<T: Scalar> Default for Idw<T> {
    fn default() -> Self {
        Self::new(WeightKind::default(), CoincidenceThreshold::default())
    }
}

impl<T: Scalar> Idw<T> {
    pub fn new(kind: WeightKind, eps: CoincidenceThreshold<T>) -> Self {
        Self { kind, eps }
    }

    /// Writes the squared distances from `x` to every sample into `d2` and
    /// returns the first coinciding sample, if any.
    fn distances<S: AsRef<[T]>>(&self, x: &[T], samples: &[S], d2: &mut Vec<T>) -> Option<usize> {
        d2.clear();
        let eps = self.eps.get();
        let mut hit = None;
        for (k, s) in samples.iter().enumerate() {
            let d = sq_dist(x, s.as_ref());
            if hit.is_none() && d <= eps {
                hit = Some(k);
            }
            d2.push(d);
        }
        hit
    }

    /// Normalized coefficients `v_k(x)`, written into `out`.
    ///
    /// If every exponential weight underflows the basic weights are used for
    /// this evaluation instead.
    pub fn coefficients_into<S: AsRef<[T]>>(&self, x: &[T], samples: &[S], out: &mut Vec<T>) {
        let hit = self.distances(x, samples, out);
        if let Some(k) = hit {
            out.iter_mut().for_each(|v| *v = T::zero());
            out[k] = T::one();
            return;
        }
        let mut total = T::zero();
        for v in out.iter_mut() {
            *v = idw_weight(self.kind, *v);
            total = total + *v;
        }
        if !(total > T::zero()) || !total.is_finite() {
            total = T::zero();
            for (v, s) in out.iter_mut().zip(samples) {
                *v = idw_weight(WeightKind::Basic, sq_dist(x, s.as_ref()));
                total = total + *v;
            }
        }
        out.iter_mut().for_each(|v| *v = *v / total);
    }

    pub fn coefficients<S: AsRef<[T]>>(&self, x: &[T], samples: &[S]) -> Vec<T> {
        let mut out = Vec::with_capacity(samples.len());
        self.coefficients_into(x, samples, &mut out);
        out
    }

    /// IDW variance per target component. `samples` holds every queried
    /// point and `targets[k]` is `None` where the query was infeasible: such
    /// samples take part in the normalization of `v_k` but add no term.
    /// `prediction` is the predictor output at `x`.
    pub fn variance<S: AsRef<[T]>, Y: AsRef<[T]>>(
        &self,
        x: &[T],
        samples: &[S],
        targets: &[Option<Y>],
        prediction: &[T],
        scratch: &mut Vec<T>,
    ) -> Vec<T> {
        debug_assert_eq!(samples.len(), targets.len());
        self.coefficients_into(x, samples, scratch);
        let mut s2 = vec![T::zero(); prediction.len()];
        for (&v, y) in scratch.iter().zip(targets) {
            let Some(y) = y else { continue };
            if v == T::zero() {
                continue;
            }
            for (i, (&yk, &yh)) in y.as_ref().iter().zip(prediction).enumerate() {
                let r = yk - yh;
                s2[i] = s2[i] + v * r * r;
            }
        }
        s2
    }

    /// IDW distance in `[0, 1]`: zero at every sample, tending to one far
    /// from all of them.
    pub fn distance<S: AsRef<[T]>>(&self, x: &[T], samples: &[S]) -> T {
        let eps = self.eps.get();
        let mut total = T::zero();
        for s in samples {
            let d = sq_dist(x, s.as_ref());
            if d <= eps {
                return T::zero();
            }
            total = total + idw_weight(self.kind, d);
        }
        if !(total > T::zero()) {
            return T::one();
        }
        T::FRAC_2_PI() * total.recip().atan()
    }
}

fn scale_all<T: Scalar>(t: &ScalingTransform<T>, xs: &[&FeatureVector<T>]) -> Result<Vec<Vec<T>>> {
    xs.iter().map(|x| t.scale_slice(x)).collect()
}

/// Normalized IDW coefficients of `x` with respect to `samples`.
pub fn idw_coefficients<T: Scalar>(
    t: &ScalingTransform<T>,
    idw: &Idw<T>,
    x: &FeatureVector<T>,
    samples: &[FeatureVector<T>],
) -> Result<Vec<T>> {
    if samples.is_empty() {
        return Err(Error::NoLabeledSamples);
    }
    let xs = t.scale_slice(x)?;
    let refs: Vec<&FeatureVector<T>> = samples.iter().collect();
    Ok(idw.coefficients(&xs, &scale_all(t, &refs)?))
}

/// IDW variance at `x` over the samples of `state`. Infeasible samples
/// count in the normalization of the coefficients only.
pub fn idw_variance<T: Scalar>(
    t: &ScalingTransform<T>,
    idw: &Idw<T>,
    x: &FeatureVector<T>,
    state: &LearnerState<T>,
    prediction: &TargetVector<T>,
) -> Result<Vec<T>> {
    if state.feasible_indices().is_empty() {
        return Err(Error::NoLabeledSamples);
    }
    let targets: Vec<Option<&[T]>> = state.samples().iter().map(|(_, r)| r.target().map(|y| y.as_slice())).collect();
    if let Some(y) = targets.iter().flatten().find(|y| y.len() != prediction.dim()) {
        return Err(Error::DimensionMismatch {
            expected: prediction.dim(),
            got: y.len(),
        });
    }
    let xs: Vec<&FeatureVector<T>> = state.samples().iter().map(|(x, _)| x).collect();
    let scaled = scale_all(t, &xs)?;
    let mut scratch = Vec::new();
    Ok(idw.variance(&t.scale_slice(x)?, &scaled, &targets, prediction, &mut scratch))
}

/// IDW distance at `x` over every queried sample, feasible or not.
pub fn idw_distance<T: Scalar>(
    t: &ScalingTransform<T>,
    idw: &Idw<T>,
    x: &FeatureVector<T>,
    samples: &[FeatureVector<T>],
) -> Result<T> {
    let xs = t.scale_slice(x)?;
    let refs: Vec<&FeatureVector<T>> = samples.iter().collect();
    Ok(idw.distance(&xs, &scale_all(t, &refs)?))
}
