//! The predictor contract consumed by the engine, plus a built-in
//! feedforward network so the engine runs without external models.

mod mlp;

pub use mlp::{
    Activation, Mlp, MlpCheckpoint, MlpConfig, Network, OutputActivation, ScalerCheckpoint,
    TrainingSummary,
};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{FeatureVector, TargetVector};

/// Anything that can be fitted to the labeled samples and evaluated at
/// arbitrary feature vectors.
pub trait Predictor<T: Scalar> {
    /// Fits on the labeled samples. `seed` drives any random initialization.
    fn fit(&mut self, xs: &[&FeatureVector<T>], ys: &[&TargetVector<T>], seed: u64) -> Result<()>;

    fn predict_slice(&self, x: &[T]) -> Result<Vec<T>>;

    fn predict(&self, x: &FeatureVector<T>) -> Result<TargetVector<T>> {
        Ok(TargetVector::from_finite(self.predict_slice(x)?))
    }

    fn supports_warm_start(&self) -> bool {
        false
    }
}

/// Per-target standardization of regression targets, refitted on the
/// labeled data before every training run.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetScaler<T> {
    mean: Vec<T>,
    std: Vec<T>,
}

impl<T: Scalar> TargetScaler<T> {
    pub const STD_FLOOR: f64 = 1e-8;

    pub fn fit<Y: AsRef<[T]>>(ys: &[Y]) -> Result<Self> {
        let first = ys.first().ok_or(Error::NoLabeledSamples)?.as_ref();
        let m = first.len();
        let count = T::from_usize_lossy(ys.len());
        let mut mean = vec![T::zero(); m];
        for y in ys {
            let y = y.as_ref();
            if y.len() != m {
                return Err(Error::DimensionMismatch { expected: m, got: y.len() });
            }
            for i in 0..m {
                mean[i] = mean[i] + y[i];
            }
        }
        mean.iter_mut().for_each(|v| *v = *v / count);
        let mut var = vec![T::zero(); m];
        for y in ys {
            for (i, &v) in y.as_ref().iter().enumerate() {
                let d = v - mean[i];
                var[i] = var[i] + d * d;
            }
        }
        let floor = T::lit(Self::STD_FLOOR);
        let std = var.into_iter().map(|v| (v / count).sqrt().max(floor)).collect();
        Ok(Self { mean, std })
    }

    pub fn from_parts(mean: Vec<T>, std: Vec<T>) -> Result<Self> {
        if mean.len() != std.len() {
            return Err(Error::DimensionMismatch { expected: mean.len(), got: std.len() });
        }
        let floor = T::lit(Self::STD_FLOOR);
        Ok(Self {
            mean,
            std: std.into_iter().map(|s| s.max(floor)).collect(),
        })
    }

    pub fn mean(&self) -> &[T] {
        &self.mean
    }

    pub fn std(&self) -> &[T] {
        &self.std
    }

    pub fn scale(&self, y: &[T]) -> Vec<T> {
        y.iter()
            .enumerate()
            .map(|(i, &v)| (v - self.mean[i]) / self.std[i])
            .collect()
    }

    pub fn unscale(&self, y: &[T]) -> Vec<T> {
        y.iter()
            .enumerate()
            .map(|(i, &v)| v * self.std[i] + self.mean[i])
            .collect()
    }
}
