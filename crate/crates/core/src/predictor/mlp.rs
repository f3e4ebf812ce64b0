use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Predictor, TargetScaler};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{Bounds, FeatureVector, ScalingTransform, TargetVector};

const HIDDEN_VAR_FLOOR: f64 = 1e-6;
const MAX_RESTARTS: u64 = 3;
const DEGENERATE_MARGIN: f64 = 1e-3;

/// Loss of the best constant prediction: the per-output target mean.
fn constant_loss<T: Scalar>(targets: &[Vec<T>], output: OutputActivation) -> f64 {
    let n = targets.len() as f64;
    let m = targets.first().map_or(0, Vec::len);
    (0..m)
        .map(|i| {
            let mean = targets.iter().map(|y| y[i].as_f64()).sum::<f64>() / n;
            match output {
                OutputActivation::Linear => {
                    0.5 * targets.iter().map(|y| (y[i].as_f64() - mean).powi(2)).sum::<f64>() / n
                }
                OutputActivation::Logistic => {
                    let h = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
                    h(mean) + h(1.0 - mean)
                }
            }
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Logistic,
    Relu,
}

/// Output head. `Linear` is trained with squared loss on standardized
/// targets, `Logistic` with per-output binary cross-entropy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputActivation {
    Linear,
    Logistic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MlpConfig {
    pub hidden_layers: Vec<usize>,
    pub activation: Activation,
    pub output: OutputActivation,
    /// Weight of `‖W‖² / (2N)` added to the mean loss; biases are not penalized.
    /// For a linear output the penalty applies as if the loss were measured on
    /// unstandardized targets.
    pub l2_penalty: f64,
    pub max_epochs: usize,
    /// Initial Adam step size.
    pub learning_rate: f64,
    pub max_learning_rate: f64,
    /// Step size multiplier after an accepted (non-increasing) step.
    pub lr_growth: f64,
    /// Step size multiplier after a rejected step.
    pub lr_shrink: f64,
    pub min_learning_rate: f64,
    /// Relative loss decrease below which an epoch counts as stalled.
    pub tol: f64,
    /// Consecutive stalled epochs before training stops.
    pub patience: usize,
    pub warm_start: bool,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden_layers: vec![5, 5],
            activation: Activation::Logistic,
            output: OutputActivation::Linear,
            l2_penalty: 1e-2,
            max_epochs: 3000,
            learning_rate: 1e-2,
            max_learning_rate: 5e-2,
            lr_growth: 1.05,
            lr_shrink: 0.5,
            min_learning_rate: 1e-7,
            tol: 1e-7,
            patience: 50,
            warm_start: false,
            seed: 0,
        }
    }
}

impl MlpConfig {
    /// Two hidden layers of five logistic units, linear output.
    pub fn regression() -> Self {
        Self::default()
    }

    /// Logistic hidden and output layers.
    pub fn classification(hidden_layers: Vec<usize>) -> Self {
        Self {
            hidden_layers,
            output: OutputActivation::Logistic,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.hidden_layers.is_empty() || self.hidden_layers.contains(&0) {
            return Err(Error::config("at least one hidden layer of positive width is required"));
        }
        if !(self.l2_penalty >= 0.0) {
            return Err(Error::config("l2_penalty must be non-negative"));
        }
        if !(self.learning_rate > 0.0 && self.max_learning_rate >= self.learning_rate) {
            return Err(Error::config("learning rates must satisfy 0 < learning_rate <= max_learning_rate"));
        }
        if !(self.lr_shrink > 0.0 && self.lr_shrink < 1.0 && self.lr_growth >= 1.0) {
            return Err(Error::config("need 0 < lr_shrink < 1 <= lr_growth"));
        }
        Ok(())
    }
}

/// Dense feedforward network with parameters stored flat, layer by layer,
/// each layer as its row-major `(out × in)` weight matrix followed by its bias.
#[derive(Clone, Debug, PartialEq)]
pub struct Network<T> {
    sizes: Vec<usize>,
    activation: Activation,
    output: OutputActivation,
    params: Vec<T>,
}

/// Per-sample activations reused across epochs.
struct Workspace<T> {
    acts: Vec<Vec<T>>,
    deltas: Vec<Vec<T>>,
}

impl<T: Scalar> Workspace<T> {
    fn new(sizes: &[usize]) -> Self {
        Self {
            acts: sizes.iter().map(|&s| vec![T::zero(); s]).collect(),
            deltas: sizes.iter().map(|&s| vec![T::zero(); s]).collect(),
        }
    }
}

#[inline]
fn logistic<T: Scalar>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

/// `ln(1 + e^z)` without overflow.
#[inline]
fn softplus<T: Scalar>(z: T) -> T {
    z.max(T::zero()) + (-z.abs()).exp().ln_1p()
}

impl<T: Scalar> Network<T> {
    pub fn zeros(sizes: Vec<usize>, activation: Activation, output: OutputActivation) -> Self {
        let count = Self::param_count(&sizes);
        Self {
            sizes,
            activation,
            output,
            params: vec![T::zero(); count],
        }
    }

    pub fn from_parts(
        sizes: Vec<usize>,
        activation: Activation,
        output: OutputActivation,
        params: Vec<T>,
    ) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::config("a network needs an input and an output layer"));
        }
        let count = Self::param_count(&sizes);
        if params.len() != count {
            return Err(Error::DimensionMismatch { expected: count, got: params.len() });
        }
        Ok(Self {
            sizes,
            activation,
            output,
            params,
        })
    }

    /// Glorot-uniform initialization of weights and biases.
    pub fn random<R: Rng + ?Sized>(
        sizes: Vec<usize>,
        activation: Activation,
        output: OutputActivation,
        rng: &mut R,
    ) -> Self {
        let mut net = Self::zeros(sizes, activation, output);
        let factor = match activation {
            Activation::Logistic => 2.0,
            Activation::Relu => 6.0,
        };
        let mut off = 0;
        for l in 0..net.sizes.len() - 1 {
            let (fan_in, fan_out) = (net.sizes[l], net.sizes[l + 1]);
            let bound = (factor / (fan_in + fan_out) as f64).sqrt();
            let len = fan_out * (fan_in + 1);
            for p in &mut net.params[off..off + len] {
                *p = T::lit(rng.random_range(-bound..bound));
            }
            off += len;
        }
        net
    }

    fn param_count(sizes: &[usize]) -> usize {
        sizes.windows(2).map(|w| w[1] * (w[0] + 1)).sum()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn activation(&self) -> Activation {
        self.activation
    }

    pub fn output(&self) -> OutputActivation {
        self.output
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [T] {
        &mut self.params
    }

    pub fn n_inputs(&self) -> usize {
        self.sizes[0]
    }

    pub fn n_outputs(&self) -> usize {
        *self.sizes.last().expect("non-empty")
    }

    #[inline]
    fn hidden(&self, z: T) -> T {
        match self.activation {
            Activation::Logistic => logistic(z),
            Activation::Relu => z.max(T::zero()),
        }
    }

    #[inline]
    fn hidden_grad(&self, a: T) -> T {
        match self.activation {
            Activation::Logistic => a * (T::one() - a),
            Activation::Relu => {
                if a > T::zero() {
                    T::one()
                } else {
                    T::zero()
                }
            }
        }
    }

    /// Fills `ws.acts`; the last layer holds pre-activations of the output.
    fn forward_ws(&self, params: &[T], x: &[T], ws: &mut Workspace<T>) {
        ws.acts[0].copy_from_slice(x);
        let layers = self.sizes.len() - 1;
        let mut off = 0;
        for l in 0..layers {
            let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
            let (w, rest) = params[off..].split_at(n_out * n_in);
            let b = &rest[..n_out];
            let (prev, next) = ws.acts.split_at_mut(l + 1);
            let input = &prev[l];
            let out = &mut next[0];
            for j in 0..n_out {
                let row = &w[j * n_in..(j + 1) * n_in];
                let mut z = b[j];
                for (&wi, &ai) in row.iter().zip(input.iter()) {
                    z = z + wi * ai;
                }
                out[j] = if l + 1 < layers { self.hidden(z) } else { z };
            }
            off += n_out * (n_in + 1);
        }
    }

    fn finish_output(&self, z: T) -> T {
        match self.output {
            OutputActivation::Linear => z,
            OutputActivation::Logistic => logistic(z),
        }
    }

    pub fn forward(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.n_inputs() {
            return Err(Error::DimensionMismatch {
                expected: self.n_inputs(),
                got: x.len(),
            });
        }
        let mut ws = Workspace::new(&self.sizes);
        self.forward_ws(&self.params, x, &mut ws);
        Ok(ws.acts.last().expect("output layer").iter().map(|&z| self.finish_output(z)).collect())
    }

    /// Mean loss plus `Σ_l l2[l] · ‖W_l‖² / (2N)` at `params`, with its
    /// gradient written into `grad`. `l2` holds one coefficient per layer.
    pub fn loss_and_gradient<X: AsRef<[T]>, Y: AsRef<[T]>>(
        &self,
        params: &[T],
        xs: &[X],
        ys: &[Y],
        l2: &[T],
        grad: &mut [T],
    ) -> T {
        let mut ws = Workspace::new(&self.sizes);
        self.loss_grad_ws(params, xs, ys, l2, grad, &mut ws)
    }

    fn loss_grad_ws<X: AsRef<[T]>, Y: AsRef<[T]>>(
        &self,
        params: &[T],
        xs: &[X],
        ys: &[Y],
        l2: &[T],
        grad: &mut [T],
        ws: &mut Workspace<T>,
    ) -> T {
        grad.iter_mut().for_each(|g| *g = T::zero());
        let n = T::from_usize_lossy(xs.len());
        let inv_n = n.recip();
        let half = T::lit(0.5);
        let layers = self.sizes.len() - 1;
        let mut offsets = Vec::with_capacity(layers);
        let mut off = 0;
        for l in 0..layers {
            offsets.push(off);
            off += self.sizes[l + 1] * (self.sizes[l] + 1);
        }

        let mut loss = T::zero();
        for (x, y) in xs.iter().zip(ys) {
            let (x, y) = (x.as_ref(), y.as_ref());
            self.forward_ws(params, x, ws);
            let out_z = &ws.acts[layers];
            let out_d = &mut ws.deltas[layers];
            for i in 0..out_z.len() {
                let z = out_z[i];
                match self.output {
                    OutputActivation::Linear => {
                        let r = z - y[i];
                        loss = loss + half * r * r;
                        out_d[i] = r * inv_n;
                    }
                    OutputActivation::Logistic => {
                        loss = loss + softplus(z) - y[i] * z;
                        out_d[i] = (logistic(z) - y[i]) * inv_n;
                    }
                }
            }
            for l in (0..layers).rev() {
                let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
                let w_off = offsets[l];
                let b_off = w_off + n_out * n_in;
                {
                    let delta = &ws.deltas[l + 1];
                    let input = &ws.acts[l];
                    for j in 0..n_out {
                        let dj = delta[j];
                        let g_row = &mut grad[w_off + j * n_in..w_off + (j + 1) * n_in];
                        for (g, &a) in g_row.iter_mut().zip(input.iter()) {
                            *g = *g + dj * a;
                        }
                        grad[b_off + j] = grad[b_off + j] + dj;
                    }
                }
                if l > 0 {
                    let w = &params[w_off..w_off + n_out * n_in];
                    let (lo, hi) = ws.deltas.split_at_mut(l + 1);
                    let prev_d = &mut lo[l];
                    let delta = &hi[0];
                    let act = &ws.acts[l];
                    for i in 0..n_in {
                        let mut s = T::zero();
                        for j in 0..n_out {
                            s = s + w[j * n_in + i] * delta[j];
                        }
                        prev_d[i] = s * self.hidden_grad(act[i]);
                    }
                }
            }
        }
        loss = loss * inv_n;

        let mut penalty = T::zero();
        for l in 0..layers {
            if l2[l] > T::zero() {
                let coef = l2[l] * inv_n;
                let mut sq = T::zero();
                let w_off = offsets[l];
                let len = self.sizes[l + 1] * self.sizes[l];
                for k in w_off..w_off + len {
                    let w = params[k];
                    sq = sq + w * w;
                    grad[k] = grad[k] + coef * w;
                }
                penalty = penalty + half * coef * sq;
            }
        }
        loss + penalty
    }

    /// [`train_penalized`](Self::train_penalized) with `cfg.l2_penalty` on
    /// every layer.
    pub fn train<X: AsRef<[T]>, Y: AsRef<[T]>>(&mut self, xs: &[X], ys: &[Y], cfg: &MlpConfig) -> TrainingSummary {
        let l2 = vec![T::lit(cfg.l2_penalty); self.sizes.len() - 1];
        self.train_penalized(xs, ys, cfg, &l2)
    }

    /// Full-batch Adam with step-size control: a step that would increase
    /// the loss is rejected and the step size shrinks, so the accepted loss
    /// sequence is non-increasing.
    pub fn train_penalized<X: AsRef<[T]>, Y: AsRef<[T]>>(
        &mut self,
        xs: &[X],
        ys: &[Y],
        cfg: &MlpConfig,
        l2: &[T],
    ) -> TrainingSummary {
        assert_eq!(l2.len(), self.sizes.len() - 1, "one penalty per layer");
        let (beta1, beta2, adam_eps) = (T::lit(0.9), T::lit(0.999), T::lit(1e-8));
        let tol = T::lit(cfg.tol);
        let np = self.params.len();
        let mut ws = Workspace::new(&self.sizes);
        let mut grad = vec![T::zero(); np];
        let mut trial_grad = vec![T::zero(); np];
        let mut trial = vec![T::zero(); np];
        let mut m = vec![T::zero(); np];
        let mut v = vec![T::zero(); np];
        let mut params = std::mem::take(&mut self.params);
        let mut loss = self.loss_grad_ws(&params, xs, ys, l2, &mut grad, &mut ws);
        let mut history = Vec::with_capacity(cfg.max_epochs + 1);
        history.push(loss.as_f64());
        let mut lr = cfg.learning_rate;
        let mut stalled = 0;
        let mut b1t = T::one();
        let mut b2t = T::one();
        let mut epochs = 0;
        for _ in 0..cfg.max_epochs {
            epochs += 1;
            b1t = b1t * beta1;
            b2t = b2t * beta2;
            let step = T::lit(lr);
            for k in 0..np {
                m[k] = beta1 * m[k] + (T::one() - beta1) * grad[k];
                v[k] = beta2 * v[k] + (T::one() - beta2) * grad[k] * grad[k];
                let mh = m[k] / (T::one() - b1t);
                let vh = v[k] / (T::one() - b2t);
                trial[k] = params[k] - step * mh / (vh.sqrt() + adam_eps);
            }
            let trial_loss = self.loss_grad_ws(&trial, xs, ys, l2, &mut trial_grad, &mut ws);
            if trial_loss <= loss {
                let gain = loss - trial_loss;
                std::mem::swap(&mut params, &mut trial);
                std::mem::swap(&mut grad, &mut trial_grad);
                loss = trial_loss;
                lr = (lr * cfg.lr_growth).min(cfg.max_learning_rate);
                if gain <= tol * loss.max(T::lit(1e-12)) {
                    stalled += 1;
                    if stalled >= cfg.patience {
                        history.push(loss.as_f64());
                        break;
                    }
                } else {
                    stalled = 0;
                }
            } else {
                // momentum pointed uphill; restart it from the current gradient
                m.iter_mut().for_each(|v| *v = T::zero());
                b1t = T::one();
                lr *= cfg.lr_shrink;
                if lr < cfg.min_learning_rate {
                    history.push(loss.as_f64());
                    break;
                }
            }
            history.push(loss.as_f64());
        }
        self.params = params;
        TrainingSummary {
            epochs,
            final_loss: loss.as_f64(),
            loss_history: history,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainingSummary {
    pub epochs: usize,
    pub final_loss: f64,
    /// Accepted loss after each epoch, starting with the initial loss.
    pub loss_history: Vec<f64>,
}

/// Feedforward network predictor: input scaling onto `[-1, 1]^n`, target
/// standardization for regression, and the network itself.
#[derive(Clone, Debug)]
pub struct Mlp<T> {
    config: MlpConfig,
    input: Option<ScalingTransform<T>>,
    network: Option<Network<T>>,
    scaler: Option<TargetScaler<T>>,
    last_training: Option<TrainingSummary>,
}

impl<T: Scalar> Mlp<T> {
    pub fn new(config: MlpConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            input: None,
            network: None,
            scaler: None,
            last_training: None,
        })
    }

    /// Feeds the network `σ(x)` for the given box instead of raw features.
    pub fn with_input_scaling(mut self, transform: ScalingTransform<T>) -> Self {
        self.input = Some(transform);
        self
    }

    pub fn config(&self) -> &MlpConfig {
        &self.config
    }

    pub fn network(&self) -> Option<&Network<T>> {
        self.network.as_ref()
    }

    pub fn last_training(&self) -> Option<&TrainingSummary> {
        self.last_training.as_ref()
    }

    fn transform_input(&self, x: &[T]) -> Result<Vec<T>> {
        match &self.input {
            Some(t) => t.scale_slice(x),
            None => Ok(x.to_vec()),
        }
    }

    pub fn to_checkpoint(&self) -> Result<MlpCheckpoint> {
        let net = self.network.as_ref().ok_or(Error::NotFitted)?;
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        let mut off = 0;
        for w in net.sizes.windows(2) {
            let (n_in, n_out) = (w[0], w[1]);
            let p = &net.params[off..off + n_out * (n_in + 1)];
            weights.push(p[..n_out * n_in].iter().map(|v| v.as_f64()).collect());
            biases.push(p[n_out * n_in..].iter().map(|v| v.as_f64()).collect());
            off += n_out * (n_in + 1);
        }
        let to64 = |v: &[T]| v.iter().map(|x| x.as_f64()).collect::<Vec<_>>();
        Ok(MlpCheckpoint {
            layer_sizes: net.sizes.clone(),
            hidden_activation: net.activation,
            output_activation: net.output,
            weights,
            biases,
            target_scaler: self.scaler.as_ref().map(|s| ScalerCheckpoint {
                mean: to64(s.mean()),
                std: to64(s.std()),
            }),
            input_lower: self.input.as_ref().map(|t| to64(t.bounds().lower())),
            input_upper: self.input.as_ref().map(|t| to64(t.bounds().upper())),
        })
    }

    pub fn from_checkpoint(config: MlpConfig, ck: &MlpCheckpoint) -> Result<Self> {
        let mut params = Vec::new();
        if ck.weights.len() + 1 != ck.layer_sizes.len() || ck.biases.len() != ck.weights.len() {
            return Err(Error::config("checkpoint layer count mismatch"));
        }
        for (w, b) in ck.weights.iter().zip(&ck.biases) {
            params.extend(w.iter().map(|&v| T::lit(v)));
            params.extend(b.iter().map(|&v| T::lit(v)));
        }
        let network = Network::from_parts(
            ck.layer_sizes.clone(),
            ck.hidden_activation,
            ck.output_activation,
            params,
        )?;
        let lit = |v: &[f64]| v.iter().map(|&x| T::lit(x)).collect::<Vec<T>>();
        let scaler = match &ck.target_scaler {
            Some(s) => Some(TargetScaler::from_parts(lit(&s.mean), lit(&s.std))?),
            None => None,
        };
        let input = match (&ck.input_lower, &ck.input_upper) {
            (Some(lo), Some(hi)) => Some(ScalingTransform::new(Bounds::new(lit(lo), lit(hi))?)),
            (None, None) => None,
            _ => return Err(Error::config("checkpoint has only one side of the input bounds")),
        };
        let mut mlp = Self::new(config)?;
        mlp.network = Some(network);
        mlp.scaler = scaler;
        mlp.input = input;
        Ok(mlp)
    }
}

impl<T: Scalar> Predictor<T> for Mlp<T> {
    fn fit(&mut self, xs: &[&FeatureVector<T>], ys: &[&TargetVector<T>], seed: u64) -> Result<()> {
        if xs.is_empty() {
            return Err(Error::NoLabeledSamples);
        }
        if xs.len() != ys.len() {
            return Err(Error::DimensionMismatch { expected: xs.len(), got: ys.len() });
        }
        let inputs = xs.iter().map(|x| self.transform_input(x)).collect::<Result<Vec<_>>>()?;
        let n_in = inputs[0].len();
        let n_out = ys[0].dim();
        let alpha = T::lit(self.config.l2_penalty);
        let n_layers = self.config.hidden_layers.len() + 1;
        let mut l2 = vec![alpha; n_layers];
        let targets: Vec<Vec<T>> = match self.config.output {
            OutputActivation::Linear => {
                let scaler = TargetScaler::fit(ys)?;
                let scaled = ys.iter().map(|y| scaler.scale(y)).collect();
                // same objective as training on raw targets with a uniform penalty
                let var = scaler.std().iter().fold(T::zero(), |acc, &s| acc + s * s)
                    / T::from_usize_lossy(n_out);
                let hidden = alpha / var.max(T::lit(HIDDEN_VAR_FLOOR));
                l2[..n_layers - 1].iter_mut().for_each(|v| *v = hidden);
                self.scaler = Some(scaler);
                scaled
            }
            OutputActivation::Logistic => {
                self.scaler = None;
                ys.iter().map(|y| y.to_vec()).collect()
            }
        };
        let mut sizes = Vec::with_capacity(self.config.hidden_layers.len() + 2);
        sizes.push(n_in);
        sizes.extend(&self.config.hidden_layers);
        sizes.push(n_out);
        let reuse = self.config.warm_start && self.network.as_ref().is_some_and(|n| n.sizes == sizes);
        let fresh = |attempt: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed.wrapping_add(seed));
            rng.set_stream(attempt);
            Network::random(sizes.clone(), self.config.activation, self.config.output, &mut rng)
        };
        let mut net = if reuse {
            self.network.take().expect("checked above")
        } else {
            fresh(0)
        };
        let mut summary = net.train_penalized(&inputs, &targets, &self.config, &l2);
        // a fit no better than the best constant is stuck near the zero-weight
        // saddle; retry from fresh weights, first under a weaker penalty
        let floor = constant_loss(&targets, self.config.output) * (1.0 - DEGENERATE_MARGIN);
        for attempt in 1..=MAX_RESTARTS {
            if summary.final_loss < floor {
                break;
            }
            let mut retry = fresh(attempt);
            let relax = T::lit(10f64.powi(-(attempt as i32)));
            let weak: Vec<T> = l2.iter().map(|&a| a * relax).collect();
            retry.train_penalized(&inputs, &targets, &self.config, &weak);
            let s = retry.train_penalized(&inputs, &targets, &self.config, &l2);
            if s.final_loss < summary.final_loss {
                net = retry;
                summary = s;
            }
        }
        self.last_training = Some(summary);
        self.network = Some(net);
        Ok(())
    }

    fn predict_slice(&self, x: &[T]) -> Result<Vec<T>> {
        let net = self.network.as_ref().ok_or(Error::NotFitted)?;
        let out = net.forward(&self.transform_input(x)?)?;
        Ok(match &self.scaler {
            Some(s) => s.unscale(&out),
            None => out,
        })
    }

    fn supports_warm_start(&self) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalerCheckpoint {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

/// Self-describing JSON form of a fitted [`Mlp`]. Weight matrices are
/// row-major `(out × in)`, one per layer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MlpCheckpoint {
    pub layer_sizes: Vec<usize>,
    pub hidden_activation: Activation,
    pub output_activation: OutputActivation,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
    pub target_scaler: Option<ScalerCheckpoint>,
    pub input_lower: Option<Vec<f64>>,
    pub input_upper: Option<Vec<f64>>,
}
