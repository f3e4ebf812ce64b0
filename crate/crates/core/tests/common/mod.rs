#![allow(dead_code)]

use ideal::data::DatasetOracle;
use ideal::density::compute_density;
use ideal::engine::{
    run, select_next_greedy_pool, select_next_pool, AcquisitionConfig, EngineConfig, ScaledPool, ScaledSamples,
    Strategy,
};
use ideal::optim::PsoConfig;
use ideal::predictor::{Mlp, MlpConfig, Predictor};
use ideal::space::{
    compute_bounds, Bounds, FeatureVector, LearnerState, ProblemSpec, QueryResult, ScalingTransform, TargetKind,
    TargetVector,
};
use ideal::Result;
use proptest::prelude::{prop_assert, prop_assert_eq};
use proptest::test_runner::TestCaseError;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smooth deterministic stand-in for a trained model.
pub struct Plane;

impl Predictor<f64> for Plane {
    fn fit(&mut self, _: &[&FeatureVector<f64>], _: &[&TargetVector<f64>], _: u64) -> Result<()> {
        Ok(())
    }

    fn predict_slice(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![0.3 * x[0] - 0.2 * x[1] + 0.1])
    }
}

pub fn truth(x: &[f64]) -> f64 {
    (x[0] * 1.7).sin() + x[1] * x[1]
}

pub struct Setup {
    pool: Vec<FeatureVector<f64>>,
    state: LearnerState<f64>,
    transform: ScalingTransform<f64>,
}

pub fn setup(seed: u64, m: usize, queried: usize) -> Setup {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<FeatureVector<f64>> = (0..m)
        .map(|_| FeatureVector::new(vec![rng.random_range(-2.0..3.0), rng.random_range(-10.0..10.0)]).unwrap())
        .collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);
    let mut state = LearnerState::new(m);
    for (n, &j) in order[..queried].iter().enumerate() {
        let x = &pool[j];
        let r = if n > 0 && rng.random_bool(0.2) {
            QueryResult::Infeasible
        } else {
            QueryResult::Labeled(TargetVector::new(vec![truth(x)]).unwrap())
        };
        state.record(x.clone(), r, Some(j)).unwrap();
    }
    let transform = ScalingTransform::new(Bounds::enclosing(&pool).unwrap());
    Setup { pool, state, transform }
}

pub fn scaled(t: &ScalingTransform<f64>, x: &[f64]) -> Vec<f64> {
    let b = t.bounds();
    (0..x.len())
        .map(|i| {
            let (lo, hi) = (b.lower()[i], b.upper()[i]);
            2.0 * (x[i] - (lo + hi) / 2.0) / (hi - lo)
        })
        .collect()
}

pub fn d2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum()
}

/// Independent evaluation of the acquisition with exponential weights.
pub fn brute_acquisition(s: &Setup, x: &[f64], delta: f64, omega: f64, rho: f64) -> f64 {
    let xs = scaled(&s.transform, x);
    let yhat = Plane.predict_slice(x).unwrap()[0];
    let mut wsum = 0.0;
    let mut num = 0.0;
    let mut coincide = None;
    for (xk, r) in s.state.samples() {
        let d = d2(&xs, &scaled(&s.transform, xk));
        if d <= 1e-12 {
            coincide.get_or_insert(r.target().map(|y| y[0]));
            continue;
        }
        let w = (-d).exp() / d;
        wsum += w;
        if let Some(y) = r.target() {
            num += w * (y[0] - yhat).powi(2);
        }
    }
    let s2 = match coincide {
        Some(Some(y)) => (y - yhat).powi(2),
        Some(None) => 0.0,
        None => num / wsum,
    };
    let mut wall = 0.0;
    let mut at_sample = false;
    for (xk, _) in s.state.samples() {
        let d = d2(&xs, &scaled(&s.transform, xk));
        if d <= 1e-12 {
            at_sample = true;
        } else {
            wall += (-d).exp() / d;
        }
    }
    let z = if at_sample { 0.0 } else { std::f64::consts::FRAC_2_PI * (1.0 / wall).atan() };
    (1.0 + omega * rho) * (s2 + delta * z)
}

pub fn brute_density(s: &Setup, k: usize) -> Vec<f64> {
    let sc: Vec<Vec<f64>> = s.pool.iter().map(|p| scaled(&s.transform, p)).collect();
    let dbar: Vec<f64> = sc
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut d: Vec<f64> = sc
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, b)| d2(a, b).sqrt())
                .collect();
            d.sort_by(f64::total_cmp);
            d[..k].iter().sum::<f64>() / k as f64
        })
        .collect();
    let min = dbar.iter().copied().fold(f64::INFINITY, f64::min);
    dbar.iter().map(|d| (min / d).powi(2)).collect()
}

pub fn brute_best(values: &[(usize, f64)]) -> f64 {
    values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max)
}

pub fn assert_labeled(s: &Setup) {
    assert!(!s.state.feasible_indices().is_empty(), "setup always labels the first query");
}

/// Pool on a dyadic grid so power-of-two rescaling and integer shifts are
/// exact in floating point.
pub fn dyadic_pool(seed: u64, m: usize) -> (Vec<[f64; 2]>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells: Vec<(i32, i32)> = (-32..32).flat_map(|a| (-32..32).map(move |b| (a, b))).collect();
    cells.shuffle(&mut rng);
    let pts: Vec<[f64; 2]> = cells[..m].iter().map(|&(a, b)| [a as f64 / 16.0, b as f64 / 16.0]).collect();
    let labels = pts.iter().map(|p| truth(p)).collect();
    (pts, labels)
}

pub fn indices_after_transform(pts: &[[f64; 2]], labels: &[f64], scale: [f64; 2], shift: [f64; 2], strategy: Strategy) -> Vec<usize> {
    let pool: Vec<FeatureVector<f64>> = pts
        .iter()
        .map(|p| FeatureVector::new(vec![p[0] * scale[0] + shift[0], p[1] * scale[1] + shift[1]]).unwrap())
        .collect();
    let spec = ProblemSpec::pool(pool, 1, TargetKind::Regression).unwrap();
    let mut oracle = DatasetOracle::new(labels.iter().map(|&y| TargetVector::new(vec![y]).unwrap()).collect());
    let mlp_cfg = MlpConfig {
        max_epochs: 60,
        ..MlpConfig::regression()
    };
    let mut mlp = Mlp::new(mlp_cfg)
        .unwrap()
        .with_input_scaling(ScalingTransform::new(compute_bounds(&spec).unwrap()));
    let cfg = EngineConfig {
        n_init: 3,
        n_max: 10,
        strategy,
        seed: 11,
        ..EngineConfig::default()
    };
    let acq = AcquisitionConfig::new(1.0, 0.5).unwrap();
    let out = run(&cfg, &acq, &spec, &mut mlp, &mut oracle, None).unwrap();
    out.trace.iter().map(|r| r.pool_index.unwrap()).collect()
}

pub fn check_enumeration(seed: u64, m: usize, q: usize, delta: f64, omega: f64) -> Result<(), TestCaseError> {
    let s = setup(seed, m, q);
    assert_labeled(&s);
    let acq = AcquisitionConfig::new(delta, omega).unwrap();
    let samples = ScaledSamples::from_state(s.transform.clone(), &s.state).unwrap();
    let pool = ScaledPool::new(&s.pool, &s.transform).unwrap();
    let density = compute_density(&s.transform, &s.pool, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let sel = select_next_pool(&acq, &samples, &s.state, &Plane, &pool, Some(&density), 20_000, &PsoConfig::default(), &mut rng).unwrap();
    let j = sel.pool_index.unwrap();
    prop_assert!(!s.state.is_consumed(j));

    let rho = brute_density(&s, 2);
    let values: Vec<(usize, f64)> = (0..m)
        .filter(|&i| !s.state.is_consumed(i))
        .map(|i| (i, brute_acquisition(&s, &s.pool[i], delta, omega, rho[i])))
        .collect();
    let best = brute_best(&values);
    let got = values.iter().find(|v| v.0 == j).unwrap().1;
    prop_assert!(got >= best - 1e-9 * best.abs().max(1.0), "picked {got}, best {best}");
    Ok(())
}

pub fn check_variance_only(seed: u64, m: usize, q: usize) -> Result<(), TestCaseError> {
    let s = setup(seed, m, q);
    assert_labeled(&s);
    let acq = AcquisitionConfig::new(0.0, 0.0).unwrap();
    let samples = ScaledSamples::from_state(s.transform.clone(), &s.state).unwrap();
    let pool = ScaledPool::new(&s.pool, &s.transform).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let sel = select_next_pool(&acq, &samples, &s.state, &Plane, &pool, None, 20_000, &PsoConfig::default(), &mut rng).unwrap();
    let j = sel.pool_index.unwrap();
    let values: Vec<(usize, f64)> = (0..m)
        .filter(|&i| !s.state.is_consumed(i))
        .map(|i| (i, brute_acquisition(&s, &s.pool[i], 0.0, 0.0, 1.0)))
        .collect();
    let best = brute_best(&values);
    let got = values.iter().find(|v| v.0 == j).unwrap().1;
    prop_assert!(got >= best - 1e-9 * best.abs().max(1.0));
    Ok(())
}

pub fn check_greedy(seed: u64, m: usize, q: usize) -> Result<(), TestCaseError> {
    let s = setup(seed, m, q.min(m - 1));
    let samples = ScaledSamples::from_state(s.transform.clone(), &s.state).unwrap();
    let pool = ScaledPool::new(&s.pool, &s.transform).unwrap();
    let j = select_next_greedy_pool(&samples, &s.state, &pool).unwrap().pool_index.unwrap();
    let queried: Vec<Vec<f64>> = s.state.samples().iter().map(|(x, _)| scaled(&s.transform, x)).collect();
    let min_d = |i: usize| {
        let p = scaled(&s.transform, &s.pool[i]);
        queried.iter().map(|x| d2(&p, x)).fold(f64::INFINITY, f64::min)
    };
    let best = (0..m).filter(|&i| !s.state.is_consumed(i)).map(min_d).fold(f64::NEG_INFINITY, f64::max);
    prop_assert!(!s.state.is_consumed(j));
    prop_assert!(min_d(j) >= best * (1.0 - 1e-12));
    Ok(())
}

pub fn check_rescaling(seed: u64, m: usize, exps: [i32; 2], shifts: [i32; 2], which: usize) -> Result<(), TestCaseError> {
    let strategy = Strategy::ALL[which];
    let (pts, labels) = dyadic_pool(seed, m);
    let base = indices_after_transform(&pts, &labels, [1.0, 1.0], [0.0, 0.0], strategy);
    let scale = [2f64.powi(exps[0]), 2f64.powi(exps[1])];
    let shift = [shifts[0] as f64, shifts[1] as f64];
    let moved = indices_after_transform(&pts, &labels, scale, shift, strategy);
    prop_assert_eq!(base.len(), 10);
    prop_assert_eq!(base, moved);
    Ok(())
}
