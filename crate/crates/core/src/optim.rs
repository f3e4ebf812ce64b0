//! Global-best particle swarm maximization over a box.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{Bounds, FeatureVector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PsoConfig {
    pub swarm_size: usize,
    pub iterations: usize,
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Maximum speed per component, as a fraction of the box width.
    pub velocity_clamp: f64,
}

impl Default for PsoConfig {
    fn default() -> Self {
        Self {
            swarm_size: 30,
            iterations: 200,
            inertia: 0.729,
            cognitive: 1.494,
            social: 1.494,
            velocity_clamp: 0.5,
        }
    }
}

impl PsoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.swarm_size < 2 {
            return Err(Error::config("swarm size must be at least 2"));
        }
        let coeffs = [self.inertia, self.cognitive, self.social, self.velocity_clamp];
        if coeffs.iter().any(|c| !(*c > 0.0) || !c.is_finite()) {
            return Err(Error::config("PSO coefficients must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsoResult<T> {
    pub position: FeatureVector<T>,
    /// Best objective value; `-inf` when no evaluation was finite.
    pub value: T,
    /// Global best after initialization and after every iteration.
    pub best_history: Vec<T>,
}

fn sanitize<T: Scalar>(v: T) -> T {
    if v.is_finite() {
        v
    } else {
        T::neg_infinity()
    }
}

/// Maximizes `f` over `bounds`. Particles that leave the box are clamped to
/// the boundary and their velocity component is reversed. Non-finite
/// objective values count as `-inf`. Ties keep the earliest particle.
pub fn pso_maximize<T, F, R>(mut f: F, bounds: &Bounds<T>, config: &PsoConfig, rng: &mut R) -> Result<PsoResult<T>>
where
    T: Scalar,
    F: FnMut(&[T]) -> T,
    R: Rng + ?Sized,
{
    config.validate()?;
    let n = bounds.dim();
    let lo: Vec<f64> = bounds.lower().iter().map(|v| v.as_f64()).collect();
    let hi: Vec<f64> = bounds.upper().iter().map(|v| v.as_f64()).collect();
    let vmax: Vec<f64> = (0..n).map(|i| config.velocity_clamp * (hi[i] - lo[i])).collect();
    let sample = |rng: &mut R, a: f64, b: f64| if b > a { rng.random_range(a..=b) } else { a };

    let mut pos: Vec<Vec<T>> = Vec::with_capacity(config.swarm_size);
    let mut vel: Vec<Vec<f64>> = Vec::with_capacity(config.swarm_size);
    for _ in 0..config.swarm_size {
        pos.push((0..n).map(|i| T::lit(sample(rng, lo[i], hi[i]))).collect());
        vel.push((0..n).map(|i| sample(rng, -vmax[i], vmax[i])).collect());
    }
    let mut best_pos = pos.clone();
    let mut best_val: Vec<T> = pos.iter().map(|p| sanitize(f(p))).collect();
    let mut g = 0;
    for k in 1..best_val.len() {
        if best_val[k] > best_val[g] {
            g = k;
        }
    }
    let mut g_pos = best_pos[g].clone();
    let mut g_val = best_val[g];
    let mut history = Vec::with_capacity(config.iterations + 1);
    history.push(g_val);

    for _ in 0..config.iterations {
        for p in 0..config.swarm_size {
            for i in 0..n {
                let x = pos[p][i].as_f64();
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let mut v = config.inertia * vel[p][i]
                    + config.cognitive * r1 * (best_pos[p][i].as_f64() - x)
                    + config.social * r2 * (g_pos[i].as_f64() - x);
                v = v.clamp(-vmax[i], vmax[i]);
                let mut nx = x + v;
                if nx < lo[i] {
                    nx = lo[i];
                    v = -v;
                } else if nx > hi[i] {
                    nx = hi[i];
                    v = -v;
                }
                vel[p][i] = v;
                pos[p][i] = T::lit(nx);
            }
            let val = sanitize(f(&pos[p]));
            if val > best_val[p] {
                best_val[p] = val;
                best_pos[p].copy_from_slice(&pos[p]);
            }
        }
        // serial reduction in particle order keeps ties deterministic
        for p in 0..config.swarm_size {
            if best_val[p] > g_val {
                g_val = best_val[p];
                g_pos.copy_from_slice(&best_pos[p]);
            }
        }
        history.push(g_val);
    }

    Ok(PsoResult {
        position: FeatureVector::from_finite(g_pos),
        value: g_val,
        best_history: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn finds_interior_maximizer() {
        let b = Bounds::new(vec![-5.0, -5.0, -5.0], vec![5.0, 5.0, 5.0]).unwrap();
        let c = [1.2, -3.1, 0.4];
        let res = pso_maximize(
            |x: &[f64]| -x.iter().zip(&c).map(|(a, b)| (a - b).powi(2)).sum::<f64>(),
            &b,
            &PsoConfig::default(),
            &mut rng(1),
        )
        .unwrap();
        for (x, c) in res.position.iter().zip(&c) {
            assert!((x - c).abs() < 1e-3, "{x} vs {c}");
        }
    }

    #[test]
    fn constant_objective() {
        let b = Bounds::new(vec![0.0, 10.0], vec![1.0, 20.0]).unwrap();
        let res = pso_maximize(|_: &[f64]| 4.5, &b, &PsoConfig::default(), &mut rng(2)).unwrap();
        assert_eq!(res.value, 4.5);
        assert!(b.contains(&res.position));
    }

    #[test]
    fn finds_boundary_maximizer() {
        let b = Bounds::new(vec![-2.0], vec![3.0]).unwrap();
        let res = pso_maximize(|x: &[f64]| -(x[0] - 3.0).powi(2), &b, &PsoConfig::default(), &mut rng(3)).unwrap();
        assert!((res.position[0] - 3.0).abs() < 1e-3);
    }

    #[test]
    fn non_finite_values_are_never_selected() {
        let b = Bounds::new(vec![-1.0], vec![1.0]).unwrap();
        let res = pso_maximize(
            |x: &[f64]| if x[0] > 0.0 { f64::NAN } else { x[0] },
            &b,
            &PsoConfig::default(),
            &mut rng(4),
        )
        .unwrap();
        assert!(res.value.is_finite());
        assert!(res.position[0] <= 0.0);
        assert!(res.value > -1e-3);
    }

    #[test]
    fn history_is_monotone_and_run_is_reproducible() {
        let b = Bounds::new(vec![-3.0, -3.0], vec![3.0, 3.0]).unwrap();
        let f = |x: &[f64]| (3.0 * x[0]).sin() * (2.0 * x[1]).cos() - 0.1 * x[0] * x[0];
        let a = pso_maximize(f, &b, &PsoConfig::default(), &mut rng(5)).unwrap();
        let c = pso_maximize(f, &b, &PsoConfig::default(), &mut rng(5)).unwrap();
        assert_eq!(a, c);
        assert!(a.best_history.windows(2).all(|w| w[1] >= w[0]));
        assert!(b.contains(&a.position));
    }

    #[test]
    fn degenerate_component_stays_fixed() {
        let b = Bounds::new(vec![1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let res = pso_maximize(|x: &[f64]| -x[1] * x[1], &b, &PsoConfig::default(), &mut rng(6)).unwrap();
        assert_eq!(res.position[0], 1.0);
    }

    #[test]
    fn invalid_config_rejected() {
        let b = Bounds::new(vec![0.0], vec![1.0]).unwrap();
        let cfg = PsoConfig { swarm_size: 1, ..PsoConfig::default() };
        assert!(pso_maximize(|_: &[f64]| 0.0, &b, &cfg, &mut rng(0)).is_err());
    }

    #[test]
    fn single_precision() {
        let b = Bounds::new(vec![-1.0f32], vec![1.0]).unwrap();
        let res = pso_maximize(|x: &[f32]| -(x[0] - 0.25).powi(2), &b, &PsoConfig::default(), &mut rng(7)).unwrap();
        assert!((res.position[0] - 0.25).abs() < 1e-3);
    }
}
