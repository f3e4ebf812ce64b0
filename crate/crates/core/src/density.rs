//! Representativeness of pool points: the normalized inverse volume of the
//! sphere whose radius is the mean distance to the nearest neighbours.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{sq_dist, FeatureVector, ScalingTransform};

#[derive(Clone, Debug, PartialEq)]
pub struct DensityTable<T> {
    rho: Vec<T>,
    k_nn: usize,
}

impl<T: Scalar> DensityTable<T> {
    pub fn values(&self) -> &[T] {
        &self.rho
    }

    pub fn get(&self, index: usize) -> T {
        self.rho[index]
    }

    pub fn k_nn(&self) -> usize {
        self.k_nn
    }
}

/// Mean scaled distance from each point to its `k_nn` nearest neighbours.
pub(crate) fn mean_neighbor_distances<T: Scalar, V: AsRef<[T]>>(scaled: &[V], k_nn: usize) -> Result<Vec<T>> {
    let m = scaled.len();
    let mut dists = Vec::with_capacity(m.saturating_sub(1));
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        dists.clear();
        let xi = scaled[i].as_ref();
        dists.extend(
            (0..m)
                .filter(|&j| j != i)
                .map(|j| sq_dist(xi, scaled[j].as_ref())),
        );
        dists.select_nth_unstable_by(k_nn - 1, |a, b| a.partial_cmp(b).expect("finite distances"));
        let nearest = &dists[..k_nn];
        if nearest.iter().any(|&d| d == T::zero()) {
            return Err(Error::DuplicatePoint(i));
        }
        let total: T = nearest.iter().map(|d| d.sqrt()).sum();
        out.push(total / T::from_usize_lossy(k_nn));
    }
    Ok(out)
}

/// Density of every pool point in scaled space, normalized so the densest
/// point has `rho = 1`.
///
/// Evaluated in log space because `d^n` under- or overflows for moderate
/// feature dimensions.
pub fn compute_density<T: Scalar>(
    t: &ScalingTransform<T>,
    pool: &[FeatureVector<T>],
    k_nn: usize,
) -> Result<DensityTable<T>> {
    if k_nn == 0 {
        return Err(Error::config("k_nn must be positive"));
    }
    if pool.len() <= k_nn {
        return Err(Error::config(format!(
            "density needs more than {k_nn} pool points, got {}",
            pool.len()
        )));
    }
    let scaled = pool
        .iter()
        .map(|p| t.scale_slice(p))
        .collect::<Result<Vec<_>>>()?;
    let d = mean_neighbor_distances(&scaled, k_nn)?;
    let n = T::from_usize_lossy(t.dim());
    let log_min = d
        .iter()
        .copied()
        .fold(T::infinity(), T::min)
        .ln();
    let rho = d.iter().map(|&dk| (n * (log_min - dk.ln())).exp()).collect();
    Ok(DensityTable { rho, k_nn })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Bounds;
    use proptest::prelude::*;

    fn pool_1d(xs: &[f64]) -> Vec<FeatureVector<f64>> {
        xs.iter().map(|&x| FeatureVector::new(vec![x]).unwrap()).collect()
    }

    #[test]
    fn brute_force_example() {
        let pool = pool_1d(&[0.0, 1.0, 2.0, 4.0]);
        // identity scaling keeps the brute-force distances readable
        let t = ScalingTransform::new(Bounds::new(vec![-1.0], vec![1.0]).unwrap());
        let table = compute_density(&t, &pool, 1).unwrap();
        let expect = [1.0, 1.0, 1.0, 0.5];
        for (r, e) in table.values().iter().zip(expect) {
            assert!((r - e).abs() < 1e-12, "{r} vs {e}");
        }
    }

    #[test]
    fn equidistant_points_have_unit_density() {
        let s = 3f64.sqrt() / 2.0;
        let pool: Vec<_> = [[0.0, 0.0], [1.0, 0.0], [0.5, s]]
            .iter()
            .map(|p| FeatureVector::new(p.to_vec()).unwrap())
            .collect();
        let t = ScalingTransform::new(Bounds::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap());
        let table = compute_density(&t, &pool, 2).unwrap();
        assert!(table.values().iter().all(|&r| (r - 1.0).abs() < 1e-12));
    }

    #[test]
    fn too_small_pool_and_duplicates_are_errors() {
        let t = ScalingTransform::new(Bounds::new(vec![0.0], vec![4.0]).unwrap());
        assert!(compute_density(&t, &pool_1d(&[0.0, 1.0]), 2).is_err());
        assert!(matches!(
            compute_density(&t, &pool_1d(&[0.0, 1.0, 1.0, 4.0]), 1),
            Err(Error::DuplicatePoint(1))
        ));
    }

    proptest! {
        #[test]
        fn density_normalized_and_matches_direct_power(
            raw in proptest::collection::vec(proptest::collection::vec(-10.0..10.0f64, 3), 5..40),
            k_nn in 1usize..4,
        ) {
            let (pool, _) = crate::space::dedup_pool(raw.into_iter().map(|p| FeatureVector::new(p).unwrap()).collect()).unwrap();
            prop_assume!(pool.len() > k_nn);
            let t = ScalingTransform::new(Bounds::enclosing(&pool).unwrap());
            let table = compute_density(&t, &pool, k_nn).unwrap();
            let rho = table.values();
            prop_assert!(rho.iter().all(|&r| r > 0.0 && r <= 1.0));
            let max = rho.iter().copied().fold(0.0, f64::max);
            prop_assert_eq!(max, 1.0);

            let scaled: Vec<Vec<f64>> = pool.iter().map(|p| t.scale_slice(p).unwrap()).collect();
            let d = mean_neighbor_distances(&scaled, k_nn).unwrap();
            let dmin = d.iter().copied().fold(f64::INFINITY, f64::min);
            for (r, dk) in rho.iter().zip(&d) {
                prop_assert!((r - (dmin / dk).powi(3)).abs() < 1e-9);
            }

            // permuting the pool permutes the densities
            let mut rev = pool.clone();
            rev.reverse();
            let table_rev = compute_density(&t, &rev, k_nn).unwrap();
            for (i, r) in rho.iter().enumerate() {
                prop_assert!((r - table_rev.get(pool.len() - 1 - i)).abs() < 1e-12);
            }
        }
    }
}
