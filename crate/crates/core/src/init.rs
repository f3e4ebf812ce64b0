//! Initial designs chosen before any predictor exists: Latin hypercube
//! sampling for populations and K-means seeding for pools.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::data::Oracle;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::space::{count_distinct, satisfies, sq_dist, Bounds, FeatureVector, KnownConstraint, QueryResult, ScalingTransform};

const MAX_LLOYD_ITERATIONS: usize = 300;
const MAX_CONSECUTIVE_REJECTIONS: usize = 1_000_000;

/// One oracle call made during initialization.
#[derive(Clone, Debug, PartialEq)]
pub struct InitQuery<T> {
    pub x: FeatureVector<T>,
    pub result: QueryResult<T>,
    pub pool_index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitResult<T> {
    pub queried: Vec<InitQuery<T>>,
    /// Queries spent, feasible and infeasible.
    pub n_init_total: usize,
    pub success: bool,
}

impl<T> InitResult<T> {
    pub fn feasible_count(&self) -> usize {
        self.queried.iter().filter(|q| q.result.is_feasible()).count()
    }
}

fn check_budget(n_i: usize, n_max: usize) -> Result<()> {
    if n_i == 0 {
        return Err(Error::config("number of initial samples must be positive"));
    }
    if n_i > n_max {
        return Err(Error::config(format!("initial samples ({n_i}) exceed the budget ({n_max})")));
    }
    Ok(())
}

/// Latin hypercube design: in every dimension each of the `count` equal-width
/// strata holds exactly one point.
pub fn lhs_sample<T: Scalar, R: Rng + ?Sized>(bounds: &Bounds<T>, count: usize, rng: &mut R) -> Vec<FeatureVector<T>> {
    let n = bounds.dim();
    let mut coords = vec![vec![T::zero(); n]; count];
    let mut strata: Vec<usize> = (0..count).collect();
    for (i, &lower) in bounds.lower().iter().enumerate().take(n) {
        strata.shuffle(rng);
        let lo = lower.as_f64();
        let w = bounds.width(i).as_f64();
        for (p, &s) in strata.iter().enumerate() {
            let u: f64 = rng.random();
            coords[p][i] = T::lit(lo + w * (s as f64 + u) / count as f64);
        }
    }
    coords.into_iter().map(FeatureVector::from_finite).collect()
}

/// Draws LHS rounds of `n_i` points until `n_i` labeled samples are collected
/// or `n_max` queries are spent. Points violating the known constraint are
/// skipped without querying.
pub fn lhs_init<T, O, R>(
    bounds: &Bounds<T>,
    known_constraint: Option<&KnownConstraint<T>>,
    oracle: &mut O,
    n_i: usize,
    n_max: usize,
    rng: &mut R,
) -> Result<InitResult<T>>
where
    T: Scalar,
    O: Oracle<T> + ?Sized,
    R: Rng + ?Sized,
{
    check_budget(n_i, n_max)?;
    let mut queried = Vec::new();
    let mut feasible = 0;
    let mut rejected_in_a_row = 0;
    while feasible < n_i && queried.len() < n_max {
        for x in lhs_sample(bounds, n_i, rng) {
            if feasible == n_i || queried.len() == n_max {
                break;
            }
            if !satisfies(known_constraint, &x) {
                rejected_in_a_row += 1;
                if rejected_in_a_row >= MAX_CONSECUTIVE_REJECTIONS {
                    return Err(Error::NoFeasiblePoint);
                }
                continue;
            }
            rejected_in_a_row = 0;
            let result = oracle.query(&x, None)?;
            if result.is_feasible() {
                feasible += 1;
            }
            queried.push(InitQuery {
                x,
                result,
                pool_index: None,
            });
        }
    }
    Ok(InitResult {
        n_init_total: queried.len(),
        success: feasible == n_i,
        queried,
    })
}

fn nearest<T: Scalar>(x: &[T], centers: &[Vec<T>]) -> (usize, T) {
    let mut best = (0, sq_dist(x, &centers[0]));
    for (c, center) in centers.iter().enumerate().skip(1) {
        let d = sq_dist(x, center);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// Lloyd iterations from k-means++ seeding. Stops at an assignment fixpoint
/// or after 300 iterations. A cluster left empty is moved to the point
/// farthest from its current centroid.
pub fn kmeans<T, V, R>(points: &[V], k: usize, rng: &mut R) -> Result<Vec<Vec<T>>>
where
    T: Scalar,
    V: AsRef<[T]>,
    R: Rng + ?Sized,
{
    if k == 0 {
        return Err(Error::config("K must be positive"));
    }
    let distinct = count_distinct(points);
    if k > distinct {
        return Err(Error::config(format!("K = {k} exceeds the {distinct} distinct points")));
    }
    let pts: Vec<&[T]> = points.iter().map(AsRef::as_ref).collect();
    let n = pts[0].len();

    let mut centers: Vec<Vec<T>> = vec![pts[rng.random_range(0..pts.len())].to_vec()];
    let mut d2: Vec<f64> = pts.iter().map(|p| sq_dist(p, &centers[0]).as_f64()).collect();
    while centers.len() < k {
        let next = match WeightedIndex::new(&d2) {
            Ok(w) => w.sample(rng),
            // all remaining mass sits on exact duplicates of chosen centers
            Err(_) => d2.iter().position(|&d| d > 0.0).ok_or(Error::config("degenerate K-means seeding"))?,
        };
        centers.push(pts[next].to_vec());
        for (i, p) in pts.iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(p, &centers[centers.len() - 1]).as_f64());
        }
    }

    let mut assign = vec![usize::MAX; pts.len()];
    for _ in 0..MAX_LLOYD_ITERATIONS {
        let mut changed = false;
        let mut dist = vec![T::zero(); pts.len()];
        for (i, p) in pts.iter().enumerate() {
            let (c, d) = nearest(p, &centers);
            dist[i] = d;
            if assign[i] != c {
                assign[i] = c;
                changed = true;
            }
        }
        let mut sums = vec![vec![T::zero(); n]; k];
        let mut counts = vec![0usize; k];
        for (i, p) in pts.iter().enumerate() {
            counts[assign[i]] += 1;
            for (s, &v) in sums[assign[i]].iter_mut().zip(p.iter()) {
                *s = *s + v;
            }
        }
        let mut reseeded = false;
        for c in 0..k {
            if counts[c] == 0 {
                let mut far = 0;
                for i in 1..pts.len() {
                    if dist[i] > dist[far] {
                        far = i;
                    }
                }
                centers[c] = pts[far].to_vec();
                dist[far] = T::zero();
                reseeded = true;
            } else {
                let cnt = T::from_usize_lossy(counts[c]);
                centers[c] = sums[c].iter().map(|&s| s / cnt).collect();
            }
        }
        if !changed && !reseeded {
            break;
        }
    }
    Ok(centers)
}

/// Seeds a pool: K-means with `K = n_i` on the scaled pool, then the nearest
/// unconsumed point to each centroid is queried. Infeasible picks are
/// replaced by re-running K-means with `K` equal to the shortfall on the
/// unconsumed points.
pub fn pool_init<T, O, R>(
    pool: &[FeatureVector<T>],
    oracle: &mut O,
    n_i: usize,
    n_max: usize,
    rng: &mut R,
) -> Result<InitResult<T>>
where
    T: Scalar,
    O: Oracle<T> + ?Sized,
    R: Rng + ?Sized,
{
    check_budget(n_i, n_max)?;
    if n_i > pool.len() {
        return Err(Error::config(format!("initial samples ({n_i}) exceed the pool size ({})", pool.len())));
    }
    let transform = ScalingTransform::new(Bounds::enclosing(pool)?);
    let scaled: Vec<Vec<T>> = pool.iter().map(|x| transform.scale_slice(x)).collect::<Result<_>>()?;
    let mut consumed = vec![false; pool.len()];
    let mut queried = Vec::new();
    let mut feasible = 0;

    while feasible < n_i && queried.len() < n_max {
        let free: Vec<usize> = (0..pool.len()).filter(|&j| !consumed[j]).collect();
        if free.is_empty() {
            break;
        }
        let free_points: Vec<&[T]> = free.iter().map(|&j| scaled[j].as_slice()).collect();
        let k = (n_i - feasible).min(count_distinct(&free_points));
        let centers = kmeans(&free_points, k, rng)?;
        for center in &centers {
            if queried.len() == n_max {
                break;
            }
            let mut pick: Option<(usize, T)> = None;
            for &j in &free {
                if consumed[j] {
                    continue;
                }
                let d = sq_dist(&scaled[j], center);
                if pick.is_none_or(|(_, best)| d < best) {
                    pick = Some((j, d));
                }
            }
            let Some((j, _)) = pick else { break };
            consumed[j] = true;
            let result = oracle.query(&pool[j], Some(j))?;
            if result.is_feasible() {
                feasible += 1;
            }
            queried.push(InitQuery {
                x: pool[j].clone(),
                result,
                pool_index: Some(j),
            });
        }
    }
    Ok(InitResult {
        n_init_total: queried.len(),
        success: feasible == n_i,
        queried,
    })
}
