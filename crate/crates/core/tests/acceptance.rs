mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use ideal::bench::{run_benchmark, ExperimentConfig, ExperimentReport, ProblemConfig, StrategyReport};
use ideal::data::{ExternalOracle, Oracle};
use ideal::density::compute_density;
use ideal::engine::Strategy;
use ideal::idw::{Idw, WeightKind};
use ideal::init::lhs_sample;
use ideal::predictor::{Activation, Network, OutputActivation};
use ideal::space::{Bounds, FeatureVector, QueryResult, ScalingTransform};
use proptest::prelude::{any, prop_assert, prop_assert_eq, Just, Strategy as _};
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RUNS: usize = 50;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn quartic(strategies: Vec<Strategy>, delta: f64, noise: f64) -> ExperimentConfig {
    ExperimentConfig {
        problem: ProblemConfig::QuarticSine { pool_size: 1000 },
        strategies,
        delta,
        omega: 0.0,
        n_init: 4,
        n_max: 30,
        runs: RUNS,
        noise,
        ..ExperimentConfig::default()
    }
}

fn circle(strategies: Vec<Strategy>, constrained: bool) -> ExperimentConfig {
    ExperimentConfig {
        problem: ProblemConfig::Circle {
            pool_size: 1000,
            constrained,
        },
        strategies,
        delta: 5.0,
        omega: 0.0,
        n_init: 10,
        n_max: 100,
        runs: RUNS,
        ..ExperimentConfig::default()
    }
}

fn bench(cfg: &ExperimentConfig) -> ExperimentReport {
    run_benchmark(cfg).expect("benchmark runs")
}

fn final_of(r: &ExperimentReport, s: Strategy) -> f64 {
    r.strategy(s).and_then(|s| s.median_final).expect("median final")
}

fn ordering(r: &ExperimentReport) -> (bool, [f64; 3]) {
    let v = [
        final_of(r, Strategy::Ideal),
        final_of(r, Strategy::Greedy),
        final_of(r, Strategy::Random),
    ];
    (v[0] < v[1] && v[1] < v[2], v)
}

fn strategy_ordering(r: &ExperimentReport) -> Verdict {
    let (ordered, v) = ordering(r);
    let ratio = v[0] / v[2];
    verdict(
        ordered && ratio <= 0.65,
        format!("median RMSE ideal {:.4}, greedy {:.4}, random {:.4}, ideal/random {ratio:.3}", v[0], v[1], v[2]),
    )
}

fn delta_insensitivity(at_zero: f64) -> Verdict {
    let mut finals = vec![at_zero];
    for delta in [1.0, 5.0, 10.0] {
        finals.push(final_of(&bench(&quartic(vec![Strategy::Ideal], delta, 0.0)), Strategy::Ideal));
    }
    let max = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = finals.iter().copied().fold(f64::INFINITY, f64::min);
    verdict(
        max / min <= 1.5,
        format!("median RMSE over delta 0,1,5,10: {finals:.4?}, max/min {:.3}", max / min),
    )
}

fn noise_robustness() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for noise in [1.0, 2.0] {
        let (ordered, v) = ordering(&bench(&quartic(Strategy::ALL.to_vec(), 0.0, noise)));
        pass &= ordered;
        parts.push(format!("noise {noise}: {v:.4?}"));
    }
    verdict(pass, parts.join("; "))
}

fn classification() -> Verdict {
    let r = bench(&circle(vec![Strategy::Ideal, Strategy::Random], false));
    let ideal = r.strategy(Strategy::Ideal).unwrap();
    let (init, fin) = (ideal.median_initial.unwrap(), ideal.median_final.unwrap());
    let random = final_of(&r, Strategy::Random);
    verdict(
        fin >= init + 0.05 && fin > random,
        format!("ideal accuracy {init:.4} -> {fin:.4}, random final {random:.4}"),
    )
}

fn constraint_avoidance() -> Verdict {
    let r = bench(&circle(vec![Strategy::Ideal, Strategy::Random], true));
    let frac = |s| {
        r.strategy(s)
            .and_then(|s: &StrategyReport| s.median_infeasible_fraction_after_init)
            .unwrap()
    };
    let (ideal, random) = (frac(Strategy::Ideal), frac(Strategy::Random));
    verdict(
        ideal < random,
        format!("median infeasible fraction after init: ideal {ideal:.4}, random {random:.4}"),
    )
}

fn property(name: &str, cases: u32, check: impl Fn(&mut TestRunner) -> Result<(), String>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    check(&mut runner).map_err(|e| format!("{name}: {e}"))
}

fn run<S: proptest::strategy::Strategy>(
    runner: &mut TestRunner,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn sample_set() -> impl proptest::strategy::Strategy<Value = (Vec<Vec<f64>>, Vec<f64>, Vec<f64>)> {
    (1usize..12, 1usize..4).prop_flat_map(|(k, n)| {
        (
            proptest::collection::vec(proptest::collection::vec(-1.0..1.0f64, n), k),
            proptest::collection::vec(-5.0..5.0f64, k),
            proptest::collection::vec(-1.5..1.5f64, n),
        )
    })
}

fn invariants() -> Verdict {
    let idw = Idw::<f64>::default();
    let checks: Vec<Result<(), String>> = vec![
        property("z in [0,1], zero at samples", 512, |r| {
            run(r, sample_set(), |(xs, _, x)| {
                let z = idw.distance(&x, &xs);
                prop_assert!((0.0..=1.0).contains(&z));
                for s in &xs {
                    prop_assert_eq!(idw.distance(s, &xs), 0.0);
                }
                Ok(())
            })
        }),
        property("coefficients sum to one", 512, |r| {
            run(r, (sample_set(), any::<bool>()), |((xs, _, x), basic)| {
                let kind = if basic { WeightKind::Basic } else { WeightKind::Exponential };
                let v = Idw::new(kind, Default::default()).coefficients(&x, &xs);
                prop_assert!(v.iter().all(|c| (0.0..=1.0).contains(c)));
                prop_assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                Ok(())
            })
        }),
        property("s2 nonnegative, zero at interpolated samples", 512, |r| {
            run(r, sample_set(), |(xs, ys, x)| {
                // every third sample infeasible
                let targets: Vec<Option<Vec<f64>>> =
                    ys.iter().enumerate().map(|(k, &y)| (k % 3 != 2).then(|| vec![y])).collect();
                let mut scratch = Vec::new();
                let s2 = idw.variance(&x, &xs, &targets, &[0.3], &mut scratch);
                prop_assert!(s2[0] >= 0.0);
                for s in &xs {
                    let first = xs.iter().position(|p| p == s).unwrap();
                    if let Some(y) = &targets[first] {
                        prop_assert_eq!(idw.variance(s, &xs, &targets, y, &mut scratch)[0], 0.0);
                    } else {
                        prop_assert_eq!(idw.variance(s, &xs, &targets, &[0.3], &mut scratch)[0], 0.0);
                    }
                }
                Ok(())
            })
        }),
        property("density in (0,1] with max 1", 128, |r| {
            let pool = (3usize..60, 1usize..4)
                .prop_flat_map(|(m, n)| (proptest::collection::vec(proptest::collection::vec(-3.0..3.0f64, n), m), Just(n)));
            run(r, pool, |(pts, n)| {
                let pool: Vec<FeatureVector<f64>> = pts.into_iter().map(|p| FeatureVector::new(p).unwrap()).collect();
                let t = ScalingTransform::new(Bounds::enclosing(&pool).unwrap());
                let Ok(d) = compute_density(&t, &pool, n.min(pool.len() - 1)) else {
                    return Ok(());
                };
                prop_assert!(d.values().iter().all(|&p| p > 0.0 && p <= 1.0));
                prop_assert_eq!(d.values().iter().copied().fold(0.0, f64::max), 1.0);
                Ok(())
            })
        }),
        property("scaling leaves selected indices unchanged", 16, |r| {
            let s = (0u64..1000, 20usize..100, -6i32..6, -6i32..6, -50i32..50, -50i32..50, 0usize..3);
            run(r, s, |(seed, m, e0, e1, s0, s1, which)| common::check_rescaling(seed, m, [e0, e1], [s0, s1], which))
        }),
        property("enumeration equals brute force", 32, |r| {
            let s = (0u64..1_000_000, 12usize..1000, 2usize..10, 0.0..8.0f64, 0.0..2.0f64);
            run(r, s, |(seed, m, q, delta, omega)| common::check_enumeration(seed, m, q, delta, omega))
        }),
        property("variance-only selection maximizes s2", 32, |r| {
            run(r, (0u64..1_000_000, 12usize..400, 2usize..10), |(seed, m, q)| common::check_variance_only(seed, m, q))
        }),
        property("greedy equals brute-force max-min", 32, |r| {
            run(r, (0u64..1_000_000, 5usize..1000, 1usize..10), |(seed, m, q)| common::check_greedy(seed, m, q))
        }),
        property("network gradients match finite differences", 24, |r| {
            run(r, (any::<u64>(), any::<bool>()), |(seed, logistic_out)| gradient_check(seed, logistic_out))
        }),
        property("LHS marginal stratification", 256, |r| {
            run(r, (any::<u64>(), 1usize..40, 1usize..5), |(seed, count, dim)| {
                let bounds = Bounds::new(vec![-2.0; dim], vec![3.0; dim]).unwrap();
                let pts = lhs_sample(&bounds, count, &mut ChaCha8Rng::seed_from_u64(seed));
                for i in 0..dim {
                    let mut hits = vec![0usize; count];
                    for p in &pts {
                        let bin = (((p[i] + 2.0) / 5.0) * count as f64).floor() as usize;
                        hits[bin.min(count - 1)] += 1;
                    }
                    prop_assert!(hits.iter().all(|&h| h == 1));
                }
                Ok(())
            })
        }),
    ];
    let failures: Vec<String> = checks.into_iter().filter_map(Result::err).collect();
    verdict(
        failures.is_empty(),
        if failures.is_empty() {
            "10 property groups passed".to_string()
        } else {
            failures.join(" | ")
        },
    )
}

fn gradient_check(seed: u64, logistic_out: bool) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let output = if logistic_out { OutputActivation::Logistic } else { OutputActivation::Linear };
    let net = Network::<f64>::random(vec![3, 5, 4, 2], Activation::Logistic, output, &mut rng);
    let xs: Vec<Vec<f64>> = (0..8).map(|_| (0..3).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let ys: Vec<Vec<f64>> = (0..8).map(|_| (0..2).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
    let l2 = [0.05, 0.2, 0.01];
    let mut grad = vec![0.0; net.params().len()];
    net.loss_and_gradient(net.params(), &xs, &ys, &l2, &mut grad);
    let mut scratch = grad.clone();
    let h = 1e-6;
    for k in 0..grad.len() {
        let mut p = net.params().to_vec();
        p[k] += h;
        let up = net.loss_and_gradient(&p, &xs, &ys, &l2, &mut scratch);
        p[k] -= 2.0 * h;
        let down = net.loss_and_gradient(&p, &xs, &ys, &l2, &mut scratch);
        let fd = (up - down) / (2.0 * h);
        let rel = (fd - grad[k]).abs() / fd.abs().max(grad[k].abs()).max(1e-6);
        prop_assert!(rel < 1e-4, "parameter {k}: analytic {}, numeric {fd}", grad[k]);
    }
    Ok(())
}

fn determinism() -> Verdict {
    let mut cfg = quartic(Strategy::ALL.to_vec(), 1.0, 0.5);
    cfg.runs = 6;
    cfg.omega = 0.5;
    let a = bench(&cfg).to_json().unwrap();
    let b = bench(&cfg).to_json().unwrap();
    let mut cc = circle(Strategy::ALL.to_vec(), true);
    cc.runs = 3;
    cc.n_max = 30;
    let c = bench(&cc).to_json().unwrap();
    let d = bench(&cc).to_json().unwrap();
    verdict(
        a == b && c == d,
        format!("quartic report {} bytes, constrained circle report {} bytes", a.len(), c.len()),
    )
}

fn loopback() -> Verdict {
    let mut oracle = ExternalOracle::spawn(env!("CARGO_BIN_EXE_ideal-echo-oracle"), &[], Duration::from_secs(10))
        .expect("echo child starts")
        .expect_targets(3);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut exact, mut errors) = (0, 0);
    for _ in 0..100 {
        let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1e6..1e6) * rng.random::<f64>()).collect();
        match oracle.query(&FeatureVector::new(x.clone()).unwrap(), None) {
            Ok(QueryResult::Labeled(y)) if y.iter().zip(&x).all(|(a, b)| a.to_bits() == b.to_bits()) => exact += 1,
            Ok(_) => {}
            Err(_) => errors += 1,
        }
    }
    verdict(exact == 100 && errors == 0, format!("{exact}/100 exact round trips, {errors} protocol errors"))
}

fn iris() -> Verdict {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let schema = ideal::data::CsvSchema::from_json_file(data.join("iris_schema.json")).unwrap();
    let cfg = ExperimentConfig {
        problem: ProblemConfig::Dataset {
            csv: data.join("iris.csv"),
            schema,
        },
        strategies: vec![Strategy::Ideal],
        delta: 5.0,
        omega: 0.5,
        n_init: 20,
        n_max: 60,
        runs: 20,
        ..ExperimentConfig::default()
    };
    let r = bench(&cfg);
    let curve: Vec<f64> = r.strategies[0].median_curve.iter().map(|p| p.value).collect();
    let improving = curve.windows(2).all(|w| w[1] >= w[0]) && curve.last() > curve.first();
    verdict(
        r.n_features == 4 && r.n_targets == 3 && improving,
        format!(
            "n={}, m={}, median accuracy {:.4} -> {:.4} over {} retrains",
            r.n_features,
            r.n_targets,
            curve.first().unwrap_or(&f64::NAN),
            curve.last().unwrap_or(&f64::NAN),
            curve.len()
        ),
    )
}

fn main() {
    let mut results: Vec<(&str, Verdict, Duration)> = Vec::new();
    let mut timed = |name: &'static str, f: &mut dyn FnMut() -> Verdict| {
        let start = Instant::now();
        let v = f();
        let elapsed = start.elapsed();
        println!(
            "{} criterion {name}: {} ({:.1}s)",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64()
        );
        results.push((name, v, elapsed));
    };

    let mut c1 = None;
    timed("1 strategy ordering", &mut || {
        let r = bench(&quartic(Strategy::ALL.to_vec(), 0.0, 0.0));
        let v = strategy_ordering(&r);
        c1 = Some(final_of(&r, Strategy::Ideal));
        v
    });
    timed("2 delta insensitivity", &mut || delta_insensitivity(c1.expect("criterion 1 ran")));
    timed("3 noise robustness", &mut noise_robustness);
    timed("4 classification", &mut classification);
    timed("5 unknown-constraint avoidance", &mut constraint_avoidance);
    timed("6 invariant suite", &mut invariants);
    timed("7 determinism", &mut determinism);
    timed("8 external oracle loopback", &mut loopback);
    timed("iris dataset ingestion", &mut iris);

    let failed: Vec<&str> = results.iter().filter(|r| !r.1.pass).map(|r| r.0).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", results.len());
    } else {
        println!("acceptance: {} failed: {}", failed.len(), failed.join(", "));
        std::process::exit(1);
    }
}
