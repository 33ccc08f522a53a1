//! Larger-instance checks against closed forms and ensemble baselines.

use ogplab_core::graph::{local_indep, GraphSample, LocalRule};
use ogplab_core::rng::derive_seed;
use ogplab_core::rounding::round_sphere;
use ogplab_core::stability::{interpolation_path_run, AmpLite, TensorAlgorithm};
use std::f64::consts::FRAC_PI_2;

use ogplab_core::tensor::{amp_lite_opt, energy, interpolate, restarted_ascent, AscentConfig, Domain, EntrywisePoly, PTensor};

fn mean_and_se(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (var / n).sqrt())
}

#[test]
fn min_label_size_matches_binomial_degree_expectation() {
    let (n, d) = (10_000usize, 20.0);
    // E[1/(D+1)] for D ~ Bin(n-1, q) is (1 - (1-q)^n) / (n q)
    let q = d / n as f64;
    let want = n as f64 * (1.0 - (1.0 - q).powi(n as i32)) / (n as f64 * q);
    let sizes: Vec<f64> = (0..5u64)
        .map(|s| {
            let g = GraphSample::sample(n, d, derive_seed(31, s)).unwrap();
            let set = local_indep(&g, LocalRule::MinLabel { radius: 1 }, s);
            assert!(g.is_independent(&set));
            set.len() as f64
        })
        .collect();
    let (mean, _) = mean_and_se(&sizes);
    assert!((mean / want - 1.0).abs() < 0.1, "{mean} vs {want}");
}

#[test]
fn amp_lite_beats_random_start() {
    // 50 seeds, T = 8, sphere-rounded objective against the random-start
    // value 0
    let (p, n) = (4, 30);
    let act = EntrywisePoly::truncated_sinh(3);
    let vals: Vec<f64> = (0..50u64)
        .map(|s| {
            let y = PTensor::sample(p, n, derive_seed(41, s)).unwrap();
            let r = amp_lite_opt(&y, 8, &act, s).unwrap();
            let x = round_sphere(r.state.values()).state().unwrap().clone();
            energy(&y, x.values()).unwrap()
        })
        .collect();
    let (mean, se) = mean_and_se(&vals);
    assert!(mean >= 10.0 * se, "{mean} +- {se}");
}

#[test]
fn amp_lite_endpoint_overlap_is_near_independent_baseline() {
    let (p, n) = (3, 200);
    let alg = AmpLite { iterations: 5, nonlinearity: EntrywisePoly::truncated_sinh(3) };
    let endpoint = |y: &PTensor, y2: &PTensor, s: u64| {
        let a = round_sphere(&alg.run(y, s).unwrap()).state().unwrap().clone();
        let b = round_sphere(&alg.run(&interpolate(y, y2, FRAC_PI_2).unwrap(), s).unwrap()).state().unwrap().clone();
        a.overlap(&b)
    };
    let pair = |s: u64| (PTensor::sample(p, n, derive_seed(51, s)).unwrap(), PTensor::sample(p, n, derive_seed(52, s)).unwrap());
    // one full path; its last overlap is the two-run endpoint
    let (y, y2) = pair(0);
    let r = interpolation_path_run(&y, &y2, &alg as &dyn TensorAlgorithm, 64, Domain::Spherical, None, 0).unwrap();
    assert_eq!(r.continuity_violations, 0);
    assert_eq!(r.steps.last().unwrap().overlap.unwrap(), endpoint(&y, &y2, 0));
    for s in 0..20u64 {
        let (y, y2) = pair(s);
        let end = endpoint(&y, &y2, s);
        assert!(end <= 0.3, "seed {s}: endpoint overlap {end}");
    }
}

#[test]
fn ground_state_estimate_concentrates() {
    let (p, n) = (3, 60);
    let cfg = AscentConfig { restarts: 3, max_iters: 300, ..AscentConfig::default() };
    let vals: Vec<f64> = (0..50u64)
        .map(|s| {
            let y = PTensor::sample(p, n, derive_seed(61, s)).unwrap();
            restarted_ascent(&y, &cfg, s).0
        })
        .collect();
    let (mean, se) = mean_and_se(&vals);
    let sd = se * (vals.len() as f64).sqrt();
    assert!(sd <= 0.1, "sample stdev {sd}");
    assert!(mean > 0.5, "{mean}");
}
