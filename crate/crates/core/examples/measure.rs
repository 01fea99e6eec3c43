// Scratch measurement harness for pinning acceptance seeds. Not part of the
// deliverable surface; removed before finalization.
use std::time::Instant;
use tailreg::estimators::Method;
use tailreg::model::CoefVector;
use tailreg::montecarlo::{run_experiment, McConfig, ThresholdMode};
use tailreg::samplers::{generate_dataset, CovariateLaw, DgpSpec, Family, SeedSpec};
use tailreg::threshold::select_threshold;

fn dgp(family: Family, beta: &[f64]) -> DgpSpec {
    DgpSpec {
        family,
        beta: CoefVector::new(beta.to_vec()).unwrap(),
        covariate_laws: vec![CovariateLaw::Uniform01, CovariateLaw::StdNormal],
        threshold: 1.0,
    }
}

fn a1(seed: u64) {
    let config = McConfig {
        dgp: dgp(Family::Pareto, &[0.1, 1.0, 1.0]),
        n: 5000,
        reps: 1000,
        master_seed: seed,
        estimators: vec![Method::Ols, Method::Mle],
        fit_columns: vec![0, 1, 2],
        threshold_mode: ThresholdMode::Fixed { w: 1.0 },
    };
    let t = Instant::now();
    let r = run_experiment(&config).unwrap();
    let ols = r.summary(Method::Ols).unwrap();
    let mle = r.summary(Method::Mle).unwrap();
    println!(
        "A1 seed={seed} ({:?}): ols_mean={:.4?} mle_mean={:.4?} ols_rmse={:.4?} ratio={:.4?}",
        t.elapsed(),
        ols.mean,
        mle.mean,
        ols.rmse,
        r.rmse_ratio.as_ref().unwrap()
    );
}

fn a2(seed: u64, beta3: f64) {
    let config = McConfig {
        dgp: dgp(Family::Pareto, &[0.1, 1.0, beta3]),
        n: 5000,
        reps: 1000,
        master_seed: seed,
        estimators: vec![Method::Ols, Method::Mle],
        fit_columns: vec![0, 1],
        threshold_mode: ThresholdMode::Fixed { w: 1.0 },
    };
    let r = run_experiment(&config).unwrap();
    let ols = r.summary(Method::Ols).unwrap();
    let mle = r.summary(Method::Mle).unwrap();
    println!(
        "A2 seed={seed} beta3={beta3}: mle_mean_b1={:.4} ols_mean_b1={:.4} ols_mean_b2={:.4} slope_ratio={:.4}",
        mle.mean[0],
        ols.mean[0],
        ols.mean[1],
        r.rmse_ratio.as_ref().unwrap()[1]
    );
}

fn a3(seed: u64, beta: &[f64], n: usize, reps: usize) {
    let config = McConfig {
        dgp: dgp(Family::Burr { rho: -1.0 }, beta),
        n,
        reps,
        master_seed: seed,
        estimators: vec![Method::Ols, Method::Mle],
        fit_columns: vec![0, 1, 2],
        threshold_mode: ThresholdMode::Scan,
    };
    let t = Instant::now();
    let r = run_experiment(&config).unwrap();
    let ols = r.summary(Method::Ols).unwrap();
    let mle = r.summary(Method::Mle).unwrap();
    println!(
        "A3 seed={seed} beta={beta:?} n={n} ({:?}): ols_rmse={:.4?} mle_rmse={:.4?} ratio={:.4?} k*_ols={:.3}/{:.3} k*_mle={:.3}/{:.3} failed={}",
        t.elapsed(),
        ols.rmse,
        mle.rmse,
        r.rmse_ratio.as_ref().unwrap(),
        ols.kappa_mean.unwrap(),
        ols.kappa_dispersion.unwrap(),
        mle.kappa_mean.unwrap(),
        mle.kappa_dispersion.unwrap(),
        r.failed_reps,
    );
}

fn a9(master: u64) {
    let t = Instant::now();
    let pareto = dgp(Family::Pareto, &[0.1, 1.0, 1.0]);
    let burr = dgp(Family::Burr { rho: -1.0 }, &[0.1, 1.0, 1.0]);
    let mut flat_ratios = Vec::new();
    let mut interior = 0;
    for s in 0..50u64 {
        let d = generate_dataset(&pareto, 5000, SeedSpec::new(master, s)).unwrap();
        let scan = select_threshold(&d.responses, &d.covariates, Method::Ols, None).unwrap();
        let max = scan.discrepancy.iter().cloned().fold(f64::MIN, f64::max);
        let min = scan.discrepancy.iter().cloned().fold(f64::MAX, f64::min);
        flat_ratios.push(max / min);

        let d = generate_dataset(&burr, 5000, SeedSpec::new(master + 1, s)).unwrap();
        let scan = select_threshold(&d.responses, &d.covariates, Method::Ols, None).unwrap();
        let grid_max = scan.kappa_grid.last().copied().unwrap();
        if scan.kappa_star < grid_max {
            interior += 1;
        }
    }
    flat_ratios.sort_by(f64::total_cmp);
    println!(
        "A9 seed={master} ({:?}): pareto flat max/min median={:.2} burr interior={interior}/50",
        t.elapsed(),
        flat_ratios[25]
    );
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(String::as_str).unwrap_or("all");
    let seed: u64 = args.get(2).map(|s| s.parse().unwrap()).unwrap_or(42);
    if which == "a1" || which == "all" {
        a1(seed);
    }
    if which == "a2" || which == "all" {
        a2(seed.wrapping_add(1), 1.0);
        a2(seed.wrapping_add(2), 0.64);
    }
    if which == "a3" || which == "all" {
        a3(seed.wrapping_add(3), &[0.1, 1.0, 1.0], 500, 500);
        a3(seed.wrapping_add(4), &[0.1, 1.0, 1.0], 5000, 500);
        a3(seed.wrapping_add(5), &[0.1, 1.0, 0.64], 500, 500);
        a3(seed.wrapping_add(6), &[0.1, 1.0, 0.64], 5000, 500);
    }
    if which == "a9" || which == "all" {
        a9(seed.wrapping_add(7));
    }
}
