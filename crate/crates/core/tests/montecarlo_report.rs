//! Report-level oracles for the Monte Carlo engine: aggregates recomputed by
//! an independent two-pass pass over per-replication fits, the bias–variance
//! identity, and the failure-exclusion contract.

use tailreg::estimators::{mle_fit, ols_fit, CovSpec, Method};
use tailreg::model::{CoefVector, TailSample, TailSide};
use tailreg::montecarlo::{run_experiment, McConfig, ThresholdMode};
use tailreg::samplers::{generate_dataset, CovariateLaw, DgpSpec, Family, SeedSpec};
use tailreg::Error;

fn config(reps: usize, n: usize) -> McConfig {
    McConfig {
        dgp: DgpSpec {
            family: Family::Pareto,
            beta: CoefVector::new(vec![0.1, 1.0, 1.0]).unwrap(),
            covariate_laws: vec![CovariateLaw::Uniform01, CovariateLaw::StdNormal],
            threshold: 1.0,
        },
        n,
        reps,
        master_seed: 555,
        estimators: vec![Method::Ols, Method::Mle],
        fit_columns: vec![0, 1, 2],
        threshold_mode: ThresholdMode::Fixed { w: 1.0 },
    }
}

/// Replay every replication serially and recompute mean/rmse with a two-pass
/// oracle; the engine's aggregates must agree to 1e-12.
#[test]
fn aggregates_match_two_pass_oracle() {
    let cfg = config(80, 300);
    let report = run_experiment(&cfg).unwrap();
    assert_eq!(report.failed_reps, 0);

    let mut draws_ols: Vec<Vec<f64>> = Vec::new();
    let mut draws_mle: Vec<Vec<f64>> = Vec::new();
    for rep in 0..cfg.reps as u64 {
        let d = generate_dataset(&cfg.dgp, cfg.n, SeedSpec::new(cfg.master_seed, rep)).unwrap();
        let s = TailSample::from_series(&d.responses, &d.covariates, 1.0, TailSide::Right).unwrap();
        draws_ols.push(ols_fit(&s, CovSpec::IidGumbel).unwrap().beta_hat.as_slice().to_vec());
        draws_mle.push(mle_fit(&s, None).unwrap().beta_hat.as_slice().to_vec());
    }

    let truth = [0.1, 1.0, 1.0];
    for (method, draws) in [(Method::Ols, &draws_ols), (Method::Mle, &draws_mle)] {
        let summary = report.summary(method).unwrap();
        let r = draws.len() as f64;
        for j in 0..3 {
            // Pass one: mean. Pass two: centered moments.
            let mean: f64 = draws.iter().map(|d| d[j]).sum::<f64>() / r;
            let rmse: f64 =
                (draws.iter().map(|d| (d[j] - truth[j]).powi(2)).sum::<f64>() / r).sqrt();
            assert!(
                (summary.mean[j] - mean).abs() < 1e-12,
                "mean mismatch {} vs {mean}",
                summary.mean[j]
            );
            assert!(
                (summary.rmse[j] - rmse).abs() < 1e-12,
                "rmse mismatch {} vs {rmse}",
                summary.rmse[j]
            );

            // Bias-variance identity: rmse^2 = bias^2 + variance.
            let var: f64 = draws.iter().map(|d| (d[j] - mean).powi(2)).sum::<f64>() / r;
            let identity = ((mean - truth[j]).powi(2) + var).sqrt();
            assert!(
                (summary.rmse[j] - identity).abs() <= 1e-10 * identity.max(1e-12),
                "bias-variance identity broken: {} vs {identity}",
                summary.rmse[j]
            );
        }
    }
}

/// Scan-mode reports carry the per-estimator selected fraction statistics.
#[test]
fn scan_mode_reports_kappa_statistics() {
    let mut cfg = config(6, 600);
    cfg.dgp.family = Family::Burr { rho: -1.0 };
    cfg.threshold_mode = ThresholdMode::Scan;
    let report = run_experiment(&cfg).unwrap();
    for summary in &report.estimators {
        let km = summary.kappa_mean.expect("kappa mean in scan mode");
        let kd = summary.kappa_dispersion.expect("kappa dispersion in scan mode");
        assert!(km > 0.0 && km <= 0.5);
        assert!(kd >= 0.0);
    }
    // Fixed mode carries no kappa statistics.
    let fixed = run_experiment(&config(3, 300)).unwrap();
    for summary in &fixed.estimators {
        assert!(summary.kappa_mean.is_none());
        assert!(summary.kappa_dispersion.is_none());
    }
}

/// A threshold that excludes nearly every observation fails each replication;
/// the run aborts once more than 1% of replications are lost.
#[test]
fn excessive_failures_abort_the_run() {
    let mut cfg = config(20, 300);
    cfg.threshold_mode = ThresholdMode::Fixed { w: 1e12 };
    match run_experiment(&cfg) {
        Err(Error::ExcessiveFailures { failed, reps }) => {
            assert_eq!(failed, 20);
            assert_eq!(reps, 20);
        }
        other => panic!("expected ExcessiveFailures, got {other:?}"),
    }
}
