//! Discrepancy-based selection of the tail cut-off.
//!
//! For each candidate tail fraction `kappa` the working series is cut at the
//! `(1 - kappa) * 100`-th percentile, the tail regression is fit on the
//! exceedances, and the uniformized residuals
//!
//! ```text
//! U_tau = exp(-exp(x_tau'beta_hat) ln(y_tau / w))
//! ```
//!
//! are compared with their own empirical distribution:
//! `D = (1/n0) sum (U - F_n(U))^2`. The selected fraction minimizes `D`
//! (ties resolve to the smallest fraction).

use crate::error::{Error, Result};
use crate::estimators::{mle_fit, ols_fit, CovSpec, Method};
use crate::model::{CoefVector, TailSample, TailSide};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Minimum series length for a meaningful scan.
const MIN_SCAN_LENGTH: usize = 200;

/// Result of a threshold scan over a grid of tail fractions.
///
/// The vectors are parallel: entry `i` holds the fraction, the implied
/// cut-off, the discrepancy, and the fitted coefficients of the `i`-th
/// evaluated grid point (grid points failing the estimability floor are not
/// evaluated and do not appear).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdScan {
    pub kappa_grid: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub discrepancy: Vec<f64>,
    /// Index of the selected grid point.
    pub selected: usize,
    pub kappa_star: f64,
    pub w_star: f64,
    pub fits: Vec<CoefVector>,
}

impl ThresholdScan {
    pub fn selected_fit(&self) -> &CoefVector {
        &self.fits[self.selected]
    }

    /// CSV rendering with columns `kappa,w,discrepancy`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kappa,w,discrepancy\n");
        for i in 0..self.kappa_grid.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                self.kappa_grid[i], self.thresholds[i], self.discrepancy[i]
            ));
        }
        out
    }
}

/// Default candidate grid: tail fractions 0.02 to 0.50 in steps of 0.01.
pub fn default_kappa_grid() -> Vec<f64> {
    (2..=50).map(|i| i as f64 / 100.0).collect()
}

/// Percentile with linear interpolation between order statistics (inclusive
/// convention): at probability `p` the value is
/// `y_(lo) + frac * (y_(lo+1) - y_(lo))` where `lo = floor((n-1) p)`.
///
/// The mapping from tail fraction to cut-off must be bit-reproducible, so the
/// convention is fixed here rather than delegated.
pub fn quantile(values: &[f64], p: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::InvalidSample("quantile of an empty slice".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = h - lo as f64;
    Ok(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

/// Uniformized residuals `U_tau = exp(-exp(x_tau'beta) ln(y_tau / w))`.
///
/// At the true coefficients each value is `1 - u_tau` in distribution, hence
/// approximately U(0,1); gross misfit pushes the values toward 0 or 1.
pub fn uniformized_residuals(sample: &TailSample, beta: &CoefVector) -> Result<Vec<f64>> {
    if beta.len() != sample.num_coefficients() {
        return Err(Error::DimensionMismatch {
            expected: sample.num_coefficients(),
            got: beta.len(),
        });
    }
    let s = sample.log_excesses()?;
    let x = sample.covariates();
    let b = beta.as_slice();
    Ok(s.iter()
        .enumerate()
        .map(|(t, &st)| {
            let xb: f64 = (0..x.ncols()).map(|j| x[(t, j)] * b[j]).sum();
            (-xb.exp() * st).exp()
        })
        .collect())
}

/// Mean squared gap between sorted values and their empirical CDF, with the
/// convention `F_n(U_(i)) = i / n0` and ties sharing the highest rank.
pub(crate) fn ecdf_discrepancy(values: &[f64]) -> f64 {
    let n0 = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mut total = 0.0;
    let mut start = 0;
    while start < n0 {
        let mut end = start + 1;
        while end < n0 && sorted[end] == sorted[start] {
            end += 1;
        }
        let fhat = end as f64 / n0 as f64;
        for v in &sorted[start..end] {
            let gap = v - fhat;
            total += gap * gap;
        }
        start = end;
    }
    total / n0 as f64
}

/// Discrepancy `D(w, x)` of a fitted tail sample; nonnegative and invariant
/// to permutation of the observations.
pub fn discrepancy(sample: &TailSample, beta: &CoefVector) -> Result<f64> {
    Ok(ecdf_discrepancy(&uniformized_residuals(sample, beta)?))
}

fn fit_beta(sample: &TailSample, estimator: Method) -> Result<CoefVector> {
    match estimator {
        Method::Ols => Ok(ols_fit(sample, CovSpec::IidGumbel)?.beta_hat),
        Method::Mle => Ok(mle_fit(sample, None)?.beta_hat),
    }
}

/// Scan candidate tail fractions and select the discrepancy minimizer.
///
/// For each `kappa` on the grid satisfying the estimability floor
/// `floor(kappa * n) > 10 K`, the cut-off is the `(1 - kappa) * 100`-th
/// percentile of the working series; exceedances are refit in-sample with the
/// chosen estimator and their discrepancy recorded. Grid points whose
/// percentile is not a positive real (possible on signed working series at
/// large fractions) are skipped. Deterministic for identical inputs.
pub fn select_threshold(
    responses: &[f64],
    covariates: &DMatrix<f64>,
    estimator: Method,
    grid: Option<&[f64]>,
) -> Result<ThresholdScan> {
    let n = responses.len();
    if covariates.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: covariates.nrows(),
        });
    }
    if n < MIN_SCAN_LENGTH {
        return Err(Error::SampleTooSmall {
            n,
            min: MIN_SCAN_LENGTH,
        });
    }
    if responses.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSample("non-finite response value".into()));
    }
    let k = covariates.ncols();
    let floor = 10 * k;
    let default_grid;
    let grid = match grid {
        Some(g) => g,
        None => {
            default_grid = default_kappa_grid();
            &default_grid
        }
    };
    if grid.is_empty() || grid.iter().any(|&g| !(g > 0.0 && g <= 1.0)) {
        return Err(Error::InvalidConfig(
            "threshold grid entries must lie in (0, 1]".into(),
        ));
    }

    let mut kappas = Vec::new();
    let mut thresholds = Vec::new();
    let mut discrepancies = Vec::new();
    let mut fits = Vec::new();
    for &kappa in grid {
        if (kappa * n as f64).floor() as usize <= floor {
            continue;
        }
        let w = quantile(responses, 1.0 - kappa)?;
        if !w.is_finite() || w <= 0.0 {
            continue;
        }
        let sample = match TailSample::from_series(responses, covariates, w, TailSide::Right) {
            Ok(s) if s.len() > k => s,
            _ => continue,
        };
        let beta = fit_beta(&sample, estimator)?;
        let d = discrepancy(&sample, &beta)?;
        kappas.push(kappa);
        thresholds.push(w);
        discrepancies.push(d);
        fits.push(beta);
    }
    if kappas.is_empty() {
        return Err(Error::GridExhausted { n, floor });
    }

    // Strict < keeps the first (smallest-kappa) minimizer on ties.
    let mut selected = 0;
    for (i, &d) in discrepancies.iter().enumerate() {
        if d < discrepancies[selected] {
            selected = i;
        }
    }
    Ok(ThresholdScan {
        kappa_star: kappas[selected],
        w_star: thresholds[selected],
        kappa_grid: kappas,
        thresholds,
        discrepancy: discrepancies,
        selected,
        fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::{generate_dataset, CovariateLaw, DgpSpec, Family, SeedSpec};
    use approx::assert_relative_eq;

    fn constant_sample(responses: Vec<f64>, threshold: f64) -> TailSample {
        let n = responses.len();
        let x = DMatrix::from_element(n, 1, 1.0);
        TailSample::new(responses, x, threshold, TailSide::Right, n).unwrap()
    }

    #[test]
    fn uniformized_residuals_collapse_anchor() {
        // y = w * exp(exp(-x'beta)) makes the exponent exactly one.
        let beta = CoefVector::new(vec![0.37]).unwrap();
        let w = 2.0;
        let y = w * (-0.37f64).exp().exp();
        let s = constant_sample(vec![y; 4], w);
        let u = uniformized_residuals(&s, &beta).unwrap();
        for v in u {
            assert_relative_eq!(v, (-1.0f64).exp(), max_relative = 1e-12);
        }
    }

    #[test]
    fn grossly_wrong_beta_concentrates_near_zero() {
        let spec = DgpSpec::new(
            Family::Pareto,
            CoefVector::new(vec![0.1]).unwrap(),
            vec![],
            1.0,
        )
        .unwrap();
        let d = generate_dataset(&spec, 500, SeedSpec::new(3, 0)).unwrap();
        let s = TailSample::from_series(&d.responses, &d.covariates, 1.0, TailSide::Right).unwrap();
        let wrong = CoefVector::new(vec![0.1 + 10.0]).unwrap();
        let u = uniformized_residuals(&s, &wrong).unwrap();
        let big = u.iter().filter(|&&v| v > 0.01).count();
        assert!(big * 100 < u.len(), "only {big} of {} above 0.01", u.len());
    }

    #[test]
    fn discrepancy_zero_on_perfect_grid() {
        // Values landing exactly on i/n have zero gap to the empirical CDF.
        let n = 25usize;
        let u: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
        assert_eq!(ecdf_discrepancy(&u), 0.0);

        // In-sample analogue: with a constant design and beta = 0 the
        // residuals are U = (y/w)^-1, so y = w * n/i puts U on the grid up
        // to the open-interval boundary; the gap is the single top point.
        let w = 3.0;
        let y: Vec<f64> = (1..n).map(|i| w * n as f64 / i as f64).collect();
        let s = constant_sample(y, w);
        let beta = CoefVector::new(vec![0.0]).unwrap();
        let d = discrepancy(&s, &beta).unwrap();
        let expect: f64 = (1..n)
            .map(|i| (i as f64 / n as f64 - i as f64 / (n - 1) as f64).powi(2))
            .sum::<f64>()
            / (n - 1) as f64;
        assert_relative_eq!(d, expect, max_relative = 1e-12);
    }

    #[test]
    fn discrepancy_single_atom_is_one_quarter() {
        // All U equal 0.5: every tie shares rank n/n = 1, each term (0.5-1)^2.
        let n = 50usize;
        let w = 1.0;
        let y = vec![w * 2.0f64; n]; // alpha = 1 under beta = 0 gives U = 0.5
        let s = constant_sample(y, w);
        let beta = CoefVector::new(vec![0.0]).unwrap();
        assert_relative_eq!(discrepancy(&s, &beta).unwrap(), 0.25, max_relative = 1e-12);
    }

    #[test]
    fn ecdf_discrepancy_tie_convention() {
        // Two distinct values with a tie: sorted (0.2, 0.2, 0.8);
        // ranks: ties share 2/3, the last gets 3/3.
        let d = ecdf_discrepancy(&[0.8, 0.2, 0.2]);
        let expect = (2.0 * (0.2f64 - 2.0 / 3.0).powi(2) + (0.8f64 - 1.0).powi(2)) / 3.0;
        assert_relative_eq!(d, expect, max_relative = 1e-12);
    }

    #[test]
    fn quantile_convention() {
        let values = vec![4.0, 1.0, 3.0, 2.0];
        assert_eq!(quantile(&values, 0.0).unwrap(), 1.0);
        assert_eq!(quantile(&values, 1.0).unwrap(), 4.0);
        assert_eq!(quantile(&values, 0.5).unwrap(), 2.5);
        assert_relative_eq!(quantile(&values, 0.9).unwrap(), 3.7, max_relative = 1e-12);
    }

    #[test]
    fn scan_is_deterministic() {
        let spec = DgpSpec::new(
            Family::Burr { rho: -1.0 },
            CoefVector::new(vec![0.1, 1.0, 1.0]).unwrap(),
            vec![CovariateLaw::Uniform01, CovariateLaw::StdNormal],
            1.0,
        )
        .unwrap();
        let d = generate_dataset(&spec, 800, SeedSpec::new(21, 0)).unwrap();
        let a = select_threshold(&d.responses, &d.covariates, Method::Ols, None).unwrap();
        let b = select_threshold(&d.responses, &d.covariates, Method::Ols, None).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.kappa_star, a.kappa_grid[a.selected]);
        assert!(a.discrepancy.iter().all(|&v| v >= a.discrepancy[a.selected]));
    }

    #[test]
    fn estimability_floor_exhausts_grid() {
        let spec = DgpSpec::new(
            Family::Pareto,
            CoefVector::new(vec![0.1, 1.0, 1.0]).unwrap(),
            vec![CovariateLaw::Uniform01, CovariateLaw::StdNormal],
            1.0,
        )
        .unwrap();
        let d = generate_dataset(&spec, 250, SeedSpec::new(4, 0)).unwrap();
        // floor(0.05 * 250) = 12 <= 30, the only grid point fails the floor.
        let err =
            select_threshold(&d.responses, &d.covariates, Method::Ols, Some(&[0.05])).unwrap_err();
        assert!(matches!(err, Error::GridExhausted { .. }));
    }

    #[test]
    fn short_series_is_rejected() {
        let spec = DgpSpec::new(
            Family::Pareto,
            CoefVector::new(vec![0.1]).unwrap(),
            vec![],
            1.0,
        )
        .unwrap();
        let d = generate_dataset(&spec, 150, SeedSpec::new(5, 0)).unwrap();
        assert!(matches!(
            select_threshold(&d.responses, &d.covariates, Method::Ols, None),
            Err(Error::SampleTooSmall { n: 150, min: 200 })
        ));
    }
}
