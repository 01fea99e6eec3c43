//! The two competing estimators and their covariance estimators.
//!
//! OLS runs on the double-log transformed regression `z = x'beta + xi`; its
//! homoskedastic covariance uses the known Gumbel error variance `pi^2/6`,
//! and a Bartlett-kernel Newey–West sandwich covers dependent data. The
//! exponential-regression MLE maximizes the average log-likelihood
//!
//! ```text
//! l(beta)  = (1/n0) sum x'beta - (exp(x'beta) + 1) ln(y/w),
//! G(beta)  = (1/n0) sum x (1 - exp(x'beta) ln(y/w)),
//! H(beta)  = -(1/n0) sum x x' exp(x'beta) ln(y/w),
//! ```
//!
//! by Newton steps with step halving; `H` is negative definite so every
//! stationary point is the global maximum.

use crate::error::{Error, Result};
use crate::model::{transform_response, CoefVector, TailSample, GUMBEL_VARIANCE};
use nalgebra::{Cholesky, DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

/// Reciprocal-condition floor below which a design is treated as singular.
const RCOND_MIN: f64 = 1e-12;
const MAX_NEWTON_ITERATIONS: usize = 100;
const MAX_HALVINGS: usize = 30;
const GRADIENT_TOL: f64 = 1e-8;
const STEP_TOL: f64 = 1e-10;

/// Estimator identity carried by a [`FitResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ols,
    Mle,
}

/// Covariance estimator requested for an OLS fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovSpec {
    /// `pi^2/6 (X'X)^-1`, exact under i.i.d. Gumbel errors.
    IidGumbel,
    /// Newey–West sandwich; `None` selects the bandwidth rule
    /// `floor(4 (n0/100)^(2/9))`.
    Hac { bandwidth: Option<usize> },
}

/// Covariance estimator recorded on a fit, with the bandwidth resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CovKind {
    IidGumbel,
    Hac { bandwidth: usize },
    MleInformation,
}

/// Coefficient estimates with their covariance and provenance.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub beta_hat: CoefVector,
    /// Estimated variance of `beta_hat` (the asymptotic covariance already
    /// divided by `n0`); symmetric positive semidefinite.
    pub covariance: DMatrix<f64>,
    pub std_errors: Vec<f64>,
    pub method: Method,
    pub cov_kind: CovKind,
    pub n0: usize,
    /// Newton iterations; 0 for OLS.
    pub iterations: usize,
    pub converged: bool,
}

struct DesignQr {
    q: DMatrix<f64>,
    r: DMatrix<f64>,
}

/// Thin QR of the design with a rank check on the triangular factor.
fn design_qr(x: &DMatrix<f64>) -> Result<DesignQr> {
    let qr = x.clone().qr();
    let r = qr.r();
    let mut dmin = f64::INFINITY;
    let mut dmax = 0.0f64;
    for d in r.diagonal().iter() {
        let a = d.abs();
        dmin = dmin.min(a);
        dmax = dmax.max(a);
    }
    let rcond = if dmax > 0.0 { dmin / dmax } else { 0.0 };
    if rcond <= RCOND_MIN {
        return Err(Error::SingularDesign { rcond });
    }
    Ok(DesignQr { q: qr.q(), r })
}

impl DesignQr {
    fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>> {
        let qtz = self.q.transpose() * rhs;
        self.r
            .solve_upper_triangular(&qtz)
            .ok_or(Error::SingularDesign { rcond: 0.0 })
    }

    /// `(X'X)^-1 = R^-1 R^-T` from the triangular factor.
    fn xtx_inverse(&self) -> Result<DMatrix<f64>> {
        let k = self.r.ncols();
        let r_inv = self
            .r
            .solve_upper_triangular(&DMatrix::identity(k, k))
            .ok_or(Error::SingularDesign { rcond: 0.0 })?;
        Ok(&r_inv * r_inv.transpose())
    }
}

fn std_errors_from(covariance: &DMatrix<f64>) -> Vec<f64> {
    covariance.diagonal().iter().map(|v| v.sqrt()).collect()
}

/// Least-squares fit of the transformed regression.
///
/// Solves the normal equations through the QR factorization of `X` (the
/// cross-product matrix is formed only for covariance output), leaving the
/// residuals orthogonal to the design columns.
pub fn ols_fit(sample: &TailSample, cov: CovSpec) -> Result<FitResult> {
    let n0 = sample.len();
    let k = sample.num_coefficients();
    if n0 <= k {
        return Err(Error::SampleTooSmall { n: n0, min: k + 1 });
    }
    let x = sample.covariates();
    let z = DVector::from_vec(transform_response(sample)?);
    let qr = design_qr(x)?;
    let beta = qr.solve(&z)?;
    let (covariance, cov_kind) = match cov {
        CovSpec::IidGumbel => (ols_cov_iid(sample)?, CovKind::IidGumbel),
        CovSpec::Hac { bandwidth } => {
            let b = bandwidth.unwrap_or_else(|| default_hac_bandwidth(n0));
            let residuals = (&z - x * &beta).iter().copied().collect::<Vec<f64>>();
            (
                ols_cov_hac(sample, &residuals, Some(b))?,
                CovKind::Hac { bandwidth: b },
            )
        }
    };
    let std_errors = std_errors_from(&covariance);
    Ok(FitResult {
        beta_hat: CoefVector::from_dvector(&beta),
        covariance,
        std_errors,
        method: Method::Ols,
        cov_kind,
        n0,
        iterations: 0,
        converged: true,
    })
}

/// Homoskedastic OLS covariance `pi^2/6 (X'X)^-1`.
///
/// The error variance is not estimated from residuals: under a correctly
/// specified Pareto tail the errors are standard Gumbel, so `sigma_xi^2 =
/// pi^2/6` exactly.
pub fn ols_cov_iid(sample: &TailSample) -> Result<DMatrix<f64>> {
    let qr = design_qr(sample.covariates())?;
    Ok(qr.xtx_inverse()? * GUMBEL_VARIANCE)
}

/// Newey–West bandwidth rule `floor(4 (n0/100)^(2/9))`.
pub fn default_hac_bandwidth(n0: usize) -> usize {
    (4.0 * (n0 as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

/// Bartlett-kernel Newey–West sandwich covariance of an OLS fit.
///
/// ```text
/// V = Gamma(0) + sum_{j=1}^{b} (1 - j/(b+1)) (Gamma(j) + Gamma(j)'),
/// Gamma(j) = (1/n0) sum_{tau > j} g_tau g_{tau-j}',   g_tau = x_tau xi_tau,
/// cov = (X'X/n0)^-1 V (X'X/n0)^-1 / n0.
/// ```
///
/// Bandwidth 0 reduces to the heteroskedasticity-robust (White) sandwich.
pub fn ols_cov_hac(
    sample: &TailSample,
    residuals: &[f64],
    bandwidth: Option<usize>,
) -> Result<DMatrix<f64>> {
    let n0 = sample.len();
    let k = sample.num_coefficients();
    if residuals.len() != n0 {
        return Err(Error::DimensionMismatch {
            expected: n0,
            got: residuals.len(),
        });
    }
    let b = bandwidth.unwrap_or_else(|| default_hac_bandwidth(n0));
    if b >= n0 {
        return Err(Error::BandwidthTooLarge { bandwidth: b, n0 });
    }
    let x = sample.covariates();
    // Score rows g_tau = x_tau * residual_tau, in time order.
    let mut scores = DMatrix::zeros(n0, k);
    for t in 0..n0 {
        for j in 0..k {
            scores[(t, j)] = x[(t, j)] * residuals[t];
        }
    }
    let mut v = scores.transpose() * &scores / n0 as f64;
    for lag in 1..=b {
        let weight = 1.0 - lag as f64 / (b as f64 + 1.0);
        let lead = scores.rows(lag, n0 - lag);
        let trail = scores.rows(0, n0 - lag);
        let gamma = lead.transpose() * trail / n0 as f64;
        v += (&gamma + gamma.transpose()) * weight;
    }
    let qr = design_qr(x)?;
    let xtx_scaled_inv = qr.xtx_inverse()? * n0 as f64; // (X'X / n0)^-1
    Ok(&xtx_scaled_inv * v * &xtx_scaled_inv / n0 as f64)
}

fn check_beta_len(sample: &TailSample, beta: &CoefVector) -> Result<()> {
    if beta.len() != sample.num_coefficients() {
        return Err(Error::DimensionMismatch {
            expected: sample.num_coefficients(),
            got: beta.len(),
        });
    }
    Ok(())
}

fn avg_loglik(x: &DMatrix<f64>, s: &[f64], beta: &DVector<f64>) -> f64 {
    let xb = x * beta;
    let mut total = 0.0;
    for (t, &st) in s.iter().enumerate() {
        total += xb[t] - (xb[t].exp() + 1.0) * st;
    }
    total / s.len() as f64
}

fn score_vec(x: &DMatrix<f64>, s: &[f64], beta: &DVector<f64>) -> DVector<f64> {
    let xb = x * beta;
    let mut g = DVector::zeros(x.ncols());
    for (t, &st) in s.iter().enumerate() {
        let e = 1.0 - xb[t].exp() * st;
        for j in 0..x.ncols() {
            g[j] += x[(t, j)] * e;
        }
    }
    g / s.len() as f64
}

fn hessian_mat(x: &DMatrix<f64>, s: &[f64], beta: &DVector<f64>) -> DMatrix<f64> {
    let xb = x * beta;
    let k = x.ncols();
    let mut h = DMatrix::zeros(k, k);
    for (t, &st) in s.iter().enumerate() {
        let w = xb[t].exp() * st;
        for i in 0..k {
            for j in i..k {
                h[(i, j)] -= x[(t, i)] * x[(t, j)] * w;
            }
        }
    }
    // Fill the symmetric lower triangle.
    for i in 0..k {
        for j in 0..i {
            h[(i, j)] = h[(j, i)];
        }
    }
    h / s.len() as f64
}

/// Average log-likelihood of the exponential regression, up to the constant
/// `-ln(w)` term.
pub fn log_likelihood(sample: &TailSample, beta: &CoefVector) -> Result<f64> {
    check_beta_len(sample, beta)?;
    let s = sample.log_excesses()?;
    Ok(avg_loglik(sample.covariates(), &s, &beta.to_dvector()))
}

/// Score vector `G(beta)` of the average log-likelihood.
pub fn score(sample: &TailSample, beta: &CoefVector) -> Result<DVector<f64>> {
    check_beta_len(sample, beta)?;
    let s = sample.log_excesses()?;
    Ok(score_vec(sample.covariates(), &s, &beta.to_dvector()))
}

/// Hessian `H(beta)` of the average log-likelihood; negative definite on any
/// full-rank design.
pub fn hessian(sample: &TailSample, beta: &CoefVector) -> Result<DMatrix<f64>> {
    check_beta_len(sample, beta)?;
    let s = sample.log_excesses()?;
    Ok(hessian_mat(sample.covariates(), &s, &beta.to_dvector()))
}

/// Exponential-regression MLE via Newton iteration.
///
/// Starts from `init` when given, otherwise from the OLS estimate (consistent,
/// so Newton starts inside the attraction basin; zero vector if OLS itself
/// fails). Steps are halved until the average log-likelihood does not
/// decrease; near the optimum the likelihood improvement falls below f64
/// resolution, so the acceptance test is non-strict. Convergence requires the
/// gradient sup-norm below 1e-8; the covariance is `(-H)^-1 / n0` at the
/// solution.
pub fn mle_fit(sample: &TailSample, init: Option<&CoefVector>) -> Result<FitResult> {
    let n0 = sample.len();
    let k = sample.num_coefficients();
    if n0 <= k {
        return Err(Error::SampleTooSmall { n: n0, min: k + 1 });
    }
    if let Some(b) = init {
        check_beta_len(sample, b)?;
    }
    let s = sample.log_excesses()?;
    let x = sample.covariates();
    let mut beta = match init {
        Some(b) => b.to_dvector(),
        None => match ols_fit(sample, CovSpec::IidGumbel) {
            Ok(fit) => fit.beta_hat.to_dvector(),
            Err(_) => DVector::zeros(k),
        },
    };

    let mut iterations = 0;
    let mut converged = false;
    let mut grad_norm = f64::INFINITY;
    while iterations < MAX_NEWTON_ITERATIONS {
        let g = score_vec(x, &s, &beta);
        grad_norm = g.amax();
        if grad_norm < GRADIENT_TOL {
            converged = true;
            break;
        }
        let neg_h = -hessian_mat(x, &s, &beta);
        let chol = Cholesky::new(neg_h).ok_or(Error::SingularDesign { rcond: 0.0 })?;
        let direction = chol.solve(&g);
        let base = avg_loglik(x, &s, &beta);
        // Concavity makes every exact Newton step an improvement; near the
        // optimum the true gain drops below f64 resolution, so the acceptance
        // test carries an ulp-scale slack instead of demanding a measured
        // increase.
        let slack = 16.0 * f64::EPSILON * (1.0 + base.abs());
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let candidate = &beta + &direction * lambda;
            let value = avg_loglik(x, &s, &candidate);
            if value.is_finite() && value >= base - slack {
                beta = candidate;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        iterations += 1;
        if !accepted {
            return Err(Error::NonConvergence {
                iterations,
                grad_norm,
            });
        }
        if (direction.amax() * lambda) < STEP_TOL && score_vec(x, &s, &beta).amax() < GRADIENT_TOL
        {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence {
            iterations,
            grad_norm,
        });
    }

    // One unguarded polish step: quadratic convergence squares the gradient
    // norm, so the reported optimum is pinned well past the stopping
    // tolerance and parameterization-equivariant to machine precision.
    let g = score_vec(x, &s, &beta);
    if g.amax() > 0.0 {
        if let Some(chol) = Cholesky::new(-hessian_mat(x, &s, &beta)) {
            let candidate = &beta + chol.solve(&g);
            if candidate.iter().all(|v| v.is_finite())
                && score_vec(x, &s, &candidate).amax() <= g.amax()
            {
                beta = candidate;
                iterations += 1;
            }
        }
    }

    let neg_h = -hessian_mat(x, &s, &beta);
    let chol = Cholesky::new(neg_h).ok_or(Error::SingularDesign { rcond: 0.0 })?;
    let covariance = chol.inverse() / n0 as f64;
    let std_errors = std_errors_from(&covariance);
    Ok(FitResult {
        beta_hat: CoefVector::from_dvector(&beta),
        covariance,
        std_errors,
        method: Method::Mle,
        cov_kind: CovKind::MleInformation,
        n0,
        iterations,
        converged: true,
    })
}

/// Closed-form constant-only tail index MLE, `n0 / sum ln(y/w)` (the Hill
/// estimator).
pub fn hill_estimate(sample: &TailSample) -> Result<f64> {
    let s = sample.log_excesses()?;
    Ok(s.len() as f64 / s.iter().sum::<f64>())
}

/// Per-coefficient t statistics and two-sided p-values against the standard
/// normal limit.
pub fn t_stats(fit: &FitResult) -> Result<(Vec<f64>, Vec<f64>)> {
    if fit.std_errors.iter().any(|&se| se.is_nan() || se <= 0.0) {
        return Err(Error::Domain(
            "standard errors must be positive for t statistics".into(),
        ));
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    let t: Vec<f64> = fit
        .beta_hat
        .as_slice()
        .iter()
        .zip(&fit.std_errors)
        .map(|(b, se)| b / se)
        .collect();
    let p: Vec<f64> = t.iter().map(|&t| 2.0 * (1.0 - normal.cdf(t.abs()))).collect();
    Ok((t, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{TailSide, EULER_GAMMA};
    use crate::samplers::{generate_dataset, CovariateLaw, DgpSpec, Family, SeedSpec};
    use approx::assert_relative_eq;

    fn pareto_sample(n: usize, beta: &[f64], seed: u64) -> TailSample {
        let laws = match beta.len() {
            1 => vec![],
            2 => vec![CovariateLaw::Uniform01],
            3 => vec![CovariateLaw::Uniform01, CovariateLaw::StdNormal],
            _ => unreachable!(),
        };
        let spec = DgpSpec::new(
            Family::Pareto,
            CoefVector::new(beta.to_vec()).unwrap(),
            laws,
            1.0,
        )
        .unwrap();
        let d = generate_dataset(&spec, n, SeedSpec::new(seed, 0)).unwrap();
        TailSample::from_series(&d.responses, &d.covariates, 1.0, TailSide::Right).unwrap()
    }

    /// Noiseless synthetic sample whose transform is exactly `x'beta`:
    /// y = w * exp(exp(-(x'beta + gamma))).
    fn noiseless_sample(beta: &[f64]) -> TailSample {
        let n = 40;
        let k = beta.len();
        let x = DMatrix::from_fn(n, k, |i, j| {
            if j == 0 {
                1.0
            } else {
                ((i * (j + 3)) as f64 * 0.7919).sin()
            }
        });
        let w = 1.3;
        let y: Vec<f64> = (0..n)
            .map(|i| {
                let xb: f64 = (0..k).map(|j| x[(i, j)] * beta[j]).sum();
                w * (-(xb + EULER_GAMMA)).exp().exp()
            })
            .collect();
        TailSample::new(y, x, w, TailSide::Right, n).unwrap()
    }

    #[test]
    fn ols_interpolates_noiseless_data() {
        let beta = [0.4, -1.1, 0.8];
        let s = noiseless_sample(&beta);
        let fit = ols_fit(&s, CovSpec::IidGumbel).unwrap();
        for (a, b) in fit.beta_hat.as_slice().iter().zip(&beta) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        assert_eq!(fit.iterations, 0);
        assert!(fit.converged);
        assert_eq!(fit.method, Method::Ols);
    }

    #[test]
    fn ols_residuals_are_orthogonal_to_design() {
        let s = pareto_sample(2000, &[0.1, 1.0, 1.0], 5);
        let fit = ols_fit(&s, CovSpec::IidGumbel).unwrap();
        let z = DVector::from_vec(transform_response(&s).unwrap());
        let resid = z - s.covariates() * fit.beta_hat.to_dvector();
        let xt_res = s.covariates().transpose() * resid;
        let scale = s.len() as f64;
        for v in xt_res.iter() {
            assert!(v.abs() / scale < 1e-10, "orthogonality violated: {v}");
        }
    }

    #[test]
    fn iid_cov_on_orthonormal_design_is_scaled_identity() {
        let n = 100;
        // Columns: intercept and a +-1 pattern, so X'X = n I.
        let x = DMatrix::from_fn(n, 2, |i, j| {
            if j == 0 || i % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        });
        let y = vec![2.0; n];
        let s = TailSample::new(y, x, 1.0, TailSide::Right, n).unwrap();
        let cov = ols_cov_iid(&s).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { GUMBEL_VARIANCE / n as f64 } else { 0.0 };
                assert_relative_eq!(cov[(i, j)], expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn iid_cov_constant_only_formula() {
        let s = pareto_sample(1000, &[2.0f64.ln()], 6);
        let n0 = s.len() as f64;
        let cov = ols_cov_iid(&s).unwrap();
        assert_relative_eq!(cov[(0, 0)], GUMBEL_VARIANCE / n0, max_relative = 1e-12);
    }

    #[test]
    fn hac_bandwidth_zero_equals_white() {
        let s = pareto_sample(500, &[0.1, 1.0, 1.0], 7);
        let fit = ols_fit(&s, CovSpec::IidGumbel).unwrap();
        let z = DVector::from_vec(transform_response(&s).unwrap());
        let resid: Vec<f64> = (z - s.covariates() * fit.beta_hat.to_dvector())
            .iter()
            .copied()
            .collect();
        let hac0 = ols_cov_hac(&s, &resid, Some(0)).unwrap();
        // Direct White sandwich for comparison.
        let x = s.covariates();
        let n0 = s.len() as f64;
        let mut meat = DMatrix::zeros(3, 3);
        for t in 0..s.len() {
            for i in 0..3 {
                for j in 0..3 {
                    meat[(i, j)] += x[(t, i)] * x[(t, j)] * resid[t] * resid[t];
                }
            }
        }
        meat /= n0;
        let xtx_inv = (x.transpose() * x).try_inverse().unwrap() * n0;
        let white = &xtx_inv * meat * &xtx_inv / n0;
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(hac0[(i, j)], white[(i, j)], max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn hac_bandwidth_bounds() {
        let s = pareto_sample(300, &[0.5], 8);
        let resid = vec![0.1; s.len()];
        assert!(matches!(
            ols_cov_hac(&s, &resid, Some(s.len())),
            Err(Error::BandwidthTooLarge { .. })
        ));
        assert_eq!(default_hac_bandwidth(100), 4);
        assert_eq!(default_hac_bandwidth(10_000), 11);
    }

    #[test]
    fn singular_design_is_detected() {
        let n = 50;
        // Third column duplicates the second.
        let x = DMatrix::from_fn(n, 3, |i, j| match j {
            0 => 1.0,
            _ => (i as f64 * 0.13).cos(),
        });
        let y: Vec<f64> = (0..n).map(|i| 1.5 + (i as f64) / n as f64).collect();
        let s = TailSample::new(y, x, 1.0, TailSide::Right, n).unwrap();
        assert!(matches!(
            ols_fit(&s, CovSpec::IidGumbel),
            Err(Error::SingularDesign { .. })
        ));
    }

    #[test]
    fn mle_matches_hill_on_constant_only_design() {
        for seed in 0..5 {
            let s = pareto_sample(800, &[0.9], 100 + seed);
            let fit = mle_fit(&s, None).unwrap();
            let hill = hill_estimate(&s).unwrap();
            let alpha_hat = fit.beta_hat[0].exp();
            assert!(
                (alpha_hat - hill).abs() <= 1e-8 * hill.max(1.0),
                "alpha {alpha_hat} vs hill {hill}"
            );
        }
    }

    #[test]
    fn mle_gradient_is_small_at_solution() {
        let s = pareto_sample(3000, &[0.1, 1.0, 1.0], 9);
        let fit = mle_fit(&s, None).unwrap();
        let g = score(&s, &fit.beta_hat).unwrap();
        assert!(g.amax() < 1e-8);
        assert!(fit.converged);
        assert!(fit.iterations > 0);
    }

    #[test]
    fn mle_improves_on_its_initializer() {
        let s = pareto_sample(1500, &[0.1, 1.0, 1.0], 10);
        let init = CoefVector::new(vec![0.0, 0.0, 0.0]).unwrap();
        let fit = mle_fit(&s, Some(&init)).unwrap();
        let l_init = log_likelihood(&s, &init).unwrap();
        let l_hat = log_likelihood(&s, &fit.beta_hat).unwrap();
        assert!(l_hat > l_init);
    }

    #[test]
    fn score_matches_finite_difference_of_loglik() {
        let s = pareto_sample(400, &[0.1, 1.0, 1.0], 11);
        let beta = CoefVector::new(vec![0.2, 0.8, 0.9]).unwrap();
        let g = score(&s, &beta).unwrap();
        for j in 0..3 {
            let h = 1e-6 * beta[j].abs().max(1.0);
            let mut up = beta.as_slice().to_vec();
            let mut dn = up.clone();
            up[j] += h;
            dn[j] -= h;
            let fd = (log_likelihood(&s, &CoefVector::new(up).unwrap()).unwrap()
                - log_likelihood(&s, &CoefVector::new(dn).unwrap()).unwrap())
                / (2.0 * h);
            assert_relative_eq!(g[j], fd, max_relative = 1e-6);
        }
    }

    #[test]
    fn hessian_matches_finite_difference_of_score() {
        let s = pareto_sample(400, &[0.1, 1.0, 1.0], 12);
        let beta = CoefVector::new(vec![0.3, 1.1, 0.7]).unwrap();
        let h = hessian(&s, &beta).unwrap();
        for j in 0..3 {
            let step = 1e-6 * beta[j].abs().max(1.0);
            let mut up = beta.as_slice().to_vec();
            let mut dn = up.clone();
            up[j] += step;
            dn[j] -= step;
            let gu = score(&s, &CoefVector::new(up).unwrap()).unwrap();
            let gd = score(&s, &CoefVector::new(dn).unwrap()).unwrap();
            for i in 0..3 {
                let fd = (gu[i] - gd[i]) / (2.0 * step);
                assert_relative_eq!(h[(i, j)], fd, max_relative = 1e-5, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn t_stats_anchor_points() {
        let fit = FitResult {
            beta_hat: CoefVector::new(vec![0.0, 1.96, -2.5758]).unwrap(),
            covariance: DMatrix::identity(3, 3),
            std_errors: vec![1.0, 1.0, 1.0],
            method: Method::Ols,
            cov_kind: CovKind::IidGumbel,
            n0: 100,
            iterations: 0,
            converged: true,
        };
        let (t, p) = t_stats(&fit).unwrap();
        assert_eq!(t[0], 0.0);
        assert_eq!(p[0], 1.0);
        assert!((p[1] - 0.05).abs() < 1e-3);
        assert!((p[2] - 0.01).abs() < 1e-4);
    }
}
