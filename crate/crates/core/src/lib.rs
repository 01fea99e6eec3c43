//! Conditional tail-index regression for heavy-tailed data.
//!
//! The tail index is modeled as `alpha(x, beta) = exp(x'beta)` above a tail
//! cut-off. A double-logarithmic transform of the exceedances turns the
//! Pareto model into a linear regression with a known Gumbel error law, so
//! the coefficients can be estimated by plain OLS; an exponential-regression
//! MLE is provided as the competing estimator. The crate also ships
//! heteroskedasticity/autocorrelation-robust covariances, discrepancy-based
//! tail threshold selection, closed-form omitted-variable analytics, and a
//! deterministic parallel Monte Carlo engine that reproduces the simulation
//! tables at desk scale.
//!
//! # Modules
//!
//! - [`model`] — domain types, the transform layer, tail-index evaluation
//! - [`samplers`] — seedable Pareto/Burr/Gumbel generation and DGP datasets
//! - [`estimators`] — OLS and MLE fits with i.i.d.-Gumbel, HAC, and
//!   information-matrix covariances
//! - [`threshold`] — discrepancy measure and tail cut-off scans
//! - [`misspec`] — pseudo-true limits and variance inflation factors under
//!   an omitted covariate
//! - [`montecarlo`] — replicated experiments and table reports

pub mod error;
pub mod estimators;
pub mod misspec;
pub mod model;
pub mod montecarlo;
pub mod samplers;
pub mod threshold;

pub use error::{Error, Result};
pub use estimators::{ols_fit, mle_fit, CovKind, CovSpec, FitResult, Method};
pub use model::{CoefVector, GumbelConstants, TailSample, TailSide, EULER_GAMMA, GUMBEL_VARIANCE};
pub use montecarlo::{McConfig, McReport, TableId, ThresholdMode};
pub use samplers::{CovariateLaw, Dataset, DgpSpec, Family, SeedSpec};
pub use threshold::{select_threshold, ThresholdScan};
