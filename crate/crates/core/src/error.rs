use thiserror::Error;

/// Errors raised across the estimation pipeline.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A response failed the strict exceedance requirement `y > w`.
    ///
    /// Observations equal to the threshold are rejected rather than perturbed;
    /// the caller must choose a threshold strictly below the smallest retained
    /// observation.
    #[error("observation {index}: response {value} does not strictly exceed the threshold {threshold}")]
    DegenerateObservation {
        index: usize,
        value: f64,
        threshold: f64,
    },

    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported design: {0}")]
    UnsupportedDesign(String),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// The design matrix is numerically rank deficient (reciprocal condition
    /// number of the triangular QR factor below 1e-12).
    #[error("design matrix is numerically rank deficient (rcond {rcond:.3e})")]
    SingularDesign { rcond: f64 },

    #[error("HAC bandwidth {bandwidth} must be smaller than the tail sample size {n0}")]
    BandwidthTooLarge { bandwidth: usize, n0: usize },

    #[error("Newton solver did not converge after {iterations} iterations (gradient sup-norm {grad_norm:.3e})")]
    NonConvergence { iterations: usize, grad_norm: f64 },

    /// No candidate tail fraction satisfied the estimability floor
    /// `floor(kappa * n) > 10 * K`.
    #[error("threshold grid exhausted: no tail fraction keeps more than {floor} of {n} observations estimable")]
    GridExhausted { n: usize, floor: usize },

    #[error("sample of {n} observations is below the required minimum of {min}")]
    SampleTooSmall { n: usize, min: usize },

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// More than 1% of Monte Carlo replications failed to produce estimates.
    #[error("{failed} of {reps} replications failed; at most 1% may be excluded")]
    ExcessiveFailures { failed: usize, reps: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
