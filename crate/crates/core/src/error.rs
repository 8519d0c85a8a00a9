use thiserror::Error;

/// Errors produced by state construction and the numeric evaluators.
#[derive(Debug, Error)]
pub enum Error {
    /// A fixed cutoff is too small to hold the requested state.
    #[error("cutoff {cutoff} too small: need at least {needed}")]
    CutoffTooSmall { needed: usize, cutoff: usize },

    /// The adaptive cutoff hit its cap before the tail bound was met.
    #[error("tail bound not met at cutoff cap {cap}: achieved {achieved:.3e}, requested {requested:.3e}")]
    TailNotConverged {
        requested: f64,
        achieved: f64,
        cap: usize,
    },

    /// Photon addition would push the state past the cutoff cap.
    #[error("creation headroom exceeded: need cutoff {needed}, cap is {cap}")]
    HeadroomExceeded { needed: usize, cap: usize },

    /// Invalid arguments to a binomial/factorial routine.
    #[error("binomial domain: k = {k} exceeds n = {n}")]
    BinomialDomain { n: u64, k: u64 },

    /// The singular-value decomposition did not converge.
    #[error("SVD did not converge within the iteration limit")]
    SvdNonConvergence,

    /// An adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature error estimate {estimate:.3e} above tolerance {tolerance:.3e}")]
    QuadratureNonConvergence { estimate: f64, tolerance: f64 },

    /// A Wigner evaluator failed its normalization precondition.
    #[error("evaluator not normalized: integral = {integral:.9} (expected 1 within {tolerance:.1e})")]
    NotNormalized { integral: f64, tolerance: f64 },

    /// The Gaussian integral behind R(z, eta) diverges at this eta.
    #[error("R(z,eta) not regularizable at eta = {eta}: eta^2 - tau^2(1-eta)^2 = {discriminant:.3e} <= 0")]
    NotRegularizable { eta: f64, discriminant: f64 },

    /// eta outside the open interval (0, 1).
    #[error("eta = {eta} outside (0, 1)")]
    EtaOutOfRange { eta: f64 },

    /// The displaced state's tail mass did not converge.
    #[error("displaced-state tail not converged: residual {residual:.3e}")]
    DisplacedTailNotConverged { residual: f64 },

    /// Closed form not defined for these parameters.
    #[error("closed form undefined for {what}")]
    ClosedFormDomain { what: String },

    /// A state vector with no support cannot be normalized.
    #[error("cannot normalize a zero state vector")]
    ZeroState,
}

pub type Result<T> = std::result::Result<T, Error>;
