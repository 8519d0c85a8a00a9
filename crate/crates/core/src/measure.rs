//! Tagged scalar results: every measure reports how it was computed and
//! what convergence evidence it carries.

/// How a reported value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Exact closed form, as printed in the source expressions.
    ClosedForm,
    /// Closed form after the normalization correction this library adopts.
    CorrectedClosedForm,
    /// Closed form evaluated verbatim despite a known inconsistency.
    PrintedClosedForm,
    /// Schmidt spectrum of the two-mode amplitude matrix via SVD.
    FockSvd,
    /// Displaced-parity series over the truncated Fock basis.
    ParityOracle,
    /// Polar quadrature (Gauss-Legendre angle, adaptive Simpson radius).
    Quadrature,
    /// Bisection search over the smoothing parameter.
    Bisection,
    /// Multi-start derivative-free maximization.
    Optimizer,
    /// Closed-form objective maximized numerically.
    ClosedObjective,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::CorrectedClosedForm => "corrected-closed-form",
            Method::PrintedClosedForm => "printed-closed-form",
            Method::FockSvd => "fock-svd",
            Method::ParityOracle => "parity-oracle",
            Method::Quadrature => "quadrature",
            Method::Bisection => "bisection",
            Method::Optimizer => "optimizer",
            Method::ClosedObjective => "closed-objective",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Convergence evidence attached to a numeric result.
#[derive(Clone, Debug, Default)]
pub struct Convergence {
    pub error_estimate: Option<f64>,
    pub evaluations: usize,
    pub note: Option<String>,
}

/// A scalar measure with its provenance.
#[derive(Clone, Debug)]
pub struct MeasureResult {
    pub value: f64,
    pub method: Method,
    pub convergence: Convergence,
}

impl MeasureResult {
    pub fn exact(value: f64, method: Method) -> Self {
        Self {
            value,
            method,
            convergence: Convergence::default(),
        }
    }
}
