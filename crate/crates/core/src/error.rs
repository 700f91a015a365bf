use num_complex::Complex64;
use thiserror::Error;

/// Errors raised anywhere in the amplitude pipeline.
///
/// Every variant maps to a stable machine-readable code (see [`Error::code`])
/// that the CLI and the C ABI forward unchanged.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown potential family `{0}`")]
    UnknownFamily(String),

    #[error("potential is not pointwise evaluable at x = {0} (delta spike)")]
    NotPointwiseEvaluable(f64),

    #[error("x = {x} lies outside the sampled range [{lo}, {hi}] and no tail model is declared")]
    Extrapolation { x: f64, lo: f64, hi: f64 },

    #[error("composite parts overlap: [{0}, {1}] intersects [{2}, {3}]")]
    OverlappingParts(f64, f64, f64, f64),

    #[error("near-zero momentum |kappa| = {0:e}: amplitudes diverge; use the alpha/beta pair directly")]
    NearZeroMomentum(f64),

    #[error("S-matrix pole at kappa = {0}")]
    Pole(Complex64),

    #[error("amplitudes not analytic here: tail-limited strip requires Im kappa > {limit}, got {kappa}")]
    TailLimited { kappa: Complex64, limit: f64 },

    #[error("integration failure at x = {x}: {reason}")]
    Integration { x: f64, reason: String },

    #[error("quadrature did not converge: estimated error {0:e}")]
    Quadrature(f64),

    #[error("mismatched momenta: {0} vs {1}")]
    MismatchedKappa(Complex64, Complex64),

    #[error("conjugate continuation unavailable at complex kappa = {0}; supply values at -conj(kappa)")]
    MissingConjugate(Complex64),

    #[error("series diverges: {0}")]
    Divergent(String),

    #[error("series did not reach its bound after {0} terms")]
    SeriesExhausted(usize),

    #[error("turning point on the integration path near x = {0}: branch ambiguous")]
    TurningPoint(f64),

    #[error("grazing energy: edge momentum vanishes")]
    Grazing,

    #[error("series regime exceeded: |z| = {0} > 50")]
    SeriesRegime(f64),

    #[error("function nearly vanishes on the contour (min |f| = {min:e} at {at}); shift contour")]
    ZeroOnContour { min: f64, at: Complex64 },

    #[error("phase tracking failed near {0}: step floor reached")]
    PhaseTracking(Complex64),

    #[error("root refinement did not converge from seed {0}")]
    NoConvergence(Complex64),

    #[error("invalid rectangle: {0}")]
    InvalidRectangle(String),
}

impl Error {
    /// Stable short code for logs, CLI output and the C ABI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::UnknownFamily(_) => "unknown_family",
            Error::NotPointwiseEvaluable(_) => "not_pointwise",
            Error::Extrapolation { .. } => "extrapolation",
            Error::OverlappingParts(..) => "overlap",
            Error::NearZeroMomentum(_) => "near_zero_kappa",
            Error::Pole(_) => "pole",
            Error::TailLimited { .. } => "tail_limited",
            Error::Integration { .. } => "integration",
            Error::Quadrature(_) => "quadrature",
            Error::MismatchedKappa(..) => "mismatched_kappa",
            Error::MissingConjugate(_) => "missing_conjugate",
            Error::Divergent(_) => "divergent",
            Error::SeriesExhausted(_) => "series_exhausted",
            Error::TurningPoint(_) => "turning_point",
            Error::Grazing => "grazing",
            Error::SeriesRegime(_) => "series_regime",
            Error::ZeroOnContour { .. } => "zero_on_contour",
            Error::PhaseTracking(_) => "phase_tracking",
            Error::NoConvergence(_) => "no_convergence",
            Error::InvalidRectangle(_) => "invalid_rectangle",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
