//! Error type shared by all numerical routines.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the numerical kernels.
///
/// `InvalidParam` covers precondition violations (domain errors, unsupported
/// orders, malformed configurations); the remaining variants signal numerical
/// breakdown of a specific algorithm.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its documented domain. Carries the parameter
    /// name and a short description of the violated constraint.
    InvalidParam { name: &'static str, message: String },
    /// A computed quantity overflowed the representable range (e.g. a wave
    /// trace with `ζ` too large for the geometry).
    Overflow { what: &'static str, message: String },
    /// Adaptive quadrature failed to reach the requested tolerance; carries
    /// the relative error estimate actually achieved.
    QuadratureNonConvergence { achieved: f64 },
    /// The bidiagonal QR iteration hit its iteration cap.
    SvdNonConvergence { unconverged: usize },
    /// The closed-form normalization bracket came out non-positive, which
    /// signals a Bessel-evaluation breakdown for the given `(p, κ)`.
    NormalizationBreakdown { order: i64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParam { name, message } => {
                write!(f, "invalid parameter `{name}`: {message}")
            }
            Error::Overflow { what, message } => write!(f, "overflow in {what}: {message}"),
            Error::QuadratureNonConvergence { achieved } => write!(
                f,
                "adaptive quadrature did not converge (achieved relative error {achieved:e})"
            ),
            Error::SvdNonConvergence { unconverged } => write!(
                f,
                "SVD iteration cap reached with {unconverged} unconverged superdiagonals"
            ),
            Error::NormalizationBreakdown { order } => write!(
                f,
                "non-positive normalization bracket at mode {order} (Bessel breakdown)"
            ),
        }
    }
}

impl Error {
    pub(crate) fn invalid(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParam {
            name,
            message: message.into(),
        }
    }
}
