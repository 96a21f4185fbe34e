//! Error types shared across the crate.

use std::fmt;

/// Errors produced by state construction, propagation and analysis.
///
/// Diagnostic payloads are stored as `f64` regardless of the scalar type
/// the computation ran in.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A value that must be finite/positive/etc. was not.
    InvalidInput(String),
    /// Grid too coarse for the requested truncation order (need N >= 2*K_max + 1).
    GridTooCoarse { n: usize, k_max: usize },
    /// Coefficients violate the reality condition c_{-k} = conj(c_k).
    HermitianViolation { rel: f64 },
    /// Synthesis produced an imaginary residue beyond the allowed bound.
    RealityViolation { residue: f64, bound: f64 },
    /// Two objects that must share K_max (or L) do not.
    DimensionMismatch(String),
    /// A projection was requested for a filter whose symbol is not {0, 1}-valued.
    NonIdempotentFilter,
    /// Requested integrator step exceeds the stability bound.
    StabilityBound { dt: f64, bound: f64 },
    /// Adaptive quadrature failed to converge within the refinement budget.
    QuadratureNonConvergence { levels: u32 },
    /// The projected part is identically zero; a decay fit is undefined.
    EmptyProjection,
    /// Decay-fit window invalid: too few samples, nonpositive values, or degenerate.
    FitWindow(String),
    /// No mode index satisfies the counterexample admissibility conditions.
    NoAdmissibleMode { k_max: usize, reason: String },
    /// Configuration file or parameter rejected.
    Config(String),
    /// Filesystem or serialization failure.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::GridTooCoarse { n, k_max } => write!(
                f,
                "grid with {n} samples is too coarse for K_max = {k_max} (need N >= {})",
                2 * k_max + 1
            ),
            Error::HermitianViolation { rel } => write!(
                f,
                "coefficients violate Hermitian symmetry (relative deviation {rel:.3e})"
            ),
            Error::RealityViolation { residue, bound } => write!(
                f,
                "synthesized field is not real: imaginary residue {residue:.3e} exceeds bound {bound:.3e}"
            ),
            Error::DimensionMismatch(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::NonIdempotentFilter => {
                write!(f, "splitting unavailable: filter symbol is not {{0, 1}}-valued")
            }
            Error::StabilityBound { dt, bound } => write!(
                f,
                "step dt = {dt:.3e} exceeds the RK4 stability bound {bound:.3e}"
            ),
            Error::QuadratureNonConvergence { levels } => write!(
                f,
                "adaptive quadrature did not converge after {levels} refinement levels"
            ),
            Error::EmptyProjection => {
                write!(f, "projected part is identically zero; decay fit undefined")
            }
            Error::FitWindow(msg) => write!(f, "decay fit rejected: {msg}"),
            Error::NoAdmissibleMode { k_max, reason } => write!(
                f,
                "no admissible mode index within K_max = {k_max} ({reason}); raise K_max"
            ),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
