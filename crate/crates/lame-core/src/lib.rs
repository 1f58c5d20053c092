//! Core numerics for the first Dirichlet eigenvalue of the planar Lamé system
//!
//! ```text
//!     -mu Delta u - (lambda + mu) grad(div u) = Lambda u   in Omega,
//!                                          u  = 0          on the boundary,
//! ```
//!
//! with `mu > 0`, `lambda + mu > 0`. This crate provides the scalar
//! ingredients (Bessel functions, bracketed root finding), the material
//! parameter algebra, the exact disk spectrum with its regime
//! classification, the Fourier shape-perturbation coefficients at the disk,
//! and the closed-form/variational results for rhombi, rectangles and
//! cuboids. Finite elements live in the companion `lame-fem` crate.

pub mod bessel;
pub mod disk;
pub mod domains;
pub mod params;
pub mod perturbation;
pub mod roots;

/// Errors shared by the analytic layers of the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Bessel order above the supported cap.
    #[error("unsupported Bessel order {0} (supported: 0..={max})", max = bessel::MAX_ORDER)]
    UnsupportedOrder(usize),

    /// A root bracket whose endpoints do not straddle a sign change.
    #[error("invalid bracket [{lo}, {hi}]: endpoint values {flo} and {fhi} do not change sign")]
    InvalidBracket {
        lo: f64,
        hi: f64,
        flo: f64,
        fhi: f64,
    },

    /// A scan that was supposed to locate a sign change ran out of interval.
    #[error("bracket scan failed: {0}")]
    BracketScanFailed(String),

    /// Root refinement did not reach the requested tolerance.
    #[error("root refinement did not converge within {0} iterations")]
    NoConvergence(usize),

    /// Material parameters violating `mu > 0`, `lambda + mu > 0`.
    #[error("inadmissible Lame parameters mu = {mu}, lambda = {lambda} (need mu > 0 and lambda + mu > 0)")]
    Inadmissible { mu: f64, lambda: f64 },

    /// An operation that only makes sense in one spectral regime was called in another.
    #[error("regime mismatch: {0}")]
    RegimeMismatch(String),

    /// A coefficient formula hit a vanishing denominator.
    #[error("degenerate denominator in {0}")]
    DegenerateDenominator(&'static str),

    /// A point handed to an eigenfunction evaluator lies outside the domain.
    #[error("point ({x}, {y}) lies outside the domain")]
    OutsideDomain { x: f64, y: f64 },

    /// Construction of a geometric object failed.
    #[error("geometry error: {0}")]
    Geometry(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
