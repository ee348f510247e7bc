//! Error taxonomy shared by all modules.
//!
//! Three broad classes matter to callers: configuration problems (bad
//! physical parameters, out-of-range orders), numerical problems (a mode
//! system too close to singular, a quadrature rule asked to integrate
//! beyond its design order), and domain problems (evaluating a field in a
//! region where its representation is not valid).

use thiserror::Error;

/// Unified error type for the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum QmrError {
    /// A physical or algorithmic parameter is outside its documented range.
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// An evaluation was requested outside the supported domain
    /// (e.g. Hankel functions at the origin, interior field outside the ball).
    #[error("domain error: {0}")]
    Domain(String),

    /// The per-mode 2x2 system is numerically singular after rescaling;
    /// the mode is reported as resonant-degenerate.
    #[error("near-singular mode system at n={n}: relative determinant {rel_det:e} below threshold {threshold:e}")]
    NearSingular { n: u32, rel_det: f64, threshold: f64 },

    /// A quadrature rule was asked to integrate products of modes above
    /// the order it was built for.
    #[error("quadrature resolution insufficient: rule built for n_max={built_for}, requested n={requested}")]
    QuadratureResolution { built_for: u32, requested: u32 },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, QmrError>;
