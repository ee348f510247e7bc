//! Quasi-Minnaert resonance of a hard elastic inclusion in a soft background.
//!
//! The library models time-harmonic elastic scattering of a tangential,
//! divergence-free incident wave off the unit ball, whose Lame parameters
//! are 1/delta times the background's (a "hard" inclusion) with density
//! contrast eps_rho. In the sub-wavelength regime (omega << 1) the
//! transmitted and scattered fields localize at the inclusion boundary and
//! the surface gradients blow up relative to the incident energy — the
//! quasi-Minnaert effect. The modules follow the mathematical pipeline:
//!
//! - [`specfun`]: spherical Bessel/Hankel and associated Legendre functions;
//! - [`harmonics`]: vector spherical harmonics T_n^m, gradients, quadrature;
//! - [`media`]: material bookkeeping and derived wavenumbers;
//! - [`solver`]: the per-mode 2x2 transmission system, exact and asymptotic;
//! - [`analysis`]: shell norms, localization/resonance/stress reports;
//! - [`design`]: the index thresholds n1, n2, the contrast bound beta, and
//!   hypothesis checks for the localization and resonance regimes.
//!
//! All norms and amplitudes are carried in mantissa x log-scale form
//! ([`scaled`]) because the natural magnitudes reach omega^(2n) and
//! underflow double precision long before the interesting mode orders.

pub mod analysis;
pub mod design;
pub mod error;
pub mod harmonics;
pub mod media;
pub mod scaled;
pub mod solver;
pub mod specfun;

pub use error::{QmrError, Result};
pub use scaled::{LogComplex, LogScaled};

/// Complex scalar used throughout (re-exported from num-complex).
pub type Complex = num_complex::Complex64;
