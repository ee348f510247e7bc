//! Material and frequency bookkeeping.
//!
//! The background is an isotropic linear-elastic medium with Lame data
//! (lambda, mu) and density rho, all O(1). The inclusion occupies the unit
//! ball and is "hard": its Lame parameters are scaled by 1/delta and its
//! density by 1/eps_rho, with delta, eps_rho in (0,1). The derived speed
//! contrast tau = sqrt(delta/eps_rho) must satisfy tau < 1 (the inclusion
//! carries faster waves than the background).

use crate::error::{QmrError, Result};

/// Background Lame parameters and density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackgroundMedium {
    pub lambda: f64,
    pub mu: f64,
    pub rho: f64,
}

impl BackgroundMedium {
    /// Unit background (mu = rho = lambda = 1), the nondimensional default.
    pub const UNIT: BackgroundMedium = BackgroundMedium { lambda: 1.0, mu: 1.0, rho: 1.0 };

    pub fn new(lambda: f64, mu: f64, rho: f64) -> Result<Self> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(QmrError::InvalidParameter {
                name: "mu",
                message: format!("shear modulus must be positive and finite, got {mu}"),
            });
        }
        if !(3.0 * lambda + 2.0 * mu > 0.0) || !lambda.is_finite() {
            return Err(QmrError::InvalidParameter {
                name: "lambda",
                message: format!(
                    "strong convexity requires 3*lambda + 2*mu > 0, got lambda={lambda}, mu={mu}"
                ),
            });
        }
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(QmrError::InvalidParameter {
                name: "rho",
                message: format!("density must be positive and finite, got {rho}"),
            });
        }
        Ok(BackgroundMedium { lambda, mu, rho })
    }
}

/// High-contrast profile of the inclusion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContrastProfile {
    pub delta: f64,
    pub eps_rho: f64,
    /// Speed contrast sqrt(delta/eps_rho), always < 1 by construction.
    pub tau: f64,
}

impl ContrastProfile {
    pub fn new(delta: f64, eps_rho: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(QmrError::InvalidParameter {
                name: "delta",
                message: format!("Lame contrast must lie in (0,1), got {delta}"),
            });
        }
        if !(eps_rho > 0.0 && eps_rho < 1.0) {
            return Err(QmrError::InvalidParameter {
                name: "eps_rho",
                message: format!("density contrast must lie in (0,1), got {eps_rho}"),
            });
        }
        let tau = (delta / eps_rho).sqrt();
        if !(tau < 1.0) {
            return Err(QmrError::InvalidParameter {
                name: "tau",
                message: format!(
                    "speed contrast tau = sqrt(delta/eps_rho) must be < 1, got {tau} \
                     (delta={delta}, eps_rho={eps_rho})"
                ),
            });
        }
        Ok(ContrastProfile { delta, eps_rho, tau })
    }
}

/// Everything derived from (background, contrast, omega): interior
/// parameters, wavenumbers, speeds, and a regime descriptor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams {
    pub bg: BackgroundMedium,
    pub contrast: ContrastProfile,
    pub omega: f64,
    /// Interior Lame parameters and density: lambda/delta, mu/delta, rho/eps_rho.
    pub lambda_t: f64,
    pub mu_t: f64,
    pub rho_t: f64,
    /// Background shear/compressional speeds.
    pub c_s: f64,
    pub c_p: f64,
    /// Background shear/compressional wavenumbers.
    pub k_s: f64,
    pub k_p: f64,
    /// Interior wavenumbers (tau times the background ones).
    pub kt_s: f64,
    pub kt_p: f64,
    /// True when omega < 0.1 (the sub-wavelength assumption); informational.
    pub sub_wavelength: bool,
}

/// Populate all derived quantities; rejects non-physical inputs.
pub fn derive_parameters(
    bg: BackgroundMedium,
    contrast: ContrastProfile,
    omega: f64,
) -> Result<DerivedParams> {
    // Re-validate: callers may have built the structs literally.
    let bg = BackgroundMedium::new(bg.lambda, bg.mu, bg.rho)?;
    let contrast = ContrastProfile::new(contrast.delta, contrast.eps_rho)?;
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(QmrError::InvalidParameter {
            name: "omega",
            message: format!("frequency must be positive and finite, got {omega}"),
        });
    }
    let c_s = (bg.mu / bg.rho).sqrt();
    let c_p = ((bg.lambda + 2.0 * bg.mu) / bg.rho).sqrt();
    let k_s = omega / c_s;
    let k_p = omega / c_p;
    Ok(DerivedParams {
        bg,
        contrast,
        omega,
        lambda_t: bg.lambda / contrast.delta,
        mu_t: bg.mu / contrast.delta,
        rho_t: bg.rho / contrast.eps_rho,
        c_s,
        c_p,
        k_s,
        k_p,
        kt_s: contrast.tau * k_s,
        kt_p: contrast.tau * k_p,
        sub_wavelength: omega < 0.1,
    })
}
