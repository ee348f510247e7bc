//! Regime calculators: the index thresholds n1, n2 that guarantee boundary
//! localization at a given level, the contrast bound beta, and the
//! hypothesis flags for each localization / resonance / stress statement.

use crate::error::{QmrError, Result};

/// Shell-dependent design quantities for a target localization level.
#[derive(Debug, Clone, Copy)]
pub struct DesignBounds {
    pub eps_loc: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub n1: u32,
    pub n2: u32,
    pub beta: f64,
    /// Set when the n1 formula yielded a value below 1 and was clamped.
    pub n1_clamped: bool,
}

fn check_shells(eps_loc: f64, gamma1: f64, gamma2: f64) -> Result<()> {
    if !(0.0 < eps_loc && eps_loc < 1.0) {
        return Err(QmrError::InvalidParameter {
            name: "eps_loc",
            message: format!("localization level must lie in (0, 1), got {eps_loc}"),
        });
    }
    if !(0.0 < gamma1 && gamma1 < 1.0) {
        return Err(QmrError::Domain(format!(
            "gamma1 must lie in (0, 1), got {gamma1}"
        )));
    }
    if !(gamma2 > 1.0) {
        return Err(QmrError::Domain(format!(
            "gamma2 must exceed 1, got {gamma2}"
        )));
    }
    Ok(())
}

/// Smallest mode indices guaranteeing interior / exterior localization at
/// level eps_loc:
///   n1 = floor((ln eps / ln gamma1 - 3) / 2) + 1
///   n2 = floor((1 - ln eps / ln gamma2) / 2) + 1
/// n1 is clamped to 1 (with a flag via `design_bounds`) when the formula
/// yields a non-positive value.
pub fn index_bounds(eps_loc: f64, gamma1: f64, gamma2: f64) -> Result<(u32, u32)> {
    let (n1, n2, _) = index_bounds_flagged(eps_loc, gamma1, gamma2)?;
    Ok((n1, n2))
}

fn index_bounds_flagged(eps_loc: f64, gamma1: f64, gamma2: f64) -> Result<(u32, u32, bool)> {
    check_shells(eps_loc, gamma1, gamma2)?;
    let le = eps_loc.ln();
    let raw1 = ((le / gamma1.ln() - 3.0) / 2.0).floor() + 1.0;
    let raw2 = ((1.0 - le / gamma2.ln()) / 2.0).floor() + 1.0;
    let clamped = raw1 < 1.0;
    let n1 = if clamped { 1 } else { raw1 as u32 };
    // raw2 >= 1 always: ln eps < 0 and ln gamma2 > 0 make the quotient
    // negative, so the floored argument is >= 0.
    let n2 = raw2 as u32;
    Ok((n1, n2, clamped))
}

/// The contrast bound of the delta-dependent localization statement:
///   beta = min(2 ln g1 / (ln e - ln g1), 2 ln g2 / (3 ln g2 - ln e)),
/// requiring eps_loc < gamma1.
pub fn delta_bound(eps_loc: f64, gamma1: f64, gamma2: f64) -> Result<f64> {
    check_shells(eps_loc, gamma1, gamma2)?;
    if eps_loc >= gamma1 {
        return Err(QmrError::Domain(format!(
            "delta bound requires eps_loc < gamma1, got eps_loc = {eps_loc}, gamma1 = {gamma1}"
        )));
    }
    let le = eps_loc.ln();
    let t1 = 2.0 * gamma1.ln() / (le - gamma1.ln());
    let t2 = 2.0 * gamma2.ln() / (3.0 * gamma2.ln() - le);
    Ok(t1.min(t2))
}

/// All shell-dependent design quantities at once.
pub fn design_bounds(eps_loc: f64, gamma1: f64, gamma2: f64) -> Result<DesignBounds> {
    let (n1, n2, n1_clamped) = index_bounds_flagged(eps_loc, gamma1, gamma2)?;
    let beta = delta_bound(eps_loc, gamma1, gamma2)?;
    Ok(DesignBounds { eps_loc, gamma1, gamma2, n1, n2, beta, n1_clamped })
}

/// Hypothesis flags for each statement, at a concrete (n, delta).
#[derive(Debug, Clone, Copy)]
pub struct RegimeFlags {
    /// Localization: n >= max(n1, n2).
    pub thm31: bool,
    /// Contrast-robust localization: delta <= beta and n delta >= 1.
    pub cor32: bool,
    /// Surface resonance: n >= max(n1, n2) and n delta^2 >= 1.
    pub thm41: bool,
    /// Gradient blow-up alone: n delta^2 >= 1.
    pub prop41: bool,
    /// Stress concentration: n >= max(n1, n2) and n delta >= 1.
    pub thm42: bool,
    /// Stress blow-up alone: n delta >= 1.
    pub prop43: bool,
    /// Combined: n delta >= 1 and delta <= beta.
    pub prop44: bool,
}

/// Evaluate the hypothesis flags. The 1/delta and 1/delta^2 comparisons are
/// done in the n*delta >= 1 form so no division can flip a boundary case.
pub fn regime_check(
    n: u32,
    delta: f64,
    eps_loc: f64,
    gamma1: f64,
    gamma2: f64,
) -> Result<RegimeFlags> {
    if !(0.0 < delta && delta < 1.0) {
        return Err(QmrError::InvalidParameter {
            name: "delta",
            message: format!("contrast must lie in (0, 1), got {delta}"),
        });
    }
    let bounds = design_bounds(eps_loc, gamma1, gamma2)?;
    let nf = n as f64;
    let n_large = n >= bounds.n1.max(bounds.n2);
    let nd = nf * delta >= 1.0;
    let nd2 = nf * delta * delta >= 1.0;
    let under_beta = delta <= bounds.beta;
    Ok(RegimeFlags {
        thm31: n_large,
        cor32: under_beta && nd,
        thm41: n_large && nd2,
        prop41: nd2,
        thm42: n_large && nd,
        prop43: nd,
        prop44: nd && under_beta,
    })
}
