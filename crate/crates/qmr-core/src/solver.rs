//! Per-mode transmission solver for the hard inclusion in the unit ball.
//!
//! For each degree n the tangential T-channel decouples into a 2x2 linear
//! system for the layer densities (phi1, phi2). This module assembles and
//! solves that system exactly on log-scaled arithmetic, provides the
//! closed-form asymptotic densities as a second code path, and evaluates
//! incident / interior / scattered fields and gradients.

use crate::error::{QmrError, Result};
use crate::harmonics::{grad_radial_vsh_scaled, vsh_t, SphericalPoint};
use crate::media::DerivedParams;
use crate::scaled::{LogComplex, LogScaled};
use crate::specfun::{ln_double_factorial, radial_pair_scaled, radial_traction_scaled, RadialKind};
use num_complex::Complex64;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Relative-determinant threshold below which a mode solve is reported as
/// numerically singular.
pub const NEAR_SINGULAR_THRESHOLD: f64 = 1e-14;

/// An incident wave of fixed degree n: u^i = sum_m f_{n,m} j_n(k_s r) T_n^m.
#[derive(Debug, Clone)]
pub struct IncidentSpec {
    pub n: u32,
    /// Coefficients f_{n,m} for m = -n..n, indexed by (m + n).
    pub coefficients: Vec<Complex64>,
}

impl IncidentSpec {
    pub fn new(n: u32, coefficients: Vec<Complex64>) -> Result<Self> {
        if n < 1 {
            return Err(QmrError::InvalidParameter {
                name: "n",
                message: "incident degree must satisfy n >= 1".into(),
            });
        }
        if coefficients.len() != (2 * n + 1) as usize {
            return Err(QmrError::InvalidParameter {
                name: "coefficients",
                message: format!(
                    "expected 2n+1 = {} coefficients, got {}",
                    2 * n + 1,
                    coefficients.len()
                ),
            });
        }
        if coefficients.iter().all(|c| c.norm() == 0.0) {
            return Err(QmrError::InvalidParameter {
                name: "coefficients",
                message: "at least one coefficient must be nonzero".into(),
            });
        }
        Ok(IncidentSpec { n, coefficients })
    }

    /// The sectoral incident wave f_{n,n} = f, all other coefficients zero.
    pub fn sectoral(n: u32, f: Complex64) -> Result<Self> {
        let mut coefficients = vec![Complex64::new(0.0, 0.0); (2 * n + 1) as usize];
        *coefficients.last_mut().unwrap() = f;
        IncidentSpec::new(n, coefficients)
    }

    /// Unit coefficients on every m.
    pub fn uniform(n: u32, f: Complex64) -> Result<Self> {
        IncidentSpec::new(n, vec![f; (2 * n + 1) as usize])
    }

    pub fn coefficient(&self, m: i32) -> Complex64 {
        self.coefficients[(m + self.n as i32) as usize]
    }
}

/// The assembled 2x2 mode system A x = b at unit radius, on log scales.
#[derive(Debug, Clone)]
pub struct ModeSystem {
    pub n: u32,
    pub a11: LogComplex,
    pub a12: LogComplex,
    pub a21: LogComplex,
    pub a22: LogComplex,
    /// Right-hand sides (f_{n,m} j_n(k_s), g_{n,m}) indexed by (m + n).
    pub rhs: Vec<[LogComplex; 2]>,
}

/// Value and radial derivative of a radial factor on a log scale.
fn scaled_value_deriv(kind: RadialKind, n: u32, z: Complex64) -> Result<(LogComplex, LogComplex)> {
    let pair = radial_pair_scaled(kind, n, z)?;
    let deriv = pair
        .f_nm1
        .add(pair.f_n.mul_complex(-Complex64::new((n + 1) as f64, 0.0) / z));
    Ok((pair.f_n, deriv))
}

/// Assemble the mode system for the incident wave `spec`.
///
/// With kt = kt_s, k = k_s, and all radii at the inclusion boundary r = 1:
///   a11 = -i kt j_n(kt) h_n(kt) / mu_t        a12 = +i k j_n(k) h_n(k) / mu
///   a21 = -i kt h_n(kt) (kt j_n'(kt) - j_n(kt))
///   a22 = +i k  j_n(k)  (k  h_n'(k)  - h_n(k))
///   b   = (f j_n(k), f mu (k j_n'(k) - j_n(k)))
pub fn assemble_mode_system(spec: &IncidentSpec, params: &DerivedParams) -> Result<ModeSystem> {
    let n = spec.n;
    let kt = Complex64::new(params.kt_s, 0.0);
    let k = Complex64::new(params.k_s, 0.0);
    let (jt, _) = scaled_value_deriv(RadialKind::BesselJ, n, kt)?;
    let (ht, _) = scaled_value_deriv(RadialKind::Hankel1, n, kt)?;
    let (j, _) = scaled_value_deriv(RadialKind::BesselJ, n, k)?;
    let (h, _) = scaled_value_deriv(RadialKind::Hankel1, n, k)?;
    // Traction combinations z f' - f via the cancellation-safe path.
    let gjt = radial_traction_scaled(RadialKind::BesselJ, n, kt)?;
    let gj = radial_traction_scaled(RadialKind::BesselJ, n, k)?;
    let gh = radial_traction_scaled(RadialKind::Hankel1, n, k)?;
    let mu = params.bg.mu;
    let mu_t = params.mu_t;

    let a11 = jt.mul(ht).mul_complex(-I * kt / mu_t).normalized();
    let a12 = j.mul(h).mul_complex(I * k / mu).normalized();
    let a21 = ht.mul(gjt).mul_complex(-I * kt).normalized();
    let a22 = j.mul(gh).mul_complex(I * k).normalized();
    let traction = gj.mul_complex(Complex64::new(mu, 0.0));
    let rhs = spec
        .coefficients
        .iter()
        .map(|&f| [j.mul_complex(f).normalized(), traction.mul_complex(f).normalized()])
        .collect();
    Ok(ModeSystem { n, a11, a12, a21, a22, rhs })
}

/// How a set of mode coefficients was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Exact,
    Asymptotic,
}

/// Solved layer densities per m, on log scales.
#[derive(Debug, Clone)]
pub struct ModeCoefficients {
    pub n: u32,
    /// (phi1, phi2) indexed by (m + n).
    pub densities: Vec<(LogComplex, LogComplex)>,
    pub method: SolveMethod,
    /// Set when the leading-order phi2 vanishes identically (n = 1 or the
    /// (1 - delta) factor degenerates); exact solves never set it.
    pub degenerate_leading: bool,
}

impl ModeCoefficients {
    pub fn density(&self, m: i32) -> (LogComplex, LogComplex) {
        self.densities[(m + self.n as i32) as usize]
    }
}

fn log_abs(x: LogComplex) -> f64 {
    if x.mantissa.norm() == 0.0 {
        f64::NEG_INFINITY
    } else {
        x.log_scale + x.mantissa.norm().ln()
    }
}

fn max_abs(a: LogComplex, b: LogComplex) -> LogScaled {
    let pick = if log_abs(a) >= log_abs(b) { a } else { b };
    pick.abs()
}

/// Direct 2x2 solve of the assembled system, with a near-singular guard on
/// the determinant relative to the entry scale.
pub fn solve_mode_exact(spec: &IncidentSpec, params: &DerivedParams) -> Result<ModeCoefficients> {
    let sys = assemble_mode_system(spec, params)?;
    let det = sys.a11.mul(sys.a22).sub(sys.a12.mul(sys.a21)).normalized();
    let scale = max_abs(sys.a11, sys.a12).mul(max_abs(sys.a21, sys.a22));
    let rel_det = det.abs().ratio(scale);
    if !rel_det.is_finite() || rel_det < NEAR_SINGULAR_THRESHOLD {
        return Err(QmrError::NearSingular {
            n: sys.n,
            rel_det,
            threshold: NEAR_SINGULAR_THRESHOLD,
        });
    }
    let densities = sys
        .rhs
        .iter()
        .map(|&[b1, b2]| {
            if b1.is_zero() && b2.is_zero() {
                (LogComplex::ZERO, LogComplex::ZERO)
            } else {
                let phi1 = b1.mul(sys.a22).sub(b2.mul(sys.a12)).div(det).normalized();
                let phi2 = sys.a11.mul(b2).sub(sys.a21.mul(b1)).div(det).normalized();
                (phi1, phi2)
            }
        })
        .collect();
    Ok(ModeCoefficients {
        n: sys.n,
        densities,
        method: SolveMethod::Exact,
        degenerate_leading: false,
    })
}

/// Leading-order closed-form densities:
///   phi1 = -f (2n+1) rho^{n/2} omega^n / ((2n-1)!! [d(n+2)+n-1] mu^{(n-2)/2})
///   phi2 = +f (n-1)(1-d) rho^{n/2} omega^n / (same denominator)
/// stored with the omega^n rho^{n/2} mu^{-n/2} / (2n-1)!! factor on the log
/// scale. At n = 1 the leading phi2 vanishes and the result is flagged.
pub fn solve_mode_asymptotic(
    spec: &IncidentSpec,
    params: &DerivedParams,
) -> Result<ModeCoefficients> {
    let n = spec.n;
    let nf = n as f64;
    let delta = params.contrast.delta;
    let mu = params.bg.mu;
    let rho = params.bg.rho;
    let denom = delta * (nf + 2.0) + nf - 1.0;
    let scale_log = nf * params.omega.ln() + 0.5 * nf * (rho.ln() - mu.ln())
        - ln_double_factorial(2 * n as i64 - 1);
    let densities = spec
        .coefficients
        .iter()
        .map(|&f| {
            let phi1 = LogComplex::new(-f * (2.0 * nf + 1.0) * mu / denom, scale_log).normalized();
            let phi2 = LogComplex::new(f * (nf - 1.0) * (1.0 - delta) * mu / denom, scale_log)
                .normalized();
            (phi1, phi2)
        })
        .collect();
    Ok(ModeCoefficients {
        n,
        densities,
        method: SolveMethod::Asymptotic,
        degenerate_leading: n == 1,
    })
}

/// Which field a sample or a shell norm refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldRegion {
    Incident,
    Interior,
    Scattered,
    /// The total field inside the inclusion; identical to `Interior` because
    /// the single-layer representation inside the ball IS the total field.
    TotalInterior,
}

/// A field evaluation: Cartesian value and Jacobian.
#[derive(Debug, Clone, Copy)]
pub struct FieldSample {
    pub value: [Complex64; 3],
    pub gradient: [[Complex64; 3]; 3],
    pub region: FieldRegion,
}

/// The radial-factor contributions of a region for a single m: a log-scaled
/// prefactor, the radial kind, and the wavenumber.
fn contributions(
    region: FieldRegion,
    spec: &IncidentSpec,
    params: &DerivedParams,
    coeffs: &ModeCoefficients,
    m: i32,
) -> Result<Vec<(LogComplex, RadialKind, f64)>> {
    let n = spec.n;
    let f = spec.coefficient(m);
    let (phi1, phi2) = coeffs.density(m);
    let kt = Complex64::new(params.kt_s, 0.0);
    let k = Complex64::new(params.k_s, 0.0);
    let mut out = Vec::new();
    match region {
        FieldRegion::Incident => {
            out.push((LogComplex::from_complex(f), RadialKind::BesselJ, params.k_s));
        }
        FieldRegion::Interior | FieldRegion::TotalInterior => {
            let ht = radial_pair_scaled(RadialKind::Hankel1, n, kt)?.f_n;
            let pref = phi1.mul(ht).mul_complex(-I * kt / params.mu_t).normalized();
            out.push((pref, RadialKind::BesselJ, params.kt_s));
        }
        FieldRegion::Scattered => {
            let j = radial_pair_scaled(RadialKind::BesselJ, n, k)?.f_n;
            let pref = phi2.mul(j).mul_complex(-I * k / params.bg.mu).normalized();
            out.push((pref, RadialKind::Hankel1, params.k_s));
        }
    }
    Ok(out)
}

/// Scalar radial amplitude and its r-derivative for one (region, m), on log
/// scales: the field is amplitude(r) * T_n^m.
pub fn radial_amplitude(
    region: FieldRegion,
    spec: &IncidentSpec,
    params: &DerivedParams,
    coeffs: &ModeCoefficients,
    m: i32,
    r: f64,
) -> Result<(LogComplex, LogComplex)> {
    let mut amp = LogComplex::ZERO;
    let mut damp = LogComplex::ZERO;
    for (pref, kind, k) in contributions(region, spec, params, coeffs, m)? {
        let z = Complex64::new(k * r, 0.0);
        let (f, df) = scaled_value_deriv(kind, spec.n, z)?;
        amp = amp.add(pref.mul(f));
        damp = damp.add(pref.mul(df).mul_complex(Complex64::new(k, 0.0)));
    }
    Ok((amp.normalized(), damp.normalized()))
}

fn check_region_radius(region: FieldRegion, r: f64) -> Result<()> {
    let tol = 1e-12;
    match region {
        FieldRegion::Interior | FieldRegion::TotalInterior if r > 1.0 + tol => {
            Err(QmrError::Domain(format!(
                "interior field requested at r = {r} > 1"
            )))
        }
        FieldRegion::Scattered if r < 1.0 - tol => Err(QmrError::Domain(format!(
            "scattered field requested at r = {r} < 1"
        ))),
        _ => Ok(()),
    }
}

/// Evaluate value and Cartesian Jacobian of the requested field.
pub fn eval_field(
    region: FieldRegion,
    spec: &IncidentSpec,
    params: &DerivedParams,
    coeffs: &ModeCoefficients,
    point: SphericalPoint,
) -> Result<FieldSample> {
    check_region_radius(region, point.r)?;
    let n = spec.n;
    let zero = Complex64::new(0.0, 0.0);
    let mut value = [zero; 3];
    let mut gradient = [[zero; 3]; 3];
    for m in -(n as i32)..=(n as i32) {
        if spec.coefficient(m).norm() == 0.0 {
            continue;
        }
        let t = vsh_t(n, m, point.theta, point.phi)?;
        for (pref, kind, k) in contributions(region, spec, params, coeffs, m)? {
            let z = Complex64::new(k * point.r, 0.0);
            let f = radial_pair_scaled(kind, n, z)?.f_n;
            let amp = pref.mul(f).value();
            for a in 0..3 {
                value[a] += amp * t[a];
            }
            let (mat, log) = grad_radial_vsh_scaled(kind, Complex64::new(k, 0.0), n, m, point)?;
            let s = pref.mantissa * (pref.log_scale + log).exp();
            for a in 0..3 {
                for b in 0..3 {
                    gradient[a][b] += s * mat[a][b];
                }
            }
        }
    }
    Ok(FieldSample { value, gradient, region })
}

/// Relative residuals of the two boundary equations at r = 1, computed from
/// the radial amplitudes rather than the assembled matrix entries: trace
/// matching amp_int = amp_inc + amp_scat, and traction matching
/// mu_t (amp_int' - amp_int) = mu (amp_inc' - amp_inc) + mu (amp_s' - amp_s).
/// Returns the maximum over the excited m of each residual, normalized by
/// the incident quantity.
pub fn transmission_residual(
    spec: &IncidentSpec,
    params: &DerivedParams,
    coeffs: &ModeCoefficients,
) -> Result<(f64, f64)> {
    let n = spec.n as i32;
    let mu = params.bg.mu;
    let mu_t = params.mu_t;
    let mut trace = 0.0f64;
    let mut traction = 0.0f64;
    for m in -n..=n {
        if spec.coefficient(m).norm() == 0.0 {
            continue;
        }
        let (inc, _) = radial_amplitude(FieldRegion::Incident, spec, params, coeffs, m, 1.0)?;
        let (int, _) = radial_amplitude(FieldRegion::Interior, spec, params, coeffs, m, 1.0)?;
        let (sca, _) = radial_amplitude(FieldRegion::Scattered, spec, params, coeffs, m, 1.0)?;
        let trace_gap = int.sub(inc).sub(sca);
        trace = trace.max(trace_gap.abs().ratio(inc.abs()));
        // Boundary traction per region: mu_region * (amp'(1) - amp(1)) with
        // the radial combination evaluated by the cancellation-safe route.
        let boundary_traction = |region: FieldRegion, mu_r: f64| -> Result<LogComplex> {
            let mut t = LogComplex::ZERO;
            for (pref, kind, kr) in contributions(region, spec, params, coeffs, m)? {
                let g =
                    radial_traction_scaled(kind, spec.n, Complex64::new(kr, 0.0))?;
                t = t.add(pref.mul(g).mul_complex(Complex64::new(mu_r, 0.0)));
            }
            Ok(t.normalized())
        };
        let t_int = boundary_traction(FieldRegion::Interior, mu_t)?;
        let t_inc = boundary_traction(FieldRegion::Incident, mu)?;
        let t_sca = boundary_traction(FieldRegion::Scattered, mu)?;
        let traction_gap = t_int.sub(t_inc).sub(t_sca);
        traction = traction.max(traction_gap.abs().ratio(t_inc.abs()));
    }
    Ok((trace, traction))
}
