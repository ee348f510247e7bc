//! Scalar and vector spherical harmonics, gradients, and quadrature.
//!
//! The only angular channel excited by the incident waves considered here is
//! the tangential, divergence-free family T_n^m = grad_{S^2} Y_n^m ^ nu.
//! In the spherical frame (r_hat, theta_hat, phi_hat),
//!
//!   T_n^m = A_theta theta_hat + A_phi phi_hat,
//!   A_theta = i m Y_n^m / sin(theta),
//!   A_phi   = -C_n^m e^{i m phi} d/dtheta P_n^{|m|}(cos theta),
//!
//! with the normalization C_n^m = sqrt((2n+1)/(4 pi) (n-|m|)!/(n+|m|)!) and
//! no Condon-Shortley phase. This module also assembles the full Cartesian
//! Jacobian of radial-times-T fields, the Gauss-Legendre quadrature used by
//! every shell integral, and the angular integral constants C1, C2, C3.

use crate::error::{QmrError, Result};
use crate::specfun::{
    assoc_legendre_d2theta, assoc_legendre_pair, radial_pair_scaled, RadialKind,
};
use num_complex::Complex64;
use std::f64::consts::PI;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A point in spherical coordinates (unit-ball scale).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(QmrError::InvalidParameter {
                name: "r",
                message: format!("radius must be finite and nonnegative, got {r}"),
            });
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(QmrError::InvalidParameter {
                name: "theta",
                message: format!("polar angle must lie in [0, pi], got {theta}"),
            });
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(QmrError::InvalidParameter {
                name: "phi",
                message: format!("azimuth must lie in [0, 2 pi), got {phi}"),
            });
        }
        Ok(SphericalPoint { r, theta, phi })
    }

    pub fn to_cartesian(self) -> [f64; 3] {
        let (st, ct) = (self.theta.sin(), self.theta.cos());
        let (sp, cp) = (self.phi.sin(), self.phi.cos());
        [self.r * st * cp, self.r * st * sp, self.r * ct]
    }

    /// Spherical coordinates of a Cartesian point, with phi in [0, 2 pi).
    pub fn from_cartesian(x: [f64; 3]) -> Self {
        let r = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
        if r == 0.0 {
            return SphericalPoint { r: 0.0, theta: 0.0, phi: 0.0 };
        }
        let theta = (x[2] / r).clamp(-1.0, 1.0).acos();
        let mut phi = x[1].atan2(x[0]);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        SphericalPoint { r, theta, phi }
    }
}

/// The orthonormal spherical frame at (theta, phi): (r_hat, theta_hat, phi_hat).
pub fn frame(theta: f64, phi: f64) -> [[f64; 3]; 3] {
    let (st, ct) = (theta.sin(), theta.cos());
    let (sp, cp) = (phi.sin(), phi.cos());
    [
        [st * cp, st * sp, ct],
        [ct * cp, ct * sp, -st],
        [-sp, cp, 0.0],
    ]
}

/// Normalization constant C_n^m (depends on |m| only).
pub fn norm_constant(n: u32, m: i32) -> f64 {
    let am = m.unsigned_abs();
    // (n-|m|)!/(n+|m|)! as a log to stay finite at large n.
    let mut log_ratio = 0.0f64;
    for k in (n - am + 1)..=(n + am) {
        log_ratio -= (k as f64).ln();
    }
    (((2 * n + 1) as f64) / (4.0 * PI) * log_ratio.exp()).sqrt()
}

fn check_mode(n: u32, m: i32) -> Result<()> {
    if m.unsigned_abs() > n {
        return Err(QmrError::InvalidParameter {
            name: "m",
            message: format!("|m| = {} exceeds degree n = {n}", m.unsigned_abs()),
        });
    }
    Ok(())
}

/// Scalar spherical harmonic Y_n^m = C_n^m P_n^{|m|}(cos theta) e^{i m phi}.
pub fn sph_harmonic(n: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    check_mode(n, m)?;
    let (p, _) = assoc_legendre_pair(n, m.unsigned_abs(), theta)?;
    let e = (I * (m as f64) * phi).exp();
    Ok(norm_constant(n, m) * p * e)
}

/// The frame coefficients (A_theta, A_phi) of T_n^m.
#[derive(Debug, Clone, Copy)]
pub struct FrameCoeffs {
    pub a_theta: Complex64,
    pub a_phi: Complex64,
}

/// Threshold below which theta counts as a pole.
const POLE_EPS: f64 = 1e-13;

/// Frame coefficients of T_n^m; pole evaluation returns the analytic limit
/// (nonzero only for |m| = 1).
pub fn vsh_frame(n: u32, m: i32, theta: f64, phi: f64) -> Result<FrameCoeffs> {
    check_mode(n, m)?;
    if n == 0 {
        return Err(QmrError::InvalidParameter {
            name: "n",
            message: "T_n^m requires n >= 1".into(),
        });
    }
    let am = m.unsigned_abs();
    let c = norm_constant(n, m);
    let e = (I * (m as f64) * phi).exp();
    let s = theta.sin();
    if s.abs() < POLE_EPS {
        // P_n^1/sin -> +-n(n+1)/2 and dP_n^1/dtheta has the matching limit;
        // all other orders vanish at the poles.
        if am != 1 {
            return Ok(FrameCoeffs {
                a_theta: Complex64::new(0.0, 0.0),
                a_phi: Complex64::new(0.0, 0.0),
            });
        }
        let north = theta.cos() > 0.0;
        // P_n^1/sin = P_n'(cos theta) -> P_n'(+-1) = (+-1)^{n-1} n(n+1)/2.
        let lim = (n * (n + 1)) as f64 / 2.0;
        let p_over_sin = if north { lim } else { (-1.0f64).powi(n as i32 - 1) * lim };
        let (_, dp) = assoc_legendre_pair(n, 1, theta)?;
        return Ok(FrameCoeffs {
            a_theta: I * (m as f64) * c * p_over_sin * e,
            a_phi: -c * dp * e,
        });
    }
    let (p, dp) = assoc_legendre_pair(n, am, theta)?;
    Ok(FrameCoeffs {
        a_theta: I * (m as f64) * c * (p / s) * e,
        a_phi: -c * dp * e,
    })
}

/// T_n^m in Cartesian components.
pub fn vsh_t(n: u32, m: i32, theta: f64, phi: f64) -> Result<[Complex64; 3]> {
    let fc = vsh_frame(n, m, theta, phi)?;
    let fr = frame(theta, phi);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for a in 0..3 {
        out[a] = fc.a_theta * fr[1][a] + fc.a_phi * fr[2][a];
    }
    Ok(out)
}

/// Angular data needed by gradients and the angular constants: the frame
/// coefficients, their theta-derivatives, and the two phi-row combinations
///   g_theta_phi = i m A_theta / sin - cot A_phi,
///   g_phi_phi   = i m A_phi  / sin + cot A_theta.
#[derive(Debug, Clone, Copy)]
pub struct AngularDerivs {
    pub a_theta: Complex64,
    pub a_phi: Complex64,
    pub dth_a_theta: Complex64,
    pub dth_a_phi: Complex64,
    pub g_theta_phi: Complex64,
    pub g_phi_phi: Complex64,
}

impl AngularDerivs {
    /// Multiply every entry by a phase (the e^{i m phi} factor), letting a
    /// bundle computed at phi = 0 be reused across azimuth nodes.
    pub fn rotated(&self, phase: Complex64) -> AngularDerivs {
        AngularDerivs {
            a_theta: self.a_theta * phase,
            a_phi: self.a_phi * phase,
            dth_a_theta: self.dth_a_theta * phase,
            dth_a_phi: self.dth_a_phi * phase,
            g_theta_phi: self.g_theta_phi * phase,
            g_phi_phi: self.g_phi_phi * phase,
        }
    }
}

/// Evaluate the angular derivative bundle away from the poles.
pub fn angular_derivs(n: u32, m: i32, theta: f64, phi: f64) -> Result<AngularDerivs> {
    check_mode(n, m)?;
    let s = theta.sin();
    if s.abs() < POLE_EPS {
        return Err(QmrError::Domain(
            "angular derivatives are evaluated away from the poles".into(),
        ));
    }
    let am = m.unsigned_abs();
    let c = norm_constant(n, m);
    let e = (I * (m as f64) * phi).exp();
    let x = theta.cos();
    let (p, dp) = assoc_legendre_pair(n, am, theta)?;
    let d2p = assoc_legendre_d2theta(n, am, theta)?;
    let im = I * (m as f64);
    let a_theta = im * c * (p / s) * e;
    let a_phi = -c * dp * e;
    // d/dtheta (P/sin) = (P' sin - P cos)/sin^2
    let dth_a_theta = im * c * ((dp * s - p * x) / (s * s)) * e;
    let dth_a_phi = -c * d2p * e;
    let cot = x / s;
    Ok(AngularDerivs {
        a_theta,
        a_phi,
        dth_a_theta,
        dth_a_phi,
        g_theta_phi: im * a_theta / s - cot * a_phi,
        g_phi_phi: im * a_phi / s + cot * a_theta,
    })
}

/// Jacobian coefficients of u = f(k r) T in the spherical frame: entry
/// [i][j] multiplies e_i (x) e_j with (e_0, e_1, e_2) = (r_hat, theta_hat,
/// phi_hat). `f` and `fp` are the radial factor and its argument-derivative
/// mantissas (any common log scale is the caller's).
pub fn grad_frame_parts(
    k: Complex64,
    r: f64,
    f: Complex64,
    fp: Complex64,
    ang: &AngularDerivs,
) -> [[Complex64; 3]; 3] {
    let zero = Complex64::new(0.0, 0.0);
    [
        [zero, -f * ang.a_theta / r, -f * ang.a_phi / r],
        [k * fp * ang.a_theta, f / r * ang.dth_a_theta, f / r * ang.g_theta_phi],
        [k * fp * ang.a_phi, f / r * ang.dth_a_phi, f / r * ang.g_phi_phi],
    ]
}

/// Cartesian Jacobian M[i][j] = d(u_i)/d(x_j) of u = f_n(k r) T_n^m, as a
/// mantissa matrix and a common natural-log scale (value = mantissa * e^log).
///
/// In the spherical frame the nonzero entries are
///   (theta,r) = k f' A_theta－ (phi,r) = k f' A_phi       [derivative column]
///   (r,theta) = -f A_theta / r, (r,phi) = -f A_phi / r
///   (theta,theta) = f/r d A_theta/d theta                 [angular block]
///   (phi,theta)   = f/r d A_phi/d theta
///   (theta,phi)   = f/r (i m A_theta/sin - cot A_phi)
///   (phi,phi)     = f/r (i m A_phi/sin + cot A_theta)
/// with f = f_n(kr) and f' = f_{n-1}(kr) - ((n+1)/(kr)) f_n(kr).
pub fn grad_radial_vsh_scaled(
    kind: RadialKind,
    k: Complex64,
    n: u32,
    m: i32,
    point: SphericalPoint,
) -> Result<([[Complex64; 3]; 3], f64)> {
    check_mode(n, m)?;
    if n == 0 {
        return Err(QmrError::InvalidParameter {
            name: "n",
            message: "gradient of a T-field requires n >= 1".into(),
        });
    }
    if k.norm() == 0.0 {
        return Err(QmrError::InvalidParameter {
            name: "k",
            message: "wavenumber must be nonzero".into(),
        });
    }
    if point.r <= 0.0 {
        return Err(QmrError::Domain(
            "gradient evaluation requires r > 0".into(),
        ));
    }
    let z = k * point.r;
    let pair = radial_pair_scaled(kind, n, z)?;
    // Common scale: the log of f_n; f' is represented relative to it.
    let log = pair.f_n.log_scale;
    let f = pair.f_n.mantissa;
    let fp = pair.f_nm1.mantissa * (pair.f_nm1.log_scale - log).exp()
        - ((n + 1) as f64) / z * f;
    let ang = angular_derivs(n, m, point.theta, point.phi)?;
    let fr = frame(point.theta, point.phi);
    let zero = Complex64::new(0.0, 0.0);
    let coeff = grad_frame_parts(k, point.r, f, fp, &ang);
    let mut out = [[zero; 3]; 3];
    for (i, row) in coeff.iter().enumerate() {
        for (j, &cij) in row.iter().enumerate() {
            if cij == zero {
                continue;
            }
            for a in 0..3 {
                for b in 0..3 {
                    out[a][b] += cij * fr[i][a] * fr[j][b];
                }
            }
        }
    }
    Ok((out, log))
}

/// Plain (un-scaled) Cartesian Jacobian of f_n(k r) T_n^m.
pub fn grad_radial_vsh(
    kind: RadialKind,
    k: Complex64,
    n: u32,
    m: i32,
    point: SphericalPoint,
) -> Result<[[Complex64; 3]; 3]> {
    let (mut mat, log) = grad_radial_vsh_scaled(kind, k, n, m, point)?;
    let s = log.exp();
    for row in mat.iter_mut() {
        for e in row.iter_mut() {
            *e *= s;
        }
    }
    Ok(mat)
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
fn gauss_legendre(npts: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; npts];
    let mut weights = vec![0.0; npts];
    let nf = npts as f64;
    for i in 0..(npts + 1) / 2 {
        // Chebyshev-based initial guess.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let (mut p, mut dp) = (0.0, 0.0);
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_n'(x).
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=npts {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            p = p1;
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let _ = p;
        nodes[i] = -x;
        nodes[npts - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[npts - 1 - i] = w;
    }
    (nodes, weights)
}

/// Tensor quadrature on the sphere and on radial shells, sized so that
/// products of two modes up to `n_max` integrate exactly.
#[derive(Debug, Clone)]
pub struct SphereQuadrature {
    pub n_max: u32,
    /// (theta, weight) pairs; the weight includes the sin(theta) surface
    /// factor (Gauss-Legendre in cos theta).
    pub theta_nodes: Vec<(f64, f64)>,
    /// Uniform azimuth nodes, common weight 2 pi / N_phi.
    pub phi_nodes: Vec<f64>,
    pub phi_weight: f64,
    /// Gauss-Legendre points per radial shell.
    pub radial_points: usize,
}

/// Build the quadrature: N_theta = 2 n_max + 16 Gauss-Legendre nodes in
/// cos theta, N_phi = 4 n_max + 16 uniform azimuth nodes, 32 radial
/// Gauss-Legendre nodes per shell.
pub fn sphere_quadrature(n_max: u32) -> Result<SphereQuadrature> {
    if n_max < 1 {
        return Err(QmrError::InvalidParameter {
            name: "n_max",
            message: "quadrature requires n_max >= 1".into(),
        });
    }
    let n_theta = (2 * n_max + 16) as usize;
    let n_phi = (4 * n_max + 16) as usize;
    let (x, w) = gauss_legendre(n_theta);
    let theta_nodes = x
        .iter()
        .zip(w.iter())
        .map(|(&xi, &wi)| (xi.clamp(-1.0, 1.0).acos(), wi))
        .collect();
    let phi_nodes = (0..n_phi).map(|j| 2.0 * PI * (j as f64) / (n_phi as f64)).collect();
    Ok(SphereQuadrature {
        n_max,
        theta_nodes,
        phi_nodes,
        phi_weight: 2.0 * PI / (n_phi as f64),
        radial_points: 32,
    })
}

impl SphereQuadrature {
    /// Error if a caller asks for a mode above the design order.
    pub fn check_order(&self, n: u32) -> Result<()> {
        if n > self.n_max {
            return Err(QmrError::QuadratureResolution { built_for: self.n_max, requested: n });
        }
        Ok(())
    }

    /// Integral over the sphere (surface measure) of a real integrand.
    pub fn integrate_sphere<F: FnMut(f64, f64) -> f64>(&self, mut f: F) -> f64 {
        let mut acc = 0.0;
        for &(theta, wt) in &self.theta_nodes {
            let mut ring = 0.0;
            for &phi in &self.phi_nodes {
                ring += f(theta, phi);
            }
            acc += wt * ring * self.phi_weight;
        }
        acc
    }

    /// Integral over the sphere of a complex integrand.
    pub fn integrate_sphere_complex<F: FnMut(f64, f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(theta, wt) in &self.theta_nodes {
            let mut ring = Complex64::new(0.0, 0.0);
            for &phi in &self.phi_nodes {
                ring += f(theta, phi);
            }
            acc += wt * ring * self.phi_weight;
        }
        acc
    }

    /// Gauss-Legendre nodes/weights on the radial interval [lo, hi].
    pub fn radial_rule(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let (x, w) = gauss_legendre(self.radial_points);
        let c = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        x.iter().zip(w.iter()).map(|(&xi, &wi)| (mid + c * xi, c * wi)).collect()
    }
}

// ---------------------------------------------------------------------------
// Angular integral constants
// ---------------------------------------------------------------------------

/// The angular integral constants for the sectoral mode m = n:
/// c1 multiplies the radial-row contribution of the gradient norm, c2 the
/// angular block, c3 the angular part of the trace term; the sub-identity
/// integrals are reported alongside. All scaled by |f|^2.
#[derive(Debug, Clone, Copy)]
pub struct AngularConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub int_a_theta_sq: f64,
    pub int_a_phi_sq: f64,
    pub int_dth_a_theta_sq: f64,
    pub int_dth_a_phi_sq: f64,
}

/// Quadrature of the angular constants for mode (n, m = n).
pub fn angular_constants(n: u32, f_amplitude: f64) -> Result<AngularConstants> {
    if n < 1 {
        return Err(QmrError::InvalidParameter {
            name: "n",
            message: "angular constants require n >= 1".into(),
        });
    }
    let quad = sphere_quadrature(n)?;
    let m = n as i32;
    let f2 = f_amplitude * f_amplitude;
    let (mut c1, mut c2, mut c3) = (0.0, 0.0, 0.0);
    let (mut i_at, mut i_ap, mut i_dat, mut i_dap) = (0.0, 0.0, 0.0, 0.0);
    // phi enters only through |e^{i n phi}| = 1; integrate the theta profile
    // and multiply by 2 pi.
    for &(theta, wt) in &quad.theta_nodes {
        let ang = angular_derivs(n, m, theta, 0.0)?;
        let w = 2.0 * PI * wt;
        let at = ang.a_theta.norm_sqr();
        let ap = ang.a_phi.norm_sqr();
        let dat = ang.dth_a_theta.norm_sqr();
        let dap = ang.dth_a_phi.norm_sqr();
        let gtp = ang.g_theta_phi.norm_sqr();
        let gpp = ang.g_phi_phi.norm_sqr();
        // True angular trace: |g_tt|^2 + |g_pp|^2 + 2 Re(g_tp conj(g_pt)).
        let tr_ang = dat + gpp + 2.0 * (ang.g_theta_phi * ang.dth_a_phi.conj()).re;
        c1 += w * (at + ap);
        c2 += w * (dat + dap + gtp + gpp);
        c3 += w * (dat + dap + gtp + gpp + tr_ang);
        i_at += w * at;
        i_ap += w * ap;
        i_dat += w * dat;
        i_dap += w * dap;
    }
    Ok(AngularConstants {
        c1: f2 * c1,
        c2: f2 * c2,
        c3: f2 * c3,
        int_a_theta_sq: f2 * i_at,
        int_a_phi_sq: f2 * i_ap,
        int_dth_a_theta_sq: f2 * i_dat,
        int_dth_a_phi_sq: f2 * i_dap,
    })
}
