//! Spherical Bessel/Hankel functions and associated Legendre functions.
//!
//! The transmission problem lives deep in the sub-wavelength regime, so the
//! arguments of interest satisfy |z| << 1 while the order n can be large.
//! `j_n` therefore switches between the ascending power series (small |z|)
//! and upward recurrence from the closed forms j0, j1 (|z| at least
//! comparable to n, where the recurrence is stable). `h_n` always uses its
//! exact closed rational-exponential form, which is a finite sum and stable
//! at every supported order.
//!
//! Every function comes in a plain and a log-scaled flavour: at large n the
//! plain values under/overflow double precision (j_n(z) ~ z^n/(2n+1)!!,
//! h_n(z) ~ (2n-1)!!/z^(n+1)), and downstream norms need the scaled form.

use crate::error::{QmrError, Result};
use crate::scaled::LogComplex;
use num_complex::Complex64;

/// Which radial function family an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialKind {
    /// Spherical Bessel function of the first kind, j_n.
    BesselJ,
    /// Spherical Hankel function of the first kind, h_n.
    Hankel1,
}

/// Value and derivative (with respect to the argument) of a radial function.
#[derive(Debug, Clone, Copy)]
pub struct RadialPair {
    pub value: Complex64,
    pub derivative: Complex64,
}

/// Maximum supported order.
pub const MAX_ORDER: u32 = 200;
/// Maximum supported argument magnitude.
pub const MAX_ARG: f64 = 1.0e3;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Natural log of the double factorial k!! (k = -1 and 0 give 0).
pub fn ln_double_factorial(k: i64) -> f64 {
    let mut acc = 0.0f64;
    let mut j = k;
    while j > 1 {
        acc += (j as f64).ln();
        j -= 2;
    }
    acc
}

/// Double factorial k!! as a double (exact for small k, grows fast).
pub fn double_factorial(k: i64) -> f64 {
    ln_double_factorial(k).exp()
}

fn check_order_arg(n: u32, z: Complex64) -> Result<()> {
    if n > MAX_ORDER {
        return Err(QmrError::InvalidParameter {
            name: "n",
            message: format!("order {n} exceeds supported maximum {MAX_ORDER}"),
        });
    }
    if !z.re.is_finite() || !z.im.is_finite() || z.norm() > MAX_ARG {
        return Err(QmrError::InvalidParameter {
            name: "z",
            message: format!("argument {z} outside supported disk |z| <= {MAX_ARG}"),
        });
    }
    Ok(())
}

/// Spherical Bessel function j_n(z), log-scaled.
pub fn sph_bessel_j_scaled(n: u32, z: Complex64) -> Result<LogComplex> {
    check_order_arg(n, z)?;
    let az = z.norm();
    if az == 0.0 {
        return Ok(if n == 0 {
            LogComplex::from_complex(Complex64::new(1.0, 0.0))
        } else {
            LogComplex::ZERO
        });
    }
    if az < (n.max(1) as f64) / 4.0 {
        // Ascending series, prefactor z^n/(2n+1)!! peeled into the log scale.
        let phase = (z / az).powu(n);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        let zz = -0.5 * z * z;
        for k in 1..=80u32 {
            term *= zz / ((k as f64) * (2 * n + 2 * k + 1) as f64);
            sum += term;
            if term.norm() <= 1e-18 * sum.norm() {
                break;
            }
        }
        let log = (n as f64) * az.ln() - ln_double_factorial(2 * n as i64 + 1);
        Ok(LogComplex::new(phase * sum, log))
    } else {
        // Downward (Miller) recurrence normalized against the closed forms
        // j_0, j_1. Upward recurrence loses relative accuracy once n > |z|;
        // downward is stable for every order.
        let j0 = z.sin() / z;
        if n == 0 {
            return Ok(LogComplex::from_complex(j0));
        }
        let j1 = z.sin() / (z * z) - z.cos() / z;
        if n == 1 {
            return Ok(LogComplex::from_complex(j1));
        }
        let start = n + 16 + az.ceil() as u32;
        let mut f_hi = Complex64::new(0.0, 0.0);
        let mut f = Complex64::new(1e-280, 0.0);
        let mut rec_n = Complex64::new(0.0, 0.0);
        for k in (1..=start).rev() {
            let f_lo = ((2 * k + 1) as f64) / z * f - f_hi;
            f_hi = f;
            f = f_lo;
            if k - 1 == n {
                rec_n = f;
            }
            if f.norm() > 1e250 {
                let s = 1e-250;
                f *= s;
                f_hi *= s;
                rec_n *= s;
            }
        }
        // f = f_0, f_hi = f_1 after the loop. Bring the chain to O(1)
        // magnitude first: complex division by a subnormal-scale value
        // underflows its |denominator|^2.
        let m = f.norm().max(f_hi.norm());
        f /= m;
        f_hi /= m;
        rec_n /= m;
        // Normalize with whichever reference has the larger chain magnitude.
        let ratio = if f.norm() >= f_hi.norm() { j0 / f } else { j1 / f_hi };
        Ok(LogComplex::from_complex(rec_n * ratio))
    }
}

/// Spherical Bessel function j_n(z).
pub fn sph_bessel_j(n: u32, z: Complex64) -> Result<Complex64> {
    Ok(sph_bessel_j_scaled(n, z)?.value())
}

/// Spherical Hankel function of the first kind h_n(z), log-scaled.
///
/// Uses the exact closed form
///   h_n(z) = -i (2n-1)!! e^{iz} / z^{n+1} * sum_{j=0}^{n} d_j (-2iz)^j,
/// with d_0 = 1 and d_j = d_{j-1} * (n-j+1) / (j (2n-j+1)); the magnitude
/// factor (2n-1)!!/|z|^{n+1} and the e^{iz} modulus live in the log scale.
pub fn sph_hankel1_scaled(n: u32, z: Complex64) -> Result<LogComplex> {
    check_order_arg(n, z)?;
    let az = z.norm();
    if az == 0.0 {
        return Err(QmrError::Domain("h_n(z) is singular at z = 0".into()));
    }
    let mut d = 1.0f64;
    let mut pow = Complex64::new(1.0, 0.0);
    let step = Complex64::new(0.0, -2.0) * z;
    let mut sum = Complex64::new(1.0, 0.0);
    for j in 1..=n {
        d *= ((n - j + 1) as f64) / ((j as f64) * ((2 * n - j + 1) as f64));
        pow *= step;
        sum += d * pow;
    }
    let phase_unit = (z.conj() / az).powu(n + 1); // (|z|/z)^(n+1) as a unit factor
    let mantissa = -I * Complex64::new(0.0, z.re).exp() * phase_unit * sum;
    let log = ln_double_factorial(2 * n as i64 - 1) - ((n + 1) as f64) * az.ln() - z.im;
    Ok(LogComplex::new(mantissa, log))
}

/// Spherical Hankel function of the first kind h_n(z).
pub fn sph_hankel1(n: u32, z: Complex64) -> Result<Complex64> {
    Ok(sph_hankel1_scaled(n, z)?.value())
}

fn eval_scaled(kind: RadialKind, n: u32, z: Complex64) -> Result<LogComplex> {
    match kind {
        RadialKind::BesselJ => sph_bessel_j_scaled(n, z),
        RadialKind::Hankel1 => sph_hankel1_scaled(n, z),
    }
}

/// Value and derivative of j_n or h_n via f' = f_{n-1} - ((n+1)/z) f_n
/// (and f_0' = -f_1).
pub fn radial_pair(kind: RadialKind, n: u32, z: Complex64) -> Result<RadialPair> {
    if kind == RadialKind::BesselJ && z.norm() == 0.0 {
        // j_n and its derivative at the origin: j_0(0) = 1, j_1'(0) = 1/3,
        // everything else vanishes.
        let value = if n == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        let derivative =
            if n == 1 { Complex64::new(1.0 / 3.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        return Ok(RadialPair { value, derivative });
    }
    if n == 0 {
        let value = eval_scaled(kind, 0, z)?.value();
        let f1 = eval_scaled(kind, 1, z)?.value();
        return Ok(RadialPair { value, derivative: -f1 });
    }
    let pair = radial_pair_scaled(kind, n, z)?;
    let value = pair.f_n.value();
    let derivative = pair.f_nm1.value() - ((n + 1) as f64) / z * value;
    Ok(RadialPair { value, derivative })
}

/// (f_n, f_{n-1}) on explicit log scales, for gradient assembly at large n
/// where the plain values underflow. Requires n >= 1.
#[derive(Debug, Clone, Copy)]
pub struct ScaledRadialPair {
    pub f_n: LogComplex,
    pub f_nm1: LogComplex,
}

/// Stable evaluation of the traction combination z f_n'(z) - f_n(z) on a
/// log scale. For the Bessel branch at small argument the two leading
/// orders cancel (exactly so at n = 1), so the combination is summed
/// termwise from the ascending series instead of formed by subtraction.
pub fn radial_traction_scaled(kind: RadialKind, n: u32, z: Complex64) -> Result<LogComplex> {
    if n == 0 {
        return Err(QmrError::InvalidParameter {
            name: "n",
            message: "traction combination requires n >= 1".into(),
        });
    }
    check_order_arg(n, z)?;
    let az = z.norm();
    if matches!(kind, RadialKind::BesselJ) && az < (n.max(1) as f64) / 4.0 {
        if az == 0.0 {
            return Ok(LogComplex::ZERO);
        }
        // z j_n' - j_n = z^n/(2n+1)!! * sum_k (n + 2k - 1) t_k with the
        // same term recurrence as the j_n series.
        let phase = (z / az).powu(n);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term * ((n as f64) - 1.0);
        let zz = -0.5 * z * z;
        for k in 1..=80u32 {
            term *= zz / ((k as f64) * (2 * n + 2 * k + 1) as f64);
            let contrib = term * ((n + 2 * k) as f64 - 1.0);
            sum += contrib;
            if contrib.norm() <= 1e-18 * sum.norm() {
                break;
            }
        }
        let log = (n as f64) * az.ln() - ln_double_factorial(2 * n as i64 + 1);
        return Ok(LogComplex::new(phase * sum, log).normalized());
    }
    // z f_{n-1} - (n + 2) f_n from the derivative recurrence; away from the
    // small-z Bessel regime the subtraction is well conditioned.
    let pair = radial_pair_scaled(kind, n, z)?;
    Ok(pair
        .f_nm1
        .mul_complex(z)
        .sub(pair.f_n.mul_complex(Complex64::new((n + 2) as f64, 0.0)))
        .normalized())
}

pub fn radial_pair_scaled(kind: RadialKind, n: u32, z: Complex64) -> Result<ScaledRadialPair> {
    if n == 0 {
        return Err(QmrError::InvalidParameter {
            name: "n",
            message: "scaled radial pair requires n >= 1".into(),
        });
    }
    Ok(ScaledRadialPair {
        f_n: eval_scaled(kind, n, z)?,
        f_nm1: eval_scaled(kind, n - 1, z)?,
    })
}

/// Truncated small-argument expansions, used only as independent oracles.
///
/// `order` 2 keeps terms through z^2 relative to the leading one; 4 keeps
/// terms through z^4.
pub fn small_arg_series(kind: RadialKind, n: u32, z: Complex64, order: u32) -> Result<Complex64> {
    if order != 2 && order != 4 {
        return Err(QmrError::InvalidParameter {
            name: "order",
            message: format!("supported truncation orders are 2 and 4, got {order}"),
        });
    }
    if z.norm() >= 0.5 {
        return Err(QmrError::Domain("small-argument series requires |z| < 0.5".into()));
    }
    check_order_arg(n, z)?;
    let one = Complex64::new(1.0, 0.0);
    let z2 = z * z;
    match kind {
        RadialKind::BesselJ => {
            // j_n(z) = z^n/(2n+1)!! (1 - z^2/(2(2n+3)) + z^4/(8(2n+3)(2n+5)) - ...)
            if z.norm() == 0.0 {
                return Ok(if n == 0 { one } else { Complex64::new(0.0, 0.0) });
            }
            let mut bracket = one - z2 / (2.0 * (2 * n + 3) as f64);
            if order == 4 {
                bracket += z2 * z2 / (8.0 * ((2 * n + 3) * (2 * n + 5)) as f64);
            }
            Ok(z.powu(n) / double_factorial(2 * n as i64 + 1) * bracket)
        }
        RadialKind::Hankel1 => {
            if z.norm() == 0.0 {
                return Err(QmrError::Domain("h_n(z) is singular at z = 0".into()));
            }
            match n {
                // h_0(z) = e^{iz}/(iz): expand the exponential.
                0 => {
                    let mut bracket = one + I * z - z2 / 2.0;
                    if order == 4 {
                        bracket += -I * z * z2 / 6.0 + z2 * z2 / 24.0;
                    }
                    Ok(bracket / (I * z))
                }
                // h_1(z) = 1/(iz^2) (1 + z^2/2 + i z^3/3 - z^4/8 + ...)
                1 => {
                    let mut bracket = one + z2 / 2.0;
                    if order == 4 {
                        bracket += I * z * z2 / 3.0 - z2 * z2 / 8.0;
                    }
                    Ok(bracket / (I * z * z))
                }
                // h_n(z) = (2n-1)!!/(i z^{n+1}) (1 + z^2/(2(2n-1)) + z^4/(8(2n-1)(2n-3)) + ...)
                _ => {
                    let mut bracket = one + z2 / (2.0 * (2 * n as i64 - 1) as f64);
                    if order == 4 {
                        bracket +=
                            z2 * z2 / (8.0 * ((2 * n as i64 - 1) * (2 * n as i64 - 3)) as f64);
                    }
                    Ok(double_factorial(2 * n as i64 - 1) / (I * z.powu(n + 1)) * bracket)
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Associated Legendre functions (Ferrers, no Condon-Shortley phase)
// ---------------------------------------------------------------------------

/// P_n^m(cos theta) in the convention P_n^m(x) = (1-x^2)^{m/2} d^m/dx^m P_n(x)
/// (no Condon-Shortley phase). Returns 0 for m > n (useful in recurrences).
pub fn assoc_legendre(n: u32, m: u32, x: f64) -> f64 {
    assoc_legendre_xs(n, m, x, (1.0 - x * x).max(0.0).sqrt())
}

/// Same, with sin(theta) supplied by the caller; near the poles the direct
/// sine is far more accurate than sqrt(1 - cos^2).
fn assoc_legendre_xs(n: u32, m: u32, x: f64, s: f64) -> f64 {
    if m > n {
        return 0.0;
    }
    // P_m^m = (2m-1)!! s^m
    let mut pmm = 1.0f64;
    for k in 1..=m {
        pmm *= (2 * k - 1) as f64 * s;
    }
    if n == m {
        return pmm;
    }
    // P_{m+1}^m = (2m+1) x P_m^m
    let mut prev = pmm;
    let mut cur = (2 * m + 1) as f64 * x * pmm;
    for k in (m + 2)..=n {
        let next = ((2 * k - 1) as f64 * x * cur - (k + m - 1) as f64 * prev) / (k - m) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// Pole threshold below which sin(theta) is treated as zero.
const POLE_EPS: f64 = 1e-13;

/// (P_n^m(cos theta), d/dtheta P_n^m(cos theta)).
///
/// The derivative uses the stable three-term relation
///   d/dtheta P_n^m(cos t) = (n cos t P_n^m - (n+m) P_{n-1}^m) / sin t,
/// with the analytic limits substituted at the poles.
pub fn assoc_legendre_pair(n: u32, m: u32, theta: f64) -> Result<(f64, f64)> {
    if m > n {
        return Err(QmrError::InvalidParameter {
            name: "m",
            message: format!("order m={m} exceeds degree n={n}"),
        });
    }
    let x = theta.cos();
    let s = theta.sin();
    if s.abs() < POLE_EPS {
        let north = x > 0.0;
        let p = if m == 0 {
            if north {
                1.0
            } else {
                (-1.0f64).powi(n as i32)
            }
        } else {
            0.0
        };
        let dp = match m {
            // d/dtheta P_n(cos t) = -sin t P_n'(cos t) -> 0 at the poles.
            0 => 0.0,
            // P_n^1 = sin t P_n'(cos t); P_n'(+-1) = (+-1)^{n-1} n(n+1)/2.
            1 => {
                let pn1 = (n * (n + 1)) as f64 / 2.0;
                if north {
                    pn1
                } else {
                    -(-1.0f64).powi(n as i32 - 1) * pn1
                }
            }
            _ => 0.0,
        };
        return Ok((p, dp));
    }
    let p = assoc_legendre_xs(n, m, x, s.abs());
    let pm1 = assoc_legendre_xs(n.saturating_sub(1), m, x, s.abs());
    let dp = ((n as f64) * x * p - ((n + m) as f64) * pm1) / s;
    Ok((p, dp))
}

/// Second theta-derivative of P_n^m(cos theta) away from the poles, from the
/// associated Legendre ODE:
///   P'' = -cot(t) P' - (n(n+1) - m^2/sin^2 t) P.
pub fn assoc_legendre_d2theta(n: u32, m: u32, theta: f64) -> Result<f64> {
    let s = theta.sin();
    if s.abs() < POLE_EPS {
        return Err(QmrError::Domain(
            "second theta-derivative evaluated at a pole".into(),
        ));
    }
    let (p, dp) = assoc_legendre_pair(n, m, theta)?;
    let x = theta.cos();
    Ok(-(x / s) * dp - ((n * (n + 1)) as f64 - (m * m) as f64 / (s * s)) * p)
}
