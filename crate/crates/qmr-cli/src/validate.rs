//! The `validate` workflow: a quick cross-module invariant battery.
//!
//! Each suite re-checks a closed-form identity against an independent
//! numerical path, so a regression in any kernel shows up as a named
//! FAIL line rather than silently skewed CSV output.

use qmr_core::Complex as Complex64;
use qmr_core::analysis::{closed_form_norm_oracles, shell_norm_sq, shell_norm_sq_fast, ShellSpec};
use qmr_core::design::design_bounds;
use qmr_core::harmonics::{sphere_quadrature, vsh_t};
use qmr_core::media::{derive_parameters, BackgroundMedium, ContrastProfile};
use qmr_core::solver::{solve_mode_exact, transmission_residual, FieldRegion, IncidentSpec};
use qmr_core::specfun::{radial_pair, RadialKind};

type Check = (&'static str, fn() -> Result<(), String>);

fn err(msg: String) -> Result<(), String> {
    Err(msg)
}

fn wronskian_and_recurrence() -> Result<(), String> {
    for n in 1..=20u32 {
        for &x in &[0.05f64, 0.3, 1.0, 4.0, 17.5] {
            let z = Complex64::new(x, 0.0);
            let j = radial_pair(RadialKind::BesselJ, n, z).map_err(|e| e.to_string())?;
            let h = radial_pair(RadialKind::Hankel1, n, z).map_err(|e| e.to_string())?;
            // Wronskian j_n y_n' - j_n' y_n = 1/z^2, expressed through
            // h = j + i y.
            let cross = (j.value * h.derivative - j.derivative * h.value)
                * Complex64::new(0.0, -1.0);
            let target = 1.0 / (x * x);
            if (cross.re / target - 1.0).abs() > 1e-10 || (cross.im / target).abs() > 1e-10 {
                return err(format!("cross-product identity off at n={n}, x={x}: {cross}"));
            }
        }
    }
    Ok(())
}

fn harmonic_normalization() -> Result<(), String> {
    let quad = sphere_quadrature(6).map_err(|e| e.to_string())?;
    for (n, m) in [(1u32, 0i32), (3, 2), (6, -6)] {
        let norm = quad.integrate_sphere(|theta, phi| {
            vsh_t(n, m, theta, phi)
                .map(|t| t.iter().map(|c| c.norm_sqr()).sum::<f64>())
                .unwrap_or(f64::NAN)
        });
        let target = (n * (n + 1)) as f64;
        if (norm / target - 1.0).abs() > 1e-10 {
            return err(format!("||T_{n}^{m}||^2 = {norm}, expected {target}"));
        }
    }
    Ok(())
}

fn solver_residuals() -> Result<(), String> {
    let bg = BackgroundMedium::new(1.0, 1.0, 1.0).map_err(|e| e.to_string())?;
    let contrast = ContrastProfile::new(0.05, 0.5).map_err(|e| e.to_string())?;
    let p = derive_parameters(bg, contrast, 0.01).map_err(|e| e.to_string())?;
    let spec = IncidentSpec::sectoral(3, Complex64::new(1.0, 0.0)).map_err(|e| e.to_string())?;
    let coeffs = solve_mode_exact(&spec, &p).map_err(|e| e.to_string())?;
    let (trace, traction) = transmission_residual(&spec, &p, &coeffs).map_err(|e| e.to_string())?;
    if trace > 1e-11 || traction > 1e-11 {
        return err(format!("transmission residuals too large: {trace:e}, {traction:e}"));
    }
    Ok(())
}

fn shell_norm_paths_agree() -> Result<(), String> {
    let bg = BackgroundMedium::new(1.3, 0.8, 1.1).map_err(|e| e.to_string())?;
    let contrast = ContrastProfile::new(0.1, 0.4).map_err(|e| e.to_string())?;
    let p = derive_parameters(bg, contrast, 0.02).map_err(|e| e.to_string())?;
    let spec = IncidentSpec::uniform(2, Complex64::new(1.0, 0.0)).map_err(|e| e.to_string())?;
    let coeffs = solve_mode_exact(&spec, &p).map_err(|e| e.to_string())?;
    let quad = sphere_quadrature(2).map_err(|e| e.to_string())?;
    for (region, lo, hi) in [
        (FieldRegion::Interior, 0.9, 1.0),
        (FieldRegion::Scattered, 1.0, 1.2),
        (FieldRegion::Incident, 0.0, 1.0),
    ] {
        let slow = shell_norm_sq(region, &spec, &p, &coeffs, lo, hi, &quad)
            .map_err(|e| e.to_string())?;
        let fast = shell_norm_sq_fast(region, &spec, &p, &coeffs, lo, hi, &quad)
            .map_err(|e| e.to_string())?;
        let gap = slow.ratio(fast) - 1.0;
        if gap.abs() > 1e-10 {
            return err(format!("tensor/fast shell norms disagree ({region:?}): gap {gap:e}"));
        }
    }
    Ok(())
}

fn norm_oracles() -> Result<(), String> {
    let bg = BackgroundMedium::new(1.0, 1.0, 1.0).map_err(|e| e.to_string())?;
    let contrast = ContrastProfile::new(0.1, 0.5).map_err(|e| e.to_string())?;
    let omega = 0.01;
    let p = derive_parameters(bg, contrast, omega).map_err(|e| e.to_string())?;
    let spec = IncidentSpec::sectoral(3, Complex64::new(1.0, 0.0)).map_err(|e| e.to_string())?;
    let coeffs = solve_mode_exact(&spec, &p).map_err(|e| e.to_string())?;
    let shells = ShellSpec::new(0.9, 1.2, 2.0).map_err(|e| e.to_string())?;
    let quad = sphere_quadrature(3).map_err(|e| e.to_string())?;
    let oracle = closed_form_norm_oracles(&spec, &p, &shells);
    let interior = shell_norm_sq_fast(FieldRegion::Interior, &spec, &p, &coeffs, 0.0, 0.9, &quad)
        .map_err(|e| e.to_string())?;
    let gap = interior.ratio(oracle.interior_norm_sq(0.9)) - 1.0;
    if gap.abs() > 50.0 * omega * omega {
        return err(format!("interior norm oracle off by relative {gap:e}"));
    }
    Ok(())
}

fn design_triples() -> Result<(), String> {
    let b = design_bounds(1e-3, 0.5, 2.0).map_err(|e| e.to_string())?;
    if (b.n1, b.n2) != (4, 6) || (b.beta - 0.154253).abs() > 1e-6 {
        return err(format!("design triple drifted: n1={}, n2={}, beta={}", b.n1, b.n2, b.beta));
    }
    let b = design_bounds(1e-2, 0.9, 1.2).map_err(|e| e.to_string())?;
    if (b.n1, b.n2) != (21, 14) {
        return err(format!("design triple drifted: n1={}, n2={}", b.n1, b.n2));
    }
    Ok(())
}

const CHECKS: &[Check] = &[
    ("specfun: cross-product and recurrence identities", wronskian_and_recurrence),
    ("harmonics: tangential norm n(n+1)", harmonic_normalization),
    ("solver: transmission residuals at rounding level", solver_residuals),
    ("analysis: tensor and separated shell norms agree", shell_norm_paths_agree),
    ("analysis: closed-form norm oracle", norm_oracles),
    ("design: hand-derived index triples", design_triples),
];

/// Run the battery, printing one line per suite. Returns true iff all pass.
pub fn run_all() -> bool {
    let mut ok = true;
    for (name, check) in CHECKS {
        match check() {
            Ok(()) => println!("PASS  {name}"),
            Err(msg) => {
                ok = false;
                println!("FAIL  {name}: {msg}");
            }
        }
    }
    ok
}
