//! Shell norms against closed-form oracles, localization / resonance /
//! stress reports, and invariance properties.

use num_complex::Complex64;
use qmr_core::analysis::{
    closed_form_norm_oracles, localization_ratios, resonance_ratios, shell_gradient_integrals,
    shell_norm_sq, shell_norm_sq_fast, stress_energies, ShellSpec,
};
use qmr_core::design::regime_check;
use qmr_core::harmonics::sphere_quadrature;
use qmr_core::media::{derive_parameters, BackgroundMedium, ContrastProfile, DerivedParams};
use qmr_core::solver::{solve_mode_exact, FieldRegion, IncidentSpec};
use std::f64::consts::PI;

fn params(delta: f64, omega: f64) -> DerivedParams {
    let bg = BackgroundMedium::UNIT;
    let contrast = ContrastProfile::new(delta, 0.5).unwrap();
    derive_parameters(bg, contrast, omega).unwrap()
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

#[test]
fn incident_norm_leading_constant() {
    // |u^i|^2 over the unit ball: leading term
    // n(n+1) |f|^2 rho^n w^{2n} / ([(2n+1)!!]^2 (2n+3) mu^n);
    // n=2, f=1, w=0.01 -> 6e-8 / 1575 = 3.80952e-11.
    let omega = 0.01;
    let p = params(0.1, omega);
    let spec = IncidentSpec::sectoral(2, one()).unwrap();
    let coeffs = solve_mode_exact(&spec, &p).unwrap();
    let quad = sphere_quadrature(2).unwrap();
    let norm = shell_norm_sq_fast(FieldRegion::Incident, &spec, &p, &coeffs, 0.0, 1.0, &quad)
        .unwrap()
        .value();
    let lead = 6.0e-8 / 1575.0;
    assert!((norm / lead - 1.0).abs() < 50.0 * omega * omega, "{norm} vs {lead}");
    let oracle = closed_form_norm_oracles(&spec, &p, &shells_default());
    assert!((oracle.incident.value() / lead - 1.0).abs() < 1e-12);
}

fn shells_default() -> ShellSpec {
    ShellSpec::new(0.9, 1.2, 2.0).unwrap()
}

#[test]
fn tensor_and_fast_paths_agree() {
    let p = params(0.1, 0.01);
    let quad = sphere_quadrature(2).unwrap();
    let spec = IncidentSpec::uniform(2, Complex64::new(0.6, -0.2)).unwrap();
    let coeffs = solve_mode_exact(&spec, &p).unwrap();
    for &(region, lo, hi) in &[
        (FieldRegion::TotalInterior, 0.3, 1.0),
        (FieldRegion::Scattered, 1.0, 1.7),
        (FieldRegion::Incident, 0.0, 1.0),
    ] {
        let slow = shell_norm_sq(region, &spec, &p, &coeffs, lo, hi, &quad).unwrap();
        let fast = shell_norm_sq_fast(region, &spec, &p, &coeffs, lo, hi, &quad).unwrap();
        let gap = slow.sub(fast).ratio(fast).abs();
        assert!(gap <= 1e-10, "{region:?}: relative gap {gap}");
    }
}

#[test]
fn shell_domain_checks() {
    let p = params(0.1, 0.01);
    let quad = sphere_quadrature(2).unwrap();
    let spec = IncidentSpec::sectoral(2, one()).unwrap();
    let coeffs = solve_mode_exact(&spec, &p).unwrap();
    let zero =
        shell_norm_sq(FieldRegion::Incident, &spec, &p, &coeffs, 0.5, 0.5, &quad).unwrap();
    assert!(zero.is_zero());
    // Interior shells must stay inside the ball, exterior ones outside.
    assert!(
        shell_norm_sq(FieldRegion::TotalInterior, &spec, &p, &coeffs, 0.5, 1.5, &quad).is_err()
    );
    assert!(shell_norm_sq(FieldRegion::Scattered, &spec, &p, &coeffs, 0.5, 1.5, &quad).is_err());
    assert!(ShellSpec::new(1.1, 1.2, 2.0).is_err());
    assert!(ShellSpec::new(0.9, 2.5, 2.0).is_err());
}

#[test]
fn norm_oracles_match_quadrature() {
    // Leading K and G constants within 50 w^2 of the exact-field quadrature.
    let omega = 0.01;
    let shells = shells_default();
    let quad = sphere_quadrature(8).unwrap();
    for &n in &[2u32, 3, 5, 8] {
        let p = params(0.1, omega);
        let spec = IncidentSpec::sectoral(n, one()).unwrap();
        let coeffs = solve_mode_exact(&spec, &p).unwrap();
        let oracle = closed_form_norm_oracles(&spec, &p, &shells);
        let interior = shell_norm_sq_fast(
            FieldRegion::TotalInterior,
            &spec,
            &p,
            &coeffs,
            0.0,
            shells.gamma1,
            &quad,
        )
        .unwrap();
        let rel = interior
            .sub(oracle.interior_norm_sq(shells.gamma1))
            .ratio(interior)
            .abs();
        assert!(rel < 50.0 * omega * omega, "n {n}: interior oracle gap {rel}");
        let exterior = shell_norm_sq_fast(
            FieldRegion::Scattered,
            &spec,
            &p,
            &coeffs,
            shells.gamma2,
            shells.r_outer,
            &quad,
        )
        .unwrap();
        let rel = exterior
            .sub(oracle.exterior_norm_sq(shells.gamma2, shells.r_outer))
            .ratio(exterior)
            .abs();
        assert!(rel < 50.0 * omega * omega, "n {n}: exterior oracle gap {rel}");
    }
}

#[test]
fn correction_constants_are_small() {
    // K'/K carries the rho w^2-type correction: relative size <= 1e-3 at
    // w = 1e-2.
    let omega = 0.01;
    let p = params(0.1, omega);
    let spec = IncidentSpec::sectoral(3, one()).unwrap();
    let oracle = closed_form_norm_oracles(&spec, &p, &shells_default());
    let ratio = oracle.k_prime.ratio(oracle.k) * omega * omega;
    assert!(ratio <= 1e-3, "correction/main = {ratio}");
    let ratio = oracle.g_prime.ratio(oracle.g) * omega * omega;
    assert!(ratio <= 1e-2, "exterior correction/main = {ratio}");
}

#[test]
fn degenerate_exterior_constant_at_n_1() {
    let p = params(0.1, 0.01);
    let spec = IncidentSpec::sectoral(1, one()).unwrap();
    let oracle = closed_form_norm_oracles(&spec, &p, &shells_default());
    assert!(oracle.degenerate_g);
    assert!(oracle.g.is_zero());
}

#[test]
fn localization_reproduces_leading_ratios() {
    // delta=0.01, w=1e-2, eps=0.01, gamma1=0.9, gamma2=1.2, R=2, n=21:
    // interior ratio ~ 0.9^45 = 8.728e-3, exterior ratio ~ 7.207e-3.
    let p = params(0.01, 0.01);
    let shells = shells_default();
    let quad = sphere_quadrature(21).unwrap();
    let spec = IncidentSpec::sectoral(21, one()).unwrap();
    let coeffs = solve_mode_exact(&spec, &p).unwrap();
    let report = localization_ratios(&spec, &p, &coeffs, &shells, 0.01, &quad).unwrap();
    let lead_int = 0.9f64.powi(45);
    assert!((lead_int - 8.728e-3).abs() < 5e-7);
    assert!((report.interior_ratio / lead_int - 1.0).abs() < 1e-3);
    let e = 2.0 * 21.0 - 1.0;
    let lead_ext = (1.2f64.powf(-e) - 2.0f64.powf(-e)) / (1.0 - 2.0f64.powf(-e));
    assert!((report.exterior_ratio / lead_ext - 1.0).abs() < 1e-3);
    assert!(report.pass_interior && report.pass_exterior);
    assert!((report.threshold - 0.01 * (1.0 + 1e-3)).abs() < 1e-15);
    // Ratios are genuine subregion fractions.
    assert!(report.interior_ratio > 0.0 && report.interior_ratio < 1.0);
    assert!(report.exterior_ratio > 0.0 && report.exterior_ratio < 1.0);
}

#[test]
fn interior_ratio_tends_to_one() {
    let p = params(0.1, 0.01);
    let shells = ShellSpec::new(0.99999, 1.2, 2.0).unwrap();
    let quad = sphere_quadrature(3).unwrap();
    let spec = IncidentSpec::sectoral(3, one()).unwrap();
    let coeffs = solve_mode_exact(&spec, &p).unwrap();
    let report = localization_ratios(&spec, &p, &coeffs, &shells, 0.5, &quad).unwrap();
    assert!(report.interior_ratio > 0.999);
}

#[test]
fn localization_ratios_decrease_in_n() {
    let p = params(0.1, 0.01);
    let shells = shells_default();
    let quad = sphere_quadrature(25).unwrap();
    let mut last = (f64::INFINITY, f64::INFINITY);
    for n in 5..=25u32 {
        let spec = IncidentSpec::sectoral(n, one()).unwrap();
        let coeffs = solve_mode_exact(&spec, &p).unwrap();
        let r = localization_ratios(&spec, &p, &coeffs, &shells, 0.01, &quad).unwrap();
        assert!(r.interior_ratio < last.0, "n {n}: interior not decreasing");
        assert!(r.exterior_ratio < last.1, "n {n}: exterior not decreasing");
        last = (r.interior_ratio, r.exterior_ratio);
    }
}

#[test]
fn resonance_exceeds_proof_bounds() {
    // n=13, delta=0.28, eps=0.05, gamma1=0.9, gamma2=1.2, w=1e-2:
    // hypotheses hold and the squared gradient ratios clear the bounds.
    let p = params(0.28, 0.01);
    let shells = shells_default();
    let flags = regime_check(13, 0.28, 0.05, 0.9, 1.2).unwrap();
    assert!(flags.thm41);
    let quad = sphere_quadrature(13).unwrap();
    let spec = IncidentSpec::sectoral(13, one()).unwrap();
    let coeffs = solve_mode_exact(&spec, &p).unwrap();
    let report = resonance_ratios(&spec, &p, &coeffs, &shells, &quad).unwrap();
    assert!((report.bound_interior - 0.26359).abs() < 1e-5);
    assert!((report.bound_exterior - 0.66413).abs() < 1e-5);
    assert!(report.interior_exceeds, "interior ratio {}", report.interior_sq_ratio);
    assert!(report.exterior_exceeds, "exterior ratio {}", report.exterior_sq_ratio);
    // Intermediate closed form for the interior ratio (a lower estimate;
    // the quadrature is authoritative and exceeds it):
    // n(2n+1)(2n+3)(2n^2-2n+1) d^2 (1-g1^{2n+1}) / (4 pi (n+1) denom^2).
    let (nf, d, g1): (f64, f64, f64) = (13.0, 0.28, 0.9);
    let denom = d * (nf + 2.0) + nf - 1.0;
    let lead = nf * (2.0 * nf + 1.0) * (2.0 * nf + 3.0) * (2.0 * nf * nf - 2.0 * nf + 1.0)
        * d * d * (1.0 - g1.powi(27))
        / (4.0 * PI * (nf + 1.0) * denom * denom);
    assert!(lead >= 0.26359);
    assert!(report.interior_sq_ratio >= lead);
}

#[test]
fn resonance_requires_sectoral_mode() {
    let p = params(0.28, 0.01);
    let quad = sphere_quadrature(3).unwrap();
    let spec = IncidentSpec::uniform(3, one()).unwrap();
    let coeffs = solve_mode_exact(&spec, &p).unwrap();
    assert!(resonance_ratios(&spec, &p, &coeffs, &shells_default(), &quad).is_err());
    assert!(stress_energies(&spec, &p, &coeffs, &shells_default(), &quad).is_err());
}

#[test]
fn stress_exceeds_proof_bounds() {
    let p = params(0.28, 0.01);
    let shells = shells_default();
    let quad = sphere_quadrature(13).unwrap();
    let spec = IncidentSpec::sectoral(13, one()).unwrap();
    let coeffs = solve_mode_exact(&spec, &p).unwrap();
    let report = stress_energies(&spec, &p, &coeffs, &shells, &quad).unwrap();
    assert!((report.bound_interior - 2.23147).abs() < 1e-4);
    assert!((report.bound_exterior - 0.66413).abs() < 1e-5);
    assert!(report.e_interior >= 0.0 && report.e_exterior >= 0.0);
    assert!(report.interior_exceeds, "E(u) ratio {}", report.e_interior);
    assert!(report.exterior_exceeds, "E(u^s) ratio {}", report.e_exterior);
    assert!(report.consistency_gap <= 1e-8, "gap {}", report.consistency_gap);
}

#[test]
fn reports_are_amplitude_invariant() {
    let p = params(0.28, 0.01);
    let shells = shells_default();
    let quad = sphere_quadrature(5).unwrap();
    let run = |f: Complex64| {
        let spec = IncidentSpec::sectoral(5, f).unwrap();
        let coeffs = solve_mode_exact(&spec, &p).unwrap();
        let loc = localization_ratios(&spec, &p, &coeffs, &shells, 0.05, &quad).unwrap();
        let res = resonance_ratios(&spec, &p, &coeffs, &shells, &quad).unwrap();
        let st = stress_energies(&spec, &p, &coeffs, &shells, &quad).unwrap();
        [
            loc.interior_ratio,
            loc.exterior_ratio,
            res.interior_sq_ratio,
            res.exterior_sq_ratio,
            st.e_interior,
            st.e_exterior,
        ]
    };
    let base = run(one());
    let scaled = run(Complex64::new(7.0, -3.0));
    for (a, b) in base.iter().zip(scaled.iter()) {
        assert!((a / b - 1.0).abs() <= 1e-12, "{a} vs {b}");
    }
}

#[test]
fn gradient_integrals_positive_and_consistent() {
    // Frobenius and divergence integrals are nonnegative; the fields are
    // divergence-free so the divergence integral is numerically zero.
    let p = params(0.1, 0.01);
    let quad = sphere_quadrature(4).unwrap();
    let spec = IncidentSpec::sectoral(4, one()).unwrap();
    let coeffs = solve_mode_exact(&spec, &p).unwrap();
    let g = shell_gradient_integrals(
        FieldRegion::TotalInterior,
        &spec,
        &p,
        &coeffs,
        0.9,
        1.0,
        &quad,
    )
    .unwrap();
    assert!(g.frobenius_sq.value() > 0.0);
    let div_rel = g.divergence_sq.ratio(g.frobenius_sq);
    assert!(div_rel < 1e-16, "divergence leak {div_rel}");
}
