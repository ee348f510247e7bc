//! Oracle tests for the spherical harmonics layer: normalization and
//! orthogonality, frame reconstruction, the Legendre-derivative identities
//! behind the sectoral mode, gradients against finite differences, and the
//! angular integral constants.

use num_complex::Complex64;
use qmr_core::harmonics::{
    angular_constants, frame, grad_radial_vsh, sph_harmonic, sphere_quadrature, vsh_frame, vsh_t,
    SphereQuadrature, SphericalPoint,
};
use qmr_core::specfun::{assoc_legendre_pair, radial_pair, RadialKind};
use std::f64::consts::PI;

fn quad_for(n: u32) -> SphereQuadrature {
    sphere_quadrature(n).unwrap()
}

/// Deterministic low-discrepancy angles, away from the poles.
fn sample_angles(count: usize) -> Vec<(f64, f64)> {
    (0..count)
        .map(|i| {
            let u = (i as f64 + 0.5) / count as f64;
            let v = (i as f64 * 0.618033988749895).fract();
            (0.15 + (PI - 0.3) * u, 2.0 * PI * v)
        })
        .collect()
}

#[test]
fn scalar_harmonic_spot_values() {
    // Y_0^0 = 1/sqrt(4 pi).
    let y = sph_harmonic(0, 0, 1.1, 2.3).unwrap();
    assert!((y.re - 0.282095).abs() < 1e-6 && y.im.abs() < 1e-15);
    // Y_1^0(0, 0) = sqrt(3/4pi).
    let y = sph_harmonic(1, 0, 0.0, 0.0).unwrap();
    assert!((y.re - 0.488603).abs() < 1e-6);
    assert!(sph_harmonic(2, 3, 1.0, 1.0).is_err());
}

#[test]
fn scalar_harmonics_are_orthonormal() {
    let quad = quad_for(10);
    for n in 0..=10u32 {
        for m in (-(n as i32)..=(n as i32)).step_by(3) {
            let norm = quad.integrate_sphere(|t, p| sph_harmonic(n, m, t, p).unwrap().norm_sqr());
            assert!((norm - 1.0).abs() < 1e-12, "|Y_{n}^{m}|^2 = {norm}");
        }
    }
    // One explicit cross term.
    let quad = quad_for(4);
    let cross = quad.integrate_sphere_complex(|t, p| {
        sph_harmonic(3, 2, t, p).unwrap() * sph_harmonic(4, 2, t, p).unwrap().conj()
    });
    assert!(cross.norm() < 1e-12);
}

#[test]
fn vsh_norms_and_orthogonality() {
    // Integral of |T_n^m|^2 over the sphere equals n(n+1).
    for n in 1..=15u32 {
        let quad = quad_for(n);
        for m in -(n as i32)..=(n as i32) {
            let norm = quad.integrate_sphere(|t, p| {
                vsh_t(n, m, t, p).unwrap().iter().map(|c| c.norm_sqr()).sum()
            });
            let expect = (n * (n + 1)) as f64;
            assert!(
                (norm - expect).abs() < 1e-10,
                "|T_{n}^{m}|^2 = {norm}, expected {expect}"
            );
        }
    }
    // Pairwise orthogonality across a sample of distinct (n, m).
    let quad = quad_for(6);
    let pairs = [(1i32, 1i32), (2, 1), (2, -2), (3, 0), (4, 3), (5, -1), (6, 6)];
    for (i, &(n1, m1)) in pairs.iter().enumerate() {
        for &(n2, m2) in pairs.iter().skip(i + 1) {
            let dot = quad.integrate_sphere_complex(|t, p| {
                let a = vsh_t(n1 as u32, m1, t, p).unwrap();
                let b = vsh_t(n2 as u32, m2, t, p).unwrap();
                a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
            });
            assert!(dot.norm() < 1e-10, "T_{n1}^{m1} . T_{n2}^{m2} = {dot}");
        }
    }
}

#[test]
fn vsh_is_tangential() {
    for (i, &(theta, phi)) in sample_angles(100).iter().enumerate() {
        let n = 1 + (i % 6) as u32;
        let m = (i as i32 % (2 * n as i32 + 1)) - n as i32;
        let t = vsh_t(n, m, theta, phi).unwrap();
        let r_hat = frame(theta, phi)[0];
        let dot: Complex64 = (0..3).map(|a| t[a] * r_hat[a]).sum();
        assert!(dot.norm() < 1e-12);
    }
}

#[test]
fn frame_coefficients_reconstruct_vsh() {
    // A_theta theta_hat + A_phi phi_hat equals the Cartesian T at 10^3
    // points.
    for (i, &(theta, phi)) in sample_angles(1000).iter().enumerate() {
        let n = 1 + (i % 8) as u32;
        let m = (i as i32 % (2 * n as i32 + 1)) - n as i32;
        let fc = vsh_frame(n, m, theta, phi).unwrap();
        let t = vsh_t(n, m, theta, phi).unwrap();
        let fr = frame(theta, phi);
        for a in 0..3 {
            let rec = fc.a_theta * fr[1][a] + fc.a_phi * fr[2][a];
            assert!((rec - t[a]).norm() < 1e-11);
        }
    }
}

#[test]
fn frame_spot_value() {
    // (1, 1, pi/2, 0): A_theta = i C_1^1 P_1^1(0); with the positive
    // normalization constant (no Condon-Shortley phase) this is +0.345494 i.
    let fc = vsh_frame(1, 1, PI / 2.0, 0.0).unwrap();
    assert!((fc.a_theta - Complex64::new(0.0, 0.345494)).norm() < 1e-6);
    // |A_theta(n, n, theta, phi)| is phi-independent.
    for &phi in &[0.0, 1.0, 2.5, 5.0] {
        let fc2 = vsh_frame(3, 3, 1.0, phi).unwrap();
        let fc0 = vsh_frame(3, 3, 1.0, 0.0).unwrap();
        assert!((fc2.a_theta.norm() - fc0.a_theta.norm()).abs() < 1e-13);
    }
}

#[test]
fn sectoral_legendre_identities() {
    // Convention audit, asserted for all n <= 15:
    //   d/dtheta P_n^n = +n P_n^{n-1}
    //   P_n^n / sin theta = +(2n-1) P_{n-1}^{n-1}
    for n in 1..=15u32 {
        for &theta in &[0.3, 0.9, PI / 2.0, 2.1, 2.8] {
            let (pnn, dpnn) = assoc_legendre_pair(n, n, theta).unwrap();
            let (pnm1, _) = assoc_legendre_pair(n, n - 1, theta).unwrap();
            let scale = dpnn.abs().max(1.0);
            assert!(
                (dpnn - (n as f64) * pnm1).abs() / scale < 1e-10,
                "dP_{n}^{n} identity at {theta}"
            );
            let (pm1m1, _) = assoc_legendre_pair(n - 1, n - 1, theta).unwrap();
            let lhs = pnn / theta.sin();
            let rhs = (2.0 * n as f64 - 1.0) * pm1m1;
            assert!(
                (lhs - rhs).abs() / rhs.abs().max(1.0) < 1e-10,
                "P_{n}^{n}/sin identity at {theta}"
            );
        }
    }
}

#[test]
fn pole_handling() {
    // |m| = 1 carries the analytic limit at the poles; |m| >= 2 vanishes.
    let fc = vsh_frame(3, 1, 0.0, 0.7).unwrap();
    assert!(fc.a_theta.norm() > 0.0 && fc.a_phi.norm() > 0.0);
    // Consistency with evaluation just off the pole.
    let near = vsh_frame(3, 1, 1e-8, 0.7).unwrap();
    assert!((fc.a_theta - near.a_theta).norm() / fc.a_theta.norm() < 1e-6);
    assert!((fc.a_phi - near.a_phi).norm() / fc.a_phi.norm() < 1e-6);
    let fc2 = vsh_frame(3, 2, 0.0, 0.7).unwrap();
    assert_eq!(fc2.a_theta, Complex64::new(0.0, 0.0));
    assert_eq!(fc2.a_phi, Complex64::new(0.0, 0.0));
    // South pole, too.
    let fc = vsh_frame(2, -1, PI, 0.3).unwrap();
    let near = vsh_frame(2, -1, PI - 1e-8, 0.3).unwrap();
    assert!((fc.a_theta - near.a_theta).norm() / near.a_theta.norm().max(1e-3) < 1e-6);
}

fn numeric_gradient(
    kind: RadialKind,
    k: Complex64,
    n: u32,
    m: i32,
    x: [f64; 3],
) -> [[Complex64; 3]; 3] {
    let h = 1e-5;
    let field = |p: [f64; 3]| -> [Complex64; 3] {
        let sp = SphericalPoint::from_cartesian(p);
        let t = vsh_t(n, m, sp.theta, sp.phi).unwrap();
        let f = radial_pair(kind, n, k * sp.r).unwrap().value;
        [f * t[0], f * t[1], f * t[2]]
    };
    let mut out = [[Complex64::new(0.0, 0.0); 3]; 3];
    for j in 0..3 {
        let mut xp = x;
        let mut xm = x;
        xp[j] += h;
        xm[j] -= h;
        let fp = field(xp);
        let fm = field(xm);
        for i in 0..3 {
            out[i][j] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    out
}

#[test]
fn gradient_matches_finite_differences() {
    // Central differences (h = 1e-5) match all 9 Jacobian entries at 20
    // points for both radial kinds, k = 0.3, n <= 5.
    let k = Complex64::new(0.3, 0.0);
    let pts = sample_angles(20);
    for (i, &(theta, phi)) in pts.iter().enumerate() {
        let n = 1 + (i % 5) as u32;
        let m = (i as i32 % (2 * n as i32 + 1)) - n as i32;
        let r = 0.6 + 0.07 * (i as f64 % 10.0);
        let point = SphericalPoint::new(r, theta, phi).unwrap();
        for kind in [RadialKind::BesselJ, RadialKind::Hankel1] {
            let analytic = grad_radial_vsh(kind, k, n, m, point).unwrap();
            let numeric = numeric_gradient(kind, k, n, m, point.to_cartesian());
            let scale: f64 = analytic
                .iter()
                .flatten()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            for a in 0..3 {
                for b in 0..3 {
                    assert!(
                        (analytic[a][b] - numeric[a][b]).norm() / scale < 1e-6,
                        "{kind:?} n {n} m {m} entry ({a},{b}): {} vs {}",
                        analytic[a][b],
                        numeric[a][b]
                    );
                }
            }
        }
    }
}

#[test]
fn gradient_structure_and_divergence() {
    let k = Complex64::new(0.3, 0.0);
    for (i, &(theta, phi)) in sample_angles(24).iter().enumerate() {
        let n = 1 + (i % 5) as u32;
        let m = (i as i32 % (2 * n as i32 + 1)) - n as i32;
        let point = SphericalPoint::new(0.8, theta, phi).unwrap();
        let mat = grad_radial_vsh(RadialKind::BesselJ, k, n, m, point).unwrap();
        let scale: f64 = mat.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            continue;
        }
        // Divergence-free: the trace vanishes.
        let tr = mat[0][0] + mat[1][1] + mat[2][2];
        assert!(tr.norm() / scale < 1e-10, "trace {tr} at n {n} m {m}");
        // Column contraction with r_hat gives the derivative column
        // k f'(kr) T; row contraction gives -(f/r) T.
        let r_hat = frame(theta, phi)[0];
        let t = vsh_t(n, m, theta, phi).unwrap();
        let pair = radial_pair(RadialKind::BesselJ, n, k * point.r).unwrap();
        for a in 0..3 {
            let col: Complex64 = (0..3).map(|b| mat[a][b] * r_hat[b]).sum();
            let expect = k * pair.derivative * t[a];
            assert!((col - expect).norm() / scale < 1e-10);
            let row: Complex64 = (0..3).map(|b| mat[b][a] * r_hat[b]).sum();
            let expect = -pair.value / point.r * t[a];
            assert!((row - expect).norm() / scale < 1e-10);
        }
    }
}

#[test]
fn gradient_domain_errors() {
    let point = SphericalPoint::new(0.0, 1.0, 1.0).unwrap();
    assert!(grad_radial_vsh(RadialKind::Hankel1, Complex64::new(0.3, 0.0), 2, 1, point).is_err());
    assert!(grad_radial_vsh(RadialKind::BesselJ, Complex64::new(0.0, 0.0), 2, 1,
        SphericalPoint::new(0.5, 1.0, 1.0).unwrap())
    .is_err());
}

#[test]
fn quadrature_sanity() {
    let quad = quad_for(3);
    // Surface area.
    let area = quad.integrate_sphere(|_, _| 1.0);
    assert!((area - 4.0 * PI).abs() < 1e-13 * 4.0 * PI);
    // Azimuthal exactness: e^{ik phi} integrates to zero.
    for kk in 1..10i32 {
        let val = quad.integrate_sphere_complex(|_, p| (Complex64::i() * (kk as f64) * p).exp());
        assert!(val.norm() < 1e-12);
    }
    // |Y_3^2|^2 integrates to 1.
    let norm = quad.integrate_sphere(|t, p| sph_harmonic(3, 2, t, p).unwrap().norm_sqr());
    assert!((norm - 1.0).abs() < 1e-12);
    // Radial rule: integral of r^2 over the unit ball = 4 pi / 5.
    let ball: f64 = quad
        .radial_rule(0.0, 1.0)
        .iter()
        .map(|&(r, w)| w * r * r * r * r)
        .sum::<f64>()
        * 4.0
        * PI;
    assert!((ball - 4.0 * PI / 5.0).abs() < 1e-13);
    assert!((ball - 2.513274).abs() < 1e-6);
    // Resolution guard.
    assert!(quad.check_order(3).is_ok());
    assert!(quad.check_order(4).is_err());
}

#[test]
fn angular_constant_closed_forms() {
    // Exact sub-identity values for the sectoral mode, all n <= 15:
    //   int |A_theta|^2   = n^2 + n/2
    //   int |A_phi|^2     = n/2
    //   int |dA_theta|^2  = n(n-1)(2n+1)/4
    //   int |dA_phi|^2    = n(3n+1)/4
    for n in 1..=15u32 {
        let nf = n as f64;
        let c = angular_constants(n, 1.0).unwrap();
        let at = nf * nf + nf / 2.0;
        let ap = nf / 2.0;
        let dat = nf * (nf - 1.0) * (2.0 * nf + 1.0) / 4.0;
        let dap = nf * (3.0 * nf + 1.0) / 4.0;
        assert!((c.int_a_theta_sq - at).abs() / at < 1e-12, "n {n} A_theta");
        assert!((c.int_a_phi_sq - ap).abs() / ap < 1e-12, "n {n} A_phi");
        let scale = dat.max(1.0);
        assert!(
            (c.int_dth_a_theta_sq - dat).abs() / scale < 1e-12,
            "n {n} dA_theta: {} vs {dat}",
            c.int_dth_a_theta_sq
        );
        assert!(
            (c.int_dth_a_phi_sq - dap).abs() / dap < 1e-12,
            "n {n} dA_phi: {} vs {dap}",
            c.int_dth_a_phi_sq
        );
        // c1 = n(n+1) exactly (the T-norm).
        assert!((c.c1 - nf * (nf + 1.0)).abs() / c.c1 < 1e-12);
        // Amplitude scaling is quadratic.
        let c2 = angular_constants(n, 2.0).unwrap();
        assert!((c2.c1 - 4.0 * c.c1).abs() / c2.c1 < 1e-14);
    }
}

#[test]
fn angular_constant_asymptotics() {
    // C1/n^2 -> 1 and C2/n^4 -> 1; within 15% at n = 20.
    let c = angular_constants(20, 1.0).unwrap();
    let n4 = 20f64.powi(4);
    assert!((c.c1 / 400.0 - 1.0).abs() < 0.15, "c1 = {}", c.c1);
    assert!((c.c2 / n4 - 1.0).abs() < 0.15, "c2/n^4 = {}", c.c2 / n4);
    assert!((c.c3 / n4 - 1.0).abs() < 0.15, "c3/n^4 = {}", c.c3 / n4);
    // Tighter at n = 40.
    let c = angular_constants(40, 1.0).unwrap();
    let n4 = 40f64.powi(4);
    assert!((c.c2 / n4 - 1.0).abs() < 0.08);
}
