//! Identity-based checks of the elliptic layer: every function is tested
//! against differential and algebraic relations it must satisfy, plus a few
//! values frozen from an independent high-precision evaluation.

use darboux::elliptic::{
    build_lattice, complete_k, jacobi_sn, wp, wp_prime, wsigma, wsigma_log, wzeta,
    EllipticModulus, LatticeData,
};
use num_complex::Complex64;

const MODULI: [f64; 3] = [0.1, 0.5, 0.9];

fn lattice(m: f64) -> LatticeData {
    build_lattice(EllipticModulus::new(m).unwrap()).unwrap()
}

/// Deterministic points in the fundamental cell, kept away from the lattice.
fn sample_points(lat: &LatticeData, count: usize) -> Vec<Complex64> {
    let mut state = 0x9e3779b97f4a7c15_u64;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = (next() * 1.9 + 0.05) * lat.omega;
        let y = (next() - 0.5) * 0.9 * lat.omega_prime_imag;
        let z = Complex64::new(x, y);
        // stay clear of lattice points and the cell midline poles
        let near_pole = [
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0 * lat.omega, 0.0),
        ]
        .iter()
        .any(|p| (z - p).norm() < 0.1);
        if !near_pole {
            out.push(z);
        }
    }
    out
}

fn central_diff(f: impl Fn(Complex64) -> Complex64, z: Complex64, h: f64) -> Complex64 {
    (f(z + h) - f(z - h)) / (2.0 * h)
}

#[test]
fn frozen_reference_values() {
    assert!((complete_k(0.5).unwrap() - 1.854_074_677_301_371_9).abs() < 1e-14);
    assert!((jacobi_sn(1.0, 0.5).unwrap() - 0.803_001_824_895_643_89).abs() < 1e-12);
    let lat = lattice(0.5);
    assert!((lat.eta() - 0.423_606_542_396_989_54).abs() < 1e-12);
}

#[test]
fn legendre_relation() {
    // eta omega' - eta' omega = i pi / 2
    for m in MODULI {
        let lat = lattice(m);
        let lhs = lat.eta() * lat.omega_prime() - lat.eta_prime() * lat.omega;
        let target = Complex64::new(0.0, std::f64::consts::FRAC_PI_2);
        assert!((lhs - target).norm() < 1e-10, "m = {m}: {lhs}");
    }
}

#[test]
fn sigma_prime_is_sigma_zeta() {
    for m in MODULI {
        let lat = lattice(m);
        for z in sample_points(&lat, 100) {
            let fd = central_diff(|t| wsigma(t, &lat).unwrap(), z, 1e-5);
            let exact = wsigma(z, &lat).unwrap() * wzeta(z, &lat).unwrap();
            let scale = exact.norm().max(1e-3);
            assert!((fd - exact).norm() < 1e-6 * scale, "m = {m}, z = {z}");
        }
    }
}

#[test]
fn zeta_prime_is_minus_wp() {
    for m in MODULI {
        let lat = lattice(m);
        for z in sample_points(&lat, 100) {
            let fd = central_diff(|t| wzeta(t, &lat).unwrap(), z, 1e-5);
            let exact = -wp(z, &lat).unwrap();
            let scale = exact.norm().max(1.0);
            assert!((fd - exact).norm() < 1e-6 * scale, "m = {m}, z = {z}");
        }
    }
}

#[test]
fn wp_satisfies_its_ode() {
    // (p')^2 = 4 p^3 - g2 p - g3
    for m in MODULI {
        let lat = lattice(m);
        for z in sample_points(&lat, 100) {
            let p = wp(z, &lat).unwrap();
            let pp = wp_prime(z, &lat).unwrap();
            let lhs = pp * pp;
            let rhs = 4.0 * p * p * p - lat.g2 * p - lat.g3;
            let scale = lhs.norm().max(rhs.norm()).max(1.0);
            assert!((lhs - rhs).norm() < 1e-6 * scale, "m = {m}, z = {z}");
        }
    }
}

#[test]
fn wp_prime_duplication_through_sigma() {
    // p'(z) = -sigma(2z) / sigma(z)^4
    for m in MODULI {
        let lat = lattice(m);
        for z in sample_points(&lat, 100) {
            let ln2 = wsigma_log(2.0 * z, &lat);
            let ln1 = wsigma_log(z, &lat);
            let (ln2, ln1) = match (ln2, ln1) {
                (Ok(a), Ok(b)) => (a, b),
                _ => continue, // 2z landed on the lattice
            };
            let rhs = -(ln2 - 4.0 * ln1).exp();
            let lhs = wp_prime(z, &lat).unwrap();
            let scale = lhs.norm().max(1.0);
            assert!((lhs - rhs).norm() < 1e-6 * scale, "m = {m}, z = {z}");
        }
    }
}

#[test]
fn quasi_periodicity() {
    for m in MODULI {
        let lat = lattice(m);
        let two_w = Complex64::new(2.0 * lat.omega, 0.0);
        for z in sample_points(&lat, 30) {
            // p periodic
            let p0 = wp(z, &lat).unwrap();
            let p1 = wp(z + two_w, &lat).unwrap();
            assert!((p0 - p1).norm() < 1e-8 * p0.norm().max(1.0));
            // zeta(z + 2w) = zeta(z) + 2 eta
            let z0 = wzeta(z, &lat).unwrap();
            let z1 = wzeta(z + two_w, &lat).unwrap();
            assert!((z1 - z0 - 2.0 * lat.eta()).norm() < 1e-8 * z0.norm().max(1.0));
            // sigma(z + 2w) = -sigma(z) exp[2 eta (z + w)]
            let s0 = wsigma(z, &lat).unwrap();
            let s1 = wsigma(z + two_w, &lat).unwrap();
            let factor = (2.0 * lat.eta() * (z + lat.omega)).exp();
            assert!((s1 + s0 * factor).norm() < 1e-8 * s1.norm().max(1.0));
        }
    }
}

#[test]
fn parities() {
    for m in MODULI {
        let lat = lattice(m);
        for z in sample_points(&lat, 20) {
            let s = wsigma(z, &lat).unwrap();
            assert!((wsigma(-z, &lat).unwrap() + s).norm() < 1e-10 * s.norm());
            let ze = wzeta(z, &lat).unwrap();
            assert!((wzeta(-z, &lat).unwrap() + ze).norm() < 1e-10 * ze.norm().max(1.0));
            let p = wp(z, &lat).unwrap();
            assert!((wp(-z, &lat).unwrap() - p).norm() < 1e-10 * p.norm().max(1.0));
        }
    }
}

#[test]
fn lame_correspondence() {
    // 2 m sn^2(x|m) = 2 [p(x + w') + (m + 1)/3]
    for m in [0.1, 0.5] {
        let lat = lattice(m);
        let k = complete_k(m).unwrap();
        let n = 400;
        for i in 0..=n {
            let x = 4.0 * k * i as f64 / n as f64;
            let s = jacobi_sn(x, m).unwrap();
            let lhs = 2.0 * m * s * s;
            let p = wp(Complex64::new(x, lat.omega_prime_imag), &lat).unwrap();
            let rhs = 2.0 * (p + (m + 1.0) / 3.0);
            assert!(rhs.im.abs() < 1e-9, "m = {m}, x = {x}: im {}", rhs.im);
            assert!((lhs - rhs.re).abs() < 1e-8, "m = {m}, x = {x}");
        }
    }
}

proptest::proptest! {
    #[test]
    fn sn_bounded_and_odd(x in -20.0_f64..20.0, m in 0.01_f64..0.99) {
        let s = jacobi_sn(x, m).unwrap();
        proptest::prop_assert!(s.abs() <= 1.0 + 1e-12);
        let odd = jacobi_sn(-x, m).unwrap();
        proptest::prop_assert!((s + odd).abs() < 1e-10);
    }

    #[test]
    fn wp_ode_on_random_real_offsets(x in 0.05_f64..3.0, m in 0.05_f64..0.95) {
        let lat = lattice(m);
        let z = Complex64::new(x, 0.5 * lat.omega_prime_imag);
        let p = wp(z, &lat).unwrap();
        let pp = wp_prime(z, &lat).unwrap();
        let lhs = pp * pp;
        let rhs = 4.0 * p * p * p - lat.g2 * p - lat.g3;
        let scale = lhs.norm().max(rhs.norm()).max(1.0);
        proptest::prop_assert!((lhs - rhs).norm() < 1e-6 * scale);
    }
}

#[test]
fn sn_against_quarter_period_symmetry() {
    // sn(K - x) = cd(x) implies sn(K/2)^2 = 1/(1 + k'), spot-check via
    // the symmetric point identity sn(K + x) sn(K - x) independent check:
    // simpler: sn(2K - x) = sn(x)
    for m in MODULI {
        let k = complete_k(m).unwrap();
        for &x in &[0.2, 0.7, 1.3] {
            let a = jacobi_sn(2.0 * k - x, m).unwrap();
            let b = jacobi_sn(x, m).unwrap();
            assert!((a - b).abs() < 1e-11, "m = {m}, x = {x}");
        }
    }
}
