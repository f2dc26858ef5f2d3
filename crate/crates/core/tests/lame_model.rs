//! Lame seed and partner checks at the two parameter sets used throughout:
//! (m = 0.5, eps1 = 0.1) in the infinite gap and (m = 0.1, eps1 = 1.05) in
//! the finite gap.

use darboux::grid::GridSpec;
use darboux::models::{lame_partner_closed_form, lame_potential, BlochBranch, LameSeed};
use darboux::susy::confluent_partner_differential;
use darboux::verify::fd_parametric_derivative;
use num_complex::Complex64;

const CASES: [(f64, f64); 2] = [(0.5, 0.1), (0.1, 1.05)];

#[test]
fn bloch_property_over_one_period() {
    for (m, eps) in CASES {
        for branch in [BlochBranch::Beta, BlochBranch::InverseBeta] {
            let seed = LameSeed::new(m, eps, branch).unwrap();
            let (beta, _) = seed.bloch_factor();
            let t = seed.period();
            for &x in &[-2.3, -0.4, 0.0, 0.9, 1.7, 3.1] {
                let u = seed.bloch_u1(x).unwrap();
                let ut = seed.bloch_u1(x + t).unwrap();
                assert!(
                    (ut - beta * u).norm() < 1e-8 * u.norm().max(1.0),
                    "m = {m}, eps = {eps}, branch {branch:?}, x = {x}"
                );
            }
            // two periods square the multiplier
            let u = seed.bloch_u1(0.5).unwrap();
            let u2t = seed.bloch_u1(0.5 + 2.0 * t).unwrap();
            assert!((u2t - beta * beta * u).norm() < 1e-8 * u.norm());
        }
    }
}

#[test]
fn u1_is_real_on_the_axis() {
    for (m, eps) in CASES {
        let seed = LameSeed::new(m, eps, BlochBranch::Beta).unwrap();
        for &x in &[-3.0, -1.1, 0.3, 2.4] {
            let u = seed.bloch_u1(x).unwrap();
            assert!(u.im.abs() < 1e-9 * u.norm(), "m = {m}, x = {x}: {u}");
        }
    }
}

#[test]
fn wronskian_factors_through_auxiliary_f() {
    // W(u1, du1/deps) = f u1^2
    for (m, eps) in CASES {
        let seed = LameSeed::new(m, eps, BlochBranch::Beta).unwrap();
        let cs = seed.confluent_seed();
        for &x in &[-1.8, -0.2, 0.6, 2.9] {
            let lhs = cs.wronskian_with_eps_derivative(x);
            let u = seed.bloch_u1(x).unwrap();
            let rhs = seed.auxiliary_f(x).unwrap() * u * u;
            assert!(
                (lhs - rhs).norm() < 1e-8 * lhs.norm().max(1.0),
                "m = {m}, x = {x}"
            );
        }
    }
}

#[test]
fn eps_derivative_matches_finite_difference() {
    for (m, eps) in CASES {
        let seed = LameSeed::new(m, eps, BlochBranch::Beta).unwrap();
        for &x in &[-1.5, 0.4, 1.9] {
            let fd = fd_parametric_derivative(
                |e| {
                    LameSeed::new(m, e, BlochBranch::Beta).and_then(|s| s.bloch_u1(x))
                },
                eps,
                1e-5,
            )
            .unwrap();
            let analytic = seed.du1_deps(x).unwrap();
            let scale = analytic.norm().max(1e-3);
            assert!(
                (fd - analytic).norm() < 1e-4 * scale,
                "m = {m}, x = {x}: fd {fd} vs {analytic}"
            );
        }
    }
}

#[test]
fn closed_form_matches_generic_path() {
    for (m, eps, branch, d) in [
        (0.5, 0.1, BlochBranch::InverseBeta, -45.0),
        (0.1, 1.05, BlochBranch::Beta, 20.0),
    ] {
        let seed = LameSeed::new(m, eps, branch).unwrap();
        let spec = GridSpec::new(-10.0, 10.0, 801).unwrap();
        let generic =
            confluent_partner_differential(&seed.confluent_seed(), d, |x| {
                lame_potential(m, x).unwrap()
            }, &spec)
            .unwrap();
        let mut worst = 0.0_f64;
        for (i, x) in spec.points().enumerate() {
            let closed = lame_partner_closed_form(&seed, d, x).unwrap();
            worst = worst.max((closed - generic.partner_potential.values[i]).abs());
        }
        assert!(worst < 1e-8, "m = {m}: mismatch {worst:e}");
    }
}

#[test]
fn frozen_partner_value_infinite_gap() {
    // independent high-precision evaluation at x = 0 for the
    // (m = 0.5, eps1 = 0.1) inverse-branch seed with D = -45
    let seed = LameSeed::new(0.5, 0.1, BlochBranch::InverseBeta).unwrap();
    let vt0 = lame_partner_closed_form(&seed, -45.0, 0.0).unwrap();
    assert!(
        (vt0 + 0.043_394_820_699_608_087).abs() < 1e-9,
        "Vt(0) = {vt0}"
    );
}

#[test]
fn wrong_branch_is_singular() {
    // at (m = 0.5, eps1 = 0.1) the beta branch has |beta| < 1, so D = -45
    // makes w cross zero
    let seed = LameSeed::new(0.5, 0.1, BlochBranch::Beta).unwrap();
    let spec = GridSpec::new(-10.0, 10.0, 801).unwrap();
    let r = confluent_partner_differential(&seed.confluent_seed(), -45.0, |x| {
        lame_potential(0.5, x).unwrap()
    }, &spec);
    assert!(matches!(r, Err(darboux::Error::SingularTransform { .. })));
}

#[test]
fn partner_bound_state_decays() {
    let seed = LameSeed::new(0.5, 0.1, BlochBranch::InverseBeta).unwrap();
    let spec = GridSpec::new(-20.0, 20.0, 1601).unwrap();
    let r = confluent_partner_differential(&seed.confluent_seed(), -45.0, |x| {
        lame_potential(0.5, x).unwrap()
    }, &spec)
    .unwrap();
    let peak = r.bound_state.max_abs();
    let edge = r.bound_state.values[0]
        .abs()
        .max(r.bound_state.values[r.bound_state.len() - 1].abs());
    assert!(edge < 1e-4 * peak, "edge/peak = {}", edge / peak);
}

#[test]
fn periodicity_defect_vanishes_asymptotically() {
    let seed = LameSeed::new(0.5, 0.1, BlochBranch::InverseBeta).unwrap();
    let t = seed.period();
    for &x in &[31.0, 34.5, -32.2, -38.7] {
        let a = lame_partner_closed_form(&seed, -45.0, x).unwrap();
        let b = lame_partner_closed_form(&seed, -45.0, x + t).unwrap();
        assert!((a - b).abs() < 1e-4, "x = {x}: defect {}", (a - b).abs());
    }
}

#[test]
fn seed_residuals_are_small() {
    // the constructor validates residuals; also re-check through the public
    // handle on a fresh grid
    for (m, eps) in CASES {
        let seed = LameSeed::new(m, eps, BlochBranch::InverseBeta).unwrap();
        let spec = GridSpec::new(0.5, 2.5, 2001).unwrap();
        let (rs, rc) = seed
            .confluent_seed()
            .residuals(|x| lame_potential(m, x).unwrap(), &spec)
            .unwrap();
        assert!(rs < 1e-5, "schrodinger residual {rs:e}");
        assert!(rc < 1e-4, "chain residual {rc:e}");
    }
}

#[test]
fn quasimomentum_in_gap_is_at_band_edge_values() {
    // infinite gap: beta > 0 so Re kappa = 0; finite gap: beta < 0 so
    // Re kappa = pi
    let a = LameSeed::new(0.5, 0.1, BlochBranch::Beta).unwrap();
    let (_, ka) = a.bloch_factor();
    assert!(ka.re.abs() < 1e-10, "kappa = {ka}");
    let b = LameSeed::new(0.1, 1.05, BlochBranch::Beta).unwrap();
    let (bb, kb) = b.bloch_factor();
    assert!(bb.re < 0.0 && bb.im.abs() < 1e-8 * bb.norm(), "beta = {bb}");
    assert!((kb.re.abs() - std::f64::consts::PI).abs() < 1e-10, "kappa = {kb}");
    // frozen multiplier for the finite-gap case
    assert!((bb.re + 0.920_585_706).abs() < 1e-7, "beta = {bb}");
}

#[test]
fn integral_route_agrees_for_lame() {
    let seed = LameSeed::new(0.5, 0.1, BlochBranch::InverseBeta).unwrap();
    let cs = seed.confluent_seed();
    let d = -45.0;
    let spec = GridSpec::new(-4.0, 4.0, 401).unwrap();
    let generic = confluent_partner_differential(&cs, d, |x| {
        lame_potential(0.5, x).unwrap()
    }, &spec)
    .unwrap();
    let x0 = 0.0;
    let w0 = d + cs.wronskian_with_eps_derivative(x0).re;
    let s1 = seed.clone();
    let s2 = seed.clone();
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let integral = darboux::susy::confluent_partner_integral(
        move |x| s1.bloch_u1(x).unwrap_or(nan),
        move |x| s2.bloch_u1_prime(x).unwrap_or(nan),
        w0,
        x0,
        0.1,
        |x| lame_potential(0.5, x).unwrap(),
        &spec,
    )
    .unwrap();
    let mut worst = 0.0_f64;
    for i in 0..spec.n_points {
        worst = worst.max(
            (generic.partner_potential.values[i] - integral.partner_potential.values[i]).abs(),
        );
    }
    assert!(worst < 1e-6, "mismatch {worst:e}");
}
