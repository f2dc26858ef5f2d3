//! Free-particle transformations checked against closed forms and against
//! each other: differential route, integral route, Jordan-chain route and
//! the Poschl-Teller limit must all agree.

use darboux::grid::GridSpec;
use darboux::models::{
    free_partner_closed_form, poschl_teller, poschl_teller_d, FreeParticleSeed, Orientation,
};
use darboux::susy::{
    confluent_partner_differential, confluent_partner_integral, intertwiner_coefficients,
    jordan_chain_u2, nonconfluent_partner, orthogonal_solution, singularity_scan, wronskian,
};
use num_complex::Complex64;

fn growing_seed(kappa: f64) -> darboux::susy::ConfluentSeed {
    FreeParticleSeed::new(kappa, Orientation::Growing)
        .unwrap()
        .confluent_seed()
}

#[test]
fn chain_of_equalities() {
    let kappa = 1.0;
    let x0 = 3.0;
    let d = poschl_teller_d(kappa, x0); // -e^6/2
    let spec = GridSpec::new(-10.0, 10.0, 2001).unwrap();
    let seed = growing_seed(kappa);

    let differential = confluent_partner_differential(&seed, d, |_| 0.0, &spec).unwrap();

    // integral route anchored at x0: w0 = D + W(u1, du1/deps)(x0)
    let w0 = d + seed.wronskian_with_eps_derivative(x0).re;
    let u1 = |x: f64| Complex64::new(x.exp(), 0.0);
    let du1 = |x: f64| Complex64::new(x.exp(), 0.0);
    let integral =
        confluent_partner_integral(u1, du1, w0, x0, -1.0, |_| 0.0, &spec).unwrap();

    let mut worst_int = 0.0_f64;
    let mut worst_closed = 0.0_f64;
    let mut worst_pt = 0.0_f64;
    for (i, x) in spec.points().enumerate() {
        let v_diff = differential.partner_potential.values[i];
        worst_int = worst_int.max((v_diff - integral.partner_potential.values[i]).abs());
        let closed = free_partner_closed_form(kappa, d, x).unwrap();
        worst_closed = worst_closed.max((v_diff - closed).abs());
        worst_pt = worst_pt.max((v_diff - poschl_teller(kappa, x0, x)).abs());
    }
    assert!(worst_closed < 1e-8, "closed-form mismatch {worst_closed:e}");
    assert!(worst_pt < 1e-8, "Poschl-Teller mismatch {worst_pt:e}");
    assert!(worst_int < 1e-6, "integral-route mismatch {worst_int:e}");
}

#[test]
fn bound_state_matches_sech_profile() {
    let kappa = 1.0;
    let x0 = 3.0;
    let spec = GridSpec::new(-10.0, 16.0, 2601).unwrap();
    let seed = growing_seed(kappa);
    let r = confluent_partner_differential(&seed, poschl_teller_d(kappa, x0), |_| 0.0, &spec)
        .unwrap();
    // normalized ground state of the sech^2 well: sqrt(kappa/2) sech[kappa(x-x0)]
    for (i, x) in spec.points().enumerate() {
        let exact = (kappa / 2.0_f64).sqrt() / (kappa * (x - x0)).cosh();
        let got = r.bound_state.values[i].abs();
        assert!((got - exact).abs() < 1e-6, "x = {x}: {got} vs {exact}");
    }
}

#[test]
fn orthogonal_solution_is_sinh() {
    // u1 = e^x anchored at 0: u1 int_0^x e^{-2y} dy = sinh x
    let spec = GridSpec::new(-4.0, 4.0, 401).unwrap();
    let perp = orthogonal_solution(
        |x| Complex64::new(x.exp(), 0.0),
        |x| Complex64::new(x.exp(), 0.0),
        0.0,
        &spec,
    )
    .unwrap();
    for (i, x) in spec.points().enumerate() {
        assert!((perp.values.values[i].re - x.sinh()).abs() < 1e-9, "x = {x}");
        assert!((perp.derivative.values[i].re - x.cosh()).abs() < 1e-9, "x = {x}");
        // W(u1, u1_perp) = 1
        let w = wronskian(
            Complex64::new(x.exp(), 0.0),
            Complex64::new(x.exp(), 0.0),
            perp.values.values[i],
            perp.derivative.values[i],
        );
        assert!((w.re - 1.0).abs() < 1e-9 && w.im.abs() < 1e-12);
    }
}

#[test]
fn orthogonal_solution_rejects_nodes() {
    // sinh has a node at 0 inside the path
    let spec = GridSpec::new(-2.0, 2.0, 201).unwrap();
    let r = orthogonal_solution(
        |x| Complex64::new(x.sinh(), 0.0),
        |x| Complex64::new(x.cosh(), 0.0),
        -2.0,
        &spec,
    );
    assert!(matches!(r, Err(darboux::Error::NodeOnPath { x }) if x.abs() < 1e-3));
}

#[test]
fn jordan_chain_reproduces_eps_derivative() {
    // C = 0, D = 0: u2 = du1/deps = -x e^x / 2 for kappa = 1
    let seed = growing_seed(1.0);
    let spec = GridSpec::new(-3.0, 3.0, 301).unwrap();
    let u2 = jordan_chain_u2(&seed, 0.0, 0.0, 0.0, &spec).unwrap();
    for (i, x) in spec.points().enumerate() {
        let exact = -0.5 * x * x.exp();
        assert!((u2.values.values[i].re - exact).abs() < 1e-9, "x = {x}");
    }
}

#[test]
fn wronskian_of_u2_is_independent_of_c() {
    let seed = growing_seed(1.0);
    let spec = GridSpec::new(-3.0, 3.0, 301).unwrap();
    let d = -2.0;
    let mut reference: Option<Vec<Complex64>> = None;
    for c in [-5.0, 0.0, 1.7, 42.0] {
        let u2 = jordan_chain_u2(&seed, c, d, 0.0, &spec).unwrap();
        let w: Vec<Complex64> = spec
            .points()
            .enumerate()
            .map(|(i, x)| {
                wronskian(
                    (seed.u1)(x),
                    (seed.du1_dx)(x),
                    u2.values.values[i],
                    u2.derivative.values[i],
                )
            })
            .collect();
        match &reference {
            None => reference = Some(w),
            Some(r) => {
                for (a, b) in r.iter().zip(&w) {
                    let scale = a.norm().max(1.0);
                    assert!((a - b).norm() < 1e-12 * scale, "C = {c}");
                }
            }
        }
    }
}

#[test]
fn u2_wronskian_matches_transformation_function() {
    // W(u1, u2) with u2 = C u1 + D u1_perp + du1/deps must equal
    // w = D' + W(u1, du1/deps) with D' = D (quadrature vs analytic route)
    let seed = growing_seed(1.0);
    let spec = GridSpec::new(-3.0, 3.0, 301).unwrap();
    let d = -2.0;
    let u2 = jordan_chain_u2(&seed, 0.7, d, 0.0, &spec).unwrap();
    for (i, x) in spec.points().enumerate() {
        let w_quad = wronskian(
            (seed.u1)(x),
            (seed.du1_dx)(x),
            u2.values.values[i],
            u2.derivative.values[i],
        );
        let w_analytic = seed.w(d, x);
        assert!(
            (w_quad - w_analytic).norm() < 1e-8 * w_analytic.norm().max(1.0),
            "x = {x}"
        );
    }
}

#[test]
fn nonconfluent_two_seed_partner() {
    // ua = cosh x (eps -1), ub = sinh(2x)/2 (eps -4):
    // W = cosh^3 x, partner = -6 sech^2 x
    let spec = GridSpec::new(-5.0, 5.0, 501).unwrap();
    let ua = |x: f64| Complex64::new(x.cosh(), 0.0);
    let dua = |x: f64| Complex64::new(x.sinh(), 0.0);
    let ub = |x: f64| Complex64::new(0.5 * (2.0 * x).sinh(), 0.0);
    let dub = |x: f64| Complex64::new((2.0 * x).cosh(), 0.0);
    for x in spec.points() {
        let w = wronskian(ua(x), dua(x), ub(x), dub(x));
        let c = x.cosh();
        assert!((w.re - c * c * c).abs() < 1e-9 * (1.0 + c * c * c), "x = {x}");
    }
    let vt = nonconfluent_partner(ua, dua, -1.0, ub, dub, -4.0, |_| 0.0, &spec).unwrap();
    for (i, x) in spec.points().enumerate() {
        let s = 1.0 / x.cosh();
        assert!((vt.values[i] + 6.0 * s * s).abs() < 1e-8, "x = {x}");
    }
    // equal energies must be rejected
    assert!(nonconfluent_partner(ua, dua, -1.0, ub, dub, -1.0, |_| 0.0, &spec).is_err());
}

#[test]
fn d_scan_boundary_at_zero() {
    let seed = growing_seed(1.0);
    let spec = GridSpec::new(-10.0, 10.0, 501).unwrap();
    let scan = singularity_scan(&seed, -2.0, 2.0, 41, &spec).unwrap();
    for p in &scan {
        assert_eq!(p.singular, p.d >= 0.0, "D = {}", p.d);
        if p.d > 0.0 {
            // crossing of w = D - e^{2x}/2 at x = ln(2D)/2
            let exact = (2.0 * p.d).ln() / 2.0;
            let got = p.crossing.expect("crossing expected");
            assert!((got - exact).abs() < 1e-6, "D = {}", p.d);
        }
    }
}

#[test]
fn intertwiner_closes_the_ladder() {
    // g = -(ln w)' checked by finite differences of the emitted w
    let seed = growing_seed(1.0);
    let spec = GridSpec::new(-6.0, 6.0, 1201).unwrap();
    let d = poschl_teller_d(1.0, 0.0);
    let r = confluent_partner_differential(&seed, d, |_| 0.0, &spec).unwrap();
    let co = intertwiner_coefficients(&seed, &r, |_| 0.0).unwrap();
    assert_eq!(co.d, -1.0);
    let h = r.w_function.dx;
    for i in 1..r.w_function.len() - 1 {
        let lw = |j: usize| r.w_function.values[j].abs().ln();
        let fd = -(lw(i + 1) - lw(i - 1)) / (2.0 * h);
        assert!((co.g.values[i] - fd).abs() < 1e-4 * (1.0 + fd.abs()));
    }
}

#[test]
fn singular_d_reports_crossing_location() {
    let seed = growing_seed(1.0);
    let spec = GridSpec::new(-10.0, 10.0, 2001).unwrap();
    match confluent_partner_differential(&seed, 1.0, |_| 0.0, &spec) {
        Err(darboux::Error::SingularTransform { x }) => {
            let exact = (2.0_f64).ln() / 2.0;
            assert!((x - exact).abs() < 1e-4, "crossing at {x}, expected {exact}");
        }
        other => panic!("expected SingularTransform, got {other:?}"),
    }
}
