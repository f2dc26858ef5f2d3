//! The `verify` subcommand: a human-readable pass/fail table over the
//! invariant and oracle checks, grouped into suites.

use anyhow::{bail, Result};
use num_complex::Complex64;

use darboux::elliptic::{build_lattice, wp, wp_prime, wsigma, wzeta, EllipticModulus};
use darboux::grid::GridSpec;
use darboux::models::{
    free_partner_closed_form, lame_partner_closed_form, lame_potential, poschl_teller_d,
    BlochBranch, FreeParticleSeed, LameSeed, Orientation,
};
use darboux::susy::{
    confluent_partner_differential, confluent_partner_integral, singularity_scan,
};

struct Table {
    failures: usize,
}

impl Table {
    fn new() -> Self {
        Self { failures: 0 }
    }

    fn row(&mut self, name: &str, outcome: Result<f64>) {
        match outcome {
            Ok(worst) => println!("  {name:<48} pass  ({worst:.1e})"),
            Err(e) => {
                println!("  {name:<48} FAIL  {e:#}");
                self.failures += 1;
            }
        }
    }
}

fn check(worst: f64, tol: f64) -> Result<f64> {
    if worst < tol {
        Ok(worst)
    } else {
        bail!("residual {worst:e} exceeds {tol:e}")
    }
}

fn suite_elliptic(table: &mut Table) {
    table.row("Legendre relation", (|| {
        let mut worst = 0.0_f64;
        for m in [0.1, 0.5, 0.9] {
            let lat = build_lattice(EllipticModulus::new(m)?)?;
            worst = worst.max(
                (lat.eta() * lat.omega_prime() - lat.eta_prime() * lat.omega
                    - Complex64::new(0.0, std::f64::consts::FRAC_PI_2))
                .norm(),
            );
        }
        check(worst, 1e-10)
    })());
    table.row("sigma' = sigma zeta", (|| {
        let mut worst = 0.0_f64;
        for m in [0.1, 0.5, 0.9] {
            let lat = build_lattice(EllipticModulus::new(m)?)?;
            for &x in &[0.3, 0.9, 1.4] {
                let z = Complex64::new(x * lat.omega, 0.2 * lat.omega_prime_imag);
                let h = 1e-5;
                let fd = (wsigma(z + h, &lat)? - wsigma(z - h, &lat)?) / (2.0 * h);
                let ex = wsigma(z, &lat)? * wzeta(z, &lat)?;
                worst = worst.max((fd - ex).norm() / ex.norm().max(1e-3));
            }
        }
        check(worst, 1e-6)
    })());
    table.row("zeta' = -p", (|| {
        let mut worst = 0.0_f64;
        for m in [0.1, 0.5, 0.9] {
            let lat = build_lattice(EllipticModulus::new(m)?)?;
            for &x in &[0.3, 0.9, 1.4] {
                let z = Complex64::new(x * lat.omega, 0.2 * lat.omega_prime_imag);
                let h = 1e-5;
                let fd = (wzeta(z + h, &lat)? - wzeta(z - h, &lat)?) / (2.0 * h);
                let ex = -wp(z, &lat)?;
                worst = worst.max((fd - ex).norm() / ex.norm().max(1.0));
            }
        }
        check(worst, 1e-6)
    })());
    table.row("p ODE", (|| {
        let mut worst = 0.0_f64;
        for m in [0.1, 0.5, 0.9] {
            let lat = build_lattice(EllipticModulus::new(m)?)?;
            for &x in &[0.3, 0.9, 1.4] {
                let z = Complex64::new(x * lat.omega, 0.2 * lat.omega_prime_imag);
                let p = wp(z, &lat)?;
                let pp = wp_prime(z, &lat)?;
                let lhs = pp * pp;
                let rhs = 4.0 * p * p * p - lat.g2 * p - lat.g3;
                worst = worst.max((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0));
            }
        }
        check(worst, 1e-6)
    })());
}

fn suite_free(table: &mut Table) {
    table.row("differential = integral = closed form", (|| {
        let d = poschl_teller_d(1.0, 3.0);
        let spec = GridSpec::new(-10.0, 10.0, 1001)?;
        let seed = FreeParticleSeed::new(1.0, Orientation::Growing)?.confluent_seed();
        let diff = confluent_partner_differential(&seed, d, |_| 0.0, &spec)?;
        let w0 = d + seed.wronskian_with_eps_derivative(3.0).re;
        let integ = confluent_partner_integral(
            |x| Complex64::new(x.exp(), 0.0),
            |x| Complex64::new(x.exp(), 0.0),
            w0,
            3.0,
            -1.0,
            |_| 0.0,
            &spec,
        )?;
        let mut worst = 0.0_f64;
        for (i, x) in spec.points().enumerate() {
            let closed = free_partner_closed_form(1.0, d, x)?;
            worst = worst
                .max((diff.partner_potential.values[i] - closed).abs())
                .max((diff.partner_potential.values[i] - integ.partner_potential.values[i]).abs());
        }
        check(worst, 1e-6)
    })());
    table.row("D-scan boundary at D = 0", (|| {
        let seed = FreeParticleSeed::new(1.0, Orientation::Growing)?.confluent_seed();
        let spec = GridSpec::new(-10.0, 10.0, 501)?;
        let scan = singularity_scan(&seed, -1.0, 1.0, 21, &spec)?;
        for p in &scan {
            if p.singular != (p.d >= 0.0) {
                bail!("misclassified D = {}", p.d);
            }
        }
        Ok(0.0)
    })());
}

fn suite_lame(table: &mut Table) {
    table.row("Bloch seed residuals", (|| {
        let mut worst = 0.0_f64;
        for (m, eps) in [(0.5, 0.1), (0.1, 1.05)] {
            let seed = LameSeed::new(m, eps, BlochBranch::Beta)?;
            let spec = GridSpec::new(-2.0, 2.0, 4001)?;
            let (rs, rc) = seed
                .confluent_seed()
                .residuals(|x| lame_potential(m, x).unwrap_or(f64::NAN), &spec)?;
            worst = worst.max(rs).max(rc);
        }
        check(worst, 1e-4)
    })());
    table.row("Bloch multiplier consistency", (|| {
        let mut worst = 0.0_f64;
        for (m, eps) in [(0.5, 0.1), (0.1, 1.05)] {
            let seed = LameSeed::new(m, eps, BlochBranch::Beta)?;
            let (beta, _) = seed.bloch_factor();
            let t = seed.period();
            for &x in &[-1.1, 0.4, 2.0] {
                let ratio = seed.bloch_u1(x + t)? / seed.bloch_u1(x)?;
                worst = worst.max((ratio - beta).norm());
            }
        }
        check(worst, 1e-8)
    })());
    table.row("specialized = generic partner", (|| {
        let mut worst = 0.0_f64;
        for (m, eps, branch, d) in [
            (0.5, 0.1, BlochBranch::InverseBeta, -45.0),
            (0.1, 1.05, BlochBranch::Beta, 20.0),
        ] {
            let seed = LameSeed::new(m, eps, branch)?;
            let spec = GridSpec::new(-8.0, 8.0, 401)?;
            let generic = confluent_partner_differential(
                &seed.confluent_seed(),
                d,
                |x| lame_potential(m, x).unwrap_or(f64::NAN),
                &spec,
            )?;
            for (i, x) in spec.points().enumerate() {
                let closed = lame_partner_closed_form(&seed, d, x)?;
                worst = worst.max((closed - generic.partner_potential.values[i]).abs());
            }
        }
        check(worst, 1e-8)
    })());
}

pub fn run(suite: &str) -> Result<()> {
    let mut table = Table::new();
    let run_elliptic = matches!(suite, "elliptic" | "all");
    let run_free = matches!(suite, "free" | "all");
    let run_lame = matches!(suite, "lame" | "all");
    if !(run_elliptic || run_free || run_lame) {
        bail!("unknown suite '{suite}' (expected elliptic, free, lame or all)");
    }
    if run_elliptic {
        println!("elliptic:");
        suite_elliptic(&mut table);
    }
    if run_free {
        println!("free:");
        suite_free(&mut table);
    }
    if run_lame {
        println!("lame:");
        suite_lame(&mut table);
    }
    if table.failures > 0 {
        bail!("{} check(s) failed", table.failures);
    }
    println!("all checks passed");
    Ok(())
}
