//! Jacobi theta_1 and its first three argument derivatives by q-series.
//!
//! The series converge geometrically for |Im v| < pi * Im(tau) once the
//! argument has been reduced into the fundamental cell; callers are
//! responsible for that reduction.

use num_complex::Complex64;

const MAX_TERMS: usize = 64;

/// theta_1(v, q), theta_1'(v, q), theta_1''(v, q), theta_1'''(v, q)
/// with q = exp(ln_q), 0 < q < 1.
pub fn theta1_suite(v: Complex64, ln_q: f64) -> [Complex64; 4] {
    let mut t = [Complex64::new(0.0, 0.0); 4];
    let mut sign = 1.0;
    for n in 0..MAX_TERMS {
        let k = (2 * n + 1) as f64;
        let amp = 2.0 * sign * ((n as f64 + 0.5) * (n as f64 + 0.5) * ln_q).exp();
        let (s, c) = {
            let kv = k * v;
            (kv.sin(), kv.cos())
        };
        let term0 = amp * s;
        t[0] += term0;
        t[1] += amp * k * c;
        t[2] -= amp * k * k * s;
        t[3] -= amp * k * k * k * c;
        // bound on everything still to come, including the k^3 factor
        let tail = amp.abs() * k * k * k * (s.norm() + c.norm() + 1.0);
        if n > 1 && tail < 1e-18 * (1.0 + t[0].norm() + t[1].norm()) {
            break;
        }
        sign = -sign;
    }
    t
}

/// theta_1'(0, q) and theta_1'''(0, q), used for lattice constants.
pub fn theta1_derivs_at_zero(ln_q: f64) -> (f64, f64) {
    let mut d1 = 0.0;
    let mut d3 = 0.0;
    let mut sign = 1.0;
    for n in 0..MAX_TERMS {
        let k = (2 * n + 1) as f64;
        let amp = 2.0 * sign * ((n as f64 + 0.5) * (n as f64 + 0.5) * ln_q).exp();
        d1 += amp * k;
        d3 -= amp * k * k * k;
        if n > 1 && amp.abs() * k * k * k < 1e-18 * (1.0 + d1.abs()) {
            break;
        }
        sign = -sign;
    }
    (d1, d3)
}
