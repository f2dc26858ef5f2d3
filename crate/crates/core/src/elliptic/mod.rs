//! Special functions for the single-gap Lame model: the complete elliptic
//! integral K(m), the Jacobi function sn, and the Weierstrass trio
//! (p, zeta, sigma) on the rectangular lattice with half-periods
//! omega = K(m), omega' = i K(1-m).

mod theta;

use num_complex::Complex64;

use crate::error::{Error, Result};
use theta::{theta1_derivs_at_zero, theta1_suite};

/// Distance below which an argument counts as sitting on a lattice point.
pub const POLE_TOL: f64 = 1e-8;

/// Elliptic parameter m with 0 < m < 1 strictly.
///
/// The degenerate limits m = 0 and m = 1 are accepted by [`jacobi_sn`] and
/// [`complete_k`] but never by lattice construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(m: f64) -> Result<Self> {
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::Domain(format!(
                "elliptic parameter must satisfy 0 < m < 1, got {m}"
            )));
        }
        Ok(Self(m))
    }

    pub fn get(&self) -> f64 {
        self.0
    }
}

/// Complete elliptic integral of the first kind,
/// K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt, by the AGM.
pub fn complete_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::Domain(format!(
            "K(m) requires 0 <= m < 1 (diverges at m = 1), got {m}"
        )));
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..40 {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    Ok(std::f64::consts::FRAC_PI_2 / a)
}

/// Jacobi sn(x|m) by the descending Landen transformation.
pub fn jacobi_sn(x: f64, m: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("jacobi_sn argument".into()));
    }
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::Domain(format!(
            "sn(x|m) requires 0 <= m <= 1, got {m}"
        )));
    }
    if m == 0.0 {
        return Ok(x.sin());
    }
    if m == 1.0 {
        return Ok(x.tanh());
    }
    // reduce into [-K, K] using sn(x + 2K) = -sn(x) and sn(2K - x) = sn(x)
    let k = complete_k(m)?;
    let mut r = x.rem_euclid(4.0 * k);
    let mut sign = 1.0;
    if r >= 2.0 * k {
        sign = -1.0;
        r -= 2.0 * k;
    }
    if r > k {
        r = 2.0 * k - r;
    }
    Ok(sign * sn_landen(r, m))
}

fn sn_landen(u: f64, m: f64) -> f64 {
    if m < 1e-10 {
        // sn = sin u - (m/4)(u - sin u cos u) cos u + O(m^2)
        let (s, c) = u.sin_cos();
        return s - 0.25 * m * (u - s * c) * c;
    }
    let kp = (1.0 - m).sqrt();
    let k1 = (1.0 - kp) / (1.0 + kp);
    let s = sn_landen(u / (1.0 + k1), k1 * k1);
    (1.0 + k1) * s / (1.0 + k1 * s * s)
}

/// Rectangular Weierstrass lattice for the Lame correspondence:
/// half-periods omega = K(m) and omega' = i K(1-m), branch points
/// e1 > e2 > e3 fixed by 2m sn^2(x|m) = 2[p(x + omega') + (m+1)/3].
#[derive(Clone, Debug)]
pub struct LatticeData {
    pub m: f64,
    /// Real half-period, K(m).
    pub omega: f64,
    /// Imaginary part of omega' = i K(1-m); positive.
    pub omega_prime_imag: f64,
    pub g2: f64,
    pub g3: f64,
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    /// ln q with nome q = exp(i pi omega' / omega).
    ln_nome: f64,
    /// eta = zeta(omega).
    eta: f64,
    /// Imaginary part of eta' = zeta(omega'); eta' is purely imaginary here.
    eta_prime_imag: f64,
    theta1_prime_0: f64,
}

impl LatticeData {
    pub fn omega_prime(&self) -> Complex64 {
        Complex64::new(0.0, self.omega_prime_imag)
    }

    /// zeta(omega).
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// zeta(omega'); purely imaginary on this rectangular lattice.
    pub fn eta_prime(&self) -> Complex64 {
        Complex64::new(0.0, self.eta_prime_imag)
    }

    pub fn nome(&self) -> f64 {
        self.ln_nome.exp()
    }

    /// Translate z by full periods into the centred fundamental cell,
    /// returning the reduced point and the integer shifts used.
    fn reduce(&self, z: Complex64) -> (Complex64, i64, i64) {
        let n = (z.re / (2.0 * self.omega)).round();
        let mm = (z.im / (2.0 * self.omega_prime_imag)).round();
        let zr = Complex64::new(
            z.re - 2.0 * n * self.omega,
            z.im - 2.0 * mm * self.omega_prime_imag,
        );
        (zr, n as i64, mm as i64)
    }

    fn v_of(&self, zr: Complex64) -> Complex64 {
        zr * (std::f64::consts::PI / (2.0 * self.omega))
    }

    fn pole_check(&self, zr: Complex64, z: Complex64) -> Result<()> {
        if zr.norm() < POLE_TOL {
            return Err(Error::Pole {
                re: z.re,
                im: z.im,
                tol: POLE_TOL,
            });
        }
        Ok(())
    }
}

/// Construct the lattice for a given elliptic parameter.
pub fn build_lattice(m: EllipticModulus) -> Result<LatticeData> {
    let m = m.get();
    let omega = complete_k(m)?;
    let b = complete_k(1.0 - m)?;
    let ln_nome = -std::f64::consts::PI * b / omega;
    let (d1, d3) = theta1_derivs_at_zero(ln_nome);
    let eta = -std::f64::consts::PI * std::f64::consts::PI * d3 / (12.0 * omega * d1);
    // Legendre relation eta * omega' - eta' * omega = i pi / 2 with
    // omega' = i b gives eta' = i (eta b - pi/2) / omega.
    let eta_prime_imag = (eta * b - std::f64::consts::FRAC_PI_2) / omega;
    let e1 = (2.0 - m) / 3.0;
    let e2 = (2.0 * m - 1.0) / 3.0;
    let e3 = -(1.0 + m) / 3.0;
    let g2 = -4.0 * (e1 * e2 + e2 * e3 + e3 * e1);
    let g3 = 4.0 * e1 * e2 * e3;
    Ok(LatticeData {
        m,
        omega,
        omega_prime_imag: b,
        g2,
        g3,
        e1,
        e2,
        e3,
        ln_nome,
        eta,
        eta_prime_imag,
        theta1_prime_0: d1,
    })
}

/// Weierstrass p-function.
pub fn wp(z: Complex64, lat: &LatticeData) -> Result<Complex64> {
    let (zr, _, _) = lat.reduce(z);
    lat.pole_check(zr, z)?;
    let t = theta1_suite(lat.v_of(zr), lat.ln_nome);
    let s = std::f64::consts::PI / (2.0 * lat.omega);
    let r1 = t[1] / t[0];
    Ok(-lat.eta / lat.omega - s * s * (t[2] / t[0] - r1 * r1))
}

/// Derivative p'(z) of the Weierstrass p-function.
pub fn wp_prime(z: Complex64, lat: &LatticeData) -> Result<Complex64> {
    let (zr, _, _) = lat.reduce(z);
    lat.pole_check(zr, z)?;
    let t = theta1_suite(lat.v_of(zr), lat.ln_nome);
    let s = std::f64::consts::PI / (2.0 * lat.omega);
    let r1 = t[1] / t[0];
    Ok(-s * s * s * (t[3] / t[0] - 3.0 * t[2] * t[1] / (t[0] * t[0]) + 2.0 * r1 * r1 * r1))
}

/// Weierstrass zeta function (quasi-periodic).
pub fn wzeta(z: Complex64, lat: &LatticeData) -> Result<Complex64> {
    let (zr, n, mm) = lat.reduce(z);
    lat.pole_check(zr, z)?;
    let t = theta1_suite(lat.v_of(zr), lat.ln_nome);
    let s = std::f64::consts::PI / (2.0 * lat.omega);
    let base = lat.eta * zr / lat.omega + s * t[1] / t[0];
    Ok(base + 2.0 * n as f64 * lat.eta + 2.0 * mm as f64 * lat.eta_prime())
}

/// Weierstrass sigma function. Zero exactly at lattice points; may overflow
/// for large |z| (use [`wsigma_log`] inside exponent arithmetic).
pub fn wsigma(z: Complex64, lat: &LatticeData) -> Result<Complex64> {
    let (zr, n, mm) = lat.reduce(z);
    if zr.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok(wsigma_log_reduced(zr, n, mm, lat).exp())
}

/// log(sigma(z)) up to a multiple of 2 pi i; errors on lattice points.
pub fn wsigma_log(z: Complex64, lat: &LatticeData) -> Result<Complex64> {
    let (zr, n, mm) = lat.reduce(z);
    lat.pole_check(zr, z)?;
    Ok(wsigma_log_reduced(zr, n, mm, lat))
}

fn wsigma_log_reduced(zr: Complex64, n: i64, mm: i64, lat: &LatticeData) -> Complex64 {
    let t = theta1_suite(lat.v_of(zr), lat.ln_nome);
    let ln_base = (2.0 * lat.omega / std::f64::consts::PI / lat.theta1_prime_0).ln()
        + lat.eta * zr * zr / (2.0 * lat.omega)
        + t[0].ln();
    // sigma(z + 2n omega + 2m omega')
    //   = (-1)^{n + m + nm} exp[(2n eta + 2m eta')(z + n omega + m omega')] sigma(z)
    let shift = 2.0 * n as f64 * lat.eta + 2.0 * mm as f64 * lat.eta_prime();
    let mid = zr + Complex64::new(n as f64 * lat.omega, mm as f64 * lat.omega_prime_imag);
    let parity = (n + mm + n * mm).rem_euclid(2);
    ln_base + shift * mid + Complex64::new(0.0, std::f64::consts::PI * parity as f64)
}
