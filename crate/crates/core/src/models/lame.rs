//! Single-gap (n = 1) Lame potential: band structure, Bloch seeds built
//! from Weierstrass sigma/zeta quotients, and the closed-form confluent
//! partner.

use num_complex::Complex64;

use crate::elliptic::{
    build_lattice, jacobi_sn, wp, wp_prime, wsigma_log, wzeta, EllipticModulus,
    LatticeData,
};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::susy::{ConfluentSeed, IMAG_TOL};

/// Lame n = 1 potential V(x) = 2 m sn^2(x|m); period 2 K(m).
pub fn lame_potential(m: f64, x: f64) -> Result<f64> {
    EllipticModulus::new(m)?;
    let s = jacobi_sn(x, m)?;
    Ok(2.0 * m * s * s)
}

/// Where an energy sits relative to Sp(H) = [m, 1] U [1+m, inf).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectralRegion {
    /// Below the spectrum, (-inf, m).
    InfiniteGap,
    /// Inside the finite band [m, 1].
    FiniteBand,
    /// Inside the finite gap (1, 1+m).
    FiniteGap,
    /// Inside the semi-infinite band [1+m, inf).
    InfiniteBand,
    /// Exactly at a band edge.
    Edge,
}

/// Band edges {m, 1, 1+m} of the n = 1 Lame Hamiltonian.
#[derive(Clone, Copy, Debug)]
pub struct SpectrumBands {
    pub band_edges: [f64; 3],
}

impl SpectrumBands {
    pub fn classify(&self, e: f64) -> SpectralRegion {
        let [a, b, c] = self.band_edges;
        if e == a || e == b || e == c {
            SpectralRegion::Edge
        } else if e < a {
            SpectralRegion::InfiniteGap
        } else if e < b {
            SpectralRegion::FiniteBand
        } else if e < c {
            SpectralRegion::FiniteGap
        } else {
            SpectralRegion::InfiniteBand
        }
    }

    pub fn allowed(&self, e: f64) -> bool {
        matches!(
            self.classify(e),
            SpectralRegion::FiniteBand | SpectralRegion::InfiniteBand | SpectralRegion::Edge
        )
    }
}

pub fn lame_bands(m: f64) -> Result<SpectrumBands> {
    EllipticModulus::new(m)?;
    Ok(SpectrumBands {
        band_edges: [m, 1.0, 1.0 + m],
    })
}

/// Which of the two Bloch solutions seeds the transformation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BlochBranch {
    /// u1 with multiplier beta = exp[2 delta zeta(omega) - 2 omega zeta(delta)].
    #[default]
    Beta,
    /// The reciprocal-multiplier partner (delta -> -delta).
    InverseBeta,
}

fn bisect_monotone(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    let increasing = flo < 0.0;
    for _ in 0..200 {
        if hi - lo < 1e-15 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if (fm < 0.0) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Solve p(delta) = (2/3)(m+1) - epsilon1 for the displacement delta of the
/// beta-branch Bloch function. p is real on the rectangle boundary: the
/// infinite gap maps to the real segment (0, omega], the finite gap to
/// omega' + (0, omega).
pub fn lame_delta_from_energy(m: f64, epsilon1: f64) -> Result<Complex64> {
    let lat = build_lattice(EllipticModulus::new(m)?)?;
    delta_on_lattice(&lat, epsilon1).map(|(d, _)| d)
}

fn delta_on_lattice(lat: &LatticeData, epsilon1: f64) -> Result<(Complex64, SpectralRegion)> {
    let m = lat.m;
    let bands = lame_bands(m)?;
    let region = bands.classify(epsilon1);
    let target = 2.0 / 3.0 * (m + 1.0) - epsilon1;
    match region {
        SpectralRegion::InfiniteGap => {
            // p decreasing from +inf at 0 to e1 at omega
            let f = |s: f64| wp(Complex64::new(s, 0.0), lat).map_or(f64::NAN, |p| p.re) - target;
            let s = bisect_monotone(f, 1e-7, lat.omega);
            Ok((Complex64::new(s, 0.0), region))
        }
        SpectralRegion::FiniteGap => {
            // p(omega' + s) increasing from e3 to e2
            let f = |s: f64| {
                wp(Complex64::new(s, lat.omega_prime_imag), lat).map_or(f64::NAN, |p| p.re)
                    - target
            };
            let s = bisect_monotone(f, 1e-7, lat.omega - 1e-12);
            Ok((Complex64::new(s, lat.omega_prime_imag), region))
        }
        _ => Err(Error::Domain(format!(
            "epsilon1 = {epsilon1} is not strictly inside a spectral gap of the \
             Lame potential with m = {m} (edges {:?})",
            bands.band_edges
        ))),
    }
}

/// A validated Lame Bloch seed at a gap energy.
#[derive(Clone, Debug)]
pub struct LameSeed {
    m: f64,
    epsilon1: f64,
    branch: BlochBranch,
    region: SpectralRegion,
    lattice: LatticeData,
    /// Signed effective displacement (negated for the inverse branch).
    delta: Complex64,
    zeta_delta: Complex64,
    wp_delta: Complex64,
    wpp_delta: Complex64,
    zeta_delta_wp: Complex64,
    lnsig_wp: Complex64,
    lnsig_delta_wp: Complex64,
}

impl LameSeed {
    pub fn new(m: f64, epsilon1: f64, branch: BlochBranch) -> Result<Self> {
        let lat = build_lattice(EllipticModulus::new(m)?)?;
        let (delta0, region) = delta_on_lattice(&lat, epsilon1)?;
        let delta = match branch {
            BlochBranch::Beta => delta0,
            BlochBranch::InverseBeta => -delta0,
        };
        let wp_delta = wp(delta, &lat)?;
        let wpp_delta = wp_prime(delta, &lat)?;
        if wpp_delta.norm() < 1e-6 {
            return Err(Error::DegenerateSeed(format!(
                "p'(delta) ~ 0: epsilon1 = {epsilon1} is at a band edge"
            )));
        }
        let wprime = lat.omega_prime();
        let seed = Self {
            m,
            epsilon1,
            branch,
            region,
            zeta_delta: wzeta(delta, &lat)?,
            zeta_delta_wp: wzeta(delta + wprime, &lat)?,
            lnsig_wp: wsigma_log(wprime, &lat)?,
            lnsig_delta_wp: wsigma_log(delta + wprime, &lat)?,
            lattice: lat,
            delta,
            wp_delta,
            wpp_delta,
        };
        // round-trip of the displacement solve
        let back = 2.0 / 3.0 * (m + 1.0) - seed.wp_delta.re;
        if (back - epsilon1).abs() > 1e-10 * (1.0 + epsilon1.abs()) {
            return Err(Error::DegenerateSeed(format!(
                "delta solve round-trip error {:e}",
                (back - epsilon1).abs()
            )));
        }
        // gap energies carry |beta| != 1
        let (beta, _) = seed.bloch_factor();
        if (beta.norm() - 1.0).abs() < 1e-6 {
            return Err(Error::DegenerateSeed(
                "Bloch multiplier on the unit circle: energy not in an open gap".into(),
            ));
        }
        // verify the segment <-> gap assignment by the defining equations
        let spec = GridSpec::new(-1.0, 1.0, 2001)?;
        let (r_schrod, r_chain) = seed.confluent_seed().residuals(
            |x| lame_potential(m, x).unwrap_or(f64::NAN),
            &spec,
        )?;
        if r_schrod > 1e-6 || r_chain > 1e-4 {
            return Err(Error::DegenerateSeed(format!(
                "seed residuals too large (schrodinger {r_schrod:e}, chain {r_chain:e})"
            )));
        }
        Ok(seed)
    }

    pub fn modulus(&self) -> f64 {
        self.m
    }

    pub fn epsilon1(&self) -> f64 {
        self.epsilon1
    }

    pub fn branch(&self) -> BlochBranch {
        self.branch
    }

    pub fn region(&self) -> SpectralRegion {
        self.region
    }

    pub fn lattice(&self) -> &LatticeData {
        &self.lattice
    }

    /// Signed effective displacement.
    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    /// Period of the n = 1 potential, T = 2 K(m).
    pub fn period(&self) -> f64 {
        2.0 * self.lattice.omega
    }

    /// The Bloch seed
    /// u1(x) = [sigma(w')/sigma(delta+w')] [sigma(x+delta+w')/sigma(x+w')] e^{-x zeta(delta)}.
    pub fn bloch_u1(&self, x: f64) -> Result<Complex64> {
        let wprime = self.lattice.omega_prime();
        let xr = Complex64::new(x, 0.0);
        let ln = self.lnsig_wp - self.lnsig_delta_wp
            + wsigma_log(xr + self.delta + wprime, &self.lattice)?
            - wsigma_log(xr + wprime, &self.lattice)?
            - xr * self.zeta_delta;
        Ok(ln.exp())
    }

    /// Logarithmic derivative of u1:
    /// zeta(x+delta+w') - zeta(x+w') - zeta(delta).
    pub fn log_derivative(&self, x: f64) -> Result<Complex64> {
        let wprime = self.lattice.omega_prime();
        let xr = Complex64::new(x, 0.0);
        Ok(wzeta(xr + self.delta + wprime, &self.lattice)?
            - wzeta(xr + wprime, &self.lattice)?
            - self.zeta_delta)
    }

    pub fn bloch_u1_prime(&self, x: f64) -> Result<Complex64> {
        Ok(self.log_derivative(x)? * self.bloch_u1(x)?)
    }

    /// du1/deps = -[p'(delta)]^{-1} [zeta(x+delta+w') - zeta(delta+w') + x p(delta)] u1.
    pub fn du1_deps(&self, x: f64) -> Result<Complex64> {
        Ok(self.eps_prefactor(x)? * self.bloch_u1(x)?)
    }

    fn eps_prefactor(&self, x: f64) -> Result<Complex64> {
        let wprime = self.lattice.omega_prime();
        let xr = Complex64::new(x, 0.0);
        let bracket = wzeta(xr + self.delta + wprime, &self.lattice)? - self.zeta_delta_wp
            + xr * self.wp_delta;
        Ok(-bracket / self.wpp_delta)
    }

    pub fn d2u1_dxdeps(&self, x: f64) -> Result<Complex64> {
        let p = self.eps_prefactor(x)?;
        let pp = self.auxiliary_f(x)?; // d/dx of the prefactor
        Ok((pp + p * self.log_derivative(x)?) * self.bloch_u1(x)?)
    }

    /// f(x) = [p'(delta)]^{-1} [p(x+delta+w') - p(delta)], so that
    /// W(u1, du1/deps) = f u1^2.
    pub fn auxiliary_f(&self, x: f64) -> Result<Complex64> {
        let wprime = self.lattice.omega_prime();
        let xr = Complex64::new(x, 0.0);
        Ok((wp(xr + self.delta + wprime, &self.lattice)? - self.wp_delta) / self.wpp_delta)
    }

    /// (beta, quasimomentum kappa) with beta = e^{i kappa},
    /// beta = exp[2 delta zeta(omega) - 2 omega zeta(delta)], Re kappa in (-pi, pi].
    pub fn bloch_factor(&self) -> (Complex64, Complex64) {
        let eta = Complex64::new(self.lattice.eta(), 0.0);
        let exponent =
            2.0 * self.delta * eta - 2.0 * self.lattice.omega * self.zeta_delta;
        let beta = exponent.exp();
        let mut kappa = Complex64::new(0.0, -1.0) * exponent;
        let tau = 2.0 * std::f64::consts::PI;
        kappa.re -= tau * (kappa.re / tau).round();
        (beta, kappa)
    }

    /// Package the seed for the generic confluent machinery. Evaluation
    /// failures surface as NaN samples, which the susy operations reject.
    pub fn confluent_seed(&self) -> ConfluentSeed {
        let nan = Complex64::new(f64::NAN, f64::NAN);
        let s1 = self.clone();
        let s2 = self.clone();
        let s3 = self.clone();
        let s4 = self.clone();
        ConfluentSeed {
            epsilon1: self.epsilon1,
            u1: Box::new(move |x| s1.bloch_u1(x).unwrap_or(nan)),
            du1_dx: Box::new(move |x| s2.bloch_u1_prime(x).unwrap_or(nan)),
            du1_deps: Box::new(move |x| s3.du1_deps(x).unwrap_or(nan)),
            d2u1_dxdeps: Box::new(move |x| s4.d2u1_dxdeps(x).unwrap_or(nan)),
        }
    }
}

/// Closed-form partner potential
/// V + {2 + 4[zeta(x+delta+w') - zeta(x+w') - zeta(delta)] (D u1^{-2} + f)}
///       / (D u1^{-2} + f)^2.
pub fn lame_partner_closed_form(seed: &LameSeed, d: f64, x: f64) -> Result<f64> {
    let u = seed.bloch_u1(x)?;
    let f = seed.auxiliary_f(x)?;
    let den = d / (u * u) + f;
    let w = u * u * den; // = D + f u1^2
    if w.norm() < 1e-12 * (1.0 + d.abs()) {
        return Err(Error::SingularTransform { x });
    }
    let logd = seed.log_derivative(x)?;
    let v = lame_potential(seed.modulus(), x)?;
    let vt = v + (2.0 + 4.0 * logd * den) / (den * den);
    if !vt.re.is_finite() {
        return Err(Error::NonFinite(format!("Lame partner at x = {x}")));
    }
    if vt.im.abs() > IMAG_TOL * (1.0 + vt.re.abs()) {
        return Err(Error::ImaginaryResidue {
            what: format!("Lame partner at x = {x}"),
            imag: vt.im.abs(),
            tol: IMAG_TOL * (1.0 + vt.re.abs()),
        });
    }
    Ok(vt.re)
}
