//! Free-particle seeds and their closed-form confluent partners.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::susy::ConfluentSeed;

/// Which exponential solution of the free particle serves as the seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// u1 = exp(+kappa1 x), vanishing at the left boundary.
    Growing,
    /// u1 = exp(-kappa1 x), vanishing at the right boundary.
    Decaying,
}

/// Free-particle seed with epsilon1 = -kappa1^2 < 0.
#[derive(Clone, Copy, Debug)]
pub struct FreeParticleSeed {
    pub kappa1: f64,
    pub orientation: Orientation,
}

impl FreeParticleSeed {
    pub fn new(kappa1: f64, orientation: Orientation) -> Result<Self> {
        if !(kappa1 > 0.0) || !kappa1.is_finite() {
            return Err(Error::Domain(format!(
                "free-particle seed needs kappa1 > 0, got {kappa1}"
            )));
        }
        Ok(Self {
            kappa1,
            orientation,
        })
    }

    pub fn epsilon1(&self) -> f64 {
        -self.kappa1 * self.kappa1
    }

    /// Package u1, u1', du1/deps and its x-derivative.
    ///
    /// For u1 = exp(s kappa x) with s = +-1 the chain rule gives
    /// du1/deps = -s x u1 / (2 kappa).
    pub fn confluent_seed(&self) -> ConfluentSeed {
        let k = self.kappa1;
        let s = match self.orientation {
            Orientation::Growing => 1.0,
            Orientation::Decaying => -1.0,
        };
        ConfluentSeed {
            epsilon1: self.epsilon1(),
            u1: Box::new(move |x| Complex64::new((s * k * x).exp(), 0.0)),
            du1_dx: Box::new(move |x| Complex64::new(s * k * (s * k * x).exp(), 0.0)),
            du1_deps: Box::new(move |x| {
                Complex64::new(-s * x * (s * k * x).exp() / (2.0 * k), 0.0)
            }),
            d2u1_dxdeps: Box::new(move |x| {
                Complex64::new(-s * (1.0 + s * k * x) * (s * k * x).exp() / (2.0 * k), 0.0)
            }),
        }
    }
}

/// Closed-form confluent partner of the free particle for the growing seed:
/// 16 D kappa^3 e^{2 kappa x} / (2 D kappa - e^{2 kappa x})^2.
pub fn free_partner_closed_form(kappa1: f64, d: f64, x: f64) -> Result<f64> {
    if !(kappa1 > 0.0) {
        return Err(Error::Domain(format!("kappa1 must be positive, got {kappa1}")));
    }
    let e = (2.0 * kappa1 * x).exp();
    let den = 2.0 * d * kappa1 - e;
    if den.abs() < 1e-12 * (1.0 + e.abs()) {
        return Err(Error::SingularTransform { x });
    }
    Ok(16.0 * d * kappa1.powi(3) * e / (den * den))
}

/// Poschl-Teller well -2 kappa^2 sech^2[kappa (x - x0)], the one-bound-state
/// reflectionless form every nonsingular free-particle partner takes.
pub fn poschl_teller(kappa1: f64, x0: f64, x: f64) -> f64 {
    let s = 1.0 / (kappa1 * (x - x0)).cosh();
    -2.0 * kappa1 * kappa1 * s * s
}

/// The D value that centres the partner well at x0:
/// D = -(2 kappa1)^{-1} e^{2 kappa1 x0}.
pub fn poschl_teller_d(kappa1: f64, x0: f64) -> f64 {
    -(2.0 * kappa1 * x0).exp() / (2.0 * kappa1)
}
