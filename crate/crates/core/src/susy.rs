//! Model-independent confluent second-order SUSY machinery.
//!
//! The transformation function is w(x) = D + W(u1, du1/deps) where u1 solves
//! the stationary Schrodinger equation at the factorization energy and
//! du1/deps is its parametric derivative. Since w' = -u1^2 and
//! w'' = -2 u1 u1', the partner V - 2 [ln w]'' is evaluated through those
//! analytic derivatives; the library never differentiates ln w numerically.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ComplexGridFunction, GridFunction, GridSpec};
use crate::quad;

/// Imaginary parts of nominally real quantities must stay below this,
/// relative to the quantity's scale.
pub const IMAG_TOL: f64 = 1e-8;

type SeedFn = Box<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A factorization energy together with the four evaluable functions the
/// confluent differential formula needs.
pub struct ConfluentSeed {
    pub epsilon1: f64,
    /// u1(x), solution of the initial stationary Schrodinger equation.
    pub u1: SeedFn,
    /// d u1 / dx.
    pub du1_dx: SeedFn,
    /// d u1 / d epsilon1.
    pub du1_deps: SeedFn,
    /// d^2 u1 / (dx d epsilon1).
    pub d2u1_dxdeps: SeedFn,
}

impl ConfluentSeed {
    /// W(u1, du1/deps)(x) = u1 (du1/deps)' - u1' (du1/deps).
    pub fn wronskian_with_eps_derivative(&self, x: f64) -> Complex64 {
        (self.u1)(x) * (self.d2u1_dxdeps)(x) - (self.du1_dx)(x) * (self.du1_deps)(x)
    }

    /// The transformation function w(x) = D + W(u1, du1/deps)(x).
    pub fn w(&self, d: f64, x: f64) -> Complex64 {
        d + self.wronskian_with_eps_derivative(x)
    }

    /// Max-norm residuals of the two defining equations on a test grid:
    /// the Schrodinger residual of u1 and the Jordan-chain residual of
    /// du1/deps, both via second-order central differences in x.
    pub fn residuals(&self, v: impl Fn(f64) -> f64, spec: &GridSpec) -> Result<(f64, f64)> {
        let h = spec.dx();
        let mut r_schrod = 0.0_f64;
        let mut r_chain = 0.0_f64;
        let mut scale_u = 0.0_f64;
        let mut scale_d = 0.0_f64;
        for i in 1..spec.n_points - 1 {
            let x = spec.point(i);
            let vx = v(x);
            let (um, u0, up) = ((self.u1)(x - h), (self.u1)(x), (self.u1)(x + h));
            let upp = (up - 2.0 * u0 + um) / (h * h);
            r_schrod = r_schrod.max((-upp + (vx - self.epsilon1) * u0).norm());
            scale_u = scale_u.max(u0.norm());
            let (dm, d0, dp) = (
                (self.du1_deps)(x - h),
                (self.du1_deps)(x),
                (self.du1_deps)(x + h),
            );
            let dpp = (dp - 2.0 * d0 + dm) / (h * h);
            r_chain = r_chain.max((-dpp + (vx - self.epsilon1) * d0 - u0).norm());
            scale_d = scale_d.max(d0.norm());
        }
        if scale_u == 0.0 {
            return Err(Error::DegenerateSeed("u1 vanishes on test grid".into()));
        }
        Ok((r_schrod / scale_u, r_chain / scale_u.max(scale_d)))
    }
}

/// W(f, g) = f g' - f' g.
pub fn wronskian(f: Complex64, fprime: Complex64, g: Complex64, gprime: Complex64) -> Complex64 {
    f * gprime - fprime * g
}

/// Output of a confluent transformation.
#[derive(Clone, Debug)]
pub struct TransformResult {
    /// The partner potential.
    pub partner_potential: GridFunction,
    /// w(x) = D + W(u1, du1/deps).
    pub w_function: GridFunction,
    /// The created bound state, L2-normalized on the grid.
    pub bound_state: GridFunction,
    pub d: f64,
    pub epsilon1: f64,
}

/// Intertwining-operator coefficients g, h of the second-order operator,
/// with the confluent constants c = 0, d = epsilon1.
#[derive(Clone, Debug)]
pub struct IntertwinerCoefficients {
    pub g: GridFunction,
    pub h: GridFunction,
    pub d: f64,
}

/// One sample of a D-scan.
#[derive(Clone, Copy, Debug)]
pub struct ScanPoint {
    pub d: f64,
    pub singular: bool,
    /// Location of the sign change of w, when one exists on the grid.
    pub crossing: Option<f64>,
}

fn bisect_zero(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        if b - a < 1e-10 {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if (fa <= 0.0) == (fm <= 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Detect a zero of w on the grid. w must be real up to IMAG_TOL; the sign
/// structure is monotone (w' = -u1^2 <= 0) so one sign change is complete.
///
/// `d_scale` is |D| (or |w0|), the natural size of w on its flat side.
/// Since w is monotone with a finite limit there, a grid-endpoint minimum
/// far below that scale means w vanishes asymptotically: the parameter sits
/// on the boundary of the nonsingular domain (e.g. free particle, D = 0).
fn find_w_zero(
    w: &ComplexGridFunction,
    w_cont: impl Fn(f64) -> f64,
    d_scale: f64,
) -> Result<Option<f64>> {
    let mut min_abs = f64::INFINITY;
    let mut imin = 0;
    for (i, v) in w.values.iter().enumerate() {
        if v.norm() < min_abs {
            min_abs = v.norm();
            imin = i;
        }
    }
    for i in 0..w.len() - 1 {
        let a = w.values[i].re;
        let b = w.values[i + 1].re;
        if a == 0.0 {
            return Ok(Some(w.x(i)));
        }
        if a * b < 0.0 {
            return Ok(Some(bisect_zero(&w_cont, w.x(i), w.x(i + 1))));
        }
    }
    if min_abs < 1e-12 * (1.0 + d_scale) {
        return Ok(Some(w.x(imin)));
    }
    let boundary = imin == 0 || imin == w.len() - 1;
    if boundary && min_abs < 1e-4 * 1.0_f64.max(d_scale) {
        return Ok(Some(w.x(imin)));
    }
    Ok(None)
}

fn partner_from_w(
    u1: &ComplexGridFunction,
    du1: &ComplexGridFunction,
    w: &ComplexGridFunction,
    v: impl Fn(f64) -> f64,
    d: f64,
    epsilon1: f64,
    w_cont: impl Fn(f64) -> f64,
    d_scale: f64,
) -> Result<TransformResult> {
    u1.check_finite("u1")?;
    du1.check_finite("du1_dx")?;
    w.check_finite("w")?;
    if let Some(x) = find_w_zero(w, w_cont, d_scale)? {
        return Err(Error::SingularTransform { x });
    }
    let n = w.len();
    let mut vt = ComplexGridFunction {
        x0: w.x0,
        dx: w.dx,
        values: Vec::with_capacity(n),
    };
    let mut psi = ComplexGridFunction {
        x0: w.x0,
        dx: w.dx,
        values: Vec::with_capacity(n),
    };
    for i in 0..n {
        let x = w.x(i);
        let (u, up, wi) = (u1.values[i], du1.values[i], w.values[i]);
        // V - 2 [ln w]'' with w' = -u1^2, w'' = -2 u1 u1':
        //   V + 4 u1 u1' / w + 2 (u1^2 / w)^2
        let g = u * u / wi;
        vt.values
            .push(v(x) + 4.0 * u * up / wi + 2.0 * g * g);
        psi.values.push(u / wi);
    }
    let partner_potential = vt.into_real("partner potential", IMAG_TOL)?;
    let w_function = w.clone().into_real("w function", IMAG_TOL)?;
    // normalize psi by its trapezoidal L2 norm
    let norm2 = GridFunction {
        x0: psi.x0,
        dx: psi.dx,
        values: psi.values.iter().map(|p| p.norm_sqr()).collect(),
    }
    .trapezoid();
    if !(norm2 > 0.0) || !norm2.is_finite() {
        return Err(Error::NonFinite("bound state norm".into()));
    }
    let inv = 1.0 / norm2.sqrt();
    let psi = ComplexGridFunction {
        x0: psi.x0,
        dx: psi.dx,
        values: psi.values.iter().map(|p| p * inv).collect(),
    };
    let bound_state = psi.into_real("bound state", IMAG_TOL)?;
    Ok(TransformResult {
        partner_potential,
        w_function,
        bound_state,
        d,
        epsilon1,
    })
}

/// Confluent partner through the differential Wronskian formula:
/// w = D + W(u1, du1/deps), partner = V - 2 [ln w]''.
pub fn confluent_partner_differential(
    seed: &ConfluentSeed,
    d: f64,
    v: impl Fn(f64) -> f64,
    spec: &GridSpec,
) -> Result<TransformResult> {
    let u1 = ComplexGridFunction::from_fn(spec, &seed.u1);
    let du1 = ComplexGridFunction::from_fn(spec, &seed.du1_dx);
    let w = ComplexGridFunction::from_fn(spec, |x| seed.w(d, x));
    partner_from_w(&u1, &du1, &w, v, d, seed.epsilon1, |x| seed.w(d, x).re, d.abs())
}

/// Confluent partner through the integral formula:
/// w(x) = w0 - int_{x0}^x u1^2(y) dy, evaluated by adaptive quadrature.
/// Serves as the independent oracle for the differential route.
pub fn confluent_partner_integral(
    u1: impl Fn(f64) -> Complex64,
    du1_dx: impl Fn(f64) -> Complex64,
    w0: f64,
    x0: f64,
    epsilon1: f64,
    v: impl Fn(f64) -> f64,
    spec: &GridSpec,
) -> Result<TransformResult> {
    let w = cumulative_minus_integral(|y| u1(y) * u1(y), w0, x0, spec)?;
    let u1g = ComplexGridFunction::from_fn(spec, &u1);
    let du1g = ComplexGridFunction::from_fn(spec, &du1_dx);
    // continuous w for crossing refinement: re-integrate from the anchor
    let w_cont = |x: f64| -> f64 {
        let i = quad::integrate_complex(|y| u1(y) * u1(y), x0, x, 1e-12, 1e-12)
            .map(|c| c.re)
            .unwrap_or(f64::NAN);
        w0 - i
    };
    partner_from_w(&u1g, &du1g, &w, v, f64::NAN, epsilon1, w_cont, w0.abs()).map(|mut r| {
        r.d = w0; // integral route carries w0 instead of D
        r
    })
}

/// w0 - int_{x0}^{x_i} f(y) dy accumulated across grid points.
fn cumulative_minus_integral(
    f: impl Fn(f64) -> Complex64,
    w0: f64,
    x0: f64,
    spec: &GridSpec,
) -> Result<ComplexGridFunction> {
    let n = spec.n_points;
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    // nearest grid index to the anchor
    let seg = quad::integrate_complex(&f, x0, spec.x_min, 1e-13, 1e-13)?;
    let mut acc = seg; // int_{x0}^{x_min}
    values[0] = w0 - acc;
    for (i, slot) in values.iter_mut().enumerate().skip(1) {
        acc += quad::integrate_complex(&f, spec.point(i - 1), spec.point(i), 1e-13, 1e-13)?;
        *slot = w0 - acc;
    }
    Ok(ComplexGridFunction {
        x0: spec.x_min,
        dx: spec.dx(),
        values,
    })
}

/// u1-orthogonal solution and the Jordan-chain solution on a grid,
/// carrying values and x-derivatives.
#[derive(Clone, Debug)]
pub struct FunctionOnGrid {
    pub values: ComplexGridFunction,
    pub derivative: ComplexGridFunction,
}

/// u1_perp(x) = u1(x) int_{x_a}^x u1^{-2}(y) dy, with W(u1, u1_perp) = 1.
pub fn orthogonal_solution(
    u1: impl Fn(f64) -> Complex64,
    du1_dx: impl Fn(f64) -> Complex64,
    anchor: f64,
    spec: &GridSpec,
) -> Result<FunctionOnGrid> {
    // reject nodes of u1 on the integration path
    let lo = spec.x_min.min(anchor);
    let hi = spec.x_max.max(anchor);
    let probes = 8 * spec.n_points;
    let mut max_abs = 0.0_f64;
    let mut min_abs = f64::INFINITY;
    let mut min_x = lo;
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=probes {
        let x = lo + (hi - lo) * i as f64 / probes as f64;
        let u = u1(x);
        max_abs = max_abs.max(u.norm());
        if u.norm() < min_abs {
            min_abs = u.norm();
            min_x = x;
        }
        if let Some((px, pu)) = prev {
            if pu * u.re < 0.0 && u.im.abs() < IMAG_TOL * (1.0 + u.norm()) {
                return Err(Error::NodeOnPath {
                    x: bisect_zero(|t| u1(t).re, px, x),
                });
            }
        }
        prev = Some((x, u.re));
    }
    if min_abs < 1e-10 * max_abs {
        return Err(Error::NodeOnPath { x: min_x });
    }
    let integral = cumulative_minus_integral(|y| 1.0 / (u1(y) * u1(y)), 0.0, anchor, spec)?;
    let n = spec.n_points;
    let mut values = Vec::with_capacity(n);
    let mut derivative = Vec::with_capacity(n);
    for i in 0..n {
        let x = spec.point(i);
        let integ = -integral.values[i]; // cumulative_minus returns -int
        let (u, up) = (u1(x), du1_dx(x));
        values.push(u * integ);
        derivative.push(up * integ + 1.0 / u);
    }
    Ok(FunctionOnGrid {
        values: ComplexGridFunction {
            x0: spec.x_min,
            dx: spec.dx(),
            values,
        },
        derivative: ComplexGridFunction {
            x0: spec.x_min,
            dx: spec.dx(),
            values: derivative,
        },
    })
}

/// General Jordan-chain partner u2 = C u1 + D u1_perp + du1/deps,
/// satisfying (H - epsilon1) u2 = u1 with W(u1, u2) = D + W(u1, du1/deps).
pub fn jordan_chain_u2(
    seed: &ConfluentSeed,
    c: f64,
    d: f64,
    anchor: f64,
    spec: &GridSpec,
) -> Result<FunctionOnGrid> {
    let perp = orthogonal_solution(&seed.u1, &seed.du1_dx, anchor, spec)?;
    let n = spec.n_points;
    let mut values = Vec::with_capacity(n);
    let mut derivative = Vec::with_capacity(n);
    for i in 0..n {
        let x = spec.point(i);
        values.push(c * (seed.u1)(x) + d * perp.values.values[i] + (seed.du1_deps)(x));
        derivative.push(
            c * (seed.du1_dx)(x) + d * perp.derivative.values[i] + (seed.d2u1_dxdeps)(x),
        );
    }
    Ok(FunctionOnGrid {
        values: ComplexGridFunction {
            x0: spec.x_min,
            dx: spec.dx(),
            values,
        },
        derivative: ComplexGridFunction {
            x0: spec.x_min,
            dx: spec.dx(),
            values: derivative,
        },
    })
}

/// Coefficients of the intertwining operator B+ for a nonsingular result:
/// g = -(ln w)' = u1^2 / w and h = -g'/2 + g^2/2 - V + epsilon1.
pub fn intertwiner_coefficients(
    seed: &ConfluentSeed,
    result: &TransformResult,
    v: impl Fn(f64) -> f64,
) -> Result<IntertwinerCoefficients> {
    let n = result.w_function.len();
    let mut g = Vec::with_capacity(n);
    let mut h = Vec::with_capacity(n);
    for i in 0..n {
        let x = result.w_function.x(i);
        let u = (seed.u1)(x);
        let up = (seed.du1_dx)(x);
        let w = Complex64::new(result.w_function.values[i], 0.0);
        let gi = u * u / w;
        // g' = 2 u1 u1'/w + (u1^2/w)^2  (again via w' = -u1^2)
        let gpi = 2.0 * u * up / w + gi * gi;
        g.push(gi);
        h.push(-0.5 * gpi + 0.5 * gi * gi - v(x) + seed.epsilon1);
    }
    let gg = ComplexGridFunction {
        x0: result.w_function.x0,
        dx: result.w_function.dx,
        values: g,
    }
    .into_real("intertwiner g", IMAG_TOL)?;
    let hh = ComplexGridFunction {
        x0: result.w_function.x0,
        dx: result.w_function.dx,
        values: h,
    }
    .into_real("intertwiner h", IMAG_TOL)?;
    Ok(IntertwinerCoefficients {
        g: gg,
        h: hh,
        d: seed.epsilon1,
    })
}

/// Non-confluent two-seed Wronskian partner
/// V - 2 [ln W(u_a, u_b)]'' with the analytic derivative
/// W' = (eps_a - eps_b) u_a u_b.
#[allow(clippy::too_many_arguments)]
pub fn nonconfluent_partner(
    ua: impl Fn(f64) -> Complex64,
    dua_dx: impl Fn(f64) -> Complex64,
    eps_a: f64,
    ub: impl Fn(f64) -> Complex64,
    dub_dx: impl Fn(f64) -> Complex64,
    eps_b: f64,
    v: impl Fn(f64) -> f64,
    spec: &GridSpec,
) -> Result<GridFunction> {
    if eps_a == eps_b {
        return Err(Error::Domain(
            "equal factorization energies: use the confluent operations".into(),
        ));
    }
    let wr = |x: f64| wronskian(ua(x), dua_dx(x), ub(x), dub_dx(x));
    let w = ComplexGridFunction::from_fn(spec, wr);
    w.check_finite("wronskian")?;
    if let Some(x) = find_w_zero(&w, |x| wr(x).re, 1.0)? {
        return Err(Error::SingularTransform { x });
    }
    let de = eps_a - eps_b;
    let mut vt = Vec::with_capacity(spec.n_points);
    for i in 0..spec.n_points {
        let x = spec.point(i);
        let wi = w.values[i];
        let wp = de * ua(x) * ub(x);
        let wpp = de * (dua_dx(x) * ub(x) + ua(x) * dub_dx(x));
        let r = wp / wi;
        vt.push(v(x) - 2.0 * (wpp / wi - r * r));
    }
    ComplexGridFunction {
        x0: spec.x_min,
        dx: spec.dx(),
        values: vt,
    }
    .into_real("nonconfluent partner", IMAG_TOL)
}

/// Scan a D-interval, reporting singularity and the crossing of w when
/// there is one. w is monotone (w' = -u1^2), so at most one crossing exists.
pub fn singularity_scan(
    seed: &ConfluentSeed,
    d_min: f64,
    d_max: f64,
    samples: usize,
    spec: &GridSpec,
) -> Result<Vec<ScanPoint>> {
    if samples < 1 || !(d_max >= d_min) {
        return Err(Error::Domain(format!(
            "invalid scan range [{d_min}, {d_max}] with {samples} samples"
        )));
    }
    let wr = ComplexGridFunction::from_fn(spec, |x| seed.wronskian_with_eps_derivative(x));
    wr.check_finite("seed wronskian")?;
    let mut out = Vec::with_capacity(samples);
    for k in 0..samples {
        let d = if samples == 1 {
            d_min
        } else {
            d_min + (d_max - d_min) * k as f64 / (samples - 1) as f64
        };
        let w = ComplexGridFunction {
            x0: wr.x0,
            dx: wr.dx,
            values: wr.values.iter().map(|v| v + d).collect(),
        };
        let crossing = find_w_zero(&w, |x| seed.w(d, x).re, d.abs())?;
        out.push(ScanPoint {
            d,
            singular: crossing.is_some(),
            crossing,
        });
    }
    Ok(out)
}
