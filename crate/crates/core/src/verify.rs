//! Independent numerical checks: finite-difference Schrodinger residuals,
//! a tridiagonal bound-state eigensolver, periodic band edges, and a
//! finite-difference probe for parametric derivatives.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{GridFunction, GridSpec};

/// Maximum of |-u'' + (V - E) u| / max|u| over interior grid points,
/// with u'' taken by the second-order central difference.
pub fn schrodinger_residual(
    u: impl Fn(f64) -> f64,
    v: impl Fn(f64) -> f64,
    energy: f64,
    spec: &GridSpec,
) -> f64 {
    let h = spec.dx();
    let mut scale = 0.0_f64;
    let mut worst = 0.0_f64;
    for i in 1..spec.n_points - 1 {
        let x = spec.point(i);
        let (um, u0, up) = (u(x - h), u(x), u(x + h));
        scale = scale.max(u0.abs());
        let r = -(up - 2.0 * u0 + um) / (h * h) + (v(x) - energy) * u0;
        worst = worst.max(r.abs());
    }
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

/// Complex-sample variant of [`schrodinger_residual`].
pub fn schrodinger_residual_complex(
    u: impl Fn(f64) -> Complex64,
    v: impl Fn(f64) -> f64,
    energy: f64,
    spec: &GridSpec,
) -> f64 {
    let h = spec.dx();
    let mut scale = 0.0_f64;
    let mut worst = 0.0_f64;
    for i in 1..spec.n_points - 1 {
        let x = spec.point(i);
        let (um, u0, up) = (u(x - h), u(x), u(x + h));
        scale = scale.max(u0.norm());
        let r = -(up - 2.0 * u0 + um) / (h * h) + (v(x) - energy) * u0;
        worst = worst.max(r.norm());
    }
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Boundary {
    /// u = 0 at both ends of the domain.
    Dirichlet,
    /// u(x + L) = u(x) on a domain of length L (x_max excluded).
    Periodic,
}

#[derive(Clone, Copy, Debug)]
pub struct EigensolveConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
    pub boundary: Boundary,
    /// Only eigenvalues inside (lo, hi) are returned; None keeps everything
    /// the discretization produces.
    pub energy_window: Option<(f64, f64)>,
}

/// Eigenvalues (ascending) and L2-normalized grid eigenfunctions.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub energies: Vec<f64>,
    pub states: Vec<GridFunction>,
}

/// Solve -u'' + V u = E u on the configured grid.
pub fn eigensolve(v: impl Fn(f64) -> f64, config: &EigensolveConfig) -> Result<SpectrumReport> {
    match config.boundary {
        Boundary::Dirichlet => eigensolve_dirichlet(v, config),
        Boundary::Periodic => eigensolve_periodic(v, config),
    }
}

fn eigensolve_dirichlet(
    v: impl Fn(f64) -> f64,
    config: &EigensolveConfig,
) -> Result<SpectrumReport> {
    let spec = GridSpec::new(config.x_min, config.x_max, config.n_points)?;
    let h = spec.dx();
    let inv_h2 = 1.0 / (h * h);
    let n = config.n_points - 2; // interior unknowns
    if n < 3 {
        return Err(Error::Eigensolver("grid too small".into()));
    }
    let diag: Vec<f64> = (1..=n)
        .map(|i| 2.0 * inv_h2 + v(spec.point(i)))
        .collect();
    if diag.iter().any(|d| !d.is_finite()) {
        return Err(Error::NonFinite("potential sample in eigensolve".into()));
    }
    let off = -inv_h2;

    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, &d) in diag.iter().enumerate() {
        let r = if i == 0 || i == n - 1 {
            off.abs()
        } else {
            2.0 * off.abs()
        };
        lo = lo.min(d - r);
        hi = hi.max(d + r);
    }
    let (win_lo, win_hi) = match config.energy_window {
        Some((a, b)) if a < b => (a.max(lo), b.min(hi)),
        Some((a, b)) => {
            return Err(Error::Domain(format!("empty energy window ({a}, {b})")));
        }
        None => (lo, hi),
    };
    let k_lo = sturm_count(&diag, off, win_lo);
    let k_hi = sturm_count(&diag, off, win_hi);

    let mut energies = Vec::with_capacity(k_hi - k_lo);
    let mut states = Vec::with_capacity(k_hi - k_lo);
    for k in k_lo..k_hi {
        let lambda = bisect_eigenvalue(&diag, off, k, lo, hi);
        energies.push(lambda);
        states.push(inverse_iteration(&diag, off, lambda, &spec)?);
    }
    Ok(SpectrumReport { energies, states })
}

/// Number of eigenvalues of the tridiagonal matrix below `lambda`,
/// by the Sturm sequence of leading-principal-minor pivots.
fn sturm_count(diag: &[f64], off: f64, lambda: f64) -> usize {
    let pivmin = 1e-300;
    let off2 = off * off;
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        q = if i == 0 {
            d - lambda
        } else {
            d - lambda - off2 / q
        };
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn bisect_eigenvalue(diag: &[f64], off: f64, k: usize, mut lo: f64, mut hi: f64) -> f64 {
    let scale = hi.abs().max(lo.abs()).max(1.0);
    while hi - lo > 1e-13 * scale {
        let mid = 0.5 * (lo + hi);
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// One eigenvector by shifted inverse iteration with a pivoting
/// tridiagonal solve; returns the state on the full grid with the
/// boundary zeros reattached, L2-normalized.
fn inverse_iteration(diag: &[f64], off: f64, lambda: f64, spec: &GridSpec) -> Result<GridFunction> {
    let n = diag.len();
    let mut y: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.3 * ((i * 2654435769) as f64 % 1.0e3) / 1.0e3)
        .collect();
    for _ in 0..4 {
        y = solve_shifted(diag, off, lambda, &y)?;
        let norm = y.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Eigensolver("inverse iteration collapsed".into()));
        }
        for a in &mut y {
            *a /= norm;
        }
    }
    let mut values = Vec::with_capacity(n + 2);
    values.push(0.0);
    values.extend_from_slice(&y);
    values.push(0.0);
    let mut state = GridFunction {
        x0: spec.x_min,
        dx: spec.dx(),
        values,
    };
    let nrm = state.trapezoid_of(|u| u * u).sqrt();
    for a in &mut state.values {
        *a /= nrm;
    }
    // deterministic sign: positive lobe first
    if let Some(first) = state.values.iter().find(|a| a.abs() > 1e-8) {
        if *first < 0.0 {
            for a in &mut state.values {
                *a = -*a;
            }
        }
    }
    Ok(state)
}

/// Solve (T - lambda I) y = b for symmetric tridiagonal T with constant
/// off-diagonal, Gaussian elimination with partial pivoting (one fill-in
/// diagonal).
fn solve_shifted(diag: &[f64], off: f64, lambda: f64, rhs0: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut b: Vec<f64> = diag.iter().map(|v| v - lambda).collect(); // diagonal
    let mut c = vec![0.0; n]; // row i, column i+1
    let mut e = vec![0.0; n]; // row i, column i+2 (fill-in from pivoting)
    for ci in c.iter_mut().take(n - 1) {
        *ci = off;
    }
    let mut rhs = rhs0.to_vec();
    let guard = |p: f64| if p.abs() < 1e-300 { 1e-300 } else { p };
    for i in 0..n - 1 {
        // row i+1 enters this step as (off, b[i+1], c[i+1]) in columns
        // i, i+1, i+2
        let mut sub = off;
        if off.abs() > b[i].abs() {
            let (bi, ci) = (b[i], c[i]);
            let (bi1, ci1) = (b[i + 1], if i + 1 < n - 1 { c[i + 1] } else { 0.0 });
            b[i] = off;
            c[i] = bi1;
            e[i] = ci1;
            sub = bi;
            b[i + 1] = ci;
            if i + 1 < n - 1 {
                c[i + 1] = 0.0;
            }
            rhs.swap(i, i + 1);
        }
        let piv = guard(b[i]);
        let f = sub / piv;
        b[i] = piv;
        b[i + 1] -= f * c[i];
        if i + 1 < n - 1 {
            c[i + 1] -= f * e[i];
        }
        rhs[i + 1] -= f * rhs[i];
    }
    let mut y = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = rhs[i];
        if i + 1 < n {
            s -= c[i] * y[i + 1];
        }
        if i + 2 < n {
            s -= e[i] * y[i + 2];
        }
        y[i] = s / guard(b[i]);
    }
    if y.iter().any(|a| !a.is_finite()) {
        return Err(Error::Eigensolver("tridiagonal solve produced NaN".into()));
    }
    Ok(y)
}

fn eigensolve_periodic(
    v: impl Fn(f64) -> f64,
    config: &EigensolveConfig,
) -> Result<SpectrumReport> {
    let n = config.n_points;
    if n < 5 {
        return Err(Error::Eigensolver("grid too small".into()));
    }
    let length = config.x_max - config.x_min;
    if !(length > 0.0) {
        return Err(Error::Domain("periodic domain has no length".into()));
    }
    let h = length / n as f64;
    let inv_h2 = 1.0 / (h * h);
    let mut mat = nalgebra::DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let x = config.x_min + i as f64 * h;
        let vx = v(x);
        if !vx.is_finite() {
            return Err(Error::NonFinite("potential sample in eigensolve".into()));
        }
        mat[(i, i)] = 2.0 * inv_h2 + vx;
        let j = (i + 1) % n;
        mat[(i, j)] = -inv_h2;
        mat[(j, i)] = -inv_h2;
    }
    let eig = nalgebra::SymmetricEigen::new(mat);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut energies = Vec::new();
    let mut states = Vec::new();
    for &idx in &order {
        let e = eig.eigenvalues[idx];
        if let Some((a, b)) = config.energy_window {
            if e <= a || e >= b {
                continue;
            }
        }
        energies.push(e);
        let col = eig.eigenvectors.column(idx);
        let mut state = GridFunction {
            x0: config.x_min,
            dx: h,
            values: col.iter().copied().collect(),
        };
        let nrm = state.trapezoid_of(|u| u * u).sqrt();
        if nrm > 0.0 {
            for a in &mut state.values {
                *a /= nrm;
            }
        }
        states.push(state);
    }
    Ok(SpectrumReport { energies, states })
}

/// First three band edges of a periodic potential, located by Floquet
/// counting: on `n_periods` periods (must be even) the eigenvalues with
/// quasimomentum exactly 0 or pi sit at sorted positions 0, n_periods - 1
/// and n_periods, which bracket the first gap.
pub fn band_edges_numeric(
    v: impl Fn(f64) -> f64,
    period: f64,
    n_periods: usize,
    points_per_period: usize,
) -> Result<[f64; 3]> {
    if n_periods < 2 || !n_periods.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "n_periods must be even and >= 2, got {n_periods}"
        )));
    }
    if !(period > 0.0) {
        return Err(Error::Domain(format!("period must be positive, got {period}")));
    }
    let n = n_periods * points_per_period;
    let config = EigensolveConfig {
        x_min: 0.0,
        x_max: period * n_periods as f64,
        n_points: n,
        boundary: Boundary::Periodic,
        energy_window: None,
    };
    let report = eigensolve(v, &config)?;
    if report.energies.len() <= n_periods {
        return Err(Error::Eigensolver("too few eigenvalues for band edges".into()));
    }
    Ok([
        report.energies[0],
        report.energies[n_periods - 1],
        report.energies[n_periods],
    ])
}

/// Central-difference derivative in a parameter, for probing analytic
/// parametric derivatives like du1/deps.
pub fn fd_parametric_derivative(
    f: impl Fn(f64) -> Result<Complex64>,
    at: f64,
    h: f64,
) -> Result<Complex64> {
    if !(h > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    Ok((f(at + h)? - f(at - h)?) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_detects_wrong_energy() {
        let spec = GridSpec::new(0.1, 3.0, 301).unwrap();
        let good = schrodinger_residual(|x| x.sin(), |_| 0.0, 1.0, &spec);
        let bad = schrodinger_residual(|x| x.sin(), |_| 0.0, 1.5, &spec);
        assert!(good < 1e-4, "good = {good}");
        assert!(bad > 0.1, "bad = {bad}");
    }

    #[test]
    fn particle_in_a_box() {
        let l = std::f64::consts::PI;
        let config = EigensolveConfig {
            x_min: 0.0,
            x_max: l,
            n_points: 2001,
            boundary: Boundary::Dirichlet,
            energy_window: Some((0.0, 10.5)),
        };
        let report = eigensolve(|_| 0.0, &config).unwrap();
        assert_eq!(report.energies.len(), 3); // E = 1, 4, 9
        for (k, e) in report.energies.iter().enumerate() {
            let exact = ((k + 1) * (k + 1)) as f64;
            assert!((e - exact).abs() < 1e-4 * exact, "E_{k} = {e}");
        }
        // ground state matches sin(x) up to normalization
        let gs = &report.states[0];
        let amp = (2.0 / l).sqrt();
        for i in (0..gs.values.len()).step_by(100) {
            let x = gs.x0 + i as f64 * gs.dx;
            assert!((gs.values[i] - amp * x.sin()).abs() < 1e-3);
        }
    }

    #[test]
    fn free_periodic_spectrum() {
        let config = EigensolveConfig {
            x_min: 0.0,
            x_max: 2.0 * std::f64::consts::PI,
            n_points: 400,
            boundary: Boundary::Periodic,
            energy_window: Some((-0.5, 1.5)),
        };
        let report = eigensolve(|_| 0.0, &config).unwrap();
        // E = 0 once, E = 1 twice
        assert_eq!(report.energies.len(), 3);
        assert!(report.energies[0].abs() < 1e-3);
        assert!((report.energies[1] - 1.0).abs() < 1e-3);
        assert!((report.energies[2] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn mathieu_style_gap_opens() {
        // V = 2 cos(2x): first gap edges near 1 +- 1 for weak coupling
        let edges = band_edges_numeric(|x| 2.0 * (2.0 * x).cos(), std::f64::consts::PI, 8, 60)
            .unwrap();
        assert!(edges[0] < edges[1] && edges[1] < edges[2]);
        assert!(edges[2] - edges[1] > 0.5, "gap width {}", edges[2] - edges[1]);
    }

    #[test]
    fn parametric_fd_matches_analytic() {
        let f = |e: f64| Ok(Complex64::new((2.0 * e).exp(), 0.0));
        let d = fd_parametric_derivative(f, 0.3, 1e-5).unwrap();
        assert!((d.re - 2.0 * (0.6_f64).exp()).abs() < 1e-8);
        assert!(fd_parametric_derivative(f, 0.3, 0.0).is_err());
    }
}
