//! Uniform 1D grids and sampled functions on them.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Description of a uniform grid: `n_points` samples covering `[x_min, x_max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() || x_max <= x_min {
            return Err(Error::Domain(format!(
                "invalid grid interval [{x_min}, {x_max}]"
            )));
        }
        if n_points < 5 {
            return Err(Error::Domain(format!(
                "grid needs at least 5 points, got {n_points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }
}

/// Real-valued function sampled on a uniform grid.
#[derive(Clone, Debug)]
pub struct GridFunction {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<f64>,
}

/// Complex-valued function sampled on a uniform grid.
#[derive(Clone, Debug)]
pub struct ComplexGridFunction {
    pub x0: f64,
    pub dx: f64,
    pub values: Vec<Complex64>,
}

impl GridFunction {
    pub fn from_fn(spec: &GridSpec, f: impl Fn(f64) -> f64) -> Self {
        Self {
            x0: spec.x_min,
            dx: spec.dx(),
            values: spec.points().map(f).collect(),
        }
    }

    pub fn try_from_fn(spec: &GridSpec, f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let values = spec.points().map(f).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            x0: spec.x_min,
            dx: spec.dx(),
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |i| self.x(i))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Trapezoidal integral of `f(value)` over the grid.
    pub fn trapezoid_of(&self, f: impl Fn(f64) -> f64) -> f64 {
        if self.len() < 2 {
            return 0.0;
        }
        let inner: f64 = self.values[1..self.len() - 1].iter().map(|&v| f(v)).sum();
        self.dx * (inner + 0.5 * (f(self.values[0]) + f(self.values[self.len() - 1])))
    }

    /// Trapezoidal integral of the sampled values over the grid.
    pub fn trapezoid(&self) -> f64 {
        if self.len() < 2 {
            return 0.0;
        }
        let inner: f64 = self.values[1..self.len() - 1].iter().sum();
        self.dx * (inner + 0.5 * (self.values[0] + self.values[self.len() - 1]))
    }

    pub fn check_finite(&self, what: &str) -> Result<()> {
        if self.len() < 5 {
            return Err(Error::GridMismatch(format!("{what}: fewer than 5 samples")));
        }
        for (i, v) in self.values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("{what} at x = {}", self.x(i))));
            }
        }
        Ok(())
    }

    pub fn same_grid(&self, other: &GridFunction) -> bool {
        self.len() == other.len()
            && (self.x0 - other.x0).abs() < 1e-12 * (1.0 + self.x0.abs())
            && (self.dx - other.dx).abs() < 1e-12 * self.dx.abs()
    }
}

impl ComplexGridFunction {
    pub fn from_fn(spec: &GridSpec, f: impl Fn(f64) -> Complex64) -> Self {
        Self {
            x0: spec.x_min,
            dx: spec.dx(),
            values: spec.points().map(f).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.norm()))
    }

    pub fn check_finite(&self, what: &str) -> Result<()> {
        for (i, v) in self.values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite(format!("{what} at x = {}", self.x(i))));
            }
        }
        Ok(())
    }

    /// Discard imaginary parts after asserting they are below `tol`
    /// relative to the overall scale of the samples.
    pub fn into_real(self, what: &str, tol: f64) -> Result<GridFunction> {
        let scale = 1.0_f64.max(self.max_abs());
        let mut worst = 0.0_f64;
        for v in &self.values {
            worst = worst.max(v.im.abs());
        }
        if worst > tol * scale {
            return Err(Error::ImaginaryResidue {
                what: what.to_string(),
                imag: worst,
                tol: tol * scale,
            });
        }
        Ok(GridFunction {
            x0: self.x0,
            dx: self.dx,
            values: self.values.into_iter().map(|v| v.re).collect(),
        })
    }
}
