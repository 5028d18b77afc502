//! Uniform 1-d grids and the sampled functions and curves that live on them.

use crate::error::{invalid, Error, Result};

/// Uniform grid `origin + i·h`, `i = 0..n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1d {
    origin: f64,
    h: f64,
    n: usize,
}

impl Grid1d {
    pub fn new(origin: f64, h: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 nodes, got {n}"
            )));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "spacing must be positive, got {h}"
            )));
        }
        if !origin.is_finite() {
            return Err(Error::InvalidGrid("origin must be finite".into()));
        }
        Ok(Self { origin, h, n })
    }

    /// Grid on `[-half_width, half_width]` with spacing as close to `h` as the
    /// node count allows. The node count is always odd so 0 is a node.
    pub fn symmetric(half_width: f64, h: f64) -> Result<Self> {
        if !(half_width > 0.0 && h > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half-width {half_width} and spacing {h} must be positive"
            )));
        }
        let half = (half_width / h).round().max(1.0) as usize;
        Self::new(-half_width, half_width / half as f64, 2 * half + 1)
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn spacing(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, i: usize) -> f64 {
        self.origin + i as f64 * self.h
    }

    pub fn end(&self) -> f64 {
        self.node(self.n - 1)
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.node(i))
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.origin + self.end())
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.end() - self.origin)
    }
}

/// Function values on a [`Grid1d`].
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction {
    grid: Grid1d,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(grid: Grid1d, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sampled function values"));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1d, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().map(f).collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: Grid1d, c: f64) -> Result<Self> {
        Self::new(grid, vec![c; grid.len()])
    }

    pub fn grid(&self) -> &Grid1d {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Linear interpolation; outside the grid the edge value is held.
    pub fn eval(&self, x: f64) -> f64 {
        let g = &self.grid;
        let s = (x - g.origin()) / g.spacing();
        if s.is_nan() || s <= 0.0 {
            return self.values[0];
        }
        let last = g.len() - 1;
        if s >= last as f64 {
            return self.values[last];
        }
        let i = s.floor() as usize;
        let frac = s - i as f64;
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }

    pub fn integral(&self) -> f64 {
        crate::quadrature::trapezoid(&self.values, self.grid.spacing())
    }

    pub fn sup_distance(&self, other: &SampledFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Values on the uniform time grid `tau0 + i·h`.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    tau0: f64,
    h: f64,
    values: Vec<f64>,
}

impl SampledCurve {
    pub fn new(tau0: f64, h: f64, values: Vec<f64>) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) || !tau0.is_finite() {
            return Err(invalid("h", format!("step must be positive, got {h}")));
        }
        if values.is_empty() {
            return Err(invalid("values", "curve needs at least one value"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("curve values"));
        }
        Ok(Self { tau0, h, values })
    }

    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.tau0 + i as f64 * self.h
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |i| self.time(i))
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("non-empty curve")
    }

    pub fn sup_distance(&self, other: &SampledCurve) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Uniform time grid starting at 0 used to request curves from solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    pub step: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(step: f64, steps: usize) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(invalid("step", format!("must be positive, got {step}")));
        }
        Ok(Self { step, steps })
    }

    /// Grid covering `[0, horizon]`; the step is shrunk so it divides `horizon`.
    pub fn covering(horizon: f64, max_step: f64) -> Result<Self> {
        if !(horizon >= 0.0 && horizon.is_finite()) {
            return Err(invalid(
                "horizon",
                format!("must be non-negative, got {horizon}"),
            ));
        }
        if !(max_step > 0.0) {
            return Err(invalid("step", format!("must be positive, got {max_step}")));
        }
        if horizon == 0.0 {
            return Self::new(max_step, 0);
        }
        let steps = (horizon / max_step - 1e-9).ceil().max(1.0) as usize;
        Self::new(horizon / steps as f64, steps)
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.step
    }

    pub fn horizon(&self) -> f64 {
        self.time(self.steps)
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}
