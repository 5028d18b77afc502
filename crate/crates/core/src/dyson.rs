//! Dyson-Schwinger equations of binary branching Brownian motion.
//!
//! The dressed one-point function `Ã(τ)` (probability that a particle with
//! time-to-horizon `τ` has no descendants left at the horizon) solves the
//! integral recurrence
//!
//! ```text
//! Ã(τ) = α(1 − e^(−γτ)) + γβ ∫₀^τ e^(−γw) Ã(τ−w)² dw
//! ```
//!
//! whose differential form is the Riccati equation `Ã' = γ(α − Ã + βÃ²)`,
//! `Ã(0) = 0`. Successive substitution ([`OnePointPicard`]) sums the tree
//! diagrams order by order. The heat projection `D̃` of the dressed two-point
//! function solves a linear Volterra equation driven by `Ã`
//! ([`two_point_picard`]); integrating it over space gives [`mass_curve`].

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::grid::{Grid1d, SampledCurve, TimeGrid};
use crate::kernels::gaussian_density;
use crate::quadrature::trapezoid;

const FERTILITY_SUM_TOL: f64 = 1e-12;
const ODE_BAND: f64 = 1e-9;

/// Offspring law `(p₀, p₁, …, p_K)` of a dying particle.
#[derive(Clone, Debug, PartialEq)]
pub struct FertilityDistribution {
    p: Vec<f64>,
}

impl FertilityDistribution {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidFertility("empty distribution".into()));
        }
        if let Some((k, v)) = p
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidFertility(format!(
                "p[{k}] = {v} is not a probability"
            )));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > FERTILITY_SUM_TOL {
            return Err(Error::InvalidFertility(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self { p })
    }

    /// Binary law: die childless with probability `alpha`, split in two otherwise.
    pub fn binary(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Self::new(vec![alpha, 0.0, 1.0 - alpha])
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn max_offspring(&self) -> usize {
        self.p.len() - 1
    }

    pub fn mean(&self) -> f64 {
        self.p.iter().enumerate().map(|(k, p)| k as f64 * p).sum()
    }

    /// Generating function `W(φ) = Σ p_k φ^k`, by Horner's rule.
    pub fn w(&self, phi: f64) -> f64 {
        self.p.iter().rev().fold(0.0, |acc, p| acc * phi + p)
    }

    /// Offspring count for a uniform variate `u ∈ [0, 1)` by inversion.
    pub fn sample(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (k, p) in self.p.iter().enumerate() {
            acc += p;
            if u < acc {
                return k;
            }
        }
        // u landed in the rounding gap above the cumulative sum.
        self.p.iter().rposition(|p| *p > 0.0).unwrap_or(0)
    }
}

pub fn w_eval(fertility: &FertilityDistribution, phi: f64) -> f64 {
    fertility.w(phi)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(invalid("alpha", format!("alpha ∈ [0,1], got {alpha}")))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(invalid("gamma", format!("gamma > 0, got {gamma}")))
    }
}

/// Closed-form one-point function of the binary model.
///
/// With `s = |1 − 2α|` the solution of `Ã' = γ(α − Ã + βÃ²)`, `Ã(0) = 0` is
///
/// ```text
/// Ã(τ) = (1 − s·coth(sγτ/2 + artanh s)) / (2β)
/// ```
///
/// evaluated through the addition theorem for `tanh` as `2αT/(T + s)` with
/// `T = tanh(sγτ/2)`, which is free of cancellation and exactly 0 at `τ = 0`.
///
/// The critical case `α = 1/2` is `1 − 2/(γτ + 2)`; `β = 0` is a single
/// exponential lifetime `1 − e^(−γτ)`; `α = 0` never dies.
pub fn one_point_closed_form(alpha: f64, gamma: f64, tau: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(invalid("gamma", format!("gamma ≥ 0, got {gamma}")));
    }
    if !(tau >= 0.0) {
        return Err(invalid("tau", format!("tau ≥ 0, got {tau}")));
    }
    let beta = 1.0 - alpha;
    let gt = gamma * tau;
    let value = if beta == 0.0 {
        -(-gt).exp_m1()
    } else if alpha == 0.0 {
        0.0
    } else if alpha == 0.5 {
        1.0 - 2.0 / (gt + 2.0)
    } else {
        let s = (1.0 - 2.0 * alpha).abs();
        let t = (0.5 * s * gt).tanh();
        2.0 * alpha * t / (t + s)
    };
    Ok(value)
}

/// Eventual extinction probability `α/(1−α)` below criticality, 1 otherwise.
pub fn extinction_probability(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(if alpha < 0.5 {
        alpha / (1.0 - alpha)
    } else {
        1.0
    })
}

/// Classic RK4 for a scalar autonomous ODE on a uniform grid.
fn rk4_autonomous(f: impl Fn(f64) -> f64, y0: f64, grid: TimeGrid) -> Vec<f64> {
    let h = grid.step;
    let mut out = Vec::with_capacity(grid.len());
    let mut y = y0;
    out.push(y);
    for _ in 0..grid.steps {
        let k1 = f(y);
        let k2 = f(y + 0.5 * h * k1);
        let k3 = f(y + 0.5 * h * k2);
        let k4 = f(y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push(y);
    }
    out
}

/// RK4 solution of the generating-function equation
/// `dφ̃/dt = γ(W(φ̃) − φ̃)`, `φ̃(0) = θ`, on `grid`.
pub fn one_point_ode(
    fertility: &FertilityDistribution,
    gamma: f64,
    theta0: f64,
    grid: TimeGrid,
) -> Result<SampledCurve> {
    check_gamma(gamma)?;
    if !(0.0..=1.0).contains(&theta0) {
        return Err(invalid("theta", format!("theta ∈ [0,1], got {theta0}")));
    }
    let values = rk4_autonomous(|phi| gamma * (fertility.w(phi) - phi), theta0, grid);
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v >= -ODE_BAND && **v <= 1.0 + ODE_BAND))
    {
        return Err(Error::StabilityViolation {
            time: grid.time(i),
            value: *v,
        });
    }
    SampledCurve::new(0.0, grid.step, values)
}

/// Successive Picard iterates of the one-point recurrence, starting from
/// `Ã⁽⁰⁾ ≡ 0`. Each call to `next` returns the following order. The
/// inhomogeneous term is integrated exactly and the convolution by composite
/// trapezoid on the grid.
#[derive(Clone, Debug)]
pub struct OnePointPicard {
    beta: f64,
    gamma: f64,
    grid: TimeGrid,
    source: Vec<f64>,
    decay: Vec<f64>,
    current: Vec<f64>,
    order: usize,
}

impl OnePointPicard {
    pub fn new(alpha: f64, gamma: f64, grid: TimeGrid) -> Result<Self> {
        check_alpha(alpha)?;
        check_gamma(gamma)?;
        let source = (0..grid.len())
            .map(|i| -alpha * (-gamma * grid.time(i)).exp_m1())
            .collect();
        let decay = (0..grid.len())
            .map(|i| (-gamma * grid.time(i)).exp())
            .collect();
        Ok(Self {
            beta: 1.0 - alpha,
            gamma,
            grid,
            source,
            decay,
            current: vec![0.0; grid.len()],
            order: 0,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn current(&self) -> Result<SampledCurve> {
        SampledCurve::new(0.0, self.grid.step, self.current.clone())
    }

    fn step(&mut self) {
        let sq: Vec<f64> = self.current.iter().map(|a| a * a).collect();
        let h = self.grid.step;
        let coupling = self.gamma * self.beta;
        let next = (0..self.grid.len())
            .map(|i| {
                let conv = if i == 0 {
                    0.0
                } else {
                    let inner: f64 = (1..i).map(|j| self.decay[j] * sq[i - j]).sum();
                    h * (inner + 0.5 * (self.decay[0] * sq[i] + self.decay[i] * sq[0]))
                };
                self.source[i] + coupling * conv
            })
            .collect();
        self.current = next;
        self.order += 1;
    }
}

impl Iterator for OnePointPicard {
    type Item = SampledCurve;

    fn next(&mut self) -> Option<SampledCurve> {
        self.step();
        self.current().ok()
    }
}

/// Picard iterate of the given order (`order ≥ 1`) of the one-point recurrence.
pub fn one_point_picard(
    alpha: f64,
    gamma: f64,
    grid: TimeGrid,
    order: usize,
) -> Result<SampledCurve> {
    if order == 0 {
        return Err(invalid("order", "order ≥ 1"));
    }
    let mut it = OnePointPicard::new(alpha, gamma, grid)?;
    for _ in 0..order {
        it.step();
    }
    it.current()
}

/// Closed-form `Ã` sampled on `grid`.
pub fn one_point_curve(alpha: f64, gamma: f64, grid: TimeGrid) -> Result<SampledCurve> {
    let values = (0..grid.len())
        .map(|i| one_point_closed_form(alpha, gamma, grid.time(i)))
        .collect::<Result<Vec<_>>>()?;
    SampledCurve::new(0.0, grid.step, values)
}

pub const MASS_TOL: f64 = 1e-10;
pub const MASS_MAX_ITER: usize = 10_000;

/// Spatially integrated two-point function, the fixed point of
///
/// ```text
/// M(t) = e^(−γt) + γβ ∫₀^t e^(−γw) Ã(t−w) M(t−w) dw
/// ```
///
/// iterated from `M⁽⁰⁾ = e^(−γt)` until the sup-norm update drops below 1e-10.
pub fn mass_curve(alpha: f64, gamma: f64, grid: TimeGrid) -> Result<SampledCurve> {
    check_gamma(gamma)?;
    let a = one_point_curve(alpha, gamma, grid)?;
    let beta = 1.0 - alpha;
    let h = grid.step;
    let decay: Vec<f64> = (0..grid.len())
        .map(|i| (-gamma * grid.time(i)).exp())
        .collect();
    let mut m = decay.clone();
    for _ in 0..MASS_MAX_ITER {
        let am: Vec<f64> = a.values().iter().zip(&m).map(|(a, m)| a * m).collect();
        let next: Vec<f64> = (0..grid.len())
            .map(|i| {
                let conv = if i == 0 {
                    0.0
                } else {
                    let inner: f64 = (1..i).map(|j| decay[j] * am[i - j]).sum();
                    h * (inner + 0.5 * (decay[0] * am[i] + decay[i] * am[0]))
                };
                decay[i] + gamma * beta * conv
            })
            .collect();
        let update = next
            .iter()
            .zip(&m)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        m = next;
        if update < MASS_TOL {
            return SampledCurve::new(0.0, h, m);
        }
    }
    Err(Error::NoConvergence {
        iterations: MASS_MAX_ITER,
        last_update: f64::NAN,
    })
}

/// Discretization of the space-time field for [`two_point_picard`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSpec {
    /// Final time of the field.
    pub t_max: f64,
    /// Time step; shrunk if necessary so it divides `t_max`.
    pub dt: f64,
    /// Spatial half-width `L` of the symmetric grid `[-L, L]`.
    pub half_width: f64,
    /// Spatial step; adjusted so that `L` is a node.
    pub dx: f64,
}

/// `D̃(t, x)` on a uniform space-time grid, row-major in time.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceTimeField {
    time: TimeGrid,
    space: Grid1d,
    values: Vec<f64>,
    iterations: usize,
    last_update: f64,
}

impl SpaceTimeField {
    pub fn time_grid(&self) -> TimeGrid {
        self.time
    }

    pub fn space_grid(&self) -> &Grid1d {
        &self.space
    }

    pub fn slice(&self, i: usize) -> &[f64] {
        let n = self.space.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn value(&self, i: usize, m: usize) -> f64 {
        self.slice(i)[m]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Trapezoid integral of the time slice `i` over space.
    pub fn slice_integral(&self, i: usize) -> f64 {
        trapezoid(self.slice(i), self.space.spacing())
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn last_update(&self) -> f64 {
        self.last_update
    }
}

/// Discretized two-point operator `D ↦ B + γβ ∫∫ B Ã D`.
struct TwoPointOperator {
    coupling: f64,
    time: TimeGrid,
    space: Grid1d,
    /// Sampled retarded propagator, zero on the `t = 0` slice.
    source: Vec<f64>,
    /// `Ã(t_i)`.
    a: Vec<f64>,
    /// `e^(−γ t_j)`.
    decay: Vec<f64>,
    /// `p_{t_j}(k·dx)·dx` for `j ≥ 1`, indexed `[j][k]`.
    kernels: Vec<Vec<f64>>,
}

impl TwoPointOperator {
    fn new(alpha: f64, gamma: f64, spec: FieldSpec) -> Result<Self> {
        check_alpha(alpha)?;
        check_gamma(gamma)?;
        if !(spec.t_max > 0.0) {
            return Err(Error::NonPositiveTime(spec.t_max));
        }
        let required = 6.0 * spec.t_max.sqrt();
        if spec.half_width < required {
            return Err(Error::GridTooNarrow {
                half_width: spec.half_width,
                required,
            });
        }
        let time = TimeGrid::covering(spec.t_max, spec.dt)?;
        let space = Grid1d::symmetric(spec.half_width, spec.dx)?;
        let n = space.len();
        let dx = space.spacing();
        let decay: Vec<f64> = (0..time.len())
            .map(|i| (-gamma * time.time(i)).exp())
            .collect();
        let a = one_point_curve(alpha, gamma, time)?.values().to_vec();
        let mut source = vec![0.0; time.len() * n];
        for i in 1..time.len() {
            let t = time.time(i);
            for (m, x) in space.nodes().enumerate() {
                source[i * n + m] = decay[i] * gaussian_density(t, x * x, 1);
            }
        }
        let kernels = (0..time.len())
            .map(|j| {
                if j == 0 {
                    Vec::new()
                } else {
                    let t = time.time(j);
                    (0..n)
                        .map(|k| {
                            let r = k as f64 * dx;
                            gaussian_density(t, r * r, 1) * dx
                        })
                        .collect()
                }
            })
            .collect();
        Ok(Self {
            coupling: gamma * (1.0 - alpha),
            time,
            space,
            source,
            a,
            decay,
            kernels,
        })
    }

    fn n(&self) -> usize {
        self.space.len()
    }

    /// `(P_{t_j} f)` on the spatial nodes; `P_0` is the identity.
    fn propagate(&self, j: usize, f: &[f64], out: &mut [f64]) {
        if j == 0 {
            out.copy_from_slice(f);
            return;
        }
        let n = f.len();
        let kern = &self.kernels[j];
        for (m, o) in out.iter_mut().enumerate() {
            let mut acc = 0.5 * (f[0] * kern[m] + f[n - 1] * kern[n - 1 - m]);
            for (l, fl) in f.iter().enumerate().take(n - 1).skip(1) {
                acc += fl * kern[m.abs_diff(l)];
            }
            *o = acc;
        }
    }

    fn apply(&self, d: &[f64]) -> Vec<f64> {
        let n = self.n();
        let k = self.time.step;
        let mut out = vec![0.0; d.len()];
        out.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            row.copy_from_slice(&self.source[i * n..(i + 1) * n]);
            if i == 0 || self.coupling == 0.0 {
                return;
            }
            let mut acc = vec![0.0; n];
            let mut buf = vec![0.0; n];
            // j = i carries Ã(0) = 0 and drops out.
            for j in 0..i {
                let weight = if j == 0 { 0.5 } else { 1.0 } * self.decay[j] * self.a[i - j];
                if weight == 0.0 {
                    continue;
                }
                self.propagate(j, &d[(i - j) * n..(i - j + 1) * n], &mut buf);
                for (a, b) in acc.iter_mut().zip(&buf) {
                    *a += weight * b;
                }
            }
            for (r, a) in row.iter_mut().zip(&acc) {
                *r += self.coupling * k * a;
            }
        });
        out
    }
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Picard iteration for the heat projection of the dressed two-point function
/// in one space dimension,
///
/// ```text
/// D̃(t,x) = e^(−γt) p_t(x) + γβ ∫₀^t dw⁰ ∫ dw e^(−γw⁰) p_{w⁰}(w) Ã(t−w⁰) D̃(t−w⁰, x−w)
/// ```
///
/// started from the retarded propagator. Time integrals use the composite
/// trapezoid rule with `p_0` acting as the identity at `w⁰ = 0`; space
/// integrals are direct trapezoid convolutions. The `t = 0` slice is zero,
/// following the retarded convention `θ(0) = 0`.
pub fn two_point_picard(
    alpha: f64,
    gamma: f64,
    spec: FieldSpec,
    tol: f64,
    max_iter: usize,
) -> Result<SpaceTimeField> {
    if !(tol > 0.0) {
        return Err(invalid("tol", format!("tol > 0, got {tol}")));
    }
    let op = TwoPointOperator::new(alpha, gamma, spec)?;
    let mut d = op.source.clone();
    let mut last_update = f64::INFINITY;
    for it in 1..=max_iter {
        let next = op.apply(&d);
        last_update = sup_diff(&next, &d);
        d = next;
        if last_update < tol {
            return Ok(SpaceTimeField {
                time: op.time,
                space: op.space,
                values: d,
                iterations: it,
                last_update,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        last_update,
    })
}

/// Sup-norm of `D − T(D)` for the discretized operator used by
/// [`two_point_picard`] with the same parameters.
pub fn two_point_residual(
    alpha: f64,
    gamma: f64,
    spec: FieldSpec,
    field: &SpaceTimeField,
) -> Result<f64> {
    let op = TwoPointOperator::new(alpha, gamma, spec)?;
    if op.time != field.time || op.space != field.space {
        return Err(invalid("field", "field was computed on a different grid"));
    }
    Ok(sup_diff(&op.apply(&field.values), &field.values))
}
