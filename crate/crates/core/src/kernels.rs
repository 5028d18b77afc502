//! Heat kernels and the propagators built from them.
//!
//! The diffusion constant is fixed to 1 (`∂_t u = ½Δu`), so the transition
//! density over a time `t` is the centred Gaussian of covariance `t·I`.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::grid::SampledFunction;
use crate::pring::PseudoComplex;
use crate::quadrature::adaptive_simpson;

/// Point in `d`-dimensional space, `1 ≤ d ≤ 3`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacePoint(Vec<f64>);

impl SpacePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.len() > 3 {
            return Err(Error::UnsupportedDimension(coords.len(), "1..=3"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("space point coordinate"));
        }
        Ok(Self(coords))
    }

    pub fn origin(d: usize) -> Result<Self> {
        Self::new(vec![0.0; d])
    }

    pub fn line(x: f64) -> Result<Self> {
        Self::new(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn coords_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn dist_sqr(&self, other: &SpacePoint) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpaceTimePoint {
    pub t: f64,
    pub x: SpacePoint,
}

impl SpaceTimePoint {
    pub fn new(t: f64, x: SpacePoint) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::NonFinite("time coordinate"));
        }
        Ok(Self { t, x })
    }
}

/// Gaussian density `(2πt)^(-d/2) exp(-r²/(2t))` as a function of the squared
/// distance `r²`. No validation; callers guarantee `t > 0`.
pub(crate) fn gaussian_density(t: f64, dist_sqr: f64, d: usize) -> f64 {
    (2.0 * PI * t).powf(-0.5 * d as f64) * (-dist_sqr / (2.0 * t)).exp()
}

/// Transition density of Brownian motion from `x` to `y` over time `t`.
pub fn heat_kernel(t: f64, x: &SpacePoint, y: &SpacePoint) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let r2 = x.dist_sqr(y)?;
    Ok(gaussian_density(t, r2, x.dim()))
}

/// Numerical support of `u`: first and last node with `|u| > 1e-10·max|u|`.
fn support(u: &SampledFunction) -> Option<(f64, f64)> {
    let vals = u.values();
    let peak = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return None;
    }
    let thresh = 1e-10 * peak;
    let first = vals.iter().position(|v| v.abs() > thresh)?;
    let last = vals.iter().rposition(|v| v.abs() > thresh)?;
    Some((u.grid().node(first), u.grid().node(last)))
}

/// `(P_t u)(x) = ∫ p_t(x, z) u(z) dz` on the nodes of `u`'s grid.
///
/// The grid must reach at least `6√t` beyond the numerical support of `u` on
/// both sides, otherwise [`Error::GridTooNarrow`] is returned.
pub fn apply_semigroup(u: &SampledFunction, t: f64) -> Result<SampledFunction> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let g = u.grid();
    let margin = 6.0 * t.sqrt();
    if let Some((lo, hi)) = support(u) {
        let have = (lo - g.origin()).min(g.end() - hi);
        if have < margin {
            return Err(Error::GridTooNarrow {
                half_width: have,
                required: margin,
            });
        }
    }
    apply_semigroup_unchecked(u, t)
}

/// Same quadrature as [`apply_semigroup`] without the width check. `u` is
/// treated as zero off the grid, so nodes within `6√t` of either end see
/// truncated mass.
pub fn apply_semigroup_unchecked(u: &SampledFunction, t: f64) -> Result<SampledFunction> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    let g = *u.grid();
    let h = g.spacing();
    let n = g.len();
    // p_t depends only on the node offset |i - j|.
    let kernel: Vec<f64> = (0..n)
        .map(|k| {
            let r = k as f64 * h;
            gaussian_density(t, r * r, 1)
        })
        .collect();
    let weighted: Vec<f64> = u
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| {
            if j == 0 || j == n - 1 {
                0.5 * v * h
            } else {
                v * h
            }
        })
        .collect();
    let out = (0..n)
        .map(|i| {
            weighted
                .iter()
                .enumerate()
                .map(|(j, w)| w * kernel[i.abs_diff(j)])
                .sum()
        })
        .collect();
    SampledFunction::new(g, out)
}

/// Chapman-Kolmogorov residual `|∫ p_t(x,z) p_s(z,y) dz − p_{t+s}(x,y)|` in
/// one dimension, integrated by adaptive Simpson to absolute tolerance 1e-9.
pub fn ck_residual(t: f64, s: f64, x: &SpacePoint, y: &SpacePoint) -> Result<f64> {
    for &tt in &[t, s] {
        if !(tt > 0.0) {
            return Err(Error::NonPositiveTime(tt));
        }
    }
    if x.dim() != 1 || y.dim() != 1 {
        return Err(Error::UnsupportedDimension(x.dim().max(y.dim()), "1"));
    }
    let (xv, yv) = (x.coords()[0], y.coords()[0]);
    let direct = heat_kernel(t + s, x, y)?;
    // The integrand is a Gaussian in z centred at the bridge mean.
    let mean = (s * xv + t * yv) / (t + s);
    let sd = (t * s / (t + s)).sqrt();
    let integrand = |z: f64| {
        gaussian_density(t, (xv - z) * (xv - z), 1) * gaussian_density(s, (z - yv) * (z - yv), 1)
    };
    let composed = adaptive_simpson(&integrand, mean - 14.0 * sd, mean + 14.0 * sd, 1e-9);
    Ok((composed - direct).abs())
}

/// Heat projection of the retarded propagator between space-time points,
/// `θ(Δt) e^(−γΔt) p_Δt(x, y)` with `θ(0) = 0`.
pub fn retarded_propagator_heat(
    from: &SpaceTimePoint,
    to: &SpaceTimePoint,
    gamma: f64,
) -> Result<f64> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(invalid(
            "gamma",
            format!("rate must be non-negative, got {gamma}"),
        ));
    }
    let dt = to.t - from.t;
    if dt <= 0.0 {
        from.x.dist_sqr(&to.x)?;
        return Ok(0.0);
    }
    Ok((-gamma * dt).exp() * heat_kernel(dt, &from.x, &to.x)?)
}

/// Probability that an exponential clock of rate `gamma` rings within `dtau`.
pub fn event_probability(gamma: f64, dtau: f64) -> Result<f64> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(invalid(
            "gamma",
            format!("rate must be non-negative, got {gamma}"),
        ));
    }
    if !(dtau >= 0.0) {
        return Err(invalid(
            "dtau",
            format!("duration must be non-negative, got {dtau}"),
        ));
    }
    Ok(-(-gamma * dtau).exp_m1())
}

/// Pseudo-complex time evolution `U(t) = exp(−I E t)` of a mode with energy `E`.
///
/// `Γ₊ U(t) = e^(−Et)` is the decaying heat branch and `Γ₋ U(t) = e^(Et)` the
/// antiheat branch; `U(t)* U(t) = 1`.
pub fn time_evolution(energy: f64, t: f64) -> Result<PseudoComplex> {
    PseudoComplex::new(0.0, -energy * t)?.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1d;
    use crate::quadrature::trapezoid;

    fn pt(x: f64) -> SpacePoint {
        SpacePoint::line(x).unwrap()
    }

    #[test]
    fn heat_kernel_values() {
        let v = heat_kernel(1.0, &pt(0.3), &pt(0.3)).unwrap();
        assert!((v - 0.398_942_280_401_432_7).abs() < 1e-15);
        let x = SpacePoint::new(vec![0.0, 0.0]).unwrap();
        let y = SpacePoint::new(vec![0.6, 0.8]).unwrap();
        let v = heat_kernel(0.5, &x, &y).unwrap();
        assert!((v - (-1f64).exp() / PI).abs() < 1e-15);
        assert!((v - 0.117099).abs() < 1e-6);
    }

    #[test]
    fn heat_kernel_errors() {
        assert_eq!(
            heat_kernel(0.0, &pt(0.0), &pt(0.0)),
            Err(Error::NonPositiveTime(0.0))
        );
        let y = SpacePoint::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            heat_kernel(1.0, &pt(0.0), &y),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(SpacePoint::new(vec![0.0; 4]).is_err());
        assert!(SpacePoint::new(vec![]).is_err());
    }

    #[test]
    fn kernel_is_normalized() {
        for t in [0.25, 1.0, 4.0] {
            let g = Grid1d::symmetric(8.0 * f64::sqrt(t), f64::sqrt(t) / 20.0).unwrap();
            let vals: Vec<f64> = g
                .nodes()
                .map(|z| heat_kernel(t, &pt(0.0), &pt(z)).unwrap())
                .collect();
            assert!(
                (trapezoid(&vals, g.spacing()) - 1.0).abs() < 1e-8,
                "t = {t}"
            );
        }
    }

    #[test]
    fn semigroup_rejects_narrow_grid() {
        let g = Grid1d::symmetric(3.0, 0.05).unwrap();
        let u = SampledFunction::from_fn(g, |x| (-x * x / 0.02).exp()).unwrap();
        assert!(matches!(
            apply_semigroup(&u, 1.0),
            Err(Error::GridTooNarrow { .. })
        ));
        assert!(apply_semigroup(&u, 0.01).is_ok());
    }

    #[test]
    fn semigroup_on_constant_keeps_interior() {
        let t = 0.5;
        let g = Grid1d::symmetric(10.0, 0.05).unwrap();
        let u = SampledFunction::constant(g, 1.0).unwrap();
        let out = apply_semigroup_unchecked(&u, t).unwrap();
        let margin = 6.0 * t.sqrt();
        for (x, v) in g.nodes().zip(out.values()) {
            if x.abs() <= 10.0 - margin {
                assert!((v - 1.0).abs() < 1e-6, "x = {x}, v = {v}");
            }
        }
    }

    #[test]
    fn semigroup_convolves_gaussians() {
        let (s, t) = (0.05, 0.7);
        let g = Grid1d::symmetric(12.0, 0.02).unwrap();
        let u = SampledFunction::from_fn(g, |x| gaussian_density(s, x * x, 1)).unwrap();
        let out = apply_semigroup(&u, t).unwrap();
        let expected = SampledFunction::from_fn(g, |x| gaussian_density(s + t, x * x, 1)).unwrap();
        assert!(out.sup_distance(&expected) < 1e-9);
    }

    #[test]
    fn retarded_propagator_cases() {
        let a = SpaceTimePoint::new(1.0, pt(0.0)).unwrap();
        let b = SpaceTimePoint::new(1.0, pt(0.5)).unwrap();
        assert_eq!(retarded_propagator_heat(&a, &b, 1.0).unwrap(), 0.0);
        assert_eq!(retarded_propagator_heat(&b, &a, 0.0).unwrap(), 0.0);
        let c = SpaceTimePoint::new(2.0, pt(0.0)).unwrap();
        let v = retarded_propagator_heat(&a, &c, 1.0).unwrap();
        assert!((v - (-1f64).exp() / (2.0 * PI).sqrt()).abs() < 1e-16);
        assert!((v - 0.146763).abs() < 1e-6);
        let free = retarded_propagator_heat(&a, &c, 0.0).unwrap();
        assert_eq!(free, heat_kernel(1.0, &pt(0.0), &pt(0.0)).unwrap());
        assert!(retarded_propagator_heat(&a, &c, -1.0).is_err());
    }

    #[test]
    fn event_probability_values() {
        assert_eq!(event_probability(1.0, 2f64.ln()).unwrap(), 0.5);
        assert_eq!(event_probability(3.0, 0.0).unwrap(), 0.0);
        assert_eq!(event_probability(0.0, 7.0).unwrap(), 0.0);
        assert!(event_probability(-1.0, 1.0).is_err());
    }

    #[test]
    fn time_evolution_identities() {
        assert_eq!(time_evolution(2.0, 0.0).unwrap(), PseudoComplex::ONE);
        let u = time_evolution(1.0, 1.0).unwrap();
        assert!((u.gamma_plus() - (-1f64).exp()).abs() < 1e-16);
        let unit = u * u.conj();
        assert!((unit.re() - 1.0).abs() < 1e-12 && unit.im().abs() < 1e-12);
    }
}
