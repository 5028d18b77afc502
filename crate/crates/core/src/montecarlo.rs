//! Monte Carlo oracle: Brownian paths, Feynman-Kac averages and exact
//! event-driven simulation of branching Brownian motion.
//!
//! Branching trees are simulated without time stepping. With `N` particles
//! alive the next clock rings after an `Exp(γN)` waiting time and belongs to
//! a uniformly chosen particle; positions are advanced lazily by exact
//! Gaussian increments only when a particle dies or is observed. Children
//! start at the death position of their parent.
//!
//! Every estimator runs its replicas in parallel, replica `r` drawing from
//! [`RngSeed::replica_rng`]. Per-replica results are reduced in replica order
//! with pairwise summation, so the output does not depend on the thread count.

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};
use rayon::prelude::*;

use crate::dyson::FertilityDistribution;
use crate::error::{invalid, Error, Result};
use crate::grid::SampledFunction;
use crate::kernels::SpacePoint;
use crate::quadrature::pairwise_sum;
use crate::rng::{ReplicaRng, RngSeed};

pub const DEFAULT_MAX_PARTICLES: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct BranchingConfig {
    gamma: f64,
    fertility: FertilityDistribution,
    x0: SpacePoint,
    max_particles: usize,
}

impl BranchingConfig {
    pub fn new(
        gamma: f64,
        fertility: FertilityDistribution,
        x0: SpacePoint,
        max_particles: usize,
    ) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(invalid("gamma", format!("gamma > 0, got {gamma}")));
        }
        if max_particles == 0 {
            return Err(invalid("max_particles", "cap must be positive"));
        }
        Ok(Self {
            gamma,
            fertility,
            x0,
            max_particles,
        })
    }

    /// Binary branching from the origin of `d`-space with the default cap.
    pub fn binary(alpha: f64, gamma: f64, d: usize) -> Result<Self> {
        Self::new(
            gamma,
            FertilityDistribution::binary(alpha)?,
            SpacePoint::origin(d)?,
            DEFAULT_MAX_PARTICLES,
        )
    }

    pub fn with_max_particles(mut self, cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(invalid("max_particles", "cap must be positive"));
        }
        self.max_particles = cap;
        Ok(self)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn fertility(&self) -> &FertilityDistribution {
        &self.fertility
    }

    pub fn x0(&self) -> &SpacePoint {
        &self.x0
    }

    pub fn dim(&self) -> usize {
        self.x0.dim()
    }

    pub fn max_particles(&self) -> usize {
        self.max_particles
    }
}

/// Mean of per-replica samples with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub replicas: usize,
}

impl Estimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        if n == 0 {
            return Self {
                mean: f64::NAN,
                stderr: f64::NAN,
                replicas: 0,
            };
        }
        // Shifted by the first sample so constant samples average exactly.
        let shift = samples[0];
        let centred: Vec<f64> = samples.iter().map(|x| x - shift).collect();
        let mean = shift + pairwise_sum(&centred) / n as f64;
        let stderr = if n > 1 {
            let dev: Vec<f64> = samples.iter().map(|x| (x - mean) * (x - mean)).collect();
            (pairwise_sum(&dev) / (n - 1) as f64 / n as f64).sqrt()
        } else {
            f64::NAN
        };
        Self {
            mean,
            stderr,
            replicas: n,
        }
    }

    /// Binomial proportion with standard error `√(p̂(1−p̂)/n)`.
    pub fn proportion(successes: usize, n: usize) -> Self {
        let p = successes as f64 / n as f64;
        Self {
            mean: p,
            stderr: (p * (1.0 - p) / n as f64).sqrt(),
            replicas: n,
        }
    }

    /// `|mean − target| ≤ k·stderr`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr
    }
}

fn check_replicas(replicas: usize) -> Result<()> {
    if replicas == 0 {
        Err(invalid("replicas", "need at least one replica"))
    } else {
        Ok(())
    }
}

/// Runs `f` for every replica in parallel and returns results in replica
/// order. The first failing replica (by index) determines the error.
fn run_replicas<T: Send>(
    replicas: usize,
    seed: RngSeed,
    f: impl Fn(&mut ReplicaRng) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| f(&mut seed.replica_rng(r)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

fn gaussian(rng: &mut ReplicaRng) -> f64 {
    rng.sample(StandardNormal)
}

/// Brownian path on `n_steps` uniform steps of `[0, t]`, including `x0`.
pub fn sample_brownian_path(
    x0: &SpacePoint,
    t: f64,
    n_steps: usize,
    seed: RngSeed,
) -> Result<Vec<SpacePoint>> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    if n_steps == 0 {
        return Err(invalid("n_steps", "need at least one step"));
    }
    let mut rng = seed.rng();
    let sd = (t / n_steps as f64).sqrt();
    let mut path = Vec::with_capacity(n_steps + 1);
    let mut x = x0.clone();
    path.push(x.clone());
    for _ in 0..n_steps {
        for c in x.coords_mut() {
            *c += sd * gaussian(&mut rng);
        }
        path.push(x.clone());
    }
    Ok(path)
}

/// Endpoints `B_t` of independent paths started at `x0`, one per replica.
pub fn sample_endpoints(
    x0: &SpacePoint,
    t: f64,
    replicas: usize,
    seed: RngSeed,
) -> Result<Vec<SpacePoint>> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    check_replicas(replicas)?;
    let sd = t.sqrt();
    run_replicas(replicas, seed, |rng| {
        let mut x = x0.clone();
        for c in x.coords_mut() {
            *c += sd * gaussian(rng);
        }
        Ok(x)
    })
}

/// Monte Carlo estimate of `E_x[u(B_t) exp(−∫₀ᵗ v(B_s) ds)]` in one dimension.
///
/// The exponent is a left-endpoint Riemann sum over `n_steps` Euler steps;
/// `u` is evaluated by linear interpolation, held constant off its grid.
pub fn feynman_kac_estimate(
    u: &SampledFunction,
    v: &(dyn Fn(f64) -> f64 + Sync),
    t: f64,
    x: &SpacePoint,
    replicas: usize,
    n_steps: usize,
    seed: RngSeed,
) -> Result<Estimate> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveTime(t));
    }
    if x.dim() != 1 {
        return Err(Error::UnsupportedDimension(x.dim(), "1"));
    }
    if n_steps == 0 {
        return Err(invalid("n_steps", "need at least one step"));
    }
    check_replicas(replicas)?;
    let dt = t / n_steps as f64;
    let sd = dt.sqrt();
    let x0 = x.coords()[0];
    let samples = run_replicas(replicas, seed, |rng| {
        let mut b = x0;
        let mut action = 0.0;
        for _ in 0..n_steps {
            action += v(b) * dt;
            b += sd * gaussian(rng);
        }
        Ok(u.eval(b) * (-action).exp())
    })?;
    Ok(Estimate::from_samples(&samples))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    /// Clock rang and the particle left no offspring.
    Death,
    /// Clock rang and the particle was replaced by one or more children.
    Branch,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    pub parent: u64,
    pub children: Vec<u64>,
    pub position: SpacePoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Particle {
    pub id: u64,
    pub position: SpacePoint,
}

/// Live particles at a given time.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationSnapshot {
    pub time: f64,
    pub particles: Vec<Particle>,
}

impl PopulationSnapshot {
    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EventLog {
    pub events: Vec<Event>,
    pub final_population: PopulationSnapshot,
    /// `(t, N_t)` at each requested sample time.
    pub trajectory: Vec<(f64, usize)>,
}

impl EventLog {
    pub fn first_event_time(&self) -> Option<f64> {
        self.events.first().map(|e| e.time)
    }
}

struct Live {
    id: u64,
    position: Vec<f64>,
    since: f64,
}

fn advance(p: &mut Live, to: f64, rng: &mut ReplicaRng) {
    let sd = (to - p.since).sqrt();
    if sd > 0.0 {
        for c in &mut p.position {
            *c += sd * gaussian(rng);
        }
    }
    p.since = to;
}

fn check_horizon(horizon: f64) -> Result<()> {
    if horizon >= 0.0 && horizon.is_finite() {
        Ok(())
    } else {
        Err(invalid("horizon", format!("horizon ≥ 0, got {horizon}")))
    }
}

fn branching_tree(
    config: &BranchingConfig,
    horizon: f64,
    sample_times: &[f64],
    rng: &mut ReplicaRng,
) -> Result<EventLog> {
    check_horizon(horizon)?;
    if sample_times.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("sample_times", "must be nondecreasing"));
    }
    if let Some(s) = sample_times
        .iter()
        .find(|s| !(**s >= 0.0 && **s <= horizon))
    {
        return Err(invalid(
            "sample_times",
            format!("{s} outside [0, {horizon}]"),
        ));
    }
    let mut alive = vec![Live {
        id: 0,
        position: config.x0.coords().to_vec(),
        since: 0.0,
    }];
    let mut next_id = 1u64;
    let mut events = Vec::new();
    let mut trajectory = Vec::with_capacity(sample_times.len());
    let mut pending = sample_times.iter().copied().peekable();
    let mut t = 0.0;
    loop {
        let wait = if alive.is_empty() {
            f64::INFINITY
        } else {
            rng.sample::<f64, _>(Exp1) / (config.gamma * alive.len() as f64)
        };
        let te = t + wait;
        while let Some(&s) = pending.peek() {
            if s < te {
                trajectory.push((s, alive.len()));
                pending.next();
            } else {
                break;
            }
        }
        if te > horizon {
            break;
        }
        t = te;
        let idx = rng.random_range(0..alive.len());
        let mut parent = alive.swap_remove(idx);
        advance(&mut parent, t, rng);
        let k = config.fertility.sample(rng.random::<f64>());
        let children: Vec<u64> = (next_id..next_id + k as u64).collect();
        next_id += k as u64;
        for &id in &children {
            alive.push(Live {
                id,
                position: parent.position.clone(),
                since: t,
            });
        }
        events.push(Event {
            time: t,
            kind: if k == 0 {
                EventKind::Death
            } else {
                EventKind::Branch
            },
            parent: parent.id,
            children,
            position: SpacePoint::new(parent.position)?,
        });
        if alive.len() > config.max_particles {
            return Err(Error::PopulationExplosion {
                cap: config.max_particles,
                time: t,
            });
        }
    }
    for p in &mut alive {
        advance(p, horizon, rng);
    }
    let particles = alive
        .into_iter()
        .map(|p| {
            Ok(Particle {
                id: p.id,
                position: SpacePoint::new(p.position)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EventLog {
        events,
        final_population: PopulationSnapshot {
            time: horizon,
            particles,
        },
        trajectory,
    })
}

/// Simulates one branching tree up to `horizon`, recording `N_t` at the
/// (nondecreasing) `sample_times`.
pub fn simulate_branching(
    config: &BranchingConfig,
    horizon: f64,
    sample_times: &[f64],
    seed: RngSeed,
) -> Result<EventLog> {
    branching_tree(config, horizon, sample_times, &mut seed.rng())
}

/// Independent trees, replica `r` on stream `r` of `seed`.
pub fn simulate_branching_replicas(
    config: &BranchingConfig,
    horizon: f64,
    sample_times: &[f64],
    replicas: usize,
    seed: RngSeed,
) -> Result<Vec<EventLog>> {
    check_replicas(replicas)?;
    run_replicas(replicas, seed, |rng| {
        branching_tree(config, horizon, sample_times, rng)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Count {
    Alive(usize),
    Capped,
}

/// Total mass `N_t` at the sorted `times`; exact in law because positions
/// never influence the clocks or the offspring counts. The draws consumed
/// depend only on the last time, so a curve ending at `T` reproduces the
/// single-time estimators at `T` bit for bit.
fn population_path(config: &BranchingConfig, times: &[f64], rng: &mut ReplicaRng) -> Vec<Count> {
    let horizon = times.last().copied().unwrap_or(0.0);
    let mut out = Vec::with_capacity(times.len());
    let mut n = 1usize;
    let mut t = 0.0;
    let fill = |out: &mut Vec<Count>, upto: f64, c: Count| {
        while out.len() < times.len() && times[out.len()] < upto {
            out.push(c);
        }
    };
    loop {
        let te = t + rng.sample::<f64, _>(Exp1) / (config.gamma * n as f64);
        fill(&mut out, te, Count::Alive(n));
        if te > horizon {
            break;
        }
        t = te;
        let k = config.fertility.sample(rng.random::<f64>());
        n = n - 1 + k;
        if n == 0 {
            fill(&mut out, f64::INFINITY, Count::Alive(0));
            break;
        }
        if n > config.max_particles {
            fill(&mut out, f64::INFINITY, Count::Capped);
            break;
        }
    }
    out
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(invalid("times", "need at least one time"));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(invalid("times", "must be nondecreasing"));
    }
    times.iter().try_for_each(|t| check_horizon(*t))
}

/// Extinction estimates `P(N_t = 0)` at each of the nondecreasing `times`,
/// from one set of trees per replica. Capped replicas count as surviving.
pub fn estimate_extinction_curve(
    config: &BranchingConfig,
    times: &[f64],
    replicas: usize,
    seed: RngSeed,
) -> Result<Vec<Estimate>> {
    check_times(times)?;
    check_replicas(replicas)?;
    let paths = run_replicas(replicas, seed, |rng| {
        Ok(population_path(config, times, rng))
    })?;
    Ok((0..times.len())
        .map(|i| {
            let dead = paths.iter().filter(|p| p[i] == Count::Alive(0)).count();
            Estimate::proportion(dead, replicas)
        })
        .collect())
}

/// Fraction of replicas with `N_horizon = 0`.
///
/// A replica that exceeds `max_particles` is counted as surviving. This
/// biases `p̂` downward by at most the probability that a population of
/// `max_particles` still dies out before the horizon.
pub fn estimate_extinction(
    config: &BranchingConfig,
    horizon: f64,
    replicas: usize,
    seed: RngSeed,
) -> Result<Estimate> {
    Ok(estimate_extinction_curve(config, &[horizon], replicas, seed)?[0])
}

/// Monte Carlo means of `θ^(N_t)` (with `0⁰ = 1`) at each of `times`.
pub fn estimate_generating_function_curve(
    config: &BranchingConfig,
    theta: f64,
    times: &[f64],
    replicas: usize,
    seed: RngSeed,
) -> Result<Vec<Estimate>> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(invalid("theta", format!("theta ∈ [0,1], got {theta}")));
    }
    check_times(times)?;
    check_replicas(replicas)?;
    let paths = run_replicas(replicas, seed, |rng| {
        population_path(config, times, rng)
            .into_iter()
            .zip(times)
            .map(|(c, t)| match c {
                Count::Alive(n) => Ok(theta.powi(n as i32)),
                Count::Capped => Err(Error::PopulationExplosion {
                    cap: config.max_particles,
                    time: *t,
                }),
            })
            .collect::<Result<Vec<f64>>>()
    })?;
    Ok((0..times.len())
        .map(|i| {
            let column: Vec<f64> = paths.iter().map(|p| p[i]).collect();
            Estimate::from_samples(&column)
        })
        .collect())
}

/// Monte Carlo mean of `θ^(N_t)` with `0⁰ = 1`.
pub fn estimate_generating_function(
    config: &BranchingConfig,
    theta: f64,
    t: f64,
    replicas: usize,
    seed: RngSeed,
) -> Result<Estimate> {
    Ok(estimate_generating_function_curve(config, theta, &[t], replicas, seed)?[0])
}

/// Monte Carlo mean of `Π_i φ(Y_t^i)` over the particles alive at `t`
/// (empty product 1), for a one-dimensional tree.
pub fn estimate_mckean_product(
    config: &BranchingConfig,
    phi: &SampledFunction,
    t: f64,
    replicas: usize,
    seed: RngSeed,
) -> Result<Estimate> {
    if config.dim() != 1 {
        return Err(Error::UnsupportedDimension(config.dim(), "1"));
    }
    if let Some(v) = phi.values().iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(invalid(
            "phi",
            format!("values must lie in [0,1], found {v}"),
        ));
    }
    check_horizon(t)?;
    check_replicas(replicas)?;
    let samples = run_replicas(replicas, seed, |rng| {
        let log = branching_tree(config, t, &[], rng)?;
        Ok(log
            .final_population
            .particles
            .iter()
            .map(|p| phi.eval(p.position.coords()[0]))
            .product())
    })?;
    Ok(Estimate::from_samples(&samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1d;

    fn binary(alpha: f64) -> BranchingConfig {
        BranchingConfig::binary(alpha, 1.0, 1).unwrap()
    }

    #[test]
    fn config_validation() {
        let f = FertilityDistribution::binary(0.3).unwrap();
        let x = SpacePoint::origin(2).unwrap();
        assert!(BranchingConfig::new(0.0, f.clone(), x.clone(), 10).is_err());
        assert!(BranchingConfig::new(1.0, f.clone(), x.clone(), 0).is_err());
        assert_eq!(BranchingConfig::new(1.0, f, x, 10).unwrap().dim(), 2);
    }

    #[test]
    fn path_is_reproducible() {
        let x0 = SpacePoint::new(vec![0.0, 1.0]).unwrap();
        let a = sample_brownian_path(&x0, 1.0, 50, RngSeed(9)).unwrap();
        let b = sample_brownian_path(&x0, 1.0, 50, RngSeed(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 51);
        assert_eq!(a[0], x0);
        assert!(sample_brownian_path(&x0, 0.0, 5, RngSeed(9)).is_err());
    }

    #[test]
    fn zero_horizon_has_no_events() {
        let log = simulate_branching(&binary(0.3), 0.0, &[0.0], RngSeed(1)).unwrap();
        assert!(log.events.is_empty());
        assert_eq!(log.final_population.len(), 1);
        assert_eq!(log.trajectory, vec![(0.0, 1)]);
    }

    #[test]
    fn pure_branching_never_shrinks() {
        let cfg = binary(0.0).with_max_particles(5000).unwrap();
        let times: Vec<f64> = (0..=20).map(|i| i as f64 * 0.2).collect();
        let log = simulate_branching(&cfg, 4.0, &times, RngSeed(5)).unwrap();
        assert!(log.trajectory.windows(2).all(|w| w[1].1 >= w[0].1));
        assert!(log.trajectory.iter().all(|(_, n)| *n >= 1));
        assert!(log.events.iter().all(|e| e.kind == EventKind::Branch));
    }

    #[test]
    fn explosion_is_reported() {
        let cfg = binary(0.0).with_max_particles(50).unwrap();
        assert!(matches!(
            simulate_branching(&cfg, 100.0, &[], RngSeed(5)),
            Err(Error::PopulationExplosion { cap: 50, .. })
        ));
        // Capped replicas count as surviving.
        let est = estimate_extinction(&cfg, 100.0, 100, RngSeed(5)).unwrap();
        assert_eq!(est.mean, 0.0);
        assert!(estimate_generating_function(&cfg, 0.5, 100.0, 10, RngSeed(5)).is_err());
    }

    #[test]
    fn children_start_at_parent_death_position() {
        let cfg = BranchingConfig::new(
            2.0,
            FertilityDistribution::new(vec![0.2, 0.3, 0.5]).unwrap(),
            SpacePoint::origin(3).unwrap(),
            10_000,
        )
        .unwrap();
        let log = simulate_branching(&cfg, 3.0, &[], RngSeed(77)).unwrap();
        for e in &log.events {
            for c in &e.children {
                if let Some(later) = log.events.iter().find(|f| f.parent == *c) {
                    assert!(later.time > e.time);
                }
            }
        }
        assert!(log.events.windows(2).all(|w| w[0].time <= w[1].time));
    }

    #[test]
    fn sample_time_validation() {
        let cfg = binary(0.3);
        assert!(simulate_branching(&cfg, 1.0, &[0.5, 0.2], RngSeed(1)).is_err());
        assert!(simulate_branching(&cfg, 1.0, &[2.0], RngSeed(1)).is_err());
        assert!(simulate_branching(&cfg, -1.0, &[], RngSeed(1)).is_err());
    }

    #[test]
    fn generating_function_edge_thetas() {
        let cfg = binary(0.25);
        let one = estimate_generating_function(&cfg, 1.0, 1.0, 500, RngSeed(3)).unwrap();
        assert_eq!(one.mean, 1.0);
        let zero = estimate_generating_function(&cfg, 0.0, 1.0, 500, RngSeed(3)).unwrap();
        let ext = estimate_extinction(&cfg, 1.0, 500, RngSeed(3)).unwrap();
        assert_eq!(zero.mean, ext.mean);
    }

    #[test]
    fn mckean_product_edge_cases() {
        let cfg = binary(0.25);
        let g = Grid1d::symmetric(5.0, 0.1).unwrap();
        let ones = SampledFunction::constant(g, 1.0).unwrap();
        assert_eq!(
            estimate_mckean_product(&cfg, &ones, 1.0, 200, RngSeed(1))
                .unwrap()
                .mean,
            1.0
        );
        let bump = SampledFunction::from_fn(g, |x| 0.5 + 0.4 * (-x * x).exp()).unwrap();
        let at_zero = estimate_mckean_product(&cfg, &bump, 0.0, 50, RngSeed(1)).unwrap();
        assert_eq!(at_zero.mean, bump.eval(0.0));
        let constant = SampledFunction::constant(g, 0.5).unwrap();
        let a = estimate_mckean_product(&cfg, &constant, 1.0, 2000, RngSeed(4)).unwrap();
        let b = estimate_generating_function(&cfg, 0.5, 1.0, 2000, RngSeed(4)).unwrap();
        assert!((a.mean - b.mean).abs() < 4.0 * (a.stderr + b.stderr));
        let bad = SampledFunction::constant(g, 1.5).unwrap();
        assert!(estimate_mckean_product(&cfg, &bad, 1.0, 10, RngSeed(1)).is_err());
        let cfg2 = BranchingConfig::binary(0.25, 1.0, 2).unwrap();
        assert!(estimate_mckean_product(&cfg2, &ones, 1.0, 10, RngSeed(1)).is_err());
    }

    #[test]
    fn curves_end_where_single_time_estimates_do() {
        let cfg = binary(0.3);
        let times = [0.5, 1.0, 2.0];
        let curve = estimate_extinction_curve(&cfg, &times, 2000, RngSeed(8)).unwrap();
        assert_eq!(
            curve[2],
            estimate_extinction(&cfg, 2.0, 2000, RngSeed(8)).unwrap()
        );
        assert!(curve.windows(2).all(|w| w[1].mean >= w[0].mean));
        let gf = estimate_generating_function_curve(&cfg, 0.4, &times, 2000, RngSeed(8)).unwrap();
        assert_eq!(
            gf[2],
            estimate_generating_function(&cfg, 0.4, 2.0, 2000, RngSeed(8)).unwrap()
        );
        assert!(estimate_extinction_curve(&cfg, &[1.0, 0.5], 10, RngSeed(8)).is_err());
    }

    #[test]
    fn estimates_do_not_depend_on_thread_count() {
        let cfg = binary(0.3);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    estimate_generating_function(&cfg, 0.4, 2.0, 3000, RngSeed(11)).unwrap()
                })
        };
        assert_eq!(run(1), run(4));
    }
}
