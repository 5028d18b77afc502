//! Experiment definitions: the keys each subcommand accepts, their
//! validation, and the computation behind every CSV.

use std::collections::BTreeMap;
use std::fmt;

use clap::ValueEnum;
use heatfield::dyson::{
    extinction_probability, mass_curve, one_point_closed_form, one_point_ode, one_point_picard,
    two_point_picard, two_point_residual, FertilityDistribution, FieldSpec,
};
use heatfield::grid::TimeGrid;
use heatfield::kernels::{
    apply_semigroup, event_probability, heat_kernel, retarded_propagator_heat, time_evolution,
};
use heatfield::montecarlo::{
    estimate_extinction_curve, estimate_generating_function_curve, simulate_branching_replicas,
    BranchingConfig, Estimate,
};
use heatfield::rng::RngSeed;
use heatfield::{Grid1d, PseudoComplex, SampledFunction, SpacePoint, SpaceTimePoint};
use rand::Rng;

use crate::config::{at_least, ensure, positive, unit_interval, ConfigError, Params, RawConfig};
use crate::output::{Cell, Summary, Table};
use crate::RunError;

pub const DEFAULT_SEED: u64 = 42;
/// Population cap for the count-only estimators. Extinction from `10⁴`
/// particles has probability `q^10⁴` for per-particle extinction `q < 1`.
pub const DEFAULT_MAX_PARTICLES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Experiment {
    Kernel,
    Semigroup,
    Clock,
    Extinction,
    #[value(name = "onepoint")]
    OnePoint,
    Gf,
    #[value(name = "twopoint")]
    TwoPoint,
    #[value(name = "ring-check")]
    RingCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Kernel,
        Experiment::Semigroup,
        Experiment::Clock,
        Experiment::Extinction,
        Experiment::OnePoint,
        Experiment::Gf,
        Experiment::TwoPoint,
        Experiment::RingCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Kernel => "kernel",
            Experiment::Semigroup => "semigroup",
            Experiment::Clock => "clock",
            Experiment::Extinction => "extinction",
            Experiment::OnePoint => "onepoint",
            Experiment::Gf => "gf",
            Experiment::TwoPoint => "twopoint",
            Experiment::RingCheck => "ring-check",
        }
    }

    /// CSV columns, in order.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Experiment::Kernel => &["t", "x", "heat_kernel", "retarded"],
            Experiment::Semigroup => &["x", "initial", "evolved"],
            Experiment::Clock => &["dtau", "analytic", "mc_estimate", "mc_stderr"],
            Experiment::Extinction => &["tau", "analytic", "mc_estimate", "mc_stderr"],
            Experiment::OnePoint => &["tau", "closed_form", "ode", "picard"],
            Experiment::Gf => &["t", "rk4", "mc_estimate", "mc_stderr"],
            Experiment::TwoPoint => &["t", "x", "d_tilde", "slice_integral", "mass_curve"],
            Experiment::RingCheck => &["property", "cases", "max_rel_error", "tolerance", "pass"],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialShape {
    Gaussian,
    Box,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Fertility {
    Binary(f64),
    General(Vec<f64>),
}

/// Parameters of one run, validated against the preconditions of the
/// library calls they feed.
#[derive(Clone, Debug, PartialEq)]
pub enum ExperimentParams {
    Kernel {
        dim: usize,
        gamma: f64,
        times: Vec<f64>,
        half_width: f64,
        dx: f64,
    },
    Semigroup {
        t: f64,
        half_width: f64,
        dx: f64,
        shape: InitialShape,
        center: f64,
        width: f64,
    },
    Clock {
        gamma: f64,
        dtau_max: f64,
        dtau_step: f64,
        replicas: usize,
    },
    Extinction {
        alpha: f64,
        gamma: f64,
        tau_max: f64,
        tau_step: f64,
        replicas: usize,
        max_particles: usize,
    },
    OnePoint {
        alpha: f64,
        gamma: f64,
        tau_max: f64,
        tau_step: f64,
        order: usize,
    },
    Gf {
        fertility: Fertility,
        gamma: f64,
        theta: f64,
        t_max: f64,
        t_step: f64,
        rk4_step: f64,
        replicas: usize,
        max_particles: usize,
    },
    TwoPoint {
        alpha: f64,
        gamma: f64,
        spec: FieldSpec,
        tol: f64,
        max_iter: usize,
    },
    RingCheck {
        cases: usize,
        tolerance: f64,
        range: f64,
    },
}

/// A fully validated run: the experiment, its parameters and the settings
/// shared by every subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub params: ExperimentParams,
    pub seed: RngSeed,
    pub workers: Option<usize>,
    pub output: Option<String>,
    /// Every parameter with defaults filled in, for the manifest.
    pub resolved: BTreeMap<String, String>,
}

impl ExperimentConfig {
    pub fn from_raw(experiment: Experiment, raw: &RawConfig) -> Result<Self, ConfigError> {
        let mut p = Params::new(raw);
        if let Some(kind) = p.opt_string("experiment") {
            ensure(
                kind == experiment.name(),
                "experiment",
                format!(
                    "experiment = {} (config is for `{kind}`)",
                    experiment.name()
                ),
            )?;
        }
        let seed = RngSeed(p.u64("seed", DEFAULT_SEED)?);
        let workers = match p.opt_u64("workers")? {
            Some(w) => Some(at_least("workers", w as usize, 1)?),
            None => None,
        };
        let output = p.opt_string("output");
        let params = match experiment {
            Experiment::Kernel => kernel(&mut p)?,
            Experiment::Semigroup => semigroup(&mut p)?,
            Experiment::Clock => clock(&mut p)?,
            Experiment::Extinction => extinction(&mut p)?,
            Experiment::OnePoint => onepoint(&mut p)?,
            Experiment::Gf => gf(&mut p)?,
            Experiment::TwoPoint => twopoint(&mut p)?,
            Experiment::RingCheck => ring_check(&mut p)?,
        };
        let resolved = p.finish(experiment.name())?;
        Ok(Self {
            experiment,
            params,
            seed,
            workers,
            output,
            resolved,
        })
    }
}

fn alpha(p: &mut Params) -> Result<f64, ConfigError> {
    unit_interval("alpha", p.required_f64("alpha")?)
}

fn gamma(p: &mut Params) -> Result<f64, ConfigError> {
    positive("gamma", p.f64("gamma", 1.0)?)
}

fn replicas(p: &mut Params, default: usize) -> Result<usize, ConfigError> {
    let r = p.usize("replicas", default)?;
    at_least("replicas", r, 1)
}

fn max_particles(p: &mut Params) -> Result<usize, ConfigError> {
    let m = p.usize("max_particles", DEFAULT_MAX_PARTICLES)?;
    at_least("max_particles", m, 1)
}

fn kernel(p: &mut Params) -> Result<ExperimentParams, ConfigError> {
    let dim = p.usize("dim", 1)?;
    ensure((1..=3).contains(&dim), "dim", "dim ∈ {1, 2, 3}")?;
    let gamma = p.f64("gamma", 1.0)?;
    ensure(gamma >= 0.0, "gamma", "gamma ≥ 0")?;
    let times = p.list("t", &[0.5, 1.0, 2.0])?;
    ensure(times.iter().all(|t| *t > 0.0), "t", "every t > 0")?;
    Ok(ExperimentParams::Kernel {
        dim,
        gamma,
        times,
        half_width: positive("x.half_width", p.f64("x.half_width", 4.0)?)?,
        dx: positive("x.step", p.f64("x.step", 0.1)?)?,
    })
}

fn semigroup(p: &mut Params) -> Result<ExperimentParams, ConfigError> {
    let t = positive("t", p.f64("t", 1.0)?)?;
    let half_width = positive("grid.half_width", p.f64("grid.half_width", 15.0)?)?;
    let dx = positive("grid.dx", p.f64("grid.dx", 0.05)?)?;
    let shape = match p.string("initial", "gaussian").as_str() {
        "gaussian" => InitialShape::Gaussian,
        "box" => InitialShape::Box,
        _ => {
            return Err(ConfigError::validation(
                "initial",
                "initial ∈ {gaussian, box}",
            ))
        }
    };
    let center = p.f64("initial.center", 0.0)?;
    let width = positive("initial.width", p.f64("initial.width", 1.0)?)?;
    ensure(
        center.abs() < half_width,
        "initial.center",
        "|initial.center| < grid.half_width",
    )?;
    Ok(ExperimentParams::Semigroup {
        t,
        half_width,
        dx,
        shape,
        center,
        width,
    })
}

fn clock(p: &mut Params) -> Result<ExperimentParams, ConfigError> {
    Ok(ExperimentParams::Clock {
        gamma: gamma(p)?,
        dtau_max: positive("dtau.max", p.f64("dtau.max", 3.0)?)?,
        dtau_step: positive("dtau.step", p.f64("dtau.step", 0.1)?)?,
        replicas: replicas(p, 10_000)?,
    })
}

fn extinction(p: &mut Params) -> Result<ExperimentParams, ConfigError> {
    Ok(ExperimentParams::Extinction {
        alpha: alpha(p)?,
        gamma: gamma(p)?,
        tau_max: positive("tau.max", p.f64("tau.max", 60.0)?)?,
        tau_step: positive("tau.step", p.f64("tau.step", 1.0)?)?,
        replicas: replicas(p, 20_000)?,
        max_particles: max_particles(p)?,
    })
}

fn onepoint(p: &mut Params) -> Result<ExperimentParams, ConfigError> {
    let alpha = alpha(p)?;
    let gamma = gamma(p)?;
    let tau_max = positive("tau.max", p.f64("tau.max", 10.0)?)?;
    let tau_step = positive("tau.step", p.f64("tau.step", 0.01)?)?;
    let order = p.usize("picard.order", 30)?;
    Ok(ExperimentParams::OnePoint {
        alpha,
        gamma,
        tau_max,
        tau_step,
        order: at_least("picard.order", order, 1)?,
    })
}

fn gf(p: &mut Params) -> Result<ExperimentParams, ConfigError> {
    let alpha = p.opt_f64("alpha")?;
    let probs = p.opt_list("fertility")?;
    let fertility = match (alpha, probs) {
        (Some(a), None) => Fertility::Binary(unit_interval("alpha", a)?),
        (None, Some(probs)) => {
            FertilityDistribution::new(probs.clone()).map_err(|_| {
                ConfigError::validation("fertility", "fertility entries ≥ 0 and summing to 1")
            })?;
            Fertility::General(probs)
        }
        (Some(_), Some(_)) => {
            return Err(ConfigError::validation(
                "fertility",
                "set either alpha or fertility, not both",
            ))
        }
        (None, None) => {
            return Err(ConfigError::validation(
                "alpha",
                "`alpha` or `fertility` is required",
            ))
        }
    };
    Ok(ExperimentParams::Gf {
        fertility,
        gamma: gamma(p)?,
        theta: unit_interval("theta", p.f64("theta", 0.5)?)?,
        t_max: positive("t.max", p.f64("t.max", 1.0)?)?,
        t_step: positive("t.step", p.f64("t.step", 0.1)?)?,
        rk4_step: positive("rk4.step", p.f64("rk4.step", 1e-3)?)?,
        replicas: replicas(p, 20_000)?,
        max_particles: max_particles(p)?,
    })
}

fn twopoint(p: &mut Params) -> Result<ExperimentParams, ConfigError> {
    let alpha = alpha(p)?;
    let gamma = gamma(p)?;
    let t_max = positive("t.max", p.f64("t.max", 1.0)?)?;
    let dt = positive("t.step", p.f64("t.step", 0.02)?)?;
    let half_width = positive("x.half_width", p.f64("x.half_width", 7.0)?)?;
    let dx = positive("x.step", p.f64("x.step", 0.1)?)?;
    ensure(
        half_width >= 6.0 * t_max.sqrt(),
        "x.half_width",
        format!("x.half_width ≥ 6·√t.max = {}", 6.0 * t_max.sqrt()),
    )?;
    let tol = positive("tol", p.f64("tol", 1e-10)?)?;
    let max_iter = at_least("max_iter", p.usize("max_iter", 200)?, 1)?;
    Ok(ExperimentParams::TwoPoint {
        alpha,
        gamma,
        spec: FieldSpec {
            t_max,
            dt,
            half_width,
            dx,
        },
        tol,
        max_iter,
    })
}

fn ring_check(p: &mut Params) -> Result<ExperimentParams, ConfigError> {
    Ok(ExperimentParams::RingCheck {
        cases: at_least("cases", p.usize("cases", 10_000)?, 1)?,
        tolerance: positive("tolerance", p.f64("tolerance", 1e-12)?)?,
        range: positive("range", p.f64("range", 10.0)?)?,
    })
}

/// What a run produces: the CSV table, manifest summaries and, for
/// self-checking experiments, a failure to report after the CSV is written.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub table: Table,
    pub estimates: Vec<Summary>,
    pub failure: Option<String>,
}

impl Report {
    fn new(experiment: Experiment) -> Self {
        Self {
            table: Table::new(experiment.columns().to_vec()),
            estimates: Vec::new(),
            failure: None,
        }
    }
}

/// `n + 1` points `0, T/n, …, T` with spacing at most `step`; the last point
/// is exactly `T`.
fn uniform_times(t_max: f64, step: f64) -> Result<Vec<f64>, RunError> {
    let n = TimeGrid::covering(t_max, step)?.steps;
    Ok((0..=n).map(|i| t_max * i as f64 / n as f64).collect())
}

fn sup_abs(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Runs the experiment on the current rayon pool.
pub fn execute(cfg: &ExperimentConfig) -> Result<Report, RunError> {
    let mut r = Report::new(cfg.experiment);
    match &cfg.params {
        &ExperimentParams::Kernel {
            dim,
            gamma,
            ref times,
            half_width,
            dx,
        } => {
            let origin = SpacePoint::origin(dim)?;
            let xs = Grid1d::symmetric(half_width, dx)?;
            let from = SpaceTimePoint::new(0.0, origin.clone())?;
            for &t in times {
                for x in xs.nodes() {
                    let mut coords = vec![0.0; dim];
                    coords[0] = x;
                    let y = SpacePoint::new(coords)?;
                    let p = heat_kernel(t, &origin, &y)?;
                    let g = retarded_propagator_heat(&from, &SpaceTimePoint::new(t, y)?, gamma)?;
                    r.table.push(vec![t.into(), x.into(), p.into(), g.into()]);
                }
            }
        }
        &ExperimentParams::Semigroup {
            t,
            half_width,
            dx,
            shape,
            center,
            width,
        } => {
            let grid = Grid1d::symmetric(half_width, dx)?;
            let u = SampledFunction::from_fn(grid, |x| match shape {
                InitialShape::Gaussian => (-(x - center).powi(2) / (2.0 * width * width)).exp(),
                InitialShape::Box => f64::from(u8::from((x - center).abs() <= width)),
            })?;
            let evolved = apply_semigroup(&u, t)?;
            for (i, x) in u.grid().nodes().enumerate() {
                r.table.push(vec![
                    x.into(),
                    u.values()[i].into(),
                    evolved.values()[i].into(),
                ]);
            }
            r.estimates
                .push(Summary::exact("initial_mass", u.integral()));
            r.estimates
                .push(Summary::exact("evolved_mass", evolved.integral()));
        }
        &ExperimentParams::Clock {
            gamma,
            dtau_max,
            dtau_step,
            replicas,
        } => clock_run(&mut r, cfg.seed, gamma, dtau_max, dtau_step, replicas)?,
        &ExperimentParams::Extinction {
            alpha,
            gamma,
            tau_max,
            tau_step,
            replicas,
            max_particles,
        } => {
            let taus = uniform_times(tau_max, tau_step)?;
            let config =
                BranchingConfig::binary(alpha, gamma, 1)?.with_max_particles(max_particles)?;
            let mc = estimate_extinction_curve(&config, &taus, replicas, cfg.seed)?;
            for (tau, e) in taus.iter().zip(&mc) {
                let analytic = one_point_closed_form(alpha, gamma, *tau)?;
                r.table.push(vec![
                    (*tau).into(),
                    analytic.into(),
                    e.mean.into(),
                    e.stderr.into(),
                ]);
            }
            r.estimates.push(Summary::estimate(
                "extinction_at_tau_max",
                *mc.last().unwrap(),
            ));
            r.estimates.push(Summary::exact(
                "analytic_at_tau_max",
                one_point_closed_form(alpha, gamma, tau_max)?,
            ));
            r.estimates.push(Summary::exact(
                "ultimate_extinction",
                extinction_probability(alpha)?,
            ));
        }
        &ExperimentParams::OnePoint {
            alpha,
            gamma,
            tau_max,
            tau_step,
            order,
        } => {
            let grid = TimeGrid::covering(tau_max, tau_step)?;
            let taus = uniform_times(tau_max, tau_step)?;
            let ode = one_point_ode(&FertilityDistribution::binary(alpha)?, gamma, 0.0, grid)?;
            let picard = one_point_picard(alpha, gamma, grid, order)?;
            let closed = taus
                .iter()
                .map(|t| one_point_closed_form(alpha, gamma, *t))
                .collect::<heatfield::Result<Vec<f64>>>()?;
            for (i, tau) in taus.iter().enumerate() {
                r.table.push(vec![
                    (*tau).into(),
                    closed[i].into(),
                    ode.values()[i].into(),
                    picard.values()[i].into(),
                ]);
            }
            r.estimates.push(Summary::exact(
                "sup_ode_error",
                sup_abs(ode.values(), &closed),
            ));
            r.estimates.push(Summary::exact(
                "sup_picard_error",
                sup_abs(picard.values(), &closed),
            ));
        }
        ExperimentParams::Gf {
            fertility,
            gamma,
            theta,
            t_max,
            t_step,
            rk4_step,
            replicas,
            max_particles,
        } => {
            let law = match fertility {
                Fertility::Binary(a) => FertilityDistribution::binary(*a)?,
                Fertility::General(p) => FertilityDistribution::new(p.clone())?,
            };
            let config =
                BranchingConfig::new(*gamma, law.clone(), SpacePoint::origin(1)?, *max_particles)?;
            let times = uniform_times(*t_max, *t_step)?;
            let mc =
                estimate_generating_function_curve(&config, *theta, &times, *replicas, cfg.seed)?;
            let mut worst_z: f64 = 0.0;
            for (t, e) in times.iter().zip(&mc) {
                let rk4 =
                    one_point_ode(&law, *gamma, *theta, TimeGrid::covering(*t, *rk4_step)?)?.last();
                if e.stderr > 0.0 {
                    worst_z = worst_z.max((e.mean - rk4).abs() / e.stderr);
                }
                r.table.push(vec![
                    (*t).into(),
                    rk4.into(),
                    e.mean.into(),
                    e.stderr.into(),
                ]);
            }
            r.estimates
                .push(Summary::estimate("gf_at_t_max", *mc.last().unwrap()));
            r.estimates.push(Summary::exact("max_abs_z_score", worst_z));
        }
        &ExperimentParams::TwoPoint {
            alpha,
            gamma,
            spec,
            tol,
            max_iter,
        } => {
            let field = two_point_picard(alpha, gamma, spec, tol, max_iter)?;
            let tg = field.time_grid();
            let mass = mass_curve(alpha, gamma, tg)?;
            let mut mass_gap: f64 = 0.0;
            for i in 0..tg.len() {
                let t = tg.time(i);
                let integral = field.slice_integral(i);
                if i > 0 {
                    mass_gap = mass_gap.max((integral - mass.values()[i]).abs());
                }
                for (m, x) in field.space_grid().nodes().enumerate() {
                    r.table.push(vec![
                        t.into(),
                        x.into(),
                        field.value(i, m).into(),
                        integral.into(),
                        mass.values()[i].into(),
                    ]);
                }
            }
            r.estimates
                .push(Summary::exact("iterations", field.iterations() as f64));
            r.estimates
                .push(Summary::exact("last_update", field.last_update()));
            r.estimates.push(Summary::exact(
                "fixed_point_residual",
                two_point_residual(alpha, gamma, spec, &field)?,
            ));
            r.estimates.push(Summary::exact("max_mass_gap", mass_gap));
        }
        &ExperimentParams::RingCheck {
            cases,
            tolerance,
            range,
        } => ring_check_run(&mut r, cfg.seed, cases, tolerance, range)?,
    }
    Ok(r)
}

fn clock_run(
    r: &mut Report,
    seed: RngSeed,
    gamma: f64,
    dtau_max: f64,
    dtau_step: f64,
    replicas: usize,
) -> Result<(), RunError> {
    // A single particle that dies at its first event; the horizon leaves an
    // e^(−60) chance of no event at all.
    let config = BranchingConfig::new(
        gamma,
        FertilityDistribution::new(vec![1.0])?,
        SpacePoint::origin(1)?,
        1,
    )?;
    let horizon = dtau_max.max(60.0 / gamma);
    let logs = simulate_branching_replicas(&config, horizon, &[], replicas, seed)?;
    let mut times: Vec<f64> = logs
        .iter()
        .map(|l| l.first_event_time().unwrap_or(f64::INFINITY))
        .collect();
    let finite: Vec<f64> = times.iter().copied().filter(|t| t.is_finite()).collect();
    times.sort_by(f64::total_cmp);
    for dtau in uniform_times(dtau_max, dtau_step)? {
        let analytic = event_probability(gamma, dtau)?;
        let hits = times.partition_point(|t| *t <= dtau);
        let e = Estimate::proportion(hits, replicas);
        r.table.push(vec![
            dtau.into(),
            analytic.into(),
            e.mean.into(),
            e.stderr.into(),
        ]);
    }
    let n = times.len() as f64;
    let ks = times
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let cdf = -(-gamma * t).exp_m1();
            (cdf - i as f64 / n).abs().max((i as f64 + 1.0) / n - cdf)
        })
        .fold(0.0, f64::max);
    // Asymptotic 1% critical value of the one-sample Kolmogorov statistic.
    let critical = 1.6276 / n.sqrt();
    r.estimates.push(Summary::estimate(
        "mean_lifetime",
        Estimate::from_samples(&finite),
    ));
    r.estimates
        .push(Summary::exact("analytic_mean_lifetime", 1.0 / gamma));
    r.estimates.push(Summary::exact("ks_statistic", ks));
    r.estimates
        .push(Summary::exact("ks_critical_1pct", critical));
    r.estimates.push(Summary::exact(
        "ks_pass",
        f64::from(u8::from(ks < critical)),
    ));
    Ok(())
}

fn rel_err(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

/// Relative error in each zero-divisor coordinate.
fn pc_err(p: PseudoComplex, q: PseudoComplex) -> f64 {
    rel_err(p.gamma_plus(), q.gamma_plus()).max(rel_err(p.gamma_minus(), q.gamma_minus()))
}

fn ring_check_run(
    r: &mut Report,
    seed: RngSeed,
    cases: usize,
    tol: f64,
    range: f64,
) -> Result<(), RunError> {
    let mut rng = seed.rng();
    let draw = |rng: &mut heatfield::rng::ReplicaRng| {
        PseudoComplex::new(
            rng.random_range(-range..range),
            rng.random_range(-range..range),
        )
    };
    let names = [
        "homomorphism_plus",
        "homomorphism_minus",
        "involution",
        "exponential_law",
        "unitarity",
        "inverse",
    ];
    let mut worst = [0.0f64; 6];
    let mut counted = [0usize; 6];
    for _ in 0..cases {
        let (z, w) = (draw(&mut rng)?, draw(&mut rng)?);
        let sum = z.gamma_plus() + w.gamma_plus();
        let prod = z.gamma_plus() * w.gamma_plus();
        worst[0] = worst[0]
            .max(rel_err((z + w).gamma_plus(), sum))
            .max(rel_err((z * w).gamma_plus(), prod));
        let sum = z.gamma_minus() + w.gamma_minus();
        let prod = z.gamma_minus() * w.gamma_minus();
        worst[1] = worst[1]
            .max(rel_err((z + w).gamma_minus(), sum))
            .max(rel_err((z * w).gamma_minus(), prod));
        worst[2] = worst[2]
            .max(pc_err(z.conj().conj(), z))
            .max(pc_err((z * w).conj(), z.conj() * w.conj()))
            .max(rel_err(z.conj().gamma_plus(), z.gamma_minus()));
        worst[3] = worst[3].max(pc_err((z + w).exp()?, z.exp()? * w.exp()?));
        let energy = rng.random_range(0.0..range / 2.0);
        let (t, s) = (
            rng.random_range(-range..range),
            rng.random_range(-range..range),
        );
        let (ut, us) = (time_evolution(energy, t)?, time_evolution(energy, s)?);
        worst[4] = worst[4]
            .max(pc_err(ut * us, time_evolution(energy, t + s)?))
            .max(pc_err(ut.conj() * ut, PseudoComplex::ONE));
        for c in &mut counted[..5] {
            *c += 1;
        }
        if let Ok(inv) = z.inverse() {
            worst[5] = worst[5].max(pc_err(z * inv, PseudoComplex::ONE));
            counted[5] += 1;
        }
    }
    let mut failed = Vec::new();
    for i in 0..names.len() {
        let pass = worst[i] <= tol;
        if !pass {
            failed.push(names[i]);
        }
        r.table.push(vec![
            Cell::Text(names[i].to_string()),
            Cell::Int(counted[i] as u64),
            Cell::Num(worst[i]),
            Cell::Num(tol),
            Cell::Bool(pass),
        ]);
        r.estimates.push(Summary::exact(
            format!("{}_max_rel_error", names[i]),
            worst[i],
        ));
    }
    if !failed.is_empty() {
        r.failure = Some(format!(
            "ring properties above tolerance: {}",
            failed.join(", ")
        ));
    }
    Ok(())
}
