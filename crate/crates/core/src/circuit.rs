//! RL model of a Helmholtz coil pair driven by a function generator.
//!
//! The coil current obeys the Langevin equation
//! `2L İ + R I = V(t) + √(2 R k_B T) ξ̇(t)` with Johnson–Nyquist noise `ξ̇`.
//! Being linear, the current distribution stays Gaussian and is fully described
//! by its mean and variance, whose dynamics decouple: only the mean depends on
//! the drive. The produced field is `B = A I`.

use rand_distr::{Distribution, Normal};

use crate::constants::BOLTZMANN;
use crate::error::{Error, Result};
use crate::numerics::{self, ode_evolve_with, OdeState, SdeSettings, TrajectoryRng};
use crate::protocols::SmoothRamp;

/// Relative tolerance for the protocol-entropy quadrature.
const ENTROPY_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams {
    /// Total resistance R, Ω.
    pub resistance: f64,
    /// Inductance L of each coil, H. The pair has total inductance 2L.
    pub inductance: f64,
    /// Bath temperature T, K.
    pub temperature: f64,
    /// Field per unit current A, T/A.
    pub coil_constant: f64,
}

impl Default for CircuitParams {
    /// 1 Ω, 1 mH per coil, 300 K, 1 mT/A.
    fn default() -> Self {
        Self {
            resistance: 1.0,
            inductance: 1e-3,
            temperature: 300.0,
            coil_constant: 1e-3,
        }
    }
}

impl CircuitParams {
    pub fn new(
        resistance: f64,
        inductance: f64,
        temperature: f64,
        coil_constant: f64,
    ) -> Result<Self> {
        let p = Self {
            resistance,
            inductance,
            temperature,
            coil_constant,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(
                    name,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        };
        check("resistance", self.resistance)?;
        check("inductance", self.inductance)?;
        check("temperature", self.temperature)?;
        check("coil_constant", self.coil_constant)
    }

    pub fn boltzmann(&self) -> f64 {
        BOLTZMANN
    }

    pub fn total_inductance(&self) -> f64 {
        2.0 * self.inductance
    }

    /// χ = R/(T A²), converting `∫⟨B⟩² dt` into entropy.
    pub fn chi(&self) -> f64 {
        self.resistance / (self.temperature * self.coil_constant * self.coil_constant)
    }

    /// Stationary current variance k_B T/(2L).
    pub fn steady_variance(&self) -> f64 {
        BOLTZMANN * self.temperature / self.total_inductance()
    }

    /// Relaxation time 2L/R of the mean current; also the explicit Euler stability limit.
    pub fn relaxation_time(&self) -> f64 {
        self.total_inductance() / self.resistance
    }

    /// Default Euler–Maruyama step, one hundredth of the relaxation time.
    pub fn default_dt(&self) -> f64 {
        self.relaxation_time() / 100.0
    }

    /// Noise amplitude √(2 R k_B T)/(2L) of `dI = … dt + σ dW`.
    pub fn noise_amplitude(&self) -> f64 {
        (2.0 * self.resistance * BOLTZMANN * self.temperature).sqrt() / self.total_inductance()
    }
}

/// Mean and variance of the coil current at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentState {
    pub mean_current: f64,
    pub variance: f64,
    pub t: f64,
}

impl MomentState {
    /// Equilibrated fluctuations around the given mean.
    pub fn steady(p: &CircuitParams, mean_current: f64, t: f64) -> Self {
        Self {
            mean_current,
            variance: p.steady_variance(),
            t,
        }
    }
}

/// A prescribed mean current and its time derivative.
pub trait CurrentProtocol: Sync {
    fn current(&self, t: f64) -> f64;
    fn current_rate(&self, t: f64) -> f64;
}

/// Current `I₀·r(t/τ)` following a polynomial ramp over `[0, τ]`, held at
/// the end values outside that window.
#[derive(Debug, Clone)]
pub struct RampCurrent {
    pub ramp: SmoothRamp<f64>,
    pub amplitude: f64,
    pub tau: f64,
}

impl RampCurrent {
    pub fn new(ramp: SmoothRamp<f64>, amplitude: f64, tau: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::invalid("tau", "must be positive"));
        }
        Ok(Self {
            ramp,
            amplitude,
            tau,
        })
    }
}

impl CurrentProtocol for RampCurrent {
    fn current(&self, t: f64) -> f64 {
        let s = (t / self.tau).clamp(0.0, 1.0);
        self.amplitude * self.ramp.eval_unchecked(s, 0)
    }

    fn current_rate(&self, t: f64) -> f64 {
        if !(0.0..=self.tau).contains(&t) {
            return 0.0;
        }
        self.amplitude * self.ramp.eval_unchecked(t / self.tau, 1) / self.tau
    }
}

/// Voltage `V = 2L d⟨I⟩/dt + R⟨I⟩` that makes the mean current follow `target`.
pub fn reverse_voltage<P: CurrentProtocol + ?Sized>(target: &P, p: &CircuitParams, t: f64) -> f64 {
    p.total_inductance() * target.current_rate(t) + p.resistance * target.current(t)
}

/// Right-hand sides `(d⟨I⟩/dt, dΔ²/dt)` of the moment equations.
pub fn moment_rates(state: &MomentState, voltage: f64, p: &CircuitParams) -> (f64, f64) {
    let two_l = p.total_inductance();
    let d_mean = (voltage - p.resistance * state.mean_current) / two_l;
    let d_var = -(p.resistance / p.inductance) * state.variance
        + p.resistance * BOLTZMANN * p.temperature / (2.0 * p.inductance * p.inductance);
    (d_mean, d_var)
}

/// Advances the moments by `dt` holding `voltage` constant, using the exact
/// exponential solution of both linear equations.
pub fn moment_step(
    state: &MomentState,
    voltage: f64,
    p: &CircuitParams,
    dt: f64,
) -> Result<MomentState> {
    if !(dt > 0.0) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    let i_inf = voltage / p.resistance;
    let mean_decay = (-dt / p.relaxation_time()).exp();
    let var_ss = p.steady_variance();
    let var_decay = (-dt * p.resistance / p.inductance).exp();
    Ok(MomentState {
        mean_current: i_inf + (state.mean_current - i_inf) * mean_decay,
        variance: var_ss + (state.variance - var_ss) * var_decay,
        t: state.t + dt,
    })
}

/// Integrates the moment equations under a time-dependent voltage with RK4,
/// returning `steps + 1` states including the initial one.
pub fn evolve_moments<V>(
    voltage: V,
    p: &CircuitParams,
    initial: MomentState,
    t1: f64,
    steps: usize,
) -> Result<Vec<MomentState>>
where
    V: Fn(f64) -> f64,
{
    let mut out = Vec::with_capacity(steps + 1);
    out.push(initial);
    let mut y = OdeState::new(initial.t, vec![initial.mean_current, initial.variance]);
    ode_evolve_with(
        |t, y: &[f64], dy: &mut [f64]| {
            let s = MomentState {
                mean_current: y[0],
                variance: y[1],
                t,
            };
            let (dm, dv) = moment_rates(&s, voltage(t), p);
            dy[0] = dm;
            dy[1] = dv;
        },
        &mut y,
        t1,
        steps,
        |st| {
            out.push(MomentState {
                mean_current: st.y[0],
                variance: st.y[1],
                t: st.t,
            })
        },
    )?;
    Ok(out)
}

/// The two contributions to the entropy production rate, W/K: Joule heating
/// `(R/T)⟨I⟩²` and the non-negative fluctuation term
/// `(R/4L²)(k_B T − 2LΔ²)²/(T Δ²)`.
pub fn entropy_rate_parts(state: &MomentState, p: &CircuitParams) -> Result<(f64, f64)> {
    if !(state.variance > 0.0) {
        return Err(Error::NonPositiveVariance {
            variance: state.variance,
        });
    }
    let heat = p.resistance / p.temperature * state.mean_current * state.mean_current;
    let gap = BOLTZMANN * p.temperature - p.total_inductance() * state.variance;
    let fluct = p.resistance / (4.0 * p.inductance * p.inductance) * gap * gap
        / (p.temperature * state.variance);
    Ok((heat, fluct))
}

/// Instantaneous entropy production rate of the coil circuit, W/K.
pub fn entropy_rate(state: &MomentState, p: &CircuitParams) -> Result<f64> {
    entropy_rate_parts(state, p).map(|(h, f)| h + f)
}

/// `Σ = χ ∫₀^τ ⟨B(t)⟩² dt`, J/K: the entropy of a protocol run from
/// equilibrated current fluctuations.
pub fn protocol_entropy<F>(mean_field: F, p: &CircuitParams, tau: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(tau > 0.0) {
        return Err(Error::invalid("tau", "must be positive"));
    }
    // Normalize so the quadrature's absolute floor is irrelevant for tiny SI fields.
    let scale = (0..=64)
        .map(|i| mean_field(tau * i as f64 / 64.0).abs())
        .fold(0.0, f64::max);
    if !scale.is_finite() {
        return Err(Error::NonFinite { t: 0.0 });
    }
    if scale == 0.0 {
        let q = numerics::integrate(|s| mean_field(s * tau).powi(2), 0.0, 1.0, ENTROPY_REL_TOL)?;
        return Ok(p.chi() * tau * q.value);
    }
    let q = numerics::integrate(
        |s| {
            let b = mean_field(s * tau) / scale;
            b * b
        },
        0.0,
        1.0,
        ENTROPY_REL_TOL,
    )?;
    Ok(p.chi() * tau * scale * scale * q.value)
}

/// How the ensemble is prepared at t = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialCondition {
    /// Equilibrated Gaussian fluctuations, variance k_B T/(2L), around `mean`.
    Stationary { mean: f64 },
    /// Gaussian with the given mean and variance (variance 0 starts every path at `mean`).
    Fixed { mean: f64, variance: f64 },
}

impl InitialCondition {
    /// Pre-stabilized at the current the protocol requires at t = 0.
    pub fn stationary_for<P: CurrentProtocol + ?Sized>(target: &P) -> Self {
        InitialCondition::Stationary {
            mean: target.current(0.0),
        }
    }

    fn moments(&self, p: &CircuitParams) -> (f64, f64) {
        match *self {
            InitialCondition::Stationary { mean } => (mean, p.steady_variance()),
            InitialCondition::Fixed { mean, variance } => (mean, variance),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitSimulation {
    pub tau: f64,
    pub dt: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub initial: InitialCondition,
    pub record_every: usize,
}

impl CircuitSimulation {
    /// Settings with the default step `(2L/R)/100` and every step recorded.
    pub fn new(
        p: &CircuitParams,
        tau: f64,
        n_traj: usize,
        seed: u64,
        initial: InitialCondition,
    ) -> Self {
        Self {
            tau,
            dt: p.default_dt(),
            n_traj,
            seed,
            initial,
            record_every: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub empirical_mean: f64,
    pub empirical_variance: f64,
    /// Entropy rate evaluated on the empirical moments; `+∞` when the
    /// empirical variance is zero.
    pub entropy_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleTrace {
    pub samples: Vec<TraceSample>,
    pub n_traj: usize,
    pub seed: u64,
    pub stability_warning: bool,
}

impl EnsembleTrace {
    /// Trapezoidal integral of the sampled entropy rate, J/K.
    pub fn integrated_entropy(&self) -> f64 {
        self.samples
            .windows(2)
            .map(|w| 0.5 * (w[1].t - w[0].t) * (w[0].entropy_rate + w[1].entropy_rate))
            .sum()
    }

    /// Standard error of the empirical mean at sample `i`.
    pub fn mean_standard_error(&self, i: usize) -> f64 {
        (self.samples[i].empirical_variance / self.n_traj as f64).sqrt()
    }

    /// Standard error of the empirical variance at sample `i` (Gaussian ensemble).
    pub fn variance_standard_error(&self, i: usize) -> f64 {
        self.samples[i].empirical_variance * (2.0 / (self.n_traj as f64 - 1.0)).sqrt()
    }
}

/// Euler–Maruyama ensemble of the coil current under the drive `voltage(t)`.
///
/// A step above the stability limit 2L/R sets `stability_warning` instead of failing.
pub fn simulate_circuit<V>(
    voltage: V,
    p: &CircuitParams,
    sim: &CircuitSimulation,
) -> Result<EnsembleTrace>
where
    V: Fn(f64) -> f64 + Sync,
{
    p.validate()?;
    let (mean0, var0) = sim.initial.moments(p);
    if !(var0 >= 0.0) {
        return Err(Error::invalid("initial variance", "must be non-negative"));
    }
    let sampler =
        Normal::new(mean0, var0.sqrt()).map_err(|e| Error::invalid("initial", e.to_string()))?;
    let two_l = p.total_inductance();
    let settings = SdeSettings::new(0.0, sim.tau, sim.dt, sim.n_traj, sim.seed)
        .record_every(sim.record_every)
        .stability_limit(p.relaxation_time());
    let stats = numerics::sde_ensemble(
        |t, i| (voltage(t) - p.resistance * i) / two_l,
        p.noise_amplitude(),
        |rng: &mut TrajectoryRng| sampler.sample(rng),
        &settings,
    )?;

    let samples = stats
        .samples
        .iter()
        .map(|s| {
            let state = MomentState {
                mean_current: s.mean,
                variance: s.variance,
                t: s.t,
            };
            TraceSample {
                t: s.t,
                empirical_mean: s.mean,
                empirical_variance: s.variance,
                entropy_rate: entropy_rate(&state, p).unwrap_or(f64::INFINITY),
            }
        })
        .collect();
    Ok(EnsembleTrace {
        samples,
        n_traj: stats.n_traj,
        seed: stats.seed,
        stability_warning: stats.stability_warning,
    })
}
