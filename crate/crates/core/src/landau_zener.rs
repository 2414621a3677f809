//! Landau–Zener sweep with counterdiabatic (CD) assistance.
//!
//! `H₀/ħ = Δσₓ + g(t)σ_z` with `g(t) = g₀ r(t/τ)` sweeping from `−g₀` to `+g₀`,
//! and `H_CD/ħ = −g_CD(t)σ_y` with `g_CD = Δġ/(2(Δ² + g²))`. Each control
//! amplitude is produced by a coil field `⟨B⟩ = ħ g/μ`, so the coil entropy of
//! field `i` is `Σᵢ = ħ²χ ζᵢ/μ²` with `ζᵢ = ∫ gᵢ² dt`. The static `Δσₓ` field
//! costs nothing dynamical and is not counted.

use num_complex::Complex64;

use crate::circuit::{self, CircuitParams};
use crate::constants::{BOHR_MAGNETON, HBAR};
use crate::error::{Error, Result};
use crate::numerics::{self, minimize_scalar, ode_evolve, OdeState};
use crate::protocols::{RampProfile, SmoothRamp};

const ZETA_REL_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub struct LzConfig<R = SmoothRamp<f64>> {
    /// Tunnel splitting Δ, rad/s.
    pub delta: f64,
    /// Sweep amplitude g₀, rad/s.
    pub g0: f64,
    /// Protocol duration τ, s.
    pub tau: f64,
    /// Magnetic moment μ, J/T.
    pub mu: f64,
    /// Normalized sweep `r(s)` with `r(0) = −1`, `r(1) = +1`.
    pub ramp: R,
}

impl LzConfig<SmoothRamp<f64>> {
    /// Quintic sweep with the Bohr magneton as moment.
    pub fn quintic(delta: f64, g0: f64, tau: f64) -> Result<Self> {
        Self::new(delta, g0, tau, BOHR_MAGNETON, SmoothRamp::lz_quintic())
    }

    /// Quintic sweep whose end states are a Bures distance `bures` apart
    /// (`g₀ = Δ tan 𝓛`).
    pub fn quintic_at_bures(bures: f64, delta: f64, tau: f64) -> Result<Self> {
        if !(bures > 0.0 && bures < std::f64::consts::FRAC_PI_2) {
            return Err(Error::invalid("bures", "must lie in (0, π/2)"));
        }
        Self::quintic(delta, delta * bures.tan(), tau)
    }
}

impl<R: RampProfile> LzConfig<R> {
    pub fn new(delta: f64, g0: f64, tau: f64, mu: f64, ramp: R) -> Result<Self> {
        let cfg = Self {
            delta,
            g0,
            tau,
            mu,
            ramp,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("delta", self.delta),
            ("g0", self.g0),
            ("tau", self.tau),
            ("mu", self.mu),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(
                    name,
                    format!("must be positive and finite, got {v}"),
                ));
            }
        }
        Ok(())
    }

    pub fn with_tau(&self, tau: f64) -> Self
    where
        R: Clone,
    {
        Self {
            tau,
            ..self.clone()
        }
    }

    fn s_of(&self, t: f64) -> f64 {
        // RK4 stage times stay in [0, τ]; the clamp only absorbs rounding.
        (t / self.tau).clamp(0.0, 1.0)
    }

    fn ramp_at(&self, s: f64, order: usize) -> f64 {
        self.ramp.eval(s, order).unwrap_or(f64::NAN)
    }

    /// Control amplitude `g(t)`, rad/s.
    pub fn g(&self, t: f64) -> f64 {
        self.g0 * self.ramp_at(self.s_of(t), 0)
    }

    /// `dg/dt`, rad/s².
    pub fn g_dot(&self, t: f64) -> f64 {
        self.g0 * self.ramp_at(self.s_of(t), 1) / self.tau
    }

    pub fn ratio(&self) -> f64 {
        self.g0 / self.delta
    }
}

/// Ramp whose CD field is constant in time: `arctan(G/Δ)` runs linearly
/// from `−𝓛` to `+𝓛`, i.e. `r(s) = tan(𝓛(2s − 1))·Δ/g₀`. It saturates the
/// bound `ζ_CD ≥ 𝓛²/τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArctanSchedule {
    ratio: f64,
    bures: f64,
}

impl ArctanSchedule {
    pub fn new(g0: f64, delta: f64) -> Result<Self> {
        if !(g0 > 0.0 && delta > 0.0) {
            return Err(Error::invalid("g0/delta", "must be positive"));
        }
        let ratio = g0 / delta;
        Ok(Self {
            ratio,
            bures: ratio.atan(),
        })
    }
}

impl RampProfile for ArctanSchedule {
    fn eval(&self, s: f64, order: usize) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::OutsideUnitInterval { s });
        }
        let u = self.bures * (2.0 * s - 1.0);
        let tan = u.tan();
        let sec2 = 1.0 + tan * tan;
        let w = 2.0 * self.bures;
        let v = match order {
            0 => tan,
            1 => w * sec2,
            2 => w * w * 2.0 * sec2 * tan,
            3 => w * w * w * 2.0 * sec2 * (1.0 + 3.0 * tan * tan),
            _ => return Err(Error::UnsupportedOrder { order }),
        };
        Ok(v / self.ratio)
    }

    fn label(&self) -> &str {
        "arctan-schedule"
    }
}

/// Counterdiabatic amplitude `g_CD(t) = Δġ/(2(Δ² + g²))`, rad/s.
pub fn cd_field<R: RampProfile>(cfg: &LzConfig<R>, t: f64) -> Result<f64> {
    if !(0.0..=cfg.tau).contains(&t) {
        return Err(Error::invalid("t", format!("{t} outside [0, tau]")));
    }
    let g = cfg.g(t);
    Ok(cfg.delta * cfg.g_dot(t) / (2.0 * (cfg.delta * cfg.delta + g * g)))
}

fn unit_integral<F: Fn(f64) -> f64>(f: F) -> Result<f64> {
    Ok(numerics::integrate(f, 0.0, 1.0, ZETA_REL_TOL)?.value)
}

/// `ζ_Z = τ ∫₀¹ G(s)² ds`: entropy (per `ħ²χ/μ²`) of the sweep field.
pub fn zeta_z<R: RampProfile>(cfg: &LzConfig<R>) -> Result<f64> {
    let r2 = unit_integral(|s| {
        let r = cfg.ramp_at(s, 0);
        r * r
    })?;
    Ok(cfg.tau * cfg.g0 * cfg.g0 * r2)
}

/// `ζ_CD = (1/τ) ∫₀¹ Δ²Ġ²/(4(Δ² + G²)²) ds`: entropy of the CD field.
pub fn zeta_cd<R: RampProfile>(cfg: &LzConfig<R>) -> Result<f64> {
    let x = cfg.ratio();
    let integral = unit_integral(|s| {
        let r = cfg.ramp_at(s, 0);
        let dr = cfg.ramp_at(s, 1);
        let den = 1.0 + x * x * r * r;
        x * x * dr * dr / (4.0 * den * den)
    })?;
    Ok(integral / cfg.tau)
}

/// Bures distance `arctan(g₀/Δ)` between the initial and final ground states.
pub fn bures_lz(g0: f64, delta: f64) -> f64 {
    (g0 / delta).atan()
}

/// `𝓛²/τ`, a lower bound on `ζ_CD` for every sweep between `∓g₀`.
pub fn cd_lower_bound<R: RampProfile>(cfg: &LzConfig<R>) -> f64 {
    let l = bures_lz(cfg.g0, cfg.delta);
    l * l / cfg.tau
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalTime {
    /// `ζ_Z = a τ`.
    pub a: f64,
    /// `ζ_CD = b/τ`.
    pub b: f64,
    pub tau_min: f64,
    pub zeta_min: f64,
}

/// Duration minimizing `ζ_Z + ζ_CD`: `τ_min = √(b/a)`, `ζ_min = 2√(ab)`.
pub fn optimal_time<R: RampProfile>(cfg: &LzConfig<R>) -> Result<OptimalTime> {
    let a = zeta_z(cfg)? / cfg.tau;
    let b = zeta_cd(cfg)? * cfg.tau;
    Ok(OptimalTime {
        a,
        b,
        tau_min: (b / a).sqrt(),
        zeta_min: 2.0 * (a * b).sqrt(),
    })
}

/// Golden-section minimization of `ζ_Z(τ) + ζ_CD(τ)` over `log τ ∈ [log lo, log hi]`,
/// evaluating both functionals afresh at every trial duration.
pub fn optimal_time_numeric<R: RampProfile + Clone>(
    cfg: &LzConfig<R>,
    lo: f64,
    hi: f64,
) -> Result<(f64, f64)> {
    let total = |log_tau: f64| {
        let c = cfg.with_tau(log_tau.exp());
        match (zeta_z(&c), zeta_cd(&c)) {
            (Ok(z), Ok(cd)) => z + cd,
            _ => f64::INFINITY,
        }
    };
    let m = minimize_scalar(total, lo.ln(), hi.ln(), 1e-10)?;
    Ok((m.argmin.exp(), m.min_value))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyBreakdown {
    pub zeta_z: f64,
    pub zeta_cd: f64,
    pub zeta_total: f64,
    pub tau_min: f64,
    pub zeta_min: f64,
    pub bures: f64,
    pub cd_bound: f64,
}

pub fn entropy_breakdown<R: RampProfile>(cfg: &LzConfig<R>) -> Result<EntropyBreakdown> {
    let zeta_z = zeta_z(cfg)?;
    let zeta_cd = zeta_cd(cfg)?;
    let opt = optimal_time(cfg)?;
    Ok(EntropyBreakdown {
        zeta_z,
        zeta_cd,
        zeta_total: zeta_z + zeta_cd,
        tau_min: opt.tau_min,
        zeta_min: opt.zeta_min,
        bures: bures_lz(cfg.g0, cfg.delta),
        cd_bound: cd_lower_bound(cfg),
    })
}

/// Two-level state vector in the σ_z basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    pub amplitudes: [Complex64; 2],
}

impl QubitState {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes[0].norm_sqr() + self.amplitudes[1].norm_sqr()
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &QubitState) -> f64 {
        (self.amplitudes[0].conj() * other.amplitudes[0]
            + self.amplitudes[1].conj() * other.amplitudes[1])
            .norm_sqr()
    }

    /// Ground state of `Δσₓ + gσ_z`: `(sin(θ/2), −cos(θ/2))` with `θ = atan2(Δ, g)`.
    pub fn ground_state(g: f64, delta: f64) -> Self {
        let half = 0.5 * delta.atan2(g);
        Self {
            amplitudes: [
                Complex64::new(half.sin(), 0.0),
                Complex64::new(-half.cos(), 0.0),
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evolution {
    pub final_state: QubitState,
    /// Overlap with the ground state of `H₀(τ)`.
    pub fidelity: f64,
}

/// Integrates the Schrödinger equation from the ground state of `H₀(0)` over
/// `[0, τ]` with `steps` RK4 steps, optionally adding the CD term.
pub fn evolve<R: RampProfile>(cfg: &LzConfig<R>, with_cd: bool, steps: usize) -> Result<Evolution> {
    cfg.validate()?;
    let psi0 = QubitState::ground_state(cfg.g(0.0), cfg.delta);
    let y0 = OdeState::new(
        0.0,
        vec![
            psi0.amplitudes[0].re,
            psi0.amplitudes[0].im,
            psi0.amplitudes[1].re,
            psi0.amplitudes[1].im,
        ],
    );
    let delta = cfg.delta;
    let end = ode_evolve(
        |t, y: &[f64], dy: &mut [f64]| {
            let g = cfg.g(t);
            let gcd = if with_cd {
                let gd = cfg.g_dot(t);
                delta * gd / (2.0 * (delta * delta + g * g))
            } else {
                0.0
            };
            let a = Complex64::new(y[0], y[1]);
            let b = Complex64::new(y[2], y[3]);
            // H = [[g, Δ + i g_CD], [Δ − i g_CD, −g]], ψ̇ = −iHψ
            let off = Complex64::new(delta, gcd);
            let ha = a * g + off * b;
            let hb = off.conj() * a - b * g;
            let da = Complex64::new(ha.im, -ha.re);
            let db = Complex64::new(hb.im, -hb.re);
            dy[0] = da.re;
            dy[1] = da.im;
            dy[2] = db.re;
            dy[3] = db.im;
        },
        &y0,
        cfg.tau,
        steps,
    )?;
    let final_state = QubitState {
        amplitudes: [
            Complex64::new(end.y[0], end.y[1]),
            Complex64::new(end.y[2], end.y[3]),
        ],
    };
    let target = QubitState::ground_state(cfg.g(cfg.tau), cfg.delta);
    Ok(Evolution {
        final_state,
        fidelity: target.overlap(&final_state),
    })
}

/// Coil fields realizing the two control amplitudes.
#[derive(Debug, Clone, Copy)]
pub struct LzFields<'a, R> {
    cfg: &'a LzConfig<R>,
}

/// `⟨B_z⟩ = ħ g/μ` and `⟨B_y⟩ = −ħ g_CD/μ` (the sign makes `μ⟨B_y⟩σ_y = −ħ g_CD σ_y`).
pub fn field_profiles<R: RampProfile>(cfg: &LzConfig<R>) -> LzFields<'_, R> {
    LzFields { cfg }
}

impl<R: RampProfile> LzFields<'_, R> {
    pub fn bz(&self, t: f64) -> f64 {
        HBAR * self.cfg.g(t) / self.cfg.mu
    }

    pub fn by(&self, t: f64) -> f64 {
        let c = self.cfg;
        let g = c.g(t);
        -HBAR * c.delta * c.g_dot(t) / (2.0 * (c.delta * c.delta + g * g)) / c.mu
    }
}

/// `ħ²χ/μ²`, converting a ζ-value into entropy in J/K.
pub fn zeta_to_entropy(p: &CircuitParams, mu: f64) -> f64 {
    HBAR * HBAR * p.chi() / (mu * mu)
}

/// `(Σ_Z, Σ_CD)` in J/K from direct integration of the coil fields, with
/// separate circuits for the z and y coils.
pub fn coil_entropies<R: RampProfile>(
    cfg: &LzConfig<R>,
    z_coil: &CircuitParams,
    y_coil: &CircuitParams,
) -> Result<(f64, f64)> {
    let fields = field_profiles(cfg);
    let sz = circuit::protocol_entropy(|t| fields.bz(t), z_coil, cfg.tau)?;
    let sy = circuit::protocol_entropy(|t| fields.by(t), y_coil, cfg.tau)?;
    Ok((sz, sy))
}
