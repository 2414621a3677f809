//! Invariant-based compression and expansion of an ion in a Penning trap.
//!
//! The radial length scale `l(t) = l₀ λ(t/τ)` is prescribed by the degree-7
//! ansatz of [`SmoothRamp::penning_lambda`]; the Ermakov equation then fixes
//! the radial frequency, and with it the axial magnetic field
//!
//! ```text
//! ⟨B_z(sτ)⟩ = ħ/(q l₀²) · λ⁻² · √(1 − λ³λ̈/η² + ν²λ⁴/(2 − ν²))
//! ```
//!
//! where `λ̈ = d²λ/ds²`, `η = τ ω_r(0)` and `ν = ω_z/ω(0)`. Time is scaled by
//! `ω_r(0) = ħ/(2 m l₀²)`, so `τ = η/ω_r(0) = 2 m l₀² η/ħ`.

use crate::circuit::{self, CircuitParams};
use crate::constants::{BERYLLIUM_9_ION_MASS, ELEMENTARY_CHARGE, HBAR};
use crate::error::{Error, Result};
use crate::numerics::{self, minimize_scalar};
use crate::protocols::{lambda_alpha, lambda_curvature_max, SmoothRamp};

/// Grid used when a report needs to certify realizability.
pub const REALIZABILITY_GRID: usize = 20_000;

const ZETA_REL_TOL: f64 = 1e-13;

/// Relative margin added to the refined supremum in [`min_eta`] so the field
/// radicand stays non-negative after rounding.
const MIN_ETA_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenningConfig {
    /// Compression ratio: the radial length shrinks to `l₀/√c`, so the radial
    /// frequency ends at `c·ω_r(0)`. `c > 1` compresses, `c < 1` expands.
    pub c: f64,
    /// Rescaled duration `η = τ ω_r(0)`.
    pub eta: f64,
    /// `ν = ω_z/ω(0)`, in `(0, √2)`.
    pub nu: f64,
    /// Initial radial length l₀, m.
    pub l0: f64,
    /// Ion mass, kg.
    pub m: f64,
    /// Ion charge, C.
    pub q: f64,
}

/// Initial radial frequency of the default trap, rad/s (2π × 1 MHz).
pub const DEFAULT_OMEGA_R0: f64 = 2.0 * std::f64::consts::PI * 1e6;

/// Ground-state length `√(ħ/(2 m ω_r))`.
pub fn ground_state_length(m: f64, omega_r: f64) -> f64 {
    (HBAR / (2.0 * m * omega_r)).sqrt()
}

impl PenningConfig {
    pub fn new(c: f64, eta: f64, nu: f64, l0: f64, m: f64, q: f64) -> Result<Self> {
        let cfg = Self {
            c,
            eta,
            nu,
            l0,
            m,
            q,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// ⁹Be⁺ ion with a 2π × 1 MHz initial radial frequency.
    pub fn beryllium(c: f64, eta: f64, nu: f64) -> Result<Self> {
        let m = BERYLLIUM_9_ION_MASS;
        Self::new(
            c,
            eta,
            nu,
            ground_state_length(m, DEFAULT_OMEGA_R0),
            m,
            ELEMENTARY_CHARGE,
        )
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("c", self.c),
            ("eta", self.eta),
            ("l0", self.l0),
            ("m", self.m),
            ("q", self.q),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(
                    name,
                    format!("must be positive and finite, got {v}"),
                ));
            }
        }
        if !(self.nu > 0.0 && self.nu < std::f64::consts::SQRT_2) {
            return Err(Error::invalid(
                "nu",
                format!("must lie in (0, √2), got {}", self.nu),
            ));
        }
        Ok(())
    }

    pub fn with_eta(&self, eta: f64) -> Self {
        Self { eta, ..*self }
    }

    pub fn with_c(&self, c: f64) -> Self {
        Self { c, ..*self }
    }

    /// `ω_r(0) = ħ/(2 m l₀²)`.
    pub fn omega_r0(&self) -> f64 {
        HBAR / (2.0 * self.m * self.l0 * self.l0)
    }

    /// Physical duration `τ = η/ω_r(0)`, s.
    pub fn tau(&self) -> f64 {
        self.eta / self.omega_r0()
    }

    /// `ħ/(q l₀²)`, T.
    pub fn field_scale(&self) -> f64 {
        HBAR / (self.q * self.l0 * self.l0)
    }

    /// `ν²/(2 − ν²)`.
    pub fn axial_weight(&self) -> f64 {
        axial_weight(self.nu)
    }

    pub fn lambda(&self) -> SmoothRamp<f64> {
        SmoothRamp::penning_lambda(self.c).expect("validated compression ratio")
    }
}

fn axial_weight(nu: f64) -> f64 {
    nu * nu / (2.0 - nu * nu)
}

/// Radicand `1 − λ³λ̈/η² + ν²λ⁴/(2 − ν²)` of the field formula.
fn radicand(lambda: &SmoothRamp<f64>, eta: f64, k: f64, s: f64) -> f64 {
    let l = lambda.eval_unchecked(s, 0);
    let ldd = lambda.eval_unchecked(s, 2);
    let l3 = l * l * l;
    1.0 - l3 * ldd / (eta * eta) + k * l3 * l
}

fn bz_with(cfg: &PenningConfig, lambda: &SmoothRamp<f64>, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutsideUnitInterval { s });
    }
    let rad = radicand(lambda, cfg.eta, cfg.axial_weight(), s);
    if rad < 0.0 {
        return Err(Error::FieldNotRealizable {
            s,
            eta: cfg.eta,
            radicand: rad,
        });
    }
    let l = lambda.eval_unchecked(s, 0);
    Ok(cfg.field_scale() * rad.sqrt() / (l * l))
}

/// Axial field `⟨B_z(sτ)⟩`, T. Fails with [`Error::FieldNotRealizable`] when
/// the radicand is negative at `s`.
pub fn bz_profile(cfg: &PenningConfig, s: f64) -> Result<f64> {
    bz_with(cfg, &cfg.lambda(), s)
}

/// `⟨B_z(τ)⟩/⟨B_z(0)⟩ = √(c² + (1 − c²)ν²/2)`.
pub fn field_ratio(c: f64, nu: f64) -> f64 {
    (c * c + (1.0 - c * c) * nu * nu / 2.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Realizability {
    /// Smallest `η` keeping the field real on all of `[0, 1]`.
    pub min_eta: f64,
    /// Where the constraint binds.
    pub worst_s: f64,
}

/// Scans `max_s √(λ³λ̈/(1 + ν²λ⁴/(2 − ν²)))` on `grid + 1` points, refines the
/// best grid cell by golden-section search, and pads the result by a relative
/// `1e-12`. Only points with `λ³λ̈ > 0` constrain `η`.
pub fn realizability(c: f64, nu: f64, grid: usize) -> Result<Realizability> {
    if grid < 1000 {
        return Err(Error::invalid(
            "grid",
            format!("need at least 1000 points, got {grid}"),
        ));
    }
    if !(nu > 0.0 && nu < std::f64::consts::SQRT_2) {
        return Err(Error::invalid(
            "nu",
            format!("must lie in (0, √2), got {nu}"),
        ));
    }
    let lambda = SmoothRamp::penning_lambda(c)?;
    let k = axial_weight(nu);
    let h = |s: f64| {
        let l = lambda.eval_unchecked(s, 0);
        let l3 = l * l * l;
        l3 * lambda.eval_unchecked(s, 2) / (1.0 + k * l3 * l)
    };
    let (best_i, best_h) = (0..=grid).map(|i| (i, h(i as f64 / grid as f64))).fold(
        (0, f64::NEG_INFINITY),
        |acc, x| if x.1 > acc.1 { x } else { acc },
    );
    if !(best_h > 0.0) {
        return Ok(Realizability {
            min_eta: 0.0,
            worst_s: 0.0,
        });
    }
    let lo = best_i.saturating_sub(1) as f64 / grid as f64;
    let hi = (best_i + 1).min(grid) as f64 / grid as f64;
    let refined = minimize_scalar(|s| -h(s), lo, hi, 1e-12)?;
    let (s, peak) = if -refined.min_value > best_h {
        (refined.argmin, -refined.min_value)
    } else {
        (best_i as f64 / grid as f64, best_h)
    };
    Ok(Realizability {
        min_eta: peak.sqrt() * (1.0 + MIN_ETA_MARGIN),
        worst_s: s,
    })
}

/// Smallest realizable `η` for ratio `c` and axial parameter `ν`.
pub fn min_eta(c: f64, nu: f64, grid: usize) -> Result<f64> {
    realizability(c, nu, grid).map(|r| r.min_eta)
}

fn unit_integral<F: Fn(f64) -> f64>(f: F) -> Result<f64> {
    Ok(numerics::integrate(f, 0.0, 1.0, ZETA_REL_TOL)?.value)
}

/// `(η∫λ⁻⁴ ds, −(1/η)∫λ̈/λ ds)`: the parts of `ζ_d` growing and decaying with `η`.
pub fn zeta_d_parts(cfg: &PenningConfig) -> Result<(f64, f64)> {
    let lambda = cfg.lambda();
    let inv4 = unit_integral(|s| lambda.eval_unchecked(s, 0).powi(-4))?;
    let curv = unit_integral(|s| lambda.eval_unchecked(s, 2) / lambda.eval_unchecked(s, 0))?;
    Ok((cfg.eta * inv4, -curv / cfg.eta))
}

/// Dynamical entropy `ζ_d = ∫₀¹ [η/λ⁴ − λ̈/(λη)] ds`. Equals `η` for `c = 1`.
pub fn zeta_d(cfg: &PenningConfig) -> Result<f64> {
    let lambda = cfg.lambda();
    let eta = cfg.eta;
    unit_integral(|s| {
        let l = lambda.eval_unchecked(s, 0);
        let l2 = l * l;
        eta / (l2 * l2) - lambda.eval_unchecked(s, 2) / (l * eta)
    })
}

/// Static contribution `ην²/(2 − ν²)` from holding the field at all.
pub fn static_term(cfg: &PenningConfig) -> f64 {
    cfg.eta * cfg.axial_weight()
}

/// J/K per unit ζ: `χ (ħ/(q l₀²))² / ω_r(0) = 2 m ħ χ/(q² l₀²)`.
pub fn si_prefactor(cfg: &PenningConfig, p: &CircuitParams) -> f64 {
    let scale = cfg.field_scale();
    p.chi() * scale * scale / cfg.omega_r0()
}

/// Bures distance `arccos(2√c/(1 + c))` between the initial and final ground states.
pub fn bures_penning(c: f64) -> f64 {
    (2.0 * c.sqrt() / (1.0 + c)).min(1.0).acos()
}

/// Compression (`c > 1`) or expansion (`1/c`) ratio at Bures distance `bures`:
/// `√c = (1 + sin 𝓛)/cos 𝓛`.
pub fn ratio_for_bures(bures: f64, compression: bool) -> Result<f64> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&bures) {
        return Err(Error::invalid("bures", "must lie in [0, π/2)"));
    }
    let root = (1.0 + bures.sin()) / bures.cos();
    let c = root * root;
    Ok(if compression { c } else { 1.0 / c })
}

/// Lower bound on `ζ_d`:
/// expansion `max[0, c²η − |λ̈|ₘₐₓ/η]`, compression `max[0, η − |λ̈|ₘₐₓ√c/η]`,
/// with `|λ̈|ₘₐₓ = 84|α|/(5√5)`.
pub fn zeta_bounds(cfg: &PenningConfig) -> f64 {
    let (c, eta) = (cfg.c, cfg.eta);
    let curv = lambda_curvature_max(c);
    if c < 1.0 {
        (c * c * eta - curv / eta).max(0.0)
    } else if c > 1.0 {
        (eta - curv * c.sqrt() / eta).max(0.0)
    } else {
        eta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenningEntropy {
    pub zeta_d: f64,
    /// `ην²/(2 − ν²)`.
    pub static_term: f64,
    /// J/K per unit ζ.
    pub si_prefactor: f64,
    /// `si_prefactor · (zeta_d + static_term)`, J/K.
    pub sigma_total: f64,
    pub bures: f64,
    pub lower_bound: f64,
}

/// Full entropy budget of a realizable protocol.
pub fn entropy_report(cfg: &PenningConfig, p: &CircuitParams) -> Result<PenningEntropy> {
    cfg.validate()?;
    p.validate()?;
    let r = realizability(cfg.c, cfg.nu, REALIZABILITY_GRID)?;
    if cfg.eta < r.min_eta {
        let rad = radicand(&cfg.lambda(), cfg.eta, cfg.axial_weight(), r.worst_s);
        if rad < 0.0 {
            return Err(Error::FieldNotRealizable {
                s: r.worst_s,
                eta: cfg.eta,
                radicand: rad,
            });
        }
    }
    let zeta_d = zeta_d(cfg)?;
    let static_term = static_term(cfg);
    let si_prefactor = si_prefactor(cfg, p);
    Ok(PenningEntropy {
        zeta_d,
        static_term,
        si_prefactor,
        sigma_total: si_prefactor * (zeta_d + static_term),
        bures: bures_penning(cfg.c),
        lower_bound: zeta_bounds(cfg),
    })
}

/// `χ∫₀^τ ⟨B_z⟩² dt` by direct quadrature of the field profile, J/K.
pub fn direct_entropy(cfg: &PenningConfig, p: &CircuitParams) -> Result<f64> {
    let lambda = cfg.lambda();
    let tau = cfg.tau();
    // Validate realizability up front; the quadrature closure cannot propagate errors.
    for i in 0..=1000 {
        bz_with(cfg, &lambda, i as f64 / 1000.0)?;
    }
    circuit::protocol_entropy(
        |t| bz_with(cfg, &lambda, (t / tau).clamp(0.0, 1.0)).unwrap_or(f64::NAN),
        p,
        tau,
    )
}

/// Dimensionless radial frequency `w(s) = ω_r(sτ)·τ`, recomputed from the
/// field via `ω = qB/(2m)` and `ω_r² = ω² − ω_z²/2`.
pub fn scaled_radial_frequency_sq(cfg: &PenningConfig, s: f64) -> Result<f64> {
    let lambda = cfg.lambda();
    scaled_radial_frequency_sq_with(cfg, &lambda, s)
}

fn scaled_radial_frequency_sq_with(
    cfg: &PenningConfig,
    lambda: &SmoothRamp<f64>,
    s: f64,
) -> Result<f64> {
    let larmor = |b: f64| cfg.q * b / (2.0 * cfg.m);
    let omega = larmor(bz_with(cfg, lambda, s)?);
    let omega_0 = larmor(bz_with(cfg, lambda, 0.0)?);
    let omega_z = cfg.nu * omega_0;
    let tau = cfg.tau();
    Ok((omega * omega - 0.5 * omega_z * omega_z) * tau * tau)
}

/// Ermakov residual `λ̈ + w²λ − η²/λ³`, zero whenever the field inversion is consistent.
pub fn ermakov_residual(cfg: &PenningConfig, s: f64) -> Result<f64> {
    let lambda = cfg.lambda();
    let w2 = scaled_radial_frequency_sq_with(cfg, &lambda, s)?;
    let l = lambda.eval_unchecked(s, 0);
    Ok(lambda.eval_unchecked(s, 2) + w2 * l - cfg.eta * cfg.eta / (l * l * l))
}

/// `α = 1 − 1/√c` of the configuration's ansatz.
pub fn alpha(cfg: &PenningConfig) -> f64 {
    lambda_alpha(cfg.c)
}
