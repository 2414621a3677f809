//! Irreversible entropy produced by the classical RL coil circuits that
//! generate time-dependent control fields for quantum systems.
//!
//! * [`circuit`]: RL Langevin model, moment dynamics and entropy rate.
//! * [`protocols`]: polynomial control ramps with exact derivatives.
//! * [`landau_zener`]: counterdiabatic Landau–Zener driving.
//! * [`penning`]: invariant-based compression/expansion of a Penning trap.
//! * [`numerics`]: quadrature, RK4, Euler–Maruyama ensembles, golden-section search.
//!
//! The numeric kernels and ramp polynomials are generic over the scalar type;
//! the aliases below fix the types used by the physics models.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod constants;
pub mod error;
pub mod landau_zener;
pub mod numerics;
pub mod penning;
pub mod protocols;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// Ramp used by the physics models.
pub type Ramp = protocols::SmoothRamp<f64>;
/// Ramp with exact rational coefficients, for closed-form polynomial identities.
pub type ExactRamp = protocols::SmoothRamp<num_rational::Ratio<i64>>;
pub type QuadratureResult = numerics::QuadratureResult<f64>;
pub type OdeState = numerics::OdeState<f64>;
pub type EnsembleStats = numerics::EnsembleStats<f64>;
pub type Minimum = numerics::Minimum<f64>;

pub use circuit::{CircuitParams, EnsembleTrace, MomentState};
pub use landau_zener::{EntropyBreakdown, LzConfig, QubitState};
pub use penning::{PenningConfig, PenningEntropy};
