//! Dimensionless control ramps on `s ∈ [0, 1]`.
//!
//! A [`SmoothRamp`] stores exact monomial coefficients and evaluates its
//! derivatives by coefficient shifting, so second derivatives feeding the
//! counterdiabatic field and the trap-field inversion carry no
//! finite-difference error. The coefficient type is generic: `f64` for the
//! physics, `Ratio<i64>` for exact polynomial identities.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num, ToPrimitive};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Highest derivative order served by [`RampProfile::eval`].
pub const MAX_ORDER: usize = 3;

/// A dimensionless profile on the unit interval with derivatives up to third order.
pub trait RampProfile: Debug + Send + Sync {
    /// `d^order r / ds^order` at `s`.
    fn eval(&self, s: f64, order: usize) -> Result<f64>;

    fn label(&self) -> &str;
}

/// Polynomial ramp `Σ cₖ sᵏ` with cached derivative coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothRamp<T> {
    /// `derivs[n]` holds the coefficients of the n-th derivative, ascending powers.
    derivs: [Vec<T>; MAX_ORDER + 1],
    label: String,
}

fn shift<T: Clone + Num + FromPrimitive>(c: &[T]) -> Vec<T> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, ck)| ck.clone() * T::from_usize(k).expect("small integer"))
        .collect()
}

fn horner<T: Clone + Num>(c: &[T], s: &T) -> T {
    c.iter()
        .rev()
        .fold(T::zero(), |acc, ck| acc * s.clone() + ck.clone())
}

impl<T> SmoothRamp<T>
where
    T: Clone + Num + FromPrimitive + ToPrimitive + PartialOrd,
{
    /// Builds a ramp from ascending monomial coefficients.
    pub fn polynomial(coefficients: Vec<T>, label: impl Into<String>) -> Self {
        let d1 = shift(&coefficients);
        let d2 = shift(&d1);
        let d3 = shift(&d2);
        Self {
            derivs: [coefficients, d1, d2, d3],
            label: label.into(),
        }
    }

    /// Normalized Landau–Zener sweep `20s³ − 30s⁴ + 12s⁵ − 1`, from −1 to +1
    /// with vanishing first and second derivatives at both ends.
    pub fn lz_quintic() -> Self {
        let c = |v: i32| T::from_i32(v).expect("small integer");
        Self::polynomial(vec![c(-1), c(0), c(0), c(20), c(-30), c(12)], "lz-quintic")
    }

    /// Quintic sweep plus `s³(1 − s)³ Σ wₖ sᵏ`: any weights keep the endpoint
    /// values and the vanishing endpoint slope and curvature.
    pub fn lz_quintic_perturbed(weights: &[T]) -> Self {
        let base = Self::lz_quintic();
        let c = |v: i32| T::from_i32(v).expect("small integer");
        // s³(1 − s)³ = s³ − 3s⁴ + 3s⁵ − s⁶
        let bump = [c(0), c(0), c(0), c(1), c(-3), c(3), c(-1)];
        let mut coeffs = base.coefficients().to_vec();
        let degree = bump.len() + weights.len();
        coeffs.resize(degree, T::zero());
        for (j, w) in weights.iter().enumerate() {
            for (k, b) in bump.iter().enumerate() {
                coeffs[j + k] = coeffs[j + k].clone() + w.clone() * b.clone();
            }
        }
        Self::polynomial(coeffs, "lz-quintic-perturbed")
    }

    pub fn coefficients(&self) -> &[T] {
        &self.derivs[0]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Exact derivative of the given order at `s`, for `s ∈ [0, 1]` and order ≤ 3.
    pub fn eval(&self, s: T, order: usize) -> Result<T> {
        if order > MAX_ORDER {
            return Err(Error::UnsupportedOrder { order });
        }
        if s < T::zero() || s > T::one() {
            return Err(Error::OutsideUnitInterval {
                s: s.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(horner(&self.derivs[order], &s))
    }

    /// Evaluation without the domain check, for callers that already clamp `s`.
    pub fn eval_unchecked(&self, s: T, order: usize) -> T {
        horner(&self.derivs[order.min(MAX_ORDER)], &s)
    }

    /// Coefficient-wise polynomial product.
    pub fn product(&self, other: &Self) -> Self {
        let (a, b) = (self.coefficients(), other.coefficients());
        if a.is_empty() || b.is_empty() {
            return Self::polynomial(Vec::new(), "product");
        }
        let mut c = vec![T::zero(); a.len() + b.len() - 1];
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                c[i + j] = c[i + j].clone() + ai.clone() * bj.clone();
            }
        }
        Self::polynomial(c, format!("{}*{}", self.label, other.label))
    }

    /// `∫₀¹ r(s) ds` by the power rule, exact in the coefficient field.
    pub fn integral_unit(&self) -> T {
        self.coefficients()
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (k, ck)| {
                acc + ck.clone() / T::from_usize(k + 1).expect("small integer")
            })
    }
}

impl<T: Real> SmoothRamp<T> {
    /// Degree-7 length-scale ansatz `λ(s) = 1 + α(20s⁷ − 70s⁶ + 84s⁵ − 35s⁴)`
    /// with `α = 1 − 1/√c`: `λ(0) = 1`, `λ(1) = 1/√c`, and the first three
    /// derivatives vanish at both ends.
    pub fn penning_lambda(c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::invalid(
                "c",
                format!("compression ratio must be positive, got {c}"),
            ));
        }
        let alpha = lambda_alpha(c);
        let z = T::zero();
        let k = |v: f64| alpha * T::lit(v);
        Ok(Self::polynomial(
            vec![T::one(), z, z, z, k(-35.0), k(84.0), k(-70.0), k(20.0)],
            "penning-lambda",
        ))
    }
}

/// `α = 1 − 1/√c` of the length-scale ansatz.
pub fn lambda_alpha<T: Real>(c: T) -> T {
    T::one() - T::one() / c.sqrt()
}

/// `max_s |λ̈(s)| = 84|α|/(5√5)`, attained at `s = (5 ∓ √5)/10`.
pub fn lambda_curvature_max<T: Real>(c: T) -> T {
    T::lit(84.0) * lambda_alpha(c).abs() / (T::lit(5.0) * T::lit(5.0).sqrt())
}

impl RampProfile for SmoothRamp<f64> {
    fn eval(&self, s: f64, order: usize) -> Result<f64> {
        SmoothRamp::eval(self, s, order)
    }

    fn label(&self) -> &str {
        &self.label
    }
}
