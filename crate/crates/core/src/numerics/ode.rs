//! Fixed-step classical Runge–Kutta (RK4) integration.
//!
//! Complex-valued systems are stored as interleaved `(re, im)` pairs in the
//! real state vector.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct OdeState<T> {
    pub t: T,
    pub y: Vec<T>,
}

impl<T: Real> OdeState<T> {
    pub fn new(t: T, y: Vec<T>) -> Self {
        Self { t, y }
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.y.iter().all(|v| v.is_finite())
    }
}

/// Integrates `dy/dt = rhs(t, y)` from `y0.t` to `t1` in `steps` equal RK4 steps.
///
/// `rhs(t, y, dy)` writes the derivative into `dy`. Grid times are computed as
/// `t0 + (t1 − t0)·k/steps` so the final state lands exactly on `t1`.
pub fn ode_evolve<T, F>(rhs: F, y0: &OdeState<T>, t1: T, steps: usize) -> Result<OdeState<T>>
where
    T: Real,
    F: FnMut(T, &[T], &mut [T]),
{
    let mut out = y0.clone();
    ode_evolve_with(rhs, &mut out, t1, steps, |_| {})?;
    Ok(out)
}

/// Same as [`ode_evolve`] but evolves `state` in place and calls `observe`
/// after every completed step.
pub fn ode_evolve_with<T, F, O>(
    mut rhs: F,
    state: &mut OdeState<T>,
    t1: T,
    steps: usize,
    mut observe: O,
) -> Result<()>
where
    T: Real,
    F: FnMut(T, &[T], &mut [T]),
    O: FnMut(&OdeState<T>),
{
    if steps == 0 {
        return Err(Error::invalid("steps", "must be at least 1"));
    }
    if !state.is_finite() {
        return Err(Error::NonFinite {
            t: state.t.to_f64().unwrap_or(f64::NAN),
        });
    }
    let n = state.y.len();
    let t0 = state.t;
    let span = t1 - t0;
    let h = span / T::from_count(steps);
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let sixth = T::one() / T::lit(6.0);

    let mut k1 = vec![T::zero(); n];
    let mut k2 = vec![T::zero(); n];
    let mut k3 = vec![T::zero(); n];
    let mut k4 = vec![T::zero(); n];
    let mut tmp = vec![T::zero(); n];

    for step in 0..steps {
        let t = t0 + span * T::from_count(step) / T::from_count(steps);
        let y = &mut state.y;
        rhs(t, y, &mut k1);
        for i in 0..n {
            tmp[i] = y[i] + h * half * k1[i];
        }
        rhs(t + h * half, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + h * half * k2[i];
        }
        rhs(t + h * half, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + h * k3[i];
        }
        let t_next = t0 + span * T::from_count(step + 1) / T::from_count(steps);
        rhs(t_next, &tmp, &mut k4);
        for i in 0..n {
            y[i] = y[i] + h * sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
        }
        state.t = t_next;
        if !state.is_finite() {
            return Err(Error::NonFinite {
                t: t_next.to_f64().unwrap_or(f64::NAN),
            });
        }
        observe(state);
    }
    Ok(())
}
