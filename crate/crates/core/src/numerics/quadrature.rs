//! Adaptive Simpson quadrature with a Richardson-extrapolated error estimate.
//!
//! Each panel is split in two; when the two-panel Simpson sum `S2` and the
//! one-panel sum `S1` agree to `15·eps` the panel is accepted with the
//! extrapolated value `S2 + (S2 − S1)/15` (exact for quintics). The panel
//! tolerance halves on every split so the accepted error budget sums to the
//! global target.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Absolute floor applied to the global error target.
pub const ABS_FLOOR: f64 = 1e-14;

const DEFAULT_MAX_DEPTH: u32 = 48;
const DEFAULT_MAX_EVALUATIONS: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult<T> {
    pub value: T,
    /// Absolute error estimate, always non-negative.
    pub error_estimate: T,
    pub evaluations: usize,
}

/// Tunable adaptive Simpson integrator.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveSimpson<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_depth: u32,
    pub max_evaluations: usize,
}

impl<T: Real> AdaptiveSimpson<T> {
    pub fn new(rel_tol: T) -> Self {
        Self {
            rel_tol,
            abs_tol: T::lit(ABS_FLOOR).max(T::epsilon() * T::lit(64.0)),
            max_depth: DEFAULT_MAX_DEPTH,
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: T) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_depth(mut self, max_depth: u32) -> Self {
        self.max_depth = max_depth;
        self
    }

    pub fn integrate<F>(&self, f: F, a: T, b: T) -> Result<QuadratureResult<T>>
    where
        F: Fn(T) -> T,
    {
        if !(a <= b) {
            return Err(Error::invalid("bounds", "require a <= b"));
        }
        if !(self.rel_tol > T::zero()) {
            return Err(Error::invalid("rel_tol", "must be positive"));
        }
        let mut state = Walk {
            f: &f,
            evaluations: 0,
            max_evaluations: self.max_evaluations,
            converged: true,
            error: T::zero(),
        };
        if a == b {
            return Ok(QuadratureResult {
                value: T::zero(),
                error_estimate: T::zero(),
                evaluations: 1,
            });
        }

        // Coarse pass over 8 panels sets the magnitude the relative target refers to.
        const PANELS: usize = 8;
        let width = (b - a) / T::from_count(PANELS);
        let mut panels = Vec::with_capacity(PANELS);
        let mut fl = state.eval(a);
        let mut scale = T::zero();
        for i in 0..PANELS {
            let l = a + width * T::from_count(i);
            let r = if i + 1 == PANELS {
                b
            } else {
                a + width * T::from_count(i + 1)
            };
            let m = (l + r) * T::lit(0.5);
            let fm = state.eval(m);
            let fr = state.eval(r);
            let whole = simpson(l, r, fl, fm, fr);
            scale = scale + simpson(l, r, fl.abs(), fm.abs(), fr.abs());
            panels.push(Panel {
                l,
                r,
                fl,
                fm,
                fr,
                whole,
            });
            fl = fr;
        }
        if !scale.is_finite() {
            return Err(Error::NonFinite {
                t: a.to_f64().unwrap_or(f64::NAN),
            });
        }

        let target = (self.rel_tol * scale).max(self.abs_tol);
        let panel_eps = target / T::from_count(PANELS);
        let mut value = T::zero();
        for p in panels {
            value = value + state.refine(p, panel_eps, self.max_depth);
        }

        if !value.is_finite() {
            return Err(Error::NonFinite {
                t: a.to_f64().unwrap_or(f64::NAN),
            });
        }
        if !state.converged {
            return Err(Error::QuadratureNonConvergence {
                partial: value.to_f64().unwrap_or(f64::NAN),
                error_estimate: state.error.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(QuadratureResult {
            value,
            error_estimate: state.error,
            evaluations: state.evaluations,
        })
    }
}

/// `∫_a^b f` to relative tolerance `rel_tol` (absolute floor [`ABS_FLOOR`]).
pub fn integrate<T, F>(f: F, a: T, b: T, rel_tol: T) -> Result<QuadratureResult<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    AdaptiveSimpson::new(rel_tol).integrate(f, a, b)
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    l: T,
    r: T,
    fl: T,
    fm: T,
    fr: T,
    whole: T,
}

struct Walk<'f, T, F> {
    f: &'f F,
    evaluations: usize,
    max_evaluations: usize,
    converged: bool,
    error: T,
}

impl<T: Real, F: Fn(T) -> T> Walk<'_, T, F> {
    fn eval(&mut self, x: T) -> T {
        self.evaluations += 1;
        (self.f)(x)
    }

    fn refine(&mut self, p: Panel<T>, eps: T, depth: u32) -> T {
        let half = T::lit(0.5);
        let m = p.l + (p.r - p.l) * half;
        let lm = (p.l + m) * half;
        let rm = (m + p.r) * half;
        let flm = self.eval(lm);
        let frm = self.eval(rm);
        let left = simpson(p.l, m, p.fl, flm, p.fm);
        let right = simpson(m, p.r, p.fm, frm, p.fr);
        let split = left + right;
        let delta = split - p.whole;
        let fifteen = T::lit(15.0);

        let exhausted =
            depth == 0 || self.evaluations >= self.max_evaluations || !(lm > p.l && rm < p.r);
        if delta.abs() <= fifteen * eps || exhausted || !delta.is_finite() {
            if exhausted && delta.abs() > fifteen * eps {
                self.converged = false;
            }
            self.error = self.error + (delta / fifteen).abs();
            return split + delta / fifteen;
        }
        let sub = eps * half;
        let lp = Panel {
            l: p.l,
            r: m,
            fl: p.fl,
            fm: flm,
            fr: p.fm,
            whole: left,
        };
        let rp = Panel {
            l: m,
            r: p.r,
            fl: p.fm,
            fm: frm,
            fr: p.fr,
            whole: right,
        };
        self.refine(lp, sub, depth - 1) + self.refine(rp, sub, depth - 1)
    }
}

#[inline]
fn simpson<T: Real>(l: T, r: T, fl: T, fm: T, fr: T) -> T {
    (r - l) / T::lit(6.0) * (fl + T::lit(4.0) * fm + fr)
}
