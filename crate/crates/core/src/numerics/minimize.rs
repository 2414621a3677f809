//! Golden-section search for the minimum of a unimodal scalar function.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum<T> {
    pub argmin: T,
    pub min_value: T,
    pub evaluations: usize,
    /// False when the search collapsed onto an end of `[lo, hi]` or ended
    /// above an endpoint value, i.e. the function was not bracketed.
    pub bracketed: bool,
}

const MAX_ITER: usize = 500;

/// Shrinks `[lo, hi]` by the inverse golden ratio until it is narrower than `tol`.
pub fn minimize_scalar<T, F>(f: F, lo: T, hi: T, tol: T) -> Result<Minimum<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if !(lo < hi) {
        return Err(Error::invalid("bounds", "require lo < hi"));
    }
    if !(tol > T::zero()) {
        return Err(Error::invalid("tol", "must be positive"));
    }
    // 1/φ
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let (f_lo, f_hi) = (f(lo), f(hi));
    let (mut a, mut b) = (lo, hi);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let (mut fc, mut fd) = (f(c), f(d));
    let mut evaluations = 4;

    for _ in 0..MAX_ITER {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
        evaluations += 1;
    }

    let (argmin, min_value) = if fc < fd { (c, fc) } else { (d, fd) };
    let touches_edge = (argmin - lo).abs() <= tol || (hi - argmin).abs() <= tol;
    let bracketed = !touches_edge && min_value <= f_lo && min_value <= f_hi;
    Ok(Minimum {
        argmin,
        min_value,
        evaluations,
        bracketed,
    })
}
