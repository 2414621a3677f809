//! Deterministic numeric kernels: quadrature, RK4, Euler–Maruyama ensembles,
//! golden-section search and finite-difference checks.

pub mod minimize;
pub mod ode;
pub mod quadrature;
pub mod rng;
pub mod sde;

pub use minimize::{minimize_scalar, Minimum};
pub use ode::{ode_evolve, ode_evolve_with, OdeState};
pub use quadrature::{integrate, AdaptiveSimpson, QuadratureResult};
pub use rng::{trajectory_rng, TrajectoryRng};
pub use sde::{sde_ensemble, EnsembleSample, EnsembleStats, SdeSettings};

use crate::scalar::Real;

/// Second-order central difference of `f` at `x` with step `h`.
pub fn central_difference<T: Real, F: Fn(T) -> T>(f: F, x: T, h: T) -> T {
    (f(x + h) - f(x - h)) / (h + h)
}

/// `n` log-spaced points from `lo` to `hi` inclusive, endpoints exact.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            let mut v: Vec<f64> = (0..n)
                .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                .collect();
            v[0] = lo;
            v[n - 1] = hi;
            v
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_endpoints() {
        let l = log_space(0.05, 50.0, 200);
        assert_eq!(l.len(), 200);
        assert_eq!((l[0], l[199]), (0.05, 50.0));
        assert_eq!(lin_space(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn central_difference_of_cubic() {
        let d = central_difference(|x: f64| x.powi(3), 2.0, 1e-5);
        assert!((d - 12.0).abs() < 1e-8);
    }
}
