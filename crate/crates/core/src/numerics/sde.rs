//! Euler–Maruyama ensembles for scalar SDEs `dy = drift(t, y) dt + σ dW`.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use super::rng::{trajectory_rng, TrajectoryRng};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Trajectories per reduction block. Fixed so the floating-point reduction
/// order never depends on the thread count.
const BLOCK: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdeSettings<T> {
    pub t0: T,
    pub t1: T,
    /// Requested step; the actual step is `(t1 − t0)/ceil((t1 − t0)/dt)`.
    pub dt: T,
    pub n_traj: usize,
    pub seed: u64,
    /// Record statistics every this many steps (the final step is always recorded).
    pub record_every: usize,
    /// Explicit-scheme stability limit for `dt`; exceeding it sets a warning.
    pub stability_limit: Option<T>,
}

impl<T: Real> SdeSettings<T> {
    pub fn new(t0: T, t1: T, dt: T, n_traj: usize, seed: u64) -> Self {
        Self {
            t0,
            t1,
            dt,
            n_traj,
            seed,
            record_every: 1,
            stability_limit: None,
        }
    }

    pub fn record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    pub fn stability_limit(mut self, limit: T) -> Self {
        self.stability_limit = Some(limit);
        self
    }

    pub fn steps(&self) -> usize {
        let n = ((self.t1 - self.t0) / self.dt).ceil();
        n.to_usize().unwrap_or(0).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSample<T> {
    pub t: T,
    pub mean: T,
    /// Unbiased (n − 1) sample variance.
    pub variance: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats<T> {
    pub samples: Vec<EnsembleSample<T>>,
    pub n_traj: usize,
    pub seed: u64,
    pub dt: T,
    pub stability_warning: bool,
}

/// Running (count, mean, M2) accumulator per recorded time.
#[derive(Debug, Clone, Copy)]
struct Moments<T> {
    n: usize,
    mean: T,
    m2: T,
}

impl<T: Real> Moments<T> {
    fn zero() -> Self {
        Self {
            n: 0,
            mean: T::zero(),
            m2: T::zero(),
        }
    }

    fn push(&mut self, x: T) {
        self.n += 1;
        let d = x - self.mean;
        self.mean = self.mean + d / T::from_count(self.n);
        self.m2 = self.m2 + d * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let (na, nb, nn) = (
            T::from_count(self.n),
            T::from_count(other.n),
            T::from_count(n),
        );
        let d = other.mean - self.mean;
        Self {
            n,
            mean: self.mean + d * nb / nn,
            m2: self.m2 + other.m2 + d * d * na * nb / nn,
        }
    }
}

/// Simulates `n_traj` independent Euler–Maruyama paths and returns the
/// empirical mean and unbiased variance at the recorded times.
///
/// Trajectory `i` draws its initial value and increments from
/// [`trajectory_rng`]`(seed, i)`, and per-block statistics are merged in block
/// order, so results are bitwise identical for any thread count.
pub fn sde_ensemble<T, D, S>(
    drift: D,
    noise_amp: T,
    y0: S,
    settings: &SdeSettings<T>,
) -> Result<EnsembleStats<T>>
where
    T: Real,
    D: Fn(T, T) -> T + Sync,
    S: Fn(&mut TrajectoryRng) -> T + Sync,
    StandardNormal: Distribution<T>,
{
    let SdeSettings {
        t0,
        t1,
        dt,
        n_traj,
        seed,
        record_every,
        stability_limit,
    } = *settings;
    if !(dt > T::zero()) {
        return Err(Error::invalid("dt", "must be positive"));
    }
    if !(t1 > t0) {
        return Err(Error::invalid("t1", "must exceed t0"));
    }
    if n_traj < 2 {
        return Err(Error::invalid("n_traj", "need at least two trajectories"));
    }
    if !(noise_amp >= T::zero()) {
        return Err(Error::invalid("noise_amp", "must be non-negative"));
    }
    if record_every == 0 {
        return Err(Error::invalid("record_every", "must be at least 1"));
    }

    let steps = settings.steps();
    let span = t1 - t0;
    let h = span / T::from_count(steps);
    let sqrt_h = h.sqrt();
    let time_at = |k: usize| t0 + span * T::from_count(k) / T::from_count(steps);
    let recorded: Vec<usize> = (0..=steps)
        .filter(|&k| k % record_every == 0 || k == steps)
        .collect();

    let n_blocks = n_traj.div_ceil(BLOCK);
    let blocks: Vec<Result<Vec<Moments<T>>>> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let mut acc = vec![Moments::zero(); recorded.len()];
            for i in b * BLOCK..((b + 1) * BLOCK).min(n_traj) {
                let mut rng = trajectory_rng(seed, i as u64);
                let mut y = y0(&mut rng);
                let mut slot = 0;
                if recorded[0] == 0 {
                    acc[0].push(y);
                    slot = 1;
                }
                for k in 0..steps {
                    let t = time_at(k);
                    let z: T = StandardNormal.sample(&mut rng);
                    y = y + drift(t, y) * h + noise_amp * sqrt_h * z;
                    if !y.is_finite() {
                        return Err(Error::NonFinite {
                            t: time_at(k + 1).to_f64().unwrap_or(f64::NAN),
                        });
                    }
                    if slot < recorded.len() && recorded[slot] == k + 1 {
                        acc[slot].push(y);
                        slot += 1;
                    }
                }
            }
            Ok(acc)
        })
        .collect();

    let mut total = vec![Moments::zero(); recorded.len()];
    for block in blocks {
        for (t, m) in total.iter_mut().zip(block?) {
            *t = t.merge(m);
        }
    }

    let denom = T::from_count(n_traj - 1);
    let samples = recorded
        .iter()
        .zip(total)
        .map(|(&k, m)| EnsembleSample {
            t: time_at(k),
            mean: m.mean,
            variance: (m.m2 / denom).max(T::zero()),
        })
        .collect();

    Ok(EnsembleStats {
        samples,
        n_traj,
        seed,
        dt: h,
        stability_warning: stability_limit.is_some_and(|lim| dt > lim),
    })
}
