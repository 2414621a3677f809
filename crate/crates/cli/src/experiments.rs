use rayon::prelude::*;
use thiserror::Error;

use qcost::circuit::{
    self, CircuitParams, CircuitSimulation, CurrentProtocol, InitialCondition, MomentState,
    RampCurrent,
};
use qcost::landau_zener::{self as lz, LzConfig};
use qcost::numerics::{lin_space, log_space};
use qcost::penning::{self, PenningConfig, REALIZABILITY_GRID};
use qcost::Ramp;

use crate::config::{ConfigError, Experiment, RunConfig};
use crate::output::{Plot, Table};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("invalid setting: {0}")]
    Invalid(qcost::Error),

    #[error("field not realizable at eta = {eta}, s = {s}")]
    NotRealizable { eta: f64, s: f64 },

    #[error("numeric failure: {0}")]
    Numeric(qcost::Error),

    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Invalid(_) | RunError::Io { .. } => 2,
            RunError::NotRealizable { .. } => 3,
            RunError::Numeric(_) => 4,
        }
    }
}

impl From<qcost::Error> for RunError {
    fn from(e: qcost::Error) -> Self {
        use qcost::Error as E;
        match e {
            E::FieldNotRealizable { s, eta, .. } => RunError::NotRealizable { eta, s },
            E::InvalidParameter { .. }
            | E::OutsideUnitInterval { .. }
            | E::UnsupportedOrder { .. } => RunError::Invalid(e),
            _ => RunError::Numeric(e),
        }
    }
}

/// Evaluates `row` at every grid point in parallel, keeping grid order and
/// reporting the first failure in that order.
fn sweep<F>(grid: &[f64], row: F) -> Result<Vec<Vec<f64>>, RunError>
where
    F: Fn(f64) -> Result<Vec<f64>, RunError> + Sync,
{
    grid.par_iter()
        .map(|&x| row(x))
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

pub fn run_experiment(cfg: &RunConfig) -> Result<Table, RunError> {
    match cfg.experiment {
        Experiment::LzSweepTau => lz_sweep_tau(cfg),
        Experiment::LzSweepBures => lz_sweep_bures(cfg),
        Experiment::PenningSweepEta => penning_sweep_eta(cfg),
        Experiment::PenningSweepBures => penning_sweep_bures(cfg),
        Experiment::CircuitValidate => circuit_validate(cfg),
    }
}

fn lz_sweep_tau(cfg: &RunConfig) -> Result<Table, RunError> {
    let base = LzConfig::quintic(cfg.num("delta"), cfg.num("g0"), 1.0)?;
    let taus = log_space(cfg.num("tau_lo"), cfg.num("tau_hi"), cfg.cnt("points"));
    let rows = sweep(&taus, |tau| {
        let c = base.with_tau(tau);
        let (z, cd) = (lz::zeta_z(&c)?, lz::zeta_cd(&c)?);
        Ok(vec![tau, z, cd, z + cd])
    })?;
    Ok(Table {
        columns: vec!["tau", "zeta_z", "zeta_cd", "zeta_total"],
        rows,
        plot: Plot {
            title: "Landau-Zener coil entropy versus duration",
            x: 0,
            ys: vec![1, 2, 3],
            group_by: None,
            log_x: true,
            log_y: true,
        },
    })
}

fn lz_sweep_bures(cfg: &RunConfig) -> Result<Table, RunError> {
    let (delta, tau) = (cfg.num("delta"), cfg.num("tau"));
    let grid = lin_space(cfg.num("bures_lo"), cfg.num("bures_hi"), cfg.cnt("points"));
    let rows = sweep(&grid, |bures| {
        let c = LzConfig::quintic_at_bures(bures, delta, tau)?;
        let opt = lz::optimal_time(&c)?;
        Ok(vec![
            bures,
            opt.zeta_min,
            opt.tau_min,
            lz::zeta_cd(&c)?,
            lz::cd_lower_bound(&c),
        ])
    })?;
    Ok(Table {
        columns: vec!["bures", "zeta_min", "tau_min", "zeta_cd", "bound"],
        rows,
        plot: Plot {
            title: "Optimal Landau-Zener entropy versus Bures distance",
            x: 0,
            ys: vec![1, 2, 3, 4],
            group_by: None,
            log_x: false,
            log_y: false,
        },
    })
}

fn penning_sweep_eta(cfg: &RunConfig) -> Result<Table, RunError> {
    let (c, nu) = (cfg.num("c"), cfg.num("nu"));
    let ratios = if c == 1.0 { vec![c] } else { vec![c, 1.0 / c] };
    let mut rows = Vec::new();
    for ratio in ratios {
        let base = PenningConfig::beryllium(ratio, 1.0, nu)?;
        let limit = penning::realizability(ratio, nu, REALIZABILITY_GRID)?;
        let eta_lo = match cfg.number("eta_min") {
            Some(eta) if eta < limit.min_eta => {
                // Surface the failure where the constraint binds.
                penning::bz_profile(&base.with_eta(eta), limit.worst_s)?;
                eta
            }
            Some(eta) => eta,
            None => limit.min_eta.max(f64::MIN_POSITIVE),
        };
        let eta_hi = cfg.num("eta_max");
        if eta_lo >= eta_hi {
            return Err(ConfigError::Inconsistent(format!(
                "eta_max ({eta_hi}) must exceed the smallest realizable eta ({eta_lo}) for c = {ratio}"
            ))
            .into());
        }
        rows.extend(sweep(
            &lin_space(eta_lo, eta_hi, cfg.cnt("points")),
            |eta| {
                let p = base.with_eta(eta);
                Ok(vec![
                    ratio,
                    eta,
                    penning::zeta_d(&p)?,
                    penning::zeta_bounds(&p),
                    penning::static_term(&p),
                ])
            },
        )?);
    }
    Ok(Table {
        columns: vec!["ratio", "eta", "zeta_d", "lower_bound", "static_term"],
        rows,
        plot: Plot {
            title: "Penning dynamical entropy versus rescaled duration",
            x: 1,
            ys: vec![2, 3],
            group_by: Some(0),
            log_x: false,
            log_y: false,
        },
    })
}

fn penning_sweep_bures(cfg: &RunConfig) -> Result<Table, RunError> {
    let (eta, nu) = (cfg.num("eta"), cfg.num("nu"));
    let grid = lin_space(cfg.num("bures_lo"), cfg.num("bures_hi"), cfg.cnt("points"));
    let rows = sweep(&grid, |bures| {
        let c = penning::ratio_for_bures(bures, true)?;
        let compression = penning::zeta_d(&PenningConfig::beryllium(c, eta, nu)?)?;
        let expansion = penning::zeta_d(&PenningConfig::beryllium(1.0 / c, eta, nu)?)?;
        Ok(vec![bures, c, compression, expansion])
    })?;
    Ok(Table {
        columns: vec!["bures", "c", "zeta_d_compression", "zeta_d_expansion"],
        rows,
        plot: Plot {
            title: "Penning compression and expansion versus Bures distance",
            x: 0,
            ys: vec![2, 3],
            group_by: None,
            log_x: false,
            log_y: false,
        },
    })
}

/// Langevin ensemble driven by the voltage that makes the mean current follow
/// a quintic ramp from `−A` to `+A` (`A` in units of the stationary current
/// spread), compared with the moment equations.
fn circuit_validate(cfg: &RunConfig) -> Result<Table, RunError> {
    let p = CircuitParams::new(
        cfg.num("circuit.resistance"),
        cfg.num("circuit.inductance"),
        cfg.num("circuit.temperature"),
        cfg.num("circuit.coil_constant"),
    )?;
    let tau = cfg.num("duration") * p.relaxation_time();
    let amplitude = cfg.num("amplitude") * p.steady_variance().sqrt();
    let target = RampCurrent::new(Ramp::lz_quintic(), amplitude, tau)?;
    let initial = InitialCondition::stationary_for(&target);
    let mut sim = CircuitSimulation::new(&p, tau, cfg.cnt("trajectories"), cfg.seed, initial);
    sim.record_every = cfg.cnt("record_every");
    if let Some(dt) = cfg.number("dt") {
        sim.dt = dt;
    }
    let trace = circuit::simulate_circuit(|t| circuit::reverse_voltage(&target, &p, t), &p, &sim)?;
    if trace.stability_warning {
        eprintln!(
            "warning: dt = {} exceeds the relaxation time {}",
            sim.dt,
            p.relaxation_time()
        );
    }

    let start = MomentState::steady(&p, target.current(0.0), 0.0);
    let mut rows = Vec::with_capacity(trace.samples.len());
    for (i, s) in trace.samples.iter().enumerate() {
        // The variance equation does not depend on the drive, so one exact step suffices.
        let predicted = if s.t > 0.0 {
            circuit::moment_step(&start, 0.0, &p, s.t)?.variance
        } else {
            start.variance
        };
        let moments = MomentState {
            mean_current: target.current(s.t),
            variance: predicted,
            t: s.t,
        };
        rows.push(vec![
            s.t,
            moments.mean_current,
            s.empirical_mean,
            trace.mean_standard_error(i),
            s.empirical_variance,
            predicted,
            s.entropy_rate,
            circuit::entropy_rate(&moments, &p)?,
        ]);
    }
    Ok(Table {
        columns: vec![
            "t",
            "target_mean",
            "empirical_mean",
            "mean_standard_error",
            "empirical_variance",
            "predicted_variance",
            "empirical_entropy_rate",
            "predicted_entropy_rate",
        ],
        rows,
        plot: Plot {
            title: "Langevin ensemble versus moment equations",
            x: 0,
            ys: vec![1, 2],
            group_by: None,
            log_x: false,
            log_y: false,
        },
    })
}
