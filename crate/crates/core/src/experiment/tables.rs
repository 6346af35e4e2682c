//! One row per cell of the time-evolution and supertransformation tables.

use super::config::ExperimentConfig;
use super::report::{Row, Tolerance};
use super::Task;
use crate::algebra::GaugeAngle;
use crate::dicke::{collective_ops, DickeOperators};
use crate::error::{Error, Result};
use crate::limits::convergence::{extrapolate, loglog_slope};
use crate::limits::scales::{
    bs_axis_persistence, bs_eta_prime, bs_free_evolution, ceiling_generator_scale, ceiling_phase_defect,
    ceiling_sz_prime, gs_creation_phase, gs_super_dictionary_defect, local_commutator_defect,
    local_x_rotation_residual, macro_commutator_defect, phase_slope, Generator, ProbeState,
};
use crate::limits::spinchain::SpinChain;
use crate::limits::{Provenance, WittenLimitModel};

pub const DEFAULT_TABLE_N: [usize; 3] = [64, 256, 1024];

/// Chain sizes for the per-site cells.
pub const CHAIN_SIZES: [usize; 4] = [2, 4, 6, 8];

/// Smallest `n` for the phase-slope and free-evolution cells.
pub const MESO_MIN_N: usize = 256;

/// Bogoliubov angle for the axis-persistence cell.
const AXIS_ANGLE: f64 = 0.3;

const PHASE_TIMES: usize = 11;

fn series(n_list: &[usize], f: impl Fn(&DickeOperators) -> Result<f64>) -> Result<Vec<(f64, f64)>> {
    n_list
        .iter()
        .map(|&n| Ok((n as f64, f(&collective_ops(n)?)?)))
        .collect()
}

fn vanishing_row(metric: &str, pts: &[(f64, f64)], provenance: Provenance, cfg: &ExperimentConfig) -> Result<Row> {
    let fit = extrapolate(pts)?;
    Ok(Row::real(metric, None, fit.limit, 0.0, provenance, Tolerance::Absolute(cfg.tolerances.get("constancy")))
        .and(pts.last().map(|p| p.1 < pts[0].1 || p.1 == 0.0).unwrap_or(false), "not decreasing"))
}

fn exponent_row(metric: &str, pts: &[(f64, f64)], target: f64, provenance: Provenance, cfg: &ExperimentConfig) -> Result<Row> {
    Ok(Row::real(
        metric,
        None,
        loglog_slope(pts)?,
        target,
        provenance,
        Tolerance::Absolute(cfg.tolerances.get("growth_exponent")),
    ))
}

fn chain_series(state: ProbeState, generator: impl Fn(&SpinChain) -> crate::algebra::OperatorMatrix) -> Result<Vec<(f64, f64)>> {
    CHAIN_SIZES
        .iter()
        .map(|&n| {
            let chain = SpinChain::new(n)?;
            Ok((n as f64, local_commutator_defect(&chain, state, &generator(&chain))?))
        })
        .collect()
}

fn check_list(n_list: &[usize]) -> Result<()> {
    super::config::check_sweep_list(n_list)?;
    if let Some(&n) = n_list.iter().find(|&&n| n % 2 != 0) {
        return Err(Error::Config {
            field: "n-list",
            message: format!("table cells use the ceiling state and need even n, got {n}"),
        });
    }
    if let Some(&n) = n_list.iter().find(|&&n| n > crate::dicke::ops::DICKE_ROTATION_MAX_N) {
        return Err(Error::Config {
            field: "n-list",
            message: format!("{n} exceeds the table bound {}", crate::dicke::ops::DICKE_ROTATION_MAX_N),
        });
    }
    Ok(())
}

pub(crate) fn table_tasks(cfg: &ExperimentConfig) -> Result<Vec<Task<'_>>> {
    let n_list: Vec<usize> = if cfg.n_values.is_empty() {
        DEFAULT_TABLE_N.to_vec()
    } else {
        cfg.n_values.clone()
    };
    check_list(&n_list)?;
    let largest = *n_list.last().expect("checked non-empty");
    let meso_n = largest.max(MESO_MIN_N);
    let g0 = GaugeAngle::new(0.0);
    let alpha = GaugeAngle::new(cfg.alpha);
    let t = cfg.t;
    let tol = &cfg.tolerances;

    let list = n_list.clone();
    let macro_cell = move |metric: &'static str, state: ProbeState, gen: Generator| -> Task<'_> {
        let list = list.clone();
        Box::new(move || {
            let pts = series(&list, |o| macro_commutator_defect(o, &state.build(o)?, gen))?;
            Ok(vec![vanishing_row(metric, &pts, Provenance::Published, cfg)?])
        })
    };

    let tasks: Vec<Task> = vec![
        // time evolution
        Box::new(move || {
            let pts = chain_series(ProbeState::Ground, |c| c.hss())?;
            Ok(vec![exponent_row("table1.gs.local", &pts, -0.5, Provenance::Derived, cfg)?])
        }),
        Box::new(move || {
            let ops = collective_ops(meso_n)?;
            let times: Vec<f64> = (0..PHASE_TIMES).map(|k| k as f64 / (PHASE_TIMES - 1) as f64).collect();
            let slope = phase_slope(&gs_creation_phase(&ops, &times)?)?;
            Ok(vec![Row::real(
                "table1.gs.meso",
                Some(meso_n),
                slope,
                1.0,
                Provenance::Published,
                Tolerance::Absolute(tol.get("phase_slope")),
            )])
        }),
        macro_cell("table1.gs.macro", ProbeState::Ground, Generator::Hss),
        Box::new(move || {
            let chain = SpinChain::new(3)?;
            Ok(vec![Row::real(
                "table1.bs.local",
                Some(3),
                local_x_rotation_residual(&chain, &[0.3, 1.0, 2.5])?,
                0.0,
                Provenance::Published,
                Tolerance::Absolute(tol.get("local_rotation")),
            )])
        }),
        Box::new(move || {
            let f = bs_free_evolution(&collective_ops(MESO_MIN_N)?, t)?;
            Ok(vec![Row::real(
                "table1.bs.meso",
                Some(MESO_MIN_N),
                f.q_drift(),
                f.p2_initial * t * t,
                Provenance::Derived,
                Tolerance::Relative(tol.get("free_growth_relative")),
            )
            .and(f.p_drift().abs() <= tol.get("identity"), format!("p drift {:.3e}", f.p_drift()))])
        }),
        macro_cell("table1.bs.macro", ProbeState::Bogoliubov, Generator::BcsPrime),
        Box::new(move || {
            let v = bs_axis_persistence(&collective_ops(largest)?, AXIS_ANGLE, t)?;
            Ok(vec![Row::real(
                "table1.cs.local",
                Some(largest),
                v,
                0.0,
                Provenance::Derived,
                Tolerance::Absolute(tol.get("constancy")),
            )])
        }),
        Box::new(move || {
            Ok(vec![Row::real(
                "table1.cs.meso",
                Some(largest),
                ceiling_phase_defect(&collective_ops(largest)?)?,
                0.0,
                Provenance::Derived,
                Tolerance::Absolute(tol.get("identity")),
            )])
        }),
        macro_cell("table1.cs.macro", ProbeState::Ceiling, Generator::Hss),
        // supertransformation
        Box::new(move || {
            let pts = chain_series(ProbeState::Ground, |c| c.g_alpha(alpha))?;
            Ok(vec![exponent_row("table2.gs.local", &pts, -0.5, Provenance::Published, cfg)?])
        }),
        {
            let list = n_list.clone();
            Box::new(move || {
                let pts = series(&list, |o| gs_super_dictionary_defect(o, alpha))?;
                let witten = WittenLimitModel::new(32, alpha)?
                    .derivative_relations()?
                    .iter()
                    .map(|r| r.1)
                    .fold(0.0, f64::max);
                Ok(vec![vanishing_row("table2.gs.meso", &pts, Provenance::Published, cfg)?
                    .and(witten <= tol.get("identity"), format!("limit relations residual {witten:.3e}"))])
            })
        },
        macro_cell("table2.gs.macro", ProbeState::Ground, Generator::G(alpha)),
        Box::new(move || {
            let pts = chain_series(ProbeState::Bogoliubov, |c| c.g_alpha(g0))?;
            Ok(vec![exponent_row("table2.bs.local", &pts, -0.5, Provenance::Derived, cfg)?])
        }),
        {
            let list = n_list.clone();
            Box::new(move || {
                let pts = series(&list, |o| bs_eta_prime(o, g0))?;
                Ok(vec![exponent_row("table2.bs.meso", &pts, 0.5, Provenance::Published, cfg)?])
            })
        },
        macro_cell("table2.bs.macro", ProbeState::Bogoliubov, Generator::G(g0)),
        {
            let list = n_list.clone();
            Box::new(move || {
                let pts = series(&list, |o| ceiling_generator_scale(o, alpha))?;
                Ok(vec![exponent_row("table2.cs.local", &pts, 0.5, Provenance::Derived, cfg)?])
            })
        },
        {
            let list = n_list.clone();
            Box::new(move || {
                let pts = series(&list, |o| ceiling_sz_prime(o, alpha))?;
                Ok(vec![exponent_row("table2.cs.macro", &pts, 0.5, Provenance::Derived, cfg)?])
            })
        },
    ];
    Ok(tasks)
}
