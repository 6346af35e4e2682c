//! n-sweeps with an extrapolation row.

use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::report::{Row, Tolerance};
use crate::algebra::{GaugeAngle, C64};
use crate::dicke::ops::{DICKE_MAX_N, DICKE_ROTATION_MAX_N};
use crate::dicke::{bogoliubov_state, ceiling_state_ladder, collective_ops, DickeOperators};
use crate::error::{Error, Result};
use crate::limits::convergence::{linear_slope, loglog_slope};
use crate::limits::fluctuation::{bs_gaussian_probe, fluctuation_expectation, gaussian_target, weyl_relation_probe, Axis, FluctuationParams};
use crate::limits::odlro::odlro;
use crate::limits::scales::{
    bs_eta_prime, bs_free_evolution, hss_low_spectrum, macroscopic_probe, mesoscopic_divergence, mesoscopic_variance,
    Divergence, ProbeState,
};
use crate::limits::witten::witten_spectrum;
use crate::limits::{ConvergenceSeries, Provenance, Target};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMetric {
    WeylGaussian,
    BsGaussianY,
    BsGaussianZ,
    WeylPhase,
    Odlro,
    MesoscopicVariance,
    Spectral,
    CeilingPair,
    EtaPrime,
    FreeEvolution,
}

pub const SWEEP_METRICS: [&str; 10] = [
    "weyl_gaussian",
    "bs_gaussian_y",
    "bs_gaussian_z",
    "weyl_phase",
    "odlro",
    "mesoscopic_variance",
    "spectral",
    "ceiling_pair",
    "eta_prime",
    "free_evolution",
];

impl SweepMetric {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "weyl_gaussian" => Self::WeylGaussian,
            "bs_gaussian_y" => Self::BsGaussianY,
            "bs_gaussian_z" => Self::BsGaussianZ,
            "weyl_phase" => Self::WeylPhase,
            "odlro" => Self::Odlro,
            "mesoscopic_variance" => Self::MesoscopicVariance,
            "spectral" => Self::Spectral,
            "ceiling_pair" => Self::CeilingPair,
            "eta_prime" => Self::EtaPrime,
            "free_evolution" => Self::FreeEvolution,
            other => {
                return Err(Error::Config {
                    field: "metric",
                    message: format!("unknown metric `{other}`; one of {}", SWEEP_METRICS.join(", ")),
                })
            }
        })
    }

    pub fn name(&self) -> &'static str {
        SWEEP_METRICS[*self as usize]
    }

    fn default_state(&self) -> ProbeState {
        match self {
            Self::WeylGaussian | Self::WeylPhase | Self::Spectral => ProbeState::Ground,
            Self::BsGaussianY | Self::BsGaussianZ | Self::EtaPrime | Self::FreeEvolution => ProbeState::Bogoliubov,
            Self::Odlro | Self::MesoscopicVariance | Self::CeilingPair => ProbeState::Ceiling,
        }
    }

    fn allowed_states(&self) -> &'static [ProbeState] {
        match self {
            Self::Odlro | Self::MesoscopicVariance => &[ProbeState::Ground, ProbeState::Bogoliubov, ProbeState::Ceiling],
            Self::WeylGaussian | Self::WeylPhase | Self::Spectral => &[ProbeState::Ground],
            Self::BsGaussianY | Self::BsGaussianZ | Self::EtaPrime | Self::FreeEvolution => &[ProbeState::Bogoliubov],
            Self::CeilingPair => &[ProbeState::Ceiling],
        }
    }

    fn max_n(&self) -> usize {
        match self {
            Self::WeylGaussian | Self::WeylPhase | Self::BsGaussianY => DICKE_ROTATION_MAX_N,
            _ => DICKE_MAX_N,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<Row>,
    pub series: ConvergenceSeries,
}

fn resolve_state(metric: SweepMetric, cfg: &ExperimentConfig) -> Result<ProbeState> {
    let state = match &cfg.state {
        Some(s) => ProbeState::parse(s).map_err(|e| Error::Config {
            field: "state",
            message: e.to_string(),
        })?,
        None => metric.default_state(),
    };
    if !metric.allowed_states().contains(&state) {
        return Err(Error::Config {
            field: "state",
            message: format!("metric {} does not take state {}", metric.name(), state.name()),
        });
    }
    Ok(state)
}

fn check_sizes(metric: SweepMetric, state: ProbeState, n_values: &[usize]) -> Result<()> {
    for &n in n_values {
        if n > metric.max_n() {
            return Err(Error::Config {
                field: "n-list",
                message: format!("{n} exceeds the bound {} for metric {}", metric.max_n(), metric.name()),
            });
        }
        if state == ProbeState::Ceiling && n % 2 != 0 {
            return Err(Error::Config {
                field: "n-list",
                message: format!("ceiling state needs even n, got {n}"),
            });
        }
        if metric == SweepMetric::Odlro && n < 2 {
            return Err(Error::Config {
                field: "n-list",
                message: "correlations need n >= 2".into(),
            });
        }
    }
    Ok(())
}

fn point(metric: SweepMetric, state: ProbeState, n: usize, cfg: &ExperimentConfig) -> Result<C64> {
    let ops: DickeOperators = collective_ops(n)?;
    let re = |x: f64| C64::new(x, 0.0);
    Ok(match metric {
        SweepMetric::WeylGaussian => fluctuation_expectation(
            &ops,
            &state.build(&ops)?,
            &FluctuationParams::mesoscopic(cfg.alpha, cfg.beta),
        )?,
        SweepMetric::BsGaussianY => bs_gaussian_probe(&ops, &bogoliubov_state(&ops, 0.0)?, cfg.r, Axis::Y)?,
        SweepMetric::BsGaussianZ => bs_gaussian_probe(&ops, &bogoliubov_state(&ops, 0.0)?, cfg.r, Axis::Z)?,
        SweepMetric::WeylPhase => re(weyl_relation_probe(&ops, &state.build(&ops)?, cfg.alpha, cfg.beta)?.phase),
        SweepMetric::Odlro => re(odlro(&ops, &state.build(&ops)?)?),
        SweepMetric::MesoscopicVariance => {
            re(mesoscopic_variance(&ops, &state.build(&ops)?, state == ProbeState::Bogoliubov)?)
        }
        SweepMetric::Spectral => {
            let exact = witten_spectrum(cfg.levels);
            let low = hss_low_spectrum(&ops, cfg.levels);
            re(low.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        }
        SweepMetric::CeilingPair => re(macroscopic_probe(&ops, &ceiling_state_ladder(&ops)?.1)?.scaled_pair),
        SweepMetric::EtaPrime => re(bs_eta_prime(&ops, GaugeAngle::new(0.0))?),
        SweepMetric::FreeEvolution => {
            let f = bs_free_evolution(&ops, cfg.t)?;
            C64::new(f.q_drift(), f.p_drift())
        }
    })
}

/// Target for the extrapolated limit, with its tolerance.
fn limit_target(metric: SweepMetric, state: ProbeState, cfg: &ExperimentConfig) -> Option<(Target, Tolerance)> {
    let tol = &cfg.tolerances;
    let t = |v: f64, p: Provenance| Target::real(v, p);
    match metric {
        SweepMetric::WeylGaussian => Some((
            t(gaussian_target(cfg.alpha, cfg.beta), Provenance::Published),
            Tolerance::Relative(tol.get("gaussian_relative")),
        )),
        SweepMetric::BsGaussianY | SweepMetric::BsGaussianZ => Some((
            t((-cfg.r * cfg.r / 2.0).exp(), Provenance::Published),
            Tolerance::Relative(tol.get("gaussian_relative")),
        )),
        SweepMetric::WeylPhase => Some((
            t(-cfg.alpha * cfg.beta / 2.0, Provenance::Derived),
            Tolerance::Absolute(tol.get("weyl_phase")),
        )),
        SweepMetric::Odlro => match state {
            ProbeState::Ceiling => Some((t(0.5, Provenance::Published), Tolerance::Relative(tol.get("odlro_relative")))),
            ProbeState::Bogoliubov => Some((t(0.0, Provenance::Published), Tolerance::Absolute(tol.get("exact")))),
            ProbeState::Ground => Some((t(0.0, Provenance::Trivial), Tolerance::Absolute(tol.get("exact")))),
        },
        SweepMetric::Spectral => Some((t(0.0, Provenance::Derived), Tolerance::Absolute(tol.get("constancy")))),
        SweepMetric::CeilingPair => Some((t(1.0, Provenance::Derived), Tolerance::Relative(tol.get("pair_band")))),
        SweepMetric::FreeEvolution => Some((
            t(cfg.t * cfg.t, Provenance::Derived),
            Tolerance::Relative(tol.get("free_growth_relative")),
        )),
        SweepMetric::MesoscopicVariance | SweepMetric::EtaPrime => None,
    }
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepOutcome> {
    let metric = SweepMetric::parse(cfg.metric.as_deref().unwrap_or(""))?;
    let state = resolve_state(metric, cfg)?;
    check_sizes(metric, state, &cfg.n_values)?;
    let name = metric.name();

    let values: Vec<Result<(usize, C64)>> = super::with_pool(cfg.jobs, || {
        cfg.n_values.par_iter().map(|&n| Ok((n, point(metric, state, n, cfg)?))).collect()
    })?;
    let points = values.into_iter().collect::<Result<Vec<_>>>()?;

    let target = limit_target(metric, state, cfg);
    let series = ConvergenceSeries::new(
        format!("{name}.{}", state.name()),
        points.clone(),
        target.map(|(t, _)| t),
    )
    .with_fit()?;
    let fit = series.fit.expect("fit was just computed");

    let mut rows: Vec<Row> = points.iter().map(|&(n, v)| Row::info(name, Some(n), v)).collect();
    let limit = C64::new(fit.limit, 0.0);
    rows.push(match target {
        Some((t, tol)) => Row::compare(format!("{name}.fit_limit"), None, limit, t, tol),
        None => Row::info(format!("{name}.fit_limit"), None, limit),
    });
    rows.push(match fit.rate {
        Some(p) => Row::info(format!("{name}.fit_rate"), None, C64::new(p, 0.0)),
        None => Row::info(format!("{name}.fit_rate"), None, C64::new(0.0, 0.0)).with_note("constant series"),
    });
    rows.push(Row::info(format!("{name}.fit_residual"), None, C64::new(fit.residual, 0.0)));

    let real = series.real_points();
    let tol = &cfg.tolerances;
    match metric {
        SweepMetric::Spectral => {
            let rate = fit.rate.unwrap_or(0.0);
            rows.push(
                Row::real(format!("{name}.rate"), None, rate, 1.0, Provenance::Derived, Tolerance::Absolute(tol.get("rate_window")))
                    .and(fit.rate.is_some(), "no decay rate"),
            );
        }
        SweepMetric::EtaPrime => rows.push(Row::real(
            format!("{name}.growth_exponent"),
            None,
            loglog_slope(&real)?,
            0.5,
            Provenance::Published,
            Tolerance::Absolute(tol.get("growth_exponent")),
        )),
        SweepMetric::MesoscopicVariance => {
            let (_, class) = mesoscopic_divergence(state, &cfg.n_values)?;
            rows.push(classification_row(name, state, class, &real, cfg)?);
        }
        SweepMetric::FreeEvolution => {
            let drift = points.iter().map(|p| p.1.im.abs()).fold(0.0, f64::max);
            rows.push(Row::real(
                format!("{name}.p_drift"),
                None,
                drift,
                0.0,
                Provenance::Published,
                Tolerance::Absolute(tol.get("identity")),
            ));
        }
        SweepMetric::WeylPhase => {
            let ab = cfg.alpha * cfg.beta;
            rows.push(
                Row::info(format!("{name}.candidate_expansion"), None, C64::new(ab / 2.0, 0.0))
                    .with_note(format!("distance {:.6e}", (fit.limit - ab / 2.0).abs())),
            );
            rows.push(
                Row::info(format!("{name}.candidate_display"), None, C64::new(-4.0 * ab, 0.0))
                    .with_note(format!("distance {:.6e}", (fit.limit + 4.0 * ab).abs())),
            );
        }
        _ => {}
    }
    Ok(SweepOutcome { rows, series })
}

fn classification_row(
    name: &str,
    state: ProbeState,
    class: Divergence,
    real: &[(f64, f64)],
    cfg: &ExperimentConfig,
) -> Result<Row> {
    let tol = &cfg.tolerances;
    let slope = linear_slope(real)?;
    Ok(match (state, class) {
        (ProbeState::Ceiling, Divergence::Divergent { slope }) => Row::real(
            format!("{name}.divergent_slope"),
            None,
            slope,
            0.5,
            Provenance::Derived,
            Tolerance::Absolute(tol.get("variance_slope")),
        ),
        (ProbeState::Ground, Divergence::Convergent { limit }) => Row::real(
            format!("{name}.convergent_limit"),
            None,
            limit,
            1.0,
            Provenance::Derived,
            Tolerance::Absolute(tol.get("constancy")),
        ),
        (ProbeState::Bogoliubov, Divergence::Convergent { limit }) => Row::real(
            format!("{name}.convergent_limit"),
            None,
            limit,
            0.0,
            Provenance::Published,
            Tolerance::Absolute(tol.get("constancy")),
        ),
        (_, class) => Row::check(format!("{name}.classification"), None, slope, false)
            .with_note(format!("unexpected classification {class:?} for {}", state.name())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::Command;

    fn cfg(metric: &str, n: &[usize]) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(Command::Sweep);
        c.metric = Some(metric.into());
        c.n_values = n.to_vec();
        c
    }

    #[test]
    fn weyl_gaussian_fit() {
        let out = run_sweep(&cfg("weyl_gaussian", &[64, 256, 1024])).unwrap();
        let fit = out.rows.iter().find(|r| r.metric == "weyl_gaussian.fit_limit").unwrap();
        assert!(fit.pass, "{fit:?}");
        assert_eq!(out.series.points.len(), 3);
    }

    #[test]
    fn odlro_ceiling_fit() {
        let out = run_sweep(&cfg("odlro", &[50, 100, 200])).unwrap();
        assert!(out.rows.iter().all(|r| r.pass), "{:?}", out.rows);
    }

    #[test]
    fn variance_classification() {
        let out = run_sweep(&cfg("mesoscopic_variance", &[16, 64, 256])).unwrap();
        let row = out.rows.iter().find(|r| r.metric == "mesoscopic_variance.divergent_slope").unwrap();
        assert!(row.pass);
    }

    #[test]
    fn state_and_size_validation() {
        let mut c = cfg("weyl_gaussian", &[64, 256, 1024]);
        c.state = Some("ceiling".into());
        assert!(matches!(run_sweep(&c), Err(Error::Config { field: "state", .. })));
        assert!(matches!(
            run_sweep(&cfg("odlro", &[51, 100, 200])),
            Err(Error::Config { field: "n-list", .. })
        ));
        assert!(matches!(run_sweep(&cfg("bogus", &[1, 2, 3])), Err(Error::Config { field: "metric", .. })));
    }

    #[test]
    fn every_metric_name_parses() {
        for m in SWEEP_METRICS {
            assert_eq!(SweepMetric::parse(m).unwrap().name(), m);
        }
    }
}
