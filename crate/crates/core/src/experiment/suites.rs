//! `verify` and `spectrum`.

use std::f64::consts::FRAC_PI_2;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::config::{ExperimentConfig, ModelChoice};
use super::report::{Row, Tolerance};
use super::Task;
use crate::algebra::{hermitian_eigen, super_decompose, unitary_flow, FermionPolynomial, FockBasis, GaugeAngle, C64};
use crate::dicke::{
    bogoliubov_state, build_hss_dicke, ceiling_state_integral, ceiling_state_ladder, collective_ops, ground_state,
    states::overlap, QuadratureGrid,
};
use crate::error::{Error, Result};
use crate::lattice::bcs::{build_bcs, BcsRepresentation};
use crate::lattice::flows::car_residual;
use crate::lattice::models::{DOWN, UP};
use crate::lattice::{
    baby_flow_closed, build_baby, build_model_i, build_model_ii, build_model_iii_fock, build_model_iii_weighted,
    hopping_candidate, model_i_flow_closed, model_ii_flow_closed, nilpotency_check, symmetric_pair_isometry,
    ModelInstance, ModelKind, Representation,
};
use crate::lattice::model3::collective_lowering_norm;
use crate::limits::derivatives::{collective_identities, local_identities, IdentityCheck};
use crate::limits::odlro::{ceiling_odlro_closed_form, odlro};
use crate::limits::scales::macroscopic_probe;
use crate::limits::spinchain::SpinChain;
use crate::limits::witten::ground_gauge_defect;
use crate::limits::{Provenance, WittenLimitModel};

/// Flow parameters at which closed forms are compared with conjugation.
pub const FLOW_GRID: [f64; 4] = [0.1, 0.7, FRAC_PI_2, 2.0];

/// Gauge angle used for the single-mode flow.
const BABY_ALPHA: f64 = 0.4;

fn couplings(seed: u64, tag: u64, n: usize) -> Vec<f64> {
    let mut rng = StdRng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(tag));
    (0..n).map(|_| rng.gen_range(0.5..2.0)).collect()
}

fn model_tag(kind: ModelKind) -> &'static str {
    match kind {
        ModelKind::Baby => "baby",
        ModelKind::ModelI => "model_i",
        ModelKind::ModelII => "model_ii",
        ModelKind::ModelIII => "model_iii",
        ModelKind::Bcs => "bcs",
    }
}

fn build_lattice(kind: ModelKind, n: usize, seed: u64) -> Result<ModelInstance> {
    match kind {
        ModelKind::Baby => build_baby(GaugeAngle::new(BABY_ALPHA)),
        ModelKind::ModelI => build_model_i(&couplings(seed, 1, n)),
        ModelKind::ModelII => build_model_ii(&couplings(seed, 2, n)),
        ModelKind::ModelIII => Ok(build_model_iii_weighted(&couplings(seed, 3, n), Representation::PairSector)?.0),
        ModelKind::Bcs => Ok(build_model_iii_fock(n)?.0),
    }
}

/// Structural residuals of the supersymmetric decomposition of one model.
pub fn structure_rows(model: &ModelInstance, metric: &str, n: usize, cfg: &ExperimentConfig) -> Vec<Row> {
    let tol = &cfg.tolerances;
    let q = match model.supercharge() {
        Ok(q) => q,
        Err(e) => return vec![Row::failed(format!("{metric}.decompose"), Some(n), &e)],
    };
    let d = match super_decompose(q, GaugeAngle::new(cfg.alpha)) {
        Ok(d) => d,
        Err(e) => return vec![Row::failed(format!("{metric}.decompose"), Some(n), &e)],
    };
    let r = &d.residuals;
    let h_norm = d.h.norm();
    let odd = d.paired_spectrum.iter().filter(|l| l.multiplicity % 2 != 0).count();
    let t = Provenance::Trivial;
    vec![
        Row::real(format!("{metric}.nilpotency"), Some(n), r.nilpotency, 0.0, t, Tolerance::Absolute(tol.get("nilpotency"))),
        Row::real(format!("{metric}.clifford"), Some(n), r.clifford, 0.0, t, Tolerance::Absolute(tol.get("clifford"))),
        Row::real(
            format!("{metric}.g_squared"),
            Some(n),
            r.g_squared / h_norm.max(1.0),
            0.0,
            t,
            Tolerance::Absolute(tol.get("identity")),
        ),
        Row::real(
            format!("{metric}.g_spectrum_symmetry"),
            Some(n),
            r.g_spectrum / (1.0 + h_norm.sqrt()),
            0.0,
            t,
            Tolerance::Absolute(tol.get("g_spectrum")),
        ),
        Row::real(format!("{metric}.odd_positive_levels"), Some(n), odd as f64, 0.0, Provenance::Published, Tolerance::Absolute(0.0)),
    ]
}

fn flow_grid(cfg: &ExperimentConfig) -> Vec<f64> {
    let mut grid = FLOW_GRID.to_vec();
    if let Some(s) = cfg.s {
        if !grid.contains(&s) {
            grid.push(s);
        }
    }
    grid
}

fn fmt_s(s: f64) -> String {
    if (s - FRAC_PI_2).abs() < 1e-15 {
        "pi/2".to_string()
    } else {
        format!("{s}")
    }
}

/// Single-mode closed form against `exp(isG) a exp(-isG)` with `G = G_{-alpha}`.
pub fn baby_flow_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let tol = cfg.tolerances.get("flow");
    let alpha = GaugeAngle::new(BABY_ALPHA);
    let model = build_baby(alpha)?;
    let a = model.supercharge()?.clone();
    let g = model
        .g(GaugeAngle::new(-BABY_ALPHA))
        .ok_or_else(|| Error::Invariant("baby model lacks a generator".into()))?;
    let mut rows = Vec::new();
    for s in flow_grid(cfg) {
        let diff = (&baby_flow_closed(s, alpha) - &unitary_flow(&g, s, &a)?).max_abs();
        rows.push(Row::real(
            format!("flow.baby[s={}]", fmt_s(s)),
            None,
            diff,
            0.0,
            Provenance::Published,
            Tolerance::Absolute(tol),
        ));
    }
    Ok(rows)
}

pub fn model_i_flow_rows(z: &[f64], cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let n = z.len();
    let model = build_model_i(z)?;
    let g = model.g(GaugeAngle::new(0.0)).expect("Model I has a supercharge");
    let basis = FockBasis::full(&model.spec)?;
    let mut rows = Vec::new();
    for s in flow_grid(cfg) {
        let mut worst = 0.0f64;
        let mut flowed = Vec::with_capacity(n);
        for k in 0..n {
            let closed = model_i_flow_closed(k, s, z)?;
            let a = FermionPolynomial::annihilator(k).to_operator(&basis, "a")?;
            worst = worst.max((&closed - &unitary_flow(&g, s, &a)?).max_abs());
            flowed.push(closed);
        }
        let label = fmt_s(s);
        rows.push(Row::real(
            format!("flow.model_i[s={label}]"),
            Some(n),
            worst,
            0.0,
            Provenance::Published,
            Tolerance::Absolute(cfg.tolerances.get("flow")),
        ));
        rows.push(Row::real(
            format!("car.model_i[s={label}]"),
            Some(n),
            car_residual(&flowed)?,
            0.0,
            Provenance::Trivial,
            Tolerance::Absolute(cfg.tolerances.get("car")),
        ));
    }
    Ok(rows)
}

pub fn model_ii_flow_rows(z: &[f64], cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let n = z.len();
    let model = build_model_ii(z)?;
    let g = model.g(GaugeAngle::new(0.0)).expect("Model II has a supercharge");
    let basis = FockBasis::full(&model.spec)?;
    let mut rows = Vec::new();
    for s in flow_grid(cfg) {
        let (mut worst_up, mut worst_down) = (0.0f64, 0.0f64);
        let mut flowed = Vec::with_capacity(2 * n);
        for k in 0..n {
            let (up, down) = model_ii_flow_closed(k, s, z)?;
            for (flavor, closed, worst) in [(UP, &up, &mut worst_up), (DOWN, &down, &mut worst_down)] {
                let a = FermionPolynomial::annihilator(model.spec.mode(k, flavor)).to_operator(&basis, "a")?;
                *worst = worst.max((closed - &unitary_flow(&g, s, &a)?).max_abs());
            }
            flowed.push(up);
            flowed.push(down);
        }
        let label = fmt_s(s);
        let flow_tol = Tolerance::Absolute(cfg.tolerances.get("flow"));
        rows.push(Row::real(format!("flow.model_ii_up[s={label}]"), Some(n), worst_up, 0.0, Provenance::Published, flow_tol));
        rows.push(Row::real(format!("flow.model_ii_down[s={label}]"), Some(n), worst_down, 0.0, Provenance::Published, flow_tol));
        rows.push(Row::real(
            format!("car.model_ii[s={label}]"),
            Some(n),
            car_residual(&flowed)?,
            0.0,
            Provenance::Trivial,
            Tolerance::Absolute(cfg.tolerances.get("car")),
        ));
    }
    Ok(rows)
}

/// The hopping candidate fails nilpotency while every builder passes.
pub fn counterexample_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let min = cfg.tolerances.get("counterexample_min");
    let (_, residual) = nilpotency_check(&hopping_candidate(&[1.0, 1.0, 1.0])?);
    let mut rows = vec![Row::check("counterexample.hopping_nilpotency", Some(3), residual, residual > min)];
    let mut worst = 0.0f64;
    for (kind, n) in [
        (ModelKind::Baby, 1),
        (ModelKind::ModelI, 3),
        (ModelKind::ModelII, 3),
        (ModelKind::ModelIII, 3),
    ] {
        let model = build_lattice(kind, n, cfg.seed)?;
        worst = worst.max(nilpotency_check(model.supercharge()?).1);
    }
    rows.push(Row::real(
        "counterexample.builders_nilpotency",
        None,
        worst,
        0.0,
        Provenance::Trivial,
        Tolerance::Absolute(cfg.tolerances.get("nilpotency")),
    ));
    Ok(rows)
}

/// Largest eigenvalue mismatch between the Dicke `H_SS` and the symmetric pair sector of Model III.
pub fn cross_representation_mismatch(n: usize) -> Result<f64> {
    let (model, ops) = build_model_iii_fock(n)?;
    let v = symmetric_pair_isometry(&ops)?;
    let fock = hermitian_eigen(&model.h.compress(&v)?)?.values;
    let dicke = hermitian_eigen(&build_hss_dicke(&collective_ops(n)?)?)?.values;
    if fock.len() != dicke.len() {
        return Err(Error::DimensionMismatch {
            left: fock.len(),
            right: dicke.len(),
        });
    }
    Ok(fock.iter().zip(&dicke).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

pub fn cross_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    (2..=4)
        .map(|n| {
            Ok(Row::real(
                "cross.dicke_vs_fock_spectrum",
                Some(n),
                cross_representation_mismatch(n)?,
                0.0,
                Provenance::Derived,
                Tolerance::Absolute(cfg.tolerances.get("cross_spectrum")),
            ))
        })
        .collect()
}

/// `4 max_k k (N + 1 - k)` against `N (N + 2)`, and the integral against the ladder state.
pub fn ceiling_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for n in [2usize, 10, 100, 1000] {
        let ops = collective_ops(n)?;
        let block = 4 * ops.ceiling_block_eigenvalue();
        let exact = (n * (n + 2)) as f64;
        rows.push(Row::real(
            "ceiling.block_eigenvalue",
            Some(n),
            block as f64,
            exact,
            Provenance::Published,
            Tolerance::Relative(cfg.tolerances.get("ceiling_relative")),
        ));
    }
    for n in [4usize, 16, 64] {
        let ops = collective_ops(n)?;
        let integral = ceiling_state_integral(&ops, &QuadratureGrid::half_circle(4 * n)?)?;
        let (_, ladder) = ceiling_state_ladder(&ops)?;
        let ov = overlap(&integral.state, &ladder)?.norm();
        rows.push(Row::real(
            "ceiling.integral_overlap",
            Some(n),
            ov,
            1.0,
            Provenance::Published,
            Tolerance::Absolute(cfg.tolerances.get("ceiling_overlap")),
        ));
    }
    Ok(rows)
}

fn identity_rows(prefix: &str, n: usize, checks: &[IdentityCheck], tol: f64) -> Vec<Row> {
    let mut rows = Vec::new();
    for c in checks {
        rows.push(Row::real(
            format!("{prefix}[{}]", c.name),
            Some(n),
            c.residual,
            0.0,
            Provenance::Derived,
            Tolerance::Absolute(tol),
        ));
        if let Some(l) = c.literal_residual {
            rows.push(Row::info(format!("{prefix}_literal[{}]", c.name), Some(n), C64::new(l, 0.0)));
        }
    }
    rows
}

pub fn derivative_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let tol = cfg.tolerances.get("identity");
    let alpha = GaugeAngle::new(cfg.alpha);
    let ops = collective_ops(8)?;
    let mut rows = identity_rows("derivative.collective", 8, &collective_identities(&ops, alpha)?, tol);
    let chain = SpinChain::new(4)?;
    rows.extend(identity_rows("derivative.local", 4, &local_identities(&chain, alpha)?, tol));
    Ok(rows)
}

pub fn witten_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let d = 64;
    let tol = &cfg.tolerances;
    let m = WittenLimitModel::new(d, GaugeAngle::new(cfg.alpha))?;
    let r = m.report()?;
    let t = Provenance::Trivial;
    let id = Tolerance::Absolute(tol.get("identity"));
    let mut rows = vec![
        Row::real("witten.ccr_bulk", Some(d), r.ccr_bulk, 0.0, t, id),
        Row::real("witten.g_squared_bulk", Some(d), r.g_squared_bulk, 0.0, Provenance::Published, id),
        Row::real(
            "witten.spectrum",
            Some(d),
            r.spectrum_error,
            0.0,
            Provenance::Derived,
            Tolerance::Absolute(tol.get("witten_spectrum")),
        )
        .and(r.levels_checked >= d / 2 - 2, "too few bulk levels below d/2"),
        Row::real("witten.ground_multiplicity", Some(d), r.ground_multiplicity as f64, 1.0, Provenance::Published, Tolerance::Absolute(0.0)),
        Row::real("witten.ground_annihilation", Some(d), r.ground_annihilation, 0.0, Provenance::Published, Tolerance::Absolute(tol.get("witten_spectrum"))),
        Row::real(
            "witten.ground_gauge_defect",
            Some(d),
            ground_gauge_defect(d, &[0.0, 0.5, 1.3, 2.9])?,
            0.0,
            Provenance::Published,
            Tolerance::Absolute(tol.get("witten_spectrum")),
        ),
    ];
    for (name, res, literal) in m.derivative_relations()? {
        rows.push(Row::real(format!("witten.relation[{name}]"), Some(d), res, 0.0, Provenance::Derived, id));
        if let Some(l) = literal {
            rows.push(Row::info(format!("witten.relation_literal[{name}]"), Some(d), C64::new(l, 0.0)));
        }
    }
    Ok(rows)
}

/// `||M_N||` in both representations and the two BCS differences.
pub fn norm_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let tol = &cfg.tolerances;
    let mut rows = Vec::new();
    for n in 1..=4 {
        let (_, ops) = build_model_iii_fock(n)?;
        rows.push(Row::real(
            "norm.m_n_fock",
            Some(n),
            ops.m_n.norm(),
            collective_lowering_norm(n),
            Provenance::Derived,
            Tolerance::Absolute(tol.get("norm")),
        ));
        let c = build_bcs(n, BcsRepresentation::Fock)?;
        rows.extend(bcs_rows(&c, n, tol.get("bcs_bound")));
    }
    for n in [10usize, 100, 1000] {
        let c = build_bcs(n, BcsRepresentation::Dicke)?;
        rows.extend(bcs_rows(&c, n, tol.get("bcs_bound")));
    }
    Ok(rows)
}

fn bcs_rows(c: &crate::lattice::bcs::BcsComparison, n: usize, bound: f64) -> Vec<Row> {
    let rep = match c.representation {
        BcsRepresentation::Fock => "fock",
        BcsRepresentation::Dicke => "dicke",
    };
    // the `S_z / N` difference attains the bound exactly; allow rounding
    let tol = Tolerance::Absolute(bound * (1.0 + 1e-12));
    vec![
        Row::real(format!("bcs.{rep}.prime_vs_pair"), Some(n), c.prime_vs_pair, 0.0, Provenance::Published, tol),
        Row::real(format!("bcs.{rep}.prime_vs_ss"), Some(n), c.prime_vs_ss, 0.0, Provenance::Published, tol),
    ]
}

/// ODLRO, macroscopic triples and the Bogoliubov overlap at a few sizes.
pub fn state_rows(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    let tol = &cfg.tolerances;
    let exact = Tolerance::Absolute(tol.get("exact"));
    let mut rows = Vec::new();
    for n in [10usize, 100, 1000] {
        let ops = collective_ops(n)?;
        let gs = ground_state(&ops)?;
        let bs = bogoliubov_state(&ops, 0.0)?;
        let (_, cs) = ceiling_state_ladder(&ops)?;
        rows.push(Row::real("odlro.ground", Some(n), odlro(&ops, &gs)?, 0.0, Provenance::Trivial, exact));
        rows.push(Row::real("odlro.bogoliubov", Some(n), odlro(&ops, &bogoliubov_state(&ops, 0.37)?)?, 0.0, Provenance::Published, exact));
        rows.push(Row::real(
            "odlro.ceiling",
            Some(n),
            odlro(&ops, &cs)?,
            ceiling_odlro_closed_form(n),
            Provenance::Derived,
            Tolerance::Absolute(tol.get("identity")),
        ));
        let g = macroscopic_probe(&ops, &gs)?;
        let dev = (g.mean[0].abs()).max(g.mean[1].abs()).max((g.mean[2] + 1.0).abs());
        rows.push(Row::real("macro.ground_triple", Some(n), dev, 0.0, Provenance::Published, exact));
        let b = macroscopic_probe(&ops, &bs)?;
        let dev = ((b.mean[0] - 1.0).abs()).max(b.mean[1].abs()).max(b.mean[2].abs());
        rows.push(Row::real("macro.bogoliubov_triple", Some(n), dev, 0.0, Provenance::Published, exact));
        let c = macroscopic_probe(&ops, &cs)?;
        rows.push(Row::check("macro.ceiling_even_sz", Some(n), c.even_sz_support as u8 as f64, c.even_sz_support));
        let (a, b) = (0.3, 1.1);
        let ov = overlap(&bogoliubov_state(&ops, a)?, &bogoliubov_state(&ops, b)?)?.norm();
        rows.push(Row::real(
            "bogoliubov.overlap",
            Some(n),
            ov,
            (a - b).cos().abs().powi(n as i32),
            Provenance::Published,
            Tolerance::Absolute(tol.get("overlap")),
        ));
    }
    Ok(rows)
}

fn structure_sizes(kind: ModelKind) -> Vec<usize> {
    match kind {
        ModelKind::Baby => vec![1],
        ModelKind::ModelI => vec![2, 4, 6],
        ModelKind::ModelII => vec![2, 3],
        ModelKind::ModelIII => vec![2, 3],
        ModelKind::Bcs => vec![2, 4],
    }
}

fn structure_task(kind: ModelKind, n: usize, cfg: &ExperimentConfig) -> Task<'_> {
    Box::new(move || {
        let metric = format!("structure.{}", model_tag(kind));
        Ok(match build_lattice(kind, n, cfg.seed) {
            Ok(m) => structure_rows(&m, &metric, n, cfg),
            Err(e) => vec![Row::failed(format!("{metric}.build"), Some(n), &e)],
        })
    })
}

fn flow_task(kind: ModelKind, n: usize, cfg: &ExperimentConfig) -> Option<Task<'_>> {
    match kind {
        ModelKind::Baby => Some(Box::new(move || baby_flow_rows(cfg))),
        ModelKind::ModelI => Some(Box::new(move || model_i_flow_rows(&couplings(cfg.seed, 11, n), cfg))),
        ModelKind::ModelII => Some(Box::new(move || model_ii_flow_rows(&couplings(cfg.seed, 12, n), cfg))),
        _ => None,
    }
}

pub(crate) fn verify_tasks(cfg: &ExperimentConfig) -> Vec<Task<'_>> {
    let mut tasks: Vec<Task> = Vec::new();
    match cfg.model {
        Some(ModelChoice::Lattice(kind)) => {
            let n = cfg.n_values.first().copied().unwrap_or(default_size(kind));
            if kind == ModelKind::Bcs {
                tasks.push(Box::new(move || {
                    let c = build_bcs(n, BcsRepresentation::Fock)?;
                    Ok(bcs_rows(&c, n, cfg.tolerances.get("bcs_bound")))
                }));
            } else {
                tasks.push(structure_task(kind, n, cfg));
                if let Some(t) = flow_task(kind, n, cfg) {
                    tasks.push(t);
                }
            }
        }
        Some(ModelChoice::Dicke) => {
            tasks.push(Box::new(move || cross_rows(cfg)));
            tasks.push(Box::new(move || ceiling_rows(cfg)));
            tasks.push(Box::new(move || state_rows(cfg)));
        }
        None => {
            for kind in [ModelKind::Baby, ModelKind::ModelI, ModelKind::ModelII, ModelKind::ModelIII] {
                for n in structure_sizes(kind) {
                    tasks.push(structure_task(kind, n, cfg));
                }
            }
            tasks.push(Box::new(move || baby_flow_rows(cfg)));
            tasks.push(Box::new(move || model_i_flow_rows(&couplings(cfg.seed, 11, 3), cfg)));
            tasks.push(Box::new(move || model_ii_flow_rows(&couplings(cfg.seed, 12, 2), cfg)));
            tasks.push(Box::new(move || counterexample_rows(cfg)));
            tasks.push(Box::new(move || cross_rows(cfg)));
            tasks.push(Box::new(move || ceiling_rows(cfg)));
            tasks.push(Box::new(move || derivative_rows(cfg)));
            tasks.push(Box::new(move || witten_rows(cfg)));
            tasks.push(Box::new(move || norm_rows(cfg)));
            tasks.push(Box::new(move || state_rows(cfg)));
        }
    }
    tasks
}

fn default_size(kind: ModelKind) -> usize {
    match kind {
        ModelKind::Baby => 1,
        ModelKind::ModelI | ModelKind::Bcs => 4,
        ModelKind::ModelII | ModelKind::ModelIII => 3,
    }
}

/// Lowest levels of `H` for the chosen model; pairing of positive levels where a supercharge exists.
pub(crate) fn spectrum_tasks(cfg: &ExperimentConfig) -> Vec<Task<'_>> {
    let model = cfg.model.expect("validated");
    let n = cfg.n_values[0];
    vec![Box::new(move || {
        let levels: Vec<f64> = match model {
            ModelChoice::Dicke => {
                let mut d = collective_ops(n)?.hss_diagonal();
                d.sort_by(f64::total_cmp);
                d
            }
            ModelChoice::Lattice(ModelKind::Bcs) => {
                let (_, ops) = build_model_iii_fock(n)?;
                let (_, prime) = crate::lattice::bcs::bcs_fock_operators(&ops);
                hermitian_eigen(&prime.symmetrized())?.values
            }
            ModelChoice::Lattice(kind) => hermitian_eigen(&build_lattice(kind, n, cfg.seed)?.h)?.values,
        };
        let mut rows: Vec<Row> = levels
            .iter()
            .take(cfg.levels)
            .enumerate()
            .map(|(k, e)| Row::info(format!("level[{k:04}]"), Some(n), C64::new(*e, 0.0)))
            .collect();
        if let ModelChoice::Lattice(kind) = model {
            if kind != ModelKind::Bcs {
                let m = build_lattice(kind, n, cfg.seed)?;
                rows.extend(structure_rows(&m, &format!("structure.{}", model_tag(kind)), n, cfg));
            }
        }
        Ok(rows)
    })]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::config::Command;

    #[test]
    fn cross_representation_agrees() {
        for n in 2..=4 {
            assert!(cross_representation_mismatch(n).unwrap() < 1e-9);
        }
    }

    #[test]
    fn baby_rows_pass() {
        let cfg = ExperimentConfig::new(Command::Verify);
        let rows = baby_flow_rows(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.iter().all(|r| r.pass), "{rows:?}");
    }

    #[test]
    fn couplings_are_seeded() {
        assert_eq!(couplings(7, 1, 4), couplings(7, 1, 4));
        assert_ne!(couplings(7, 1, 4), couplings(8, 1, 4));
        assert!(couplings(3, 2, 16).iter().all(|z| (0.5..2.0).contains(z)));
    }
}
