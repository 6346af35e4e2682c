//! Local, mesoscopic and macroscopic behaviour of the ground, Bogoliubov and ceiling states
//! under time evolution and the supertransformation.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::convergence::{linear_slope, ConvergenceSeries, Provenance, Target};
use super::spinchain::{Pauli, SpinChain};
use super::witten::witten_spectrum;
use crate::algebra::{unitary_flow, GaugeAngle, OperatorMatrix, C64, I, ZERO};
use crate::dicke::{
    bogoliubov_state, ceiling_g_eigenvector, ceiling_state_ladder, collective_ops, ground_state, DickeOperators,
    DickeState, StateLabel,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeState {
    Ground,
    /// Bogoliubov state at angle zero, spins along `+x`
    Bogoliubov,
    /// `S_z = 0` ceiling state
    Ceiling,
}

impl ProbeState {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ground" | "gs" => Ok(Self::Ground),
            "bogoliubov" | "bs" => Ok(Self::Bogoliubov),
            "ceiling" | "cs" => Ok(Self::Ceiling),
            other => Err(Error::InvalidArgument(format!("unknown state label `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Ground => "ground",
            Self::Bogoliubov => "bogoliubov",
            Self::Ceiling => "ceiling",
        }
    }

    pub fn build(&self, ops: &DickeOperators) -> Result<DickeState> {
        match self {
            Self::Ground => ground_state(ops),
            Self::Bogoliubov => bogoliubov_state(ops, 0.0),
            Self::Ceiling => Ok(ceiling_state_ladder(ops)?.1),
        }
    }
}

/// Generators acting on Dicke product vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Generator {
    Hss,
    BcsPrime,
    G(GaugeAngle),
}

pub fn apply_generator(ops: &DickeOperators, generator: Generator, v: &DVector<C64>) -> Result<DVector<C64>> {
    let diag = |d: Vec<f64>| DVector::from_fn(v.len(), |i, _| v[i] * d[i]);
    match generator {
        Generator::Hss => Ok(diag(ops.hss_diagonal())),
        Generator::BcsPrime => Ok(diag(ops.bcs_prime_diagonal())),
        Generator::G(alpha) => {
            let lowered = ops.lift_apply(v, |s| ops.apply_s_minus(s))?;
            let raised = ops.lift_apply(v, |s| ops.apply_s_plus(s))?;
            let out = ops.apply_eta(&lowered)? * alpha.phase() + ops.apply_eta_dag(&raised)? * alpha.phase().conj();
            Ok(out / C64::new((ops.n() as f64).sqrt(), 0.0))
        }
    }
}

fn apply_axis(ops: &DickeOperators, axis: usize, v: &DVector<C64>) -> Result<DVector<C64>> {
    match axis {
        0 => ops.lift_apply(v, |s| ops.apply_s_x(s)),
        1 => ops.lift_apply(v, |s| ops.apply_s_y(s)),
        _ => ops.lift_apply(v, |s| ops.apply_s_z(s)),
    }
}

/// `max_a ||[S_a / N, generator] psi||`
pub fn macro_commutator_defect(ops: &DickeOperators, state: &DickeState, generator: Generator) -> Result<f64> {
    let v = state.vector();
    let gv = apply_generator(ops, generator, v)?;
    let mut worst = 0.0f64;
    for axis in 0..3 {
        let left = apply_axis(ops, axis, &gv)?;
        let right = apply_generator(ops, generator, &apply_axis(ops, axis, v)?)?;
        worst = worst.max((left - right).norm() / ops.n() as f64);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MacroReport {
    /// `<S_x / N>, <S_y / N>, <S_z / N>`
    pub mean: [f64; 3],
    /// `<4 S_+ S_- / N^2>`
    pub scaled_pair: f64,
    /// every `S_z` value in the support is an even integer; spacing is then 2
    pub even_sz_support: bool,
}

pub fn macroscopic_probe(ops: &DickeOperators, state: &DickeState) -> Result<MacroReport> {
    if let StateLabel::Custom(name) = state.label() {
        return Err(Error::InvalidArgument(format!("unknown state label `{name}`")));
    }
    let nf = ops.n() as f64;
    let v = state.vector();
    let mut mean = [0.0; 3];
    for (axis, m) in mean.iter_mut().enumerate() {
        *m = v.dotc(&apply_axis(ops, axis, v)?).re / nf;
    }
    let lowered = ops.lift_apply(v, |s| ops.apply_s_minus(s))?;
    let scaled_pair = 4.0 * lowered.norm_squared() / (nf * nf);
    let m = ops.spin_dim();
    let even_sz_support = (0..ops.dim())
        .filter(|&i| v[i].norm() > 1e-14)
        .all(|i| (ops.sz_value(i % m) as i64) % 2 == 0);
    Ok(MacroReport {
        mean,
        scaled_pair,
        even_sz_support,
    })
}

/// `<(S_x - c)^2> / N` with `c = N` when `centered`, else `c = 0`.
pub fn mesoscopic_variance(ops: &DickeOperators, state: &DickeState, centered: bool) -> Result<f64> {
    let nf = ops.n() as f64;
    let c = if centered { nf } else { 0.0 };
    let v = state.vector();
    let shifted = apply_axis(ops, 0, v)? - v * C64::new(c, 0.0);
    Ok(shifted.norm_squared() / nf)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum Divergence {
    Convergent { limit: f64 },
    Divergent { slope: f64 },
}

/// Slope of `Var` against `n` above this counts as divergence.
pub const DIVERGENCE_SLOPE: f64 = 0.05;

/// `S_x / sqrt N` variance across `n_list`; the Bogoliubov state uses `(S_x - N)/sqrt N`.
pub fn mesoscopic_divergence(state: ProbeState, n_list: &[usize]) -> Result<(ConvergenceSeries, Divergence)> {
    let mut points = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let ops = collective_ops(n)?;
        let st = state.build(&ops)?;
        let var = mesoscopic_variance(&ops, &st, state == ProbeState::Bogoliubov)?;
        points.push((n, C64::new(var, 0.0)));
    }
    let series = ConvergenceSeries::new(format!("mesoscopic_variance_{}", state.name()), points, None);
    let pts = series.real_points();
    let slope = linear_slope(&pts)?;
    let class = if slope > DIVERGENCE_SLOPE {
        Divergence::Divergent { slope }
    } else {
        Divergence::Convergent {
            limit: pts.last().map(|p| p.1).unwrap_or(0.0),
        }
    };
    Ok((series, class))
}

/// Lowest `levels` eigenvalues of `H_SS` on the half `k < N/2` around the ground state, ascending.
/// The spectrum is symmetric under `k -> N - k` with the Clifford components swapped; the upper
/// half belongs to the all-up vacuum.
pub fn hss_low_spectrum(ops: &DickeOperators, levels: usize) -> Vec<f64> {
    let m = ops.spin_dim();
    let half = ops.n().div_ceil(2);
    let mut d: Vec<f64> = ops
        .hss_diagonal()
        .into_iter()
        .enumerate()
        .filter(|(i, _)| i % m < half)
        .map(|(_, e)| e)
        .collect();
    d.sort_by(f64::total_cmp);
    d.truncate(levels);
    d
}

/// `max_{k < levels} |E_k(n) - E_k^limit|` over `n_list`, fitted.
pub fn spectral_convergence(n_list: &[usize], levels: usize) -> Result<ConvergenceSeries> {
    let exact = witten_spectrum(levels);
    let mut points = Vec::new();
    for &n in n_list {
        let ops = collective_ops(n)?;
        let low = hss_low_spectrum(&ops, levels);
        let dev = low.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        points.push((n, C64::new(dev, 0.0)));
    }
    ConvergenceSeries::new("hss_low_spectrum_deviation", points, Some(Target::real(0.0, Provenance::Derived)))
        .with_fit()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeEvolution {
    pub t: f64,
    pub q2_initial: f64,
    pub q2_final: f64,
    pub p2_initial: f64,
    pub p2_final: f64,
}

impl FreeEvolution {
    pub fn q_drift(&self) -> f64 {
        self.q2_final - self.q2_initial
    }

    pub fn p_drift(&self) -> f64 {
        self.p2_final - self.p2_initial
    }
}

/// Second moments of `q = S_y / sqrt N` and `p = S_z / sqrt N` in `BS(0)` evolved by
/// `H'_BCS = -S_+ S_- / N`.
pub fn bs_free_evolution(ops: &DickeOperators, t: f64) -> Result<FreeEvolution> {
    let nf = ops.n() as f64;
    let psi = bogoliubov_state(ops, 0.0)?;
    let moments = |v: &DVector<C64>| -> Result<(f64, f64)> {
        Ok((
            apply_axis(ops, 1, v)?.norm_squared() / nf,
            apply_axis(ops, 2, v)?.norm_squared() / nf,
        ))
    };
    let (q0, p0) = moments(psi.vector())?;
    let evolved = ops.evolve_diagonal(&ops.bcs_prime_diagonal(), t, psi.vector())?;
    let (q1, p1) = moments(&evolved)?;
    Ok(FreeEvolution {
        t,
        q2_initial: q0,
        q2_final: q1,
        p2_initial: p0,
        p2_final: p1,
    })
}

/// Phase of `<GS| A A^dag(t) |GS>` with `A = S_- / sqrt N` under `H_SS`, sampled at `times`.
pub fn gs_creation_phase(ops: &DickeOperators, times: &[f64]) -> Result<Vec<(f64, f64)>> {
    let gs = ground_state(ops)?;
    let diag = ops.hss_diagonal();
    let rn = (ops.n() as f64).sqrt();
    let raise = |v: &DVector<C64>| -> Result<DVector<C64>> {
        Ok(ops.lift_apply(v, |s| ops.apply_s_plus(s))? / C64::new(rn, 0.0))
    };
    let bra = raise(gs.vector())?;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let v = ops.evolve_diagonal(&diag, t, gs.vector())?;
        let w = raise(&v)?;
        let u = ops.evolve_diagonal(&diag, -t, &w)?;
        out.push((t, bra.dotc(&u).arg()));
    }
    Ok(out)
}

/// Linear slope of the unwrapped phase.
pub fn phase_slope(samples: &[(f64, f64)]) -> Result<f64> {
    let mut unwrapped = Vec::with_capacity(samples.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &(t, ph) in samples {
        if let Some(p) = prev {
            let jump = ph - p;
            if jump > std::f64::consts::PI {
                offset -= 2.0 * std::f64::consts::PI;
            } else if jump < -std::f64::consts::PI {
                offset += 2.0 * std::f64::consts::PI;
            }
        }
        prev = Some(ph);
        unwrapped.push((t, ph + offset));
    }
    linear_slope(&unwrapped)
}

/// `|<S(t)>/N - axis|` for `BS(alpha)` evolved by `H'_BCS`, axis `(cos 2a, -sin 2a, 0)`.
pub fn bs_axis_persistence(ops: &DickeOperators, alpha: f64, t: f64) -> Result<f64> {
    let psi = bogoliubov_state(ops, alpha)?;
    let v = ops.evolve_diagonal(&ops.bcs_prime_diagonal(), t, psi.vector())?;
    let axis = [(2.0 * alpha).cos(), -(2.0 * alpha).sin(), 0.0];
    let nf = ops.n() as f64;
    let mut dev = 0.0f64;
    for (k, a) in axis.iter().enumerate() {
        let m = v.dotc(&apply_axis(ops, k, &v)?).re / nf;
        dev = dev.hypot(m - a);
    }
    Ok(dev)
}

/// `||[S_+ / N, H_SS] psi_2||` on the ceiling state; the two neighbours of `S_z = 0` that
/// `S_+` reaches are degenerate, so this vanishes.
pub fn ceiling_phase_defect(ops: &DickeOperators) -> Result<f64> {
    let (_, psi2) = ceiling_state_ladder(ops)?;
    let v = psi2.vector();
    let raise = |x: &DVector<C64>| ops.lift_apply(x, |s| ops.apply_s_plus(s));
    let left = raise(&apply_generator(ops, Generator::Hss, v)?)?;
    let right = apply_generator(ops, Generator::Hss, &raise(v)?)?;
    Ok((left - right).norm() / ops.n() as f64)
}

/// `|<BS(0)| eta' |BS(0)>|` with `eta' = -i e^{-i alpha} [eta, eta^dag] S_+ / sqrt N`.
pub fn bs_eta_prime(ops: &DickeOperators, alpha: GaugeAngle) -> Result<f64> {
    let psi = bogoliubov_state(ops, 0.0)?;
    let raised = ops.lift_apply(psi.vector(), |s| ops.apply_s_plus(s))?;
    let m = ops.spin_dim();
    let f = DVector::from_fn(raised.len(), |i, _| if i < m { raised[i] } else { -raised[i] });
    let scale = alpha.phase().conj() * C64::new(0.0, -1.0 / (ops.n() as f64).sqrt());
    Ok(psi.vector().dotc(&(f * scale)).norm())
}

/// `||S_z' psi_2||` with `S_z' = (2i / sqrt N)(e^{i alpha} eta S_- - e^{-i alpha} eta^dag S_+)`.
pub fn ceiling_sz_prime(ops: &DickeOperators, alpha: GaugeAngle) -> Result<f64> {
    let (_, psi2) = ceiling_state_ladder(ops)?;
    let v = psi2.vector();
    let lowered = ops.apply_eta(&ops.lift_apply(v, |s| ops.apply_s_minus(s))?)?;
    let raised = ops.apply_eta_dag(&ops.lift_apply(v, |s| ops.apply_s_plus(s))?)?;
    let out = (lowered * alpha.phase() - raised * alpha.phase().conj())
        * C64::new(0.0, 2.0 / (ops.n() as f64).sqrt());
    Ok(out.norm())
}

/// `<G_alpha>` on its ceiling eigenvector, `sqrt(E_N / N)`.
pub fn ceiling_generator_scale(ops: &DickeOperators, alpha: GaugeAngle) -> Result<f64> {
    let (state, _) = ceiling_g_eigenvector(ops, alpha)?;
    Ok(state
        .expect_with(|v| apply_generator(ops, Generator::G(alpha), v))?
        .re)
}

/// `||(A' + i eta_alpha^dag) psi||` for `A = S_- / sqrt N` and
/// `psi = W_N(1, 0)` applied to the `eta`-annihilated vacuum.
pub fn gs_super_dictionary_defect(ops: &DickeOperators, alpha: GaugeAngle) -> Result<f64> {
    use super::fluctuation::{apply_w, FluctuationParams};
    let n = ops.n();
    let mut vac = DVector::from_element(ops.dim(), ZERO);
    vac[ops.index(0, 0)] = C64::new(1.0, 0.0);
    let psi = apply_w(ops, &FluctuationParams::mesoscopic(1.0, 0.0), &vac)?;
    let rn = (n as f64).sqrt();
    let a = |x: &DVector<C64>| -> Result<DVector<C64>> {
        Ok(ops.lift_apply(x, |s| ops.apply_s_minus(s))? / C64::new(rn, 0.0))
    };
    let g = |x: &DVector<C64>| apply_generator(ops, Generator::G(alpha), x);
    let comm = a(&g(&psi)?)? - g(&a(&psi)?)?;
    let a_prime = comm * C64::new(0.0, -1.0);
    let eta_d = ops.apply_eta_dag(&psi)? * (alpha.phase().conj() * I);
    Ok((a_prime + eta_d).norm())
}

/// Which state a local chain probe starts from.
fn chain_state(chain: &SpinChain, state: ProbeState) -> Result<DVector<C64>> {
    let ops = collective_ops(chain.n())?;
    chain.embed(&state.build(&ops)?)
}

/// `max_a ||[sigma_a^0, generator] psi||` on the explicit chain.
pub fn local_commutator_defect(chain: &SpinChain, state: ProbeState, generator: &OperatorMatrix) -> Result<f64> {
    let psi = chain_state(chain, state)?;
    let gpsi = generator.apply(&psi);
    let mut worst = 0.0f64;
    for which in [Pauli::X, Pauli::Y, Pauli::Z] {
        let s = chain.sigma(0, which);
        let d = s.apply(&gpsi) - generator.apply(&s.apply(&psi));
        worst = worst.max(d.norm());
    }
    Ok(worst)
}

/// Largest deviation of `sigma_x(t) = sigma_x` and `sigma_y(t) + i sigma_z(t) =
/// e^{it}(sigma_y + i sigma_z)` on site 0 under the rotation generator `sum_j sigma_x^j / 2`.
pub fn local_x_rotation_residual(chain: &SpinChain, times: &[f64]) -> Result<f64> {
    let h = chain.collective(Pauli::X).scale_real(0.5);
    let x = chain.sigma(0, Pauli::X);
    let yz = &chain.sigma(0, Pauli::Y) + &chain.sigma(0, Pauli::Z).scale(I);
    let mut worst = 0.0f64;
    for &t in times {
        let xt = unitary_flow(&h, t, &x)?;
        let yzt = unitary_flow(&h, t, &yz)?;
        let rotated = yz.scale(C64::new(0.0, t).exp());
        worst = worst.max((&xt - &x).norm()).max((&yzt - &rotated).norm());
    }
    Ok(worst)
}
