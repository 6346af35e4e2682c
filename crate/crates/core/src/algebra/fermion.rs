//! Fermion modes in the Jordan-Wigner representation.
//!
//! Modes are enumerated site-major, flavor-minor: mode `m = site * n_flavors + flavor`.
//! A Fock basis state is a bitstring whose bit `m` is the occupation of mode `m`;
//! the dense basis index of a state is the integer value of the bitstring.
//! `a_m` acting on an occupied mode picks up `(-1)^(number of occupied modes below m)`.

use std::collections::HashMap;

use nalgebra::DMatrix;

use super::operator::{OperatorMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Largest mode count for which full-Fock dense matrices are built (dimension 1024).
pub const DENSE_MODE_LIMIT: usize = 10;

/// Largest mode count the bitstring representation supports.
pub const MAX_MODES: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeSpec {
    n_sites: usize,
    n_flavors: usize,
}

impl LatticeSpec {
    pub fn new(n_sites: usize, n_flavors: usize) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidArgument("lattice needs at least one site".into()));
        }
        if !(1..=3).contains(&n_flavors) {
            return Err(Error::InvalidArgument(format!(
                "flavor count must be 1, 2 or 3, got {n_flavors}"
            )));
        }
        let spec = Self { n_sites, n_flavors };
        if spec.modes() > MAX_MODES {
            return Err(Error::DimensionOverflow {
                what: "fermion modes",
                requested: spec.modes(),
                limit: MAX_MODES,
            });
        }
        Ok(spec)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn n_flavors(&self) -> usize {
        self.n_flavors
    }

    pub fn modes(&self) -> usize {
        self.n_sites * self.n_flavors
    }

    pub fn fock_dim(&self) -> usize {
        1 << self.modes()
    }

    pub fn mode(&self, site: usize, flavor: usize) -> usize {
        debug_assert!(site < self.n_sites && flavor < self.n_flavors);
        site * self.n_flavors + flavor
    }

    pub fn check_dense(&self) -> Result<()> {
        if self.modes() > DENSE_MODE_LIMIT {
            return Err(Error::DimensionOverflow {
                what: "dense Fock space modes",
                requested: self.modes(),
                limit: DENSE_MODE_LIMIT,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

impl Ladder {
    /// Action on a basis bitstring; `None` when the result vanishes.
    pub fn act(&self, state: u64) -> Option<(f64, u64)> {
        let bit = 1u64 << self.mode;
        let occupied = state & bit != 0;
        if occupied == self.dagger {
            return None;
        }
        let below = (state & (bit - 1)).count_ones();
        let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
        Some((sign, state ^ bit))
    }
}

/// Linear combination of products of ladder operators. Words act right to left.
#[derive(Debug, Clone, Default)]
pub struct FermionPolynomial {
    terms: Vec<(C64, Vec<Ladder>)>,
}

impl FermionPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: C64) -> Self {
        Self {
            terms: vec![(c, Vec::new())],
        }
    }

    pub fn annihilator(mode: usize) -> Self {
        Self {
            terms: vec![(ONE, vec![Ladder { mode, dagger: false }])],
        }
    }

    pub fn creator(mode: usize) -> Self {
        Self {
            terms: vec![(ONE, vec![Ladder { mode, dagger: true }])],
        }
    }

    pub fn terms(&self) -> &[(C64, Vec<Ladder>)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|(c, _)| *c == ZERO)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(c, w)| {
                    let word = w
                        .iter()
                        .rev()
                        .map(|l| Ladder {
                            mode: l.mode,
                            dagger: !l.dagger,
                        })
                        .collect();
                    (c.conj(), word)
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, w)| (k * c, w.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-ONE))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, wa) in &self.terms {
            for (cb, wb) in &other.terms {
                let mut w = wa.clone();
                w.extend(wb.iter().copied());
                terms.push((ca * cb, w));
            }
        }
        Self { terms }
    }

    pub fn sum(items: impl IntoIterator<Item = Self>) -> Self {
        items.into_iter().fold(Self::zero(), |acc, p| acc.add(&p))
    }

    /// Image of a basis state as a sparse list of (amplitude, state).
    pub fn act(&self, state: u64) -> Vec<(C64, u64)> {
        let mut out: Vec<(C64, u64)> = Vec::new();
        'terms: for (c, word) in &self.terms {
            let mut s = state;
            let mut sign = 1.0;
            for l in word.iter().rev() {
                match l.act(s) {
                    Some((sg, next)) => {
                        sign *= sg;
                        s = next;
                    }
                    None => continue 'terms,
                }
            }
            out.push((c * sign, s));
        }
        out
    }

    /// Matrix of the polynomial on the span of `basis`. Fails with `Leakage` when the
    /// polynomial maps a basis state outside the span.
    pub fn to_dense(&self, basis: &FockBasis) -> Result<DMatrix<C64>> {
        let n = basis.len();
        let mut m = DMatrix::zeros(n, n);
        let mut leak: HashMap<u64, C64> = HashMap::new();
        for (col, &state) in basis.states.iter().enumerate() {
            leak.clear();
            for (amp, target) in self.act(state) {
                match basis.index.get(&target) {
                    Some(&row) => m[(row, col)] += amp,
                    None => *leak.entry(target).or_insert(ZERO) += amp,
                }
            }
            let worst = leak.values().map(|a| a.norm()).fold(0.0, f64::max);
            if worst > 1e-14 {
                return Err(Error::Leakage(worst));
            }
        }
        Ok(m)
    }

    pub fn to_operator(&self, basis: &FockBasis, label: impl Into<String>) -> Result<OperatorMatrix> {
        OperatorMatrix::new(self.to_dense(basis)?, label)
    }
}

/// An ordered set of Fock basis bitstrings spanning a subspace.
#[derive(Debug, Clone)]
pub struct FockBasis {
    states: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl FockBasis {
    pub fn new(states: Vec<u64>) -> Self {
        let index = states.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        Self { states, index }
    }

    pub fn full(spec: &LatticeSpec) -> Result<Self> {
        spec.check_dense()?;
        Ok(Self::new((0..spec.fock_dim() as u64).collect()))
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn position(&self, state: u64) -> Option<usize> {
        self.index.get(&state).copied()
    }
}

/// Annihilation operators of every mode, as dense matrices on the full Fock space,
/// in mode order.
pub fn fermion_ops(spec: &LatticeSpec) -> Result<Vec<OperatorMatrix>> {
    let basis = FockBasis::full(spec)?;
    (0..spec.modes())
        .map(|m| FermionPolynomial::annihilator(m).to_operator(&basis, format!("a_{m}")))
        .collect()
}
