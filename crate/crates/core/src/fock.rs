//! Fixed-N two-mode Fock space.
//!
//! A state is stored as the amplitude vector `C_l` over the basis `|N-l, l>`,
//! where `l` is the occupation of mode 1. Mode operators act exactly on each basis
//! vector; products that change the total particle number map out of the fixed-N
//! space and are projected to zero.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest supported product of mode operators (enough for all quartic moments).
pub const MAX_MONOMIAL_LEN: usize = 8;

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Zero,
    One,
}

impl Mode {
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Mode::Zero => 0,
            Mode::One => 1,
        }
    }

    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            Mode::Zero
        } else {
            Mode::One
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    Create(Mode),
    Annihilate(Mode),
}

impl Factor {
    pub fn adjoint(self) -> Self {
        match self {
            Factor::Create(m) => Factor::Annihilate(m),
            Factor::Annihilate(m) => Factor::Create(m),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Create(m) => write!(f, "a{}+", m.index()),
            Factor::Annihilate(m) => write!(f, "a{}", m.index()),
        }
    }
}

/// Ordered product of mode operators, written left to right as in `a0+ a1`
/// (the rightmost factor acts first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeMonomial {
    factors: Vec<Factor>,
}

impl ModeMonomial {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.len() > MAX_MONOMIAL_LEN {
            return Err(Error::MonomialTooLong(factors.len()));
        }
        Ok(Self { factors })
    }

    pub fn identity() -> Self {
        Self {
            factors: Vec::new(),
        }
    }

    /// `a_i+ a_j`.
    pub fn hopping(i: usize, j: usize) -> Self {
        Self {
            factors: vec![
                Factor::Create(Mode::from_index(i)),
                Factor::Annihilate(Mode::from_index(j)),
            ],
        }
    }

    /// `a_i+ a_j+ a_k a_m`.
    pub fn quartic(i: usize, j: usize, k: usize, m: usize) -> Self {
        Self {
            factors: vec![
                Factor::Create(Mode::from_index(i)),
                Factor::Create(Mode::from_index(j)),
                Factor::Annihilate(Mode::from_index(k)),
                Factor::Annihilate(Mode::from_index(m)),
            ],
        }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn adjoint(&self) -> Self {
        Self {
            factors: self.factors.iter().rev().map(|f| f.adjoint()).collect(),
        }
    }

    /// Net change of the mode-1 occupation, or `None` if the total particle number changes.
    pub fn l_shift(&self) -> Option<isize> {
        let (mut d0, mut d1) = (0isize, 0isize);
        for f in &self.factors {
            match f {
                Factor::Create(Mode::Zero) => d0 += 1,
                Factor::Annihilate(Mode::Zero) => d0 -= 1,
                Factor::Create(Mode::One) => d1 += 1,
                Factor::Annihilate(Mode::One) => d1 -= 1,
            }
        }
        (d0 + d1 == 0).then_some(d1)
    }

    /// Matrix element `<N-l', l'| op |N-l, l>` for the single reachable `l'`.
    /// Returns `None` when the product annihilates the basis vector or leaves the fixed-N space.
    pub fn act_on_basis(&self, n: usize, l: usize) -> Option<(usize, f64)> {
        let mut occ = [n - l, l];
        // product of integer occupations, square-rooted once so that diagonal elements are exact
        let mut weight = 1.0f64;
        for f in self.factors.iter().rev() {
            match *f {
                Factor::Annihilate(m) => {
                    let k = occ[m.index()];
                    if k == 0 {
                        return None;
                    }
                    weight *= k as f64;
                    occ[m.index()] = k - 1;
                }
                Factor::Create(m) => {
                    let k = occ[m.index()];
                    weight *= (k + 1) as f64;
                    occ[m.index()] = k + 1;
                }
            }
        }
        (occ[0] + occ[1] == n).then_some((occ[1], weight.sqrt()))
    }
}

impl fmt::Display for ModeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.factors.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl FromStr for ModeMonomial {
    type Err = Error;

    /// Parses whitespace separated factors `a0`, `a1`, `a0+`, `a1+` (`†` is accepted for `+`).
    /// `1` is the identity.
    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "1" {
            return Ok(Self::identity());
        }
        let mut factors = Vec::new();
        for tok in s.split_whitespace() {
            let (body, dagger) = match tok.strip_suffix('+').or_else(|| tok.strip_suffix('†')) {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let mode = match body {
                "a0" => Mode::Zero,
                "a1" => Mode::One,
                _ => return Err(Error::BadFactor(tok.to_string())),
            };
            factors.push(if dagger {
                Factor::Create(mode)
            } else {
                Factor::Annihilate(mode)
            });
        }
        ModeMonomial::new(factors)
    }
}

/// Normalized N-particle two-mode state `Σ_l C_l |N-l, l>`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    n_particles: usize,
    amplitudes: Vec<Complex64>,
    label: String,
}

impl TwoModeState {
    /// Builds a state from (possibly unnormalized) amplitudes. The norm is always re-imposed;
    /// when the input deviates from unit norm by more than 1e-12 the deficit `1 - Σ|C_l|^2`
    /// is appended to the label.
    pub fn new(
        n_particles: usize,
        amplitudes: Vec<Complex64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if n_particles == 0 {
            return Err(Error::param("N", "need at least one particle"));
        }
        if amplitudes.len() != n_particles + 1 {
            return Err(Error::LengthMismatch {
                expected: n_particles + 1,
                got: amplitudes.len(),
            });
        }
        if let Some(index) = amplitudes
            .iter()
            .position(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::NonFinite { index });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if norm_sqr == 0.0 || !norm_sqr.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let mut label = label.into();
        let deficit = 1.0 - norm_sqr;
        if deficit.abs() > NORM_TOL {
            label.push_str(&format!(" [norm deficit {deficit:+.3e}]"));
        }
        let scale = 1.0 / norm_sqr.sqrt();
        let amplitudes = amplitudes.into_iter().map(|c| c * scale).collect();
        Ok(Self {
            n_particles,
            amplitudes,
            label,
        })
    }

    /// The Fock state `|N-l, l>`.
    pub fn basis(n_particles: usize, l: usize) -> Result<Self> {
        if l > n_particles {
            return Err(Error::param(
                "l",
                format!("occupation {l} exceeds N = {n_particles}"),
            ));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n_particles + 1];
        amps[l] = Complex64::new(1.0, 0.0);
        Self::new(n_particles, amps, format!("fock N={n_particles} l={l}"))
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, l: usize) -> Complex64 {
        self.amplitudes[l]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `|C_l|^2` for all `l`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Multiply each amplitude by `f(l)`; the result is renormalized.
    pub(crate) fn map_amplitudes(
        &self,
        f: impl Fn(usize, Complex64) -> Complex64,
        label: String,
    ) -> Result<Self> {
        let amps = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(l, &c)| f(l, c))
            .collect();
        Self::new(self.n_particles, amps, label)
    }
}

/// Unnormalized coefficient vector of `op |state>` in the same fixed-N basis.
pub fn apply_monomial(state: &TwoModeState, op: &ModeMonomial) -> Vec<Complex64> {
    apply_to_vector(state.n_particles, state.amplitudes(), op)
}

pub(crate) fn apply_to_vector(n: usize, amps: &[Complex64], op: &ModeMonomial) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    if op.l_shift().is_none() {
        return out;
    }
    for (l, &c) in amps.iter().enumerate() {
        if c == Complex64::new(0.0, 0.0) {
            continue;
        }
        if let Some((lp, coef)) = op.act_on_basis(n, l) {
            out[lp] += c * coef;
        }
    }
    out
}

/// `Σ_l conj(a_l) b_l`.
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn inner(a: &TwoModeState, b: &TwoModeState) -> Result<Complex64> {
    if a.n_particles != b.n_particles {
        return Err(Error::ParticleMismatch {
            left: a.n_particles,
            right: b.n_particles,
        });
    }
    Ok(dot(&a.amplitudes, &b.amplitudes))
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &TwoModeState, b: &TwoModeState) -> Result<f64> {
    inner(a, b).map(|z| z.norm_sqr())
}

pub fn expectation(state: &TwoModeState, op: &ModeMonomial) -> Complex64 {
    dot(&state.amplitudes, &apply_monomial(state, op))
}

/// The 2x2 matrix `<a_i+ a_j>` and the 16 quartic moments `<a_i+ a_j+ a_k a_m>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub quadratic: [[Complex64; 2]; 2],
    pub quartic: [[[[Complex64; 2]; 2]; 2]; 2],
}

impl Moments {
    #[allow(clippy::needless_range_loop)]
    pub fn of(state: &TwoModeState) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let mut quadratic = [[zero; 2]; 2];
        let mut quartic = [[[[zero; 2]; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                quadratic[i][j] = expectation(state, &ModeMonomial::hopping(i, j));
                for k in 0..2 {
                    for m in 0..2 {
                        quartic[i][j][k][m] =
                            expectation(state, &ModeMonomial::quartic(i, j, k, m));
                    }
                }
            }
        }
        Self { quadratic, quartic }
    }
}
