//! Scalar observables: single-particle density matrix and fragmentation degree,
//! ladder-space quadratures, antipodal overlap, superposition size and the
//! coherent-state phase distribution of a phase-space basis state.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{dot, expectation, ModeMonomial, TwoModeState};
use crate::ladder::{apply_ladder, LadderKind};
use crate::numeric::{log_sum_exp, neumaier_sum, xlogy, LogFactorialTable};
use crate::states::{CoherentParams, PhaseStateParams};

/// The 2x2 matrix `<a_i+ a_j>` with its eigenvalues (`lambda0 >= lambda1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spdm {
    pub m00: Complex64,
    pub m01: Complex64,
    pub m10: Complex64,
    pub m11: Complex64,
    pub lambda0: f64,
    pub lambda1: f64,
    /// `1 - |λ0 - λ1| / N`.
    pub frag_degree: f64,
}

impl Spdm {
    pub fn trace(&self) -> f64 {
        self.m00.re + self.m11.re
    }
}

pub fn spdm(state: &TwoModeState) -> Spdm {
    let m = |i, j| expectation(state, &ModeMonomial::hopping(i, j));
    let (m00, m01, m10, m11) = (m(0, 0), m(0, 1), m(1, 0), m(1, 1));
    let half_tr = 0.5 * (m00.re + m11.re);
    let half_gap = (0.25 * (m00.re - m11.re).powi(2) + m01.norm_sqr()).sqrt();
    let (lambda0, lambda1) = (half_tr + half_gap, half_tr - half_gap);
    let n = state.n_particles() as f64;
    let frag_degree = (1.0 - (lambda0 - lambda1).abs() / n).clamp(0.0, 1.0);
    Spdm {
        m00,
        m01,
        m10,
        m11,
        lambda0,
        lambda1,
        frag_degree,
    }
}

/// Means and variances of `x = b + b+` and `p = -i(b - b+)`.
///
/// `var_plus = +Δ(b + b+)` and `var_minus = -Δ(b - b+)`, which is the variance of `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureReport {
    /// `<b + b+>`
    pub mean_plus: Complex64,
    /// `<b - b+>`
    pub mean_minus: Complex64,
    pub var_plus: f64,
    pub var_minus: f64,
}

pub fn quadratures_exact(state: &TwoModeState) -> QuadratureReport {
    let amps = state.amplitudes();
    let lowered = apply_ladder(state, LadderKind::B, false);
    let raised = apply_ladder(state, LadderKind::B, true);
    let x: Vec<Complex64> = lowered.iter().zip(&raised).map(|(a, b)| a + b).collect();
    let d: Vec<Complex64> = lowered.iter().zip(&raised).map(|(a, b)| a - b).collect();
    let mean_plus = dot(amps, &x);
    let mean_minus = dot(amps, &d);
    // x and p are Hermitian on the truncated ladder, so <x^2> = |x ψ|^2
    let var_plus = dot(&x, &x).re - mean_plus.re * mean_plus.re;
    let p_mean = (-Complex64::i() * mean_minus).re;
    let var_minus = dot(&d, &d).re - p_mean * p_mean;
    QuadratureReport {
        mean_plus,
        mean_minus,
        var_plus,
        var_minus,
    }
}

/// Large-`|β|^2` quadratures of `𝒩(|β> + r e^{iθ}|-β>)`:
/// `4|β|^2 cos^2 φ_β (2r/(1+r^2))^2 + 1` and the same with `sin^2`.
pub fn quadratures_asymptotic(beta_mod_sq: f64, phi_beta: f64, r: f64) -> QuadratureReport {
    let (imbalance, contrast) = if r.is_infinite() {
        (-1.0, 0.0)
    } else {
        let d = 1.0 + r * r;
        ((1.0 - r * r) / d, 2.0 * r / d)
    };
    let beta = Complex64::from_polar(beta_mod_sq.sqrt(), phi_beta);
    // <b> -> β (1 - r^2)/(1 + r^2) once the overlap <-β|β> is negligible
    let mean_b = beta * imbalance;
    let four_b2c2 = 4.0 * beta_mod_sq * contrast * contrast;
    QuadratureReport {
        mean_plus: mean_b + mean_b.conj(),
        mean_minus: mean_b - mean_b.conj(),
        var_plus: four_b2c2 * phi_beta.cos().powi(2) + 1.0,
        var_minus: four_b2c2 * phi_beta.sin().powi(2) + 1.0,
    }
}

/// `<-β|β> = A_β^2 Σ_{l=0}^N (-|β|^2)^l / l!` next to its large-N value `e^{-2|β|^2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub exact: f64,
    pub asymptotic: f64,
}

pub fn antipodal_overlap(beta_mod_sq: f64, n_particles: usize) -> Result<Overlap> {
    CoherentParams::new(n_particles, beta_mod_sq, 0.0).validate()?;
    let table = LogFactorialTable::new(n_particles);
    let logs: Vec<f64> = (0..=n_particles)
        .map(|l| xlogy(l as f64, beta_mod_sq) - table.ln_fact(l))
        .collect();
    let shift = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let alternating = neumaier_sum(logs.iter().enumerate().map(|(l, &x)| {
        if l % 2 == 0 {
            (x - shift).exp()
        } else {
            -(x - shift).exp()
        }
    }));
    let total = (log_sum_exp(&logs) - shift).exp();
    Ok(Overlap {
        exact: (alternating / total).clamp(-1.0, 1.0),
        asymptotic: (-2.0 * beta_mod_sq).exp(),
    })
}

/// Superposition size `(1 - e^{-ℱN})^2` of the balanced cat, via `|β|^2 = ℱN/2`.
pub fn cat_size(frag_degree: f64, n_particles: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&frag_degree) {
        return Err(Error::param(
            "F",
            format!("{frag_degree} must lie in [0, 1]"),
        ));
    }
    let one_minus = -(-frag_degree * n_particles as f64).exp_m1();
    Ok(one_minus * one_minus)
}

/// `(1 - <-β|β>)^2` using the exact finite-N overlap.
pub fn cat_size_from_overlap(overlap: f64) -> f64 {
    (1.0 - overlap).powi(2)
}

/// Expansion of a phase-space state in truncated coherent states of the `b` ladder with
/// `|β|^2 = l0`: `C_{φ_β} = sqrt(N!/N^N) / A_β Σ_l sqrt((N-l0)^{N-l}/(N-l)!) e^{-il(φ_β-φ)}`.
#[derive(Debug, Clone)]
pub struct CoherentPhaseExpansion {
    phi: f64,
    log_terms: Vec<f64>,
}

impl CoherentPhaseExpansion {
    pub fn new(p: &PhaseStateParams) -> Result<Self> {
        p.validate()?;
        let n = p.n_particles;
        let nf = n as f64;
        let table = LogFactorialTable::new(n);
        let coh = CoherentParams::new(n, p.l0, 0.0);
        // -ln A_β = 0.5 ln Σ l0^l / l!
        let ln_inv_a = -0.5 * coh.ln_norm_sq();
        let prefactor = 0.5 * (table.ln_fact(n) - nf * nf.ln()) + ln_inv_a;
        let ln_rest = (nf - p.l0).ln();
        let log_terms = (0..=n)
            .map(|l| prefactor + 0.5 * ((n - l) as f64 * ln_rest - table.ln_fact(n - l)))
            .collect();
        Ok(Self {
            phi: p.phi,
            log_terms,
        })
    }

    pub fn amplitude(&self, phi_beta: f64) -> Complex64 {
        self.log_terms
            .iter()
            .enumerate()
            .map(|(l, &x)| Complex64::from_polar(x.exp(), -(l as f64) * (phi_beta - self.phi)))
            .sum()
    }
}

/// `|C_{φ_β}|` on the uniform grid `φ_β = 2πk / n_samples`.
pub fn coherent_phase_distribution(
    phi: f64,
    n_particles: usize,
    l0: f64,
    n_samples: usize,
) -> Result<Vec<(f64, f64)>> {
    if n_samples == 0 {
        return Err(Error::param("samples", "need at least one sample"));
    }
    let exp = CoherentPhaseExpansion::new(&PhaseStateParams::new(n_particles, l0, phi))?;
    let grid: Vec<f64> = (0..n_samples)
        .map(|k| TAU * k as f64 / n_samples as f64)
        .collect();
    Ok(sample(&grid, |x| exp.amplitude(x).norm()))
}

#[cfg(feature = "parallel")]
fn sample(grid: &[f64], f: impl Fn(f64) -> f64 + Sync) -> Vec<(f64, f64)> {
    use rayon::prelude::*;
    grid.par_iter().map(|&x| (x, f(x))).collect()
}

#[cfg(not(feature = "parallel"))]
fn sample(grid: &[f64], f: impl Fn(f64) -> f64) -> Vec<(f64, f64)> {
    grid.iter().map(|&x| (x, f(x))).collect()
}

/// Location and full width at half maximum of the largest peak of a periodic sampled
/// curve on a uniform `[0, 2π)` grid. Half-maximum crossings are linearly interpolated.
pub fn periodic_peak_fwhm(samples: &[(f64, f64)]) -> Option<(f64, f64)> {
    let n = samples.len();
    if n < 3 {
        return None;
    }
    let step = TAU / n as f64;
    let (imax, &(peak_x, peak_y)) = samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))?;
    let half = 0.5 * peak_y;
    let at = |k: isize| samples[k.rem_euclid(n as isize) as usize].1;
    let crossing = |dir: isize| -> Option<f64> {
        let mut k = 0isize;
        while k < n as isize {
            let (y0, y1) = (
                at(imax as isize + k * dir),
                at(imax as isize + (k + 1) * dir),
            );
            if y1 <= half {
                return Some((k as f64 + (y0 - half) / (y0 - y1)) * step);
            }
            k += 1;
        }
        None
    };
    Some((peak_x, crossing(1)? + crossing(-1)?))
}
