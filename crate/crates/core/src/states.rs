//! Constructors for the two-mode state families and the map between the
//! even/odd `(u, θ_K)` and cat `(r, θ)` parameterizations.
//!
//! All magnitudes are assembled in log space so that `|β|^l / sqrt(l!)` and the
//! binomial phase-state weights stay finite for N in the thousands.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::TwoModeState;
use crate::numeric::{log_sum_exp, wrap_angle, xlogy, LogFactorialTable};

/// Default tolerance on `|C_0|^2` and `|C_N|^2` for a Gaussian fragmented state.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-6;

/// Below this modulus the Möbius denominators are treated as singular.
const POLE_TOL: f64 = 1e-14;

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("N", "need at least one particle"));
    }
    Ok(())
}

fn check_finite(name: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::param(name, format!("{x} is not finite")));
    }
    Ok(())
}

/// Truncated coherent state parameters: `β = |β| e^{iφ_β}` on the N-particle ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherentParams {
    pub beta_mod_sq: f64,
    pub phi_beta: f64,
    pub n_particles: usize,
}

impl CoherentParams {
    pub fn new(n_particles: usize, beta_mod_sq: f64, phi_beta: f64) -> Self {
        Self {
            beta_mod_sq,
            phi_beta,
            n_particles,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_n(self.n_particles)?;
        check_finite("beta_sq", self.beta_mod_sq)?;
        check_finite("phi_beta", self.phi_beta)?;
        if self.beta_mod_sq < 0.0 {
            return Err(Error::param("beta_sq", "must be non-negative"));
        }
        if self.beta_mod_sq > self.n_particles as f64 {
            return Err(Error::param(
                "beta_sq",
                format!("{} exceeds N = {}", self.beta_mod_sq, self.n_particles),
            ));
        }
        Ok(())
    }

    /// `ln(|β|^{2l} / l!)` for `l = 0..=N`.
    fn log_weights(&self, table: &LogFactorialTable) -> Vec<f64> {
        (0..=self.n_particles)
            .map(|l| xlogy(l as f64, self.beta_mod_sq) - table.ln_fact(l))
            .collect()
    }

    /// `ln A_β^2 = -ln Σ_{l=0}^N |β|^{2l}/l!`, the finite-sum form of
    /// `e^{-|β|^2} Γ(N+1)/Γ(N+1, |β|^2)`.
    pub fn ln_norm_sq(&self) -> f64 {
        let table = LogFactorialTable::new(self.n_particles);
        -log_sum_exp(&self.log_weights(&table))
    }

    pub fn negated(&self) -> Self {
        Self {
            phi_beta: self.phi_beta + PI,
            ..*self
        }
    }
}

/// Phase-space basis state `∝ (sqrt(N-l0) a0+ + e^{iφ} sqrt(l0) a1+)^N |vac>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseStateParams {
    pub phi: f64,
    pub n_particles: usize,
    pub l0: f64,
}

impl PhaseStateParams {
    pub fn new(n_particles: usize, l0: f64, phi: f64) -> Self {
        Self {
            phi,
            n_particles,
            l0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_n(self.n_particles)?;
        check_finite("phi", self.phi)?;
        check_finite("l0", self.l0)?;
        if !(self.l0 > 0.0 && self.l0 < self.n_particles as f64) {
            return Err(Error::param(
                "l0",
                format!("{} must lie in (0, N = {})", self.l0, self.n_particles),
            ));
        }
        Ok(())
    }
}

/// Gaussian `|C_l|` distribution with the fragmented-state phase pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianFragParams {
    pub n_particles: usize,
    pub l0: f64,
    pub sigma: f64,
    pub u_mod: f64,
    pub theta_k: f64,
    pub phi0: f64,
    /// Largest admissible `|C_0|^2` and `|C_N|^2`.
    pub boundary_tol: f64,
}

impl GaussianFragParams {
    /// Width defaults to the binomial value `σ^2 = l0 (1 - l0/N)`, `φ_0 = 0`.
    pub fn new(n_particles: usize, l0: f64, u_mod: f64, theta_k: f64) -> Self {
        let n = n_particles as f64;
        Self {
            n_particles,
            l0,
            sigma: (l0 * (1.0 - l0 / n)).max(0.0).sqrt(),
            u_mod,
            theta_k,
            phi0: 0.0,
            boundary_tol: DEFAULT_BOUNDARY_TOL,
        }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn with_phi0(mut self, phi0: f64) -> Self {
        self.phi0 = phi0;
        self
    }

    pub fn with_boundary_tol(mut self, tol: f64) -> Self {
        self.boundary_tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_n(self.n_particles)?;
        for (name, x) in [
            ("l0", self.l0),
            ("sigma", self.sigma),
            ("u", self.u_mod),
            ("theta_k", self.theta_k),
            ("phi0", self.phi0),
        ] {
            check_finite(name, x)?;
        }
        if self.sigma <= 0.0 {
            return Err(Error::param("sigma", "width must be positive"));
        }
        if self.u_mod < 0.0 {
            return Err(Error::param("u", "modulus must be non-negative"));
        }
        if self.boundary_tol.is_nan() || self.boundary_tol < 0.0 {
            return Err(Error::param("boundary_tol", "must be non-negative"));
        }
        Ok(())
    }

    /// Phase `φ_l`: increments `θ_K` after even `l` and `π - θ_K` after odd `l`,
    /// so that `φ_{l+2} = φ_l + π`.
    pub fn phase(&self, l: usize) -> f64 {
        let pairs = (l / 2) as f64;
        let base = self.phi0 + pairs * PI;
        if l.is_multiple_of(2) {
            base
        } else {
            base + self.theta_k
        }
    }
}

/// Cat superposition `𝒩 (|β> + r e^{iθ} |-β>)`; `r = +∞` selects `|-β>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatParams {
    pub coherent: CoherentParams,
    pub r: f64,
    pub theta: f64,
}

impl CatParams {
    pub fn new(n_particles: usize, beta_mod_sq: f64, phi_beta: f64, r: f64, theta: f64) -> Self {
        Self {
            coherent: CoherentParams::new(n_particles, beta_mod_sq, phi_beta),
            r,
            theta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.coherent.validate()?;
        check_finite("theta", self.theta)?;
        if self.r.is_nan() || self.r < 0.0 {
            return Err(Error::param("r", "weight ratio must be non-negative"));
        }
        let n = self.asymptotic_norm();
        if !(n.is_finite() && n > 0.0) && self.r.is_finite() {
            return Err(Error::param(
                "r",
                "normalization 𝒩 is singular for these parameters",
            ));
        }
        Ok(())
    }

    /// `𝒩 = (1 + r^2 + 2 r cos θ e^{-2|β|^2})^{-1/2}` (the large-N overlap form).
    pub fn asymptotic_norm(&self) -> f64 {
        let x = (-2.0 * self.coherent.beta_mod_sq).exp();
        (1.0 + self.r * self.r + 2.0 * self.r * self.theta.cos() * x).powf(-0.5)
    }
}

/// Even/odd superposition parameters `c (|even> + u e^{iθ_K} |odd>)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KangsooParams {
    pub u_mod: f64,
    pub theta_k: f64,
    pub lambda_beta: f64,
}

impl KangsooParams {
    pub fn new(u_mod: f64, theta_k: f64, lambda_beta: f64) -> Self {
        Self {
            u_mod,
            theta_k,
            lambda_beta,
        }
    }

    /// Parameters whose `λ_β` belongs to the given `|β|^2`.
    pub fn for_beta_sq(u_mod: f64, theta_k: f64, beta_mod_sq: f64) -> Self {
        Self::new(u_mod, theta_k, lambda_beta(beta_mod_sq))
    }
}

/// `λ_β = sqrt((1 + e^{-2|β|^2}) / (1 - e^{-2|β|^2}))`; tends to 1 for large `|β|^2`
/// and diverges at `β = 0`.
pub fn lambda_beta(beta_mod_sq: f64) -> f64 {
    let x = (-2.0 * beta_mod_sq).exp();
    // 1 - e^{-2b} via expm1 keeps precision for small |β|^2
    ((1.0 + x) / -(-2.0 * beta_mod_sq).exp_m1()).sqrt()
}

/// `A_β β^l / sqrt(l!)`.
pub fn make_coherent(p: &CoherentParams) -> Result<TwoModeState> {
    p.validate()?;
    let table = LogFactorialTable::new(p.n_particles);
    let logs = p.log_weights(&table);
    let ln_a2 = -log_sum_exp(&logs);
    let amps = logs
        .iter()
        .enumerate()
        .map(|(l, &lw)| Complex64::from_polar((0.5 * (lw + ln_a2)).exp(), l as f64 * p.phi_beta))
        .collect();
    TwoModeState::new(
        p.n_particles,
        amps,
        format!(
            "coherent N={} beta_sq={} phi_beta={}",
            p.n_particles, p.beta_mod_sq, p.phi_beta
        ),
    )
}

/// Coherent state of the primed ladder: `C_l ∝ β'^{N-l} / sqrt((N-l)!)`.
pub fn make_coherent_prime(p: &CoherentParams) -> Result<TwoModeState> {
    p.validate()?;
    let n = p.n_particles;
    let table = LogFactorialTable::new(n);
    let logs: Vec<f64> = (0..=n)
        .map(|l| xlogy((n - l) as f64, p.beta_mod_sq) - table.ln_fact(n - l))
        .collect();
    let ln_a2 = -log_sum_exp(&logs);
    let amps = logs
        .iter()
        .enumerate()
        .map(|(l, &lw)| {
            Complex64::from_polar((0.5 * (lw + ln_a2)).exp(), (n - l) as f64 * p.phi_beta)
        })
        .collect();
    TwoModeState::new(
        n,
        amps,
        format!(
            "coherent' N={n} beta_sq={} phi_beta={}",
            p.beta_mod_sq, p.phi_beta
        ),
    )
}

/// `C_l = e^{ilφ} sqrt(C(N,l) (N-l0)^{N-l} l0^l / N^N)`; normalized by the binomial theorem.
pub fn make_phase_state(p: &PhaseStateParams) -> Result<TwoModeState> {
    p.validate()?;
    let n = p.n_particles;
    let nf = n as f64;
    let table = LogFactorialTable::new(n);
    let (ln_rest, ln_l0, ln_n) = ((nf - p.l0).ln(), p.l0.ln(), nf.ln());
    let amps = (0..=n)
        .map(|l| {
            let lf = l as f64;
            let log_p = table.ln_binom(n, l) + (nf - lf) * ln_rest + lf * ln_l0 - nf * ln_n;
            Complex64::from_polar((0.5 * log_p).exp(), lf * p.phi)
        })
        .collect();
    TwoModeState::new(n, amps, format!("phase N={n} l0={} phi={}", p.l0, p.phi))
}

/// Gaussian fragmented state. Even and odd sectors are each normalized and then weighted by
/// `|c|^2 = 1/(1+u^2)` and `|c u|^2`, so `|c|^2 (1 + |u|^2) = 1` holds exactly.
pub fn make_gaussian_fragmented(p: &GaussianFragParams) -> Result<TwoModeState> {
    p.validate()?;
    let n = p.n_particles;
    let var4 = 4.0 * p.sigma * p.sigma;
    let log_mag: Vec<f64> = (0..=n).map(|l| -(l as f64 - p.l0).powi(2) / var4).collect();

    let sector = |parity: usize| -> Vec<f64> {
        log_mag
            .iter()
            .enumerate()
            .filter(|(l, _)| l % 2 == parity)
            .map(|(_, &m)| 2.0 * m)
            .collect()
    };
    let ln_even = log_sum_exp(&sector(0));
    let ln_odd = log_sum_exp(&sector(1));
    let c_sq = 1.0 / (1.0 + p.u_mod * p.u_mod);

    let amps: Vec<Complex64> = (0..=n)
        .map(|l| {
            let (ln_sector, weight) = if l.is_multiple_of(2) {
                (ln_even, c_sq)
            } else {
                (ln_odd, c_sq * p.u_mod * p.u_mod)
            };
            let mag = if weight == 0.0 || ln_sector == f64::NEG_INFINITY {
                0.0
            } else {
                (log_mag[l] - 0.5 * ln_sector).exp() * weight.sqrt()
            };
            Complex64::from_polar(mag, p.phase(l))
        })
        .collect();

    let c0 = amps[0].norm_sqr();
    let cn = amps[n].norm_sqr();
    if c0 > p.boundary_tol || cn > p.boundary_tol {
        return Err(Error::BoundaryWeight {
            c0,
            cn,
            tol: p.boundary_tol,
        });
    }
    TwoModeState::new(
        n,
        amps,
        format!(
            "gaussian N={n} l0={} sigma={} u={} theta_k={} phi0={}",
            p.l0, p.sigma, p.u_mod, p.theta_k, p.phi0
        ),
    )
}

/// `𝒩 (|β> + r e^{iθ}|-β>)`. The analytic `𝒩` is applied first; in the overlap-dominated
/// regime the residual deficit shows up in the label before the norm is re-imposed.
pub fn make_cat(p: &CatParams) -> Result<TwoModeState> {
    p.validate()?;
    let base = make_coherent(&p.coherent)?;
    let label = format!(
        "cat N={} beta_sq={} phi_beta={} r={} theta={}",
        p.coherent.n_particles, p.coherent.beta_mod_sq, p.coherent.phi_beta, p.r, p.theta
    );
    if p.r == 0.0 {
        return Ok(base.with_label(label));
    }
    let phase = Complex64::from_polar(1.0, p.theta);
    if p.r.is_infinite() {
        return base.map_amplitudes(
            |l, c| {
                if l.is_multiple_of(2) {
                    c * phase
                } else {
                    -c * phase
                }
            },
            label,
        );
    }
    let norm = p.asymptotic_norm();
    let weight = phase * p.r;
    base.map_amplitudes(
        |l, c| {
            let factor = if l.is_multiple_of(2) {
                1.0 + weight
            } else {
                1.0 - weight
            };
            c * factor * norm
        },
        label,
    )
}

/// `r e^{iθ} = (1 + u λ_β e^{i(θ_K + π/2)}) / (1 - u λ_β e^{i(θ_K + π/2)})`, returned as
/// `(r, θ)` with `θ ∈ [0, 2π)`.
pub fn kangsoo_to_cat(k: &KangsooParams) -> Result<(f64, f64)> {
    for (name, x) in [
        ("u", k.u_mod),
        ("theta_k", k.theta_k),
        ("lambda_beta", k.lambda_beta),
    ] {
        check_finite(name, x)?;
    }
    if k.u_mod < 0.0 {
        return Err(Error::param("u", "modulus must be non-negative"));
    }
    let w = Complex64::from_polar(k.u_mod * k.lambda_beta, k.theta_k + FRAC_PI_2);
    let denom = Complex64::new(1.0, 0.0) - w;
    if denom.norm() < POLE_TOL {
        return Err(Error::RatioDiverges);
    }
    let z = (Complex64::new(1.0, 0.0) + w) / denom;
    Ok((z.norm(), wrap_angle(z.arg())))
}

/// Inverse Möbius map: `u λ_β e^{i(θ_K + π/2)} = (r e^{iθ} - 1) / (r e^{iθ} + 1)`.
/// `θ_K` is returned in `[0, 2π)` (and set to 0 when `u = 0`).
pub fn cat_to_kangsoo(r: f64, theta: f64, lambda_beta: f64) -> Result<KangsooParams> {
    check_finite("r", r)?;
    check_finite("theta", theta)?;
    check_finite("lambda_beta", lambda_beta)?;
    if r < 0.0 {
        return Err(Error::param("r", "weight ratio must be non-negative"));
    }
    if lambda_beta <= 0.0 {
        return Err(Error::param("lambda_beta", "must be positive"));
    }
    let z = Complex64::from_polar(r, theta);
    let denom = z + 1.0;
    if denom.norm() < POLE_TOL {
        return Err(Error::OddWeightDiverges);
    }
    let w = (z - 1.0) / denom;
    let u = w.norm() / lambda_beta;
    let theta_k = if w.norm() == 0.0 {
        0.0
    } else {
        wrap_angle(w.arg() - FRAC_PI_2)
    };
    Ok(KangsooParams::new(u, theta_k, lambda_beta))
}
