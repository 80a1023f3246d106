//! Number-conserving ladder operators `b`, `b'` on the fixed-N ladder and the
//! diagnostics built from them.
//!
//! `b |N-l, l> = sqrt(l) |N-l+1, l-1>` and `b' |N-l, l> = sqrt(N-l) |N-l-1, l+1>`.
//! The adjoints annihilate the basis vector on which the regularized operator is
//! singular: `b+` kills `l = N` and `b'+` kills `l = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{dot, TwoModeState};
use crate::numeric::{log_sum_exp, xlogy, LogFactorialTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LadderKind {
    B,
    BPrime,
}

/// Unnormalized vector `b|ψ>`, `b+|ψ>`, `b'|ψ>` or `b'+|ψ>`.
pub fn apply_ladder(state: &TwoModeState, kind: LadderKind, dagger: bool) -> Vec<Complex64> {
    apply_ladder_vec(state.n_particles(), state.amplitudes(), kind, dagger)
}

pub(crate) fn apply_ladder_vec(
    n: usize,
    amps: &[Complex64],
    kind: LadderKind,
    dagger: bool,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    match (kind, dagger) {
        (LadderKind::B, false) => {
            for l in 1..=n {
                out[l - 1] = amps[l] * (l as f64).sqrt();
            }
        }
        (LadderKind::B, true) => {
            for l in 0..n {
                out[l + 1] = amps[l] * ((l + 1) as f64).sqrt();
            }
        }
        (LadderKind::BPrime, false) => {
            for l in 0..n {
                out[l + 1] = amps[l] * ((n - l) as f64).sqrt();
            }
        }
        (LadderKind::BPrime, true) => {
            for l in 1..=n {
                out[l - 1] = amps[l] * ((n - l + 1) as f64).sqrt();
            }
        }
    }
    out
}

/// `1 - <[b, b+]>` evaluated through the ladder action. Equals `(N+1)|C_N|^2` for `b`
/// and `(N+1)|C_0|^2` for `b'`.
pub fn commutator_deficit(state: &TwoModeState, kind: LadderKind) -> f64 {
    let raised = apply_ladder(state, kind, true);
    let lowered = apply_ladder(state, kind, false);
    let b_bdag = dot(&raised, &raised).re;
    let bdag_b = dot(&lowered, &lowered).re;
    1.0 - (b_bdag - bdag_b)
}

/// Closed form of [`commutator_deficit`].
pub fn commutator_deficit_closed_form(state: &TwoModeState, kind: LadderKind) -> f64 {
    let n = state.n_particles();
    let edge = match kind {
        LadderKind::B => state.amplitude(n),
        LadderKind::BPrime => state.amplitude(0),
    };
    (n + 1) as f64 * edge.norm_sqr()
}

/// `b^n |ψ>` by repeated single-step action.
pub fn apply_ladder_power(
    state: &TwoModeState,
    kind: LadderKind,
    dagger: bool,
    times: usize,
) -> Vec<Complex64> {
    let n = state.n_particles();
    let mut v = state.amplitudes().to_vec();
    for _ in 0..times {
        v = apply_ladder_vec(n, &v, kind, dagger);
    }
    v
}

/// Fraction of `|β>` lost to `n` applications of `b`:
/// `Σ_{l=N-n+1}^N |β|^{2l}/l!  /  Σ_{l=0}^N |β|^{2l}/l!`.
pub fn robustness_loss(beta_mod_sq: f64, n_particles: usize, n: usize) -> Result<f64> {
    if n_particles == 0 {
        return Err(Error::param("N", "need at least one particle"));
    }
    if n == 0 || n > n_particles {
        return Err(Error::param(
            "n",
            format!("{n} must lie in [1, N = {n_particles}]"),
        ));
    }
    if !beta_mod_sq.is_finite() || beta_mod_sq < 0.0 {
        return Err(Error::param("beta_sq", "must be finite and non-negative"));
    }
    let table = LogFactorialTable::new(n_particles);
    let logs: Vec<f64> = (0..=n_particles)
        .map(|l| xlogy(l as f64, beta_mod_sq) - table.ln_fact(l))
        .collect();
    let lost = log_sum_exp(&logs[n_particles - n + 1..]);
    let total = log_sum_exp(&logs);
    Ok((lost - total).exp().clamp(0.0, 1.0))
}

/// Time-of-flight phase rotation `C_l -> C_l e^{ilφ}`.
pub fn tof_rotate(state: &TwoModeState, varphi: f64) -> TwoModeState {
    let amps: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(l, &c)| c * Complex64::from_polar(1.0, l as f64 * varphi))
        .collect();
    // a unit-modulus rescaling of a normalized state cannot fail validation
    TwoModeState::new(state.n_particles(), amps, state.label().to_string())
        .expect("rotation preserves a valid state")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{expectation, inner, ModeMonomial};
    use crate::states::{make_coherent, CoherentParams};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn zero(v: &[Complex64]) -> bool {
        v.iter().all(|c| c.norm() == 0.0)
    }

    #[test]
    fn edge_annihilation() {
        let bottom = TwoModeState::basis(12, 0).unwrap();
        let top = TwoModeState::basis(12, 12).unwrap();
        assert!(zero(&apply_ladder(&bottom, LadderKind::B, false)));
        assert!(zero(&apply_ladder(&top, LadderKind::B, true)));
        assert!(zero(&apply_ladder(&top, LadderKind::BPrime, false)));
        assert!(zero(&apply_ladder(&bottom, LadderKind::BPrime, true)));
    }

    #[test]
    fn primed_ladder_matrix_elements() {
        let s = TwoModeState::basis(10, 3).unwrap();
        let v = apply_ladder(&s, LadderKind::BPrime, false);
        assert!((v[4].re - 7f64.sqrt()).abs() < 1e-15);
        let w = apply_ladder(&s, LadderKind::BPrime, true);
        assert!((w[2].re - 8f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn coherent_eigen_residual() {
        let p = CoherentParams::new(100, 20.0, 0.4);
        let s = make_coherent(&p).unwrap();
        let beta = Complex64::from_polar(p.beta_mod_sq.sqrt(), p.phi_beta);
        let bv = apply_ladder(&s, LadderKind::B, false);
        let res: Vec<Complex64> = bv
            .iter()
            .zip(s.amplitudes())
            .map(|(x, c)| beta * c - x)
            .collect();
        // the only defect sits at l = N, with squared norm |β|^2 A^2 |β|^{2N}/N!
        assert_eq!(res[100], beta * s.amplitude(100));
        assert!(res[100].norm_sqr() < 1e-30);
        assert!(res[..100].iter().all(|r| r.norm() < 1e-14));
    }

    #[test]
    fn deficits_on_basis_states() {
        let n = 30;
        let top = TwoModeState::basis(n, n).unwrap();
        assert!((commutator_deficit(&top, LadderKind::B) - 31.0).abs() < 1e-12);
        let bottom = TwoModeState::basis(n, 0).unwrap();
        assert!(commutator_deficit(&bottom, LadderKind::B).abs() < 1e-12);
        assert!((commutator_deficit(&bottom, LadderKind::BPrime) - 31.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_deficit_frozen() {
        // (N+1) A^2 25^50/50! from a 50-digit mpmath evaluation
        let s = make_coherent(&CoherentParams::new(50, 25.0, 0.0)).unwrap();
        let d = commutator_deficit(&s, LadderKind::B);
        assert!((d - 1.837_109_931_667_504e-4).abs() < 1e-12);
        assert!((d - commutator_deficit_closed_form(&s, LadderKind::B)).abs() < 1e-12);
    }

    #[test]
    fn robustness_frozen_values() {
        // mpmath reference values for N = 25, |β|^2 = 12.5
        let want = [
            6.363_050_555_819_541e-4,
            1.908_915_166_745_862_3e-3,
            4.352_326_580_180_566e-3,
            8.848_203_580_900_42e-3,
            1.676_094_710_216_736_7e-2,
        ];
        for (n, w) in (1..=5).zip(want) {
            let v = robustness_loss(12.5, 25, n).unwrap();
            assert!((v - w).abs() < 1e-12 * w, "n={n}: {v}");
        }
        assert!(robustness_loss(12.5, 25, 5).unwrap() < 0.05);
        assert!(robustness_loss(12.5, 50, 5).unwrap() < robustness_loss(12.5, 25, 5).unwrap());
    }

    #[test]
    fn robustness_full_range_and_errors() {
        let v = robustness_loss(3.0, 10, 10).unwrap();
        let s = make_coherent(&CoherentParams::new(10, 3.0, 0.0)).unwrap();
        assert!((v - (1.0 - s.amplitude(0).norm_sqr())).abs() < 1e-14);
        assert!(v < 1.0);
        assert!(robustness_loss(3.0, 10, 0).is_err());
        assert!(robustness_loss(3.0, 10, 11).is_err());
        assert_eq!(robustness_loss(0.0, 10, 3).unwrap(), 0.0);
    }

    #[test]
    fn robustness_is_monotone() {
        let mut prev = 0.0;
        for n in 1..=40 {
            let v = robustness_loss(10.0, 40, n).unwrap();
            assert!(v >= prev);
            prev = v;
        }
        let mut prev = 0.0;
        for k in 0..=40 {
            let v = robustness_loss(k as f64, 40, 5).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn power_residual_support() {
        let p = CoherentParams::new(60, 15.0, 0.9);
        let s = make_coherent(&p).unwrap();
        let beta = Complex64::from_polar(p.beta_mod_sq.sqrt(), p.phi_beta);
        for times in 1..=6 {
            let v = apply_ladder_power(&s, LadderKind::B, false, times);
            let scale = beta.powu(times as u32);
            let res: Vec<Complex64> = s
                .amplitudes()
                .iter()
                .zip(&v)
                .map(|(c, x)| scale * c - x)
                .collect();
            for (l, r) in res.iter().enumerate() {
                if l < 60 - times + 1 {
                    assert!(r.norm() < 1e-12 * scale.norm(), "l={l}");
                }
            }
        }
    }

    #[test]
    fn tof_rotation() {
        let s = make_coherent(&CoherentParams::new(100, 20.0, FRAC_PI_2)).unwrap();
        assert_eq!(tof_rotate(&s, 0.0).amplitudes(), s.amplitudes());
        let turned = tof_rotate(&s, -FRAC_PI_2);
        let real = make_coherent(&CoherentParams::new(100, 20.0, 0.0)).unwrap();
        for (a, b) in turned.amplitudes().iter().zip(real.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        let full = tof_rotate(&s, 2.0 * PI);
        for (a, b) in full.amplitudes().iter().zip(s.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
        for i in 0..2 {
            let before = expectation(&s, &ModeMonomial::hopping(i, i)).re;
            let after = expectation(&tof_rotate(&s, 1.234), &ModeMonomial::hopping(i, i)).re;
            assert!((before - after).abs() < 1e-12);
        }
        assert!((inner(&turned, &turned).unwrap().re - 1.0).abs() < 1e-14);
    }
}
