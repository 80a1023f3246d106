//! Browser bindings: a density-density correlation grid of the cat state, Fock-space
//! distributions of the phase-space state and its coherent approximations, and the
//! coherent-state phase distribution.
//!
//! Each binding is a thin wrapper over a plain function that returns `Result<_, String>`,
//! so the logic also runs (and is tested) off the browser.

use std::f64::consts::FRAC_PI_2;

use twomode::correlations::{delta_rho2_asymptotic, delta_rho2_exact, HarmonicOrbitals, ZGrid};
use twomode::fidelity;
use twomode::observables::{coherent_phase_distribution, periodic_peak_fwhm, spdm};
use twomode::states::{
    make_cat, make_coherent, make_coherent_prime, make_phase_state, CatParams, CoherentParams,
    PhaseStateParams,
};
use wasm_bindgen::prelude::*;

/// Grid of `Δρ2(z, z')` on `[-4, 4]^2`, row-major, followed by
/// `[points, max|Δρ2|, fragmentation degree, closed-form max]`.
pub fn correlation_grid(
    n: usize,
    beta_sq: f64,
    r: f64,
    theta: f64,
    varphi: f64,
    points: usize,
) -> Result<Vec<f64>, String> {
    let state =
        make_cat(&CatParams::new(n, beta_sq, FRAC_PI_2, r, theta)).map_err(|e| e.to_string())?;
    let grid = ZGrid::new(-4.0, 4.0, points).map_err(|e| e.to_string())?;
    let exact =
        delta_rho2_exact(&state, &HarmonicOrbitals, &grid, varphi).map_err(|e| e.to_string())?;
    let closed = delta_rho2_asymptotic(n, beta_sq, r, varphi, &HarmonicOrbitals, &grid)
        .map_err(|e| e.to_string())?;
    let mut out: Vec<f64> = exact.values.iter().flatten().copied().collect();
    out.extend([
        points as f64,
        exact.max_abs(),
        spdm(&state).frag_degree,
        closed.max_abs(),
    ]);
    Ok(out)
}

/// `|C_l|^2` for `l = 0..=N` of `|φ, N, l0>`, `|β>` with `|β|^2 = l0` and `|β'>` with
/// `|β'|^2 = N - l0`, concatenated, followed by the two fidelities.
pub fn fock_distributions(n: usize, l0: f64) -> Result<Vec<f64>, String> {
    let err = |e: twomode::Error| e.to_string();
    let phase = make_phase_state(&PhaseStateParams::new(n, l0, 0.0)).map_err(err)?;
    let coherent = make_coherent(&CoherentParams::new(n, l0, 0.0)).map_err(err)?;
    let prime = make_coherent_prime(&CoherentParams::new(n, n as f64 - l0, 0.0)).map_err(err)?;
    let mut out = phase.probabilities();
    out.extend(coherent.probabilities());
    out.extend(prime.probabilities());
    out.push(fidelity(&phase, &coherent).map_err(err)?);
    out.push(fidelity(&phase, &prime).map_err(err)?);
    Ok(out)
}

/// `|C_{φ_β}|` on `samples` points of `[0, 2π)`, followed by `[peak, FWHM]`.
pub fn phase_distribution(n: usize, l0: f64, phi: f64, samples: usize) -> Result<Vec<f64>, String> {
    let d = coherent_phase_distribution(phi, n, l0, samples).map_err(|e| e.to_string())?;
    let (peak, width) = periodic_peak_fwhm(&d).unwrap_or((f64::NAN, f64::NAN));
    let mut out: Vec<f64> = d.iter().map(|&(_, y)| y).collect();
    out.extend([peak, width]);
    Ok(out)
}

#[wasm_bindgen(js_name = correlationGrid)]
pub fn correlation_grid_js(
    n: usize,
    beta_sq: f64,
    r: f64,
    theta: f64,
    varphi: f64,
    points: usize,
) -> Result<Vec<f64>, JsError> {
    correlation_grid(n, beta_sq, r, theta, varphi, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = fockDistributions)]
pub fn fock_distributions_js(n: usize, l0: f64) -> Result<Vec<f64>, JsError> {
    fock_distributions(n, l0).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = phaseDistribution)]
pub fn phase_distribution_js(
    n: usize,
    l0: f64,
    phi: f64,
    samples: usize,
) -> Result<Vec<f64>, JsError> {
    phase_distribution(n, l0, phi, samples).map_err(|e| JsError::new(&e))
}
