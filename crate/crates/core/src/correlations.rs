//! Real-space orbitals, the one-body density and the two-point correlation grids
//! `Δρ2(z, z')` and `<ρ(z) ρ(z')>`.
//!
//! Positions are dimensionless (in units of the cloud extension), so grid values come
//! out in units of `N^2/Z^2` directly. Time of flight is applied as a rotation of the
//! state; the orbitals stay real throughout.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{Moments, TwoModeState};
use crate::ladder::tof_rotate;

pub const UNITS: &str = "N^2/Z^2";

/// Real single-particle orbitals for mode 0 (even) and mode 1 (odd).
pub trait OrbitalPair: Sync {
    fn name(&self) -> &'static str;
    fn even(&self, z: f64) -> f64;
    fn odd(&self, z: f64) -> f64;

    fn both(&self, z: f64) -> [f64; 2] {
        [self.even(z), self.odd(z)]
    }
}

/// Ground and first excited harmonic-oscillator eigenfunctions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HarmonicOrbitals;

impl OrbitalPair for HarmonicOrbitals {
    fn name(&self) -> &'static str {
        "harmonic"
    }

    fn even(&self, z: f64) -> f64 {
        PI.powf(-0.25) * (-0.5 * z * z).exp()
    }

    fn odd(&self, z: f64) -> f64 {
        PI.powf(-0.25) * std::f64::consts::SQRT_2 * z * (-0.5 * z * z).exp()
    }
}

/// Uniform sampling of `[min, max]` with `points` nodes, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for ZGrid {
    fn default() -> Self {
        Self {
            min: -4.0,
            max: 4.0,
            points: 101,
        }
    }
}

impl ZGrid {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        let g = Self { min, max, points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(Error::param("grid", "bounds must be finite"));
        }
        if self.min >= self.max {
            return Err(Error::param(
                "grid",
                format!("min {} must be below max {}", self.min, self.max),
            ));
        }
        if self.points < 2 {
            return Err(Error::param("grid-points", "need at least two points"));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.points - 1) as f64
    }

    /// Node `k` is `(min (n-1-k) + max k) / (n-1)`, so decimal bounds give decimal nodes
    /// and for `min = -max` node `k` is the exact negative of node `n-1-k`.
    pub fn samples(&self) -> Vec<f64> {
        let m = (self.points - 1) as f64;
        (0..self.points)
            .map(|k| {
                let k = k as f64;
                (self.min * (m - k) + self.max * k) / m
            })
            .collect()
    }
}

/// One-dimensional trapezoid rule on uniformly spaced samples.
pub fn trapezoid(values: &[f64], step: f64) -> f64 {
    match values {
        [] | [_] => 0.0,
        [first, inner @ .., last] => step * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Asymptotic,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `<ψ+ψ+ψψ> - ρ1 ρ1`
    DeltaRho2,
    /// `<ψ+ψ+ψψ>`
    Rho2,
}

impl Quantity {
    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::DeltaRho2 => "delta_rho2",
            Quantity::Rho2 => "rho2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub state: String,
    pub orbitals: String,
    pub varphi: f64,
    pub method: Method,
    pub quantity: Quantity,
    pub units: String,
    /// Largest `|Im|` discarded when the complex evaluation was reduced to real values.
    pub max_imag: f64,
}

/// A square grid `values[i][j] = f(z_i, z_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationGrid {
    pub z: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub meta: GridMeta,
}

impl CorrelationGrid {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Value and position of the entry with the largest modulus.
    pub fn peak(&self) -> (f64, f64, f64) {
        let mut best = (0.0f64, 0.0, 0.0);
        for (i, row) in self.values.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v.abs() > best.0.abs() {
                    best = (v, self.z[i], self.z[j]);
                }
            }
        }
        best
    }

    /// `max |v_ij - v_ji|`.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.len();
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..i {
                d = d.max((self.values[i][j] - self.values[j][i]).abs());
            }
        }
        d
    }

    /// `max |v(z, z') - v(-z, -z')|`. `None` unless the samples are mirror-symmetric.
    pub fn parity_defect(&self) -> Option<f64> {
        self.is_centered().then(|| self.mirror_defect(self))
    }

    /// `max |v(z, z') - other(-z, -z')|` on a shared mirror-symmetric grid.
    pub fn mirror_defect(&self, other: &CorrelationGrid) -> f64 {
        let n = self.len();
        let mut d: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                d = d.max((self.values[i][j] - other.values[n - 1 - i][n - 1 - j]).abs());
            }
        }
        d
    }

    /// `max |v_ij - other_ij|`.
    pub fn max_deviation(&self, other: &CorrelationGrid) -> f64 {
        self.values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn is_centered(&self) -> bool {
        let n = self.len();
        (0..n).all(|k| self.z[k] == -self.z[n - 1 - k])
    }

    /// Double trapezoid integral over the grid.
    pub fn integral(&self) -> f64 {
        let h = if self.len() > 1 {
            self.z[1] - self.z[0]
        } else {
            0.0
        };
        let rows: Vec<f64> = self.values.iter().map(|row| trapezoid(row, h)).collect();
        trapezoid(&rows, h)
    }
}

/// `ρ1(z) = Σ_ij φ_i(z) φ_j(z) <a_i+ a_j>`.
pub fn density(state: &TwoModeState, orbitals: &dyn OrbitalPair, z: f64) -> f64 {
    density_from(&Moments::of(state).quadratic, orbitals.both(z))
}

fn density_from(q: &[[Complex64; 2]; 2], f: [f64; 2]) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            acc += q[i][j] * (f[i] * f[j]);
        }
    }
    acc.re
}

/// `Σ_ijkm φ_i(z) φ_j(z') φ_k(z') φ_m(z) <a_i+ a_j+ a_k a_m>`.
fn pair_from(q: &[[[[Complex64; 2]; 2]; 2]; 2], f: [f64; 2], g: [f64; 2]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for m in 0..2 {
                    acc += q[i][j][k][m] * (f[i] * g[j] * g[k] * f[m]);
                }
            }
        }
    }
    acc
}

fn fill_rows<F>(n: usize, row: F) -> Vec<Vec<(f64, f64)>>
where
    F: Fn(usize) -> Vec<(f64, f64)> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(row).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(row).collect()
    }
}

fn exact_grid(
    state: &TwoModeState,
    orbitals: &dyn OrbitalPair,
    grid: &ZGrid,
    varphi: f64,
    quantity: Quantity,
) -> Result<CorrelationGrid> {
    grid.validate()?;
    let rotated = tof_rotate(state, varphi);
    let moments = Moments::of(&rotated);
    let z = grid.samples();
    let f: Vec<[f64; 2]> = z.iter().map(|&x| orbitals.both(x)).collect();
    let rho: Vec<f64> = f
        .iter()
        .map(|&fi| density_from(&moments.quadratic, fi))
        .collect();
    let rows = fill_rows(z.len(), |i| {
        (0..z.len())
            .map(|j| {
                let g2 = pair_from(&moments.quartic, f[i], f[j]);
                let v = match quantity {
                    Quantity::DeltaRho2 => g2.re - rho[i] * rho[j],
                    Quantity::Rho2 => g2.re,
                };
                (v, g2.im.abs())
            })
            .collect()
    });
    let max_imag = rows.iter().flatten().fold(0.0f64, |m, &(_, im)| m.max(im));
    let values = rows
        .into_iter()
        .map(|r| r.into_iter().map(|(v, _)| v).collect())
        .collect();
    Ok(CorrelationGrid {
        z,
        values,
        meta: GridMeta {
            state: state.label().to_string(),
            orbitals: orbitals.name().to_string(),
            varphi,
            method: Method::Exact,
            quantity,
            units: UNITS.to_string(),
            max_imag,
        },
    })
}

/// `Δρ2(z, z') = <ψ+(z) ψ+(z') ψ(z') ψ(z)> - ρ1(z) ρ1(z')` after rotating the state by `varphi`.
pub fn delta_rho2_exact(
    state: &TwoModeState,
    orbitals: &dyn OrbitalPair,
    grid: &ZGrid,
    varphi: f64,
) -> Result<CorrelationGrid> {
    exact_grid(state, orbitals, grid, varphi, Quantity::DeltaRho2)
}

/// `<ρ(z) ρ(z')>`, approximated by the normal-ordered `<ψ+(z) ψ+(z') ψ(z') ψ(z)>`.
pub fn rho2_correlator(
    state: &TwoModeState,
    orbitals: &dyn OrbitalPair,
    grid: &ZGrid,
    varphi: f64,
) -> Result<CorrelationGrid> {
    exact_grid(state, orbitals, grid, varphi, Quantity::Rho2)
}

/// Leading large-`N` form
/// `4 ψ0ψ1(z) ψ0ψ1(z') (N - l0) l0 sin^2 φ  4r^2/(1+r^2)^2`.
pub fn delta_rho2_asymptotic(
    n_particles: usize,
    l0: f64,
    r: f64,
    varphi: f64,
    orbitals: &dyn OrbitalPair,
    grid: &ZGrid,
) -> Result<CorrelationGrid> {
    grid.validate()?;
    let nf = n_particles as f64;
    if n_particles == 0 {
        return Err(Error::param("N", "need at least one particle"));
    }
    if !(l0.is_finite() && l0 >= 0.0 && l0 <= nf) {
        return Err(Error::param(
            "l0",
            format!("{l0} must lie in [0, N = {n_particles}]"),
        ));
    }
    if r.is_nan() || r < 0.0 {
        return Err(Error::param("r", format!("{r} must be non-negative")));
    }
    if !varphi.is_finite() {
        return Err(Error::param("varphi", "must be finite"));
    }
    let weight = if r.is_infinite() {
        0.0
    } else {
        4.0 * r * r / (1.0 + r * r).powi(2)
    };
    let amplitude = 4.0 * (nf - l0) * l0 * varphi.sin().powi(2) * weight;
    let z = grid.samples();
    let prod: Vec<f64> = z
        .iter()
        .map(|&x| orbitals.even(x) * orbitals.odd(x))
        .collect();
    let values = prod
        .iter()
        .map(|&a| prod.iter().map(|&b| amplitude * a * b).collect())
        .collect();
    let r_text = if r.is_infinite() {
        "inf".to_string()
    } else {
        format!("{r:?}")
    };
    Ok(CorrelationGrid {
        z,
        values,
        meta: GridMeta {
            state: format!("asymptotic cat N={n_particles} l0={l0:?} r={r_text}"),
            orbitals: orbitals.name().to_string(),
            varphi,
            method: Method::Asymptotic,
            quantity: Quantity::DeltaRho2,
            units: UNITS.to_string(),
            max_imag: 0.0,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_cat, CatParams};
    use std::f64::consts::{FRAC_PI_2, SQRT_2};

    fn cat(b2: f64, r: f64, theta: f64) -> TwoModeState {
        make_cat(&CatParams::new(100, b2, FRAC_PI_2, r, theta)).unwrap()
    }

    #[test]
    fn orbital_parity_and_norm() {
        let o = HarmonicOrbitals;
        let g = ZGrid::new(-8.0, 8.0, 1601).unwrap();
        let z = g.samples();
        for &x in &z {
            assert!((o.even(x) - o.even(-x)).abs() < 1e-12);
            assert!((o.odd(x) + o.odd(-x)).abs() < 1e-12);
        }
        let e: Vec<f64> = z.iter().map(|&x| o.even(x).powi(2)).collect();
        let d: Vec<f64> = z.iter().map(|&x| o.odd(x).powi(2)).collect();
        let c: Vec<f64> = z.iter().map(|&x| o.odd(x) * o.even(x)).collect();
        assert!((trapezoid(&e, g.step()) - 1.0).abs() < 1e-6);
        assert!((trapezoid(&d, g.step()) - 1.0).abs() < 1e-6);
        assert!(trapezoid(&c, g.step()).abs() < 1e-12);
    }

    #[test]
    fn grid_nodes_are_mirror_exact() {
        for points in [3, 11, 101, 201] {
            let z = ZGrid::new(-4.0, 4.0, points).unwrap().samples();
            assert_eq!(z[0], -4.0);
            assert_eq!(z[points - 1], 4.0);
            assert_eq!(z[points / 2], 0.0);
            assert!((0..points).all(|k| z[k] == -z[points - 1 - k]));
            assert!(z.windows(2).all(|w| w[1] > w[0]));
        }
        assert!(ZGrid::new(1.0, 1.0, 5).is_err());
        assert!(ZGrid::new(-1.0, 1.0, 1).is_err());
    }

    #[test]
    fn density_of_fock_states() {
        let o = HarmonicOrbitals;
        let s = TwoModeState::basis(40, 0).unwrap();
        assert!((density(&s, &o, 0.0) - 40.0 / PI.sqrt()).abs() < 1e-12);
        assert!((density(&s, &o, 1.3) - 40.0 * o.even(1.3).powi(2)).abs() < 1e-12);
        let s = TwoModeState::basis(40, 40).unwrap();
        assert_eq!(density(&s, &o, 0.0), 0.0);
    }

    #[test]
    fn density_integrates_to_n() {
        let o = HarmonicOrbitals;
        let s = cat(20.0, 1.0, FRAC_PI_2);
        let g = ZGrid::default();
        let rho: Vec<f64> = g.samples().iter().map(|&z| density(&s, &o, z)).collect();
        assert!((trapezoid(&rho, g.step()) - 100.0).abs() < 0.1);
    }

    #[test]
    fn single_mode_fock_correlation() {
        // N(N-1) - N^2 = -N: the normal-ordered correlator of |N,0> is not zero
        let o = HarmonicOrbitals;
        let g = ZGrid::new(-3.0, 3.0, 31).unwrap();
        let grid = delta_rho2_exact(&TwoModeState::basis(50, 0).unwrap(), &o, &g, 0.0).unwrap();
        for (i, &z) in grid.z.iter().enumerate() {
            for (j, &w) in grid.z.iter().enumerate() {
                let want = -50.0 * o.even(z).powi(2) * o.even(w).powi(2);
                assert!((grid.values[i][j] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn asymptotic_limits_and_value() {
        let o = HarmonicOrbitals;
        let g = ZGrid::default();
        assert_eq!(
            delta_rho2_asymptotic(100, 20.0, 1.0, 0.0, &o, &g)
                .unwrap()
                .max_abs(),
            0.0
        );
        assert_eq!(
            delta_rho2_asymptotic(100, 20.0, 0.0, -FRAC_PI_2, &o, &g)
                .unwrap()
                .max_abs(),
            0.0
        );
        assert_eq!(
            delta_rho2_asymptotic(100, 20.0, f64::INFINITY, -FRAC_PI_2, &o, &g)
                .unwrap()
                .max_abs(),
            0.0
        );
        let p = ZGrid::new(-1.0 / SQRT_2, 1.0 / SQRT_2, 2).unwrap();
        let grid = delta_rho2_asymptotic(100, 20.0, 1.0, -FRAC_PI_2, &o, &p).unwrap();
        let prod = (-0.5f64).exp() / PI.sqrt();
        assert!((grid.values[1][1] - 4.0 * prod * prod * 1600.0).abs() < 1e-10);
        assert!(delta_rho2_asymptotic(100, 120.0, 1.0, 0.0, &o, &g).is_err());
    }

    #[test]
    fn exact_grid_invariants() {
        let o = HarmonicOrbitals;
        let g = ZGrid::new(-4.0, 4.0, 41).unwrap();
        let grid = delta_rho2_exact(&cat(20.0, 1.0, FRAC_PI_2), &o, &g, -FRAC_PI_2).unwrap();
        assert!(grid.symmetry_defect() < 1e-10);
        assert!(grid.parity_defect().unwrap() < 1e-10);
        assert!(grid.meta.max_imag < 1e-10);
        assert_eq!(grid.meta.units, UNITS);
    }

    #[test]
    fn after_tof_peak_near_closed_form() {
        let o = HarmonicOrbitals;
        let g = ZGrid::default();
        let exact = delta_rho2_exact(&cat(20.0, 1.0, FRAC_PI_2), &o, &g, -FRAC_PI_2).unwrap();
        let asym = delta_rho2_asymptotic(100, 20.0, 1.0, -FRAC_PI_2, &o, &g).unwrap();
        assert!((exact.max_abs() / asym.max_abs() - 1.0).abs() < 0.1);
    }

    #[test]
    fn rho2_integrates_to_pair_number() {
        let o = HarmonicOrbitals;
        let grid = rho2_correlator(&cat(20.0, 1.0, FRAC_PI_2), &o, &ZGrid::default(), 0.0).unwrap();
        assert!((grid.integral() / 9900.0 - 1.0).abs() < 0.01);
    }

    #[test]
    fn json_round_trip() {
        let o = HarmonicOrbitals;
        let grid = delta_rho2_exact(
            &cat(5.0, 1.0, FRAC_PI_2),
            &o,
            &ZGrid::new(-2.0, 2.0, 9).unwrap(),
            0.3,
        )
        .unwrap();
        let text = serde_json::to_string(&grid).unwrap();
        let back: CorrelationGrid = serde_json::from_str(&text).unwrap();
        assert_eq!(back, grid);
    }
}
