use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use num_complex::Complex64;
use thiserror::Error;

use super::config::{Command, Format, Params, RunConfig, StateKind};
use super::export::{to_csv, to_json, Body, Report, Table};
use crate::correlations::{
    delta_rho2_asymptotic, delta_rho2_exact, rho2_correlator, HarmonicOrbitals, Method, ZGrid,
};
use crate::error::Error;
use crate::fock::{fidelity, TwoModeState};
use crate::ladder::{
    apply_ladder, commutator_deficit, commutator_deficit_closed_form, robustness_loss, LadderKind,
};
use crate::observables::{
    antipodal_overlap, cat_size, coherent_phase_distribution, periodic_peak_fwhm,
    quadratures_asymptotic, quadratures_exact, spdm,
};
use crate::states::{
    make_cat, make_coherent, make_coherent_prime, make_gaussian_fragmented, make_phase_state,
    CatParams, CoherentParams, GaussianFragParams, PhaseStateParams,
};

pub const DEFAULT_N: usize = 100;
pub const DEFAULT_SAMPLES: usize = 720;
pub const DEFAULT_STEPS: usize = 5;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Invalid(_) | RunError::Model(_) => "invalid-parameter",
            RunError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Invalid(_) | RunError::Model(_) => 2,
            RunError::Io(_) => 3,
        }
    }
}

type Res<T> = Result<T, RunError>;

fn invalid(msg: impl Into<String>) -> RunError {
    RunError::Invalid(msg.into())
}

/// Names of the parameters that are set.
fn provided(p: &Params) -> Vec<&'static str> {
    let flags = [
        ("N", p.n_particles.is_some()),
        ("beta-sq", p.beta_sq.is_some()),
        ("sigma", p.sigma.is_some()),
        ("r", p.r.is_some()),
        ("theta", p.theta.is_some()),
        ("u", p.u.is_some()),
        ("theta-k", p.theta_k.is_some()),
        ("varphi", p.varphi.is_some()),
        ("phi", p.phi.is_some()),
        ("phi-beta", p.phi_beta.is_some()),
        ("grid-min", p.grid_min.is_some()),
        ("grid-max", p.grid_max.is_some()),
        ("grid-points", p.grid_points.is_some()),
        ("n", p.steps.is_some()),
        ("F", p.frag_degree.is_some()),
        ("samples", p.samples.is_some()),
        ("l0-list", p.l0_list.is_some()),
        ("state", p.state.is_some()),
        ("method", p.method.is_some()),
    ];
    flags
        .into_iter()
        .filter(|(_, set)| *set)
        .map(|(name, _)| name)
        .collect()
}

const GRID: [&str; 4] = ["grid-min", "grid-max", "grid-points", "varphi"];

fn state_params(kind: StateKind) -> &'static [&'static str] {
    match kind {
        StateKind::Cat => &["beta-sq", "phi-beta", "r", "theta"],
        StateKind::Gaussian => &["beta-sq", "sigma", "u", "theta-k", "phi"],
        StateKind::Coherent => &["beta-sq", "phi-beta"],
        StateKind::Phase => &["beta-sq", "phi"],
        StateKind::Fock => &["beta-sq"],
    }
}

fn accepted(config: &RunConfig) -> Vec<&'static str> {
    let p = &config.params;
    let mut names = vec!["N"];
    match config.command {
        Command::CoherentCheck => names.extend(["beta-sq", "phi-beta"]),
        Command::Quadratures => names.extend(["beta-sq", "phi-beta", "r", "theta"]),
        Command::Overlap => names.push("beta-sq"),
        Command::CatSize => names.push("F"),
        Command::Ddcorr if p.method == Some(Method::Asymptotic) => {
            names.extend(["beta-sq", "r", "state", "method"]);
            names.extend(GRID);
        }
        Command::Ddcorr | Command::Rho2 => {
            names.extend(state_params(p.state.unwrap_or_default()));
            names.extend(GRID);
            names.push("state");
            if config.command == Command::Ddcorr {
                names.push("method");
            }
        }
        Command::PhaseDist => names.extend(["beta-sq", "phi", "samples"]),
        Command::Robustness => names.extend(["beta-sq", "n"]),
        Command::FidelityScan => names.extend(["l0-list", "phi"]),
    }
    names
}

/// Rejects parameters that the command would silently ignore.
pub fn check_applicable(config: &RunConfig) -> Res<()> {
    let ok = accepted(config);
    if let Some(extra) = provided(&config.params)
        .into_iter()
        .find(|name| !ok.contains(name))
    {
        let target = match (config.command, config.params.state) {
            (Command::Ddcorr | Command::Rho2, s) => {
                format!(
                    "{} with state {}",
                    config.command,
                    s.unwrap_or_default().as_str()
                )
            }
            (c, _) => c.to_string(),
        };
        return Err(invalid(format!(
            "parameter `{extra}` does not apply to {target}"
        )));
    }
    if config.command == Command::Ddcorr
        && config.params.method == Some(Method::Asymptotic)
        && config.params.state.unwrap_or_default() != StateKind::Cat
    {
        return Err(invalid(
            "the asymptotic method is only defined for the cat state",
        ));
    }
    Ok(())
}

fn n_of(p: &Params) -> Res<usize> {
    match p.n_particles.unwrap_or(DEFAULT_N) {
        0 => Err(invalid("parameter `N` must be at least 1")),
        n => Ok(n),
    }
}

fn need(x: Option<f64>, name: &str) -> Res<f64> {
    x.ok_or_else(|| invalid(format!("missing parameter `{name}`")))
}

fn grid_of(p: &Params) -> Res<ZGrid> {
    let d = ZGrid::default();
    Ok(ZGrid::new(
        p.grid_min.unwrap_or(d.min),
        p.grid_max.unwrap_or(d.max),
        p.grid_points.unwrap_or(d.points),
    )?)
}

fn cat_params(p: &Params, n: usize) -> Res<CatParams> {
    let c = CatParams::new(
        n,
        need(p.beta_sq, "beta-sq")?,
        p.phi_beta.unwrap_or(FRAC_PI_2),
        p.r.unwrap_or(1.0),
        p.theta.unwrap_or(FRAC_PI_2),
    );
    c.validate()?;
    Ok(c)
}

/// Builds the state selected by `--state` from the shared parameters.
pub fn build_state(p: &Params) -> Res<TwoModeState> {
    let n = n_of(p)?;
    let state = match p.state.unwrap_or_default() {
        StateKind::Cat => make_cat(&cat_params(p, n)?)?,
        StateKind::Gaussian => {
            let mut g = GaussianFragParams::new(
                n,
                need(p.beta_sq, "beta-sq")?,
                p.u.unwrap_or(1.0),
                p.theta_k.unwrap_or(0.0),
            );
            if let Some(s) = p.sigma {
                g = g.with_sigma(s);
            }
            if let Some(phi0) = p.phi {
                g = g.with_phi0(phi0);
            }
            make_gaussian_fragmented(&g)?
        }
        StateKind::Coherent => make_coherent(&CoherentParams::new(
            n,
            need(p.beta_sq, "beta-sq")?,
            p.phi_beta.unwrap_or(FRAC_PI_2),
        ))?,
        StateKind::Phase => make_phase_state(&PhaseStateParams::new(
            n,
            need(p.beta_sq, "beta-sq")?,
            p.phi.unwrap_or(0.0),
        ))?,
        StateKind::Fock => {
            let l = need(p.beta_sq, "beta-sq")?;
            if l.fract() != 0.0 || l < 0.0 || l > n as f64 {
                return Err(invalid(format!(
                    "fock occupation {l} must be an integer in [0, N = {n}]"
                )));
            }
            TwoModeState::basis(n, l as usize)?
        }
    };
    Ok(state)
}

/// Fidelities of the phase-space state `|φ, N, l0>` with `|β>` (`|β|^2 = l0`) and with
/// `|β'>` (`|β'|^2 = N - l0`).
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityRow {
    pub l0: f64,
    pub fidelity_coherent: f64,
    pub fidelity_prime: f64,
    pub phase_probs: Vec<f64>,
    pub coherent_probs: Vec<f64>,
    pub prime_probs: Vec<f64>,
}

pub fn fidelity_scan(
    n_particles: usize,
    l0_list: &[f64],
    phi: f64,
) -> Result<Vec<FidelityRow>, Error> {
    let nf = n_particles as f64;
    l0_list
        .iter()
        .map(|&l0| {
            if !(l0 > 0.0 && l0 < nf) {
                return Err(Error::param(
                    "l0-list",
                    format!("{l0} must lie strictly inside (0, N = {n_particles})"),
                ));
            }
            let phase = make_phase_state(&PhaseStateParams::new(n_particles, l0, phi))?;
            let coherent = make_coherent(&CoherentParams::new(n_particles, l0, phi))?;
            // β'^{N-l} carries e^{-ilφ'}, so φ' = -φ aligns the phases up to a global factor
            let prime = make_coherent_prime(&CoherentParams::new(n_particles, nf - l0, -phi))?;
            Ok(FidelityRow {
                l0,
                fidelity_coherent: fidelity(&phase, &coherent)?,
                fidelity_prime: fidelity(&phase, &prime)?,
                phase_probs: phase.probabilities(),
                coherent_probs: coherent.probabilities(),
                prime_probs: prime.probabilities(),
            })
        })
        .collect()
}

fn one_row(name: &str, cols: &[&str], row: Vec<f64>) -> Body {
    let mut t = Table::new(name, cols);
    t.push(row);
    Body::Tables(vec![t])
}

/// Validates the configuration and computes the command's result.
pub fn execute(config: &RunConfig) -> Res<Report> {
    check_applicable(config)?;
    let p = &config.params;
    let n = n_of(p)?;
    let cmd = config.command.as_str();
    let report = match config.command {
        Command::CoherentCheck => {
            let cp = CoherentParams::new(
                n,
                need(p.beta_sq, "beta-sq")?,
                p.phi_beta.unwrap_or(FRAC_PI_2),
            );
            let s = make_coherent(&cp)?;
            let beta = Complex64::from_polar(cp.beta_mod_sq.sqrt(), cp.phi_beta);
            let bv = apply_ladder(&s, LadderKind::B, false);
            let residual: f64 = bv
                .iter()
                .zip(s.amplitudes())
                .map(|(x, c)| (beta * c - x).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let body = one_row(
                "coherent_check",
                &[
                    "deficit_b",
                    "deficit_b_closed_form",
                    "deficit_bprime",
                    "deficit_bprime_closed_form",
                    "eigen_residual",
                    "norm_error",
                ],
                vec![
                    commutator_deficit(&s, LadderKind::B),
                    commutator_deficit_closed_form(&s, LadderKind::B),
                    commutator_deficit(&s, LadderKind::BPrime),
                    commutator_deficit_closed_form(&s, LadderKind::BPrime),
                    residual,
                    (s.norm_sqr() - 1.0).abs(),
                ],
            );
            Report::new(cmd, body).meta("state", s.label())
        }
        Command::Quadratures => {
            let cp = cat_params(p, n)?;
            let s = make_cat(&cp)?;
            let q = quadratures_exact(&s);
            let a = quadratures_asymptotic(cp.coherent.beta_mod_sq, cp.coherent.phi_beta, cp.r);
            let body = one_row(
                "quadratures",
                &[
                    "var_plus_exact",
                    "var_minus_exact",
                    "var_plus_asymptotic",
                    "var_minus_asymptotic",
                    "mean_x_exact",
                    "mean_p_exact",
                    "mean_x_asymptotic",
                    "mean_p_asymptotic",
                    "frag_degree",
                ],
                vec![
                    q.var_plus,
                    q.var_minus,
                    a.var_plus,
                    a.var_minus,
                    q.mean_plus.re,
                    (-Complex64::i() * q.mean_minus).re,
                    a.mean_plus.re,
                    (-Complex64::i() * a.mean_minus).re,
                    spdm(&s).frag_degree,
                ],
            );
            Report::new(cmd, body).meta("state", s.label())
        }
        Command::Overlap => {
            let b2 = need(p.beta_sq, "beta-sq")?;
            let o = antipodal_overlap(b2, n)?;
            let rel = if o.asymptotic == 0.0 {
                f64::NAN
            } else {
                o.exact / o.asymptotic - 1.0
            };
            let mut r = Report::new(
                cmd,
                one_row(
                    "overlap",
                    &["exact", "asymptotic", "relative_error"],
                    vec![o.exact, o.asymptotic, rel],
                ),
            )
            .meta("N", n)
            .meta("beta_sq", super::export::json_f64(b2));
            r.value = Some(o.exact);
            r
        }
        Command::CatSize => {
            let f = need(p.frag_degree, "F")?;
            let m = cat_size(f, n)?;
            let mut r = Report::new(
                cmd,
                one_row("cat_size", &["F", "N", "size"], vec![f, n as f64, m]),
            );
            r.value = Some(m);
            r
        }
        Command::Ddcorr | Command::Rho2 => {
            let grid = grid_of(p)?;
            let varphi = p.varphi.unwrap_or(0.0);
            let orbitals = HarmonicOrbitals;
            let g = if config.command == Command::Ddcorr && p.method == Some(Method::Asymptotic) {
                let b2 = need(p.beta_sq, "beta-sq")?;
                CatParams::new(n, b2, FRAC_PI_2, p.r.unwrap_or(1.0), FRAC_PI_2).validate()?;
                delta_rho2_asymptotic(n, b2, p.r.unwrap_or(1.0), varphi, &orbitals, &grid)?
            } else {
                let s = build_state(p)?;
                if config.command == Command::Ddcorr {
                    delta_rho2_exact(&s, &orbitals, &grid, varphi)?
                } else {
                    rho2_correlator(&s, &orbitals, &grid, varphi)?
                }
            };
            Report::new(cmd, Body::Grid(g))
        }
        Command::PhaseDist => {
            let l0 = p.beta_sq.unwrap_or(n as f64 / 2.0);
            let phi = p.phi.unwrap_or(0.0);
            let samples = p.samples.unwrap_or(DEFAULT_SAMPLES);
            let d = coherent_phase_distribution(phi, n, l0, samples)?;
            let mut t = Table::new("phase_distribution", &["phi_beta", "abs_c"]);
            for (x, y) in &d {
                t.push(vec![*x, *y]);
            }
            let mut r = Report::new(cmd, Body::Tables(vec![t]))
                .meta("N", n)
                .meta("l0", super::export::json_f64(l0))
                .meta("phi", super::export::json_f64(phi));
            if let Some((peak, width)) = periodic_peak_fwhm(&d) {
                r = r
                    .meta("peak", super::export::json_f64(peak))
                    .meta("fwhm", super::export::json_f64(width));
            }
            r
        }
        Command::Robustness => {
            let b2 = need(p.beta_sq, "beta-sq")?;
            let steps = p.steps.unwrap_or(DEFAULT_STEPS);
            if steps == 0 || steps > n {
                return Err(invalid(format!(
                    "parameter `n` = {steps} must lie in [1, N = {n}]"
                )));
            }
            let mut t = Table::new("robustness", &["n", "loss"]);
            for k in 1..=steps {
                t.push(vec![k as f64, robustness_loss(b2, n, k)?]);
            }
            Report::new(cmd, Body::Tables(vec![t]))
                .meta("N", n)
                .meta("beta_sq", super::export::json_f64(b2))
        }
        Command::FidelityScan => {
            let list = p
                .l0_list
                .clone()
                .unwrap_or_else(|| (1..10).map(|k| k as f64 * n as f64 / 10.0).collect());
            if list.is_empty() {
                return Err(invalid("parameter `l0-list` is empty"));
            }
            let phi = p.phi.unwrap_or(0.0);
            let rows = fidelity_scan(n, &list, phi)?;
            let mut summary =
                Table::new("fidelity", &["l0", "fidelity_coherent", "fidelity_prime"]);
            let mut cols = vec!["l".to_string()];
            for row in &rows {
                summary.push(vec![row.l0, row.fidelity_coherent, row.fidelity_prime]);
                for family in ["phase", "coherent", "prime"] {
                    cols.push(format!("{family}_{}", row.l0));
                }
            }
            let mut dist = Table {
                name: "distribution".into(),
                columns: cols,
                rows: Vec::new(),
            };
            for l in 0..=n {
                let mut line = vec![l as f64];
                for row in &rows {
                    line.extend([
                        row.phase_probs[l],
                        row.coherent_probs[l],
                        row.prime_probs[l],
                    ]);
                }
                dist.push(line);
            }
            Report::new(cmd, Body::Tables(vec![summary, dist]))
                .meta("N", n)
                .meta("phi", super::export::json_f64(phi))
        }
    };
    Ok(report)
}

/// Computes the result and renders it in the configured format.
pub fn render(config: &RunConfig) -> Res<String> {
    let report = execute(config)?;
    Ok(match config.format {
        Format::Csv => to_csv(&report),
        Format::Json => to_json(&report),
    })
}

/// Renders and writes to the output path, or to standard output when none is set.
pub fn run(config: &RunConfig) -> Res<()> {
    let text = render(config)?;
    match &config.output_path {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                // a closed pipe (e.g. `| head`) ends the output, it is not a failure
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn cfg(command: Command, f: impl FnOnce(&mut Params)) -> RunConfig {
        let mut c = RunConfig::new(command);
        f(&mut c.params);
        c
    }

    #[test]
    fn cat_size_value() {
        let c = cfg(Command::CatSize, |p| p.frag_degree = Some(0.1));
        let r = execute(&c).unwrap();
        assert!((r.value.unwrap() - 0.999_909_2).abs() < 1e-6);
    }

    #[test]
    fn robustness_rows() {
        let c = cfg(Command::Robustness, |p| {
            p.n_particles = Some(25);
            p.beta_sq = Some(12.5);
        });
        let r = execute(&c).unwrap();
        assert_eq!(r.tables()[0].rows.len(), 5);
    }

    #[test]
    fn rejects_foreign_parameters() {
        let c = cfg(Command::Overlap, |p| {
            p.beta_sq = Some(5.0);
            p.sigma = Some(2.0);
        });
        let e = execute(&c).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("sigma"));
        let c = cfg(Command::Ddcorr, |p| {
            p.beta_sq = Some(5.0);
            p.state = Some(StateKind::Coherent);
            p.r = Some(1.0);
        });
        assert!(execute(&c).is_err());
    }

    #[test]
    fn missing_parameter() {
        let e = execute(&RunConfig::new(Command::Overlap)).unwrap_err();
        assert!(e.to_string().contains("beta-sq"));
    }

    #[test]
    fn asymptotic_needs_cat() {
        let c = cfg(Command::Ddcorr, |p| {
            p.beta_sq = Some(5.0);
            p.state = Some(StateKind::Phase);
            p.method = Some(Method::Asymptotic);
        });
        assert!(execute(&c).is_err());
    }

    #[test]
    fn ddcorr_grid_shape() {
        let c = cfg(Command::Ddcorr, |p| {
            p.beta_sq = Some(20.0);
            p.varphi = Some(-FRAC_PI_2);
            p.grid_points = Some(11);
        });
        let r = execute(&c).unwrap();
        let g = r.grid().unwrap();
        assert_eq!(g.values.len(), 11);
        assert!(g.symmetry_defect() < 1e-10);
    }

    #[test]
    fn fidelity_ordering() {
        let rows = fidelity_scan(100, &[10.0, 50.0, 90.0], 0.0).unwrap();
        assert!(
            rows[0].fidelity_coherent >= 0.99 && rows[0].fidelity_coherent > rows[0].fidelity_prime
        );
        assert!(
            rows[2].fidelity_prime >= 0.99 && rows[2].fidelity_prime > rows[2].fidelity_coherent
        );
        assert!((rows[1].fidelity_coherent - rows[1].fidelity_prime).abs() < 1e-10);
        assert!(fidelity_scan(100, &[0.0], 0.0).is_err());
        assert!(fidelity_scan(100, &[100.0], 0.0).is_err());
    }
}
