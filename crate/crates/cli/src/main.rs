use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use twomode::correlations::Method;
use twomode::io::{parse_angle, parse_ratio, run, Command, Format, Params, RunConfig, StateKind};

/// Two-mode fragmented condensates: cat-state observables and correlation grids.
///
/// Angles are in radians; `pi` literals such as `pi/2`, `-pi/2` or `3*pi/4` are accepted.
#[derive(Debug, Parser)]
#[command(name = "twomode", version)]
struct Cli {
    /// coherent-check, quadratures, overlap, cat-size, ddcorr, rho2, phase-dist, robustness or fidelity-scan
    #[arg(long, value_parser = |s: &str| s.parse::<Command>())]
    command: Command,

    /// Particle number (default 100)
    #[arg(long = "N")]
    n_particles: Option<usize>,

    /// |β|^2, or l0 for phase and Gaussian states (occupation l for fock)
    #[arg(long = "beta-sq", visible_alias = "l0", allow_hyphen_values = true)]
    beta_sq: Option<f64>,

    /// Gaussian width (default sqrt(l0 (1 - l0/N)))
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,

    /// Cat weight ratio r; `inf` selects |-β>
    #[arg(long, value_parser = parse_ratio, allow_hyphen_values = true)]
    r: Option<f64>,

    /// Cat relative phase θ (default pi/2)
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    theta: Option<f64>,

    /// Odd-sector weight |u| of the Gaussian state (default 1)
    #[arg(long, allow_hyphen_values = true)]
    u: Option<f64>,

    /// Odd-sector phase θ_K (default 0)
    #[arg(long = "theta-k", value_parser = parse_angle, allow_hyphen_values = true)]
    theta_k: Option<f64>,

    /// Time-of-flight phase rotation (default 0; -pi/2 is after expansion)
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    varphi: Option<f64>,

    /// Phase φ of phase-space states, or φ_0 of the Gaussian state
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    phi: Option<f64>,

    /// Phase of β (default pi/2)
    #[arg(long = "phi-beta", value_parser = parse_angle, allow_hyphen_values = true)]
    phi_beta: Option<f64>,

    #[arg(long = "grid-min", allow_hyphen_values = true)]
    grid_min: Option<f64>,

    #[arg(long = "grid-max", allow_hyphen_values = true)]
    grid_max: Option<f64>,

    /// Grid points per axis (default 101 on [-4, 4])
    #[arg(long = "grid-points")]
    grid_points: Option<usize>,

    /// Number of ladder applications for robustness (default 5)
    #[arg(long = "n")]
    steps: Option<usize>,

    /// Fragmentation degree for cat-size
    #[arg(long = "F", allow_hyphen_values = true)]
    frag_degree: Option<f64>,

    /// Samples on [0, 2π) for phase-dist (default 720)
    #[arg(long)]
    samples: Option<usize>,

    /// Comma-separated l0 values for fidelity-scan
    #[arg(long = "l0-list", value_delimiter = ',', num_args = 1)]
    l0_list: Option<Vec<f64>>,

    /// cat, gaussian, coherent, phase or fock (default cat)
    #[arg(long, value_parser = |s: &str| s.parse::<StateKind>())]
    state: Option<StateKind>,

    /// exact or asymptotic (default exact)
    #[arg(long, value_parser = |s: &str| s.parse::<Method>())]
    method: Option<Method>,

    /// csv or json
    #[arg(long, default_value = "csv", value_parser = |s: &str| s.parse::<Format>())]
    format: Format,

    /// Output file; standard output when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Cli {
    fn into_config(self) -> RunConfig {
        RunConfig {
            command: self.command,
            params: Params {
                n_particles: self.n_particles,
                beta_sq: self.beta_sq,
                sigma: self.sigma,
                r: self.r,
                theta: self.theta,
                u: self.u,
                theta_k: self.theta_k,
                varphi: self.varphi,
                phi: self.phi,
                phi_beta: self.phi_beta,
                grid_min: self.grid_min,
                grid_max: self.grid_max,
                grid_points: self.grid_points,
                steps: self.steps,
                frag_degree: self.frag_degree,
                samples: self.samples,
                l0_list: self.l0_list,
                state: self.state,
                method: self.method,
            },
            format: self.format,
            output_path: self.out,
        }
    }
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let one_line = message.split_whitespace().collect::<Vec<_>>().join(" ");
    eprintln!("error: {kind}: {one_line}");
    ExitCode::from(code)
}

/// First paragraph of a clap error without its `error: ` prefix; usage and tips are dropped.
fn clap_summary(err: &clap::Error) -> String {
    let text = err.render().to_string();
    let head = text.split("\n\n").next().unwrap_or_default();
    head.strip_prefix("error: ").unwrap_or(head).to_string()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) =>
        {
            let _ = err.print();
            return ExitCode::SUCCESS;
        }
        Err(err) => return fail("invalid-parameter", &clap_summary(&err), 2),
    };
    match run(&cli.into_config()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => fail(err.kind(), &err.to_string(), err.exit_code() as u8),
    }
}
