use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::correlations::Method;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CoherentCheck,
    Quadratures,
    Overlap,
    CatSize,
    Ddcorr,
    Rho2,
    PhaseDist,
    Robustness,
    FidelityScan,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::CoherentCheck,
        Command::Quadratures,
        Command::Overlap,
        Command::CatSize,
        Command::Ddcorr,
        Command::Rho2,
        Command::PhaseDist,
        Command::Robustness,
        Command::FidelityScan,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Command::CoherentCheck => "coherent-check",
            Command::Quadratures => "quadratures",
            Command::Overlap => "overlap",
            Command::CatSize => "cat-size",
            Command::Ddcorr => "ddcorr",
            Command::Rho2 => "rho2",
            Command::PhaseDist => "phase-dist",
            Command::Robustness => "robustness",
            Command::FidelityScan => "fidelity-scan",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    #[default]
    Cat,
    Gaussian,
    Coherent,
    Phase,
    Fock,
}

impl StateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StateKind::Cat => "cat",
            StateKind::Gaussian => "gaussian",
            StateKind::Coherent => "coherent",
            StateKind::Phase => "phase",
            StateKind::Fock => "fock",
        }
    }
}

impl FromStr for StateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cat" => Ok(StateKind::Cat),
            "gaussian" => Ok(StateKind::Gaussian),
            "coherent" => Ok(StateKind::Coherent),
            "phase" => Ok(StateKind::Phase),
            "fock" => Ok(StateKind::Fock),
            _ => Err(format!(
                "unknown state `{s}` (expected cat, gaussian, coherent, phase or fock)"
            )),
        }
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Method::Exact),
            "asymptotic" => Ok(Method::Asymptotic),
            _ => Err(format!(
                "unknown method `{s}` (expected exact or asymptotic)"
            )),
        }
    }
}

/// Parameters shared by all commands. Unset values fall back to per-command defaults
/// or are reported as missing.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub n_particles: Option<usize>,
    /// `|β|^2`, also used as `l0`.
    pub beta_sq: Option<f64>,
    pub sigma: Option<f64>,
    pub r: Option<f64>,
    pub theta: Option<f64>,
    pub u: Option<f64>,
    pub theta_k: Option<f64>,
    pub varphi: Option<f64>,
    pub phi: Option<f64>,
    pub phi_beta: Option<f64>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_points: Option<usize>,
    /// Number of ladder applications for `robustness`.
    pub steps: Option<usize>,
    pub frag_degree: Option<f64>,
    pub samples: Option<usize>,
    pub l0_list: Option<Vec<f64>>,
    pub state: Option<StateKind>,
    pub method: Option<Method>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
    pub format: Format,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            params: Params::default(),
            format: Format::Csv,
            output_path: None,
        }
    }
}

/// Parses an angle in radians. Besides plain decimals, `pi` literals of the form
/// `[-][k[*]]pi[/d]` are accepted, e.g. `pi/2`, `-pi/2`, `3pi/2`, `3*pi/4`, `2pi`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s = text.trim();
    let bad = || format!("cannot parse angle `{text}`");
    let Some(pos) = s.find("pi") else {
        let x: f64 = s.parse().map_err(|_| bad())?;
        return if x.is_finite() { Ok(x) } else { Err(bad()) };
    };
    let (head, tail) = (&s[..pos], &s[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let coef = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let denom = match tail {
        "" => 1.0,
        t => t
            .strip_prefix('/')
            .ok_or_else(bad)?
            .parse::<f64>()
            .map_err(|_| bad())?,
    };
    let value = coef * PI / denom;
    if !value.is_finite() || denom == 0.0 {
        return Err(bad());
    }
    Ok(value)
}

/// Parses a non-negative weight ratio; `inf` selects the pure `|-β>` branch.
pub fn parse_ratio(text: &str) -> Result<f64, String> {
    let x: f64 = match text.trim() {
        "inf" | "infinity" | "+inf" => f64::INFINITY,
        t => t
            .parse()
            .map_err(|_| format!("cannot parse ratio `{text}`"))?,
    };
    if x.is_nan() || x < 0.0 {
        return Err(format!("ratio `{text}` must be non-negative"));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi/2").unwrap(), PI / 2.0);
        assert_eq!(parse_angle("-pi/2").unwrap(), -PI / 2.0);
        assert_eq!(parse_angle("3pi/2").unwrap(), 3.0 * PI / 2.0);
        assert_eq!(parse_angle("3*pi/2").unwrap(), 3.0 * PI / 2.0);
        assert_eq!(parse_angle("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert_eq!(parse_angle(" -1.5 ").unwrap(), -1.5);
        for bad in [
            "", "pie", "pi/", "pi/0", "x*pi", "pi*2", "nan", "inf", "pi/2/3",
        ] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn ratios() {
        assert_eq!(parse_ratio("inf").unwrap(), f64::INFINITY);
        assert_eq!(parse_ratio("0").unwrap(), 0.0);
        assert!(parse_ratio("-1").is_err());
        assert!(parse_ratio("nan").is_err());
    }

    #[test]
    fn command_names_round_trip() {
        for c in Command::ALL {
            assert_eq!(c.as_str().parse::<Command>().unwrap(), c);
        }
        assert!("plot".parse::<Command>().is_err());
    }
}
