//! `key = value` experiment configuration with `#` comments.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Weight,
    Exhaust,
    VerifyDlj,
    Factorize,
    Extremal,
    Convergence,
}

impl Scenario {
    pub fn as_str(self) -> &'static str {
        match self {
            Scenario::Weight => "weight",
            Scenario::Exhaust => "exhaust",
            Scenario::VerifyDlj => "verify-dlj",
            Scenario::Factorize => "factorize",
            Scenario::Extremal => "extremal",
            Scenario::Convergence => "convergence",
        }
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "weight" => Scenario::Weight,
            "exhaust" => Scenario::Exhaust,
            "verify-dlj" => Scenario::VerifyDlj,
            "factorize" => Scenario::Factorize,
            "extremal" => Scenario::Extremal,
            "convergence" => Scenario::Convergence,
            _ => return Err(format!("unknown scenario {s:?}")),
        })
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Named weights, each with a closed-form reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `u = log|z|`, `V ≡ 1`.
    GreenDisk,
    /// Biharmonic exhaustion with `ψ ≡ 0`, `M = 1`, so `V ≡ 1`.
    BiharmonicConst,
    /// `V = exp(2 − 2cos θ)`.
    ExpWeight,
    /// `V = a₀ + Σ aₘcos mθ + bₘsin mθ` from the `coefficients` key.
    TrigWeight,
    /// `φ = (1 + z)/2`, an unbounded weight handled through `φ` alone.
    PhiHalfplus,
}

impl Preset {
    pub fn as_str(self) -> &'static str {
        match self {
            Preset::GreenDisk => "green-disk",
            Preset::BiharmonicConst => "biharmonic-const",
            Preset::ExpWeight => "exp-weight",
            Preset::TrigWeight => "trig-weight",
            Preset::PhiHalfplus => "phi-halfplus",
        }
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "green-disk" => Preset::GreenDisk,
            "biharmonic-const" => Preset::BiharmonicConst,
            "exp-weight" => Preset::ExpWeight,
            "trig-weight" => Preset::TrigWeight,
            "phi-halfplus" => Preset::PhiHalfplus,
            _ => return Err(format!("unknown preset {s:?}")),
        })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub preset: Preset,
    pub n_angles: usize,
    pub n_radii: usize,
    /// Cosine/sine coefficients `a₀, a₁, b₁, a₂, b₂, …` for `trig-weight`.
    pub coefficients: Vec<f64>,
    pub p: f64,
    /// Polynomial degree of the extremal solvers.
    pub degree: usize,
    pub iterations: usize,
    pub output: PathBuf,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::Weight,
            preset: Preset::GreenDisk,
            n_angles: 256,
            n_radii: 128,
            coefficients: vec![2.0, 0.5],
            p: 2.0,
            degree: 32,
            iterations: 5000,
            output: PathBuf::from("."),
            seed: 0,
        }
    }
}

pub const MIN_GRID: usize = 8;
pub const MAX_GRID: usize = 4096;

/// `Ok` when `n` is a power of two in `[MIN_GRID, MAX_GRID]`.
pub fn check_grid(n: usize) -> std::result::Result<(), String> {
    if n.is_power_of_two() && (MIN_GRID..=MAX_GRID).contains(&n) {
        Ok(())
    } else {
        Err(format!(
            "{n} is not a power of two in [{MIN_GRID}, {MAX_GRID}]"
        ))
    }
}

fn check_p(p: f64) -> std::result::Result<(), String> {
    if (1.0..=16.0).contains(&p) {
        Ok(())
    } else {
        Err(format!("{p} is outside [1, 16]"))
    }
}

fn parse<T: FromStr>(value: &str) -> std::result::Result<T, String>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e: T::Err| format!("cannot parse {value:?}: {e}"))
}

fn parse_coefficients(value: &str) -> std::result::Result<Vec<f64>, String> {
    let coeffs = value
        .split(',')
        .map(|s| parse::<f64>(s.trim()))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err("coefficients must be finite".into());
    }
    Ok(coeffs)
}

/// Parses and validates a configuration, filling in defaults.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut degree_line = None;
    let mut angles_line = None;
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fail = |key: &str, message: String| CliError::Config {
            line,
            key: key.to_string(),
            message,
        };
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| fail(content, "expected `key = value`".into()))?;
        let outcome: std::result::Result<(), String> = match key {
            "scenario" => parse(value).map(|s| cfg.scenario = s),
            "preset" => parse(value).map(|s| cfg.preset = s),
            "n_angles" => parse(value)
                .and_then(|n| check_grid(n).map(|_| n))
                .map(|n| {
                    angles_line = Some(line);
                    cfg.n_angles = n
                }),
            "n_radii" => parse(value)
                .and_then(|n| check_grid(n).map(|_| n))
                .map(|n| cfg.n_radii = n),
            "coefficients" => parse_coefficients(value).map(|c| cfg.coefficients = c),
            "p" => parse(value)
                .and_then(|p| check_p(p).map(|_| p))
                .map(|p| cfg.p = p),
            "N" => parse(value).and_then(|n: usize| {
                if n == 0 {
                    Err("degree must be positive".into())
                } else {
                    degree_line = Some(line);
                    cfg.degree = n;
                    Ok(())
                }
            }),
            "iterations" => parse(value).and_then(|n: usize| {
                if n == 0 {
                    Err("iteration budget must be positive".into())
                } else {
                    cfg.iterations = n;
                    Ok(())
                }
            }),
            "output" => {
                cfg.output = PathBuf::from(value);
                Ok(())
            }
            "seed" => parse(value).map(|s| cfg.seed = s),
            _ => Err("unknown key".into()),
        };
        outcome.map_err(|message| fail(key, message))?;
    }
    if !cfg.degree_fits(cfg.n_angles) {
        return Err(CliError::Config {
            line: degree_line.or(angles_line).unwrap_or(1),
            key: "N".into(),
            message: format!(
                "degree {} needs at least {} angles, have {}",
                cfg.degree,
                2 * cfg.degree + 2,
                cfg.n_angles
            ),
        });
    }
    Ok(cfg)
}

impl ExperimentConfig {
    /// The extremal solvers need `2N + 2 ≤ n_angles`; other scenarios ignore `N`.
    fn degree_fits(&self, n_angles: usize) -> bool {
        self.scenario != Scenario::Extremal || 2 * self.degree + 2 <= n_angles
    }

    /// Applies `--grid N` to both grid sizes.
    pub fn with_grid(mut self, n: usize) -> Result<Self> {
        check_grid(n).map_err(|message| CliError::Override {
            key: "--grid".into(),
            message,
        })?;
        if !self.degree_fits(n) {
            return Err(CliError::Override {
                key: "--grid".into(),
                message: format!("{n} angles are too few for degree {}", self.degree),
            });
        }
        self.n_angles = n;
        self.n_radii = n;
        Ok(self)
    }

    /// Applies a seed given as text, e.g. from the environment.
    pub fn with_seed_text(mut self, text: &str) -> Result<Self> {
        self.seed = text.trim().parse().map_err(|e| CliError::Override {
            key: "HARDY_DISC_SEED".into(),
            message: format!("cannot parse {text:?}: {e}"),
        })?;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(
            (cfg.n_angles, cfg.n_radii, cfg.p, cfg.degree),
            (256, 128, 2.0, 32)
        );
    }

    #[test]
    fn preset_lookup() {
        let cfg = parse_config("scenario = weight\npreset = exp-weight").unwrap();
        assert_eq!(cfg.scenario, Scenario::Weight);
        assert_eq!(cfg.preset, Preset::ExpWeight);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "# header\n\n  scenario = extremal   # trailing\np = 1.5\nN = 8\nseed = 7\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.scenario, Scenario::Extremal);
        assert_eq!((cfg.p, cfg.degree, cfg.seed), (1.5, 8, 7));
    }

    #[test]
    fn grid_must_be_a_power_of_two() {
        let err = parse_config("n_angles = 100").unwrap_err().to_string();
        assert!(err.starts_with("line 1: n_angles:"), "{err}");
        assert!(parse_config("n_radii = 4").is_err());
        assert!(parse_config("n_radii = 8192").is_err());
        assert!(parse_config("n_radii = 4096").is_ok());
    }

    #[test]
    fn errors_carry_line_and_key() {
        let err = parse_config("p = 2\n\nwidth = 3").unwrap_err().to_string();
        assert_eq!(err, "line 3: width: unknown key");
        let err = parse_config("scenario = weight\np = 20")
            .unwrap_err()
            .to_string();
        assert!(err.starts_with("line 2: p:"), "{err}");
        assert!(parse_config("p = 0.5").is_err());
        assert!(parse_config("seed").is_err());
    }

    #[test]
    fn degree_must_fit_the_grid() {
        let err = parse_config("scenario = extremal\nn_angles = 32\nN = 16")
            .unwrap_err()
            .to_string();
        assert!(err.starts_with("line 3: N:"), "{err}");
        let err = parse_config("scenario = extremal\nn_angles = 32")
            .unwrap_err()
            .to_string();
        assert!(err.starts_with("line 2: N:"), "{err}");
        assert!(parse_config("scenario = extremal\nn_angles = 32\nN = 15").is_ok());
        assert!(parse_config("scenario = weight\nn_angles = 32").is_ok());
    }

    #[test]
    fn overrides() {
        let cfg = parse_config("N = 8").unwrap().with_grid(64).unwrap();
        assert_eq!((cfg.n_angles, cfg.n_radii), (64, 64));
        assert!(ExperimentConfig::default().with_grid(48).is_err());
        assert!(ExperimentConfig::default().with_grid(32).is_ok());
        let extremal = parse_config("scenario = extremal").unwrap();
        assert!(extremal.with_grid(32).is_err());
        assert_eq!(
            ExperimentConfig::default()
                .with_seed_text(" 42 ")
                .unwrap()
                .seed,
            42
        );
        assert!(ExperimentConfig::default().with_seed_text("x").is_err());
    }

    #[test]
    fn trig_coefficients() {
        let cfg = parse_config("preset = trig-weight\ncoefficients = 3, 0.5, -0.25").unwrap();
        assert_eq!(cfg.coefficients, vec![3.0, 0.5, -0.25]);
        assert!(parse_config("coefficients = 1, x").is_err());
    }
}
