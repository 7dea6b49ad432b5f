//! Run configuration for the command-line front end.
//!
//! Grammar of a config file: one `key = value` per line; `#` starts a comment;
//! blank lines are ignored; later assignments override earlier ones. Command-line
//! flags are applied as further assignments after the file.
//!
//! | key            | value                                              |
//! |----------------|----------------------------------------------------|
//! | `model`        | `box`, `radial_osc`, `edho`                        |
//! | `ell`          | angular momentum for `radial_osc` (default 1)      |
//! | `lambda`       | factorization energy                               |
//! | `k`            | differential-form constant `K`                     |
//! | `omega0`, `x0` | integral-form constant and base point              |
//! | `x`            | upper end for `integrate`                          |
//! | `eps`          | comma-separated state energies                     |
//! | `grid`         | `x_min,x_max,n_points`                             |
//! | `format`       | `csv` or `json`                                    |
//! | `out`          | output path prefix                                 |
//! | `seed`         | RNG seed for randomized checks (default 42)        |
//! | `force`        | `true`/`false`: write output for irregular `K`     |
//! | `n`            | state index for `norm`                             |
//! | `family`       | `u1` or `u2` for `integrate`                       |
//! | `tol_quad`, `tol_residual`, `tol_series`, `tol_check` | tolerance overrides |
//!
//! Real values accept plain numbers and multiples of π or π²: `pi`, `2pi`, `4pi^2`, `0.5*pi^2`.

use std::f64::consts::PI;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::rng::DEFAULT_SEED;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum ModelKind {
    Box,
    RadialOsc { ell: u32 },
    Edho,
}

impl ModelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ModelKind::Box => "box",
            ModelKind::RadialOsc { .. } => "radial_osc",
            ModelKind::Edho => "edho",
        }
    }

    pub fn default_lambda(&self) -> f64 {
        match self {
            ModelKind::Box => 4.0 * PI * PI,
            ModelKind::RadialOsc { .. } => 8.0,
            ModelKind::Edho => 1.0,
        }
    }

    pub fn default_grid(&self) -> GridSpec {
        match self {
            ModelKind::Box => GridSpec::new(0.0, 1.0, 501),
            ModelKind::RadialOsc { .. } => GridSpec::new(0.05, 6.0, 501),
            ModelKind::Edho => GridSpec::new(-6.0, 6.0, 501),
        }
        .expect("default grids are valid")
    }

    /// Closure of the domain, and whether each end may be sampled.
    fn sampling_window(&self) -> (f64, bool, f64, bool) {
        match self {
            ModelKind::Box => (0.0, true, 1.0, true),
            ModelKind::RadialOsc { .. } => (0.0, false, f64::INFINITY, false),
            ModelKind::Edho => (f64::NEG_INFINITY, false, f64::INFINITY, false),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyChoice {
    U1,
    U2,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, serde::Serialize)]
pub struct Tolerances {
    pub quad: Option<f64>,
    pub residual: Option<f64>,
    pub series: Option<f64>,
    /// Replaces every tolerance of the verification suite.
    pub check: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: Option<ModelKind>,
    pub lambda: Option<f64>,
    pub k: Option<f64>,
    pub omega0: Option<f64>,
    pub x0: Option<f64>,
    pub x: Option<f64>,
    pub epsilons: Option<Vec<f64>>,
    pub grid: Option<GridSpec>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub force: bool,
    pub n: Option<u32>,
    pub family: FamilyChoice,
    pub tolerances: Tolerances,
    ell: Option<u32>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: None,
            lambda: None,
            k: None,
            omega0: None,
            x0: None,
            x: None,
            epsilons: None,
            grid: None,
            format: None,
            out: None,
            seed: DEFAULT_SEED,
            force: false,
            n: None,
            family: FamilyChoice::U1,
            tolerances: Tolerances::default(),
            ell: None,
        }
    }
}

/// Parse a real number, allowing `pi` and `pi^2` multiples.
pub fn parse_real(text: &str) -> Result<f64> {
    let t = text.trim();
    let bad = || Error::InvalidInput(format!("not a real number: {text:?}"));
    let (coeff, factor) = if let Some(c) = t.strip_suffix("pi^2") {
        (c, PI * PI)
    } else if let Some(c) = t.strip_suffix("pi") {
        (c, PI)
    } else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let c = coeff.trim().trim_end_matches('*').trim();
    let c = match c {
        "" => 1.0,
        "-" => -1.0,
        _ => c.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(c * factor)
}

fn parse_bool(text: &str) -> Result<bool> {
    match text.trim() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::InvalidInput(format!("not a boolean: {other:?}"))),
    }
}

fn parse_grid(text: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = text.split([',', ':']).map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "grid must be x_min,x_max,n_points, got {text:?}"
        )));
    }
    let n = parts[2]
        .parse::<usize>()
        .map_err(|_| Error::InvalidInput(format!("bad grid point count {:?}", parts[2])))?;
    GridSpec::new(parse_real(parts[0])?, parse_real(parts[1])?, n)
}

fn parse_u32(key: &str, text: &str) -> Result<u32> {
    text.trim()
        .parse::<u32>()
        .map_err(|_| Error::InvalidInput(format!("{key} must be a non-negative integer, got {text:?}")))
}

impl RunConfig {
    /// Parse a config file body.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidInput(format!("line {}: expected key = value, got {raw:?}", i + 1))
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::InvalidInput(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    /// Apply one assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "model" => {
                self.model = Some(match value {
                    "box" => ModelKind::Box,
                    "radial_osc" | "radial" | "rosc" => ModelKind::RadialOsc {
                        ell: self.ell.unwrap_or(1),
                    },
                    "edho" => ModelKind::Edho,
                    other => return Err(Error::InvalidInput(format!("unknown model {other:?}"))),
                })
            }
            "ell" => {
                let ell = parse_u32(key, value)?;
                self.ell = Some(ell);
                if let Some(ModelKind::RadialOsc { .. }) = self.model {
                    self.model = Some(ModelKind::RadialOsc { ell });
                }
            }
            "lambda" => self.lambda = Some(parse_real(value)?),
            "k" => self.k = Some(parse_real(value)?),
            "omega0" => self.omega0 = Some(parse_real(value)?),
            "x0" => self.x0 = Some(parse_real(value)?),
            "x" => self.x = Some(parse_real(value)?),
            "eps" => {
                self.epsilons = Some(
                    value
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(parse_real)
                        .collect::<Result<_>>()?,
                )
            }
            "grid" => self.grid = Some(parse_grid(value)?),
            "format" => {
                self.format = Some(match value {
                    "csv" => OutputFormat::Csv,
                    "json" => OutputFormat::Json,
                    other => return Err(Error::InvalidInput(format!("unknown format {other:?}"))),
                })
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "seed" => {
                self.seed = value
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidInput(format!("bad seed {value:?}")))?
            }
            "force" => self.force = parse_bool(value)?,
            "n" => self.n = Some(parse_u32(key, value)?),
            "family" => {
                self.family = match value {
                    "u1" => FamilyChoice::U1,
                    "u2" => FamilyChoice::U2,
                    other => return Err(Error::InvalidInput(format!("unknown family {other:?}"))),
                }
            }
            "tol_quad" => self.tolerances.quad = Some(parse_real(value)?),
            "tol_residual" => self.tolerances.residual = Some(parse_real(value)?),
            "tol_series" => self.tolerances.series = Some(parse_real(value)?),
            "tol_check" => self.tolerances.check = Some(parse_real(value)?),
            other => return Err(Error::InvalidInput(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    pub fn model_or_box(&self) -> ModelKind {
        self.model.unwrap_or(ModelKind::Box)
    }

    pub fn lambda_or_default(&self) -> f64 {
        self.lambda.unwrap_or_else(|| self.model_or_box().default_lambda())
    }

    /// The configured grid, checked against the model's domain.
    pub fn grid_checked(&self) -> Result<GridSpec> {
        let model = self.model_or_box();
        let grid = self.grid.unwrap_or_else(|| model.default_grid());
        let (left, left_ok, right, right_ok) = model.sampling_window();
        let left_bad = if left_ok { grid.x_min < left } else { grid.x_min <= left };
        let right_bad = if right_ok { grid.x_max > right } else { grid.x_max >= right };
        if left_bad || right_bad {
            return Err(Error::InvalidInput(format!(
                "grid [{}, {}] leaves the {} domain",
                grid.x_min,
                grid.x_max,
                model.label()
            )));
        }
        Ok(grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_with_comments() {
        let cfg = RunConfig::from_text(
            "# figure parameters\nmodel = radial_osc\nell = 2\nlambda = 8 # factorization\nk = -0.01\n\ngrid = 0.05, 6, 101\neps = 7, 11\nforce = true\n",
        )
        .unwrap();
        assert_eq!(cfg.model, Some(ModelKind::RadialOsc { ell: 2 }));
        assert_eq!(cfg.lambda, Some(8.0));
        assert_eq!(cfg.k, Some(-0.01));
        assert_eq!(cfg.epsilons, Some(vec![7.0, 11.0]));
        assert_eq!(cfg.grid.unwrap().n_points, 101);
        assert!(cfg.force);
        assert_eq!(cfg.seed, 42);
    }

    #[test]
    fn pi_multiples() {
        assert_eq!(parse_real("4pi^2").unwrap(), 4.0 * PI * PI);
        assert_eq!(parse_real("pi").unwrap(), PI);
        assert_eq!(parse_real("0.5*pi^2").unwrap(), 0.5 * PI * PI);
        assert_eq!(parse_real("-pi").unwrap(), -PI);
        assert_eq!(parse_real(" 0.555 ").unwrap(), 0.555);
        assert!(parse_real("pie").is_err());
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(RunConfig::from_text("model box").is_err());
        assert!(RunConfig::from_text("colour = red").is_err());
        assert!(RunConfig::from_text("grid = 0,1").is_err());
        assert!(RunConfig::from_text("model = well").is_err());
    }

    #[test]
    fn grid_domain_checks() {
        let mut cfg = RunConfig::default();
        assert!(cfg.grid_checked().is_ok());
        cfg.set("grid", "0,1.5,10").unwrap();
        assert!(cfg.grid_checked().is_err());
        cfg.set("model", "radial_osc").unwrap();
        cfg.set("grid", "0,3,10").unwrap();
        assert!(cfg.grid_checked().is_err());
        cfg.set("grid", "0.1,3,10").unwrap();
        assert!(cfg.grid_checked().is_ok());
    }
}
