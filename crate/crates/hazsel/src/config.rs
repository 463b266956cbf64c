//! Experiment configuration.
//!
//! A config file is plain text, one `key = value` per line, `#` starts a
//! comment. Recognised keys:
//!
//! | key          | value                                                    |
//! |--------------|----------------------------------------------------------|
//! | `n`          | observations per population (≥ 2)                        |
//! | `k`          | number of populations (≥ 2)                              |
//! | `reps`       | Monte Carlo replications (≥ 1)                           |
//! | `seed`       | RNG seed                                                 |
//! | `format`     | `csv`, `json` or `markdown`                              |
//! | `estimators` | comma list of `ML`, `N1`, `N2`, `N2I`, `MLI`, `inv:<c>`, `imp:<c>:<alpha>:<h>` |
//! | `scales`     | `;`-separated scale vectors, components comma-separated  |
//! | `alpha`      | α override for `N2I` / `MLI`                             |
//! | `h_count`    | h override for `N2I` / `MLI`                             |
//!
//! Values are layered defaults < file < command-line flags.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use hazsel_core::{EstimatorSpec, NamedEstimator, PopulationSet};
use serde_json::{json, Value};

use crate::error::{CliError, Result};

pub const DEFAULT_N: u32 = 5;
pub const DEFAULT_K: usize = 2;
pub const DEFAULT_REPLICATIONS: u64 = 5000;
pub const DEFAULT_SEED: u64 = 1;

/// Scale values `σ_1^{-1}` of the default two-population grid (outer loop).
pub const GRID_SCALE_1: [f64; 5] = [0.3, 0.5, 0.7, 0.9, 1.0];
/// Scale values `σ_2^{-1}` of the default two-population grid (inner loop).
pub const GRID_SCALE_2: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "markdown" | "md" => Ok(Self::Markdown),
            other => Err(CliError::invalid("format", format!("unknown format {other:?} (csv, json, markdown)"))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
            Self::Markdown => "markdown",
        })
    }
}

/// An estimator as written in a config: a table name or an explicit spec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorChoice {
    Named(NamedEstimator),
    Explicit(EstimatorSpec),
}

impl EstimatorChoice {
    pub fn label(&self) -> String {
        match self {
            Self::Named(e) => e.name().to_string(),
            Self::Explicit(s) => s.to_string(),
        }
    }

    pub fn resolve(&self, n: u32, k: usize, alpha: Option<f64>, h_count: Option<usize>) -> hazsel_core::Result<EstimatorSpec> {
        match self {
            Self::Named(e) => e.spec_with(n, k, alpha, h_count),
            Self::Explicit(s) => {
                s.validate(n, k)?;
                Ok(*s)
            }
        }
    }
}

impl FromStr for EstimatorChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |what: &str| CliError::invalid("estimators", format!("{what} in {s:?}"));
        let num = |part: &str| part.trim().parse::<f64>().map_err(|_| bad("bad number"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            [tag, c] if tag.eq_ignore_ascii_case("inv") => Ok(Self::Explicit(EstimatorSpec::scale_inverse(num(c)?))),
            [tag, c, alpha, h] if tag.eq_ignore_ascii_case("imp") => {
                let h = h.trim().parse::<usize>().map_err(|_| bad("bad h"))?;
                Ok(Self::Explicit(EstimatorSpec::improved(num(c)?, num(alpha)?, h)))
            }
            [name] => name
                .parse::<NamedEstimator>()
                .map(Self::Named)
                .map_err(|_| bad("unknown estimator (ML, N1, N2, N2I, MLI, inv:<c>, imp:<c>:<alpha>:<h>)")),
            _ => Err(bad("malformed estimator")),
        }
    }
}

/// One layer of settings; unset fields fall through to the layer below.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    pub n: Option<u32>,
    pub k: Option<usize>,
    pub replications: Option<u64>,
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
    pub estimators: Option<Vec<EstimatorChoice>>,
    pub scales: Option<Vec<Vec<f64>>>,
    pub alpha: Option<f64>,
    pub h_count: Option<usize>,
}

fn parse_int<T: FromStr>(field: &'static str, v: &str) -> Result<T> {
    v.parse().map_err(|_| CliError::invalid(field, format!("expected an integer, got {v:?}")))
}

fn parse_float(field: &'static str, v: &str) -> Result<f64> {
    v.parse().map_err(|_| CliError::invalid(field, format!("expected a number, got {v:?}")))
}

/// Parses `"0.3,0.2"` into a scale vector.
pub fn parse_scale_vector(v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|x| parse_float("scales", x.trim())).collect()
}

pub fn parse_estimator_list(v: &str) -> Result<Vec<EstimatorChoice>> {
    v.split(',').filter(|x| !x.trim().is_empty()).map(str::parse).collect()
}

impl ConfigLayer {
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut layer = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |message: String| CliError::Parse {
                path: origin.to_string(),
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected `key = value`, got {line:?}")))?;
            let value = value.trim();
            layer.set(key.trim(), value).map_err(|e| at(e.to_string()))?;
        }
        Ok(layer)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?, &path.display().to_string())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "n" => self.n = Some(parse_int("n", value)?),
            "k" => self.k = Some(parse_int("k", value)?),
            "reps" | "replications" => self.replications = Some(parse_int("reps", value)?),
            "seed" => self.seed = Some(parse_int("seed", value)?),
            "format" => self.format = Some(value.parse()?),
            "estimators" => self.estimators = Some(parse_estimator_list(value)?),
            "scales" => {
                self.scales = Some(
                    value
                        .split(';')
                        .filter(|v| !v.trim().is_empty())
                        .map(parse_scale_vector)
                        .collect::<Result<_>>()?,
                )
            }
            "alpha" => self.alpha = Some(parse_float("alpha", value)?),
            "h_count" => self.h_count = Some(parse_int("h_count", value)?),
            other => return Err(CliError::invalid("config", format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// `self` with every field set in `top` replaced.
    pub fn overlay(self, top: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            n: top.n.or(self.n),
            k: top.k.or(self.k),
            replications: top.replications.or(self.replications),
            seed: top.seed.or(self.seed),
            format: top.format.or(self.format),
            estimators: top.estimators.or(self.estimators),
            scales: top.scales.or(self.scales),
            alpha: top.alpha.or(self.alpha),
            h_count: top.h_count.or(self.h_count),
        }
    }
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: u32,
    pub k: usize,
    /// `None` means the default grid (only defined for `k = 2`).
    pub scales_grid: Option<Vec<Vec<f64>>>,
    pub estimators: Vec<EstimatorChoice>,
    pub replications: u64,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub alpha: Option<f64>,
    pub h_count: Option<usize>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::from_layer(ConfigLayer::default()).expect("defaults are valid")
    }
}

/// The 5 × 5 grid used by the two-population risk tables.
pub fn default_grid() -> Vec<Vec<f64>> {
    GRID_SCALE_1
        .iter()
        .flat_map(|&a| GRID_SCALE_2.iter().map(move |&b| vec![a, b]))
        .collect()
}

impl ExperimentConfig {
    pub fn from_layer(layer: ConfigLayer) -> Result<Self> {
        let k = layer
            .k
            .or_else(|| layer.scales.as_ref().and_then(|g| g.first()).map(Vec::len))
            .unwrap_or(DEFAULT_K);
        let cfg = Self {
            n: layer.n.unwrap_or(DEFAULT_N),
            k,
            scales_grid: layer.scales,
            estimators: layer
                .estimators
                .unwrap_or_else(|| NamedEstimator::ALL.into_iter().map(EstimatorChoice::Named).collect()),
            replications: layer.replications.unwrap_or(DEFAULT_REPLICATIONS),
            seed: layer.seed.unwrap_or(DEFAULT_SEED),
            output_format: layer.format.unwrap_or_default(),
            alpha: layer.alpha,
            h_count: layer.h_count,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::from_layer(ConfigLayer::parse(text, "<config>")?)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(CliError::invalid("n", format!("must be >= 2, got {}", self.n)));
        }
        if self.k < 2 {
            return Err(CliError::invalid("k", format!("must be >= 2, got {}", self.k)));
        }
        if self.replications == 0 {
            return Err(CliError::invalid("reps", "must be >= 1"));
        }
        if self.estimators.is_empty() {
            return Err(CliError::invalid("estimators", "list is empty"));
        }
        if let Some(grid) = &self.scales_grid {
            if grid.is_empty() {
                return Err(CliError::invalid("scales", "grid is empty"));
            }
            for v in grid {
                if v.len() != self.k {
                    return Err(CliError::invalid(
                        "scales",
                        format!("vector {v:?} has {} entries, k = {}", v.len(), self.k),
                    ));
                }
                if let Some(bad) = v.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
                    return Err(CliError::invalid("scales", format!("{bad} is not a positive finite scale")));
                }
            }
        }
        Ok(())
    }

    /// Scale vectors to evaluate, in output order.
    pub fn grid(&self) -> Result<Vec<Vec<f64>>> {
        match &self.scales_grid {
            Some(g) => Ok(g.clone()),
            None if self.k == 2 => Ok(default_grid()),
            None => Err(CliError::invalid("scales", format!("no default grid for k = {}; pass --scales", self.k))),
        }
    }

    pub fn populations(&self) -> Result<Vec<PopulationSet>> {
        self.grid()?
            .iter()
            .map(|s| PopulationSet::from_scales(self.n, s).map_err(CliError::from))
            .collect()
    }

    /// `(label, spec)` for each configured estimator.
    pub fn specs(&self) -> Result<Vec<(String, EstimatorSpec)>> {
        self.estimators
            .iter()
            .map(|e| {
                let spec = e.resolve(self.n, self.k, self.alpha, self.h_count).map_err(|err| {
                    CliError::invalid("estimators", format!("{}: {err}", e.label()))
                })?;
                Ok((e.label(), spec))
            })
            .collect()
    }

    /// Serializes to the config file format; `parse` inverts it.
    pub fn to_config_string(&self) -> String {
        let mut out = format!(
            "n = {}\nk = {}\nreps = {}\nseed = {}\nformat = {}\n",
            self.n, self.k, self.replications, self.seed, self.output_format
        );
        let labels: Vec<String> = self.estimators.iter().map(EstimatorChoice::label).collect();
        out += &format!("estimators = {}\n", labels.join(", "));
        if let Some(grid) = &self.scales_grid {
            let vs: Vec<String> = grid
                .iter()
                .map(|v| v.iter().map(f64::to_string).collect::<Vec<_>>().join(","))
                .collect();
            out += &format!("scales = {}\n", vs.join("; "));
        }
        if let Some(a) = self.alpha {
            out += &format!("alpha = {a}\n");
        }
        if let Some(h) = self.h_count {
            out += &format!("h_count = {h}\n");
        }
        out
    }

    /// Config echo for report metadata.
    pub fn echo(&self) -> Value {
        json!({
            "n": self.n,
            "k": self.k,
            "reps": self.replications,
            "seed": self.seed,
            "format": self.output_format.to_string(),
            "estimators": self.estimators.iter().map(EstimatorChoice::label).collect::<Vec<_>>(),
            "scales": self.grid().ok(),
            "alpha": self.alpha,
            "h_count": self.h_count,
        })
    }
}
