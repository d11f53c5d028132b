//! Run configuration: a TOML file overlaid with command-line flags, then
//! validated into a [`Job`].

use std::path::{Path, PathBuf};

use blaschke::engines::exact::PrecisionPolicy;
use blaschke::lab::geometric_grid;
use blaschke::norms::{default_alpha, Exponent};
use blaschke::params::{parse_rational, BlaschkeParams};
use clap::ValueEnum;
use num_rational::BigRational;
use serde::Deserialize;

use crate::error::CliError;

/// Environment variable overriding the exact engine's precision cap.
pub const MAX_BITS_VAR: &str = "BLASCHKE_MAX_BITS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Coeffs,
    Norms,
    Regions,
    Predict,
    Scaling,
    Weyl,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Coeffs => "coeffs",
            CommandKind::Norms => "norms",
            CommandKind::Regions => "regions",
            CommandKind::Predict => "predict",
            CommandKind::Scaling => "scaling",
            CommandKind::Weyl => "weyl",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EngineChoice {
    #[default]
    Auto,
    Exact,
    Fft,
    Oscillatory,
}

/// `"128:8192"` (powers of two between the ends) or an explicit list.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Range(String),
    List(Vec<u64>),
}

impl GridSpec {
    pub fn resolve(&self) -> Result<Vec<u64>, CliError> {
        match self {
            GridSpec::List(v) => Ok(v.clone()),
            GridSpec::Range(s) => {
                let (lo, hi) = s
                    .split_once(':')
                    .ok_or_else(|| CliError::Config(format!("grid `{s}` is not of the form lo:hi")))?;
                let parse = |t: &str| {
                    t.trim()
                        .parse::<u64>()
                        .map_err(|e| CliError::Config(format!("grid `{s}`: {e}")))
                };
                let (lo, hi) = (parse(lo)?, parse(hi)?);
                if lo == 0 || hi < lo {
                    return Err(CliError::Config(format!("grid `{s}` is empty")));
                }
                Ok(geometric_grid(lo, hi))
            }
        }
    }
}

/// Every setting is optional so a file and flags can be merged.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<CommandKind>,
    pub lambda: Option<String>,
    pub n: Option<u64>,
    pub n_grid: Option<GridSpec>,
    pub p: Option<String>,
    pub p_list: Option<Vec<String>>,
    pub kmax: Option<usize>,
    pub k: Option<Vec<u64>>,
    pub j: Option<i64>,
    pub bins: Option<usize>,
    pub alpha: Option<String>,
    pub engine: Option<EngineChoice>,
    pub output_dir: Option<PathBuf>,
    pub emit_svg: Option<bool>,
}

macro_rules! overlay_fields {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f; } )*
    };
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Fields set in `other` replace those in `self`.
    pub fn overlay(&mut self, other: RunConfig) {
        overlay_fields!(
            self, other, command, lambda, n, n_grid, p, p_list, kmax, k, j, bins, alpha, engine, output_dir, emit_svg
        );
    }

    pub fn resolve(&self) -> Result<Job, CliError> {
        let command = self
            .command
            .ok_or_else(|| CliError::Config("no command given (flag or `command` key)".into()))?;
        let engine = self.engine.unwrap_or_default();
        let job = match command {
            CommandKind::Coeffs => Job::Coeffs {
                params: self.params()?,
                kmax: self.kmax,
                engine,
            },
            CommandKind::Norms => Job::Norms {
                params: self.params()?,
                ps: self.exponents()?,
                kmax: self.kmax,
                engine,
            },
            CommandKind::Regions => {
                let params = self.params()?;
                let alpha = match &self.alpha {
                    Some(a) => parse_rational(a).map_err(config)?,
                    None => default_alpha(&params),
                };
                Job::Regions {
                    params,
                    alpha,
                    p: self.single_exponent("2")?,
                    kmax: self.kmax,
                    engine,
                }
            }
            CommandKind::Predict => Job::Predict {
                params: self.params()?,
                ks: self.k.clone(),
            },
            CommandKind::Scaling => {
                if self.n.is_some() {
                    return Err(CliError::Config("scaling takes n_grid, not n".into()));
                }
                let grid = self
                    .n_grid
                    .clone()
                    .unwrap_or(GridSpec::Range("128:8192".into()))
                    .resolve()?;
                Job::Scaling {
                    lambda: self.lambda()?,
                    p: self.single_exponent("inf")?,
                    grid,
                }
            }
            CommandKind::Weyl => Job::Weyl {
                params: self.params()?,
                j: self.j.unwrap_or(1),
                bins: self.bins.unwrap_or(16),
            },
        };
        if let Job::Weyl { bins: 0, .. } = job {
            return Err(CliError::Config("bins must be positive".into()));
        }
        Ok(job)
    }

    fn lambda(&self) -> Result<BigRational, CliError> {
        let s = self
            .lambda
            .as_deref()
            .ok_or_else(|| CliError::Config("lambda is required".into()))?;
        parse_rational(s).map_err(config)
    }

    fn params(&self) -> Result<BlaschkeParams, CliError> {
        let n = self.n.ok_or_else(|| CliError::Config("n is required".into()))?;
        BlaschkeParams::new(self.lambda()?, n).map_err(config)
    }

    fn exponents(&self) -> Result<Vec<Exponent>, CliError> {
        let raw: Vec<String> = match (&self.p, &self.p_list) {
            (Some(_), Some(_)) => return Err(CliError::Config("give either p or p_list".into())),
            (Some(p), None) => vec![p.clone()],
            (None, Some(list)) if !list.is_empty() => list.clone(),
            _ => vec!["2".into()],
        };
        raw.iter().map(|s| s.parse::<Exponent>().map_err(config)).collect()
    }

    fn single_exponent(&self, default: &str) -> Result<Exponent, CliError> {
        if self.p_list.is_some() {
            return Err(CliError::Config("this command takes a single p".into()));
        }
        self.p.as_deref().unwrap_or(default).parse().map_err(config)
    }
}

fn config(e: blaschke::error::Error) -> CliError {
    CliError::Config(e.to_string())
}

/// A validated command.
#[derive(Clone, Debug)]
pub enum Job {
    Coeffs {
        params: BlaschkeParams,
        kmax: Option<usize>,
        engine: EngineChoice,
    },
    Norms {
        params: BlaschkeParams,
        ps: Vec<Exponent>,
        kmax: Option<usize>,
        engine: EngineChoice,
    },
    Regions {
        params: BlaschkeParams,
        alpha: BigRational,
        p: Exponent,
        kmax: Option<usize>,
        engine: EngineChoice,
    },
    Predict {
        params: BlaschkeParams,
        ks: Option<Vec<u64>>,
    },
    Scaling {
        lambda: BigRational,
        p: Exponent,
        grid: Vec<u64>,
    },
    Weyl {
        params: BlaschkeParams,
        j: i64,
        bins: usize,
    },
}

/// Precision policy with the cap taken from `BLASCHKE_MAX_BITS` when set.
pub fn policy_from_env_value(value: Option<&str>) -> Result<PrecisionPolicy, CliError> {
    let base = PrecisionPolicy::default();
    match value {
        None => Ok(base),
        Some(v) => {
            let bits: u64 = v
                .trim()
                .parse()
                .map_err(|e| CliError::Config(format!("{MAX_BITS_VAR}=`{v}`: {e}")))?;
            base.with_max_bits(bits).map_err(config)
        }
    }
}

pub fn policy_from_env() -> Result<PrecisionPolicy, CliError> {
    policy_from_env_value(std::env::var(MAX_BITS_VAR).ok().as_deref())
}
