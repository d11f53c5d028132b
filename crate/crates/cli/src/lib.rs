//! Command-line frontend for the `blaschke` library.

pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod svg;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{CommandKind, EngineChoice, GridSpec, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "blaschke",
    version,
    about = "Taylor coefficients of powers of a Blaschke factor"
)]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write `<command>.csv` (and `.svg`) here instead of CSV to stdout.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,

    /// Also write an SVG plot (needs an output directory).
    #[arg(long, global = true)]
    pub svg: bool,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Args, Default)]
pub struct Common {
    /// λ as `p/q`, a decimal, or an integer ratio in (0, 1).
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Taylor coefficients B̂(0..=kmax).
    Coeffs {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, value_enum)]
        engine: Option<EngineChoice>,
    },
    /// lp norms with per-region masses.
    Norms {
        #[command(flatten)]
        common: Common,
        /// Exponents, e.g. `--p 1 --p 3/2 --p inf`.
        #[arg(long)]
        p: Vec<String>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, value_enum)]
        engine: Option<EngineChoice>,
    },
    /// Seven-region partition of the coefficient index.
    Regions {
        #[command(flatten)]
        common: Common,
        /// Split parameter in (0, α₀); defaults to α₀/2.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        kmax: Option<usize>,
        #[arg(long, value_enum)]
        engine: Option<EngineChoice>,
    },
    /// Airy predictions near k = n/α₀ against exact coefficients.
    Predict {
        #[command(flatten)]
        common: Common,
        /// Indices to predict; defaults to the prediction window.
        #[arg(long, value_delimiter = ',')]
        k: Vec<u64>,
    },
    /// Norm scaling regression over a doubling grid.
    Scaling {
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long)]
        p: Option<String>,
        /// `lo:hi`, powers of two times `lo` up to `hi`.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Weyl sums over the critical window.
    Weyl {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        j: Option<i64>,
        #[arg(long)]
        bins: Option<usize>,
    },
}

impl Command {
    fn into_config(self) -> RunConfig {
        let from_common = |kind, c: Common| RunConfig {
            command: Some(kind),
            lambda: c.lambda,
            n: c.n,
            ..Default::default()
        };
        match self {
            Command::Coeffs { common, kmax, engine } => RunConfig {
                kmax,
                engine,
                ..from_common(CommandKind::Coeffs, common)
            },
            Command::Norms {
                common,
                p,
                kmax,
                engine,
            } => RunConfig {
                p_list: (!p.is_empty()).then_some(p),
                kmax,
                engine,
                ..from_common(CommandKind::Norms, common)
            },
            Command::Regions {
                common,
                alpha,
                p,
                kmax,
                engine,
            } => RunConfig {
                alpha,
                p,
                kmax,
                engine,
                ..from_common(CommandKind::Regions, common)
            },
            Command::Predict { common, k } => RunConfig {
                k: (!k.is_empty()).then_some(k),
                ..from_common(CommandKind::Predict, common)
            },
            Command::Scaling { lambda, p, grid } => RunConfig {
                command: Some(CommandKind::Scaling),
                lambda,
                p,
                n_grid: grid.map(GridSpec::Range),
                ..Default::default()
            },
            Command::Weyl { common, j, bins } => RunConfig {
                j,
                bins,
                ..from_common(CommandKind::Weyl, common)
            },
        }
    }
}

impl Cli {
    /// Configuration file (if any) overlaid with the flags.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(cmd) = self.command {
            let flags = cmd.into_config();
            // norms: a single `p` in the file and a `--p` list on the command line
            if flags.p_list.is_some() {
                cfg.p = None;
            }
            cfg.overlay(flags);
        }
        cfg.overlay(RunConfig {
            output_dir: self.output_dir,
            emit_svg: self.svg.then_some(true),
            ..Default::default()
        });
        Ok(cfg)
    }
}

/// Runs a configuration: CSV to `output_dir/<command>.csv` or to `stdout`.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let job = cfg.resolve()?;
    let policy = config::policy_from_env()?;
    let svg = cfg.emit_svg.unwrap_or(false);
    if svg && cfg.output_dir.is_none() {
        return Err(CliError::Config("SVG output needs an output directory".into()));
    }
    let out = commands::execute(&job, &policy, svg)?;
    let name = cfg.command.expect("resolved").name();
    match &cfg.output_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.clone(),
                source,
            })?;
            csv::emit_csv(&out.table, &dir.join(format!("{name}.csv")))?;
            if let Some(svg) = out.plot {
                let path = dir.join(format!("{name}.svg"));
                std::fs::write(&path, svg).map_err(|source| CliError::Io { path, source })?;
            }
        }
        None => {
            let text = out.table.render()?;
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })?;
        }
    }
    Ok(())
}
