//! Command-line front end. `run` parses arguments, writes JSON or CSV and
//! returns the process exit code: 0 on pass, 1 when a check fails, 2 on a
//! usage error.

mod commands;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "dagas", version, about = "Directed animals, gas processes and Kronecker growth")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print a CSV table instead of JSON, where the command has one.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Tolerance for float comparisons; exact modes compare exactly.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Rational literals (`a/b`) mean exact, decimals mean float.
    Auto,
    Exact,
    Float,
}

#[derive(Debug, Clone, Args)]
pub struct GasArgs {
    /// x, y, bond or bicolour.
    #[arg(long, default_value = "x")]
    pub gas: String,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub p1: Option<String>,
    #[arg(long)]
    pub p2: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Args)]
pub struct FactorArgs {
    /// Catalog id of a factor solution, e.g. factor-y-size4-corner.
    #[arg(long)]
    pub factor: String,
    /// Root-choice bitmask for entries defined with square roots.
    #[arg(long, default_value_t = 0)]
    pub branch: u32,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightArg {
    Perimeter,
    Bonds,
    Bicolour,
    /// Over-source animals weighted by area and perimeter.
    Oversource,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutArg {
    Row,
    Zigzag,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count directed animals by area and a second statistic.
    Enumerate {
        #[arg(long, default_value = "sq")]
        lattice: String,
        /// Cylinder width, or `plane`.
        #[arg(long, default_value = "plane")]
        width: String,
        /// Comma-separated source indices in row 0.
        #[arg(long, default_value = "0", value_delimiter = ',')]
        sources: Vec<usize>,
        /// Second-colour sources for `--weight bicolour`.
        #[arg(long, value_delimiter = ',')]
        sources2: Vec<usize>,
        #[arg(long)]
        max_area: u32,
        #[arg(long, value_enum, default_value_t = WeightArg::Perimeter)]
        weight: WeightArg,
    },
    /// Row transfer matrix of a gas on a cylinder.
    Transfer {
        #[command(flatten)]
        gas: GasArgs,
        #[arg(long, default_value = "sq")]
        lattice: String,
        #[arg(long, value_enum, default_value_t = LayoutArg::Row)]
        layout: LayoutArg,
        #[arg(long)]
        width: usize,
    },
    /// Stationary row measure, optionally against a simulation.
    Invariant {
        #[command(flatten)]
        gas: GasArgs,
        #[arg(long, default_value = "sq")]
        lattice: String,
        #[arg(long, value_enum, default_value_t = LayoutArg::Row)]
        layout: LayoutArg,
        #[arg(long)]
        width: usize,
        /// Simulate this many rows and compare the site density.
        #[arg(long)]
        simulate: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Gas marginal against the matching animal generating function.
    Identity {
        /// fo-x, fo-y, bond or bicolour.
        #[arg(long)]
        which: String,
        #[arg(long)]
        width: usize,
        #[arg(long, default_value = "0", value_delimiter = ',')]
        sources: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        sources2: Vec<usize>,
        #[arg(long)]
        max_area: u32,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        p1: Option<String>,
        #[arg(long)]
        p2: Option<String>,
    },
    /// Residual of a catalog entry or a solution file in its polynomial system.
    Verify {
        /// Catalog id, or a system kind when `--solution` is a file.
        #[arg(long)]
        system: String,
        /// `catalog` or a JSON file with `system` and `assignment`.
        #[arg(long, default_value = "catalog")]
        solution: String,
        #[arg(long, default_value_t = 0)]
        branch: u32,
        /// Widths up to this one are checked for stationarity.
        #[arg(long, default_value_t = 3)]
        width: usize,
        #[command(flatten)]
        gas: GasArgs,
    },
    /// Multi-start numerical search for solutions of a system.
    Solve {
        #[arg(long)]
        system: String,
        #[arg(long)]
        size: usize,
        /// c1=1, d1=1, corner-y, listed-y or unit-trace; repeatable.
        #[arg(long)]
        constraint: Vec<String>,
        /// Use the full zero pattern for split systems instead of the block one.
        #[arg(long)]
        full_pattern: bool,
        #[arg(long, default_value_t = 64)]
        starts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 400)]
        max_iter: usize,
        #[command(flatten)]
        gas: GasArgs,
    },
    /// Kronecker growth of V, H and Q from a factor solution.
    Grow {
        #[command(flatten)]
        factor: FactorArgs,
        #[arg(long)]
        kappa: usize,
        /// Trace measures are compared with transfer powers up to this width.
        #[arg(long, default_value_t = 3)]
        width: usize,
        /// One entry `WHICH,x,i,j` computed without building the matrices.
        #[arg(long)]
        entry: Option<String>,
        #[arg(long, default_value_t = crate::growth::DEFAULT_GROWTH_CAP)]
        cap: usize,
    },
    /// Spectral checks on the grown Q* matrices.
    Spectra {
        #[command(flatten)]
        factor: FactorArgs,
        #[arg(long)]
        kappa: usize,
    },
    /// Site density of the grown measures against the stationary density.
    Density {
        #[command(flatten)]
        factor: FactorArgs,
        #[arg(long)]
        kappa: usize,
        #[arg(long, default_value_t = 4)]
        width: usize,
    },
    /// Corner blocks and a truncation of the infinite-step limit.
    Limit {
        #[command(flatten)]
        factor: FactorArgs,
        /// Side of the truncated limit block.
        #[arg(long, default_value_t = 36)]
        size: usize,
    },
}

/// What a command produced.
pub(crate) struct Outcome {
    pub json: Value,
    pub csv: Option<String>,
    pub pass: bool,
}

fn usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Unknown { .. }
            | Error::InvalidParams(_)
            | Error::Parse(_)
            | Error::NotFree(_)
            | Error::OverlappingSources
            | Error::IndexOutOfRange { .. }
            | Error::SizeCap { .. }
            | Error::NotRepresentable(_)
            | Error::Json(_)
            | Error::Io(_)
    )
}

fn emit(global: &GlobalArgs, out: &mut dyn Write, outcome: &Outcome) -> std::io::Result<bool> {
    let text = if global.csv {
        match &outcome.csv {
            Some(t) => t.clone(),
            None => return Ok(false),
        }
    } else {
        let mut t = serde_json::to_string_pretty(&outcome.json).expect("values serialize");
        t.push('\n');
        t
    };
    match &global.out {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(true)
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            eprint!("{e}");
            return 2;
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return 2;
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let result = pool.install(|| commands::dispatch(&cli.command, &cli.global));
    match result {
        Ok(outcome) => match emit(&cli.global, out, &outcome) {
            Ok(true) => i32::from(!outcome.pass),
            Ok(false) => {
                eprintln!("error: this command has no CSV form");
                2
            }
            Err(e) => {
                eprintln!("error: {e}");
                2
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            if usage_error(&e) {
                2
            } else {
                1
            }
        }
    }
}
