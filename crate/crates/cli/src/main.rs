//! `lcft`: command-line front end for lcft-core.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{CliError, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "lcft", version, about = "Explicit local class field theory at desk scale")]
pub struct Cli {
    #[command(flatten)]
    pub config: Config,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Field spec: `p`, `p^n` or `p^n:c_n,...,c_0`.
    #[arg(long, global = true, default_value = "2")]
    pub field: String,
    /// Default precision for literals without a `(mod ...)` suffix.
    #[arg(long, global = true, env = "LCFT_PREC", default_value_t = 8)]
    pub prec: i64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = lcft_core::acceptance::DEFAULT_SEED)]
    pub seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Membership in the AJ set and ratios of members.
    Aj {
        #[command(subcommand)]
        op: AjOp,
    },
    /// Artin–Hasse exponential and unit coordinates.
    Ah {
        #[command(subcommand)]
        op: AhOp,
    },
    /// Kummer and Artin–Schreier pullbacks.
    Recip {
        #[command(subcommand)]
        op: RecipOp,
    },
    /// Lubin–Tate torsion towers.
    Lt {
        #[command(subcommand)]
        op: LtOp,
    },
    /// Two-dimensional local fields at window scale.
    Twodim {
        #[command(subcommand)]
        op: TwoDimOp,
    },
    /// Connection forms over Q((S))((T)).
    Dmod {
        #[command(subcommand)]
        op: DmodOp,
    },
    /// Run the acceptance suite.
    Verify,
}

#[derive(Debug, Subcommand)]
pub enum AjOp {
    Check {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    Ratio {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    Split {
        #[arg(allow_hyphen_values = true)]
        f: String,
        /// Prime element of O_K as a series in T.
        #[arg(long, default_value = "T")]
        prime: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum AhOp {
    /// The series F(t) mod t^prec over F_p.
    #[command(name = "F")]
    F {
        #[arg(long)]
        p: u64,
    },
    /// Π F(a·That^(n·p^m)); each coordinate is `n,m,coeff`.
    Compose {
        #[arg(long = "coord")]
        coords: Vec<String>,
    },
    Decompose {
        #[arg(allow_hyphen_values = true)]
        u: String,
    },
    Alphadlog {
        #[arg(allow_hyphen_values = true)]
        u: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum RecipOp {
    Kummer {
        #[arg(long)]
        n: u64,
    },
    As {
        #[arg(long)]
        a: String,
        #[arg(long)]
        n: u64,
    },
    Invariance {
        #[arg(allow_hyphen_values = true)]
        f1: String,
        #[arg(allow_hyphen_values = true)]
        f2: String,
        #[arg(long, default_value_t = 8)]
        n: i64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct LtArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
}

#[derive(Debug, Subcommand)]
pub enum LtOp {
    Build {
        #[command(flatten)]
        args: LtArgs,
    },
    Fiber {
        #[command(flatten)]
        args: LtArgs,
    },
    Galois {
        #[command(flatten)]
        args: LtArgs,
        /// A unit of O_K as a series in T.
        #[arg(long)]
        u: String,
    },
    Identity {
        #[command(flatten)]
        args: LtArgs,
        /// Check a single unit instead of all units mod T^m.
        #[arg(long)]
        u: Option<String>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    #[arg(long, default_value = "4,4", value_parser = parse_window)]
    pub window: (i64, i64),
    #[arg(long, default_value_t = 2)]
    pub q: u64,
}

#[derive(Debug, Subcommand)]
pub enum TwoDimOp {
    Symbol {
        #[command(flatten)]
        args: WindowArgs,
    },
    /// (C⁻¹ − 1) of a form Σ a_ij·S^i·T^j standing for Σ a_ij Ŝ^i T̂^j dlog Ŝ ∧ dlog T̂.
    Cartier {
        #[command(flatten)]
        args: WindowArgs,
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    Kernel {
        #[command(flatten)]
        args: WindowArgs,
        #[arg(allow_hyphen_values = true)]
        form: String,
    },
    Normalform {
        #[command(flatten)]
        args: WindowArgs,
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    Galois {
        #[command(flatten)]
        args: WindowArgs,
    },
    Fiber {
        #[command(flatten)]
        args: WindowArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum DmodOp {
    /// df for f ∈ Q[S^±1, T^±1], written P·dlog S + Q·dlog T.
    D {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    Closed {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    Decompose {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
    /// d(Σ a_nm S^-n T^-m) from the literal Σ a_nm S^n T^m.
    Pullback {
        #[arg(allow_hyphen_values = true)]
        coeffs: String,
    },
    Image {
        #[arg(allow_hyphen_values = true)]
        p: String,
        #[arg(allow_hyphen_values = true)]
        q: String,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected I,J")?;
    let i = a.trim().parse().map_err(|_| format!("bad window size {a:?}"))?;
    let j = b.trim().parse().map_err(|_| format!("bad window size {b:?}"))?;
    Ok((i, j))
}

fn emit(report: &Report, config: &Config) -> Result<(), CliError> {
    match config.format {
        Format::Text => {
            for line in &report.text {
                println!("{line}");
            }
        }
        Format::Json => println!("{}", serde_json::to_string_pretty(&report.json()).expect("json values serialize")),
    }
    if let Some(path) = &config.out {
        let body = serde_json::to_string_pretty(&report.json()).expect("json values serialize");
        std::fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli).and_then(|r| emit(&r, &cli.config).map(|_| r));
    match outcome {
        Ok(r) if r.ok => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
