mod commands;

use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use quadext::{Family, Parity, SupportKind};

/// Gauss, Lobatto and Radau rules, higher-order convexity checks,
/// extremality sandwiches and certified error bounds on [-1, 1].
#[derive(Debug, Parser)]
#[command(name = "quadext", version, propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

fn family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: quadext::Error| e.to_string())
}

fn parity(s: &str) -> Result<Parity, String> {
    s.parse().map_err(|e: quadext::Error| e.to_string())
}

fn support_kind(s: &str) -> Result<SupportKind, String> {
    s.parse().map_err(|e: quadext::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the nodes and weights of a rule.
    Nodes {
        /// gauss, lobatto, radau-left or radau-right.
        #[arg(long, value_parser = family)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Apply a rule to an expression on [a, b].
    Integrate {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, value_parser = family)]
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Test n-convexity with divided differences on a uniform grid over [a, b].
    CheckConvexity {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        /// Convexity order.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        b: f64,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Check G_n <= T <= Lob_{n+1} (odd) or Rad^l_{n+1} <= T <= Rad^r_{n+1} (even).
    CheckExtremality {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long, value_parser = parity)]
        parity: Parity,
        #[arg(long)]
        n: usize,
        /// Middle operator: `reference`, `hybrid`, or a rule such as `gauss:4`.
        #[arg(long, default_value = "reference")]
        operator: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Build a support polynomial and verify it on a sample grid.
    Support {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        /// gauss-lower, lobatto-upper, radau-left-lower or radau-right-upper.
        #[arg(long, value_parser = support_kind)]
        kind: SupportKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Integrate with an error enclosure from a bound on |f^(k)|.
    Certify {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = family, default_value = "gauss")]
        family: Family,
        /// Bound on sup |f^(k)| over [-1, 1]. Without it the bound is
        /// estimated by sampling and the result is not certified.
        #[arg(long)]
        deriv_bound: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Print alpha_k and the classical error constants of order k.
    Constants {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            if !e.to_string().contains("Usage:") {
                eprintln!("{}", Cli::command().render_usage());
            }
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match commands::run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("{}", Cli::command().render_usage());
            ExitCode::from(2)
        }
    }
}
