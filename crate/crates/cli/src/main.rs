//! `lqg-infodesign`: disclosure-preference analysis, the welfare design SDP,
//! and seeded ex-post sweeps for quadratic network games with Gaussian
//! states.
//!
//! Exit codes: 0 success, 2 config error, 3 numerical error, 4 solver
//! non-convergence.

mod commands;
mod error;
mod manifest;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lqg_infodesign_core::montecarlo::Anchor;
use lqg_infodesign_core::sdp::FMode;

#[derive(Parser)]
#[command(
    name = "lqg-infodesign",
    version,
    about = "Information design analyses for quadratic network games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnchorArg {
    Realized,
    Mu0,
}

impl From<AnchorArg> for Anchor {
    fn from(a: AnchorArg) -> Self {
        match a {
            AnchorArg::Realized => Anchor::RealizedMu,
            AnchorArg::Mu0 => Anchor::HyperPriorMu0,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Objective matrix with the coefficient block as printed.
    Paper,
    /// Objective matrix matching expected aggregate welfare exactly.
    Welfare,
}

impl From<ModeArg> for FMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Paper => FMode::PaperLiteral,
            ModeArg::Welfare => FMode::WelfareExact,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Per-agent ex-ante disclosure preferences and star cross-checks.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Assemble and solve the welfare-maximization SDP.
    Sdp {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Objective assembly mode.
        #[arg(long, value_enum, default_value = "welfare")]
        mode: ModeArg,
        /// Equality feasibility tolerance (PSD tolerance is a tenth of it).
        #[arg(long)]
        tol: Option<f64>,
        /// Iteration budget.
        #[arg(long, default_value_t = 50_000)]
        max_iter: usize,
    },
    /// Seeded ex-post disclosure-preference sweep.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Seed override (precedence: flag, then LQG_SEED, then config).
        #[arg(long)]
        seed: Option<u64>,
        /// No-disclosure action anchor.
        #[arg(long, value_enum)]
        anchor: Option<AnchorArg>,
    },
    /// Emit figure data tables (and SVG renderings unless --no-plots).
    Figures {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        no_plots: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { config, out } => commands::cmd_analyze(&config, &out),
        Command::Sdp {
            config,
            out,
            mode,
            tol,
            max_iter,
        } => commands::cmd_sdp(&config, &out, mode.into(), tol, max_iter),
        Command::Simulate {
            config,
            out,
            seed,
            anchor,
        } => commands::cmd_simulate(&config, &out, seed, anchor.map(Into::into)),
        Command::Figures { out, no_plots } => commands::cmd_figures(&out, no_plots),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
