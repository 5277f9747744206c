mod commands;
mod io;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Batch front end: sweep curve generation, bound evaluation from data
/// files, classical certification, Monte Carlo error bars, and noise-model
/// fitting. All angles are radians.
#[derive(Parser)]
#[command(name = "qace", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Ms1,
    Ms2,
}

impl FamilyArg {
    fn to_family(self) -> qace_core::families::Family {
        match self {
            FamilyArg::Ms1 => qace_core::families::Family::Ms1,
            FamilyArg::Ms2 => qace_core::families::Family::Ms2,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum InputFormat {
    Counts,
    Probs,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the entanglement angle and write one CSV row of bounds per
    /// point. MS1 rows optimize phi0 per point unless --phi0 is fixed.
    Sweep {
        #[arg(long)]
        family: FamilyArg,
        /// First alpha of the grid (radians).
        #[arg(long)]
        alpha_start: f64,
        /// Last alpha of the grid (radians).
        #[arg(long)]
        alpha_end: f64,
        /// Number of grid points (inclusive of both ends).
        #[arg(long)]
        steps: usize,
        /// Fixed Bob angle phi0 for MS1 (radians); optimized per point when
        /// absent.
        #[arg(long)]
        phi0: Option<f64>,
        /// White-noise visibility in [0,1].
        #[arg(long)]
        v: Option<f64>,
        /// Colored-noise fraction in [0,1].
        #[arg(long)]
        lambda: Option<f64>,
        /// Switch retarder phase in radians; enables the hardware model.
        #[arg(long)]
        delta: Option<f64>,
        /// Append the eight p(a,b|x) columns to every row.
        #[arg(long)]
        emit_probs: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate the observational bounds on a counts or probability file.
    Bounds {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: InputFormat,
        #[arg(long)]
        out: PathBuf,
    },
    /// Certify a distribution against the 16-strategy polytope: minimum
    /// classical ACE, feasibility, and the witness mixture.
    Oracle {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo error propagation of counting noise into the bounds.
    Mc {
        #[arg(long)]
        input: PathBuf,
        /// Number of multinomial resamples (at least 100).
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit the noise model (v, lambda, delta) to a dataset of counts.
    Fit {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        family: FamilyArg,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Sweep {
            family,
            alpha_start,
            alpha_end,
            steps,
            phi0,
            v,
            lambda,
            delta,
            emit_probs,
            out,
        } => commands::sweep(
            family.to_family(),
            alpha_start,
            alpha_end,
            steps,
            phi0,
            v,
            lambda,
            delta,
            emit_probs,
            &out,
        ),
        Command::Bounds { input, format, out } => {
            commands::bounds(&input, matches!(format, InputFormat::Counts), &out)
        }
        Command::Oracle { input, out } => commands::oracle(&input, &out),
        Command::Mc {
            input,
            samples,
            seed,
            out,
        } => commands::mc(&input, samples, seed, &out),
        Command::Fit {
            dataset,
            family,
            out,
        } => commands::fit(&dataset, family.to_family(), &out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
