//! Thin command-line front end over the library drivers.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use strcf::cli::{cmd_diag, cmd_eval, cmd_synth, cmd_track};
use strcf::synth::SynthKind;
use strcf::tracker::UpdateMode;

#[derive(Parser)]
#[command(
    name = "strcf",
    about = "Spatial-temporal regularized correlation filter tracking",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strcf,
    Interp,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Static,
    Translate,
    Scale,
    Occlude,
}

#[derive(Subcommand)]
enum Command {
    /// Track an OTB-layout sequence and write JSON/CSV results.
    Track {
        /// Sequence directory (img/ plus groundtruth_rect.txt).
        #[arg(long)]
        seq: PathBuf,
        /// Optional key=value config file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory for results.
        #[arg(long)]
        out: PathBuf,
        /// Model update rule.
        #[arg(long, value_enum, default_value = "strcf")]
        mode: ModeArg,
        /// Also write PNG frames with predicted and truth boxes burned in.
        #[arg(long)]
        overlay: bool,
    },
    /// Aggregate per-sequence JSON results into dataset-level numbers.
    Eval {
        /// Directory of per-sequence result JSON files.
        #[arg(long)]
        results: PathBuf,
    },
    /// Generate a synthetic OTB-format sequence with exact ground truth.
    Synth {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Frame count (at least 2).
        #[arg(long)]
        frames: usize,
        #[arg(long)]
        out: PathBuf,
        /// RNG seed; identical seeds reproduce byte-identical frames.
        #[arg(long, default_value = "42")]
        seed: u64,
    },
    /// Temporal filter-variation diagnostic under ground-truth-forced
    /// localization, once per mu in the sweep.
    Diag {
        #[arg(long)]
        seq: PathBuf,
        /// Comma-separated temporal weights, e.g. 1,4,16,64.
        #[arg(long, value_delimiter = ',', default_value = "1,4,16,64")]
        sweep_mu: Vec<f64>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output CSV path.
        #[arg(long, default_value = "variation.csv")]
        out: PathBuf,
    },
}

fn configure_threads() -> Result<(), String> {
    match std::env::var("STRCF_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw
                .parse()
                .map_err(|_| format!("STRCF_THREADS must be a nonnegative integer, got {raw:?}"))?;
            if n == 0 {
                return Ok(()); // 0 = auto
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| format!("failed to set thread pool: {e}"))
        }
    }
}

fn main() -> ExitCode {
    if let Err(message) = configure_threads() {
        eprintln!("error: {message}");
        return ExitCode::from(3);
    }

    let cli = Cli::parse();
    let result = match cli.command {
        Command::Track {
            seq,
            config,
            out,
            mode,
            overlay,
        } => {
            let mode = match mode {
                ModeArg::Strcf => UpdateMode::TemporalRegularized,
                ModeArg::Interp => UpdateMode::LinearInterpolation,
            };
            cmd_track(&seq, config.as_deref(), &out, mode, overlay)
        }
        Command::Eval { results } => cmd_eval(&results).map(|_| ()),
        Command::Synth {
            kind,
            frames,
            out,
            seed,
        } => {
            let kind = match kind {
                KindArg::Static => SynthKind::Static,
                KindArg::Translate => SynthKind::Translate,
                KindArg::Scale => SynthKind::Scale,
                KindArg::Occlude => SynthKind::Occlude,
            };
            cmd_synth(kind, frames, &out, seed)
        }
        Command::Diag {
            seq,
            sweep_mu,
            config,
            out,
        } => cmd_diag(&seq, &sweep_mu, config.as_deref(), &out),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
