use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wlc::commands::{load, run, Command, Invocation};

#[derive(Parser)]
#[command(
    name = "wlc",
    version,
    about = "Noise spectra, poles and figures of merit for linear detector networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Signal-referred noise budget on the configured grid (spectrum.csv).
    Spectrum(Common),
    /// Poles, stability, PT symmetry and EP indicator (poles.json).
    Poles(Common),
    /// Integrated sensitivity gain over the reference detector (gain.json).
    Gain(Common),
    /// Scan-rate integral of the detector (scan_rate.json).
    ScanRate(Common),
    /// Scan-rate optimization over coupling and readout rates (optimize.json).
    Optimize(Common),
    /// Metrics over a grid of config values (sweep.csv).
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override a dotted config path, e.g. `detector.chi_hz=4.9`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Exit with code 3 when the detector is not stable.
    #[arg(long)]
    strict_stability: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Spectrum(c) => (Command::Spectrum, c),
        Cmd::Poles(c) => (Command::Poles, c),
        Cmd::Gain(c) => (Command::Gain, c),
        Cmd::ScanRate(c) => (Command::ScanRate, c),
        Cmd::Optimize(c) => (Command::Optimize, c),
        Cmd::Sweep(c) => (Command::Sweep, c),
    };
    let result = load(&common.config, &common.set).and_then(|(raw, config)| {
        let out_dir = common
            .out
            .clone()
            .or_else(|| config.output.dir.clone().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        run(&Invocation {
            command,
            raw,
            config,
            out_dir,
            strict_stability: common.strict_stability,
        })
    });
    match result {
        Ok(files) => {
            for f in files {
                eprintln!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.report());
            ExitCode::from(e.exit_code())
        }
    }
}
