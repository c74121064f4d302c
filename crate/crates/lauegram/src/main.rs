//! Command-line front end: config-driven figure pipelines.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use lauegram::config::{parse_config, SceneConfig};
use lauegram::export::ImageFormat;
use lauegram::pipeline::{preset_config, run_analyze, run_reconstruct, run_simulate, run_sweep};
use lauegram::{Error, Result};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "lauegram",
    version,
    about = "Neutron crystal-interferometer simulation: interferograms, reconstructions, feasibility analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize interferograms for every panel and detector port.
    Simulate(RunArgs),
    /// Reconstruct interferograms with the discrete Fresnel transform.
    Reconstruct(RunArgs),
    /// Emit the feasibility analysis report.
    Analyze(RunArgs),
    /// Run a 1D sweep (rocking curve, Pendellösung, phase scan).
    Sweep(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scene configuration file (TOML).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, value_name = "DIR")]
    out: PathBuf,

    /// Use the built-in preset for a reference figure (7, 8, 10, 11, 12)
    /// instead of --config.
    #[arg(long, value_name = "N")]
    figure: Option<u8>,

    /// Output format: png, pgm, or csv (csv = no images).
    #[arg(long, value_enum)]
    format: Option<FormatArg>,

    /// Reserved; all computation is deterministic in this version.
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Png,
    Pgm,
    Csv,
}

impl RunArgs {
    fn load_config(&self) -> Result<SceneConfig> {
        let mut config = match (&self.config, self.figure) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "pass either --config or --figure, not both".into(),
                ))
            }
            (Some(path), None) => {
                let text = std::fs::read_to_string(path)?;
                parse_config(&text)?
            }
            (None, Some(figure)) => preset_config(figure)?,
            (None, None) => {
                return Err(Error::Config("one of --config or --figure is required".into()))
            }
        };
        match self.format {
            Some(FormatArg::Png) => {
                config.output.images = true;
                config.output.image_format = ImageFormat::Png;
            }
            Some(FormatArg::Pgm) => {
                config.output.images = true;
                config.output.image_format = ImageFormat::Pgm;
            }
            Some(FormatArg::Csv) => {
                config.output.images = false;
                config.output.csv = true;
            }
            None => {}
        }
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<()> {
    let (args, runner): (&RunArgs, fn(&SceneConfig, &std::path::Path) -> Result<_>) =
        match &cli.command {
            Command::Simulate(a) => (a, run_simulate),
            Command::Reconstruct(a) => (a, run_reconstruct),
            Command::Analyze(a) => (a, run_analyze),
            Command::Sweep(a) => (a, run_sweep),
        };
    if args.seed.is_some() {
        eprintln!("note: --seed is reserved; this version is fully deterministic");
    }
    let config = args.load_config()?;
    let manifest = runner(&config, &args.out)?;
    println!(
        "wrote {} files to {} (config {})",
        manifest.files.len(),
        args.out.display(),
        &manifest.config_sha256[..12]
    );
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
