use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hyperbell::cli::{self, ClassArg, CliError, ConfigError, ConfigLayer, NoiseArg, OutputFormat, Study};

/// Bell tests on hyper-entangled photon pairs.
#[derive(Parser, Debug)]
#[command(name = "hyperbell", version)]
struct Args {
    /// Study to run. May also come from the config file.
    study: Option<Study>,
    /// Flat TOML file with the same keys as the flags (`v` sets both visibilities).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Polarization pair phase.
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Path pair phase.
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    #[arg(long, value_enum)]
    noise: Option<NoiseArg>,
    #[arg(long)]
    v_pi: Option<f64>,
    #[arg(long)]
    v_k: Option<f64>,
    /// Sets both visibilities; `--v-pi`/`--v-k` override it.
    #[arg(long)]
    v: Option<f64>,
    /// Events per measurement setting.
    #[arg(long)]
    events: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of degrees of freedom.
    #[arg(long)]
    dof: Option<usize>,
    /// Restrict the bounds study to one strategy class.
    #[arg(long, value_enum)]
    class: Option<ClassArg>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Refuse enumerations larger than this many strategy pairs.
    #[arg(long)]
    guard: Option<u64>,
}

impl Args {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            study: self.study,
            theta: self.theta,
            phi: self.phi,
            noise: self.noise.map(Into::into),
            v_pi: self.v_pi.or(self.v),
            v_k: self.v_k.or(self.v),
            events: self.events,
            seed: self.seed,
            dof: self.dof,
            class: self.class.map(Into::into),
            format: self.format,
            out: self.out.clone(),
            guard: self.guard,
        }
    }
}

fn execute(args: Args) -> Result<(), CliError> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError { key: "config".into(), message: format!("{}: {e}", path.display()) })?;
            ConfigLayer::from_toml_str(&text)?
        }
        None => ConfigLayer::default(),
    };
    let config = file.overlay(args.layer()).resolve()?;
    let report = cli::run(&config)?;
    let bytes = cli::emit(&report, config.format)?;
    match &config.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(&bytes).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hyperbell: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
