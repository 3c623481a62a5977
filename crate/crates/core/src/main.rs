use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use photonfall::interferometry::WidthModel;
use photonfall::run::{run, Command};
use photonfall::scenario::parse_scenario;
use photonfall::{Error, Result};

#[derive(Parser)]
#[command(
    name = "photonfall",
    version,
    about = "Free fall of cavity-confined photons"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Scenario file (JSON, SI units).
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    /// Output directory; overrides `output.directory` in the scenario.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Mode-width model for the interferometer signal.
    #[arg(long, global = true, value_enum)]
    width_model: Option<WidthArg>,

    /// Suppress the run summary on stdout.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cavity dispersion table (k_par, omega, v_g).
    Dispersion,
    /// Free-fall trajectory, closed form or split-step.
    Freefall(FreefallMode),
    /// Interferometer signal-to-noise traces, one per Q.
    Fig2b,
    /// Minimum Q for a peak signal-to-noise of one.
    Qthreshold,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FreefallMode {
    #[arg(long)]
    analytic: bool,
    #[arg(long)]
    numeric: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum WidthArg {
    Paper,
    Corrected,
}

impl From<WidthArg> for WidthModel {
    fn from(w: WidthArg) -> Self {
        match w {
            WidthArg::Paper => WidthModel::PaperVerbatim,
            WidthArg::Corrected => WidthModel::Corrected,
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    let command = match cli.command {
        Cmd::Dispersion => Command::Dispersion,
        Cmd::Freefall(m) if m.analytic => Command::FreefallAnalytic,
        Cmd::Freefall(_) => Command::FreefallNumeric,
        Cmd::Fig2b => Command::Fig2b,
        Cmd::Qthreshold => Command::Qthreshold,
    };
    let path = cli.scenario.ok_or_else(|| Error::Config {
        path: "--scenario".into(),
        message: "a scenario file is required".into(),
    })?;
    let text = std::fs::read_to_string(&path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut scenario = parse_scenario(&text)?;
    if let (Some(w), Some(exp)) = (cli.width_model, scenario.experiment.as_mut()) {
        exp.width_model = w.into();
    }
    let out = cli
        .out
        .or_else(|| scenario.output.directory.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let manifest = run(command, &scenario, &out)?;
    if !cli.quiet {
        println!("{} -> {}", command.name(), out.display());
        for f in &manifest.outputs {
            println!("  {}  {}", f.sha256, f.file);
        }
        if let Some(c) = manifest.convergence {
            println!(
                "  steps {} dt {:e}  centroid err {:.2e}  norm drift {:.2e}",
                c.n_steps, c.dt_used, c.max_centroid_error, c.norm_drift
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
