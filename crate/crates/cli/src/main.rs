use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use spinbeam::{Config, ScenarioKind};
use spinbeam_cli::{execute, export_matrices, load_config, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    Free,
    Disturbance,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

/// Simulate a rotating cantilever beam with a piezoelectric patch, with or
/// without the feedback-linearizing tip controller.
#[derive(Debug, Parser)]
#[command(name = "spinbeam", version)]
struct Args {
    /// TOML configuration file (SI units); omitted keys take defaults.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Scenario to run; `all` runs both scenarios with the controller on and off.
    #[arg(long, value_enum, default_value = "free")]
    scenario: ScenarioArg,

    #[arg(long, value_enum, default_value = "on")]
    controller: Switch,

    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Time step (s).
    #[arg(long)]
    dt: Option<f64>,

    /// Final time (s).
    #[arg(long)]
    tfinal: Option<f64>,

    /// Base rotation rate (rad/s).
    #[arg(long)]
    omega: Option<f64>,

    /// Modes per field.
    #[arg(long)]
    modes: Option<usize>,

    /// Reserved; runs are deterministic and ignore it.
    #[arg(long)]
    seed: Option<u64>,

    /// Also write the assembled matrices as plain text to this path.
    #[arg(long)]
    export_matrices: Option<PathBuf>,
}

fn run(args: Args) -> Result<(), CliError> {
    let mut config = match &args.config {
        Some(path) => load_config(path)?,
        None => Config::default(),
    };
    if let Some(dt) = args.dt {
        config.sim.dt = dt;
    }
    if let Some(t) = args.tfinal {
        config.sim.t_final = t;
    }
    if let Some(w) = args.omega {
        config.sim.omega = w;
    }
    if let Some(n) = args.modes {
        config.sim.modes = n;
    }
    let prepared = config.prepare()?;

    if let Some(path) = &args.export_matrices {
        export_matrices(&prepared.matrices, path)?;
    }
    std::fs::create_dir_all(&args.out).map_err(|source| CliError::Write {
        path: args.out.clone(),
        source,
    })?;

    let runs: Vec<(ScenarioKind, bool)> = match args.scenario {
        ScenarioArg::Free => vec![(ScenarioKind::Free, args.controller == Switch::On)],
        ScenarioArg::Disturbance => vec![(ScenarioKind::Disturbance, args.controller == Switch::On)],
        ScenarioArg::All => ScenarioKind::ALL
            .iter()
            .flat_map(|k| [(*k, false), (*k, true)])
            .collect(),
    };

    let results: Vec<Result<(), CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = runs
            .iter()
            .map(|&(kind, controlled)| {
                let (config, prepared, out) = (&config, &prepared, &args.out);
                scope.spawn(move || execute(config, prepared, kind, controlled, out))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("scenario thread panicked")).collect()
    });
    results.into_iter().collect()
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
