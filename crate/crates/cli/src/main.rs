use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hotstart_cli::commands::{cmd_bench, cmd_exact, cmd_hotstart, cmd_spectrum, cmd_transform, cmd_vqe};
use hotstart_cli::pipeline::transform;
use hotstart_cli::{CliError, ExperimentConfig, RawConfig};
use hotstart_core::{Encoding, SpinOrder};

/// Hot-Start VQE experiments.
#[derive(Debug, Parser)]
#[command(name = "hotstart", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode an FCIDUMP file into a qubit Hamiltonian file.
    Transform {
        #[arg(long)]
        fcidump: PathBuf,
        #[arg(long, default_value = "bk")]
        encoding: Encoding,
        /// Spatial orbitals frozen as doubly occupied.
        #[arg(long, value_delimiter = ',')]
        frozen_occupied: Vec<usize>,
        /// Spatial orbitals dropped as empty.
        #[arg(long, value_delimiter = ',')]
        removed_virtual: Vec<usize>,
        #[arg(long, default_value = "interleaved")]
        spin_order: SpinOrder,
        /// Omit the operator-class column.
        #[arg(long)]
        no_classes: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact ground energy of a Hamiltonian file (JSON).
    Exact {
        hamiltonian: PathBuf,
        /// Include every eigenvalue.
        #[arg(long)]
        full_spectrum: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Plain VQE, one BFGS run per seed.
    Vqe(ExperimentArgs),
    /// Hot-Start VQE, one chain per seed.
    Hotstart(ExperimentArgs),
    /// Cross product of depths, seeds, methods and orderings.
    Bench(ExperimentArgs),
    /// Sorted |coefficient| table of a Hamiltonian file (CSV).
    Spectrum {
        hamiltonian: PathBuf,
        /// Reference energy for the header; computed exactly when omitted.
        #[arg(long, allow_hyphen_values = true)]
        fci: Option<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// Flat key = value configuration file.
    #[arg(short, long)]
    config: Option<PathBuf>,
    /// Override a configuration key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    #[arg(long)]
    input: Option<String>,
    #[arg(short, long)]
    output: Option<String>,
    #[arg(long)]
    seeds: Option<String>,
    #[arg(long)]
    depth: Option<String>,
    #[arg(long)]
    depths: Option<String>,
    /// Worker threads; 0 picks the core count.
    #[arg(long)]
    jobs: Option<String>,
}

impl ExperimentArgs {
    fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut raw = match &self.config {
            Some(p) => RawConfig::load(p)?,
            None => RawConfig::default(),
        };
        let flags = [
            ("input", &self.input),
            ("output", &self.output),
            ("seeds", &self.seeds),
            ("depth", &self.depth),
            ("depths", &self.depths),
            ("jobs", &self.jobs),
        ];
        let mut overrides: Vec<String> = flags
            .iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| format!("{k}={v}")))
            .collect();
        overrides.extend(self.overrides.iter().cloned());
        raw.apply_overrides(&overrides)?;
        raw.resolve()
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Transform {
            fcidump,
            encoding,
            frozen_occupied,
            removed_virtual,
            spin_order,
            no_classes,
            output,
        } => {
            let mut file = transform(&fcidump, encoding, &frozen_occupied, &removed_virtual, spin_order)?;
            if no_classes {
                file.hamiltonian = file.hamiltonian.without_classes();
            }
            cmd_transform(&file, output.as_deref())
        }
        Command::Exact {
            hamiltonian,
            full_spectrum,
            output,
        } => cmd_exact(&hamiltonian, full_spectrum, output.as_deref()),
        Command::Vqe(args) => cmd_vqe(&args.resolve()?),
        Command::Hotstart(args) => cmd_hotstart(&args.resolve()?),
        Command::Bench(args) => cmd_bench(&args.resolve()?).map(|_| ()),
        Command::Spectrum {
            hamiltonian,
            fci,
            output,
        } => cmd_spectrum(&hamiltonian, fci, output.as_deref()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hotstart: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
