use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use weyl1d_cli::config::{ExperimentConfig, TaskKind};
use weyl1d_cli::runner::{fixtures_table, run_and_write, summary_line, Overrides};
use weyl1d_cli::{exit_codes, CliError};

/// Batch driver for one-dimensional weighted-Laplacian experiments.
#[derive(Parser)]
#[command(
    name = "weyl1d",
    version,
    about = "Spectra, eigenvalue counting asymptotics, ball-measure ratio integrals,\n\
             and log-density convexity checks on interval and circle model spaces.",
    after_help = "EXIT CODES:\n  \
        0  all quantitative targets met\n  \
        1  configuration error (malformed config, unknown key, task mismatch)\n  \
        2  quantitative target missed\n  \
        3  filesystem error\n  \
        4  numerical computation error\n\n\
        ENVIRONMENT:\n  \
        WEYL1D_CACHE_DIR  directory for the binary spectrum cache"
)]
struct Cli {
    /// Experiment config (JSON; see README for the schema)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides the config's "output" field)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for grid evaluations (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Multiplies every task tolerance (stress or relax targets)
    #[arg(long, global = true, default_value_t = 1.0)]
    tolerance_scale: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the eigenvalue spectrum of the weighted Laplacian
    Spectrum,
    /// Ratio curve N(lambda)/sqrt(lambda) plus the dimension classifier
    Weyl,
    /// Ball-measure ratio integral with r -> 0 extrapolation
    RatioIntegral,
    /// (K, N-1)-convexity scan of the log-density
    ConvexityCheck,
    /// Scaled heat trace against its lower bound
    HeatTrace,
    /// Abelian theorem on a synthetic measure
    Abelian,
    /// List the bundled model spaces and their reference quantities
    Fixtures,
}

impl Command {
    fn task_kind(&self) -> Option<TaskKind> {
        match self {
            Command::Spectrum => Some(TaskKind::Spectrum),
            Command::Weyl => Some(TaskKind::Weyl),
            Command::RatioIntegral => Some(TaskKind::RatioIntegral),
            Command::ConvexityCheck => Some(TaskKind::ConvexityCheck),
            Command::HeatTrace => Some(TaskKind::HeatTrace),
            Command::Abelian => Some(TaskKind::Abelian),
            Command::Fixtures => None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("config error: --threads must be at least 1");
            return ExitCode::from(exit_codes::CONFIG as u8);
        }
        // best effort; the pool falls back to the default on failure
        let _ = weyl1d::concurrency::configure_threads(threads);
    }

    match run_command(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run_command(cli: &Cli) -> Result<i32, CliError> {
    let Some(task) = cli.command.task_kind() else {
        print!("{}", fixtures_table()?);
        return Ok(exit_codes::PASS);
    };

    let config_path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config PATH is required for this task".into()))?;
    let config = ExperimentConfig::load(config_path)?;
    if config.task != task {
        return Err(CliError::Config(format!(
            "config task \"{}\" does not match the \"{}\" subcommand",
            config.task.name(),
            task.name()
        )));
    }

    let overrides = Overrides {
        tolerance_scale: cli.tolerance_scale,
    };
    let (outcome, out_dir) = run_and_write(&config, config_path, cli.out.as_deref(), &overrides)?;
    println!("{}", summary_line(&outcome));
    println!("artifacts: {}", out_dir.to_string_lossy());
    Ok(if outcome.pass {
        exit_codes::PASS
    } else {
        exit_codes::TARGET_MISS
    })
}
