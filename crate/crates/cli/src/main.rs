use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use zeno_cli::config::{apply_document, emit_config, Format, Task};
use zeno_cli::output::{render_csv, render_json};
use zeno_cli::presets::Preset;
use zeno_cli::{run, CliError, ConfigError, RunConfig};

#[derive(Parser)]
#[command(name = "qzeno", version, about = "Qubit decoherence and Zeno/anti-Zeno decay beyond the rotating-wave approximation")]
struct Cli {
    /// Configuration file of `section.key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one key, e.g. `--set bath.alpha=0.1`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    format: Option<FormatArg>,
    /// Worker threads for grid cells (0 = all CPUs).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Without a command the config's `task` runs.
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PresetArg {
    Fig1,
    Fig2a,
    Fig2b,
    Fig3,
    Fig4,
}

#[derive(Subcommand)]
enum Command {
    /// Self-consistent renormalization factor.
    Eta,
    /// J, R, Gamma and f on a frequency grid.
    Spectrum,
    /// Coherence <sigma_x(t)> with pole frequency and width.
    Dynamics,
    /// Decay rates under repeated measurement.
    Zeno,
    /// Discretized-bath reference next to the formula results.
    Oracle,
    /// Run a named figure preset.
    Reproduce {
        #[arg(value_enum)]
        preset: PresetArg,
    },
    /// Print the effective configuration and exit.
    Config,
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(format!("cannot read {}: {e}", path.display())))?;
        apply_document(&mut cfg, &text)?;
    }
    for o in &cli.overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| ConfigError::new(format!("--set expects KEY=VALUE, got `{o}`")))?;
        cfg.set(k.trim(), v.trim())
            .map_err(|e| ConfigError::new(format!("--set {o}: {}", e.message)))?;
    }
    match &cli.command {
        Some(Command::Eta) => cfg.task = Task::Eta,
        Some(Command::Spectrum) => cfg.task = Task::Spectrum,
        Some(Command::Dynamics) => cfg.task = Task::Dynamics,
        Some(Command::Zeno) => cfg.task = Task::Zeno,
        Some(Command::Oracle) => cfg.task = Task::Oracle,
        Some(Command::Reproduce { preset }) => {
            cfg.task = Task::Reproduce;
            cfg.preset = Some(match preset {
                PresetArg::Fig1 => Preset::Fig1,
                PresetArg::Fig2a => Preset::Fig2a,
                PresetArg::Fig2b => Preset::Fig2b,
                PresetArg::Fig3 => Preset::Fig3,
                PresetArg::Fig4 => Preset::Fig4,
            });
        }
        Some(Command::Config) | None => {}
    }
    if let Some(p) = &cli.out {
        cfg.output.path = Some(p.clone());
    }
    if let Some(f) = cli.format {
        cfg.output.format = match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
    }
    if let Some(j) = cli.jobs {
        cfg.jobs = j;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = build_config(cli)?;
    if matches!(cli.command, Some(Command::Config)) {
        print!("{}", emit_config(&cfg));
        return Ok(());
    }
    let start = Instant::now();
    let report = run(&cfg)?;
    let elapsed = start.elapsed().as_secs_f64();
    for w in report.warnings() {
        log::warn!("{w}");
    }
    let text = match cfg.output.format {
        Format::Csv => render_csv(&report),
        Format::Json => render_json(&report, &cfg, elapsed),
    };
    match &cfg.output.path {
        Some(path) => std::fs::write(path, text)?,
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
            other => other?,
        },
    }
    log::info!("{} finished in {elapsed:.2} s", report.task.as_str());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qzeno: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
