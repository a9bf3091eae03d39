use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use fracsolve_cli::{execute, parse_config, CliError, Command};

#[derive(Debug, Parser)]
#[command(name = "fracsolve", version, about = "Multi-term time-fractional solver")]
struct Cli {
    /// Command to run.
    #[arg(value_enum)]
    command: Command,
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output CSV; defaults to [output] path, then stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Disable Richardson extrapolation.
    #[arg(long)]
    no_richardson: bool,
    /// Also write the kernel curves (nu-star).
    #[arg(long)]
    emit_samples: bool,
}

fn samples_path(out: &Path) -> PathBuf {
    out.with_extension("samples.csv")
}

fn run(cli: Cli) -> Result<(), CliError> {
    let text = fs::read_to_string(&cli.config).map_err(|e| {
        CliError::Config(format!("cannot read {}: {e}", cli.config.display()))
    })?;
    let mut spec = parse_config(&text, Some(cli.command))?;
    if cli.out.is_some() {
        spec.output = cli.out;
    }
    if cli.no_richardson {
        spec.richardson = false;
    }
    if cli.emit_samples {
        spec.emit_samples = true;
    }
    let output = execute(&spec, &mut io::stderr())?;
    match &spec.output {
        Some(path) => {
            fs::write(path, &output.table)?;
            if let Some(samples) = &output.samples {
                fs::write(samples_path(path), samples)?;
            }
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(output.table.as_bytes())?;
            if let Some(samples) = &output.samples {
                stdout.write_all(b"\n")?;
                stdout.write_all(samples.as_bytes())?;
            }
            stdout.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fracsolve: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
