use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use planar_casimir::Severity;
use planar_casimir_cli::{compute, parse_runspec, write_csv, CliError, Geometry, Mode};

#[derive(Parser)]
#[command(name = "casimir", version, about = "Casimir pressure sweeps for planar multilayers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generic multilayer through the reflection recursion.
    Force(Opts),
    /// Closed form for [wall | gap | wall].
    Halfspaces(Opts),
    /// Closed form for [wall | gap | plate | exterior].
    PlateWall(Opts),
    /// Net force on a slab in a cavity, [wall | gap | slab | gap | wall].
    /// The sweep sets the designated gap; the other gap gets the rest.
    SlabCavity(Opts),
    /// Closed form for [exterior | plate | gap | plate | exterior].
    TwoPlates(Opts),
    /// Validate the run description and print diagnostics.
    Check(Opts),
}

#[derive(Args)]
struct Opts {
    /// Run description file.
    #[arg(long, value_name = "FILE")]
    spec: PathBuf,
    /// CSV destination; overrides `output` in the file. Default: stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Relative tolerance, overriding `rel_tol` in the file.
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
    /// Worker threads; 0 uses every CPU.
    #[arg(long, value_name = "N", default_value_t = 0)]
    threads: usize,
    /// Suppress warnings and the summary line.
    #[arg(long)]
    quiet: bool,
}

fn run(command: Command) -> Result<(), CliError> {
    let (mode, opts) = match command {
        Command::Force(o) => (Some(Mode::Force), o),
        Command::Halfspaces(o) => (Some(Mode::HalfSpaces), o),
        Command::PlateWall(o) => (Some(Mode::PlateWall), o),
        Command::SlabCavity(o) => (Some(Mode::SlabCavity), o),
        Command::TwoPlates(o) => (Some(Mode::TwoPlates), o),
        Command::Check(o) => (None, o),
    };
    let text = fs::read_to_string(&opts.spec)
        .map_err(|e| CliError::Io(format!("{}: {e}", opts.spec.display())))?;
    let spec = parse_runspec(&text)
        .map_err(|e| match e {
            CliError::Parse { line, message } => CliError::Validation(format!(
                "{}:{line}: {message}",
                opts.spec.display()
            )),
            other => other,
        })?;
    let mut settings = spec.settings;
    if let Some(tol) = opts.tol {
        settings.rel_tol = tol;
        settings
            .validate()
            .map_err(|e| CliError::Validation(e.to_string()))?;
    }

    let stack = spec.stack()?;
    let diagnostics = stack.validate();
    let Some(mode) = mode else {
        for d in &diagnostics {
            println!("{d}");
        }
        println!(
            "ok: {} layers, gap {}, {} rows",
            stack.layers().len(),
            stack.gap_index(),
            spec.rows().len()
        );
        return Ok(());
    };
    if !opts.quiet {
        for d in diagnostics.iter().filter(|d| d.severity == Severity::Warning) {
            eprintln!("{d}");
        }
    }

    let geometry = Geometry::prepare(&spec, mode)?;
    let rows = compute(&geometry, &spec, &settings, opts.threads)?;

    let mut csv = Vec::new();
    write_csv(&rows, &mut csv).map_err(|e| CliError::Io(e.to_string()))?;
    match opts.out.as_ref().or(spec.output.as_ref()) {
        Some(path) => fs::write(path, &csv)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => io::stdout()
            .write_all(&csv)
            .map_err(|e| CliError::Io(e.to_string()))?,
    }

    let failed: Vec<_> = rows.iter().filter(|r| !r.is_ok()).collect();
    for r in &failed {
        if let Err(e) = &r.outcome {
            eprintln!("a = {:e} m, T = {} K: {e}", r.width, r.temperature);
        }
    }
    if !opts.quiet {
        eprintln!("{} of {} rows ok", rows.len() - failed.len(), rows.len());
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(format!("{} rows failed", failed.len())))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the exit code of a bad run description
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
