use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use workbench::{emit_report, parse_spec, run_all, Format, Status};

#[derive(Parser)]
#[command(name = "workbench", version, about = "Clone and ω-clone computations from a definition file")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the tasks of a definition file.
    Run {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        /// Run only the tasks with this name (or kind, for unnamed tasks).
        #[arg(long)]
        task: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Lines,
}

fn main() -> ExitCode {
    let Command::Run { file, format, task } = Cli::parse().command;
    let text = match std::fs::read_to_string(&file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    let spec = match parse_spec(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return ExitCode::from(2);
        }
    };
    if let Some(name) = &task {
        if !spec.tasks.iter().any(|t| &t.label() == name) {
            eprintln!("error: no task named `{name}`");
            return ExitCode::from(2);
        }
    }
    let reports = run_all(&spec, task.as_deref());
    let format = match format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Lines => Format::Lines,
    };
    print!("{}", emit_report(&reports, spec.domain.size(), format));
    if reports.iter().all(|r| r.status == Status::Pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
