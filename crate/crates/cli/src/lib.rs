//! Command-line front end for `polyspace`: argument parsing, output records
//! and the verification harness.

pub mod args;
pub mod commands;
pub mod error;
pub mod record;
pub mod sampler;
pub mod verify;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};
use error::{CliError, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE};
use record::{Inputs, OutputRecord, ResultRow};

/// What a run printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first), runs the command and renders its output.
pub fn run<I, T>(argv: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => RunOutput {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => RunOutput {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let format = cli.format;
    match with_threads(cli.threads, || dispatch(&cli, &argv[1..])) {
        Ok((record, code, notes)) => RunOutput {
            code,
            stdout: record.render(format),
            stderr: notes.iter().map(|n| format!("{n}\n")).collect(),
        },
        Err(e) => RunOutput {
            code: e.code,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

type Dispatched = (OutputRecord, i32, Vec<String>);

fn dispatch(cli: &Cli, argv: &[String]) -> Result<Dispatched, CliError> {
    if let Command::Replay(r) = &cli.command {
        return replay_file(&r.record, argv);
    }
    let out = commands::execute(&cli.command, argv)?;
    Ok((out.record, out.code, out.notes))
}

/// Re-runs the arguments stored in `record` and returns the fresh record.
pub fn replay(record: &OutputRecord) -> Result<OutputRecord, CliError> {
    let mut argv = vec!["polyspace".to_string()];
    argv.extend(record.argv.iter().cloned());
    let cli = Cli::try_parse_from(&argv).map_err(|e| CliError::usage(e.to_string()))?;
    if matches!(cli.command, Command::Replay(_)) {
        return Err(CliError::usage("a replay record cannot itself be replayed"));
    }
    with_threads(cli.threads, || commands::execute(&cli.command, &argv[1..])).map(|o| o.record)
}

fn replay_file(path: &std::path::Path, argv: &[String]) -> Result<Dispatched, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let stored: OutputRecord = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{} is not an output record: {e}", path.display())))?;
    let fresh = replay(&stored)?;
    let same = stored.same_result(&fresh);
    let rec = OutputRecord {
        command: "replay".into(),
        argv: argv.to_vec(),
        inputs: Inputs::default(),
        results: vec![ResultRow::new("replay", if same { "identical" } else { "differs" })],
        matched: Some(same),
        elapsed_ms: fresh.elapsed_ms,
    };
    let mut notes = Vec::new();
    if !same {
        notes.push(format!("replayed record differs:\n{}", fresh.render(Format::Json)));
    }
    Ok((rec, if same { EXIT_OK } else { EXIT_MISMATCH }, notes))
}

#[cfg(feature = "parallel")]
fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> Result<R, CliError> + Send) -> Result<R, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    match threads {
        Some(0) => return Err(CliError::usage("--threads must be at least 1")),
        Some(n) => builder = builder.num_threads(n),
        None => {}
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::usage(format!("cannot start worker pool: {e}")))?;
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
fn with_threads<R>(threads: Option<usize>, f: impl FnOnce() -> Result<R, CliError>) -> Result<R, CliError> {
    if threads == Some(0) {
        return Err(CliError::usage("--threads must be at least 1"));
    }
    f()
}
