//! Command-line front end for the `cospec` library.

pub mod checks;
pub mod commands;
pub mod corpus;
pub mod failure;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use anyhow::{Context, Result};
use clap::Parser;

use commands::{dispatch, Cli, Sink};
use failure::{classify, ExitClass, UsageError};

/// Environment variable capping worker threads.
pub const THREADS_ENV: &str = "COSPEC_THREADS";

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| UsageError::Invalid(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("cannot configure the thread pool")?;
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    configure_threads()?;
    let (format, quiet) = (cli.format, cli.quiet);
    match &cli.output {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            dispatch(cli.command, &mut Sink { out: &mut w, format, quiet })?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            dispatch(cli.command, &mut Sink { out: &mut lock, format, quiet })?;
            lock.flush()?;
        }
    }
    Ok(())
}

/// A closed downstream pipe (`cospec ... | head`) ends output quietly.
fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe))
}

/// Parses arguments, runs the command, and returns the exit code.
pub fn run<I, T>(args: I) -> ExitClass
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitClass::Input } else { ExitClass::Success };
        }
    };
    match execute(cli) {
        Ok(()) => ExitClass::Success,
        Err(e) if is_broken_pipe(&e) => ExitClass::Success,
        Err(e) => {
            let class = classify(&e);
            eprintln!("error: {e:#}");
            class
        }
    }
}
