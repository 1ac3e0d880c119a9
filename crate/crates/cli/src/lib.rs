//! The `maghom` command-line tool.

pub mod args;
pub mod cache;
pub mod commands;
pub mod input;
pub mod render;

use std::fmt;
use std::io::Write;

use clap::Parser;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Fail = 1,
    Inapplicable = 2,
    Usage = 3,
    ResourceGuard = 4,
    Internal = 5,
}

/// Bad arguments or unparsable input.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// The generator budget ran out before every requested row was computed.
#[derive(Debug)]
pub struct ResourceGuard {
    pub computed_through: Option<usize>,
    pub max_trails: u128,
}

impl fmt::Display for ResourceGuard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.computed_through {
            Some(l) => write!(f, "resource guard: rows above l = {l} were not computed")?,
            None => write!(f, "resource guard: some rows were not computed")?,
        }
        write!(
            f,
            " (more than {} generators); rerun with a larger --max-trails or a smaller --lmax",
            self.max_trails
        )
    }
}

impl std::error::Error for ResourceGuard {}

fn classify(e: &anyhow::Error) -> Exit {
    for cause in e.chain() {
        if cause.is::<UsageError>() {
            return Exit::Usage;
        }
        if cause.is::<ResourceGuard>() {
            return Exit::ResourceGuard;
        }
    }
    Exit::Internal
}

/// Parses `args` and runs the command, writing to the given streams.
/// Returns the process exit code.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return Exit::Usage as i32;
            }
            let _ = write!(out, "{}", e.render());
            return Exit::Ok as i32;
        }
    };
    match commands::run(cli, out, err) {
        Ok(code) => code as i32,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            classify(&e) as i32
        }
    }
}
