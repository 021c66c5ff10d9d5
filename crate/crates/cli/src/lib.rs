//! Job files, report rendering and the reproduction table behind the
//! `brauerkit` binary.

pub mod job;
pub mod report;
pub mod reproduce;
pub mod run;

use std::fmt;

pub use job::{JobSpec, Output, Overrides, SurfaceKind};
pub use report::{Report, Value, SCHEMA};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    /// Unreadable input, a malformed document or polynomial, or an invalid job.
    Parse(String),
    /// A computation failed; `module` names the stage.
    Pipeline { module: &'static str, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Pipeline { .. } => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Pipeline { module, message } => write!(f, "{module}: {message}"),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

/// Parse, check the kind against the subcommand, run and render.
pub fn run_document(
    src: &str,
    overrides: Overrides,
    kinds: &[SurfaceKind],
    format: Format,
) -> Result<String, CliError> {
    let job = JobSpec::parse(src, overrides)?;
    if !kinds.is_empty() && !kinds.contains(&job.kind) {
        let names: Vec<String> = kinds.iter().map(|k| k.to_string()).collect();
        return Err(CliError::Parse(format!("surface.kind is {}, this command takes {}", job.kind, names.join(" or "))));
    }
    let report = run::run(&job)?;
    Ok(match format {
        Format::Text => report.render_text(),
        Format::Machine => report.render_machine(),
    })
}
