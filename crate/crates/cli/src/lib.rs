//! Declarative scenario runner for `supremal-core`.
//!
//! A scenario is one TOML file: a domain, named supremands and fields, and
//! an ordered list of operations. Running it yields a [`Report`] with a pass
//! or fail line per assertion and CSV tables. Built-in scenarios ship with
//! the binary; see [`builtins`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

pub mod builtins;
pub mod config;
pub mod csvio;
pub mod report;
pub mod resolve;
mod runner;

pub use config::{parse, Operation, Scenario};
pub use report::{Report, Table};
pub use runner::{affine_witness, run, run_scenario, run_text, RunOptions, DEFAULT_TOL};

/// Anything that stops a scenario from producing a report. These map to
/// exit code 2; failed assertions are part of a report and map to 1.
#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported scenario version {0} (this runner reads version {v})", v = config::VERSION)]
    Version(u32),
    #[error("operation {operation}: unknown {kind} `{name}`")]
    Unresolved {
        operation: usize,
        kind: &'static str,
        name: String,
    },
    #[error("unknown built-in scenario `{0}`")]
    UnknownBuiltin(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("operation {index} ({label}): {message}")]
    Operation {
        index: usize,
        label: String,
        message: String,
    },
}

impl ScenarioError {
    pub const EXIT_CODE: u8 = 2;
}
