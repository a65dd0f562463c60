//! Scenarios compiled into the binary.

use std::path::Path;

use crate::{run_text, Report, RunOptions, ScenarioError};

/// Sorted by name.
const BUILTINS: &[(&str, &str)] = &[
    ("example-boh", include_str!("../scenarios/example-boh.toml")),
    (
        "example-fg-meet",
        include_str!("../scenarios/example-fg-meet.toml"),
    ),
    (
        "lipschitz-lshape",
        include_str!("../scenarios/lipschitz-lshape.toml"),
    ),
    (
        "main-theorem-suite",
        include_str!("../scenarios/main-theorem-suite.toml"),
    ),
    (
        "sandwich-suite",
        include_str!("../scenarios/sandwich-suite.toml"),
    ),
];

pub fn list_builtins() -> Vec<&'static str> {
    BUILTINS.iter().map(|(n, _)| *n).collect()
}

pub fn builtin_text(name: &str) -> Option<&'static str> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn run_builtin(name: &str, opts: &RunOptions) -> Result<Report, ScenarioError> {
    let text = builtin_text(name).ok_or_else(|| ScenarioError::UnknownBuiltin(name.to_string()))?;
    run_text(text, name, Path::new("."), opts)
}
