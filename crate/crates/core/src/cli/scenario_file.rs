//! Line-oriented `key = value` scenario files.
//!
//! ```text
//! # ten static nodes, one flow
//! node_count = 10
//! speed_max = 0
//! flow.0.src = 0
//! flow.0.dst = 9
//! ```
//!
//! `#` starts a comment. Keys are the ones in
//! [`DEFAULTS`](crate::simulator::DEFAULTS); everything except
//! `node_count` is optional.

use std::path::Path;

use thiserror::Error;

use crate::simulator::{Scenario, ScenarioError};

#[derive(Debug, Error)]
pub enum ScenarioFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("unknown keys: {}", .0.join(", "))]
    UnknownKeys(Vec<String>),
    #[error("missing required key `{0}`; all other keys have defaults (run `dream-olsr keys` to list them)")]
    MissingKey(&'static str),
    #[error("override `{0}` is not of the form key=value")]
    BadOverride(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

/// Parse scenario text, then apply `overrides` (`key=value`) in order.
pub fn parse_scenario(text: &str, overrides: &[String]) -> Result<Scenario, ScenarioFileError> {
    let mut s = Scenario::default();
    let mut unknown = Vec::new();
    let mut have_nodes = false;
    let mut assign = |s: &mut Scenario, key: &str, value: &str, line: Option<usize>| match s.set(key, value) {
        Ok(()) => {
            have_nodes |= key.trim() == "node_count";
            Ok(())
        }
        Err(ScenarioError::UnknownKey(k)) => {
            unknown.push(k);
            Ok(())
        }
        Err(e) => Err(match line {
            Some(line) => ScenarioFileError::Line { line, message: e.to_string() },
            None => e.into(),
        }),
    };
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(ScenarioFileError::Line {
                line: i + 1,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        assign(&mut s, k.trim(), v.trim(), Some(i + 1))?;
    }
    for o in overrides {
        let (k, v) = o.split_once('=').ok_or_else(|| ScenarioFileError::BadOverride(o.clone()))?;
        assign(&mut s, k.trim(), v.trim(), None)?;
    }
    if !unknown.is_empty() {
        return Err(ScenarioFileError::UnknownKeys(unknown));
    }
    if !have_nodes {
        return Err(ScenarioFileError::MissingKey("node_count"));
    }
    s.validate()?;
    Ok(s)
}

pub fn load_scenario(path: &Path, overrides: &[String]) -> Result<Scenario, ScenarioFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ScenarioFileError::Io { path: path.display().to_string(), source })?;
    parse_scenario(&text, overrides)
}
