//! `key = value` config files whose keys mirror the long flags.
//!
//! File entries are spliced into the argument list right after the
//! subcommand path, skipping any key that already appears on the command
//! line, so explicit flags always win.

use std::collections::HashSet;
use std::fs;

#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn parse(text: &str) -> Result<Vec<(String, String)>, UsageError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| UsageError(format!("config line {}: expected key = value", i + 1)))?;
        let key = k.trim().trim_start_matches("--");
        if key.is_empty() || key == "config" {
            return Err(UsageError(format!(
                "config line {}: invalid key `{}`",
                i + 1,
                k.trim()
            )));
        }
        out.push((key.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn flag_name(token: &str) -> Option<&str> {
    let rest = token.strip_prefix("--")?;
    Some(rest.split_once('=').map_or(rest, |(k, _)| k))
}

fn takes_no_value(token: &str) -> bool {
    matches!(token, "--help" | "--version") || token.contains('=')
}

/// Index just past the subcommand path (`mode period`, `stationary`, ...).
fn subcommand_end(argv: &[String]) -> usize {
    let mut i = 1;
    let mut found: Vec<usize> = Vec::new();
    while i < argv.len() {
        let t = argv[i].as_str();
        if t == "--" {
            break;
        }
        if t.starts_with("--") {
            i += if takes_no_value(t) { 1 } else { 2 };
            continue;
        }
        if t.starts_with('-') && t.len() > 1 && t.parse::<f64>().is_err() {
            i += 1;
            continue;
        }
        found.push(i);
        let needed = if argv[found[0]] == "stationary" { 1 } else { 2 };
        if found.len() == needed {
            break;
        }
        i += 1;
    }
    found.last().map_or(argv.len(), |&j| j + 1)
}

fn config_path(argv: &[String]) -> Result<Option<String>, UsageError> {
    for (i, t) in argv.iter().enumerate() {
        if let Some(v) = t.strip_prefix("--config=") {
            return Ok(Some(v.to_string()));
        }
        if t == "--config" {
            return argv
                .get(i + 1)
                .map(|v| Some(v.clone()))
                .ok_or_else(|| UsageError("--config needs a file path".into()));
        }
    }
    Ok(None)
}

pub fn inject(argv: Vec<String>) -> Result<Vec<String>, UsageError> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| UsageError(format!("cannot read config {path}: {e}")))?;
    let entries = parse(&text)?;
    let present: HashSet<&str> = argv.iter().filter_map(|t| flag_name(t)).collect();
    let extra: Vec<String> = entries
        .into_iter()
        .filter(|(k, _)| !present.contains(k.as_str()))
        .flat_map(|(k, v)| [format!("--{k}"), v])
        .collect();
    let at = subcommand_end(&argv);
    let mut out = argv;
    out.splice(at..at, extra);
    Ok(out)
}
