//! TOML config files, merged underneath explicit flags.
//!
//! Keys are flag names (`design-eps` or `design_eps`). Top-level keys apply
//! to every command; a table named after a subcommand applies only to it:
//!
//! ```toml
//! format = "csv"
//!
//! [simulate]
//! r = 2
//! m = 6
//! assign = "0,1"
//! oracle = false
//! ```
//!
//! The keys become ordinary arguments placed right after the subcommand, so
//! any flag given on the command line comes later and wins.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};
use toml::{Table, Value};

pub const SUBCOMMANDS: [&str; 5] = ["analyze", "search", "prove", "curves", "simulate"];

/// Global options that take a value, needed to find the subcommand token.
const VALUED_GLOBALS: [&str; 3] = ["--format", "--out", "--config"];

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

fn subcommand_position(args: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if VALUED_GLOBALS.contains(&s.as_ref()) {
            i += 2;
            continue;
        }
        if SUBCOMMANDS.contains(&s.as_ref()) {
            return Some(i);
        }
        i += 1;
    }
    None
}

fn scalar(key: &str, v: &Value) -> Result<String> {
    Ok(match v {
        Value::String(s) => s.clone(),
        Value::Integer(i) => i.to_string(),
        Value::Float(f) => f.to_string(),
        Value::Boolean(b) => b.to_string(),
        Value::Datetime(d) => d.to_string(),
        Value::Array(_) | Value::Table(_) => bail!("config key {key:?}: nested values are not supported"),
    })
}

/// Flag arguments for one table of keys.
pub fn table_to_args(table: &Table) -> Result<Vec<OsString>> {
    let mut out = Vec::new();
    for (key, value) in table {
        if key == "config" || value.is_table() {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Boolean(true) => out.push(flag.into()),
            Value::Boolean(false) => {}
            Value::Array(items) => {
                let joined = items
                    .iter()
                    .map(|v| scalar(key, v))
                    .collect::<Result<Vec<_>>>()?
                    .join(",");
                out.push(flag.into());
                out.push(joined.into());
            }
            v => {
                out.push(flag.into());
                out.push(scalar(key, v)?.into());
            }
        }
    }
    Ok(out)
}

pub fn config_args(text: &str, subcommand: &str) -> Result<Vec<OsString>> {
    let table: Table = text.parse().context("config is not valid TOML")?;
    let mut args = table_to_args(&table)?;
    if let Some(section) = table.get(subcommand) {
        match section.as_table() {
            Some(t) => args.extend(table_to_args(t)?),
            None => bail!("config key {subcommand:?} must be a table"),
        }
    }
    Ok(args)
}

/// Returns `args` with the `--config` file's settings spliced in.
pub fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let Some(pos) = subcommand_position(&args) else {
        return Ok(args);
    };
    let path = Path::new(&path);
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let sub = args[pos].to_string_lossy().into_owned();
    let extra = config_args(&text, &sub)?;
    let mut merged = args;
    merged.splice(pos + 1..pos + 1, extra);
    Ok(merged)
}
