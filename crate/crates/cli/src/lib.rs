//! Command-line front end for `polarrep`.
//!
//! Every command builds a report, renders it as JSON (wrapped in an envelope
//! recording the full parameter set) or CSV, and exits 0 only if the checks
//! the command performs succeed. Failures print a JSON object with a
//! `reason` on stderr:
//!
//! | exit | meaning                                      |
//! |------|----------------------------------------------|
//! | 0    | success                                      |
//! | 1    | a certification or validation failed         |
//! | 2    | invalid arguments, config or I/O error       |

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use polarrep::patterns::FamilyKind;
use serde::Serialize;
use serde_json::json;

pub mod analyze;
pub mod config;
pub mod curves;
pub mod prove;
pub mod search;
pub mod simulate;
pub mod values;

#[cfg(test)]
mod end_to_end;

pub use analyze::{cmd_analyze, AnalyzeArgs, AnalyzeReport};
pub use curves::{cmd_curves, CurvesArgs, CurvesReport};
pub use prove::{cmd_prove, ProveArgs, ProveReport};
pub use search::{cmd_search, SearchArgs, SearchCmdReport};
pub use simulate::{cmd_simulate, SimulateArgs, SimulateReport};
use values::Format;

pub trait Report: Serialize {
    fn to_csv(&self) -> String;

    /// Why the command's own check failed, if it did.
    fn failure(&self) -> Option<String> {
        None
    }
}

#[derive(Debug, Parser)]
#[command(name = "polarrep", version, about = "Polar-coded repetition schemes over the erasure channel")]
#[command(args_override_self = true)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Omit the timestamp so reruns are byte-identical.
    #[arg(long, global = true)]
    pub reproducible: bool,
    /// TOML file of flag defaults; explicit flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Effective channels and capacity of one pattern assignment.
    Analyze(AnalyzeArgs),
    /// Exhaustive search for the best assignment in a family.
    Search(SearchArgs),
    /// Certify the capacity-gain inequality and emit its curves.
    Prove(ProveArgs),
    /// Capacity curves of repetition, proposed and irregular schemes.
    Curves(CurvesArgs),
    /// Monte Carlo or exhaustive erasure analysis of a finite-length code.
    Simulate(SimulateArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Search(_) => "search",
            Command::Prove(_) => "prove",
            Command::Curves(_) => "curves",
            Command::Simulate(_) => "simulate",
        }
    }
}

/// Family from `--family`, or the regular family with `r` blocks.
pub fn resolve_family(family: Option<FamilyKind>, r: Option<usize>) -> Result<FamilyKind> {
    match (family, r) {
        (Some(f), Some(r)) if f.kernel_size() != r => {
            bail!("--r {r} does not match family {f} ({} blocks)", f.kernel_size())
        }
        (Some(f), _) => Ok(f),
        (None, Some(r)) => Ok(format!("reg{r}").parse()?),
        (None, None) => bail!("one of --family or --r is required"),
    }
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(reason: impl std::fmt::Display) -> Self {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: json!({ "status": "error", "reason": reason.to_string() }).to_string() + "\n",
        }
    }
}

fn render<R: Report>(cli: &Cli, report: &R) -> Result<(String, Option<String>)> {
    let failure = report.failure();
    let body = match cli.format {
        Format::Csv => report.to_csv(),
        Format::Json => {
            let mut doc = json!({
                "tool": "polarrep",
                "version": env!("CARGO_PKG_VERSION"),
                "command": cli.command.name(),
                "parameters": &cli.command,
                "status": if failure.is_some() { "failed" } else { "ok" },
                "failure": &failure,
                "report": report,
            });
            if !cli.reproducible {
                let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
                doc["generated_at"] = json!(now);
            }
            serde_json::to_string_pretty(&doc)? + "\n"
        }
    };
    Ok((body, failure))
}

fn execute(cli: &Cli) -> Result<(String, Option<String>)> {
    match &cli.command {
        Command::Analyze(a) => render(cli, &cmd_analyze(a)?),
        Command::Search(a) => render(cli, &cmd_search(a)?),
        Command::Prove(a) => render(cli, &cmd_prove(a)?),
        Command::Curves(a) => render(cli, &cmd_curves(a)?),
        Command::Simulate(a) => render(cli, &cmd_simulate(a)?),
    }
}

/// Parses `args` (including the program name), runs the command and
/// reports what to print.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config::merge_config(args) {
        Ok(a) => a,
        Err(e) => return Outcome::error(format!("{e:#}")),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: e.to_string(),
                    stderr: String::new(),
                },
                _ => Outcome::error(e.render().to_string().trim_end()),
            };
        }
    };
    let (body, failure) = match execute(&cli) {
        Ok(r) => r,
        Err(e) => return Outcome::error(format!("{e:#}")),
    };
    let stdout = match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                return Outcome::error(format!("writing {}: {e}", path.display()));
            }
            String::new()
        }
        None => body,
    };
    match failure {
        None => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Some(reason) => Outcome {
            code: 1,
            stdout,
            stderr: json!({ "status": "failed", "command": cli.command.name(), "reason": reason }).to_string()
                + "\n",
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_ok(args: &[&str]) -> serde_json::Value {
        let mut full = vec!["polarrep", "--reproducible"];
        full.extend_from_slice(args);
        let out = run(full);
        assert_eq!(out.code, 0, "{}", out.stderr);
        serde_json::from_str(&out.stdout).unwrap()
    }

    #[test]
    fn family_resolution() {
        assert_eq!(resolve_family(None, Some(4)).unwrap(), FamilyKind::Regular { t: 2 });
        assert_eq!(resolve_family(Some(FamilyKind::Irregular4), Some(4)).unwrap(), FamilyKind::Irregular4);
        assert!(resolve_family(Some(FamilyKind::Irregular4), Some(2)).is_err());
        assert!(resolve_family(None, None).is_err());
        assert!(resolve_family(None, Some(3)).is_err());
    }

    #[test]
    fn analyze_envelope() {
        let v = run_ok(&["analyze", "--family", "reg2", "--assign", "1,1", "--grid", "1/2"]);
        assert_eq!(v["command"], "analyze");
        assert_eq!(v["status"], "ok");
        assert!(v.get("generated_at").is_none());
        assert_eq!(v["parameters"]["analyze"]["assign"], json!([1, 1]));
        assert_eq!(v["report"]["capacity"]["text"], "1/2 - 1/2*e^2");
        assert_eq!(v["report"]["table"][0]["capacity"]["exact"], "3/8");
    }

    #[test]
    fn timestamp_unless_reproducible() {
        let out = run(["polarrep", "curves", "--r", "2", "--grid", "1/2"]);
        assert_eq!(out.code, 0);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert!(v["generated_at"].is_u64());
    }

    #[test]
    fn later_flags_override_earlier() {
        let v = run_ok(&["curves", "--r", "2", "--r", "4", "--grid", "1/2"]);
        assert_eq!(v["report"]["r"], json!([4]));
    }

    #[test]
    fn errors_are_json() {
        let out = run(["polarrep", "analyze", "--assign", "0,9"]);
        assert_eq!(out.code, 2);
        let v: serde_json::Value = serde_json::from_str(&out.stderr).unwrap();
        assert_eq!(v["status"], "error");
        let out = run(["polarrep", "bogus"]);
        assert_eq!(out.code, 2);
        assert!(serde_json::from_str::<serde_json::Value>(&out.stderr).is_ok());
    }

    #[test]
    fn refuted_custom_exits_nonzero() {
        let out = run(["polarrep", "prove", "--custom", "0"]);
        assert_eq!(out.code, 1);
        let v: serde_json::Value = serde_json::from_str(&out.stderr).unwrap();
        assert_eq!(v["status"], "failed");
        let out = run(["polarrep", "prove", "--custom", "0,1,-1"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
    }

    #[test]
    fn help_is_not_an_error() {
        let out = run(["polarrep", "--help"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.contains("simulate"));
    }
}
