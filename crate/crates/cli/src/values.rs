//! Argument value types shared by the subcommands.

use std::fmt;
use std::str::FromStr;

use clap::ValueEnum;
use polarrep::poly::{format_decimal, format_rational, int, parse_rational};
use polarrep::search::default_grid;
use polarrep::{Error, Exec, Rational};
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExecArg {
    Sequential,
    #[default]
    Parallel,
}

impl From<ExecArg> for Exec {
    fn from(e: ExecArg) -> Exec {
        match e {
            ExecArg::Sequential => Exec::Sequential,
            ExecArg::Parallel => Exec::Parallel,
        }
    }
}

/// A rational given as `num/den` or as an exact decimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exact(pub Rational);

impl FromStr for Exact {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        parse_rational(s).map(Exact)
    }
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Evaluation grid: a comma list of rationals, or `uniform:N` for
/// `1/N, ..., (N−1)/N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid(pub Vec<Rational>);

impl Default for Grid {
    fn default() -> Self {
        Grid(default_grid())
    }
}

impl Grid {
    /// True when every point lies in the open interval `(0, 1)`.
    pub fn is_interior(&self) -> bool {
        self.0.iter().all(|x| *x > int(0) && *x < int(1))
    }

    pub fn check_unit(&self) -> Result<(), Error> {
        match self.0.iter().find(|x| **x < int(0) || **x > int(1)) {
            Some(x) => Err(Error::OutOfRange {
                name: "grid point",
                value: format_rational(x),
                range: "[0, 1]".into(),
            }),
            None => Ok(()),
        }
    }
}

impl FromStr for Grid {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |reason: &str| Error::Parse {
            what: "grid",
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let s = s.trim();
        if let Some(n) = s.strip_prefix("uniform:") {
            let n: i64 = n.trim().parse().map_err(|_| bad("uniform:N needs an integer N"))?;
            if n < 2 {
                return Err(bad("uniform:N needs N ≥ 2"));
            }
            return Ok(Grid((1..n).map(|k| Rational::new(k.into(), n.into())).collect()));
        }
        let points = s
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?;
        if points.is_empty() {
            return Err(Error::EmptyGrid);
        }
        Ok(Grid(points))
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(format_rational))
    }
}

/// A rational shown both exactly and to twelve significant digits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Value {
    pub exact: String,
    pub decimal: String,
}

impl Value {
    pub fn of(x: &Rational) -> Self {
        Value {
            exact: format_rational(x),
            decimal: format_decimal(x),
        }
    }
}
