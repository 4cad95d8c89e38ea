//! Capacity curves of the repetition, proposed and irregular schemes.
//!
//! CSV columns, in order: `eps`, `shannon` (1 − ε), then for each requested
//! `r`: `rep_<r>` ((1 − ε^r)/r), `proposed_<r>` and, for `r = 4` only,
//! `irregular_4`. Values are twelve-significant-digit decimals; the JSON
//! report carries the exact rationals as well.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use clap::Args;
use polarrep::effective_channels::{proposed_assignment, ChannelModel, PaperExample};
use polarrep::patterns::regular_family;
use polarrep::poly::{format_rational, int};
use polarrep::{Poly, Rational};
use serde::Serialize;

use crate::values::{Grid, Value};
use crate::Report;

pub const MAX_R: usize = 16;

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct CurvesArgs {
    /// Block counts, each a power of two between 2 and 16.
    #[arg(long, value_delimiter = ',', action = clap::ArgAction::Set, default_value = "2,4,8")]
    pub r: Vec<usize>,
    #[arg(long, default_value = "uniform:20")]
    pub grid: Grid,
    #[arg(long, default_value_t = ChannelModel::Design)]
    pub model: ChannelModel,
}

#[derive(Debug, Clone, Serialize)]
pub struct Column {
    pub name: String,
    pub capacity_poly: Poly,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// First offending point, when the check fails.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvesReport {
    pub r: Vec<usize>,
    pub model: ChannelModel,
    pub columns: Vec<Column>,
    /// One row per grid point; the first entry is ε.
    pub rows: Vec<Vec<Value>>,
    pub checks: Vec<Check>,
}

impl Report for CurvesReport {
    fn to_csv(&self) -> String {
        let mut out = String::from("eps");
        for c in &self.columns {
            write!(out, ",{}", c.name).unwrap();
        }
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<&str> = row.iter().map(|v| v.decimal.as_str()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn failure(&self) -> Option<String> {
        let failed: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| match &c.detail {
                Some(d) => format!("{}: {d}", c.name),
                None => c.name.clone(),
            })
            .collect();
        (!failed.is_empty()).then(|| failed.join("; "))
    }
}

/// `(1 − ε^r)/r`
pub fn repetition_capacity(r: usize) -> Poly {
    let one = Poly::one();
    (&one - &Poly::epsilon().pow(r as u32)).scale(&Rational::new(1.into(), (r as i64).into()))
}

pub fn proposed_capacity(r: usize, model: ChannelModel) -> Result<Poly> {
    let t = r.trailing_zeros();
    Ok(model.erasures(&proposed_assignment(t), &regular_family(t))?.capacity_poly)
}

pub fn irregular_capacity(model: ChannelModel) -> Result<Poly> {
    let best = PaperExample::Ex3IrregularBest;
    Ok(model.erasures(&best.assignment(), &best.family())?.capacity_poly)
}

fn interior(x: &Rational) -> bool {
    *x > int(0) && *x < int(1)
}

fn check(name: &str, offender: Option<String>) -> Check {
    Check {
        name: name.to_string(),
        passed: offender.is_none(),
        detail: offender,
    }
}

pub fn cmd_curves(args: &CurvesArgs) -> Result<CurvesReport> {
    args.grid.check_unit()?;
    if args.r.is_empty() {
        bail!("--r needs at least one block count");
    }
    if let Some(r) = args.r.iter().find(|&&r| !(2..=MAX_R).contains(&r) || !r.is_power_of_two()) {
        bail!("r = {r} must be a power of two in [2, {MAX_R}]");
    }
    let mut rs = args.r.clone();
    rs.sort_unstable();
    rs.dedup();

    let shannon = &Poly::one() - &Poly::epsilon();
    let mut columns = vec![Column {
        name: "shannon".into(),
        capacity_poly: shannon.clone(),
    }];
    // (r, repetition, proposed)
    let mut schemes = Vec::new();
    let mut irregular = None;
    for &r in &rs {
        let rep = repetition_capacity(r);
        let prop = proposed_capacity(r, args.model)?;
        columns.push(Column {
            name: format!("rep_{r}"),
            capacity_poly: rep.clone(),
        });
        columns.push(Column {
            name: format!("proposed_{r}"),
            capacity_poly: prop.clone(),
        });
        if r == 4 {
            let irr = irregular_capacity(args.model)?;
            columns.push(Column {
                name: "irregular_4".into(),
                capacity_poly: irr.clone(),
            });
            irregular = Some((prop.clone(), irr));
        }
        schemes.push((r, rep, prop));
    }

    let grid = &args.grid.0;
    let rows = grid
        .iter()
        .map(|x| {
            std::iter::once(Value::of(x))
                .chain(columns.iter().map(|c| Value::of(&c.capacity_poly.evaluate(x))))
                .collect()
        })
        .collect();

    let mut checks = Vec::new();
    let mut offender = None;
    'outer: for (r, rep, prop) in &schemes {
        for x in grid {
            let (p, q) = (prop.evaluate(x), rep.evaluate(x));
            if p < q || (interior(x) && p == q) {
                offender = Some(format!("r={r} eps={}", format_rational(x)));
                break 'outer;
            }
        }
    }
    checks.push(check("proposed_above_repetition", offender));

    if let Some((regular, irr)) = &irregular {
        let offender = grid
            .iter()
            .find(|x| irr.evaluate(x) < regular.evaluate(x))
            .map(|x| format!("eps={}", format_rational(x)));
        checks.push(check("irregular_at_least_regular", offender));
    }

    let mut offender = None;
    'gap: for x in grid {
        let gap = |p: &Poly| shannon.evaluate(x) - p.evaluate(x);
        for pair in schemes.windows(2) {
            if gap(&pair[1].2) < gap(&pair[0].2) {
                offender = Some(format!("r={} to r={} at eps={}", pair[0].0, pair[1].0, format_rational(x)));
                break 'gap;
            }
        }
    }
    checks.push(check("shannon_gap_nondecreasing_in_r", offender));

    let zero = int(0);
    let mut offender = None;
    for (r, rep, prop) in &schemes {
        let limit = Rational::new(1.into(), (*r as i64).into());
        if rep.evaluate(&zero) != limit || prop.evaluate(&zero) != limit {
            offender = Some(format!("r={r}"));
            break;
        }
    }
    if let Some((_, irr)) = &irregular {
        if offender.is_none() && irr.evaluate(&zero) != Rational::new(1.into(), 4.into()) {
            offender = Some("irregular_4".into());
        }
    }
    if shannon.evaluate(&zero) != int(1) {
        offender = Some("shannon".into());
    }
    checks.push(check("limits_at_zero", offender));

    Ok(CurvesReport {
        r: rs,
        model: args.model,
        columns,
        rows,
        checks,
    })
}
