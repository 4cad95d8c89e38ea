use std::fmt::Write as _;

use anyhow::Result;
use clap::Args;
use polarrep::effective_channels::ChannelModel;
use polarrep::patterns::{FamilyKind, PatternAssignment, PatternFamily};
use polarrep::Poly;
use serde::Serialize;

use crate::values::{Grid, Value};
use crate::Report;

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct AnalyzeArgs {
    /// Pattern family: reg1, reg2, reg4, reg8, reg16 or irr4.
    #[arg(long, default_value = "reg2")]
    pub family: FamilyKind,
    /// Family index per block, e.g. `0,3,3,3`.
    #[arg(long)]
    pub assign: PatternAssignment,
    #[arg(long, default_value_t = ChannelModel::Exact)]
    pub model: ChannelModel,
    #[arg(long, default_value = "uniform:20")]
    pub grid: Grid,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolyEntry {
    pub coefficients: Poly,
    pub text: String,
}

impl PolyEntry {
    fn of(p: &Poly) -> Self {
        PolyEntry {
            coefficients: p.clone(),
            text: p.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalRow {
    pub eps: Value,
    pub capacity: Value,
    pub per_subword: Vec<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub family: FamilyKind,
    pub assignment: PatternAssignment,
    pub model: ChannelModel,
    pub r: usize,
    /// Row-major 0/1 matrix of each block's kernel.
    pub kernels: Vec<Vec<Vec<u8>>>,
    pub per_subword: Vec<PolyEntry>,
    pub capacity: PolyEntry,
    pub table: Vec<EvalRow>,
}

impl Report for AnalyzeReport {
    fn to_csv(&self) -> String {
        let mut out = String::from("eps,eps_exact,capacity,capacity_exact");
        for k in 1..=self.r {
            write!(out, ",z_{k}").unwrap();
        }
        out.push('\n');
        for row in &self.table {
            write!(
                out,
                "{},{},{},{}",
                row.eps.decimal, row.eps.exact, row.capacity.decimal, row.capacity.exact
            )
            .unwrap();
            for z in &row.per_subword {
                write!(out, ",{}", z.decimal).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Effective channels and capacity of one pattern assignment.
pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<AnalyzeReport> {
    args.grid.check_unit()?;
    let family = PatternFamily::from_kind(args.family);
    args.assign.check_against(&family)?;
    let set = args.model.erasures(&args.assign, &family)?;
    let kernels = args
        .assign
        .kernels(&family)?
        .into_iter()
        .map(|k| k.to_matrix())
        .collect();
    let table = args
        .grid
        .0
        .iter()
        .map(|x| EvalRow {
            eps: Value::of(x),
            capacity: Value::of(&set.capacity_at(x)),
            per_subword: set.per_subword.iter().map(|z| Value::of(&z.evaluate(x))).collect(),
        })
        .collect();
    Ok(AnalyzeReport {
        family: args.family,
        assignment: args.assign.clone(),
        model: args.model,
        r: set.r,
        kernels,
        per_subword: set.per_subword.iter().map(PolyEntry::of).collect(),
        capacity: PolyEntry::of(&set.capacity_poly),
        table,
    })
}

