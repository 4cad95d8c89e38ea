use std::fmt::Write as _;

use anyhow::{bail, Result};
use clap::Args;
use polarrep::codec::{
    design_code_with_model, exact_erasure_oracle, inner_recursion_f64, monte_carlo, CodeSpec, SimReport,
};
use polarrep::effective_channels::{proposed_assignment, ChannelModel, PaperExample};
use polarrep::patterns::{FamilyKind, PatternAssignment, PatternFamily};
use polarrep::poly::{int, rational_to_f64};
use polarrep::Poly;
use serde::Serialize;

use crate::values::{Exact, ExecArg};
use crate::{resolve_family, Report};

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct SimulateArgs {
    #[arg(long)]
    pub family: Option<FamilyKind>,
    #[arg(long)]
    pub r: Option<usize>,
    /// Code length is 2^m per block.
    #[arg(long)]
    pub m: u32,
    /// Defaults to the proposed scheme (regular) or {2,5,7,7} (irr4).
    #[arg(long)]
    pub assign: Option<PatternAssignment>,
    /// Channel erasure probability.
    #[arg(long, default_value = "1/2")]
    pub eps: Exact,
    /// Erasure probability the frozen set is designed for; defaults to `--eps`.
    #[arg(long)]
    pub design_eps: Option<Exact>,
    /// Information bits; defaults to 2^m (every bit measured).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Enumerate every erasure pattern instead of sampling (r·2^m ≤ 24).
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, default_value_t = ChannelModel::Exact)]
    pub model: ChannelModel,
    #[arg(long, value_enum, default_value_t = ExecArg::Parallel)]
    pub exec: ExecArg,
    /// Width of the consistency band in standard errors.
    #[arg(long, default_value_t = 3.0)]
    pub sigmas: f64,
    /// Largest tolerated fraction of bits outside the band.
    #[arg(long, default_value_t = 0.02)]
    pub max_violation_fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BitCheck {
    pub index: usize,
    pub rate: f64,
    /// Analytic erasure probability at the channel ε.
    pub expected: f64,
    /// Binomial standard error at `expected`.
    pub std_error: f64,
    pub within_band: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Consistency {
    pub sigmas: f64,
    pub bits: usize,
    pub violations: usize,
    pub violation_fraction: f64,
    pub max_violation_fraction: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloReport {
    pub simulation: SimReport,
    pub bits: Vec<BitCheck>,
    pub consistency: Consistency,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleRow {
    pub index: usize,
    pub oracle: Poly,
    pub analytic: Poly,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub spec: CodeSpec,
    pub bits: Vec<OracleRow>,
    pub all_match: bool,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SimulateReport {
    MonteCarlo(MonteCarloReport),
    Oracle(OracleReport),
}

impl Report for SimulateReport {
    fn to_csv(&self) -> String {
        match self {
            SimulateReport::MonteCarlo(r) => {
                let mut out = String::from("bit,erasures,trials,rate,expected,std_error,within_band\n");
                let trials = r.simulation.trials;
                for (b, sim) in r.bits.iter().zip(&r.simulation.per_bit) {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        b.index, sim.erasures, trials, b.rate, b.expected, b.std_error, b.within_band
                    )
                    .unwrap();
                }
                writeln!(
                    out,
                    "block,{},{},{},,,",
                    r.simulation.block_errors, trials, r.simulation.block_error_rate
                )
                .unwrap();
                out
            }
            SimulateReport::Oracle(r) => {
                let mut out = String::from("bit,oracle,analytic,matches\n");
                for row in &r.bits {
                    writeln!(out, "{},\"{}\",\"{}\",{}", row.index, row.oracle, row.analytic, row.matches).unwrap();
                }
                out
            }
        }
    }

    fn failure(&self) -> Option<String> {
        match self {
            SimulateReport::MonteCarlo(r) if !r.consistency.passed => Some(format!(
                "{} of {} bits lie outside the {}σ band (tolerance {})",
                r.consistency.violations, r.consistency.bits, r.consistency.sigmas, r.consistency.max_violation_fraction
            )),
            SimulateReport::Oracle(r) if !r.all_match => {
                let bad: Vec<String> = r.bits.iter().filter(|b| !b.matches).map(|b| b.index.to_string()).collect();
                Some(format!("oracle disagrees with the analytic polynomials at bits {}", bad.join(",")))
            }
            _ => None,
        }
    }
}

fn default_assignment(kind: FamilyKind) -> PatternAssignment {
    match kind {
        FamilyKind::Regular { t } => proposed_assignment(t),
        FamilyKind::Irregular4 => PaperExample::Ex3IrregularBest.assignment(),
    }
}

/// Analytic erasure probability of every input bit at `eps`.
pub fn expected_rates(spec: &CodeSpec, eps: &polarrep::Rational) -> Result<Vec<f64>> {
    let family = PatternFamily::from_kind(spec.family);
    let outer = spec.model.erasures(&spec.assignment, &family)?;
    Ok(outer
        .per_subword
        .iter()
        .flat_map(|z| inner_recursion_f64(spec.m - spec.t, rational_to_f64(&z.evaluate(eps))))
        .collect())
}

/// Builds the code and either samples it or enumerates it exactly.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<SimulateReport> {
    let kind = resolve_family(args.family, args.r)?;
    let family = PatternFamily::from_kind(kind);
    let assign = args.assign.clone().unwrap_or_else(|| default_assignment(kind));
    let eps = &args.eps.0;
    if *eps < int(0) || *eps > int(1) {
        bail!("eps = {} is outside [0, 1]", args.eps);
    }
    let design_eps = args.design_eps.as_ref().map_or(eps, |d| &d.0);
    let n = 1usize.checked_shl(args.m).unwrap_or(usize::MAX);
    let spec = design_code_with_model(args.m, &family, &assign, design_eps, args.k.unwrap_or(n), args.model)?;
    let exec = args.exec.into();

    if args.oracle {
        let oracle = exact_erasure_oracle(&spec, exec)?;
        let analytic = spec.synthetic_polynomials()?;
        let bits: Vec<OracleRow> = oracle
            .into_iter()
            .zip(analytic)
            .enumerate()
            .map(|(index, (oracle, analytic))| OracleRow {
                index,
                matches: oracle == analytic,
                oracle,
                analytic,
            })
            .collect();
        let all_match = bits.iter().all(|b| b.matches);
        return Ok(SimulateReport::Oracle(OracleReport { spec, bits, all_match }));
    }

    if args.sigmas.is_nan() || args.sigmas <= 0.0 || !(0.0..=1.0).contains(&args.max_violation_fraction) {
        bail!("--sigmas must be positive and --max-violation-fraction in [0, 1]");
    }
    let expected = expected_rates(&spec, eps)?;
    let simulation = monte_carlo(&spec, rational_to_f64(eps), args.trials, args.seed, exec)?;
    let t = args.trials as f64;
    let bits: Vec<BitCheck> = simulation
        .per_bit
        .iter()
        .map(|b| {
            let p = expected[b.index];
            let se = (p * (1.0 - p) / t).sqrt();
            BitCheck {
                index: b.index,
                rate: b.rate,
                expected: p,
                std_error: se,
                within_band: (b.rate - p).abs() <= args.sigmas * se + 1e-12,
            }
        })
        .collect();
    let violations = bits.iter().filter(|b| !b.within_band).count();
    let fraction = if bits.is_empty() { 0.0 } else { violations as f64 / bits.len() as f64 };
    Ok(SimulateReport::MonteCarlo(MonteCarloReport {
        consistency: Consistency {
            sigmas: args.sigmas,
            bits: bits.len(),
            violations,
            violation_fraction: fraction,
            max_violation_fraction: args.max_violation_fraction,
            passed: fraction <= args.max_violation_fraction,
        },
        simulation,
        bits,
    }))
}
