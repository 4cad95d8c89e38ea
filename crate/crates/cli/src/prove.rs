use std::fmt::Write as _;

use anyhow::{bail, Result};
use clap::Args;
use polarrep::poly::int;
use polarrep::proofcheck::{
    certify_dominance, certify_gain, gain_curve, theorem1_endpoints, DominanceCertificate, DominanceVerdict,
    EndpointReport, GainCertificate, Verdict,
};
use polarrep::Poly;
use serde::Serialize;

use crate::values::{Exact, Grid, Value};
use crate::Report;

/// Largest `t` accepted; `r = 2^t` blocks.
pub const MAX_T: u32 = 6;

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct ProveArgs {
    /// Levels to certify (r = 2^t). Defaults to 1,2,3,4 unless `--custom` is given.
    #[arg(long, value_delimiter = ',', action = clap::ArgAction::Set)]
    pub t: Vec<u32>,
    /// Interior point for the sign check.
    #[arg(long, default_value = "1/2")]
    pub sample: Exact,
    /// Certify that this polynomial (coefficients lowest degree first) is
    /// strictly positive on (0, 1).
    #[arg(long, allow_hyphen_values = true)]
    pub custom: Option<Poly>,
    /// Points for the Σ Z versus r·ε curves.
    #[arg(long, default_value = "uniform:20")]
    pub grid: Grid,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndpointSet {
    pub t: u32,
    pub all_hold: bool,
    pub subcodewords: Vec<EndpointReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveRow {
    pub eps: Value,
    pub sum_z: Value,
    pub r_eps: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct GainCurve {
    pub t: u32,
    pub r: usize,
    /// `Σ Z < r·ε` at every interior grid point (equality allowed at 0 and 1).
    pub strictly_below: bool,
    pub points: Vec<CurveRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProveReport {
    pub certificates: Vec<GainCertificate>,
    pub endpoints: Vec<EndpointSet>,
    pub curves: Vec<GainCurve>,
    pub custom: Option<DominanceCertificate>,
}

impl Report for ProveReport {
    /// The curve data, one row per `(t, ε)`.
    fn to_csv(&self) -> String {
        let mut out = String::from("t,r,eps,sum_z,r_eps,sum_z_exact,r_eps_exact\n");
        for c in &self.curves {
            for p in &c.points {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    c.t, c.r, p.eps.decimal, p.sum_z.decimal, p.r_eps.decimal, p.sum_z.exact, p.r_eps.exact
                )
                .unwrap();
            }
        }
        out
    }

    fn failure(&self) -> Option<String> {
        let mut reasons = Vec::new();
        for c in &self.certificates {
            if c.verdict() != Verdict::Certified {
                reasons.push(format!("gain inequality refuted for t={}", c.t));
            }
        }
        for e in &self.endpoints {
            if !e.all_hold {
                reasons.push(format!("endpoint values or level maps fail for t={}", e.t));
            }
        }
        for c in &self.curves {
            if !c.strictly_below {
                reasons.push(format!("sum of erasures not below r·eps on the grid for t={}", c.t));
            }
        }
        if let Some(c) = &self.custom {
            if c.verdict != DominanceVerdict::Certified {
                let v = serde_json::to_value(c.verdict).unwrap_or_default();
                reasons.push(format!("custom polynomial: {}", v.as_str().unwrap_or("not certified")));
            }
        }
        (!reasons.is_empty()).then(|| reasons.join("; "))
    }
}

/// Gain certificates, endpoint checks and curve data for each `t`.
pub fn cmd_prove(args: &ProveArgs) -> Result<ProveReport> {
    args.grid.check_unit()?;
    let ts = if args.t.is_empty() && args.custom.is_none() {
        vec![1, 2, 3, 4]
    } else {
        args.t.clone()
    };
    if let Some(&t) = ts.iter().find(|&&t| t == 0 || t > MAX_T) {
        bail!("t = {t} is outside the allowed range [1, {MAX_T}]");
    }
    let mut report = ProveReport {
        certificates: Vec::new(),
        endpoints: Vec::new(),
        curves: Vec::new(),
        custom: None,
    };
    for &t in &ts {
        report.certificates.push(certify_gain(t, &args.sample.0)?);
        let subcodewords = theorem1_endpoints(t)?;
        report.endpoints.push(EndpointSet {
            t,
            all_hold: subcodewords.iter().all(EndpointReport::holds),
            subcodewords,
        });
        let points = gain_curve(t, &args.grid.0)?;
        let strictly_below = points
            .iter()
            .all(|p| p.sum_z < p.r_eps || ((p.eps == int(0) || p.eps == int(1)) && p.sum_z == p.r_eps));
        report.curves.push(GainCurve {
            t,
            r: 1 << t,
            strictly_below,
            points: points
                .iter()
                .map(|p| CurveRow {
                    eps: Value::of(&p.eps),
                    sum_z: Value::of(&p.sum_z),
                    r_eps: Value::of(&p.r_eps),
                })
                .collect(),
        });
    }
    if let Some(p) = &args.custom {
        report.custom = Some(certify_dominance(p, &Poly::zero())?);
    }
    Ok(report)
}
