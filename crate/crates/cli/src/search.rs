use anyhow::Result;
use clap::Args;
use polarrep::effective_channels::ChannelModel;
use polarrep::patterns::{FamilyKind, PatternFamily};
use polarrep::search::{best_assignment, SearchOptions, SearchReport};
use serde::Serialize;

use crate::values::{ExecArg, Grid};
use crate::{resolve_family, Report};

#[derive(Debug, Clone, Args, Serialize)]
#[command(args_override_self = true)]
pub struct SearchArgs {
    #[arg(long)]
    pub family: Option<FamilyKind>,
    /// Number of repetition blocks; picks the regular family when `--family` is absent.
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long, default_value = "uniform:20")]
    pub grid: Grid,
    #[arg(long, default_value_t = ChannelModel::Design)]
    pub model: ChannelModel,
    #[arg(long, value_enum, default_value_t = ExecArg::Parallel)]
    pub exec: ExecArg,
    /// Fail unless the winner is the maximum at every grid point.
    #[arg(long)]
    pub require_every_point: bool,
    /// Fail unless the winner is certified above every other candidate on (0, 1).
    #[arg(long)]
    pub require_dominance: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchCmdReport {
    #[serde(flatten)]
    pub search: SearchReport,
    pub require_every_point: bool,
    pub require_dominance: bool,
}

impl Report for SearchCmdReport {
    fn to_csv(&self) -> String {
        self.search.to_csv()
    }

    fn failure(&self) -> Option<String> {
        let best = &self.search.best;
        if self.require_every_point && !self.search.best_wins_every_point {
            let wins = self.search.best_candidate().grid_wins;
            let points = self.search.grid.len();
            return Some(format!("best assignment {best} wins only {wins} of {points} grid points"));
        }
        if self.require_dominance && !self.search.dominance_certified {
            return Some(format!("best assignment {best} is not certified to dominate every other candidate"));
        }
        None
    }
}

/// Exhaustive search for the highest-capacity assignment.
pub fn cmd_search(args: &SearchArgs) -> Result<SearchCmdReport> {
    let kind = resolve_family(args.family, args.r)?;
    let family = PatternFamily::from_kind(kind);
    let options = SearchOptions {
        model: args.model,
        exec: args.exec.into(),
    };
    let search = best_assignment(&family, kind.kernel_size(), &args.grid.0, options)?;
    Ok(SearchCmdReport {
        search,
        require_every_point: args.require_every_point,
        require_dominance: args.require_dominance,
    })
}
