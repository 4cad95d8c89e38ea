//! Exhaustive search over pattern assignments.
//!
//! Every multiset of `r` family indices is scored by its capacity polynomial
//! on an ε grid. An assignment that is maximal at every grid point wins
//! outright; otherwise the one that is maximal at the most grid points wins,
//! ties going to the lexicographically smallest multiset.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::effective_channels::ChannelModel;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::patterns::{FamilyKind, PatternAssignment, PatternFamily};
use crate::poly::{format_decimal, format_rational, rational, serde_rational_vec, Poly, Rational};
use crate::proofcheck::{certify_dominance, DominanceVerdict};

/// `{1/20, 2/20, ..., 19/20}`
pub fn default_grid() -> Vec<Rational> {
    (1..20).map(|k| rational(k, 20)).collect()
}

/// Number of size-`r` multisets over `n` items, `C(n + r − 1, r)`.
pub fn multiset_count(n: usize, r: usize) -> u128 {
    if n == 0 {
        return u128::from(r == 0);
    }
    let (top, k) = ((n + r - 1) as u128, r.min(n - 1) as u128);
    (0..k).fold(1u128, |acc, i| acc * (top - i) / (i + 1))
}

/// All size-`r` multisets of family indices, lexicographic.
pub fn enumerate_assignments(family: &PatternFamily, r: usize) -> Vec<PatternAssignment> {
    fn rec(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<PatternAssignment>) {
        if cur.len() == r {
            out.push(PatternAssignment::new(cur.clone()));
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, r, i, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(family.len(), r, 0, &mut Vec::with_capacity(r), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankedCandidate {
    pub assignment: PatternAssignment,
    pub capacity_poly: Poly,
    /// Capacity at each grid point.
    #[serde(with = "serde_rational_vec")]
    pub values: Vec<Rational>,
    /// Grid points at which this candidate is the (tie-broken) maximum.
    pub grid_wins: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub family: FamilyKind,
    pub r: usize,
    pub model: ChannelModel,
    pub candidates_evaluated: usize,
    #[serde(with = "serde_rational_vec")]
    pub grid: Vec<Rational>,
    /// Most grid wins first, then by summed capacity, then lexicographic.
    pub ranking: Vec<RankedCandidate>,
    pub best: PatternAssignment,
    /// `best` attains the maximum at every grid point.
    pub best_wins_every_point: bool,
    /// `best` is certified strictly above every other candidate on all of `(0, 1)`.
    pub dominance_certified: bool,
}

impl SearchReport {
    pub fn best_candidate(&self) -> &RankedCandidate {
        self.ranking
            .iter()
            .find(|c| c.assignment == self.best)
            .expect("best is ranked")
    }

    /// Ranking table: one row per assignment, one column per grid point.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("assignment,grid_wins");
        for g in &self.grid {
            write!(out, ",eps={}", format_rational(g)).unwrap();
        }
        out.push('\n');
        for c in &self.ranking {
            write!(out, "\"{}\",{}", c.assignment, c.grid_wins).unwrap();
            for v in &c.values {
                write!(out, ",{}", format_decimal(v)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub model: ChannelModel,
    pub exec: Exec,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            model: ChannelModel::Design,
            exec: Exec::Parallel,
        }
    }
}

pub fn best_assignment(
    family: &PatternFamily,
    r: usize,
    grid: &[Rational],
    options: SearchOptions,
) -> Result<SearchReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let (zero, one) = (rational(0, 1), rational(1, 1));
    if let Some(g) = grid.iter().find(|g| **g <= zero || **g >= one) {
        return Err(Error::out_of_range("grid point", format_rational(g), "(0, 1)"));
    }
    let candidates = enumerate_assignments(family, r);
    let scored: Vec<Result<(Poly, Vec<Rational>)>> = options.exec.map(&candidates, |a| {
        let cap = options.model.erasures(a, family)?.capacity_poly;
        let values = grid.iter().map(|g| cap.evaluate(g)).collect();
        Ok((cap, values))
    });
    let mut ranking = candidates
        .into_iter()
        .zip(scored)
        .map(|(assignment, s)| {
            s.map(|(capacity_poly, values)| RankedCandidate {
                assignment,
                capacity_poly,
                values,
                grid_wins: 0,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    // Candidates are in lexicographic order, so the first maximum wins ties.
    let mut maxima = Vec::with_capacity(grid.len());
    for g in 0..grid.len() {
        let mut best = 0;
        for (i, c) in ranking.iter().enumerate() {
            if c.values[g] > ranking[best].values[g] {
                best = i;
            }
        }
        maxima.push(ranking[best].values[g].clone());
        ranking[best].grid_wins += 1;
    }
    let everywhere = ranking
        .iter()
        .position(|c| c.values.iter().zip(&maxima).all(|(v, m)| v == m));
    let best_idx = everywhere.unwrap_or_else(|| {
        let mut b = 0;
        for (i, c) in ranking.iter().enumerate() {
            if c.grid_wins > ranking[b].grid_wins {
                b = i;
            }
        }
        b
    });
    let best = ranking[best_idx].assignment.clone();
    let best_poly = ranking[best_idx].capacity_poly.clone();
    let others: Vec<&Poly> = ranking
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != best_idx)
        .map(|(_, c)| &c.capacity_poly)
        .collect();
    let verdicts = options
        .exec
        .map(&others, |p| certify_dominance(&best_poly, p).map(|c| c.verdict));
    let mut dominance_certified = true;
    for v in verdicts {
        if v? != DominanceVerdict::Certified {
            dominance_certified = false;
        }
    }

    let sums: Vec<Rational> = ranking
        .iter()
        .map(|c| c.values.iter().fold(rational(0, 1), |a, v| a + v))
        .collect();
    let mut order: Vec<usize> = (0..ranking.len()).collect();
    order.sort_by(|&a, &b| {
        ranking[b]
            .grid_wins
            .cmp(&ranking[a].grid_wins)
            .then_with(|| sums[b].cmp(&sums[a]))
            .then_with(|| a.cmp(&b))
    });
    let mut slots: Vec<Option<RankedCandidate>> = ranking.into_iter().map(Some).collect();
    let ranking: Vec<RankedCandidate> = order.iter().map(|&i| slots[i].take().unwrap()).collect();
    debug_assert!(ranking.windows(2).all(|w| w[0].grid_wins.cmp(&w[1].grid_wins) != Ordering::Less));

    Ok(SearchReport {
        family: family.kind(),
        r,
        model: options.model,
        candidates_evaluated: ranking.len(),
        grid: grid.to_vec(),
        ranking,
        best_wins_every_point: everywhere.is_some(),
        best,
        dominance_certified,
    })
}
