//! Erasure polynomials of the channels each sub-codeword `c_k` sees.
//!
//! Two engines are provided.
//!
//! The **exact** engine ([`assignment_erasures`]) is the true genie-aided SC
//! erasure probability. Every output slot of every block transmits one
//! GF(2) form in `c_1..c_r`; `c_k` is recoverable from the unerased forms and
//! the already-decoded `c_1..c_{k−1}` iff some form in their span has its
//! highest index at `k`. A dynamic program over the reachable row spaces
//! sums the exact probability of each span.
//!
//! The **design** engine ([`design_erasures`]) is the per-kernel level
//! recursion — a coupled level maps the leg erasure `z` to `z + z² − z³` on
//! the top half and `z²` on the bottom half, an uncoupled level keeps `z` —
//! with the per-block results multiplied across blocks. It is what the
//! repetition schemes are designed and ranked with. For one coupled block
//! among identity blocks with `r = 2` it coincides with the exact engine;
//! otherwise it ignores some cross-block combinations and can err either way
//! (pessimistic for the one-Arıkan-block schemes, optimistic when several
//! blocks are fully coupled).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel_algebra::{check_combine, ChannelExpr};
use crate::error::{Error, Result};
use crate::patterns::{irregular_family_r4, regular_family, Kernel, PatternAssignment, PatternFamily};
use crate::poly::{int, Poly, Rational};

/// Largest block count the exact engine accepts.
pub const EXACT_MAX_R: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EffectiveChannelSet {
    pub r: usize,
    /// Erasure polynomial of `c_1, ..., c_r`.
    pub per_subword: Vec<Poly>,
    /// Rate per channel use per transmission, `(r − Σ_k Z_k) / r²`.
    pub capacity_poly: Poly,
}

impl EffectiveChannelSet {
    pub fn from_erasures(per_subword: Vec<Poly>) -> Self {
        let r = per_subword.len();
        let total = per_subword.iter().fold(Poly::zero(), |acc, p| &acc + p);
        let r_big = int(r as i64);
        let capacity_poly =
            (&Poly::constant(r_big.clone()) - &total).scale(&(Rational::from_integer(1.into()) / (&r_big * &r_big)));
        EffectiveChannelSet {
            r,
            per_subword,
            capacity_poly,
        }
    }

    pub fn total_erasure(&self) -> Poly {
        self.per_subword.iter().fold(Poly::zero(), |acc, p| &acc + p)
    }

    pub fn capacity_at(&self, eps: &Rational) -> Rational {
        self.capacity_poly.evaluate(eps)
    }
}

/// Top leg of a coupled level: `z ⊡ z² = z + z² − z³`.
pub fn coupled_top(z: &Poly) -> Poly {
    check_combine(z, &z.pow(2))
}

/// Bottom leg of a coupled level: `z²`.
pub fn coupled_bottom(z: &Poly) -> Poly {
    z.pow(2)
}

/// Design recursion for one kernel fed by a channel of erasure `z`.
pub fn kernel_design_erasures(kernel: &Kernel, z: &Poly) -> Result<Vec<Poly>> {
    if kernel.size() == 1 {
        return Ok(vec![z.clone()]);
    }
    let split = kernel.split().ok_or_else(|| {
        Error::Unsupported(format!(
            "kernel has no level decomposition [[A,0],[eB,B]]:\n{kernel}"
        ))
    })?;
    let (top_z, bottom_z) = if split.coupled {
        (coupled_top(z), coupled_bottom(z))
    } else {
        (z.clone(), z.clone())
    };
    let mut out = kernel_design_erasures(&split.top, &top_z)?;
    out.extend(kernel_design_erasures(&split.bottom, &bottom_z)?);
    Ok(out)
}

/// Single-block erasures of regular pattern `i` with `t` levels, fed by BEC(ε).
pub fn regular_block_erasures(i: usize, t: u32) -> Result<Vec<Poly>> {
    let family = regular_family(t);
    kernel_design_erasures(family.member(i)?, &Poly::epsilon())
}

/// Design-model erasures: per-block recursion, multiplied across blocks.
pub fn design_erasures(assignment: &PatternAssignment, family: &PatternFamily) -> Result<EffectiveChannelSet> {
    let kernels = assignment.kernels(family)?;
    let eps = Poly::epsilon();
    let mut acc = vec![Poly::one(); family.kernel_size()];
    for k in kernels {
        for (a, z) in acc.iter_mut().zip(kernel_design_erasures(k, &eps)?) {
            *a = &*a * &z;
        }
    }
    Ok(EffectiveChannelSet::from_erasures(acc))
}

/// Exact genie-aided SC erasures of the sub-codewords.
pub fn assignment_erasures(assignment: &PatternAssignment, family: &PatternFamily) -> Result<EffectiveChannelSet> {
    let kernels = assignment.kernels(family)?;
    Ok(EffectiveChannelSet::from_erasures(outer_exact_erasures(&kernels)?))
}

/// Inserts `v` into a fully reduced echelon basis (pivot = highest set bit).
fn insert_reduced(basis: &[u64], mut v: u64) -> Option<Vec<u64>> {
    for &b in basis {
        let pivot = 63 - b.leading_zeros();
        if (v >> pivot) & 1 == 1 {
            v ^= b;
        }
    }
    if v == 0 {
        return None;
    }
    let pivot = 63 - v.leading_zeros();
    let mut out: Vec<u64> = basis
        .iter()
        .map(|&b| if (b >> pivot) & 1 == 1 { b ^ v } else { b })
        .collect();
    out.push(v);
    out.sort_unstable();
    Some(out)
}

/// Exact erasure polynomials for blocks using `kernels` (any order, all the
/// same size), each output slot seen once through BEC(ε).
pub fn outer_exact_erasures(kernels: &[&Kernel]) -> Result<Vec<Poly>> {
    let r = kernels.first().map(|k| k.size()).ok_or_else(|| Error::Unsupported("no blocks".into()))?;
    if kernels.iter().any(|k| k.size() != r) {
        return Err(Error::Unsupported("blocks use kernels of different sizes".into()));
    }
    if r > EXACT_MAX_R {
        return Err(Error::Unsupported(format!(
            "exact analysis supports at most {EXACT_MAX_R} sub-codewords, got {r}"
        )));
    }
    let mut forms: BTreeMap<u64, u32> = BTreeMap::new();
    for k in kernels {
        for f in k.column_forms() {
            *forms.entry(f).or_insert(0) += 1;
        }
    }

    let eps = Poly::epsilon();
    let mut states: BTreeMap<Vec<u64>, Poly> = BTreeMap::new();
    states.insert(Vec::new(), Poly::one());
    for (&form, &mult) in &forms {
        let erased = eps.pow(mult);
        let seen = &Poly::one() - &erased;
        let mut next: BTreeMap<Vec<u64>, Poly> = BTreeMap::new();
        let mut add = |key: Vec<u64>, w: Poly| {
            let slot = next.entry(key).or_insert_with(Poly::zero);
            *slot = &*slot + &w;
        };
        for (basis, w) in states {
            match insert_reduced(&basis, form) {
                Some(grown) => {
                    add(basis, &w * &erased);
                    add(grown, &w * &seen);
                }
                // A dependent form changes nothing whether or not it arrives.
                None => add(basis, w),
            }
        }
        states = next;
    }

    let mut out = vec![Poly::zero(); r];
    for (basis, w) in &states {
        let pivots = basis.iter().fold(0u64, |acc, b| acc | (1u64 << (63 - b.leading_zeros())));
        for (k, z) in out.iter_mut().enumerate() {
            if (pivots >> k) & 1 == 0 {
                *z = &*z + w;
            }
        }
    }
    Ok(out)
}

/// One Arıkan-type block (index 0) and `r − 1` identity blocks.
pub fn proposed_assignment(t: u32) -> PatternAssignment {
    let r = 1usize << t;
    let mut idx = vec![r - 1; r];
    idx[0] = 0;
    PatternAssignment::new(idx)
}

/// The regular scheme: block 1 uses `P⁽⁰⁾`, the rest repeat plainly, so
/// `Z_k = Z_{P⁽⁰⁾}(W_r^{(k)}) · ε^{r−1}`.
pub fn proposed_scheme(t: u32) -> Result<EffectiveChannelSet> {
    let r = 1u32 << t;
    let rest = Poly::epsilon().pow(r - 1);
    let per = regular_block_erasures(0, t)?
        .into_iter()
        .map(|z| &z * &rest)
        .collect();
    Ok(EffectiveChannelSet::from_erasures(per))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelModel {
    /// True SC erasure probabilities (at most [`EXACT_MAX_R`] blocks).
    Exact,
    /// Level recursion multiplied across blocks.
    #[default]
    Design,
}

impl ChannelModel {
    pub fn erasures(self, assignment: &PatternAssignment, family: &PatternFamily) -> Result<EffectiveChannelSet> {
        match self {
            ChannelModel::Exact => assignment_erasures(assignment, family),
            ChannelModel::Design => design_erasures(assignment, family),
        }
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelModel::Exact => "exact",
            ChannelModel::Design => "design",
        })
    }
}

impl FromStr for ChannelModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(ChannelModel::Exact),
            "design" => Ok(ChannelModel::Design),
            _ => Err(Error::parse("channel model", s, "expected exact or design")),
        }
    }
}

/// Hand-written effective-channel expressions for the best four-block schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PaperExample {
    /// `{0,3,3,3}` from the regular family.
    Ex2RegularBest,
    /// `{2,5,7,7}` from the irregular family.
    Ex3IrregularBest,
}

impl PaperExample {
    pub fn family(self) -> PatternFamily {
        match self {
            PaperExample::Ex2RegularBest => regular_family(2),
            PaperExample::Ex3IrregularBest => irregular_family_r4(),
        }
    }

    pub fn assignment(self) -> PatternAssignment {
        match self {
            PaperExample::Ex2RegularBest => PatternAssignment::new(vec![0, 3, 3, 3]),
            PaperExample::Ex3IrregularBest => PatternAssignment::new(vec![2, 5, 7, 7]),
        }
    }

    pub fn expressions(self) -> Vec<ChannelExpr> {
        use ChannelExpr as E;
        let w = || E::Leaf;
        let wk = |k| E::rep(E::Leaf, k);
        // W ⊡ W²
        let a = || E::check(w(), wk(2));
        match self {
            PaperExample::Ex2RegularBest => vec![
                E::bit(E::check(a(), E::rep(a(), 2)), wk(3)),
                E::bit(E::rep(a(), 2), wk(3)),
                E::bit(E::check(wk(2), wk(4)), wk(3)),
                E::bit(wk(4), wk(3)),
            ],
            PaperExample::Ex3IrregularBest => vec![
                E::bit_all([a(), a(), w(), w()]),
                E::bit_all([a(), wk(2), w(), w()]),
                E::bit_all([E::check(wk(2), wk(4)), w(), w(), w()]),
                E::bit_all([wk(4), w(), w(), w()]),
            ],
        }
    }
}

impl FromStr for PaperExample {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "ex2_regular_best" | "ex2" => Ok(PaperExample::Ex2RegularBest),
            "ex3_irregular_best" | "ex3" => Ok(PaperExample::Ex3IrregularBest),
            _ => Err(Error::parse("expression set", s, "expected ex2_regular_best or ex3_irregular_best")),
        }
    }
}

pub fn paper_expression_set(which: PaperExample) -> EffectiveChannelSet {
    EffectiveChannelSet::from_erasures(which.expressions().iter().map(ChannelExpr::erasure_poly).collect())
}
