//! Encoder, erasure SC decoder, exact oracle and Monte Carlo for the full
//! concatenated scheme.
//!
//! The `2^m` input bits are split into `r = 2^t` sub-words of length
//! `n' = 2^(m−t)`; sub-word `j` holds input indices `j·n' .. (j+1)·n'` and is
//! polar encoded into `c_j = u_j·G₂^{⊗(m−t)}`. Repetition block `b` then
//! transmits `(c_1, ..., c_r)·K_b` slot by slot, so the channel carries
//! `N = r·2^m` bits. Block order follows the sorted assignment.

mod decoder;
mod oracle;
mod sim;

use serde::{Deserialize, Serialize};

use crate::channel_algebra::standard_synthetic_channel;
use crate::effective_channels::ChannelModel;
use crate::error::{Error, Result};
use crate::patterns::{FamilyKind, Kernel, PatternAssignment, PatternFamily};
use crate::poly::{format_rational, int, rational_to_f64, serde_rational, Poly, Rational};

pub use decoder::{sc_decode, DecodeFailure, ErasureWord, Symbol};
pub use oracle::{exact_erasure_oracle, ORACLE_MAX_N};
pub use sim::{monte_carlo, BitRate, OpCounts, SimReport};

/// Largest supported `m`.
pub const MAX_M: u32 = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub m: u32,
    pub t: u32,
    pub r: usize,
    pub family: FamilyKind,
    pub assignment: PatternAssignment,
    /// Engine for the sub-codeword erasures the frozen set is designed with.
    pub model: ChannelModel,
    #[serde(with = "serde_rational")]
    pub design_eps: Rational,
    pub k: usize,
    /// Sorted frozen input indices, `2^m − k` of them.
    pub frozen: Vec<usize>,
    /// Design erasure probability of every input bit.
    pub design_erasures: Vec<f64>,
}

impl CodeSpec {
    pub fn n(&self) -> usize {
        1 << self.m
    }

    /// Inner (per sub-word) length.
    pub fn inner_len(&self) -> usize {
        1 << (self.m - self.t)
    }

    /// Transmitted length `r·2^m`.
    pub fn total_len(&self) -> usize {
        self.r * self.n()
    }

    pub fn info_indices(&self) -> Vec<usize> {
        let mask = self.frozen_mask();
        (0..self.n()).filter(|&i| !mask[i]).collect()
    }

    pub fn frozen_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.n()];
        for &i in &self.frozen {
            mask[i] = true;
        }
        mask
    }

    /// Exact erasure polynomial of every input bit: the sub-codeword erasure
    /// followed by the inner polar recursion.
    pub fn synthetic_polynomials(&self) -> Result<Vec<Poly>> {
        let family = PatternFamily::from_kind(self.family);
        let outer = self.model.erasures(&self.assignment, &family)?;
        let inner_m = self.m - self.t;
        let mut out = Vec::with_capacity(self.n());
        for z in &outer.per_subword {
            for i in 0..self.inner_len() {
                out.push(standard_synthetic_channel(inner_m, i as u64, z)?);
            }
        }
        Ok(out)
    }
}

/// Applies `z ↦ 2z − z²` (bit 0) or `z ↦ z²` (bit 1) per index bit, most
/// significant first, for every index of an `m`-level polar code.
pub fn inner_recursion_f64(m: u32, z: f64) -> Vec<f64> {
    let mut level = vec![z];
    for _ in 0..m {
        level = level
            .iter()
            .flat_map(|&v| [2.0 * v - v * v, v * v])
            .collect();
    }
    level
}

/// Freezes the `n − k` least reliable indices; equal values freeze the
/// larger index first.
pub fn select_frozen(erasures: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..erasures.len()).collect();
    order.sort_by(|&a, &b| erasures[b].total_cmp(&erasures[a]).then(b.cmp(&a)));
    let mut frozen: Vec<usize> = order[..erasures.len() - k].to_vec();
    frozen.sort_unstable();
    frozen
}

/// Frozen set of a plain length-`2^m` polar code over BEC(`z`).
pub fn standard_polar_frozen(m: u32, z: f64, k: usize) -> Vec<usize> {
    select_frozen(&inner_recursion_f64(m, z), k)
}

pub fn design_code(
    m: u32,
    family: &PatternFamily,
    assignment: &PatternAssignment,
    design_eps: &Rational,
    k: usize,
) -> Result<CodeSpec> {
    design_code_with_model(m, family, assignment, design_eps, k, ChannelModel::Exact)
}

pub fn design_code_with_model(
    m: u32,
    family: &PatternFamily,
    assignment: &PatternAssignment,
    design_eps: &Rational,
    k: usize,
    model: ChannelModel,
) -> Result<CodeSpec> {
    let t = family.kind().levels();
    if m < t || m > MAX_M {
        return Err(Error::out_of_range("m", m, format!("[{t}, {MAX_M}]")));
    }
    let n = 1usize << m;
    if k > n {
        return Err(Error::out_of_range("k", k, format!("[0, {n}]")));
    }
    if *design_eps < int(0) || *design_eps > int(1) {
        return Err(Error::out_of_range("design epsilon", format_rational(design_eps), "[0, 1]"));
    }
    assignment.check_against(family)?;
    let outer = model.erasures(assignment, family)?;
    let design_erasures: Vec<f64> = outer
        .per_subword
        .iter()
        .flat_map(|z| inner_recursion_f64(m - t, rational_to_f64(&z.evaluate(design_eps))))
        .collect();
    Ok(CodeSpec {
        m,
        t,
        r: family.kernel_size(),
        family: family.kind(),
        assignment: assignment.clone(),
        model,
        design_eps: design_eps.clone(),
        k,
        frozen: select_frozen(&design_erasures, k),
        design_erasures,
    })
}

/// `u · G₂^{⊗log₂ len}` in place.
pub fn polar_transform(x: &mut [u8]) -> usize {
    let n = x.len();
    let mut xors = 0;
    let mut h = n / 2;
    while h >= 1 {
        for start in (0..n).step_by(2 * h) {
            for i in start..start + h {
                x[i] ^= x[i + h];
                xors += 1;
            }
        }
        h /= 2;
    }
    xors
}

/// Kernels of the spec in block order, and the GF(2) form every slot carries.
pub(crate) struct Layout {
    pub kernels: Vec<Kernel>,
    /// `forms[b][q]`: bitmask over sub-codewords sent in slot `q` of block `b`.
    pub forms: Vec<Vec<u64>>,
}

impl Layout {
    pub fn new(spec: &CodeSpec) -> Result<Self> {
        let family = PatternFamily::from_kind(spec.family);
        let kernels: Vec<Kernel> = spec.assignment.kernels(&family)?.into_iter().cloned().collect();
        let forms = kernels.iter().map(Kernel::column_forms).collect();
        Ok(Layout { kernels, forms })
    }
}

/// Places info bits, polar encodes each sub-word and applies the block
/// kernels. Returns the `r` transmitted blocks.
pub fn encode(spec: &CodeSpec, info_bits: &[u8]) -> Result<Vec<Vec<u8>>> {
    encode_counted(spec, info_bits).map(|(blocks, _)| blocks)
}

pub(crate) fn place_info(spec: &CodeSpec, info_bits: &[u8]) -> Result<Vec<u8>> {
    if info_bits.len() != spec.k {
        return Err(Error::LengthMismatch {
            expected: spec.k,
            actual: info_bits.len(),
        });
    }
    let mut u = vec![0u8; spec.n()];
    for (&i, &b) in spec.info_indices().iter().zip(info_bits) {
        u[i] = b & 1;
    }
    Ok(u)
}

/// Sub-codewords `c_j` of an input vector, and the XORs spent.
pub(crate) fn subcodewords(spec: &CodeSpec, u: &[u8]) -> (Vec<Vec<u8>>, usize) {
    let len = spec.inner_len();
    let mut xors = 0;
    let words = u
        .chunks(len)
        .map(|chunk| {
            let mut c = chunk.to_vec();
            xors += polar_transform(&mut c);
            c
        })
        .collect();
    (words, xors)
}

pub(crate) fn encode_counted(spec: &CodeSpec, info_bits: &[u8]) -> Result<(Vec<Vec<u8>>, usize)> {
    let layout = Layout::new(spec)?;
    let u = place_info(spec, info_bits)?;
    let (words, mut xors) = subcodewords(spec, &u);
    let mut blocks = Vec::with_capacity(spec.r);
    for (k, forms) in layout.kernels.iter().zip(&layout.forms) {
        blocks.push(k.apply(&words)?);
        xors += forms.iter().map(|f| (f.count_ones() as usize - 1) * spec.inner_len()).sum::<usize>();
    }
    Ok((blocks, xors))
}
