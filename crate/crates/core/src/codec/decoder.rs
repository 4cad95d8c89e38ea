//! Successive cancellation over {0, 1, erased}.
//!
//! Sub-codewords are decoded in order. For `c_j` every position is solved
//! from the unerased symbols carrying it: the symbols' forms are put in
//! echelon form with pivots at the highest sub-codeword index, and `c_j[p]`
//! is known iff some row has pivot `j` (its lower entries are already
//! decoded). The resulting word is then SC decoded by the inner polar code
//! and re-encoded before moving on.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CodeSpec, Layout};
use crate::error::{Error, Result};

const ERASED: u8 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Symbol {
    Zero,
    One,
    Erased,
}

impl Symbol {
    fn raw(self) -> u8 {
        match self {
            Symbol::Zero => 0,
            Symbol::One => 1,
            Symbol::Erased => ERASED,
        }
    }
}

/// Received word, one symbol per transmitted bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErasureWord(pub Vec<Symbol>);

impl ErasureWord {
    /// Transmits `bits`, erasing the positions where `erased` is true.
    pub fn from_bits(bits: &[u8], erased: &[bool]) -> Self {
        ErasureWord(
            bits.iter()
                .zip(erased)
                .map(|(&b, &e)| match (e, b & 1) {
                    (true, _) => Symbol::Erased,
                    (false, 0) => Symbol::Zero,
                    (false, _) => Symbol::One,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn raw(&self) -> Vec<u8> {
        self.0.iter().map(|s| s.raw()).collect()
    }
}

/// `0`, `1` and `?` (or `e`) per symbol.
impl FromStr for ErasureWord {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(Symbol::Zero),
                '1' => Ok(Symbol::One),
                '?' | 'e' | 'E' => Ok(Symbol::Erased),
                _ => Err(Error::parse("erasure word", s, format!("unexpected {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(ErasureWord)
    }
}

impl fmt::Display for ErasureWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Symbol::Zero => "0",
                Symbol::One => "1",
                Symbol::Erased => "?",
            })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeFailure {
    /// First input index (in `0..2^m`) left erased.
    pub bit_index: usize,
}

impl fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "input bit {} is erased", self.bit_index)
    }
}

impl std::error::Error for DecodeFailure {}

/// What one decoder pass produced.
pub(crate) struct Trace {
    pub u_hat: Vec<u8>,
    /// Input bits whose decision was erased (genie mode only).
    pub erased: Vec<bool>,
    /// Unerased decisions that disagree with the genie; always zero on a BEC.
    pub wrong: usize,
    pub node_updates: usize,
    pub xors: usize,
}

pub(crate) enum Mode<'a> {
    /// Stop at the first erased unfrozen bit.
    Decode,
    /// Record erasures and continue with the true input bits.
    Genie(&'a [u8]),
    /// Genie mode with every bit treated as unfrozen.
    GenieAll(&'a [u8]),
}

fn check(a: u8, b: u8) -> u8 {
    if a == ERASED || b == ERASED {
        ERASED
    } else {
        a ^ b
    }
}

fn var(a: u8, b: u8) -> u8 {
    if a != ERASED {
        a
    } else {
        b
    }
}

pub(crate) struct Decoder<'s> {
    spec: &'s CodeSpec,
    layout: Layout,
    frozen: Vec<bool>,
}

struct Run<'a> {
    frozen: &'a [bool],
    mode: &'a Mode<'a>,
    trace: Trace,
}

impl Run<'_> {
    /// SC on one sub-word; returns its re-encoded codeword.
    fn node(&mut self, y: &[u8], base: usize) -> std::result::Result<Vec<u8>, usize> {
        let n = y.len();
        if n == 1 {
            let g = base;
            let truth = match self.mode {
                Mode::Decode => None,
                Mode::Genie(u) | Mode::GenieAll(u) => Some(u[g]),
            };
            let frozen = self.frozen[g] && !matches!(self.mode, Mode::GenieAll(_));
            let v = if frozen {
                0
            } else if y[0] != ERASED {
                if truth.is_some_and(|t| t != y[0]) {
                    self.trace.wrong += 1;
                }
                y[0]
            } else {
                match truth {
                    None => return Err(g),
                    Some(t) => {
                        self.trace.erased[g] = true;
                        t
                    }
                }
            };
            self.trace.u_hat[g] = v;
            return Ok(vec![v]);
        }
        let h = n / 2;
        let top: Vec<u8> = (0..h).map(|i| check(y[i], y[i + h])).collect();
        let x_top = self.node(&top, base)?;
        let bottom: Vec<u8> = (0..h)
            .map(|i| {
                let from_left = if y[i] == ERASED { ERASED } else { y[i] ^ x_top[i] };
                var(y[i + h], from_left)
            })
            .collect();
        let x_bot = self.node(&bottom, base + h)?;
        self.trace.node_updates += n;
        self.trace.xors += h;
        let mut x: Vec<u8> = x_top.iter().zip(&x_bot).map(|(a, b)| a ^ b).collect();
        x.extend_from_slice(&x_bot);
        Ok(x)
    }
}

impl<'s> Decoder<'s> {
    pub fn new(spec: &'s CodeSpec) -> Result<Self> {
        Ok(Decoder {
            spec,
            layout: Layout::new(spec)?,
            frozen: spec.frozen_mask(),
        })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn run(&self, received: &[u8], mode: &Mode<'_>) -> std::result::Result<Trace, usize> {
        let spec = self.spec;
        let (r, n, len) = (spec.r, spec.n(), spec.inner_len());
        let mut run = Run {
            frozen: &self.frozen,
            mode,
            trace: Trace {
                u_hat: vec![0; n],
                erased: vec![false; n],
                wrong: 0,
                node_updates: 0,
                xors: 0,
            },
        };
        // pivots[p][j] = reduced row with highest index j at position p
        let mut pivots: Vec<Vec<Option<(u64, u8)>>> = vec![vec![None; r]; len];
        for (b, forms) in self.layout.forms.iter().enumerate() {
            for (q, &form) in forms.iter().enumerate() {
                let offset = b * n + q * len;
                for (p, rows) in pivots.iter_mut().enumerate() {
                    run.trace.node_updates += 1;
                    let s = received[offset + p];
                    if s == ERASED {
                        continue;
                    }
                    let (mut mask, mut val) = (form, s);
                    while mask != 0 {
                        let top = 63 - mask.leading_zeros() as usize;
                        match rows[top] {
                            None => {
                                rows[top] = Some((mask, val));
                                break;
                            }
                            Some((m2, v2)) => {
                                mask ^= m2;
                                val ^= v2;
                            }
                        }
                    }
                }
            }
        }
        let mut words: Vec<Vec<u8>> = Vec::with_capacity(r);
        #[allow(clippy::needless_range_loop)]
        for j in 0..r {
            let y: Vec<u8> = (0..len)
                .map(|p| {
                    run.trace.node_updates += 1;
                    match pivots[p][j] {
                        None => ERASED,
                        Some((mask, val)) => {
                            let mut v = val;
                            for (l, w) in words.iter().enumerate() {
                                if (mask >> l) & 1 == 1 {
                                    v ^= w[p];
                                }
                            }
                            v
                        }
                    }
                })
                .collect();
            let c = run.node(&y, j * len)?;
            words.push(c);
        }
        Ok(run.trace)
    }
}

/// Decodes a received word; fails at the first unfrozen input bit that
/// stays erased.
pub fn sc_decode(spec: &CodeSpec, received: &ErasureWord) -> Result<std::result::Result<Vec<u8>, DecodeFailure>> {
    if received.len() != spec.total_len() {
        return Err(Error::LengthMismatch {
            expected: spec.total_len(),
            actual: received.len(),
        });
    }
    let decoder = Decoder::new(spec)?;
    Ok(match decoder.run(&received.raw(), &Mode::Decode) {
        Ok(trace) => Ok(spec.info_indices().iter().map(|&i| trace.u_hat[i]).collect()),
        Err(bit_index) => Err(DecodeFailure { bit_index }),
    })
}
