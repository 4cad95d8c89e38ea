//! Binary erasure channel transforms acting on erasure polynomials.
//!
//! A BEC is identified with its erasure probability, so every transform is
//! plain polynomial arithmetic: the check (⊡) combination of erasures `a`,`b`
//! is `a + b - ab`, the bit (⊛) combination is `ab`, and `r` repetitions of a
//! channel give `a^r`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{format_rational, int, Poly, Rational};

pub fn check_combine(za: &Poly, zb: &Poly) -> Poly {
    &(za + zb) - &(za * zb)
}

pub fn bit_combine(za: &Poly, zb: &Poly) -> Poly {
    za * zb
}

pub fn repeat_channel(z: &Poly, r: u32) -> Poly {
    z.pow(r)
}

/// Expression tree over the raw channel `W = BEC(ε)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ChannelExpr {
    Leaf,
    Check(Box<ChannelExpr>, Box<ChannelExpr>),
    Bit(Box<ChannelExpr>, Box<ChannelExpr>),
    Rep(Box<ChannelExpr>, u32),
}

impl ChannelExpr {
    pub fn check(a: ChannelExpr, b: ChannelExpr) -> Self {
        ChannelExpr::Check(Box::new(a), Box::new(b))
    }

    pub fn bit(a: ChannelExpr, b: ChannelExpr) -> Self {
        ChannelExpr::Bit(Box::new(a), Box::new(b))
    }

    /// `rep(base, 1)` collapses to `base`; nested repetitions multiply out.
    pub fn rep(base: ChannelExpr, count: u32) -> Self {
        match (base, count) {
            (base, 1) => base,
            (ChannelExpr::Rep(inner, k), count) => ChannelExpr::Rep(inner, k * count),
            (base, count) => ChannelExpr::Rep(Box::new(base), count),
        }
    }

    /// Left-folded bit combination of several channels.
    pub fn bit_all(parts: impl IntoIterator<Item = ChannelExpr>) -> Self {
        let mut it = parts.into_iter();
        let first = it.next().unwrap_or(ChannelExpr::Leaf);
        it.fold(first, ChannelExpr::bit)
    }

    pub fn normalize(&self) -> ChannelExpr {
        match self {
            ChannelExpr::Leaf => ChannelExpr::Leaf,
            ChannelExpr::Check(a, b) => ChannelExpr::check(a.normalize(), b.normalize()),
            ChannelExpr::Bit(a, b) => ChannelExpr::bit(a.normalize(), b.normalize()),
            ChannelExpr::Rep(a, k) => ChannelExpr::rep(a.normalize(), *k),
        }
    }

    pub fn erasure_poly(&self) -> Poly {
        match self {
            ChannelExpr::Leaf => Poly::epsilon(),
            ChannelExpr::Check(a, b) => check_combine(&a.erasure_poly(), &b.erasure_poly()),
            ChannelExpr::Bit(a, b) => bit_combine(&a.erasure_poly(), &b.erasure_poly()),
            ChannelExpr::Rep(a, k) => repeat_channel(&a.erasure_poly(), *k),
        }
    }
}

pub fn expr_to_erasure_poly(e: &ChannelExpr) -> Poly {
    e.erasure_poly()
}

impl fmt::Display for ChannelExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelExpr::Leaf => write!(f, "W"),
            ChannelExpr::Check(a, b) => write!(f, "check({a},{b})"),
            ChannelExpr::Bit(a, b) => write!(f, "bit({a},{b})"),
            ChannelExpr::Rep(a, k) => write!(f, "rep({a},{k})"),
        }
    }
}

impl FromStr for ChannelExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = ExprParser {
            src: s,
            bytes: s.as_bytes(),
            pos: 0,
        };
        let expr = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.bytes.len() {
            return Err(parser.error("trailing input"));
        }
        Ok(expr)
    }
}

struct ExprParser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn error(&self, reason: &str) -> Error {
        Error::parse("channel expression", self.src, format!("{reason} at offset {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        self.src[start..self.pos].to_ascii_lowercase()
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        self.src[start..self.pos]
            .parse()
            .map_err(|_| self.error("expected a repetition count"))
    }

    fn expr(&mut self) -> Result<ChannelExpr> {
        match self.ident().as_str() {
            "w" => Ok(ChannelExpr::Leaf),
            op @ ("check" | "bit") => {
                self.expect(b'(')?;
                let a = self.expr()?;
                self.expect(b',')?;
                let b = self.expr()?;
                self.expect(b')')?;
                Ok(if op == "check" {
                    ChannelExpr::check(a, b)
                } else {
                    ChannelExpr::bit(a, b)
                })
            }
            "rep" => {
                self.expect(b'(')?;
                let a = self.expr()?;
                self.expect(b',')?;
                let k = self.number()?;
                self.expect(b')')?;
                if k == 0 {
                    return Err(self.error("repetition count must be at least 1"));
                }
                Ok(ChannelExpr::rep(a, k))
            }
            "" => Err(self.error("expected W, check, bit or rep")),
            other => Err(self.error(&format!("unknown operator {other:?}"))),
        }
    }
}

/// Erasure polynomial of the synthetic channel `W_m^(i)` grown from `base`:
/// bits of `i` are read most significant first, a 0 applies `z ↦ 2z - z²`
/// and a 1 applies `z ↦ z²`.
pub fn standard_synthetic_channel(m: u32, i: u64, base: &Poly) -> Result<Poly> {
    if m >= 64 || i >= 1u64 << m {
        return Err(Error::out_of_range("i", i, format!("[0, 2^{m})")));
    }
    let mut z = base.clone();
    for level in (0..m).rev() {
        z = if (i >> level) & 1 == 0 {
            check_combine(&z, &z)
        } else {
            bit_combine(&z, &z)
        };
    }
    Ok(z)
}

/// All `2^m` synthetic channels grown from `base`, in index order.
pub fn synthetic_channels(m: u32, base: &Poly) -> Vec<Poly> {
    let mut layer = vec![base.clone()];
    for _ in 0..m {
        layer = layer
            .iter()
            .flat_map(|z| [check_combine(z, z), bit_combine(z, z)])
            .collect();
    }
    layer
}

/// BEC capacity `1 - z(eps)`.
pub fn capacity_at(z: &Poly, eps: &Rational) -> Result<Rational> {
    if *eps < Rational::zero() || *eps > Rational::one() {
        return Err(Error::out_of_range("eps", format_rational(eps), "[0, 1]"));
    }
    Ok(int(1) - z.evaluate(eps))
}
