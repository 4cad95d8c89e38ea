//! Exact univariate polynomials in ε over the rationals.
//!
//! Every erasure probability and capacity in this crate is a `Poly`. Root
//! counting uses a Sturm chain built from the square-free part of the input,
//! with each chain element rescaled by a positive constant to primitive
//! integer form so coefficient growth stays polynomial.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `num/den`, an integer, or a decimal such as `0.05` or `-1.5e-3`
/// into an exact rational.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    if s.is_empty() {
        return Err(Error::parse("rational", input, "empty string"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let numer = BigInt::from_str(n.trim())
            .map_err(|e| Error::parse("rational", input, e.to_string()))?;
        let denom = BigInt::from_str(d.trim())
            .map_err(|e| Error::parse("rational", input, e.to_string()))?;
        if denom.is_zero() {
            return Err(Error::parse("rational", input, "zero denominator"));
        }
        return Ok(Rational::new(numer, denom));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp = s[pos + 1..]
                .parse::<i32>()
                .map_err(|e| Error::parse("rational", input, e.to_string()))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty()
        || !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(Error::parse("rational", input, "not a number"));
    }
    let all_digits = format!("{whole}{frac}");
    let numer = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits })
        .map_err(|e| Error::parse("rational", input, e.to_string()))?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Exact `num/den` rendering (the denominator is always printed).
pub fn format_rational(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub fn rational_to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Twelve significant digits, for human-facing tables.
pub fn format_decimal(value: &Rational) -> String {
    let x = rational_to_f64(value);
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    s
}

/// Serde adapter writing a [`Rational`] as a `"num/den"` string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(de::Error::custom)
    }
}

/// Serde adapter for lists of rationals, see [`serde_rational`].
pub mod serde_rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format_rational(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_rational(s).map_err(de::Error::custom))
            .collect()
    }
}

/// Univariate polynomial, coefficient `i` multiplies `ε^i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Compose,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The indeterminate ε itself.
    pub fn epsilon() -> Self {
        Poly::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, degree: usize) -> Rational {
        self.coeffs.get(degree).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn evaluate_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }

    pub fn sign_at(&self, x: &Rational) -> Ordering {
        self.evaluate(x).cmp(&Rational::zero())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, exponent: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `self(inner(ε))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| &(&acc * inner) + &Poly::constant(c.clone()))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn arith(op: ArithOp, p: &Poly, q: &Poly) -> Poly {
        match op {
            ArithOp::Add => p + q,
            ArithOp::Sub => p - q,
            ArithOp::Mul => p * q,
            ArithOp::Compose => p.compose(q),
        }
    }

    /// Euclidean division: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        let d_deg = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let d_lead = divisor.coeffs[d_deg].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d_deg {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - d_deg];
        for shift in (0..quot.len()).rev() {
            let c = &rem[shift + d_deg] / &d_lead;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &c * dc;
            }
            quot[shift] = c;
        }
        rem.truncate(d_deg);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Positive rational multiple of `self` with coprime integer coefficients.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        Poly::new(
            ints.into_iter()
                .map(|c| Rational::from_integer(c / &content))
                .collect(),
        )
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("divisor is nonzero");
            a = b;
            b = r.primitive();
        }
        match a.leading() {
            Some(lead) => {
                let inv = lead.recip();
                a.scale(&inv)
            }
            None => a,
        }
    }

    /// `self / gcd(self, self')`: same distinct roots, all simple.
    pub fn square_free_part(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = self.gcd(&self.derivative());
        let (q, r) = self.div_rem(&g)?;
        debug_assert!(r.is_zero());
        Ok(q)
    }

    /// Product of the square-free factors whose roots have odd multiplicity
    /// (Yun's decomposition); its real roots are exactly where `self` changes
    /// sign.
    pub fn odd_multiplicity_part(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let exact = |a: &Poly, b: &Poly| -> Result<Poly> { Ok(a.div_rem(b)?.0) };
        let d = self.derivative();
        let a0 = self.gcd(&d);
        let mut b = exact(self, &a0)?;
        let mut c = exact(&d, &a0)?;
        let mut dd = &c - &b.derivative();
        let mut out = Poly::one();
        let mut i = 1u32;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&dd);
            b = exact(&b, &a)?;
            c = exact(&dd, &a)?;
            dd = &c - &b.derivative();
            if i % 2 == 1 {
                out = &out * &a;
            }
            i += 1;
        }
        Ok(out.primitive())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            let unit = magnitude.is_one();
            match (deg, unit) {
                (0, _) => write!(f, "{magnitude}")?,
                (_, true) => {}
                (_, false) => write!(f, "{magnitude}*")?,
            }
            match deg {
                0 => {}
                1 => write!(f, "e")?,
                d => write!(f, "e^{d}")?,
            }
        }
        Ok(())
    }
}

/// Accepts a coefficient list, lowest degree first: `0,1,-1` or `["0/1","1/1"]`.
impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let inner = trimmed
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .unwrap_or(trimmed);
        if inner.trim().is_empty() {
            return Ok(Poly::zero());
        }
        inner
            .split(',')
            .map(|part| parse_rational(part.trim().trim_matches('"')))
            .collect::<Result<Vec<_>>>()
            .map(Poly::new)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&format_rational(c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PolyVisitor;
        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = Poly;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of \"num/den\" coefficient strings")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Poly, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(s) = seq.next_element::<String>()? {
                    coeffs.push(parse_rational(&s).map_err(de::Error::custom)?);
                }
                Ok(Poly::new(coeffs))
            }
        }
        deserializer.deserialize_seq(PolyVisitor)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                (&self).$method(rhs)
            }
        }
        impl $trait<Poly> for &Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

/// Sturm chain of the square-free part of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SturmSequence {
    chain: Vec<Poly>,
}

impl SturmSequence {
    pub fn new(p: &Poly) -> Result<Self> {
        let head = p.square_free_part()?.primitive();
        let mut chain = vec![head];
        if chain[0].degree() == Some(0) {
            return Ok(SturmSequence { chain });
        }
        chain.push(chain[0].derivative().primitive());
        loop {
            let n = chain.len();
            let (_, rem) = chain[n - 2].div_rem(&chain[n - 1])?;
            if rem.is_zero() {
                break;
            }
            chain.push((-rem).primitive());
        }
        Ok(SturmSequence { chain })
    }

    pub fn chain(&self) -> &[Poly] {
        &self.chain
    }

    /// Sign changes along the chain at `x`, zeros skipped.
    pub fn sign_variations(&self, x: &Rational) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for p in &self.chain {
            let s = p.sign_at(x);
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }
}

/// Distinct real roots of `p` in the open interval `(a, b)`.
pub fn count_roots_in(p: &Poly, a: &Rational, b: &Rational) -> Result<usize> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if a >= b {
        return Err(Error::EmptyInterval {
            lower: format_rational(a),
            upper: format_rational(b),
        });
    }
    let sturm = SturmSequence::new(p)?;
    Ok(count_with(&sturm, a, b))
}

/// `V(a) - V(b)` counts roots in the half-open `(a, b]` for a square-free head;
/// a root at `b` is removed to get the open interval.
pub(crate) fn count_with(sturm: &SturmSequence, a: &Rational, b: &Rational) -> usize {
    let half_open = sturm.sign_variations(a) - sturm.sign_variations(b);
    if sturm.chain[0].evaluate(b).is_zero() {
        half_open - 1
    } else {
        half_open
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn add_and_annihilate() {
        assert_eq!(Poly::arith(ArithOp::Add, &p(&[0, 1]), &p(&[0, 0, 1])), p(&[0, 1, 1]));
        assert!(Poly::arith(ArithOp::Mul, &p(&[1, 2, 3]), &Poly::zero()).is_zero());
    }

    #[test]
    fn odd_multiplicity() {
        // (x-1)^2 (x-2)^3 (x-3)
        let f = &(&p(&[-1, 1]).pow(2) * &p(&[-2, 1]).pow(3)) * &p(&[-3, 1]);
        let want = &p(&[-2, 1]) * &p(&[-3, 1]);
        assert_eq!(f.odd_multiplicity_part().unwrap(), want.primitive());
        assert_eq!(p(&[1, 0, 1]).pow(2).odd_multiplicity_part().unwrap(), p(&[1]));
        assert_eq!(p(&[0, 0, 5]).odd_multiplicity_part().unwrap(), p(&[1]));
    }

    #[test]
    fn compose_square_of_check_transform() {
        let inner = p(&[0, 1, 1, -1]);
        let outer = p(&[0, 0, 1]);
        assert_eq!(
            Poly::arith(ArithOp::Compose, &outer, &inner),
            p(&[0, 0, 1, 2, -1, -2, 1])
        );
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(p(&[1, 0, -1]).evaluate(&rational(1, 2)), rational(3, 4));
        let cap = p(&[2, 0, -1, -2, 1]).scale(&rational(1, 4));
        assert_eq!(cap.evaluate(&rational(1, 2)), rational(25, 64));
        let q = p(&[7, 3, 5]);
        assert_eq!(q.evaluate(&Rational::zero()), int(7));
    }

    #[test]
    fn root_count_examples() {
        assert_eq!(count_roots_in(&p(&[-2, 0, 1]), &int(0), &int(2)).unwrap(), 1);
        assert_eq!(count_roots_in(&p(&[1, 0, 1]), &int(-10), &int(10)).unwrap(), 0);
        let diff = &(&p(&[0, 1, 1, -1]) + &p(&[0, 0, 1])) - &p(&[0, 2]);
        assert_eq!(count_roots_in(&diff, &int(0), &int(1)).unwrap(), 0);
    }

    #[test]
    fn root_count_rejects_zero_and_empty_interval() {
        assert_eq!(
            count_roots_in(&Poly::zero(), &int(0), &int(1)),
            Err(Error::ZeroPolynomial)
        );
        assert!(matches!(
            count_roots_in(&p(&[1, 1]), &int(1), &int(1)),
            Err(Error::EmptyInterval { .. })
        ));
    }

    #[test]
    fn open_interval_excludes_endpoint_roots() {
        // ε(1-ε)(2ε-1)^2 has roots 0, 1/2 (double), 1
        let q = &(&p(&[0, 1]) * &p(&[1, -1])) * &p(&[1, -4, 4]);
        assert_eq!(count_roots_in(&q, &int(0), &int(1)).unwrap(), 1);
        assert_eq!(count_roots_in(&q, &rational(-1, 2), &rational(3, 2)).unwrap(), 3);
    }

    #[test]
    fn sturm_chain_shape() {
        let q = p(&[-2, 0, 1]);
        let s = SturmSequence::new(&q).unwrap();
        assert_eq!(s.chain().len(), 3);
        assert_eq!(s.chain().last().unwrap().degree(), Some(0));
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("3/4").unwrap(), rational(3, 4));
        assert_eq!(parse_rational("0.05").unwrap(), rational(1, 20));
        assert_eq!(parse_rational("-1.5e-1").unwrap(), rational(-3, 20));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(format_rational(&rational(6, 8)), "3/4");
        assert_eq!(format_decimal(&rational(25, 64)), "0.390625");
        assert_eq!(format_decimal(&rational(1, 3)), "0.333333333333");
    }

    #[test]
    fn json_round_trip() {
        let q = Poly::new(vec![rational(1, 2), int(0), rational(-3, 4)]);
        let json = serde_json::to_string(&q).unwrap();
        assert_eq!(json, r#"["1/2","0/1","-3/4"]"#);
        assert_eq!(serde_json::from_str::<Poly>(&json).unwrap(), q);
        assert_eq!("0,1,-1".parse::<Poly>().unwrap(), p(&[0, 1, -1]));
    }

    #[test]
    fn display_reads_naturally() {
        assert_eq!(p(&[0, 1, 1, -1]).to_string(), "e + e^2 - e^3");
        assert_eq!(p(&[2, 0, -1]).scale(&rational(1, 4)).to_string(), "1/2 - 1/4*e^2");
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rational(n, d))
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(small_rational(), 0..6).prop_map(Poly::new)
    }

    proptest! {
        #[test]
        fn mul_is_pointwise(a in small_poly(), b in small_poly(),
                            xs in prop::collection::vec(small_rational(), 20)) {
            let prod = &a * &b;
            for x in &xs {
                prop_assert_eq!(prod.evaluate(x), a.evaluate(x) * b.evaluate(x));
            }
            if !a.is_zero() && !b.is_zero() {
                prop_assert_eq!(prod.degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
            }
        }

        #[test]
        fn compose_with_identity(a in small_poly()) {
            prop_assert_eq!(a.compose(&Poly::epsilon()), a.clone());
            prop_assert_eq!(Poly::epsilon().compose(&a), a);
        }

        #[test]
        fn sturm_chain_terminates_in_constant(a in small_poly()) {
            prop_assume!(!a.is_zero());
            let s = SturmSequence::new(&a).unwrap();
            prop_assert_eq!(s.chain().last().unwrap().degree(), Some(0));
            prop_assert!(s.chain().len() <= a.degree().unwrap() + 1);
        }
    }

    proptest! {
        // Each case scans up to 4000 points exactly; fewer cases keep it quick.
        #![proptest_config(ProptestConfig::with_cases(96))]
        #[test]
        fn sturm_count_matches_scan(
            ticks in prop::collection::btree_set(-1900i64..1900, 0..=6),
            quad in prop::bool::ANY,
            lead in prop::sample::select(vec![-3i64, -1, 2, 5]),
            lo in -2000i64..0,
            hi in 1i64..2000,
        ) {
            // roots sit half-way between scan points, at least 1/1000 apart
            let mut q = Poly::constant(int(lead));
            for t in &ticks {
                q = &q * &Poly::new(vec![-rational(2 * t + 1, 2000), int(1)]);
            }
            if quad {
                q = &q * &p(&[1, 0, 1]);
            }
            prop_assume!(q.degree().unwrap() <= 8);
            let a = rational(lo, 1000);
            let b = rational(hi, 1000);
            let mut scanned = 0;
            let mut prev = q.sign_at(&a);
            for k in lo + 1..=hi {
                let s = q.sign_at(&rational(k, 1000));
                if s != prev {
                    scanned += 1;
                }
                prev = s;
            }
            prop_assert_eq!(count_roots_in(&q, &a, &b).unwrap(), scanned);
        }
    }
}
