//! Re-checkable certificates for the capacity-gain inequality and for
//! pointwise dominance between capacity polynomials.
//!
//! A gain certificate for `r = 2^t` shows `Σ_k Z_{P⁽⁰⁾}(W_r^{(k)}) < r·ε` on
//! `(0, 1)` in three steps: the difference vanishes at both endpoints, its
//! Sturm chain has no sign-variation drop on `(0, 1)`, and one interior
//! sample is negative. The full chain is serialized so the count can be
//! redone by hand.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::effective_channels::{coupled_bottom, coupled_top, regular_block_erasures};
use crate::error::{Error, Result};
use crate::poly::{count_with, int, rational, serde_rational, Poly, Rational, SturmSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LevelMap {
    /// `a ↦ a + a² − a³`
    #[serde(rename = "f0")]
    F0,
    /// `a ↦ a²`
    #[serde(rename = "f1")]
    F1,
}

impl LevelMap {
    pub fn apply(self, a: &Poly) -> Poly {
        match self {
            LevelMap::F0 => coupled_top(a),
            LevelMap::F1 => coupled_bottom(a),
        }
    }
}

impl fmt::Display for LevelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LevelMap::F0 => "f0",
            LevelMap::F1 => "f1",
        })
    }
}

/// Level maps for sub-codeword `k` (0-based) of `P⁽⁰⁾` with `t` levels, in
/// the order they are applied to ε (most significant bit of `k` first).
pub fn level_chain(t: u32, k: usize) -> Vec<LevelMap> {
    (0..t)
        .rev()
        .map(|level| if (k >> level) & 1 == 0 { LevelMap::F0 } else { LevelMap::F1 })
        .collect()
}

pub fn compose_chain(chain: &[LevelMap]) -> Poly {
    chain.iter().fold(Poly::epsilon(), |z, f| f.apply(&z))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointReport {
    pub k: usize,
    pub chain: Vec<LevelMap>,
    pub erasure: Poly,
    #[serde(with = "serde_rational")]
    pub at_zero: Rational,
    #[serde(with = "serde_rational")]
    pub at_one: Rational,
    /// The composed level maps reproduce `erasure` exactly.
    pub chain_matches: bool,
}

impl EndpointReport {
    pub fn holds(&self) -> bool {
        self.at_zero.is_zero() && self.at_one == int(1) && self.chain_matches
    }
}

/// Endpoint values and level-map decomposition of every sub-codeword of `P⁽⁰⁾`.
pub fn theorem1_endpoints(t: u32) -> Result<Vec<EndpointReport>> {
    let zero = int(0);
    let one = int(1);
    Ok(regular_block_erasures(0, t)?
        .into_iter()
        .enumerate()
        .map(|(k, erasure)| {
            let chain = level_chain(t, k);
            let chain_matches = compose_chain(&chain) == erasure;
            EndpointReport {
                k,
                at_zero: erasure.evaluate(&zero),
                at_one: erasure.evaluate(&one),
                erasure,
                chain,
                chain_matches,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    Refuted,
}

/// Certificate that a polynomial is negative on all of `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCertificate {
    pub difference_poly: Poly,
    #[serde(with = "rational_pair")]
    pub endpoint_values: (Rational, Rational),
    #[serde(with = "rational_pair")]
    pub interior_sample: (Rational, Rational),
    /// `None` when the difference is identically zero.
    pub roots_in_open_unit: Option<usize>,
    pub sturm_chain: Vec<Poly>,
    pub verdict: Verdict,
}

mod rational_pair {
    use super::*;
    use crate::poly::serde_rational_vec;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &(Rational, Rational), s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_rational_vec::serialize(&[v.0.clone(), v.1.clone()], s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<(Rational, Rational), D::Error> {
        let v = serde_rational_vec::deserialize(d)?;
        match <[Rational; 2]>::try_from(v) {
            Ok([a, b]) => Ok((a, b)),
            Err(_) => Err(serde::de::Error::custom("expected two rationals")),
        }
    }
}

fn check_sample(sample: &Rational) -> Result<()> {
    if sample.is_positive() && sample < &int(1) {
        Ok(())
    } else {
        Err(Error::out_of_range("interior sample", crate::poly::format_rational(sample), "(0, 1)"))
    }
}

/// Certifies `d < 0` on `(0, 1)` given `d(0) = d(1) = 0`.
pub fn certify_negative_on_unit(d: &Poly, sample: &Rational) -> Result<SignCertificate> {
    check_sample(sample)?;
    let (zero, one) = (int(0), int(1));
    let endpoint_values = (d.evaluate(&zero), d.evaluate(&one));
    let value = d.evaluate(sample);
    let (roots, chain) = if d.is_zero() {
        (None, Vec::new())
    } else {
        let sturm = SturmSequence::new(d)?;
        (Some(count_with(&sturm, &zero, &one)), sturm.chain().to_vec())
    };
    let certified = endpoint_values.0.is_zero()
        && endpoint_values.1.is_zero()
        && roots == Some(0)
        && value.is_negative();
    Ok(SignCertificate {
        difference_poly: d.clone(),
        endpoint_values,
        interior_sample: (sample.clone(), value),
        roots_in_open_unit: roots,
        sturm_chain: chain,
        verdict: if certified { Verdict::Certified } else { Verdict::Refuted },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GainCertificate {
    pub r: usize,
    pub t: u32,
    /// Family index of the coupled block (0 for the Arıkan-type kernel).
    pub pattern: usize,
    #[serde(flatten)]
    pub certificate: SignCertificate,
}

impl GainCertificate {
    pub fn verdict(&self) -> Verdict {
        self.certificate.verdict
    }
}

/// Gain certificate for an arbitrary regular pattern in place of `P⁽⁰⁾`.
pub fn certify_gain_for_pattern(pattern: usize, t: u32, sample: &Rational) -> Result<GainCertificate> {
    let r = 1usize << t;
    let sum = regular_block_erasures(pattern, t)?
        .iter()
        .fold(Poly::zero(), |acc, z| &acc + z);
    let d = &sum - &Poly::epsilon().scale(&int(r as i64));
    Ok(GainCertificate {
        r,
        t,
        pattern,
        certificate: certify_negative_on_unit(&d, sample)?,
    })
}

/// Certificate for `Σ_k Z_{P⁽⁰⁾}(W_r^{(k)}) < r·ε` on `(0, 1)`.
pub fn certify_gain(t: u32, sample: &Rational) -> Result<GainCertificate> {
    certify_gain_for_pattern(0, t, sample)
}

pub fn default_sample() -> Rational {
    rational(1, 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DominanceVerdict {
    /// `pa > pb` everywhere on `(0, 1)`.
    Certified,
    /// `pa = pb` identically, or `pa < pb` somewhere on `(0, 1)`.
    Refuted,
    /// `pa ≥ pb` on `(0, 1)` but with equality at an interior point.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominanceCertificate {
    pub difference_poly: Poly,
    pub roots_in_open_unit: Option<usize>,
    /// Interior roots where the difference changes sign.
    pub sign_changes_in_open_unit: Option<usize>,
    #[serde(with = "rational_pair")]
    pub interior_sample: (Rational, Rational),
    pub sturm_chain: Vec<Poly>,
    pub verdict: DominanceVerdict,
}

/// Decides whether `pa − pb` is strictly positive on `(0, 1)`; equality at
/// the endpoints is allowed.
pub fn certify_dominance(pa: &Poly, pb: &Poly) -> Result<DominanceCertificate> {
    let d = pa - pb;
    let (zero, one) = (int(0), int(1));
    if d.is_zero() {
        return Ok(DominanceCertificate {
            difference_poly: d,
            roots_in_open_unit: None,
            sign_changes_in_open_unit: None,
            interior_sample: (rational(1, 2), int(0)),
            sturm_chain: Vec::new(),
            verdict: DominanceVerdict::Refuted,
        });
    }
    let sturm = SturmSequence::new(&d)?;
    let roots = count_with(&sturm, &zero, &one);
    let odd = d.odd_multiplicity_part()?;
    let changes = if odd.degree().unwrap_or(0) == 0 {
        0
    } else {
        count_with(&SturmSequence::new(&odd)?, &zero, &one)
    };
    // Finitely many roots, so one of these dyadic points avoids them all.
    let sample = (1u32..)
        .flat_map(|level| {
            let den = 1i64 << level;
            (1..den).step_by(2).map(move |num| rational(num, den))
        })
        .find(|x| !d.evaluate(x).is_zero())
        .expect("nonzero polynomial has finitely many roots");
    let value = d.evaluate(&sample);
    let verdict = if changes > 0 || value.is_negative() {
        DominanceVerdict::Refuted
    } else if roots == 0 {
        DominanceVerdict::Certified
    } else {
        DominanceVerdict::Inconclusive
    };
    Ok(DominanceCertificate {
        difference_poly: d,
        roots_in_open_unit: Some(roots),
        sign_changes_in_open_unit: Some(changes),
        interior_sample: (sample, value),
        sturm_chain: sturm.chain().to_vec(),
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GainCurvePoint {
    #[serde(with = "serde_rational")]
    pub eps: Rational,
    /// `Σ_k Z_{P⁽⁰⁾}(W_r^{(k)})`
    #[serde(with = "serde_rational")]
    pub sum_z: Rational,
    /// `r·ε`
    #[serde(with = "serde_rational")]
    pub r_eps: Rational,
}

/// Both sides of the gain inequality on a grid.
pub fn gain_curve(t: u32, grid: &[Rational]) -> Result<Vec<GainCurvePoint>> {
    let r = int(1i64 << t);
    let sum = regular_block_erasures(0, t)?
        .iter()
        .fold(Poly::zero(), |acc, z| &acc + z);
    Ok(grid
        .iter()
        .map(|x| GainCurvePoint {
            eps: x.clone(),
            sum_z: sum.evaluate(x),
            r_eps: &r * x,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effective_channels::{design_erasures, proposed_scheme};
    use crate::patterns::{irregular_family_r4, regular_family, PatternAssignment};
    use proptest::prelude::*;

    #[test]
    fn endpoints_and_chains() {
        let t1 = theorem1_endpoints(1).unwrap();
        assert_eq!(t1[0].chain, vec![LevelMap::F0]);
        assert_eq!(t1[1].chain, vec![LevelMap::F1]);
        for t in 1..=4 {
            let reports = theorem1_endpoints(t).unwrap();
            assert_eq!(reports.len(), 1 << t);
            assert!(reports.iter().all(EndpointReport::holds));
            let direct = regular_block_erasures(0, t).unwrap();
            for (rep, z) in reports.iter().zip(direct) {
                assert_eq!(compose_chain(&rep.chain), z);
            }
        }
    }

    #[test]
    fn gain_t1() {
        let c = certify_gain(1, &default_sample()).unwrap();
        assert_eq!(c.certificate.difference_poly, Poly::from_ints(&[0, -1, 2, -1]));
        assert_eq!(c.certificate.endpoint_values, (int(0), int(0)));
        assert_eq!(c.certificate.roots_in_open_unit, Some(0));
        assert_eq!(c.certificate.interior_sample.1, rational(-1, 8));
        assert_eq!(c.verdict(), Verdict::Certified);
    }

    #[test]
    fn gain_certified_up_to_sixteen() {
        for t in 1..=4 {
            let c = certify_gain(t, &default_sample()).unwrap();
            assert_eq!(c.verdict(), Verdict::Certified, "t = {t}");
            let last = c.certificate.sturm_chain.last().unwrap();
            assert_eq!(last.degree(), Some(0));
        }
    }

    #[test]
    fn identity_pattern_refuted() {
        let c = certify_gain_for_pattern(3, 2, &default_sample()).unwrap();
        assert!(c.certificate.difference_poly.is_zero());
        assert_eq!(c.verdict(), Verdict::Refuted);
        assert_eq!(c.certificate.roots_in_open_unit, None);
    }

    #[test]
    fn sample_outside_unit_rejected() {
        assert!(certify_gain(1, &int(1)).is_err());
        assert!(certify_gain(1, &int(0)).is_err());
    }

    #[test]
    fn dominance_examples() {
        let half = Poly::from_ints(&[1, 0, -1]).scale(&rational(1, 2));
        let c22 = proposed_scheme(1).unwrap().capacity_poly;
        assert_eq!(certify_dominance(&c22, &half).unwrap().verdict, DominanceVerdict::Certified);
        assert_eq!(certify_dominance(&half, &c22).unwrap().verdict, DominanceVerdict::Refuted);
        let c4r = proposed_scheme(2).unwrap().capacity_poly;
        let c4i = design_erasures(&PatternAssignment::new(vec![2, 5, 7, 7]), &irregular_family_r4())
            .unwrap()
            .capacity_poly;
        assert_eq!(certify_dominance(&c4i, &c4r).unwrap().verdict, DominanceVerdict::Certified);
        assert_eq!(certify_dominance(&c4r, &c4r).unwrap().verdict, DominanceVerdict::Refuted);
        let _ = regular_family(2);
    }

    #[test]
    fn dominance_touching_and_crossing() {
        // (2ε − 1)² ≥ 0 touches zero at 1/2 only.
        let touch = Poly::from_ints(&[1, -4, 4]);
        let c = certify_dominance(&touch, &Poly::zero()).unwrap();
        assert_eq!(c.verdict, DominanceVerdict::Inconclusive);
        assert_eq!(c.roots_in_open_unit, Some(1));
        assert_eq!(c.sign_changes_in_open_unit, Some(0));
        let cross = Poly::from_ints(&[-1, 2]);
        assert_eq!(certify_dominance(&cross, &Poly::zero()).unwrap().verdict, DominanceVerdict::Refuted);
    }

    #[test]
    fn gain_curve_below_diagonal() {
        let grid: Vec<Rational> = (1..20).map(|k| rational(k, 20)).collect();
        for p in gain_curve(2, &grid).unwrap() {
            assert!(p.sum_z < p.r_eps);
        }
    }

    #[test]
    fn certificate_serializes() {
        let c = certify_gain(2, &default_sample()).unwrap();
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["verdict"], "certified");
        assert_eq!(json["r"], 4);
        assert!(json["sturm_chain"].as_array().unwrap().len() >= 2);
        let back: GainCertificate = serde_json::from_value(json).unwrap();
        assert_eq!(back, c);
    }

    proptest! {
        #[test]
        fn verdict_independent_of_sample(t in 1u32..=3, num in 1i64..1000) {
            let s = rational(num, 1000);
            prop_assert_eq!(certify_gain(t, &s).unwrap().verdict(), Verdict::Certified);
        }
    }
}
