//! Exponent hypotheses: conjugate exponents, the embedding conditions
//! `H^s_p ⊂ H^t_q`, and the four Strichartz-type cases under which the
//! multiplier space `M[H^s_p → H^{-t}_q]` equals `H^{-t}_q ∩ H^{-s}_{p'}`.
//!
//! Predicates are generic over the scalar type. With [`Rational64`] inputs
//! every comparison is exact, so boundary cases such as `s = n/p` are
//! decided correctly. With `f64` inputs comparisons are made with zero
//! tolerance, which can misreport a boundary case whose two sides are equal
//! mathematically but differ in the last bit.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

/// Scalars the predicates can compute with.
pub trait IndexScalar:
    Copy + PartialOrd + Num + FromPrimitive + ToPrimitive + fmt::Display
{
}

impl<T> IndexScalar for T where
    T: Copy + PartialOrd + Num + FromPrimitive + ToPrimitive + fmt::Display
{
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    #[serde(rename = "emb-1")]
    Emb1,
    #[serde(rename = "emb-2")]
    Emb2,
    #[serde(rename = "strich-1")]
    Strich1,
    #[serde(rename = "strich-2")]
    Strich2,
    #[serde(rename = "strich-3")]
    Strich3,
    #[serde(rename = "strich-4")]
    Strich4,
    #[serde(rename = "none")]
    None,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::Emb1 => "emb-1",
            CaseTag::Emb2 => "emb-2",
            CaseTag::Strich1 => "strich-1",
            CaseTag::Strich2 => "strich-2",
            CaseTag::Strich3 => "strich-3",
            CaseTag::Strich4 => "strich-4",
            CaseTag::None => "none",
        };
        f.write_str(s)
    }
}

/// Outcome of a hypothesis check. `case_tag` is [`CaseTag::None`] exactly
/// when `holds` is false, and `detail` then names the first failing
/// inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionVerdict {
    pub holds: bool,
    pub case_tag: CaseTag,
    pub detail: String,
}

impl ConditionVerdict {
    fn pass(tag: CaseTag, detail: String) -> Self {
        Self {
            holds: true,
            case_tag: tag,
            detail,
        }
    }

    fn fail(detail: String) -> Self {
        Self {
            holds: false,
            case_tag: CaseTag::None,
            detail,
        }
    }
}

fn open_exponent<T: IndexScalar>(p: T) -> Result<()> {
    if p > T::one() {
        Ok(())
    } else {
        Err(Error::InvalidExponent {
            p: p.to_f64().unwrap_or(f64::NAN),
            reason: "must lie in (1, ∞)",
        })
    }
}

fn dim<T: IndexScalar>(n: usize) -> T {
    T::from_usize(n).expect("dimension representable")
}

/// `p' = p/(p-1)`, the solution of `1/p + 1/p' = 1`.
pub fn conjugate_exponent<T: IndexScalar>(p: T) -> Result<T> {
    open_exponent(p)?;
    Ok(p / (p - T::one()))
}

/// Conditions for the continuous embedding `H^s_p ⊂ H^t_q`:
/// 1) `p ≤ q` and `s - n/p ≥ t - n/q`, or 2) `p ≥ q` and `s ≥ t`.
pub fn embedding_holds<T: IndexScalar>(
    s: T,
    p: T,
    t: T,
    q: T,
    n: usize,
) -> Result<ConditionVerdict> {
    open_exponent(p)?;
    open_exponent(q)?;
    let nn: T = dim(n);
    let lhs = s - nn / p;
    let rhs = t - nn / q;
    if p <= q && lhs >= rhs {
        return Ok(ConditionVerdict::pass(
            CaseTag::Emb1,
            format!("p = {p} ≤ q = {q} and s - n/p = {lhs} ≥ t - n/q = {rhs}"),
        ));
    }
    if p >= q && s >= t {
        return Ok(ConditionVerdict::pass(
            CaseTag::Emb2,
            format!("p = {p} ≥ q = {q} and s = {s} ≥ t = {t}"),
        ));
    }
    let detail = if p <= q {
        format!("p = {p} ≤ q = {q} but s - n/p = {lhs} < t - n/q = {rhs}")
    } else {
        format!("p = {p} > q = {q} but s = {s} < t = {t}")
    };
    Ok(ConditionVerdict::fail(detail))
}

/// Hypotheses of the multiplier description theorem for
/// `M[H^s_p → H^{-t}_q]`.
///
/// With `q'` the conjugate of `q`:
/// * if `s ≥ t`: `s > n/p` and either 1) `p ≤ q'`, `s - n/p ≥ t - n/q'`
///   or 2) `p ≥ q'`;
/// * if `t ≥ s`: `t > n/q'` and either 3) `q' ≤ p`, `t - n/q' ≥ s - n/p`
///   or 4) `q' ≥ p`.
///
/// When `s = t` both branches are tried and the first satisfied case in the
/// order 1, 2, 3, 4 is reported.
pub fn strichartz_case<T: IndexScalar>(
    s: T,
    t: T,
    p: T,
    q: T,
    n: usize,
) -> Result<ConditionVerdict> {
    if s < T::zero() {
        return Err(Error::InvalidSmoothness(s.to_f64().unwrap_or(f64::NAN)));
    }
    if t < T::zero() {
        return Err(Error::InvalidSmoothness(t.to_f64().unwrap_or(f64::NAN)));
    }
    open_exponent(p)?;
    let qc = conjugate_exponent(q)?;
    let nn: T = dim(n);
    let (np, nq) = (nn / p, nn / qc);
    let mut failures = Vec::new();

    if s >= t {
        if s > np {
            if p <= qc && s - np >= t - nq {
                return Ok(ConditionVerdict::pass(
                    CaseTag::Strich1,
                    format!(
                        "s = {s} > n/p = {np}; p = {p} ≤ q' = {qc}; s - n/p = {} ≥ t - n/q' = {}",
                        s - np,
                        t - nq
                    ),
                ));
            }
            if p >= qc {
                return Ok(ConditionVerdict::pass(
                    CaseTag::Strich2,
                    format!("s = {s} > n/p = {np}; p = {p} ≥ q' = {qc}"),
                ));
            }
            failures.push(format!(
                "p = {p} < q' = {qc} but s - n/p = {} < t - n/q' = {}",
                s - np,
                t - nq
            ));
        } else {
            failures.push(format!("s = {s} ≤ n/p = {np}"));
        }
    }
    if t >= s {
        if t > nq {
            if qc <= p && t - nq >= s - np {
                return Ok(ConditionVerdict::pass(
                    CaseTag::Strich3,
                    format!(
                        "t = {t} > n/q' = {nq}; q' = {qc} ≤ p = {p}; t - n/q' = {} ≥ s - n/p = {}",
                        t - nq,
                        s - np
                    ),
                ));
            }
            if qc >= p {
                return Ok(ConditionVerdict::pass(
                    CaseTag::Strich4,
                    format!("t = {t} > n/q' = {nq}; q' = {qc} ≥ p = {p}"),
                ));
            }
            failures.push(format!(
                "q' = {qc} < p = {p} but t - n/q' = {} < s - n/p = {}",
                t - nq,
                s - np
            ));
        } else {
            failures.push(format!("t = {t} ≤ n/q' = {nq}"));
        }
    }
    Ok(ConditionVerdict::fail(failures.join("; ")))
}

/// A numeric argument parsed from text: exact when the text is a fraction
/// or a terminating decimal that fits in `i64`, floating otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Number {
    Exact(Rational64),
    Float(f64),
}

impl Number {
    pub fn to_f64(self) -> f64 {
        match self {
            Number::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Number::Float(x) => x,
        }
    }

    pub fn as_exact(self) -> Option<Rational64> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Float(_) => None,
        }
    }
}

impl From<f64> for Number {
    fn from(x: f64) -> Self {
        Number::Float(x)
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(r) => write!(f, "{r}"),
            Number::Float(x) => write!(f, "{x}"),
        }
    }
}

fn parse_decimal(text: &str) -> Option<Rational64> {
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut numer: i64 = if all.is_empty() { 0 } else { all.parse().ok()? };
    if neg {
        numer = -numer;
    }
    let scale = exp - frac_part.len() as i32;
    let pow = 10i64.checked_pow(scale.unsigned_abs())?;
    if scale >= 0 {
        Some(Rational64::from_integer(numer.checked_mul(pow)?))
    } else {
        Some(Rational64::new(numer, pow))
    }
}

impl FromStr for Number {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = || Error::Format(format!("not a number: {text:?}"));
        if let Some((a, b)) = text.split_once('/') {
            let num = parse_decimal(a.trim()).ok_or_else(bad)?;
            let den = parse_decimal(b.trim()).ok_or_else(bad)?;
            if den == Rational64::from_integer(0) {
                return Err(Error::Format(format!("zero denominator in {text:?}")));
            }
            return Ok(Number::Exact(num / den));
        }
        if let Some(r) = parse_decimal(text) {
            return Ok(Number::Exact(r));
        }
        let x: f64 = text.parse().map_err(|_| bad())?;
        if !x.is_finite() {
            return Err(Error::NonFinite(text.to_string()));
        }
        Ok(Number::Float(x))
    }
}

/// Index check on parsed arguments; the `bool` reports whether exact
/// rational arithmetic was used.
pub fn strichartz_case_numbers(
    s: Number,
    t: Number,
    p: Number,
    q: Number,
    n: usize,
) -> Result<(ConditionVerdict, bool)> {
    match (s.as_exact(), t.as_exact(), p.as_exact(), q.as_exact()) {
        (Some(s), Some(t), Some(p), Some(q)) => Ok((strichartz_case(s, t, p, q, n)?, true)),
        _ => Ok((
            strichartz_case(s.to_f64(), t.to_f64(), p.to_f64(), q.to_f64(), n)?,
            false,
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate_exponent(2.0).unwrap(), 2.0);
        assert_eq!(conjugate_exponent(r(4, 1)).unwrap(), r(4, 3));
        assert_eq!(conjugate_exponent(1.5).unwrap(), 3.0);
        assert!(conjugate_exponent(1.0).is_err());
        assert!(conjugate_exponent(0.3).is_err());
    }

    #[test]
    fn embedding_examples() {
        let v = embedding_holds(1.0, 2.0, 1.0, 2.0, 1).unwrap();
        assert!(v.holds);
        assert_eq!(v.case_tag, CaseTag::Emb1);
        let v = embedding_holds(r(1, 1), r(2, 1), r(0, 1), r(6, 1), 2).unwrap();
        assert_eq!((v.holds, v.case_tag), (true, CaseTag::Emb1));
        let v = embedding_holds(0.0, 2.0, 1.0, 2.0, 1).unwrap();
        assert!(!v.holds);
        assert_eq!(v.case_tag, CaseTag::None);
        assert!(v.detail.contains("<"));
        assert!(embedding_holds(0.0, 1.0, 0.0, 2.0, 1).is_err());
    }

    #[test]
    fn strichartz_examples() {
        let v = strichartz_case(1.0, 1.0, 2.0, 2.0, 1).unwrap();
        assert!(v.holds);
        assert_eq!(v.case_tag, CaseTag::Strich1);
        let v = strichartz_case(0.4, 0.1, 2.0, 2.0, 1).unwrap();
        assert!(!v.holds);
        assert!(v.detail.contains("≤ n/p"), "{}", v.detail);
        let v = strichartz_case(2.0, 0.0, 4.0, 2.0, 3).unwrap();
        assert_eq!((v.holds, v.case_tag), (true, CaseTag::Strich2));
    }

    #[test]
    fn strict_boundary_fails() {
        // s = n/p exactly
        let v = strichartz_case(r(1, 2), r(0, 1), r(2, 1), r(2, 1), 1).unwrap();
        assert!(!v.holds);
        let v = strichartz_case(r(2, 3), r(0, 1), r(3, 2), r(4, 1), 1).unwrap();
        assert!(!v.holds);
        let v = strichartz_case(r(2, 3) + r(1, 1_000_000), r(0, 1), r(3, 2), r(4, 1), 1).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn strichartz_rejects_bad_input() {
        assert!(matches!(
            strichartz_case(-0.1, 0.0, 2.0, 2.0, 1),
            Err(Error::InvalidSmoothness(_))
        ));
        assert!(strichartz_case(1.0, 0.0, 1.0, 2.0, 1).is_err());
        assert!(strichartz_case(1.0, 0.0, 2.0, 1.0, 1).is_err());
    }

    #[test]
    fn t_dominant_branch() {
        // t ≥ s, q = 3 so q' = 3/2
        let v = strichartz_case(r(0, 1), r(1, 1), r(2, 1), r(3, 1), 1).unwrap();
        assert_eq!((v.holds, v.case_tag), (true, CaseTag::Strich3));
        let v = strichartz_case(r(0, 1), r(1, 1), r(2, 1), r(3, 2), 1).unwrap();
        assert_eq!((v.holds, v.case_tag), (true, CaseTag::Strich4));
    }

    #[test]
    fn parses_exact_numbers() {
        assert_eq!("4/3".parse::<Number>().unwrap(), Number::Exact(r(4, 3)));
        assert_eq!("1.5".parse::<Number>().unwrap(), Number::Exact(r(3, 2)));
        assert_eq!("-0.25".parse::<Number>().unwrap(), Number::Exact(r(-1, 4)));
        assert_eq!("2e-1".parse::<Number>().unwrap(), Number::Exact(r(1, 5)));
        assert_eq!("3".parse::<Number>().unwrap(), Number::Exact(r(3, 1)));
        assert!(matches!(
            "1e-300".parse::<Number>().unwrap(),
            Number::Float(_)
        ));
        assert!("abc".parse::<Number>().is_err());
        assert!("1/0".parse::<Number>().is_err());
        assert!("inf".parse::<Number>().is_err());
    }

    fn exponent() -> impl Strategy<Value = f64> {
        prop_oneof![1.01f64..8.0, Just(2.0), Just(1.5), Just(3.0), Just(4.0)]
    }

    proptest! {
        #[test]
        fn conjugate_is_involutive(p in 1.0001f64..=100.0) {
            let back = conjugate_exponent(conjugate_exponent(p).unwrap()).unwrap();
            prop_assert!((back - p).abs() / p <= f64::EPSILON * (p + 1.0));
        }

        #[test]
        fn conjugate_is_involutive_exactly(a in 2i64..400, b in 1i64..200) {
            prop_assume!(a > b);
            let p = r(a, b);
            prop_assert_eq!(conjugate_exponent(conjugate_exponent(p).unwrap()).unwrap(), p);
        }

        #[test]
        fn strichartz_symmetric_under_swap(
            s in 0u32..40, t in 0u32..40, pn in 11i64..80, qn in 11i64..80, n in 1usize..4
        ) {
            let (s, t) = (r(s as i64, 8), r(t as i64, 8));
            let (p, q) = (r(pn, 10), r(qn, 10));
            let fwd = strichartz_case(s, t, p, q, n).unwrap();
            let swapped = strichartz_case(
                t, s, conjugate_exponent(q).unwrap(), conjugate_exponent(p).unwrap(), n,
            ).unwrap();
            prop_assert_eq!(fwd.holds, swapped.holds);
        }

        #[test]
        fn embedding_monotone(
            s in -4.0f64..4.0, t in -4.0f64..4.0, p in exponent(), q in exponent(),
            ds in 0.0f64..2.0, dt in 0.0f64..2.0, n in 1usize..4
        ) {
            let base = embedding_holds(s, p, t, q, n).unwrap();
            if base.holds {
                prop_assert!(embedding_holds(s + ds, p, t, q, n).unwrap().holds);
                prop_assert!(embedding_holds(s, p, t - dt, q, n).unwrap().holds);
            }
        }

        #[test]
        fn tag_none_iff_failing(
            s in 0.0f64..3.0, t in 0.0f64..3.0, p in exponent(), q in exponent(), n in 1usize..4
        ) {
            let v = strichartz_case(s, t, p, q, n).unwrap();
            prop_assert_eq!(v.holds, v.case_tag != CaseTag::None);
        }
    }
}
