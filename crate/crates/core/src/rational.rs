//! Exact rational helpers: construction, parsing, decimal rendering and the
//! `[numerator, denominator]` JSON encoding used by every exported document.

use num::bigint::{BigInt, Sign};
use num::{BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `base^exp` for a non-negative integer exponent.
pub fn pow_u(base: &Rational, exp: u32) -> Rational {
    num::pow::pow(base.clone(), exp as usize)
}

/// `3^-n`.
pub fn inv_pow3(n: u32) -> Rational {
    Rational::new(BigInt::one(), num::pow::pow(BigInt::from(3), n as usize))
}

/// `2^-n`.
pub fn inv_pow2(n: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << n as usize)
}

/// Multiply by `2^shift` (shift may be negative).
pub fn mul_pow2(q: &Rational, shift: i64) -> Rational {
    if shift >= 0 {
        Rational::new(q.numer() << shift as usize, q.denom().clone())
    } else {
        Rational::new(q.numer().clone(), q.denom() << (-shift) as usize)
    }
}

/// If `q = 3^k` for some integer `k`, return `k`.
pub fn log3_exact(q: &Rational) -> Option<i64> {
    if !q.is_positive() {
        return None;
    }
    let three = BigInt::from(3);
    let power_of_three = |n: &BigInt| -> Option<i64> {
        let mut n = n.clone();
        let mut k = 0i64;
        while !n.is_one() {
            let (quot, rem) = n.div_rem(&three);
            if !rem.is_zero() {
                return None;
            }
            n = quot;
            k += 1;
        }
        Some(k)
    };
    if q.denom().is_one() {
        power_of_three(q.numer())
    } else if q.numer().is_one() {
        power_of_three(q.denom()).map(|k| -k)
    } else {
        None
    }
}

/// If `q = 2^-k` for some `k >= 0`, return `k`.
pub fn log2_inv_exact(q: &Rational) -> Option<u32> {
    if !q.numer().is_one() {
        return None;
    }
    let d = q.denom();
    let bits = d.bits();
    if (BigInt::one() << (bits - 1) as usize) == *d {
        Some((bits - 1) as u32)
    } else {
        None
    }
}

/// `floor(log2 |q|)` for nonzero `q`.
pub fn floor_log2(q: &Rational) -> i64 {
    debug_assert!(!q.is_zero());
    let n = q.numer().abs();
    let d = q.denom();
    let mut e = n.bits() as i64 - d.bits() as i64;
    // 2^e <= |q| < 2^(e+1) after adjustment
    if mul_pow2(&Rational::new(n.clone(), d.clone()), -e) < Rational::one() {
        e -= 1;
    }
    e
}

pub fn floor(q: &Rational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil(q: &Rational) -> BigInt {
    -((-q.numer()).div_floor(q.denom()))
}

/// Parse `p/q`, an integer, a decimal (`0.001`) or scientific notation (`1e-3`).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if (int_part.is_empty() && frac_part.is_empty())
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i64 - 1;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        Rational::from_integer(all * num::pow::pow(ten, scale as usize))
    } else {
        Rational::new(all, num::pow::pow(ten, (-scale) as usize))
    };
    if negative {
        q = -q;
    }
    Ok(q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
    Nearest,
}

fn round_int(q: &Rational, mode: Round) -> BigInt {
    match mode {
        Round::Down => floor(q),
        Round::Up => ceil(q),
        Round::Nearest => floor(&(q + rat(1, 2))),
    }
}

/// Fixed-point decimal with exactly `digits` fractional digits.
pub fn to_fixed(q: &Rational, digits: usize, mode: Round) -> String {
    let scale = num::pow::pow(BigInt::from(10), digits);
    let scaled = round_int(&(q * Rational::from_integer(scale)), mode);
    let negative = scaled.sign() == Sign::Minus;
    let mut body = scaled.abs().to_string();
    if digits > 0 {
        if body.len() <= digits {
            body = format!("{}{}", "0".repeat(digits + 1 - body.len()), body);
        }
        body.insert(body.len() - digits, '.');
    }
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Scientific decimal with `sig` significant digits, rounded in direction `mode`.
/// The output parses back (via [`parse_rational`]) to a value on the requested
/// side of `q`.
pub fn to_scientific(q: &Rational, sig: usize, mode: Round) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let ten = Rational::from_integer(BigInt::from(10));
    // decimal exponent estimate from the binary one, then fix up
    let mut e10 = (floor_log2(q) as f64 * std::f64::consts::LOG10_2).floor() as i64;
    let abs = q.abs();
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            num::pow::pow(ten.clone(), k as usize)
        } else {
            num::pow::pow(ten.clone(), (-k) as usize).recip()
        }
    };
    while abs >= pow10(e10 + 1) {
        e10 += 1;
    }
    while abs < pow10(e10) {
        e10 -= 1;
    }
    let shift = sig as i64 - 1 - e10;
    let mut mant = round_int(&(q * pow10(shift)), mode);
    // rounding up may carry into an extra digit
    let mut exp = e10;
    if mant.abs().to_string().len() > sig {
        mant = round_int(&Rational::new(mant, BigInt::from(10)), mode);
        exp += 1;
    }
    let negative = mant.sign() == Sign::Minus;
    let digits = mant.abs().to_string();
    let (head, tail) = digits.split_at(1);
    let sign = if negative { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{exp}")
    } else {
        format!("{sign}{head}.{tail}e{exp}")
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Serde adapter: a rational as `["numerator", "denominator"]`.
pub mod serde_pair {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Rational;
    use num::bigint::BigInt;
    use num::Zero;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        [q.numer().to_string(), q.denom().to_string()].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let [n, den] = <[String; 2]>::deserialize(d)?;
        from_strings(&n, &den).map_err(serde::de::Error::custom)
    }

    pub(crate) fn from_strings(n: &str, d: &str) -> Result<Rational, String> {
        let n: BigInt = n.parse().map_err(|_| format!("bad numerator `{n}`"))?;
        let d: BigInt = d.parse().map_err(|_| format!("bad denominator `{d}`"))?;
        if d.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Rational::new(n, d))
    }
}

/// A rational as `[numerator, denominator]` decimal strings.
pub type Pair = [String; 2];

pub fn to_pair(q: &Rational) -> Pair {
    [q.numer().to_string(), q.denom().to_string()]
}

pub fn from_pair(p: &Pair) -> crate::error::Result<Rational> {
    serde_pair::from_strings(&p[0], &p[1]).map_err(crate::error::Error::Schema)
}

/// Serde adapter for `Vec<Rational>`.
pub mod serde_pair_vec {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Rational;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|q| [q.numer().to_string(), q.denom().to_string()]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<[String; 2]>::deserialize(d)?;
        raw.iter()
            .map(|[n, den]| super::serde_pair::from_strings(n, den))
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)
    }
}
