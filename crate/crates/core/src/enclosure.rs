//! Outward-rounded interval arithmetic over exact rationals.
//!
//! Every endpoint is a rational rounded to a fixed number of significant bits
//! (`Precision`), always away from the enclosed value. Logarithms and
//! exponentials are evaluated with fixed-point series whose truncation and
//! rounding errors are counted explicitly, so the returned interval always
//! contains the exact real result.

use std::fmt;

use num::bigint::BigInt;
use num::{Integer, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, ceil, floor, floor_log2, mul_pow2, parse_rational, rat, to_scientific, Rational, Round};

/// Extra bits carried through composite evaluations before the final rounding.
const GUARD_BITS: u32 = 32;

/// Working precision in significant bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Precision(u32);

impl Precision {
    pub const DEFAULT: Precision = Precision(128);
    pub const CAP: Precision = Precision(1024);
    const MIN_BITS: u32 = 16;

    pub fn bits(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::Domain(format!("precision must be at least {} bits, got {bits}", Self::MIN_BITS)));
        }
        Ok(Precision(bits))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn doubled(self) -> Precision {
        Precision(self.0.saturating_mul(2))
    }

    /// Precision used for intermediate results of a composite evaluation.
    pub fn working(self) -> Precision {
        Precision(self.0 + GUARD_BITS)
    }

    /// Significant decimal digits needed to express this precision.
    pub fn decimal_digits(self) -> usize {
        (self.0 as f64 * std::f64::consts::LOG10_2).ceil() as usize + 3
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// Round `q` to `bits` significant bits, toward -inf (`up = false`) or +inf.
fn round_bits(q: &Rational, bits: u32, up: bool) -> Rational {
    if q.is_zero() {
        return q.clone();
    }
    let shift = bits as i64 - 1 - floor_log2(q);
    let scaled = mul_pow2(q, shift);
    if scaled.is_integer() {
        return q.clone();
    }
    let m = if up { ceil(&scaled) } else { floor(&scaled) };
    mul_pow2(&Rational::from_integer(m), -shift)
}

/// Closed interval `[lo, hi]` known to contain some real quantity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!("enclosure endpoints out of order: {lo} > {hi}")));
        }
        Ok(Enclosure { lo, hi })
    }

    pub fn exact(q: Rational) -> Self {
        Enclosure { lo: q.clone(), hi: q }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// `Some(true)` if every point is `< bound`, `Some(false)` if none is,
    /// `None` if the enclosure straddles the bound.
    pub fn compare_lt(&self, bound: &Rational) -> Option<bool> {
        if &self.hi < bound {
            Some(true)
        } else if &self.lo >= bound {
            Some(false)
        } else {
            None
        }
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    /// Outward rounding of both endpoints to `prec` significant bits.
    pub fn round(&self, prec: Precision) -> Enclosure {
        Enclosure { lo: round_bits(&self.lo, prec.get(), false), hi: round_bits(&self.hi, prec.get(), true) }
    }

    fn rounded(lo: Rational, hi: Rational, prec: Precision) -> Enclosure {
        Enclosure { lo, hi }.round(prec)
    }

    pub fn add(&self, other: &Enclosure, prec: Precision) -> Enclosure {
        Self::rounded(&self.lo + &other.lo, &self.hi + &other.hi, prec)
    }

    pub fn sub(&self, other: &Enclosure, prec: Precision) -> Enclosure {
        Self::rounded(&self.lo - &other.hi, &self.hi - &other.lo, prec)
    }

    pub fn neg(&self) -> Enclosure {
        Enclosure { lo: -&self.hi, hi: -&self.lo }
    }

    pub fn mul(&self, other: &Enclosure, prec: Precision) -> Enclosure {
        let products = [&self.lo * &other.lo, &self.lo * &other.hi, &self.hi * &other.lo, &self.hi * &other.hi];
        let lo = products.iter().min().cloned().unwrap_or_default();
        let hi = products.iter().max().cloned().unwrap_or_default();
        Self::rounded(lo, hi, prec)
    }

    pub fn scale(&self, factor: &Rational, prec: Precision) -> Enclosure {
        self.mul(&Enclosure::exact(factor.clone()), prec)
    }

    pub fn recip(&self, prec: Precision) -> Result<Enclosure> {
        if self.lo <= Rational::zero() && self.hi >= Rational::zero() {
            return Err(Error::Domain("reciprocal of an enclosure containing zero".into()));
        }
        Ok(Self::rounded(self.hi.recip(), self.lo.recip(), prec))
    }

    pub fn div(&self, other: &Enclosure, prec: Precision) -> Result<Enclosure> {
        let inv = other.recip(prec.working())?;
        Ok(self.mul(&inv, prec))
    }

    pub fn powi(&self, n: u32, prec: Precision) -> Enclosure {
        let w = prec.working();
        let mut acc = Enclosure::exact(Rational::one());
        for _ in 0..n {
            acc = acc.mul(self, w);
        }
        acc.round(prec)
    }

    /// Natural logarithm; requires a strictly positive enclosure.
    pub fn ln(&self, prec: Precision) -> Result<Enclosure> {
        if !self.lo.is_positive() {
            return Err(Error::Domain(format!("logarithm of non-positive value {}", self.lo)));
        }
        let w = prec.working().get();
        let (lo, _) = ln_rational(&self.lo, w);
        let (_, hi) = ln_rational(&self.hi, w);
        Ok(Self::rounded(lo, hi, prec))
    }

    pub fn exp(&self, prec: Precision) -> Result<Enclosure> {
        let w = prec.working().get();
        let (lo, _) = exp_rational(&self.lo, w)?;
        let (_, hi) = exp_rational(&self.hi, w)?;
        Ok(Self::rounded(lo, hi, prec))
    }

    /// `self^exponent` for a strictly positive base.
    pub fn pow(&self, exponent: &Enclosure, prec: Precision) -> Result<Enclosure> {
        let w = prec.working();
        let log = self.ln(w)?;
        Ok(exponent.mul(&log, w).exp(w)?.round(prec))
    }

    pub fn ln2(prec: Precision) -> Enclosure {
        let w = prec.working().get();
        let (lo, hi) = ln2_fixed(w);
        Self::rounded(fixed_to_rational(&lo, w), fixed_to_rational(&hi, w), prec)
    }

    pub fn ln3(prec: Precision) -> Enclosure {
        Enclosure::exact(rational::int(3)).ln(prec).expect("3 > 0")
    }

    pub fn to_json(&self, prec: Precision) -> EnclosureJson {
        let digits = prec.decimal_digits();
        EnclosureJson {
            lo: to_scientific(&self.lo, digits, Round::Down),
            hi: to_scientific(&self.hi, digits, Round::Up),
            precision_bits: prec.get(),
        }
    }

    pub fn to_f64_mid(&self) -> f64 {
        rational::to_f64(&((&self.lo + &self.hi) / rational::int(2)))
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", to_scientific(&self.lo, 12, Round::Down), to_scientific(&self.hi, 12, Round::Up))
    }
}

/// Decimal-string form of an enclosure. The strings are themselves outward
/// roundings, so parsing them back yields a (slightly wider) valid enclosure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnclosureJson {
    pub lo: String,
    pub hi: String,
    pub precision_bits: u32,
}

impl EnclosureJson {
    pub fn parse(&self) -> Result<Enclosure> {
        let lo = parse_rational(&self.lo)?;
        let hi = parse_rational(&self.hi)?;
        Enclosure::new(lo, hi).map_err(|e| Error::Schema(e.to_string()))
    }
}

// ---------------------------------------------------------------------------
// Fixed-point kernels. A fixed value `m` at scale `w` stands for `m / 2^w`;
// kernels return integer bounds `(lo, hi)` with lo/2^w <= x <= hi/2^w.
// ---------------------------------------------------------------------------

fn fixed_to_rational(m: &BigInt, w: u32) -> Rational {
    mul_pow2(&Rational::from_integer(m.clone()), -(w as i64))
}

fn mul_div_floor(a: &BigInt, num: &BigInt, den: &BigInt) -> BigInt {
    (a * num).div_floor(den)
}

/// Bounds on `atanh(t) * 2^w` for `|t| <= 1/3`.
fn atanh_fixed(t: &Rational, w: u32) -> (BigInt, BigInt) {
    debug_assert!(t.abs() <= rat(1, 3));
    let t2 = t * t;
    let (t2n, t2d) = (t2.numer().clone(), t2.denom().clone());
    // p tracks t^(2i+1) * 2^w with |error| <= p_err
    let mut p = floor(&mul_pow2(t, w as i64));
    let mut p_err = BigInt::one();
    let mut sum = BigInt::zero();
    let mut total_err = BigInt::zero();
    let mut i: u64 = 0;
    while p.abs() > BigInt::one() {
        let denom = BigInt::from(2 * i + 1);
        sum += p.div_floor(&denom);
        total_err += p_err.div_ceil(&denom) + BigInt::one();
        p = mul_div_floor(&p, &t2n, &t2d);
        p_err += BigInt::one();
        i += 1;
    }
    // remaining tail is below (|p| + p_err) * 9/8
    total_err += (p.abs() + &p_err) * 2 + BigInt::one();
    (&sum - &total_err, &sum + &total_err)
}

fn ln2_fixed(w: u32) -> (BigInt, BigInt) {
    let (lo, hi) = atanh_fixed(&rat(1, 3), w);
    (lo * 2, hi * 2)
}

/// Bounds on `ln(x)` for rational `x > 0`, with absolute error about `2^-w`.
fn ln_rational(x: &Rational, w: u32) -> (Rational, Rational) {
    debug_assert!(x.is_positive());
    let mut k = floor_log2(x);
    let mut y = mul_pow2(x, -k);
    if y > rat(4, 3) {
        k += 1;
        y = mul_pow2(&y, -1);
    }
    let one = Rational::one();
    let t = (&y - &one) / (&y + &one);
    let wk = w + 4 + (64 - k.unsigned_abs().leading_zeros());
    let (a_lo, a_hi) = atanh_fixed(&t, wk);
    let (l2_lo, l2_hi) = ln2_fixed(wk);
    let kb = BigInt::from(k);
    let (klo, khi) = if k >= 0 { (&kb * &l2_lo, &kb * &l2_hi) } else { (&kb * &l2_hi, &kb * &l2_lo) };
    let lo = klo + a_lo * 2;
    let hi = khi + a_hi * 2;
    (fixed_to_rational(&lo, wk), fixed_to_rational(&hi, wk))
}

/// Bounds on `exp(r) * 2^w` for the exact fixed value `r = big_r / 2^w`, `|r| <= 1/2`.
fn exp_taylor_fixed(big_r: &BigInt, w: u32) -> (BigInt, BigInt) {
    let scale = BigInt::one() << w as usize;
    let mut q = scale.clone();
    let mut q_err = BigInt::zero();
    let mut sum = BigInt::zero();
    let mut total_err = BigInt::zero();
    let mut i: u64 = 0;
    while q.abs() > BigInt::one() {
        sum += &q;
        total_err += &q_err;
        i += 1;
        q = mul_div_floor(&q, big_r, &(&scale * BigInt::from(i)));
        q_err += BigInt::one();
    }
    // geometric tail with ratio <= 1/2
    total_err += (q.abs() + &q_err) * 2 + BigInt::one();
    (&sum - &total_err, &sum + &total_err)
}

/// Bounds on `exp(x)` with relative error about `2^-w`.
fn exp_rational(x: &Rational, w: u32) -> Result<(Rational, Rational)> {
    let xf = x
        .to_f64()
        .filter(|v| v.is_finite() && v.abs() < 1e15)
        .ok_or_else(|| Error::Domain(format!("exponent {x} out of supported range")))?;
    let mut k = (xf / std::f64::consts::LN_2).round() as i64;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    loop {
        let wk = w + 8 + (64 - k.unsigned_abs().leading_zeros());
        let (l2_lo, l2_hi) = ln2_fixed(wk);
        let kb = BigInt::from(k);
        let (kl_lo, kl_hi) = if k >= 0 { (&kb * &l2_lo, &kb * &l2_hi) } else { (&kb * &l2_hi, &kb * &l2_lo) };
        let scaled = mul_pow2(x, wk as i64);
        let r_lo = floor(&scaled) - kl_hi;
        let r_hi = ceil(&scaled) - kl_lo;
        let half_fixed = floor(&mul_pow2(&half, wk as i64));
        if r_hi > half_fixed {
            k += 1;
            continue;
        }
        if r_lo < -&half_fixed {
            k -= 1;
            continue;
        }
        let (lo, _) = exp_taylor_fixed(&r_lo, wk);
        let (_, hi) = exp_taylor_fixed(&r_hi, wk);
        let lo = mul_pow2(&fixed_to_rational(&lo, wk), k);
        let hi = mul_pow2(&fixed_to_rational(&hi, wk), k);
        return Ok((lo, hi));
    }
}
