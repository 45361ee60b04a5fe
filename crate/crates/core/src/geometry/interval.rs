use num::bigint::BigInt;
use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{inv_pow3, rat, Rational};

/// Largest level for which `2^level` indices fit comfortably in a `u64`.
pub const MAX_LEVEL: u32 = 62;

/// Closed interval `I_n^j` of the ternary construction: one of the `2^n`
/// intervals of length `3^-n` surviving after `n` middle-third removals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TriadicInterval {
    level: u32,
    index: u64,
    left: Rational,
    right: Rational,
}

impl TriadicInterval {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// 1-based position among the level's intervals, in increasing order.
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn left(&self) -> &Rational {
        &self.left
    }

    pub fn right(&self) -> &Rational {
        &self.right
    }

    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn center(&self) -> Rational {
        (&self.left + &self.right) / BigInt::from(2)
    }
}

fn check_index(level: u32, index: u64) -> Result<()> {
    if level > MAX_LEVEL {
        return Err(Error::Domain(format!("level {level} exceeds supported maximum {MAX_LEVEL}")));
    }
    let max = 1u64 << level;
    if index == 0 || index > max {
        return Err(Error::IndexOutOfRange { level, index, max });
    }
    Ok(())
}

/// Left endpoint numerator over `3^level`: the bits of `index - 1`, most
/// significant first, become ternary digits 0 or 2.
fn left_numerator(level: u32, index: u64) -> BigInt {
    let bits = index - 1;
    let mut acc = BigInt::zero();
    for i in (0..level).rev() {
        acc *= 3;
        if (bits >> i) & 1 == 1 {
            acc += 2;
        }
    }
    acc
}

/// `I_n^j` for `1 <= j <= 2^n`.
pub fn cantor_interval(level: u32, index: u64) -> Result<TriadicInterval> {
    check_index(level, index)?;
    let unit = inv_pow3(level);
    let left = Rational::from_integer(left_numerator(level, index)) * &unit;
    let right = &left + &unit;
    Ok(TriadicInterval { level, index, left, right })
}

/// All `2^n` intervals at level `n`, in increasing order.
pub fn cantor_intervals(level: u32) -> Vec<TriadicInterval> {
    assert!(level <= MAX_LEVEL, "level {level} too deep to enumerate");
    (1..=1u64 << level).map(|j| cantor_interval(level, j).expect("index in range")).collect()
}

/// Center `z_n^j` of `I_n^j`.
pub fn interval_center(level: u32, index: u64) -> Result<Rational> {
    Ok(cantor_interval(level, index)?.center())
}

/// Index of the level-`n` interval whose interior contains `x`, if any.
pub fn containing_index(level: u32, x: &Rational) -> Option<u64> {
    if x <= &Rational::zero() || x >= &Rational::one() {
        return None;
    }
    let mut frac = x.clone();
    let mut bits = 0u64;
    for _ in 0..level {
        frac *= BigInt::from(3);
        let digit = frac.floor();
        frac -= &digit;
        bits <<= 1;
        if digit == Rational::from_integer(BigInt::from(2)) {
            bits |= 1;
        } else if !digit.is_zero() {
            return None;
        }
        if frac.is_zero() {
            // landed on an endpoint
            return None;
        }
    }
    Some(bits + 1)
}

/// The removed gap `J_n^j = (z_n^j - w/2, z_n^j + w/2)` of width `w = δ_n`.
/// Geometry downstream uses its closure.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GapInterval {
    level: u32,
    index: u64,
    center: Rational,
    width: Rational,
}

impl GapInterval {
    /// Fails unless `0 < width < 3^-(level+1)`.
    pub fn new(level: u32, index: u64, width: Rational) -> Result<Self> {
        if width <= Rational::zero() || width >= inv_pow3(level + 1) {
            return Err(Error::InadmissibleDelta { level, delta: width });
        }
        let center = interval_center(level, index)?;
        Ok(GapInterval { level, index, center, width })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn center(&self) -> &Rational {
        &self.center
    }

    pub fn width(&self) -> &Rational {
        &self.width
    }

    pub fn left(&self) -> Rational {
        &self.center - &self.width * rat(1, 2)
    }

    pub fn right(&self) -> Rational {
        &self.center + &self.width * rat(1, 2)
    }
}
