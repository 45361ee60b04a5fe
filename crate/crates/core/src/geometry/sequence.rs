use std::fmt;
use std::str::FromStr;

use num::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, inv_pow2, inv_pow3, parse_rational, pow_u, rat, Rational};

/// Gap widths `δ_n`.
///
/// Construction only checks that the values are positive; the admissibility
/// condition `δ_n < 3^-(n+1)` is checked per level by [`DeltaSequence::check_level`]
/// and enforced by every geometry builder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DeltaSequence {
    /// `δ_n = amplitude * ratio^n`, optionally truncated after `max_level`.
    Geometric {
        #[serde(with = "rational::serde_pair")]
        amplitude: Rational,
        #[serde(with = "rational::serde_pair")]
        ratio: Rational,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_level: Option<u32>,
    },
    /// `δ_0, …, δ_{N-1}` listed explicitly.
    Explicit {
        #[serde(with = "rational::serde_pair_vec")]
        values: Vec<Rational>,
    },
}

impl DeltaSequence {
    pub fn geometric(amplitude: Rational, ratio: Rational) -> Result<Self> {
        Self::check_geometric(&amplitude, &ratio)?;
        Ok(DeltaSequence::Geometric { amplitude, ratio, max_level: None })
    }

    pub fn geometric_truncated(amplitude: Rational, ratio: Rational, max_level: u32) -> Result<Self> {
        Self::check_geometric(&amplitude, &ratio)?;
        Ok(DeltaSequence::Geometric { amplitude, ratio, max_level: Some(max_level) })
    }

    /// `δ_n = 2^-a · (2^-r)^n`.
    pub fn power_of_two(log2_inv_amplitude: u32, log2_inv_ratio: u32) -> Result<Self> {
        Self::geometric(inv_pow2(log2_inv_amplitude), inv_pow2(log2_inv_ratio))
    }

    pub fn explicit(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSequence("explicit sequence is empty".into()));
        }
        if let Some((n, v)) = values.iter().enumerate().find(|(_, v)| !v.is_positive()) {
            return Err(Error::InvalidSequence(format!("δ_{n} = {v} is not positive")));
        }
        Ok(DeltaSequence::Explicit { values })
    }

    /// `δ_n = 3^-(n+2)`: admissible at every level and large enough to see.
    pub fn figure_default() -> Self {
        DeltaSequence::Geometric { amplitude: rat(1, 9), ratio: rat(1, 3), max_level: None }
    }

    fn check_geometric(amplitude: &Rational, ratio: &Rational) -> Result<()> {
        if !amplitude.is_positive() {
            return Err(Error::InvalidSequence(format!("amplitude {amplitude} is not positive")));
        }
        if !ratio.is_positive() || ratio >= &Rational::one() {
            return Err(Error::InvalidSequence(format!("ratio {ratio} is not in (0, 1)")));
        }
        Ok(())
    }

    /// Highest defined level, `None` when unbounded.
    pub fn max_level(&self) -> Option<u32> {
        match self {
            DeltaSequence::Geometric { max_level, .. } => *max_level,
            DeltaSequence::Explicit { values } => Some(values.len() as u32 - 1),
        }
    }

    pub fn delta(&self, n: u32) -> Option<Rational> {
        if self.max_level().is_some_and(|max| n > max) {
            return None;
        }
        Some(match self {
            DeltaSequence::Geometric { amplitude, ratio, .. } => amplitude * pow_u(ratio, n),
            DeltaSequence::Explicit { values } => values[n as usize].clone(),
        })
    }

    pub fn require_level(&self, m: u32) -> Result<()> {
        match self.max_level() {
            Some(max) if m > max => Err(Error::SequenceTooShort { required: m, available: max }),
            _ => Ok(()),
        }
    }

    /// `δ_n < 3^-(n+1)`; `false` also when level `n` is undefined.
    pub fn check_level(&self, n: u32) -> bool {
        self.delta(n).is_some_and(|d| d < inv_pow3(n + 1))
    }

    /// Defined and admissible at every level `0..=m`.
    pub fn validate_through(&self, m: u32) -> Result<()> {
        self.require_level(m)?;
        for n in 0..=m {
            let delta = self.delta(n).expect("level checked");
            if delta >= inv_pow3(n + 1) {
                return Err(Error::InadmissibleDelta { level: n, delta });
            }
        }
        Ok(())
    }

    /// Admissibility at every defined level, decided exactly. For an
    /// unbounded geometric sequence `Aρ^n < 3^-(n+1)` for all `n` iff
    /// `3A < 1` and `3ρ <= 1`.
    pub fn admissible_everywhere(&self) -> bool {
        match (self, self.max_level()) {
            (_, Some(max)) => (0..=max).all(|n| self.check_level(n)),
            (DeltaSequence::Geometric { amplitude, ratio, .. }, None) => {
                let three = rational::int(3);
                &three * amplitude < Rational::one() && &three * ratio <= Rational::one()
            }
            (DeltaSequence::Explicit { .. }, None) => unreachable!("explicit sequences are finite"),
        }
    }

    /// Non-increasing at every defined level.
    pub fn is_non_increasing(&self) -> bool {
        match self {
            DeltaSequence::Geometric { .. } => true,
            DeltaSequence::Explicit { values } => values.windows(2).all(|w| w[1] <= w[0]),
        }
    }

    /// `(log2 1/A, log2 1/ρ)` when both are exact powers of two.
    pub fn power_of_two_exponents(&self) -> Option<(u32, u32)> {
        match self {
            DeltaSequence::Geometric { amplitude, ratio, max_level: None } => {
                Some((rational::log2_inv_exact(amplitude)?, rational::log2_inv_exact(ratio)?))
            }
            _ => None,
        }
    }
}

impl fmt::Display for DeltaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaSequence::Geometric { amplitude, ratio, max_level } => {
                write!(f, "geometric:{amplitude},{ratio}")?;
                if let Some(m) = max_level {
                    write!(f, ",{m}")?;
                }
                Ok(())
            }
            DeltaSequence::Explicit { values } => {
                let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
                write!(f, "explicit:{}", parts.join(","))
            }
        }
    }
}

/// Accepts `default`, `geometric:A,ρ[,max_level]`, `pow2:a,r` and
/// `explicit:δ0,δ1,…`.
impl FromStr for DeltaSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "default" {
            return Ok(Self::figure_default());
        }
        let (kind, args) = s.split_once(':').ok_or_else(|| Error::Parse(format!("unrecognised sequence `{s}`")))?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        match kind {
            "geometric" => match parts.as_slice() {
                [a, r] => Self::geometric(parse_rational(a)?, parse_rational(r)?),
                [a, r, m] => {
                    let m = m.parse().map_err(|_| Error::Parse(format!("bad max level `{m}`")))?;
                    Self::geometric_truncated(parse_rational(a)?, parse_rational(r)?, m)
                }
                _ => Err(Error::Parse(format!("geometric sequence needs A,ρ[,max]: `{s}`"))),
            },
            "pow2" => match parts.as_slice() {
                [a, r] => {
                    let parse = |x: &str| x.parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent `{x}`")));
                    Self::power_of_two(parse(a)?, parse(r)?)
                }
                _ => Err(Error::Parse(format!("pow2 sequence needs a,r: `{s}`"))),
            },
            "explicit" => Self::explicit(parts.iter().map(|p| parse_rational(p)).collect::<Result<_>>()?),
            _ => Err(Error::Parse(format!("unknown sequence kind `{kind}`"))),
        }
    }
}
