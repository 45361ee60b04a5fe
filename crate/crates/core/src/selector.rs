//! Choosing a gap sequence whose series bound falls below a target, and
//! auditing an arbitrary sequence against a target.

use num::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::content::{certify, lemma2_series_with, SeriesBound, SeriesOptions};
use crate::enclosure::{Enclosure, EnclosureJson, Precision};
use crate::error::{Error, Result};
use crate::geometry::DeltaSequence;
use crate::rational::{inv_pow2, inv_pow3, rat, serde_pair, to_f64, Rational};

/// `log2 1/ρ` of every selected sequence (`ρ = 1/8`).
pub const SELECTED_LOG2_INV_RATIO: u32 = 3;
/// Smallest `log2 1/A`, keeping `A < 1/6`.
pub const MIN_LOG2_INV_AMPLITUDE: u32 = 3;
/// Levels listed individually in a report when the sequence is unbounded.
pub const DEFAULT_CHECK_LEVELS: u32 = 64;
const MAX_SEARCH_LEVEL: u32 = 100_000;

fn series_hi_below(a: u32, eps: &Rational, prec: Precision) -> Result<Option<bool>> {
    let seq = DeltaSequence::power_of_two(a, SELECTED_LOG2_INV_RATIO)?;
    match lemma2_series_with(&seq, &SeriesOptions::default(), prec)? {
        SeriesBound::Bounded { value, .. } => Ok(value.compare_lt(eps)),
        SeriesBound::Unbounded { .. } => unreachable!("ρ = 1/8 converges"),
    }
}

/// Decide `series(a) < ε` with precision doubling; undecided at the cap
/// counts as "not below".
fn certified_below(a: u32, eps: &Rational, prec: Precision) -> Result<bool> {
    match certify("series < ε", prec, |p| series_hi_below(a, eps, p)) {
        Ok((below, _)) => Ok(below),
        Err(Error::Inconclusive { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Smallest `a >= 3` with `8·2^(-aη)/(1 - 2^(1-3η)) < ε`, returned as the
/// geometric sequence `δ_n = 2^-a 8^-n`.
pub fn select_geometric(eps: &Rational, prec: Precision) -> Result<DeltaSequence> {
    DeltaSequence::power_of_two(select_exponent(eps, prec)?, SELECTED_LOG2_INV_RATIO)
}

/// `log2 1/A` chosen by [`select_geometric`].
pub fn select_exponent(eps: &Rational, prec: Precision) -> Result<u32> {
    if !eps.is_positive() {
        return Err(Error::Domain(format!("ε must be positive, got {eps}")));
    }
    // float guess from 2^(-aη) = ε (1 - q) / 8, then exact adjustment
    let eta = 1.0 - 2f64.ln() / 3f64.ln();
    let q = 2f64.powf(1.0 - 3.0 * eta);
    let log2_eps = {
        let f = to_f64(eps);
        if f > 0.0 && f.is_finite() {
            f.log2()
        } else {
            crate::rational::floor_log2(eps) as f64
        }
    };
    let guess = ((3.0 - log2_eps - (1.0 - q).log2()) / eta).ceil();
    let mut a =
        if guess.is_finite() { guess.clamp(MIN_LOG2_INV_AMPLITUDE as f64, 1e6) as u32 } else { MIN_LOG2_INV_AMPLITUDE };
    while !certified_below(a, eps, prec)? {
        a += 1;
    }
    while a > MIN_LOG2_INV_AMPLITUDE && certified_below(a - 1, eps, prec)? {
        a -= 1;
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelCheck {
    pub level: u32,
    #[serde(with = "serde_pair")]
    pub delta: Rational,
    /// `3^-(n+1)`
    #[serde(with = "serde_pair")]
    pub bound: Rational,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case", deny_unknown_fields)]
pub enum FailReason {
    Admissibility { level: u32 },
    Divergent,
    Exceeds,
    Inconclusive { link: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail {
        #[serde(flatten)]
        reason: FailReason,
    },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

/// Self-contained audit of a sequence against `ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub sequence: DeltaSequence,
    #[serde(with = "serde_pair")]
    pub epsilon: Rational,
    #[serde(with = "serde_pair")]
    pub tail_ratio: Rational,
    pub precision_bits: u32,
    pub levels: Vec<LevelCheck>,
    pub admissible_everywhere: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<EnclosureJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub series: Option<EnclosureJson>,
    pub verdict: Verdict,
}

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// First level with `δ_n >= 3^-(n+1)`, searched exactly.
pub fn first_inadmissible_level(seq: &DeltaSequence) -> Option<u32> {
    if seq.max_level().is_none() && seq.admissible_everywhere() {
        return None;
    }
    let last = seq.max_level().unwrap_or(MAX_SEARCH_LEVEL);
    (0..=last).find(|&n| !seq.check_level(n))
}

pub fn verify(seq: &DeltaSequence, eps: &Rational, prec: Precision) -> Result<VerifyReport> {
    verify_with(seq, eps, &SeriesOptions::default(), prec)
}

pub fn verify_with(seq: &DeltaSequence, eps: &Rational, opts: &SeriesOptions, prec: Precision) -> Result<VerifyReport> {
    let shown = seq.max_level().unwrap_or(DEFAULT_CHECK_LEVELS - 1);
    let levels: Vec<LevelCheck> = (0..=shown)
        .map(|n| {
            let delta = seq.delta(n).expect("defined");
            let bound = inv_pow3(n + 1);
            LevelCheck { level: n, ok: delta < bound, delta, bound }
        })
        .collect();
    let first_bad = first_inadmissible_level(seq);

    let (ratio, series_json, series_verdict) = match lemma2_series_with(seq, opts, prec) {
        Ok(SeriesBound::Unbounded { ratio }) => {
            (Some(ratio.to_json(prec)), None, Verdict::Fail { reason: FailReason::Divergent })
        }
        Ok(SeriesBound::Bounded { value, ratio }) => {
            let v = match value.compare_lt(eps) {
                Some(true) => Verdict::Pass,
                Some(false) => Verdict::Fail { reason: FailReason::Exceeds },
                None => Verdict::Fail { reason: FailReason::Inconclusive { link: "series < ε".into() } },
            };
            (Some(ratio.to_json(prec)), Some(value.to_json(prec)), v)
        }
        Err(Error::Inconclusive { link, .. }) => {
            (None, None, Verdict::Fail { reason: FailReason::Inconclusive { link } })
        }
        Err(e) => return Err(e),
    };
    let verdict = if !eps.is_positive() {
        Verdict::Fail { reason: FailReason::Exceeds }
    } else if let Some(level) = first_bad {
        Verdict::Fail { reason: FailReason::Admissibility { level } }
    } else {
        series_verdict
    };
    Ok(VerifyReport {
        schema_version: REPORT_SCHEMA_VERSION,
        sequence: seq.clone(),
        epsilon: eps.clone(),
        tail_ratio: opts.tail_ratio.clone(),
        precision_bits: prec.get(),
        levels,
        admissible_everywhere: first_bad.is_none(),
        ratio,
        series: series_json,
        verdict,
    })
}

impl VerifyReport {
    /// Re-run the audit from the stored inputs and compare with `self`.
    pub fn replay(&self) -> Result<bool> {
        let prec = Precision::bits(self.precision_bits)?;
        let opts = SeriesOptions { tail_ratio: self.tail_ratio.clone() };
        Ok(&verify_with(&self.sequence, &self.epsilon, &opts, prec)? == self)
    }

    pub fn series_enclosure(&self) -> Result<Option<Enclosure>> {
        self.series.as_ref().map(EnclosureJson::parse).transpose()
    }
}

/// `2^-1/η`: geometric ratios below this make the series converge.
pub fn critical_ratio(prec: Precision) -> Result<Enclosure> {
    let w = prec.working();
    let expo = Enclosure::exact(-Rational::one()).div(&crate::content::eta(w), w)?;
    Enclosure::exact(rat(2, 1)).pow(&expo, prec)
}

/// `2^-k` for the largest `k` with `2^-k <= x`.
pub fn power_of_two_floor(x: &Rational) -> Result<(u32, Rational)> {
    if !x.is_positive() || x > &Rational::one() {
        return Err(Error::Domain(format!("{x} is not in (0, 1]")));
    }
    let k = (-crate::rational::floor_log2(x)) as u32;
    Ok((k, inv_pow2(k)))
}
