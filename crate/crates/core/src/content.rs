//! Upper bounds on one-dimensional Hausdorff content.
//!
//! Content is measured with covers by axis-parallel squares, each square
//! charged its side length. Three kinds of bound live here: the exact sum of
//! the square cover of a strip configuration, the closed form `8δ^η` that
//! dominates it, and the series that sums those closed forms over all levels
//! of a gap sequence. A brute-force covering oracle and a projection lower
//! bound are provided to cross-check them.

use std::collections::BTreeSet;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::enclosure::{Enclosure, EnclosureJson, Precision};
use crate::error::{Error, Result};
use crate::geometry::{cantor_intervals, DeltaSequence, Rect, RectRegion};
use crate::rational::{ceil, int, inv_pow3, log3_exact, pow_u, rat, to_pair as pair, Rational};

/// Default square budget of the covering oracle.
pub const DEFAULT_COVER_BUDGET: usize = 1_000_000;

/// `η = 1 - 1/log₂3 = 1 - ln 2 / ln 3`.
pub fn eta(prec: Precision) -> Enclosure {
    let w = prec.working();
    let ratio = Enclosure::ln2(w).div(&Enclosure::ln3(w), w).expect("ln 3 > 0");
    Enclosure::exact(Rational::one()).sub(&ratio, w).round(prec)
}

/// `δ^η` for `δ > 0`. Powers of three are exact: `3^η = 3/2`.
pub fn pow_eta(delta: &Rational, prec: Precision) -> Result<Enclosure> {
    if !delta.is_positive() {
        return Err(Error::Domain(format!("δ^η needs δ > 0, got {delta}")));
    }
    if let Some(k) = log3_exact(delta) {
        let base = if k >= 0 { rat(3, 2) } else { rat(2, 3) };
        return Ok(Enclosure::exact(pow_u(&base, k.unsigned_abs() as u32)));
    }
    pow_eta_transcendental(delta, prec)
}

/// `δ^η` through `exp(η ln δ)`, never using the power-of-three shortcut.
pub fn pow_eta_transcendental(delta: &Rational, prec: Precision) -> Result<Enclosure> {
    let w = prec.working();
    Ok(Enclosure::exact(delta.clone()).pow(&eta(w), w)?.round(prec))
}

/// Sum of the side lengths of the squares `R_n^j`, `0 <= n <= n0`:
/// `δ (2^(n0+1) - 1)`.
pub fn cover_sum_lemma1(delta: &Rational, n0: u32) -> Rational {
    delta * Rational::from_integer((num::BigInt::one() << (n0 as usize + 1)) - 1u32)
}

/// The squares `R_n^j = (z_n^j - δ/2, z_n^j + δ/2) × [0, δ]` (closed), `n <= n0`.
pub fn lemma1_configuration(delta: &Rational, n0: u32) -> Result<RectRegion> {
    if !delta.is_positive() {
        return Err(Error::Domain(format!("square side must be positive, got {delta}")));
    }
    let half = delta * rat(1, 2);
    let mut rects = Vec::new();
    for n in 0..=n0 {
        for iv in cantor_intervals(n) {
            let z = iv.center();
            rects.push(Rect::new(&z - &half, &z + &half, Rational::zero(), delta.clone())?);
        }
    }
    Ok(RectRegion::new(rects))
}

/// Retry `check` with doubled precision while it is undecided.
pub(crate) fn certify<T>(
    link: &str,
    start: Precision,
    mut check: impl FnMut(Precision) -> Result<Option<T>>,
) -> Result<(T, Precision)> {
    let mut prec = start;
    loop {
        if let Some(v) = check(prec)? {
            return Ok((v, prec));
        }
        if prec >= Precision::CAP {
            return Err(Error::Inconclusive { link: link.to_string(), bits: prec.get() });
        }
        prec = prec.doubled().min(Precision::CAP);
    }
}

/// Enclosure of `8δ^η`, valid as a strict upper bound on the content of
/// [`lemma1_configuration`] when `0 < δ < 3^(2-n0)`. The strict inequality
/// `δ·2^(n0+1) < 8δ^η` is certified before returning.
pub fn lemma1_bound(delta: &Rational, n0: u32, prec: Precision) -> Result<Enclosure> {
    if !delta.is_positive() {
        return Err(Error::Domain(format!("δ must be positive, got {delta}")));
    }
    let limit = if n0 <= 2 { pow_u(&int(3), 2 - n0) } else { inv_pow3(n0 - 2) };
    if delta >= &limit {
        return Err(Error::Domain(format!("δ = {delta} is not below 3^(2-{n0}) = {limit}")));
    }
    let dominated = delta * Rational::from_integer(num::BigInt::one() << (n0 as usize + 1));
    let (bound, _) = certify("δ·2^(n0+1) < 8δ^η", prec, |p| {
        let b = pow_eta(delta, p)?.scale(&int(8), p);
        if &dominated < b.lo() {
            Ok(Some(Ok(b)))
        } else if &dominated >= b.hi() {
            Ok(Some(Err(Error::Domain(format!("δ·2^(n0+1) = {dominated} is not below 8δ^η = {b}")))))
        } else {
            Ok(None)
        }
    })?;
    bound
}

/// Value of the gap series `8 Σ 4^n 3^(n(η-1)) δ_n^η = 8 Σ 2^n δ_n^η`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesBound {
    /// `value.hi` bounds the full infinite sum; `ratio` is the certified
    /// geometric ratio of the (majorant) tail.
    Bounded { value: Enclosure, ratio: Enclosure },
    /// The ratio test fails (`ratio >= 1`); no finite bound is claimed.
    Unbounded { ratio: Enclosure },
}

impl SeriesBound {
    pub fn value(&self) -> Option<&Enclosure> {
        match self {
            SeriesBound::Bounded { value, .. } => Some(value),
            SeriesBound::Unbounded { .. } => None,
        }
    }

    pub fn ratio(&self) -> &Enclosure {
        match self {
            SeriesBound::Bounded { ratio, .. } | SeriesBound::Unbounded { ratio } => ratio,
        }
    }
}

/// How a finite sequence is continued past its last level when summing the
/// series: `δ_{N+k} <= δ_N · tail_ratio^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesOptions {
    pub tail_ratio: Rational,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        SeriesOptions { tail_ratio: rat(1, 8) }
    }
}

/// `2ρ^η`, the ratio of consecutive series terms for a geometric sequence.
pub fn series_ratio(rho: &Rational, prec: Precision) -> Result<Enclosure> {
    Ok(pow_eta(rho, prec.working())?.scale(&int(2), prec))
}

/// Decide `ratio < 1`, doubling precision as needed.
fn ratio_converges(rho: &Rational, prec: Precision) -> Result<(bool, Enclosure, Precision)> {
    let one = Rational::one();
    let ((converges, ratio), p) = certify("2ρ^η < 1", prec, |p| {
        let r = series_ratio(rho, p)?;
        Ok(r.compare_lt(&one).map(|c| (c, r)))
    })?;
    Ok((converges, ratio, p))
}

/// `8 · 2^n · δ_n^η`.
fn series_term(n: u32, delta: &Rational, prec: Precision) -> Result<Enclosure> {
    let factor = int(8) * pow_u(&int(2), n);
    Ok(pow_eta(delta, prec)?.scale(&factor, prec))
}

pub fn lemma2_series(seq: &DeltaSequence, prec: Precision) -> Result<SeriesBound> {
    lemma2_series_with(seq, &SeriesOptions::default(), prec)
}

/// Certified enclosure of the full gap series. Geometric sequences use the
/// closed form `8A^η / (1 - 2ρ^η)`; finite sequences sum their listed terms
/// and add the geometric majorant tail anchored at the last term.
pub fn lemma2_series_with(seq: &DeltaSequence, opts: &SeriesOptions, prec: Precision) -> Result<SeriesBound> {
    let w = prec.working();
    match (seq, seq.max_level()) {
        (DeltaSequence::Geometric { amplitude, ratio, .. }, None) => {
            let (converges, q, _) = ratio_converges(ratio, prec)?;
            if !converges {
                return Ok(SeriesBound::Unbounded { ratio: q.round(prec) });
            }
            let q = series_ratio(ratio, w)?;
            let head = pow_eta(amplitude, w)?.scale(&int(8), w);
            let denom = Enclosure::exact(Rational::one()).sub(&q, w);
            let value = head.div(&denom, w)?.round(prec);
            Ok(SeriesBound::Bounded { value, ratio: q.round(prec) })
        }
        (_, Some(last)) => {
            if !opts.tail_ratio.is_positive() || opts.tail_ratio >= Rational::one() {
                return Err(Error::Domain(format!("tail ratio {} is not in (0, 1)", opts.tail_ratio)));
            }
            let (converges, q, _) = ratio_converges(&opts.tail_ratio, prec)?;
            if !converges {
                return Ok(SeriesBound::Unbounded { ratio: q.round(prec) });
            }
            let q = series_ratio(&opts.tail_ratio, w)?;
            let mut sum = Enclosure::exact(Rational::zero());
            let mut last_term = sum.clone();
            for n in 0..=last {
                last_term = series_term(n, &seq.delta(n).expect("defined"), w)?;
                sum = sum.add(&last_term, w);
            }
            let one = Enclosure::exact(Rational::one());
            let tail = last_term.mul(&q, w).div(&one.sub(&q, w), w)?;
            Ok(SeriesBound::Bounded { value: sum.add(&tail, w).round(prec), ratio: q.round(prec) })
        }
        (DeltaSequence::Explicit { .. }, None) => unreachable!("explicit sequences are finite"),
    }
}

/// `8 Σ_{n<=m} 2^n δ_n^η`. Exact when every `δ_n` is a power of three.
pub fn lemma2_partial_sum(seq: &DeltaSequence, m: u32, prec: Precision) -> Result<Enclosure> {
    seq.require_level(m)?;
    let exact: Option<Rational> = (0..=m)
        .map(|n| {
            let delta = seq.delta(n).expect("defined");
            log3_exact(&delta)?;
            let term = pow_eta(&delta, prec).ok()?;
            Some(term.lo() * int(8) * pow_u(&int(2), n))
        })
        .sum();
    if let Some(sum) = exact {
        return Ok(Enclosure::exact(sum));
    }
    let w = prec.working();
    let mut sum = Enclosure::exact(Rational::zero());
    for n in 0..=m {
        sum = sum.add(&series_term(n, &seq.delta(n).expect("defined"), w)?, w);
    }
    Ok(sum.round(prec))
}

/// Where a content bound comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// Squares of side `side`, given by their lower-left corners.
    Covering {
        side: Rational,
        corners: Vec<(Rational, Rational)>,
    },
    Lemma1,
    Lemma2Series,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContentBound {
    pub value: Enclosure,
    pub witness: Witness,
}

impl ContentBound {
    /// Sum of witness side lengths, for covering witnesses.
    pub fn witnessed_sum(&self) -> Option<Rational> {
        match &self.witness {
            Witness::Covering { side, corners } => Some(side * Rational::from_integer(corners.len().into())),
            _ => None,
        }
    }

    /// The witness squares, for covering witnesses.
    pub fn squares(&self) -> Option<RectRegion> {
        match &self.witness {
            Witness::Covering { side, corners } => {
                Some(RectRegion::new(corners.iter().map(|(x, y)| Rect::square(x.clone(), y.clone(), side)).collect()))
            }
            _ => None,
        }
    }

    pub fn to_json(&self, prec: Precision) -> ContentBoundJson {
        let (kind, side, squares) = match &self.witness {
            Witness::Covering { side, corners } => {
                ("covering", Some(side.clone()), corners.iter().map(|(x, y)| [pair(x), pair(y)]).collect())
            }
            Witness::Lemma1 => ("lemma1", None, Vec::new()),
            Witness::Lemma2Series => ("lemma2-series", None, Vec::new()),
        };
        ContentBoundJson {
            schema_version: CONTENT_SCHEMA_VERSION,
            witness: kind.to_string(),
            value: self.value.to_json(prec),
            exact_sum: self.witnessed_sum().as_ref().map(pair),
            side: side.as_ref().map(pair),
            squares,
        }
    }
}

pub const CONTENT_SCHEMA_VERSION: u32 = 1;

/// Serialized [`ContentBound`]: exact rationals for witnessed sums, decimal
/// strings for enclosure endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContentBoundJson {
    pub schema_version: u32,
    pub witness: String,
    pub value: EnclosureJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_sum: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<[String; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub squares: Vec<[[String; 2]; 2]>,
}

pub fn region_content_upper(region: &RectRegion, side: &Rational) -> Result<ContentBound> {
    region_content_upper_with_budget(region, side, DEFAULT_COVER_BUDGET)
}

/// Cover every rectangle by a grid of `side`-squares anchored at the
/// rectangle's lower-left corner (`⌈w/side⌉ × ⌈h/side⌉` squares, at least one
/// per axis), merge coincident squares, and charge `side` per square.
pub fn region_content_upper_with_budget(region: &RectRegion, side: &Rational, budget: usize) -> Result<ContentBound> {
    if !side.is_positive() {
        return Err(Error::Domain(format!("square side must be positive, got {side}")));
    }
    let mut corners: BTreeSet<(Rational, Rational)> = BTreeSet::new();
    for r in region.rects() {
        let nx = ceil(&(r.width() / side)).max(num::BigInt::one());
        let ny = ceil(&(r.height() / side)).max(num::BigInt::one());
        let needed = &nx * &ny + corners.len();
        if needed > num::BigInt::from(budget) {
            return Err(Error::Budget { limit: budget, partial: corners.len() });
        }
        let (nx, ny) = (u64::try_from(nx).expect("within budget"), u64::try_from(ny).expect("within budget"));
        for j in 0..ny {
            let y = r.y0() + side * int(j as i64);
            for i in 0..nx {
                corners.insert((r.x0() + side * int(i as i64), y.clone()));
            }
        }
    }
    let corners: Vec<_> = corners.into_iter().collect();
    let sum = side * Rational::from_integer(corners.len().into());
    Ok(ContentBound { value: Enclosure::exact(sum), witness: Witness::Covering { side: side.clone(), corners } })
}

/// Best covering bound over a list of candidate sides (ties keep the first).
pub fn best_covering(region: &RectRegion, sides: &[Rational]) -> Result<ContentBound> {
    let mut best: Option<ContentBound> = None;
    for s in sides {
        let b = region_content_upper(region, s)?;
        if best.as_ref().is_none_or(|cur| b.value.hi() < cur.value.hi()) {
            best = Some(b);
        }
    }
    best.ok_or_else(|| Error::Domain("no candidate sides".into()))
}

/// Larger of the Lebesgue measures of the two coordinate projections. Any
/// square cover charges at least this much.
pub fn projection_lower(region: &RectRegion) -> Rational {
    region.x_projection_length().max(region.y_projection_length())
}
