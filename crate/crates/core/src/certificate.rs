//! The separation certificate.
//!
//! The chain certified here is
//!
//! ```text
//! M¹([0,1]² \ K) <= 2·S.hi < ε <= L/2 < L <= α(C) <= α((0,1)² \ int K)
//! ```
//!
//! where `S` is the gap series of the selected sequence, `L` the capacity
//! lower bound and `ε` a power of two. Every link except the last is
//! recomputed on validation; the last rests on the listed assumptions.

use std::fmt::Write as _;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::capacity::{alpha_lower_bound, Assumption, CapacityLB, CapacityLBJson, FrostmanScheme};
use crate::content::{lemma2_series, SeriesBound};
use crate::enclosure::{Enclosure, EnclosureJson, Precision};
use crate::error::{Error, Result};
use crate::geometry::DeltaSequence;
use crate::rational::{from_pair, int, rat, to_pair, Pair, Rational};
use crate::selector::{power_of_two_floor, select_exponent, verify, SELECTED_LOG2_INV_RATIO};

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Each cross is a horizontal strip plus its transpose; the series bounds
/// the content of the horizontal strips only.
pub const CROSS_FACTOR: u32 = 2;

/// How square covers are charged.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContentConvention {
    /// A square costs its side length.
    #[default]
    Side,
    /// A square costs its diameter, at most `√2 <= 2` times its side.
    Diameter,
}

impl ContentConvention {
    /// Factor between the convention's content and side-length content.
    pub fn factor(self) -> u32 {
        match self {
            ContentConvention::Side => 1,
            ContentConvention::Diameter => 2,
        }
    }
}

impl std::str::FromStr for ContentConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "side" => Ok(ContentConvention::Side),
            "diameter" => Ok(ContentConvention::Diameter),
            other => Err(Error::Parse(format!("unknown content convention {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CertificateOptions {
    pub precision: Precision,
    pub convention: ContentConvention,
    pub scheme: FrostmanScheme,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceParams {
    pub log2_inv_amplitude: u32,
    pub log2_inv_ratio: u32,
}

impl SequenceParams {
    pub fn sequence(&self) -> Result<DeltaSequence> {
        DeltaSequence::power_of_two(self.log2_inv_amplitude, self.log2_inv_ratio)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    Computed,
    Assumed,
}

/// One inequality `lhs relation rhs` with `slack = rhs - lhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainLink {
    pub id: String,
    pub statement: String,
    pub relation: String,
    pub basis: Basis,
    pub lhs: Pair,
    pub rhs: Pair,
    pub slack: Pair,
    pub holds: bool,
}

pub const LINK_CAPACITY: &str = "capacity-derivation";
pub const LINK_CONTENT: &str = "content-below-target";
pub const LINK_TARGET: &str = "target-below-half-capacity";
pub const LINK_HALF: &str = "half-capacity-below-capacity";
pub const LINK_ALPHA: &str = "capacity-below-alpha-side";

fn link(id: &str, statement: &str, strict: bool, lhs: &Rational, rhs: &Rational) -> ChainLink {
    let holds = if strict { lhs < rhs } else { lhs <= rhs };
    ChainLink {
        id: id.into(),
        statement: statement.into(),
        relation: if strict { "<" } else { "<=" }.into(),
        basis: Basis::Computed,
        lhs: to_pair(lhs),
        rhs: to_pair(rhs),
        slack: to_pair(&(rhs - lhs)),
        holds,
    }
}

fn alpha_link(l_lo: &Rational) -> ChainLink {
    ChainLink {
        id: LINK_ALPHA.into(),
        statement: "L <= α(C) <= α((0,1)² \\ int K) by monotonicity of α and C ⊆ ∂K".into(),
        relation: "<=".into(),
        basis: Basis::Assumed,
        lhs: to_pair(l_lo),
        rhs: to_pair(l_lo),
        slack: to_pair(&Rational::zero()),
        holds: true,
    }
}

/// Analytic facts the certificate rests on; listed, never checked.
pub fn certificate_assumptions() -> Vec<Assumption> {
    let mut v = vec![
        Assumption::new(
            "vitushkin-criterion",
            "R(K) = A(K) if and only if α(D \\ K) = α(D \\ int K) for every bounded open D.",
            "Vitushkin, The analytic capacity of sets in problems of approximation theory, Russian Math. Surveys 22 (1967); Gamelin, Uniform Algebras (1969), Ch. VIII",
        ),
        Assumption::new(
            "alpha-below-content",
            "α(E) <= M¹(E) for the recorded content convention.",
            "Garnett, Analytic capacity and measure, LNM 297 (1972), Ch. III; Tolsa, Analytic capacity, the Cauchy transform, and non-homogeneous Calderón-Zygmund theory (2014), Ch. 1",
        ),
        Assumption::new(
            "boundary-negligible",
            "The boundary of the unit square is negligible for continuous analytic capacity, so α((0,1)² \\ K) <= M¹([0,1]² \\ K).",
            "Vitushkin (1967), §2; Verdera, Removability, capacity and approximation, NATO ASI Series C 439 (1994)",
        ),
        Assumption::new(
            "cantor-square-in-boundary",
            "C(1/3) × C(1/3) ⊆ ∂K for every admissible gap sequence.",
            "Construction of K: the Cantor square is never removed and every neighbourhood of its points meets the removed crosses",
        ),
        Assumption::new(
            "alpha-monotone",
            "α is monotone under inclusion of compact sets, extended to open sets by inner approximation.",
            "Vitushkin (1967), §1; Gamelin, Uniform Algebras (1969), Ch. VIII",
        ),
    ];
    v.extend(crate::capacity::capacity_assumptions());
    v
}

/// Serialized certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema_version: u32,
    pub tool_version: String,
    pub precision_bits: u32,
    pub convention: ContentConvention,
    pub convention_factor: u32,
    pub cross_factor: u32,
    pub capacity_lb: CapacityLBJson,
    pub target_eps: Pair,
    pub selection_eps: Pair,
    pub sequence: SequenceParams,
    pub series: EnclosureJson,
    pub content_bound: EnclosureJson,
    pub chain: Vec<ChainLink>,
    pub assumptions: Vec<Assumption>,
}

/// Evaluate every link from fresh values. `stored_l` is the capacity bound
/// the certificate claims; `fresh_l` is what the derivation yields.
fn evaluate_links(
    stored_l: &Rational,
    fresh_l: &Rational,
    content_hi: &Rational,
    target: &Rational,
    convention_factor: u32,
) -> Vec<ChainLink> {
    let half = stored_l * rat(1, 2);
    let scaled_target = target * int(convention_factor as i64);
    vec![
        link(LINK_CAPACITY, "stored L.lo <= 1 / B.hi from the recorded derivation", false, stored_l, fresh_l),
        link(LINK_CONTENT, "M¹([0,1]² \\ K) <= 2·S.hi < ε", true, content_hi, target),
        link(LINK_TARGET, "convention factor · ε <= L.lo / 2", false, &scaled_target, &half),
        link(LINK_HALF, "L.lo / 2 < L.lo", true, &half, stored_l),
        alpha_link(stored_l),
    ]
}

fn content_from_series(series: &Enclosure, prec: Precision) -> Enclosure {
    series.scale(&int(CROSS_FACTOR as i64), prec)
}

fn series_of(seq: &DeltaSequence, prec: Precision) -> Result<Enclosure> {
    match lemma2_series(seq, prec)? {
        SeriesBound::Bounded { value, .. } => Ok(value),
        SeriesBound::Unbounded { .. } => Err(Error::Inconclusive { link: LINK_CONTENT.into(), bits: prec.get() }),
    }
}

pub fn build_certificate(opts: &CertificateOptions) -> Result<Certificate> {
    let prec = opts.precision;
    let cap: CapacityLB = alpha_lower_bound(opts.scheme, prec)?;
    let l_lo = cap.value.lo().clone();
    let c = opts.convention.factor();
    let (_, target) = power_of_two_floor(&(&l_lo / int(2 * c as i64)))?;
    let selection_eps = &target / int(CROSS_FACTOR as i64);
    let a = select_exponent(&selection_eps, prec)?;
    let seq = DeltaSequence::power_of_two(a, SELECTED_LOG2_INV_RATIO)?;
    let report = verify(&seq, &selection_eps, prec)?;
    if !report.verdict.is_pass() {
        return Err(Error::Inconclusive { link: LINK_CONTENT.into(), bits: prec.get() });
    }
    let series = series_of(&seq, prec)?;
    let content = content_from_series(&series, prec);
    let chain = evaluate_links(&l_lo, &l_lo, content.hi(), &target, c);
    if let Some(bad) = chain.iter().find(|l| !l.holds) {
        return Err(Error::Inconclusive { link: bad.id.clone(), bits: prec.get() });
    }
    Ok(Certificate {
        schema_version: CERTIFICATE_SCHEMA_VERSION,
        tool_version: TOOL_VERSION.into(),
        precision_bits: prec.get(),
        convention: opts.convention,
        convention_factor: c,
        cross_factor: CROSS_FACTOR,
        capacity_lb: cap.to_json(prec),
        target_eps: to_pair(&target),
        selection_eps: to_pair(&selection_eps),
        sequence: SequenceParams { log2_inv_amplitude: a, log2_inv_ratio: SELECTED_LOG2_INV_RATIO },
        series: series.to_json(prec),
        content_bound: content.to_json(prec),
        chain,
        assumptions: certificate_assumptions(),
    })
}

impl Certificate {
    pub fn to_json_string(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let cert: Certificate = serde_json::from_str(s).map_err(|e| Error::Schema(format!("certificate: {e}")))?;
        cert.check_schema()?;
        Ok(cert)
    }

    fn check_schema(&self) -> Result<()> {
        if self.schema_version != CERTIFICATE_SCHEMA_VERSION {
            return Err(Error::Schema(format!("unsupported certificate schema version {}", self.schema_version)));
        }
        if self.convention_factor != self.convention.factor() {
            return Err(Error::Schema("convention factor does not match convention".into()));
        }
        if self.cross_factor != CROSS_FACTOR {
            return Err(Error::Schema(format!("cross factor must be {CROSS_FACTOR}")));
        }
        Precision::bits(self.precision_bits)?;
        Ok(())
    }

    pub fn target(&self) -> Result<Rational> {
        from_pair(&self.target_eps)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case", deny_unknown_fields)]
pub enum CertificateVerdict {
    Pass,
    Fail { link: String },
}

/// Result of re-verifying a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub verdict: CertificateVerdict,
    pub precision_bits: u32,
    pub links: Vec<ChainLink>,
    pub series: Option<Enclosure>,
    pub content_bound: Option<Enclosure>,
    pub assumptions: Vec<Assumption>,
}

impl Validation {
    pub fn is_pass(&self) -> bool {
        self.verdict == CertificateVerdict::Pass
    }

    fn fail(link: &str, bits: u32, links: Vec<ChainLink>, assumptions: Vec<Assumption>) -> Self {
        Validation {
            verdict: CertificateVerdict::Fail { link: link.into() },
            precision_bits: bits,
            links,
            series: None,
            content_bound: None,
            assumptions,
        }
    }

    /// Human-readable audit log.
    pub fn audit_log(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "re-verified at {} bits", self.precision_bits);
        for l in &self.links {
            let tag = match (l.basis, l.holds) {
                (Basis::Assumed, _) => "ASSUMED",
                (_, true) => "PASS",
                (_, false) => "FAIL",
            };
            let lhs = from_pair(&l.lhs).map(|q| fmt_approx(&q)).unwrap_or_default();
            let rhs = from_pair(&l.rhs).map(|q| fmt_approx(&q)).unwrap_or_default();
            let slack = from_pair(&l.slack).map(|q| fmt_approx(&q)).unwrap_or_default();
            let _ = writeln!(out, "[{tag}] {}: {} ({lhs} {} {rhs}, slack {slack})", l.id, l.statement, l.relation);
        }
        if let Some(s) = &self.series {
            let _ = writeln!(out, "series enclosure: {s}");
        }
        if let Some(c) = &self.content_bound {
            let _ = writeln!(out, "content bound: {c}");
        }
        for a in &self.assumptions {
            let _ = writeln!(out, "[ASSUMED] {}: {} [{}]", a.id, a.statement, a.citation);
        }
        let _ = match &self.verdict {
            CertificateVerdict::Pass => writeln!(out, "verdict: PASS"),
            CertificateVerdict::Fail { link } => writeln!(out, "verdict: FAIL at {link}"),
        };
        out
    }
}

fn fmt_approx(q: &Rational) -> String {
    crate::rational::to_scientific(q, 12, crate::rational::Round::Nearest)
}

/// Recompute every link of `cert` at `prec` (the stored precision when
/// `None`). Requesting less than the stored precision is an error.
pub fn validate(cert: &Certificate, prec: Option<Precision>) -> Result<Validation> {
    cert.check_schema()?;
    let stored = Precision::bits(cert.precision_bits)?;
    let prec = prec.unwrap_or(stored);
    if prec < stored {
        return Err(Error::PrecisionMismatch { requested: prec.get(), stored: stored.get() });
    }
    let bits = prec.get();
    let assumptions = cert.assumptions.clone();

    let stored_l = cert.capacity_lb.value.parse()?.lo().clone();
    let fresh = match cert.capacity_lb.replay(prec) {
        Ok(f) => f,
        Err(Error::Schema(_)) => {
            return Ok(Validation::fail(LINK_CAPACITY, bits, Vec::new(), assumptions));
        }
        Err(e) => return Err(e),
    };
    let fresh_l = fresh.value.lo().clone();

    let seq = cert.sequence.sequence()?;
    let target = cert.target()?;
    let series = match series_of(&seq, prec) {
        Ok(s) => s,
        Err(Error::Inconclusive { .. }) => {
            return Ok(Validation::fail(LINK_CONTENT, bits, Vec::new(), assumptions));
        }
        Err(e) => return Err(e),
    };
    let content = content_from_series(&series, prec);
    let links = evaluate_links(&stored_l, &fresh_l, content.hi(), &target, cert.convention_factor);

    let missing = certificate_assumptions().into_iter().find(|a| !cert.assumptions.iter().any(|b| b.id == a.id));
    let verdict = match (links.iter().find(|l| !l.holds), missing) {
        (Some(bad), _) => CertificateVerdict::Fail { link: bad.id.clone() },
        (None, Some(a)) => CertificateVerdict::Fail { link: format!("assumption:{}", a.id) },
        (None, None) => CertificateVerdict::Pass,
    };
    Ok(Validation {
        verdict,
        precision_bits: bits,
        links,
        series: Some(series),
        content_bound: Some(content),
        assumptions,
    })
}
