//! Command-line interface.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::capacity::FrostmanScheme;
use crate::certificate::{
    build_certificate, validate, Certificate, CertificateOptions, CertificateVerdict, ChainLink, ContentConvention,
};
use crate::content::{
    best_covering, cover_sum_lemma1, lemma1_bound, lemma2_partial_sum, lemma2_series, region_content_upper,
    ContentBound, ContentBoundJson, SeriesBound, Witness,
};
use crate::enclosure::{EnclosureJson, Precision};
use crate::error::{Error, Result};
use crate::geometry::{complement_region, DeltaSequence, GeometryDocument, GeometryKind};
use crate::rational::{int, parse_rational, pow_u, to_pair, Pair, Rational};
use crate::render::{render_fm, RenderStyle};
use crate::selector::{select_geometric, verify, VerifyReport};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_IO: u8 = 4;
pub const EXIT_COMPUTE: u8 = 5;

pub const PRECISION_ENV: &str = "CANTOR_CERT_PRECISION";

#[derive(Debug, Parser)]
#[command(
    name = "cantor-cert",
    version,
    about = "Exact Cantor-gap geometry and a certified content/capacity separation"
)]
pub struct Cli {
    /// Working precision in bits [default: 128; for `validate`, the stored precision].
    #[arg(long, global = true, env = PRECISION_ENV)]
    pub precision: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit exact geometry as JSON.
    Build(BuildArgs),
    /// Compute a content bound.
    Bound(BoundArgs),
    /// Select a gap sequence for a target, or audit a given one.
    Select(SelectArgs),
    /// Build the separation certificate.
    Certify(CertifyArgs),
    /// Re-verify a certificate file.
    Validate(ValidateArgs),
    /// Draw F_m as SVG.
    Render(RenderArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub depth: u32,
    /// `default`, `geometric:A,ρ[,max]`, `pow2:a,r` or `explicit:δ0,δ1,...`
    #[arg(long, default_value = "default")]
    pub seq: String,
    #[arg(long, value_enum, default_value = "fm")]
    pub kind: KindArg,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum KindArg {
    Em,
    Fm,
    Complement,
    Crosses,
}

impl From<KindArg> for GeometryKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Em => GeometryKind::Em,
            KindArg::Fm => GeometryKind::Fm,
            KindArg::Complement => GeometryKind::Complement,
            KindArg::Crosses => GeometryKind::Crosses,
        }
    }
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["lemma1", "lemma2", "oracle"])))]
pub struct BoundArgs {
    /// Square-cover sum and `8δ^η` for the strip configuration.
    #[arg(long)]
    pub lemma1: bool,
    /// Gap series of a sequence.
    #[arg(long)]
    pub lemma2: bool,
    /// Brute-force covering of the complement region.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, required_if_eq("lemma1", "true"))]
    pub delta: Option<String>,
    #[arg(long, required_if_eq("lemma1", "true"))]
    pub n0: Option<u32>,
    #[arg(long, default_value = "default")]
    pub seq: String,
    #[arg(long, required_if_eq("oracle", "true"))]
    pub depth: Option<u32>,
    /// Square side for the oracle; default tries every `δ_n`, `n <= depth`.
    #[arg(long)]
    pub side: Vec<String>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long)]
    pub eps: String,
    /// Audit this sequence instead of selecting one.
    #[arg(long)]
    pub check: Option<String>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long, default_value = "side")]
    pub convention: String,
    #[arg(long, default_value = "crude")]
    pub scheme: String,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub file: PathBuf,
    /// Emit the verdict and re-verified links as JSON instead of the audit log.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub depth: u32,
    #[arg(long, default_value = "default")]
    pub seq: String,
    #[arg(long, default_value_t = 600)]
    pub size: u32,
    #[command(flatten)]
    pub out: Output,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Schema(_) | Error::Json(_) => EXIT_PARSE,
        Error::Io(_) => EXIT_IO,
        Error::PrecisionMismatch { .. } => EXIT_USAGE,
        _ => EXIT_COMPUTE,
    }
}

fn emit(out: &Output, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &out.output {
        Some(path) => fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn parse_seq(s: &str) -> Result<DeltaSequence> {
    s.parse()
}

fn parse_q(s: &str) -> Result<Rational> {
    parse_rational(s)
}

#[derive(Serialize)]
struct Lemma1Output {
    schema_version: u32,
    mode: &'static str,
    delta: Pair,
    n0: u32,
    cover_sum: Pair,
    dominated: Pair,
    bound: ContentBoundJson,
}

#[derive(Serialize)]
struct Lemma2Output {
    schema_version: u32,
    mode: &'static str,
    sequence: DeltaSequence,
    converges: bool,
    ratio: EnclosureJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<ContentBoundJson>,
}

#[derive(Serialize)]
struct OracleOutput {
    schema_version: u32,
    mode: &'static str,
    sequence: DeltaSequence,
    depth: u32,
    partial_sum: EnclosureJson,
    bound: ContentBoundJson,
}

#[derive(Serialize)]
struct SelectOutput {
    schema_version: u32,
    epsilon: Pair,
    log2_inv_amplitude: u32,
    log2_inv_ratio: u32,
    sequence: DeltaSequence,
    report: VerifyReport,
}

#[derive(Serialize)]
struct ValidateOutput<'a> {
    verdict: &'a CertificateVerdict,
    precision_bits: u32,
    links: &'a [ChainLink],
}

fn bound(args: &BoundArgs, prec: Precision, stdout: &mut dyn Write) -> Result<u8> {
    let text = if args.lemma1 {
        let delta = parse_q(args.delta.as_deref().unwrap_or_default())?;
        let n0 = args.n0.unwrap_or_default();
        let value = lemma1_bound(&delta, n0, prec)?;
        let dominated = &delta * pow_u(&int(2), n0 + 1);
        to_json(&Lemma1Output {
            schema_version: 1,
            mode: "lemma1",
            delta: to_pair(&delta),
            n0,
            cover_sum: to_pair(&cover_sum_lemma1(&delta, n0)),
            dominated: to_pair(&dominated),
            bound: ContentBound { value, witness: Witness::Lemma1 }.to_json(prec),
        })?
    } else if args.lemma2 {
        let seq = parse_seq(&args.seq)?;
        let s = lemma2_series(&seq, prec)?;
        let ratio = s.ratio().to_json(prec);
        let (converges, bound) = match s {
            SeriesBound::Bounded { value, .. } => {
                (true, Some(ContentBound { value, witness: Witness::Lemma2Series }.to_json(prec)))
            }
            SeriesBound::Unbounded { .. } => (false, None),
        };
        to_json(&Lemma2Output { schema_version: 1, mode: "lemma2", sequence: seq, converges, ratio, bound })?
    } else {
        let seq = parse_seq(&args.seq)?;
        let depth = args.depth.unwrap_or_default();
        let region = complement_region(&seq, depth)?;
        let b = if args.side.is_empty() {
            let sides: Vec<_> = (0..=depth).rev().map(|n| seq.delta(n).expect("validated")).collect();
            best_covering(&region, &sides)?
        } else {
            let sides = args.side.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?;
            if sides.len() == 1 {
                region_content_upper(&region, &sides[0])?
            } else {
                best_covering(&region, &sides)?
            }
        };
        to_json(&OracleOutput {
            schema_version: 1,
            mode: "oracle",
            depth,
            partial_sum: lemma2_partial_sum(&seq, depth, prec)?.to_json(prec),
            sequence: seq,
            bound: b.to_json(prec),
        })?
    };
    emit(&args.out, &text, stdout)?;
    Ok(EXIT_OK)
}

fn select(args: &SelectArgs, prec: Precision, stdout: &mut dyn Write) -> Result<u8> {
    let eps = parse_q(&args.eps)?;
    let seq = match &args.check {
        Some(s) => parse_seq(s)?,
        None => select_geometric(&eps, prec)?,
    };
    let report = verify(&seq, &eps, prec)?;
    let pass = report.verdict.is_pass();
    let (a, r) = seq.power_of_two_exponents().unwrap_or_default();
    let text = to_json(&SelectOutput {
        schema_version: 1,
        epsilon: to_pair(&eps),
        log2_inv_amplitude: a,
        log2_inv_ratio: r,
        sequence: seq,
        report,
    })?;
    emit(&args.out, &text, stdout)?;
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}

fn read_certificate(path: &Path) -> Result<Certificate> {
    Certificate::from_json_str(&fs::read_to_string(path)?)
}

/// Run with explicit argv and output streams; returns the exit status.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> Result<u8> {
    let requested = cli.precision.map(Precision::bits).transpose()?;
    let prec = requested.unwrap_or_default();
    match &cli.command {
        Command::Build(a) => {
            let seq = parse_seq(&a.seq)?;
            let doc = GeometryDocument::build(a.kind.into(), &seq, a.depth)?;
            emit(&a.out, &to_json(&doc)?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Bound(a) => bound(a, prec, stdout),
        Command::Select(a) => select(a, prec, stdout),
        Command::Certify(a) => {
            let opts = CertificateOptions {
                precision: prec,
                convention: a.convention.parse::<ContentConvention>()?,
                scheme: a.scheme.parse::<FrostmanScheme>()?,
            };
            let cert = build_certificate(&opts)?;
            emit(&a.out, &cert.to_json_string()?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Validate(a) => {
            let cert = read_certificate(&a.file)?;
            let v = validate(&cert, requested)?;
            let text = if a.json {
                to_json(&ValidateOutput { verdict: &v.verdict, precision_bits: v.precision_bits, links: &v.links })?
            } else {
                v.audit_log()
            };
            emit(&a.out, &text, stdout)?;
            Ok(if v.is_pass() { EXIT_OK } else { EXIT_FAIL })
        }
        Command::Render(a) => {
            let seq = parse_seq(&a.seq)?;
            let style = RenderStyle { size_px: a.size, ..RenderStyle::default() };
            emit(&a.out, &render_fm(&seq, a.depth, &style)?, stdout)?;
            Ok(EXIT_OK)
        }
    }
}
