//! SVG pictures of `F_m`.

use std::fmt::Write as _;

use num::One;

use crate::error::{Error, Result};
use crate::geometry::{complement_by_cross, gap_intervals, DeltaSequence, Rect};
use crate::rational::{to_fixed, Rational, Round};

pub const DEFAULT_DEPTH_CAP: u32 = 5;
/// Fractional digits of every emitted coordinate.
pub const COORD_DIGITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderStyle {
    pub size_px: u32,
    pub depth_cap: u32,
    pub body_fill: String,
    pub hole_fill: String,
    pub mark_stroke: String,
    /// Stroke width of the gap marks, in unit-square coordinates.
    pub mark_width: Rational,
    /// Blank border around the unit square, in unit-square coordinates.
    pub margin: Rational,
}

impl Default for RenderStyle {
    fn default() -> Self {
        RenderStyle {
            size_px: 600,
            depth_cap: DEFAULT_DEPTH_CAP,
            body_fill: "#4a4a4a".into(),
            hole_fill: "#ffffff".into(),
            mark_stroke: "#000000".into(),
            mark_width: Rational::new(1.into(), 100.into()),
            margin: Rational::new(1.into(), 20.into()),
        }
    }
}

fn num(q: &Rational) -> String {
    to_fixed(q, COORD_DIGITS, Round::Nearest)
}

/// SVG y coordinate of a point at height `y` (SVG y grows downward).
fn flip(y: &Rational) -> Rational {
    Rational::one() - y
}

fn rect_path(r: &Rect, out: &mut String) {
    let _ =
        write!(out, "M{} {}H{}V{}H{}Z", num(r.x0()), num(&flip(r.y1())), num(r.x1()), num(&flip(r.y0())), num(r.x0()));
}

/// `F_m` as a filled unit square with one white `hole` path per cross and the
/// gap intervals of levels `0..=m` marked in bold on the bottom and left sides.
pub fn render_fm(seq: &DeltaSequence, m: u32, style: &RenderStyle) -> Result<String> {
    if m > style.depth_cap {
        return Err(Error::DepthCap { depth: m, cap: style.depth_cap });
    }
    let groups = complement_by_cross(seq, m)?;
    let gaps = gap_intervals(seq, m)?;

    let lo = -style.margin.clone();
    let extent = Rational::one() + &style.margin * Rational::from_integer(2.into());
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{0}\" viewBox=\"{1} {1} {2} {2}\">",
        style.size_px,
        num(&lo),
        num(&extent)
    );
    let _ = writeln!(out, "<title>F_{m} for {seq}</title>");
    let _ = writeln!(
        out,
        "<rect class=\"body\" x=\"{z}\" y=\"{z}\" width=\"{o}\" height=\"{o}\" fill=\"{}\"/>",
        style.body_fill,
        z = num(&Rational::from_integer(0.into())),
        o = num(&Rational::one())
    );
    let _ = writeln!(out, "<g class=\"holes\" fill=\"{}\" stroke=\"none\">", style.hole_fill);
    for (cross, rects) in &groups {
        let mut d = String::new();
        for r in rects {
            rect_path(r, &mut d);
        }
        let _ = writeln!(
            out,
            "<path class=\"hole\" data-level=\"{}\" data-index=\"{}\" d=\"{d}\"/>",
            cross.level(),
            cross.index()
        );
    }
    out.push_str("</g>\n");
    let _ = writeln!(
        out,
        "<g class=\"gap-marks\" stroke=\"{}\" stroke-width=\"{}\" stroke-linecap=\"butt\">",
        style.mark_stroke,
        num(&style.mark_width)
    );
    let bottom = num(&Rational::one());
    let left = num(&Rational::from_integer(0.into()));
    for g in &gaps {
        let _ = writeln!(
            out,
            "<line class=\"gap-mark\" data-side=\"bottom\" data-level=\"{}\" x1=\"{}\" y1=\"{bottom}\" x2=\"{}\" y2=\"{bottom}\"/>",
            g.level(),
            num(&g.left()),
            num(&g.right())
        );
    }
    for g in &gaps {
        let _ = writeln!(
            out,
            "<line class=\"gap-mark\" data-side=\"left\" data-level=\"{}\" x1=\"{left}\" y1=\"{}\" x2=\"{left}\" y2=\"{}\"/>",
            g.level(),
            num(&flip(&g.left())),
            num(&flip(&g.right()))
        );
    }
    out.push_str("</g>\n</svg>\n");
    Ok(out)
}
