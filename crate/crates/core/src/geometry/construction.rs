//! The stages `E_m`, `F_m = (E_m × [0,1]) ∪ ([0,1] × E_m)`, the complement
//! `[0,1]² \ F_m` as a union of gap rectangles, and the cross covering.

use num::{One, Zero};

use super::interval::{cantor_interval, containing_index, GapInterval};
use super::region::{Rect, RectRegion};
use super::sequence::DeltaSequence;
use crate::error::Result;
use crate::rational::Rational;

/// Closed interval `[left, right]`.
pub type Segment = (Rational, Rational);

/// Every gap `J_n^j` with `n <= m`, sorted by position.
pub fn gap_intervals(seq: &DeltaSequence, m: u32) -> Result<Vec<GapInterval>> {
    seq.validate_through(m)?;
    let mut gaps = Vec::new();
    for n in 0..=m {
        let width = seq.delta(n).expect("validated");
        for j in 1..=1u64 << n {
            gaps.push(GapInterval::new(n, j, width.clone())?);
        }
    }
    gaps.sort_by(|a, b| a.center().cmp(b.center()));
    Ok(gaps)
}

/// `E_m` as sorted disjoint closed intervals.
pub fn build_em(seq: &DeltaSequence, m: u32) -> Result<Vec<Segment>> {
    let gaps = gap_intervals(seq, m)?;
    let mut pieces = Vec::with_capacity(gaps.len() + 1);
    let mut cursor = Rational::zero();
    for g in &gaps {
        pieces.push((cursor, g.left()));
        cursor = g.right();
    }
    pieces.push((cursor, Rational::one()));
    Ok(pieces)
}

pub fn total_length(segments: &[Segment]) -> Rational {
    segments.iter().map(|(a, b)| b - a).sum()
}

/// `F_m` as vertical strips `E_m × [0,1]` followed by horizontal strips `[0,1] × E_m`.
pub fn build_fm(seq: &DeltaSequence, m: u32) -> Result<RectRegion> {
    let em = build_em(seq, m)?;
    let (zero, one) = (Rational::zero(), Rational::one());
    let mut rects = Vec::with_capacity(2 * em.len());
    for (a, b) in &em {
        rects.push(Rect::from_ordered(a.clone(), b.clone(), zero.clone(), one.clone()));
    }
    for (a, b) in &em {
        rects.push(Rect::from_ordered(zero.clone(), one.clone(), a.clone(), b.clone()));
    }
    Ok(RectRegion::new(rects))
}

/// Closure of `[0,1]² \ F_m`: the rectangles `cl(J_a) × cl(J_b)` over all
/// pairs of gaps of level `<= m`, row by row from the bottom.
pub fn complement_region(seq: &DeltaSequence, m: u32) -> Result<RectRegion> {
    let gaps = gap_intervals(seq, m)?;
    let bounds: Vec<Segment> = gaps.iter().map(|g| (g.left(), g.right())).collect();
    let mut rects = Vec::with_capacity(bounds.len() * bounds.len());
    for (y0, y1) in &bounds {
        for (x0, x1) in &bounds {
            rects.push(Rect::from_ordered(x0.clone(), x1.clone(), y0.clone(), y1.clone()));
        }
    }
    Ok(RectRegion::new(rects))
}

/// `P_n^k`: a horizontal and a vertical gap strip inside the surviving cell
/// `I_n^{cell_x} × I_n^{cell_y}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cross {
    level: u32,
    index: u64,
    cell_x: u64,
    cell_y: u64,
    horizontal: Rect,
    vertical: Rect,
}

impl Cross {
    fn build(level: u32, cell_x: u64, cell_y: u64, width: &Rational) -> Result<Self> {
        let ix = cantor_interval(level, cell_x)?;
        let iy = cantor_interval(level, cell_y)?;
        let gx = GapInterval::new(level, cell_x, width.clone())?;
        let gy = GapInterval::new(level, cell_y, width.clone())?;
        let horizontal = Rect::from_ordered(ix.left().clone(), ix.right().clone(), gy.left(), gy.right());
        let vertical = Rect::from_ordered(gx.left(), gx.right(), iy.left().clone(), iy.right().clone());
        let index = (cell_y - 1) * (1u64 << level) + cell_x;
        Ok(Cross { level, index, cell_x, cell_y, horizontal, vertical })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// `k` in `1..=4^n`; cells are scanned row by row (y outer, x inner).
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn cell(&self) -> (u64, u64) {
        (self.cell_x, self.cell_y)
    }

    /// Translate of `X_n`: width `3^-n`, height `δ_n`.
    pub fn horizontal_strip(&self) -> &Rect {
        &self.horizontal
    }

    /// Translate of `Y_n`: width `δ_n`, height `3^-n`.
    pub fn vertical_strip(&self) -> &Rect {
        &self.vertical
    }

    pub fn region(&self) -> RectRegion {
        RectRegion::new(vec![self.horizontal.clone(), self.vertical.clone()])
    }

    pub fn contains_rect(&self, r: &Rect) -> bool {
        self.horizontal.contains_rect(r) || self.vertical.contains_rect(r)
    }
}

/// All crosses of levels `0..=m`, level by level.
pub fn crosses(seq: &DeltaSequence, m: u32) -> Result<Vec<Cross>> {
    seq.validate_through(m)?;
    let mut out = Vec::new();
    for n in 0..=m {
        let width = seq.delta(n).expect("validated");
        let side = 1u64 << n;
        for cy in 1..=side {
            for cx in 1..=side {
                out.push(Cross::build(n, cx, cy, &width)?);
            }
        }
    }
    Ok(out)
}

/// Position of the cross holding `cl(J_a) × cl(J_b)`: its level is the
/// shallower of the two gap levels, and the deeper gap picks the cell.
fn owning_cross(a: &GapInterval, b: &GapInterval) -> (u32, u64, u64) {
    let n = a.level().min(b.level());
    let locate = |g: &GapInterval| {
        if g.level() == n {
            g.index()
        } else {
            containing_index(n, g.center()).expect("deeper gap lies inside a surviving interval")
        }
    };
    (n, locate(a), locate(b))
}

/// Offset of the first level-`n` cross in the output of [`crosses`].
fn level_offset(n: u32) -> usize {
    // 1 + 4 + … + 4^(n-1)
    (((1u128 << (2 * n)) - 1) / 3) as usize
}

/// The crosses of [`crosses`] paired with the complement rectangles each one
/// holds. Every complement rectangle appears under exactly one cross.
pub fn complement_by_cross(seq: &DeltaSequence, m: u32) -> Result<Vec<(Cross, Vec<Rect>)>> {
    let all = crosses(seq, m)?;
    let gaps = gap_intervals(seq, m)?;
    let mut groups: Vec<(Cross, Vec<Rect>)> = all.into_iter().map(|c| (c, Vec::new())).collect();
    for b in &gaps {
        for a in &gaps {
            let (n, cx, cy) = owning_cross(a, b);
            let slot = level_offset(n) + ((cy - 1) * (1u64 << n) + cx - 1) as usize;
            let rect = Rect::from_ordered(a.left(), a.right(), b.left(), b.right());
            debug_assert!(groups[slot].0.contains_rect(&rect));
            groups[slot].1.push(rect);
        }
    }
    Ok(groups)
}
