//! Finite unions of closed axis-parallel rectangles with exact rational
//! coordinates, plus exact point-set comparison through grid refinement.

use std::collections::BTreeSet;

use num::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Closed rectangle `[x0, x1] × [y0, y1]`. Zero width or height is allowed
/// and reported by [`Rect::is_degenerate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rect {
    x0: Rational,
    x1: Rational,
    y0: Rational,
    y1: Rational,
}

impl Rect {
    pub fn new(x0: Rational, x1: Rational, y0: Rational, y1: Rational) -> Result<Self> {
        if x0 > x1 || y0 > y1 {
            return Err(Error::Domain(format!("inverted rectangle [{x0},{x1}]×[{y0},{y1}]")));
        }
        Ok(Rect { x0, x1, y0, y1 })
    }

    pub(crate) fn from_ordered(x0: Rational, x1: Rational, y0: Rational, y1: Rational) -> Self {
        debug_assert!(x0 <= x1 && y0 <= y1);
        Rect { x0, x1, y0, y1 }
    }

    /// Square with lower-left corner `(x, y)` and side `side`.
    pub fn square(x: Rational, y: Rational, side: &Rational) -> Self {
        Rect::from_ordered(x.clone(), x + side, y.clone(), y + side)
    }

    pub fn x0(&self) -> &Rational {
        &self.x0
    }
    pub fn x1(&self) -> &Rational {
        &self.x1
    }
    pub fn y0(&self) -> &Rational {
        &self.y0
    }
    pub fn y1(&self) -> &Rational {
        &self.y1
    }

    pub fn width(&self) -> Rational {
        &self.x1 - &self.x0
    }

    pub fn height(&self) -> Rational {
        &self.y1 - &self.y0
    }

    pub fn area(&self) -> Rational {
        self.width() * self.height()
    }

    pub fn is_degenerate(&self) -> bool {
        self.x0 == self.x1 || self.y0 == self.y1
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.x0 <= other.x0 && other.x1 <= self.x1 && self.y0 <= other.y0 && other.y1 <= self.y1
    }

    pub fn contains_point(&self, x: &Rational, y: &Rational) -> bool {
        &self.x0 <= x && x <= &self.x1 && &self.y0 <= y && y <= &self.y1
    }

    /// Closed intersection, if nonempty.
    pub fn intersect(&self, other: &Rect) -> Option<Rect> {
        let x0 = (&self.x0).max(&other.x0).clone();
        let x1 = (&self.x1).min(&other.x1).clone();
        let y0 = (&self.y0).max(&other.y0).clone();
        let y1 = (&self.y1).min(&other.y1).clone();
        (x0 <= x1 && y0 <= y1).then(|| Rect::from_ordered(x0, x1, y0, y1))
    }

    /// Mirror image under `(x, y) ↦ (y, x)`.
    pub fn transpose(&self) -> Rect {
        Rect::from_ordered(self.y0.clone(), self.y1.clone(), self.x0.clone(), self.x1.clone())
    }

    /// Image under `p ↦ factor · p` for `factor > 0`.
    pub fn scale(&self, factor: &Rational) -> Rect {
        debug_assert!(factor > &Rational::zero());
        Rect::from_ordered(&self.x0 * factor, &self.x1 * factor, &self.y0 * factor, &self.y1 * factor)
    }

    pub fn translate(&self, dx: &Rational, dy: &Rational) -> Rect {
        Rect::from_ordered(&self.x0 + dx, &self.x1 + dx, &self.y0 + dy, &self.y1 + dy)
    }
}

/// Finite union of closed rectangles. The list may contain overlaps; every
/// point-set query goes through grid refinement.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RectRegion {
    rects: Vec<Rect>,
}

impl RectRegion {
    pub fn new(rects: Vec<Rect>) -> Self {
        RectRegion { rects }
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn push(&mut self, r: Rect) {
        self.rects.push(r);
    }

    /// Representation-level union (concatenation).
    pub fn union(&self, other: &RectRegion) -> RectRegion {
        let mut rects = self.rects.clone();
        rects.extend(other.rects.iter().cloned());
        RectRegion { rects }
    }

    pub fn transpose(&self) -> RectRegion {
        RectRegion { rects: self.rects.iter().map(Rect::transpose).collect() }
    }

    pub fn scale(&self, factor: &Rational) -> RectRegion {
        RectRegion { rects: self.rects.iter().map(|r| r.scale(factor)).collect() }
    }

    pub fn translate(&self, dx: &Rational, dy: &Rational) -> RectRegion {
        RectRegion { rects: self.rects.iter().map(|r| r.translate(dx, dy)).collect() }
    }

    /// Sorted distinct x and y coordinates of all corners.
    fn coordinates(&self) -> (BTreeSet<Rational>, BTreeSet<Rational>) {
        let mut xs = BTreeSet::new();
        let mut ys = BTreeSet::new();
        for r in &self.rects {
            xs.insert(r.x0.clone());
            xs.insert(r.x1.clone());
            ys.insert(r.y0.clone());
            ys.insert(r.y1.clone());
        }
        (xs, ys)
    }

    fn bitmap(&self, grid: &Grid) -> Vec<bool> {
        let mut cells = vec![false; grid.cell_count()];
        for r in self.rects.iter().filter(|r| !r.is_degenerate()) {
            let (i0, i1) = (grid.x_index(&r.x0), grid.x_index(&r.x1));
            let (j0, j1) = (grid.y_index(&r.y0), grid.y_index(&r.y1));
            for j in j0..j1 {
                for i in i0..i1 {
                    cells[grid.cell(i, j)] = true;
                }
            }
        }
        cells
    }

    /// Exact area of the union (degenerate pieces contribute nothing).
    pub fn area(&self) -> Rational {
        let (xs, ys) = self.coordinates();
        let grid = Grid::new(xs, ys);
        let cells = self.bitmap(&grid);
        let mut total = Rational::zero();
        for j in 0..grid.rows() {
            let h = grid.row_height(j);
            let mut w = Rational::zero();
            for i in 0..grid.cols() {
                if cells[grid.cell(i, j)] {
                    w += grid.col_width(i);
                }
            }
            total += w * h;
        }
        total
    }

    /// Point-set containment `self ⊆ other`, decided on the common grid.
    /// Degenerate rectangles are ignored (they carry no area and lie in the
    /// closure of the nondegenerate part in every region built here).
    pub fn is_subset_of(&self, other: &RectRegion) -> bool {
        let grid = common_grid(self, other);
        let mine = self.bitmap(&grid);
        let theirs = other.bitmap(&grid);
        mine.iter().zip(&theirs).all(|(&a, &b)| !a || b)
    }

    pub fn same_point_set(&self, other: &RectRegion) -> bool {
        let grid = common_grid(self, other);
        self.bitmap(&grid) == other.bitmap(&grid)
    }

    /// Representation-independent form: the coarsest grid on which the
    /// region is a union of cells, with its occupied cells.
    pub fn canonical(&self) -> CanonicalRegion {
        let (xs, ys) = self.coordinates();
        let grid = Grid::new(xs, ys);
        let cells = self.bitmap(&grid);
        let (nx, ny) = (grid.cols(), grid.rows());
        let column = |i: usize| -> Vec<bool> { (0..ny).map(|j| cells[grid.cell(i, j)]).collect() };
        let row = |j: usize| -> Vec<bool> { (0..nx).map(|i| cells[grid.cell(i, j)]).collect() };
        // a grid line is kept iff the occupancy differs on its two sides
        let keep = |n: usize, line: &dyn Fn(usize) -> Vec<bool>| -> Vec<usize> {
            let empty = vec![false; if n == nx { ny } else { nx }];
            (0..=n)
                .filter(|&k| {
                    let before = if k == 0 { empty.clone() } else { line(k - 1) };
                    let after = if k == n { empty.clone() } else { line(k) };
                    before != after
                })
                .collect()
        };
        let kept_x = keep(nx, &column);
        let kept_y = keep(ny, &row);
        let xs: Vec<Rational> = kept_x.iter().map(|&k| grid.xs[k].clone()).collect();
        let ys: Vec<Rational> = kept_y.iter().map(|&k| grid.ys[k].clone()).collect();
        let mut occupied = BTreeSet::new();
        for (ci, w) in kept_x.windows(2).enumerate() {
            for (cj, h) in kept_y.windows(2).enumerate() {
                // coarse cell is uniform; probe its first fine cell
                if cells[grid.cell(w[0], h[0])] {
                    occupied.insert((ci, cj));
                }
            }
        }
        CanonicalRegion { xs, ys, cells: occupied }
    }

    /// Lebesgue measure of the union of the x-projections.
    pub fn x_projection_length(&self) -> Rational {
        union_length(self.rects.iter().map(|r| (r.x0.clone(), r.x1.clone())))
    }

    pub fn y_projection_length(&self) -> Rational {
        union_length(self.rects.iter().map(|r| (r.y0.clone(), r.y1.clone())))
    }
}

/// Total length of a union of closed intervals.
pub fn union_length(intervals: impl Iterator<Item = (Rational, Rational)>) -> Rational {
    let mut v: Vec<(Rational, Rational)> = intervals.collect();
    v.sort();
    let mut total = Rational::zero();
    let mut current: Option<(Rational, Rational)> = None;
    for (a, b) in v {
        current = match current {
            Some((ca, cb)) if a <= cb => Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                total += cb - ca;
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some((a, b)) = current {
        total += b - a;
    }
    total
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalRegion {
    pub xs: Vec<Rational>,
    pub ys: Vec<Rational>,
    pub cells: BTreeSet<(usize, usize)>,
}

struct Grid {
    xs: Vec<Rational>,
    ys: Vec<Rational>,
}

impl Grid {
    fn new(xs: BTreeSet<Rational>, ys: BTreeSet<Rational>) -> Self {
        Grid { xs: xs.into_iter().collect(), ys: ys.into_iter().collect() }
    }

    fn cols(&self) -> usize {
        self.xs.len().saturating_sub(1)
    }

    fn rows(&self) -> usize {
        self.ys.len().saturating_sub(1)
    }

    fn cell_count(&self) -> usize {
        self.cols() * self.rows()
    }

    fn cell(&self, i: usize, j: usize) -> usize {
        j * self.cols() + i
    }

    fn x_index(&self, x: &Rational) -> usize {
        self.xs.binary_search(x).expect("coordinate on grid")
    }

    fn y_index(&self, y: &Rational) -> usize {
        self.ys.binary_search(y).expect("coordinate on grid")
    }

    fn col_width(&self, i: usize) -> Rational {
        &self.xs[i + 1] - &self.xs[i]
    }

    fn row_height(&self, j: usize) -> Rational {
        &self.ys[j + 1] - &self.ys[j]
    }
}

fn common_grid(a: &RectRegion, b: &RectRegion) -> Grid {
    let (mut xs, mut ys) = a.coordinates();
    let (bx, by) = b.coordinates();
    xs.extend(bx);
    ys.extend(by);
    Grid::new(xs, ys)
}
