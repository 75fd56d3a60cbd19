//! Integer-grid primitives: rectangles, placements, rectilinear cell regions,
//! zone shifts and x-monotone polylines.
//!
//! All coordinates are integers. Regions are sets of unit cells, where cell
//! `(cx, cy)` denotes the closed unit square `[cx, cx+1] x [cy, cy+1]`. Every
//! zone and container arising in the solver is a union of such cells, which
//! removes degenerate-contact case analysis from the geometric operations.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unplaced rectangle: width (x-extent) and height (y-extent), both >= 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rect {
    pub w: i64,
    pub h: i64,
}

impl Rect {
    pub fn new(w: i64, h: i64) -> Self {
        assert!(w >= 1 && h >= 1, "rectangle dimensions must be positive");
        Rect { w, h }
    }

    pub fn area(&self) -> i64 {
        self.w * self.h
    }

    /// A rectangle is wide if its width is at least its height.
    pub fn is_wide(&self) -> bool {
        self.w >= self.h
    }

    pub fn doubled(&self) -> Self {
        Rect { w: 2 * self.w, h: 2 * self.h }
    }

    pub fn at(&self, x: i64, y: i64) -> PlacedRect {
        PlacedRect { rect: *self, x, y }
    }
}

/// A placed rectangle occupying `[x, x+w] x [y, y+h]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlacedRect {
    pub rect: Rect,
    pub x: i64,
    pub y: i64,
}

impl PlacedRect {
    pub fn w(&self) -> i64 {
        self.rect.w
    }

    pub fn h(&self) -> i64 {
        self.rect.h
    }

    /// Right edge x-coordinate.
    pub fn x1(&self) -> i64 {
        self.x + self.rect.w
    }

    /// Top edge y-coordinate.
    pub fn y1(&self) -> i64 {
        self.y + self.rect.h
    }

    pub fn doubled(&self) -> Self {
        PlacedRect { rect: self.rect.doubled(), x: 2 * self.x, y: 2 * self.y }
    }

    /// Iterates the unit cells covered by this placement.
    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let (x0, y0, x1, y1) = (self.x, self.y, self.x1(), self.y1());
        (x0..x1).flat_map(move |cx| (y0..y1).map(move |cy| (cx, cy)))
    }

    pub fn contains_point(&self, px: i64, py: i64) -> bool {
        px >= self.x && px <= self.x1() && py >= self.y && py <= self.y1()
    }
}

/// True iff the open interiors of the two placements intersect.
/// Edge- or corner-touching placements do not overlap.
pub fn overlaps(a: &PlacedRect, b: &PlacedRect) -> bool {
    a.x < b.x1() && b.x < a.x1() && a.y < b.y1() && b.y < a.y1()
}

/// The bounding box `[0, w] x [0, h]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BBox {
    pub w: i64,
    pub h: i64,
}

impl BBox {
    pub fn new(w: i64, h: i64) -> Self {
        assert!(w >= 1 && h >= 1, "box dimensions must be positive");
        BBox { w, h }
    }

    pub fn doubled(&self) -> Self {
        BBox { w: 2 * self.w, h: 2 * self.h }
    }

    pub fn contains(&self, q: &PlacedRect) -> bool {
        q.x >= 0 && q.y >= 0 && q.x1() <= self.w && q.y1() <= self.h
    }

    /// The box as a placed rectangle at the origin.
    pub fn as_rect(&self) -> PlacedRect {
        Rect::new(self.w, self.h).at(0, 0)
    }
}

/// Shift direction for zone expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDir {
    Negative,
    Positive,
    Both,
}

/// A rectilinear region: a set of unit cells inside a bounding box.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    cells: BTreeSet<(i64, i64)>,
    bbox: BBox,
}

impl Region {
    pub fn new(cells: BTreeSet<(i64, i64)>, bbox: BBox) -> Self {
        debug_assert!(cells
            .iter()
            .all(|&(cx, cy)| cx >= 0 && cy >= 0 && cx < bbox.w && cy < bbox.h));
        Region { cells, bbox }
    }

    pub fn empty(bbox: BBox) -> Self {
        Region { cells: BTreeSet::new(), bbox }
    }

    pub fn full(bbox: BBox) -> Self {
        let cells = (0..bbox.w)
            .flat_map(|cx| (0..bbox.h).map(move |cy| (cx, cy)))
            .collect();
        Region { cells, bbox }
    }

    /// Region covered by a placed rectangle, clipped nowhere: the caller must
    /// ensure the rectangle lies inside the bounding box.
    pub fn from_rect(q: &PlacedRect, bbox: BBox) -> Self {
        Region { cells: q.cells().collect(), bbox }
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }

    pub fn cells(&self) -> &BTreeSet<(i64, i64)> {
        &self.cells
    }

    pub fn area(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains_cell(&self, cx: i64, cy: i64) -> bool {
        self.cells.contains(&(cx, cy))
    }

    pub fn contains_rect(&self, q: &PlacedRect) -> bool {
        q.cells().all(|c| self.cells.contains(&c))
    }

    pub fn union(&self, other: &Region) -> Region {
        assert_eq!(self.bbox, other.bbox);
        Region {
            cells: self.cells.union(&other.cells).copied().collect(),
            bbox: self.bbox,
        }
    }

    /// Removes the cells of `q` from the region. Errors when `q` is not fully
    /// contained in the region.
    pub fn carve(&self, q: &PlacedRect) -> Result<Region> {
        if !self.contains_rect(q) {
            return Err(Error::Geometry(format!(
                "carve: rectangle {}x{} at ({},{}) not contained in region",
                q.w(),
                q.h(),
                q.x,
                q.y
            )));
        }
        let mut cells = self.cells.clone();
        for c in q.cells() {
            cells.remove(&c);
        }
        Ok(Region { cells, bbox: self.bbox })
    }

    /// Total number of maximal axis-parallel boundary segments over all
    /// boundary components. Counted via boundary corners: a grid vertex where
    /// exactly one or three of the four incident cells belong to the region is
    /// a single corner, and a vertex with two diagonally opposite cells is a
    /// double corner.
    pub fn boundary_complexity(&self) -> Result<usize> {
        if self.cells.is_empty() {
            return Err(Error::Geometry("boundary_complexity of empty region".into()));
        }
        let mut corners = 0usize;
        let (minx, maxx) = self
            .cells
            .iter()
            .fold((i64::MAX, i64::MIN), |(a, b), &(cx, _)| (a.min(cx), b.max(cx)));
        let (miny, maxy) = self
            .cells
            .iter()
            .fold((i64::MAX, i64::MIN), |(a, b), &(_, cy)| (a.min(cy), b.max(cy)));
        for vx in minx..=maxx + 1 {
            for vy in miny..=maxy + 1 {
                let nw = self.contains_cell(vx - 1, vy);
                let ne = self.contains_cell(vx, vy);
                let sw = self.contains_cell(vx - 1, vy - 1);
                let se = self.contains_cell(vx, vy - 1);
                let count = [nw, ne, sw, se].iter().filter(|&&b| b).count();
                match count {
                    1 | 3 => corners += 1,
                    2 if nw == se => corners += 2, // diagonal contact
                    _ => {}
                }
            }
        }
        Ok(corners)
    }

    /// Horizontally shifted zone: the union over all points of the region of
    /// their leftward / rightward `ell`-extensions, clamped to
    /// `[0, w-ell] x [0, h]` (negative), or `[0, w] x [0, h]` (positive, both).
    /// A cell belongs to the result iff its closed square lies in that point
    /// set.
    pub fn shift_zone(&self, ell: i64, dir: ShiftDir) -> Result<Region> {
        if ell < 1 {
            return Err(Error::Geometry(format!("shift_zone: ell = {ell} must be >= 1")));
        }
        let clamp_hi = match dir {
            ShiftDir::Negative => self.bbox.w - ell,
            ShiftDir::Positive | ShiftDir::Both => self.bbox.w,
        };
        let mut cells = BTreeSet::new();
        let rows: BTreeSet<i64> = self.cells.iter().map(|&(_, cy)| cy).collect();
        for cy in rows {
            // maximal x-intervals of cells in this row
            let xs: Vec<i64> = self
                .cells
                .iter()
                .filter(|&&(_, y)| y == cy)
                .map(|&(cx, _)| cx)
                .collect();
            let mut i = 0;
            while i < xs.len() {
                let start = xs[i];
                let mut end = xs[i];
                while i + 1 < xs.len() && xs[i + 1] == end + 1 {
                    i += 1;
                    end = xs[i];
                }
                i += 1;
                // the interval's point set is [start, end+1]
                let (mut lo, mut hi) = (start, end + 1);
                match dir {
                    ShiftDir::Negative => lo -= ell,
                    ShiftDir::Positive => hi += ell,
                    ShiftDir::Both => {
                        lo -= ell;
                        hi += ell;
                    }
                }
                lo = lo.max(0);
                hi = hi.min(clamp_hi);
                for cx in lo..hi {
                    cells.insert((cx, cy));
                }
            }
        }
        Ok(Region { cells, bbox: self.bbox })
    }
}

/// An x-monotone axis-parallel polyline spanning a box from its left side to
/// its right side, stored as canonical breakpoints.
///
/// Consecutive breakpoints differ in exactly one coordinate. Canonical form
/// has no zero-length segments and no two consecutive segments in the same
/// direction; vertical segments may reverse (a dip or spike), which middle
/// polylines of visibility paths require.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Polyline {
    points: Vec<(i64, i64)>,
}

impl Polyline {
    /// Builds a polyline from raw breakpoints, canonicalizing along the way.
    /// The chain must start at x = 0, end at x = `span`, and be x-monotone.
    pub fn new(raw: Vec<(i64, i64)>, span: i64) -> Result<Polyline> {
        if raw.len() < 2 {
            return Err(Error::Geometry("polyline needs at least two breakpoints".into()));
        }
        if raw[0].0 != 0 || raw[raw.len() - 1].0 != span {
            return Err(Error::Geometry(format!(
                "polyline must span x = 0..{span}, got {:?}..{:?}",
                raw[0],
                raw[raw.len() - 1]
            )));
        }
        let mut points: Vec<(i64, i64)> = Vec::with_capacity(raw.len());
        points.push(raw[0]);
        for &p in &raw[1..] {
            let last = *points.last().unwrap();
            if p == last {
                continue; // zero-length segment
            }
            if p.0 != last.0 && p.1 != last.1 {
                return Err(Error::Geometry(format!(
                    "polyline breakpoints {last:?} -> {p:?} differ in both coordinates"
                )));
            }
            if p.0 < last.0 {
                return Err(Error::Geometry("polyline not x-monotone".into()));
            }
            // merge with previous segment when collinear and same direction
            if points.len() >= 2 {
                let prev = points[points.len() - 2];
                let same_dir = if p.0 == last.0 && prev.0 == last.0 {
                    (p.1 - last.1).signum() == (last.1 - prev.1).signum()
                } else {
                    p.1 == last.1 && prev.1 == last.1
                };
                if same_dir {
                    let n = points.len();
                    points[n - 1] = p;
                    continue;
                }
            }
            points.push(p);
        }
        if points.len() < 2 {
            return Err(Error::Geometry("polyline degenerates to a point".into()));
        }
        Ok(Polyline { points })
    }

    /// A full-width horizontal line at height `y`.
    pub fn horizontal(y: i64, span: i64) -> Polyline {
        Polyline { points: vec![(0, y), (span, y)] }
    }

    pub fn points(&self) -> &[(i64, i64)] {
        &self.points
    }

    pub fn span(&self) -> i64 {
        self.points[self.points.len() - 1].0
    }

    /// Number of segments.
    pub fn complexity(&self) -> usize {
        self.points.len() - 1
    }

    pub fn doubled(&self) -> Polyline {
        Polyline { points: self.points.iter().map(|&(x, y)| (2 * x, 2 * y)).collect() }
    }

    /// The set of y-values of the polyline at integer `x`, as `(min, max)`.
    pub fn y_range_at(&self, x: i64) -> (i64, i64) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for seg in self.points.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            if a.1 == b.1 {
                // horizontal
                if a.0 <= x && x <= b.0 {
                    lo = lo.min(a.1);
                    hi = hi.max(a.1);
                }
            } else if a.0 == x {
                lo = lo.min(a.1.min(b.1));
                hi = hi.max(a.1.max(b.1));
            }
        }
        debug_assert!(lo <= hi, "polyline has no point at x = {x}");
        (lo, hi)
    }

    /// The y-level of the horizontal segment covering the open interval
    /// `(cx, cx+1)`. Exactly one such segment exists for `0 <= cx < span`.
    pub fn interior_y(&self, cx: i64) -> i64 {
        for seg in self.points.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            if a.1 == b.1 && a.0 <= cx && b.0 >= cx + 1 {
                return a.1;
            }
        }
        unreachable!("polyline has no horizontal segment over column {cx}")
    }

    /// Max of the lower envelope over the closed column `[cx, cx+1]`.
    fn column_min_peak(&self, cx: i64) -> i64 {
        self.y_range_at(cx)
            .0
            .max(self.y_range_at(cx + 1).0)
            .max(self.interior_y(cx))
    }

    /// Min of the upper envelope over the closed column `[cx, cx+1]`.
    fn column_max_dip(&self, cx: i64) -> i64 {
        self.y_range_at(cx)
            .1
            .min(self.y_range_at(cx + 1).1)
            .min(self.interior_y(cx))
    }

    /// True iff `p` intersects the open interior of `q`.
    pub fn crosses(&self, q: &PlacedRect) -> bool {
        for seg in self.points.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            if a.1 == b.1 {
                // horizontal at y = a.1 over [a.0, b.0]
                if a.1 > q.y && a.1 < q.y1() && b.0 > q.x && a.0 < q.x1() {
                    return true;
                }
            } else {
                let (ylo, yhi) = (a.1.min(b.1), a.1.max(b.1));
                if a.0 > q.x && a.0 < q.x1() && yhi > q.y && ylo < q.y1() {
                    return true;
                }
            }
        }
        false
    }
}

/// True iff every point of `low` lies weakly below every point of `high`
/// sharing the same x-coordinate.
pub fn polyline_below(low: &Polyline, high: &Polyline) -> bool {
    debug_assert_eq!(low.span(), high.span());
    let span = low.span();
    for x in 0..=span {
        if low.y_range_at(x).1 > high.y_range_at(x).0 {
            return false;
        }
    }
    for cx in 0..span {
        if low.interior_y(cx) > high.interior_y(cx) {
            return false;
        }
    }
    true
}

/// The region of cells lying on or above `low` and on or below `high`.
pub fn container_between(low: &Polyline, high: &Polyline, bbox: BBox) -> Result<Region> {
    if !polyline_below(low, high) {
        return Err(Error::Geometry("container_between: polylines not ordered".into()));
    }
    let mut cells = BTreeSet::new();
    for cx in 0..bbox.w {
        let floor = low.column_min_peak(cx).max(0);
        let ceil = high.column_max_dip(cx).min(bbox.h);
        for cy in floor..ceil.max(floor) {
            if cy + 1 <= ceil {
                cells.insert((cx, cy));
            }
        }
    }
    Ok(Region { cells, bbox })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(w: i64, h: i64, x: i64, y: i64) -> PlacedRect {
        Rect::new(w, h).at(x, y)
    }

    #[test]
    fn overlap_edge_touching_is_disjoint() {
        assert!(!overlaps(&r(2, 1, 0, 0), &r(2, 1, 2, 0)));
        assert!(overlaps(&r(2, 2, 0, 0), &r(2, 2, 1, 1)));
        let q = r(3, 2, 1, 1);
        assert!(overlaps(&q, &q));
    }

    #[test]
    fn carve_examples() {
        let bbox = BBox::new(4, 4);
        let full = Region::full(bbox);
        let rest = full.carve(&r(2, 2, 0, 0)).unwrap();
        assert_eq!(rest.area(), 12);

        let small = Region::full(BBox::new(2, 2));
        assert!(small.carve(&r(2, 2, 0, 0)).unwrap().is_empty());

        let strip = Region::full(BBox::new(3, 1));
        let two = strip.carve(&r(1, 1, 1, 0)).unwrap();
        assert_eq!(two.area(), 2);
        assert!(two.contains_cell(0, 0) && two.contains_cell(2, 0));

        assert!(full.carve(&r(5, 1, 0, 0)).is_err());
    }

    #[test]
    fn boundary_complexity_examples() {
        let full = Region::full(BBox::new(4, 4));
        assert_eq!(full.boundary_complexity().unwrap(), 4);

        // L-shape: 4x4 minus the 2x2 top-right corner
        let l = full.carve(&r(2, 2, 2, 2)).unwrap();
        assert_eq!(l.boundary_complexity().unwrap(), 6);

        let mut cells = BTreeSet::new();
        cells.insert((0, 0));
        cells.insert((2, 2));
        let two = Region::new(cells, BBox::new(4, 4));
        assert_eq!(two.boundary_complexity().unwrap(), 8);

        assert!(Region::empty(BBox::new(2, 2)).boundary_complexity().is_err());
    }

    #[test]
    fn carve_complexity_bound() {
        // complexity grows by at most 6 per carve
        let full = Region::full(BBox::new(5, 5));
        let m = full.boundary_complexity().unwrap();
        let carved = full.carve(&r(2, 2, 1, 1)).unwrap();
        assert!(carved.boundary_complexity().unwrap() <= m + 6);
    }

    #[test]
    fn shift_zone_examples() {
        let bbox = BBox::new(10, 4);
        let z = Region::from_rect(&r(4, 2, 4, 0), bbox);
        let neg = z.shift_zone(2, ShiftDir::Negative).unwrap();
        assert_eq!(neg, Region::from_rect(&r(6, 2, 2, 0), bbox));
        let pos = z.shift_zone(2, ShiftDir::Positive).unwrap();
        assert_eq!(pos, Region::from_rect(&r(6, 2, 4, 0), bbox));

        // left clamp absorbs the shift
        let bbox = BBox::new(4, 2);
        let z = Region::from_rect(&r(2, 1, 0, 0), bbox);
        let neg = z.shift_zone(1, ShiftDir::Negative).unwrap();
        assert_eq!(neg, Region::from_rect(&r(2, 1, 0, 0), bbox));

        assert!(z.shift_zone(0, ShiftDir::Negative).is_err());
    }

    #[test]
    fn shift_zone_composition() {
        let bbox = BBox::new(12, 5);
        let z = Region::from_rect(&r(5, 2, 4, 1), bbox)
            .union(&Region::from_rect(&r(3, 1, 6, 3), bbox));
        let both = z.shift_zone(2, ShiftDir::Both).unwrap();
        let neg_then_pos = z
            .shift_zone(2, ShiftDir::Negative)
            .unwrap()
            .shift_zone(2, ShiftDir::Positive)
            .unwrap();
        assert_eq!(both, neg_then_pos);
    }

    #[test]
    fn polyline_canonicalization() {
        // collinear same-direction segments merge, zero-length dropped
        let p = Polyline::new(vec![(0, 1), (2, 1), (2, 1), (4, 1)], 4).unwrap();
        assert_eq!(p.complexity(), 1);
        // a dip stays two segments
        let p = Polyline::new(vec![(0, 2), (2, 2), (2, 0), (2, 2), (4, 2)], 4).unwrap();
        assert_eq!(p.complexity(), 4);
        assert!(Polyline::new(vec![(0, 0), (1, 1)], 1).is_err());
        assert!(Polyline::new(vec![(1, 0), (4, 0)], 4).is_err());
    }

    #[test]
    fn polyline_below_examples() {
        let p1 = Polyline::horizontal(1, 4);
        let p2 = Polyline::horizontal(2, 4);
        assert!(polyline_below(&p1, &p2));
        assert!(polyline_below(&p2, &p2));
        assert!(!polyline_below(&p2, &p1));

        // crossing staircases
        let a = Polyline::new(vec![(0, 0), (3, 0), (3, 3), (6, 3)], 6).unwrap();
        let b = Polyline::new(vec![(0, 3), (3, 3), (3, 0), (6, 0)], 6).unwrap();
        assert!(!polyline_below(&a, &b));
        assert!(!polyline_below(&b, &a));
    }

    #[test]
    fn container_between_examples() {
        let bbox = BBox::new(3, 2);
        let bottom = Polyline::horizontal(0, 3);
        let top = Polyline::horizontal(2, 3);
        assert_eq!(container_between(&bottom, &top, bbox).unwrap(), Region::full(bbox));

        let line = Polyline::horizontal(1, 3);
        assert!(container_between(&line, &line, bbox).unwrap().is_empty());

        let bbox = BBox::new(4, 2);
        let stair = Polyline::new(vec![(0, 1), (2, 1), (2, 2), (4, 2)], 4).unwrap();
        let region = container_between(&Polyline::horizontal(0, 4), &stair, bbox).unwrap();
        assert_eq!(region.area(), 6);

        assert!(container_between(&stair, &Polyline::horizontal(0, 4), bbox).is_err());
    }

    #[test]
    fn container_complexity_bound() {
        let bbox = BBox::new(4, 3);
        let low = Polyline::new(vec![(0, 1), (1, 1), (1, 0), (4, 0)], 4).unwrap();
        let high = Polyline::new(vec![(0, 2), (2, 2), (2, 3), (4, 3)], 4).unwrap();
        let region = container_between(&low, &high, bbox).unwrap();
        assert!(
            region.boundary_complexity().unwrap() <= low.complexity() + high.complexity() + 2
        );
    }

    #[test]
    fn polyline_crosses_examples() {
        let line = Polyline::horizontal(1, 4);
        assert!(!line.crosses(&r(2, 1, 0, 0)));
        assert!(line.crosses(&r(2, 2, 0, 0)));

        // staircase along the left edge of the rectangle, then above it
        let q = r(2, 2, 1, 0);
        let stair = Polyline::new(vec![(0, 0), (1, 0), (1, 2), (4, 2)], 4).unwrap();
        assert!(!stair.crosses(&q));
    }

    #[test]
    fn y_range_and_interior() {
        let p = Polyline::new(vec![(0, 1), (2, 1), (2, 3), (4, 3)], 4).unwrap();
        assert_eq!(p.y_range_at(0), (1, 1));
        assert_eq!(p.y_range_at(2), (1, 3));
        assert_eq!(p.interior_y(0), 1);
        assert_eq!(p.interior_y(2), 3);
    }
}
