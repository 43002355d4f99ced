//! Optimal periodic grid colorings from two generator vectors.
//!
//! A pair of integer vectors `v1`, `v2` spans a lattice `L`. Coloring every
//! grid point by its coset in `Z² / L` uses exactly `|det(v1, v2)|` colors
//! and is a valid h-hop coloring iff no non-zero lattice vector is within
//! `h` hops of the origin.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{GridSpec, Range};
use crate::validity::{Color, Coloring};

pub type Point = (i64, i64);

/// Slack for comparisons against the floating-point bound formulas.
pub const BOUND_EPS: f64 = 1e-9;

fn norm2((x, y): Point) -> i64 {
    x * x + y * y
}

fn cross((x1, y1): Point, (x2, y2): Point) -> i64 {
    x1 * y2 - x2 * y1
}

/// Hop counts from the origin over the square window `[-radius, radius]²`
/// of the infinite unit-disk grid.
#[derive(Debug, Clone)]
pub struct HopField {
    radius: i64,
    dist: Vec<Option<u32>>,
}

impl HopField {
    pub fn new(range: Range, radius: i64) -> Self {
        let side = (2 * radius + 1) as usize;
        let idx = |(x, y): Point| ((y + radius) as usize) * side + (x + radius) as usize;
        let offsets = range.offsets();
        let mut dist = vec![None; side * side];
        dist[idx((0, 0))] = Some(0);
        let mut queue = VecDeque::from([(0i64, 0i64)]);
        while let Some(p) = queue.pop_front() {
            let d = dist[idx(p)].unwrap_or(0);
            for &(dx, dy) in &offsets {
                let q = (p.0 + dx, p.1 + dy);
                if q.0.abs() <= radius && q.1.abs() <= radius && dist[idx(q)].is_none() {
                    dist[idx(q)] = Some(d + 1);
                    queue.push_back(q);
                }
            }
        }
        HopField { radius, dist }
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    /// Hop count within the window. Exact for every point whose true hop
    /// count `d` satisfies `d * R <= radius`.
    pub fn hops(&self, p: Point) -> Result<u32> {
        if p.0.abs() > self.radius || p.1.abs() > self.radius {
            return Err(Error::OutsideWindow(p.0, p.1));
        }
        let side = (2 * self.radius + 1) as usize;
        let i = ((p.1 + self.radius) as usize) * side + (p.0 + self.radius) as usize;
        Ok(self.dist[i].expect("window is connected"))
    }

    fn within(&self, p: Point, h: u32) -> bool {
        self.hops(p).is_ok_and(|d| d <= h)
    }
}

/// Minimum hop count from `(0, 0)` to `p` on the infinite grid.
pub fn grid_hop_distance(range: Range, p: Point) -> u32 {
    // Axis-aligned steps of length `reach` give an upper bound on the hop
    // count; a path that short never leaves the disk of radius `ub * R`.
    let reach = range.reach();
    let ub = (p.0.abs() + reach - 1) / reach + (p.1.abs() + reach - 1) / reach;
    let radius = ub * (reach + 1) + 1;
    HopField::new(range, radius).hops(p).expect("window sized to contain p")
}

/// Generator vectors for an h-hop periodic coloring at a given range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VectorPair {
    pub v1: Point,
    pub v2: Point,
    pub det: u64,
    pub range: Range,
    pub hops: u32,
}

impl VectorPair {
    pub fn new(v1: Point, v2: Point, range: Range, hops: u32) -> Result<Self> {
        let det = cross(v1, v2).unsigned_abs();
        if det == 0 {
            return Err(Error::InvalidArgument(format!("vectors {v1:?} and {v2:?} are dependent")));
        }
        Ok(VectorPair { v1, v2, det, range, hops })
    }

    /// `true` iff no non-zero lattice point is within `hops` hops of the
    /// origin, which is exactly when the induced periodic coloring is valid.
    pub fn is_valid(&self) -> bool {
        let lim = i64::from(self.hops) * i64::from(self.range.tenths()) / 10;
        lattice_clear(&HopField::new(self.range, lim), self.v1, self.v2, self.hops)
    }
}

/// Checks every lattice point in the field's window against the h-hop
/// neighborhood. Points within `h` hops lie within radius `hR`, so a window
/// of radius `floor(hR)` sees all of them.
fn lattice_clear(field: &HopField, v1: Point, v2: Point, h: u32) -> bool {
    let det = cross(v1, v2).unsigned_abs() as f64;
    let lim = field.radius() as f64 * std::f64::consts::SQRT_2;
    // p = a*v1 + b*v2 with |p| <= lim forces |a| <= lim*|v2|/det, and
    // symmetrically for b.
    let a_max = (lim * (norm2(v2) as f64).sqrt() / det) as i64 + 1;
    let b_max = (lim * (norm2(v1) as f64).sqrt() / det) as i64 + 1;
    for a in -a_max..=a_max {
        for b in -b_max..=b_max {
            if (a, b) == (0, 0) {
                continue;
            }
            let p = (a * v1.0 + b * v2.0, a * v1.1 + b * v2.1);
            if field.within(p, h) {
                return false;
            }
        }
    }
    true
}

fn check_hops(h: u32) -> Result<()> {
    if h == 0 {
        return Err(Error::InvalidHops { min: 1, got: 0 });
    }
    Ok(())
}

/// Pair minimizing the determinant, ties broken by `(det, x1, y1, x2, y2)`.
///
/// Every lattice has a Lagrange-reduced basis (`|v1| <= |v2| <= |v2 ± v1|`)
/// with both vectors in the upper half-plane, so only reduced pairs are
/// searched. `(a, 0), (0, a)` with `a = floor(hR) + 1` is always feasible,
/// which bounds the optimum by `a²`; a reduced basis has
/// `det >= (√3/2)|v1||v2|`, and `|v1|` is at least the norm `m0` of the
/// nearest point beyond `h` hops, so `|v2| <= 2a²/(√3 m0)`.
pub fn solve_vectors(range: Range, h: u32) -> Result<VectorPair> {
    check_hops(h)?;
    let lim = i64::from(h) * i64::from(range.tenths()) / 10;
    let field = HopField::new(range, lim);
    let a = lim + 1;
    let det_ub = a * a;

    let far = |p: Point| p != (0, 0) && !field.within(p, h);
    let m0 = (-a..=a)
        .flat_map(|x| (0..=a).map(move |y| (x, y)))
        .filter(|&p| far(p))
        .map(norm2)
        .min()
        .expect("(a, 0) is beyond h hops");
    let rw = 2.0 * det_ub as f64 / (3f64.sqrt() * (m0 as f64).sqrt());
    let rw_int = rw.ceil() as i64;

    let mut cands: Vec<Point> = (-rw_int..=rw_int)
        .flat_map(|x| (0..=rw_int).map(move |y| (x, y)))
        .filter(|&p| far(p) && norm2(p) as f64 <= rw * rw + BOUND_EPS)
        .collect();
    cands.sort_by_key(|&p| (norm2(p), p));

    let mut best: Option<(u64, Point, Point)> = None;
    for (i, &v1) in cands.iter().enumerate() {
        for &v2 in &cands[i + 1..] {
            let det = cross(v1, v2).unsigned_abs();
            if det == 0 || best.is_some_and(|b| det > b.0) {
                continue;
            }
            let n2 = norm2(v2);
            let reduced = norm2((v2.0 - v1.0, v2.1 - v1.1)) >= n2 && norm2((v2.0 + v1.0, v2.1 + v1.1)) >= n2;
            if !reduced {
                continue;
            }
            let key = (det, v1, v2);
            if best.is_some_and(|b| key >= b) || !lattice_clear(&field, v1, v2, h) {
                continue;
            }
            best = Some(key);
        }
    }
    let (_, v1, v2) = best.ok_or_else(|| Error::NoFeasiblePair { range: range.to_string(), hops: h })?;
    VectorPair::new(v1, v2, range, h)
}

/// Search restricted to endpoints in the annulus `h(R - √2) < |p| <= hR`.
/// Not complete: for some ranges no optimal pair has both endpoints there.
pub fn solve_vectors_annulus(range: Range, h: u32) -> Result<Option<VectorPair>> {
    check_hops(h)?;
    let lim = i64::from(h) * i64::from(range.tenths()) / 10;
    let field = HopField::new(range, lim);
    let hr = f64::from(h) * range.as_f64();
    let inner = (f64::from(h) * (range.as_f64() - std::f64::consts::SQRT_2)).max(0.0);
    let outer2 = i64::from(h * h) * i64::from(range.tenths().pow(2));

    let mut cands: Vec<Point> = (-lim..=lim)
        .flat_map(|x| (0..=lim).map(move |y| (x, y)))
        .filter(|&p| {
            let n = norm2(p);
            p != (0, 0) && 100 * n <= outer2 && n as f64 > inner * inner && !field.within(p, h)
        })
        .collect();
    debug_assert!(cands.iter().all(|&p| (norm2(p) as f64).sqrt() <= hr + BOUND_EPS));
    cands.sort_by_key(|&p| (norm2(p), p));

    let mut best: Option<(u64, Point, Point)> = None;
    for (i, &v1) in cands.iter().enumerate() {
        for &v2 in &cands[i + 1..] {
            let det = cross(v1, v2).unsigned_abs();
            if det == 0 {
                continue;
            }
            let key = (det, v1, v2);
            if best.is_some_and(|b| key >= b) || !lattice_clear(&field, v1, v2, h) {
                continue;
            }
            best = Some(key);
        }
    }
    best.map(|(_, v1, v2)| VectorPair::new(v1, v2, range, h)).transpose()
}

/// Residues `(c1, c2)` identifying the coset of `p` modulo the lattice.
///
/// Uses signed cross products reduced into `[0, det)`. Taking absolute
/// values first would merge cosets `p` and `-p` for points on opposite
/// sides of a generator.
pub fn couple_of(p: Point, pair: &VectorPair) -> (u64, u64) {
    let d = pair.det as i64;
    let c1 = cross(p, pair.v1).rem_euclid(d);
    let c2 = cross(p, pair.v2).rem_euclid(d);
    (c1 as u64, c2 as u64)
}

/// Bijection between the `det` couples of a pair and colors `0..det`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternColoring {
    pub pair: VectorPair,
    pub color_of_couple: BTreeMap<(u64, u64), Color>,
}

impl PatternColoring {
    /// Numbers couples in first-occurrence order of a row-major scan over
    /// the half-open parallelogram spanned by the pair.
    pub fn canonical(pair: VectorPair) -> Self {
        let mut color_of_couple = BTreeMap::new();
        for p in parallelogram(&pair) {
            let next = color_of_couple.len() as Color;
            color_of_couple.entry(couple_of(p, &pair)).or_insert(next);
        }
        PatternColoring { pair, color_of_couple }
    }

    /// Pattern from explicit cells, which must hit every couple exactly
    /// once with distinct colors.
    pub fn from_cells(pair: VectorPair, cells: &[(Point, Color)]) -> Result<Self> {
        let mut color_of_couple = BTreeMap::new();
        for &(p, c) in cells {
            if color_of_couple.insert(couple_of(p, &pair), c).is_some() {
                return Err(Error::InvalidArgument(format!("cell {p:?} repeats a couple")));
            }
        }
        let mut colors: Vec<Color> = color_of_couple.values().copied().collect();
        colors.sort_unstable();
        colors.dedup();
        if color_of_couple.len() as u64 != pair.det || colors.len() as u64 != pair.det {
            return Err(Error::InvalidArgument(format!(
                "{} cells with {} colors do not cover {} couples",
                cells.len(),
                colors.len(),
                pair.det
            )));
        }
        Ok(PatternColoring { pair, color_of_couple })
    }

    pub fn color_at(&self, p: Point) -> Color {
        self.color_of_couple[&couple_of(p, &self.pair)]
    }

    pub fn tile(&self, spec: &GridSpec) -> Result<Coloring> {
        if spec.range != self.pair.range {
            return Err(Error::RangeMismatch { pair: self.pair.range.to_string(), grid: spec.range.to_string() });
        }
        let mut c = Coloring::new();
        for y in 0..i64::from(spec.height) {
            for x in 0..i64::from(spec.width) {
                c.insert(spec.id_of(x, y), self.color_at((x, y)));
            }
        }
        Ok(c)
    }
}

/// Integer points `s*v1 + t*v2` with `s, t` in `[0, 1)`, row-major.
fn parallelogram(pair: &VectorPair) -> Vec<Point> {
    let (v1, v2) = (pair.v1, pair.v2);
    let corners = [(0, 0), v1, v2, (v1.0 + v2.0, v1.1 + v2.1)];
    let (x0, x1) = (corners.iter().map(|c| c.0).min().unwrap_or(0), corners.iter().map(|c| c.0).max().unwrap_or(0));
    let (y0, y1) = (corners.iter().map(|c| c.1).min().unwrap_or(0), corners.iter().map(|c| c.1).max().unwrap_or(0));
    let d = cross(v1, v2);
    let sign = d.signum();
    let inside = |n: i64| (0..d.abs()).contains(&(n * sign));
    (y0..=y1)
        .flat_map(|y| (x0..=x1).map(move |x| (x, y)))
        .filter(|&p| inside(cross(p, v2)) && inside(cross(v1, p)))
        .collect()
}

/// Tiles the grid with the canonical pattern of `pair`.
pub fn tile_grid(spec: &GridSpec, pair: &VectorPair) -> Result<Coloring> {
    PatternColoring::canonical(*pair).tile(spec)
}

/// The closed-form color-count bounds next to an achieved count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub lower: f64,
    pub upper: f64,
    pub achieved: u64,
}

impl BoundsReport {
    pub fn within(&self) -> bool {
        self.lower <= self.achieved as f64 + BOUND_EPS && self.achieved as f64 <= self.upper + BOUND_EPS
    }
}

/// Lower bound `(√3/2) h² (R - √2)²`, zero when `R < √2`, and upper bound
/// `(√3/2) h² R² + 2hR + (2 + hR)√2`.
pub fn bounds(range: Range, h: u32, achieved: u64) -> BoundsReport {
    let r = range.as_f64();
    let h = f64::from(h);
    let k = 3f64.sqrt() / 2.0;
    let gap = (r - std::f64::consts::SQRT_2).max(0.0);
    BoundsReport {
        lower: k * h * h * gap * gap,
        upper: k * h * h * r * r + 2.0 * h * r + (2.0 + h * r) * std::f64::consts::SQRT_2,
        achieved,
    }
}

/// Center row `y`, leftmost `x`, then 1-based labels.
type Rows = &'static [(i64, i64, &'static [Color])];

const R1_BASIC: Rows = &[(1, -1, &[7, 2, 6, 4]), (0, -1, &[3, 1, 5, 8])];

const R15_BASIC: Rows =
    &[(2, -2, &[10, 11, 12, 13]), (1, -2, &[14, 5, 4, 3]), (0, -2, &[15, 6, 1, 2]), (-1, -2, &[16, 7, 8, 9])];

const R2_BASIC: Rows = &[
    (3, 0, &[20]),
    (2, -1, &[21, 10, 19]),
    (1, -2, &[22, 11, 3, 9, 18]),
    (0, -3, &[23, 12, 4, 1, 2, 8, 17]),
    (-1, -2, &[24, 13, 5, 7, 16]),
    (-2, -1, &[25, 6, 15]),
    (-3, 0, &[14]),
];

fn cells(rows: Rows) -> Vec<(Point, Color)> {
    rows.iter()
        .flat_map(|&(y, x0, labels)| labels.iter().enumerate().map(move |(i, &l)| ((x0 + i as i64, y), l - 1)))
        .collect()
}

/// The three proven optimal 3-hop patterns for `R = 1, 1.5, 2`, with the
/// node colored `1` at the origin and `y` growing upwards.
pub fn fixture_patterns() -> Vec<(Range, PatternColoring)> {
    let mk = |tenths: u32, v1: Point, v2: Point, rows: Rows| {
        let range = Range::from_tenths(tenths).expect("fixture range");
        let pair = VectorPair::new(v1, v2, range, 3).expect("fixture vectors");
        (range, PatternColoring::from_cells(pair, &cells(rows)).expect("fixture covers its period"))
    };
    vec![mk(10, (2, 2), (-2, 2), R1_BASIC), mk(15, (4, 0), (0, 4), R15_BASIC), mk(20, (4, 3), (-3, 4), R2_BASIC)]
}
