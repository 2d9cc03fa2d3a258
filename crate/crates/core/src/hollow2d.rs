//! Exhaustive check that hollow polygons with vertices on the (1/3)-grid of
//! a box have lattice width below two. Coordinates are integers counting
//! thirds throughout.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

pub type Point = (i64, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum HollowError {
    #[error("direction must be nonzero")]
    ZeroDirection,
    #[error("matrix has determinant {0}, expected ±1")]
    NotUnimodular(i64),
    #[error("box has {0} grid points, at most 128 are supported")]
    BoxTooLarge(usize),
    #[error("polygon has no vertices")]
    EmptyPolygon,
}

/// Convex polygon with vertices in counterclockwise order, coordinates in
/// thirds. Points and segments are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ThirdIntegralPolygon {
    vertices: Vec<Point>,
}

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain; collinear points are dropped.
fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    fn chain<'a>(hull: &mut Vec<Point>, pts: impl Iterator<Item = &'a Point>) {
        let start = hull.len();
        for &p in pts {
            while hull.len() >= start + 2
                && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    chain(&mut hull, pts.iter());
    chain(&mut hull, pts.iter().rev());
    hull
}

impl ThirdIntegralPolygon {
    /// Convex hull of the given points (in thirds).
    pub fn hull_of(points: &[Point]) -> Result<Self, HollowError> {
        if points.is_empty() {
            return Err(HollowError::EmptyPolygon);
        }
        Ok(ThirdIntegralPolygon {
            vertices: convex_hull(points),
        })
    }

    /// From rational coordinates, each a multiple of 1/3.
    pub fn from_rationals(points: &[(Ratio<i64>, Ratio<i64>)]) -> Option<Self> {
        let thirds = |r: &Ratio<i64>| {
            let t = r * 3;
            t.is_integer().then(|| t.to_integer())
        };
        let pts: Option<Vec<Point>> = points
            .iter()
            .map(|(x, y)| Some((thirds(x)?, thirds(y)?)))
            .collect();
        Self::hull_of(&pts?).ok()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Closed containment of a point given in thirds.
    pub fn contains(&self, p: Point) -> bool {
        let v = &self.vertices;
        match v.len() {
            1 => v[0] == p,
            2 => {
                cross(v[0], v[1], p) == 0
                    && p.0 >= v[0].0.min(v[1].0)
                    && p.0 <= v[0].0.max(v[1].0)
                    && p.1 >= v[0].1.min(v[1].1)
                    && p.1 <= v[0].1.max(v[1].1)
            }
            n => (0..n).all(|i| cross(v[i], v[(i + 1) % n], p) >= 0),
        }
    }

    fn bounding_box(&self) -> (Point, Point) {
        let xs = self.vertices.iter().map(|p| p.0);
        let ys = self.vertices.iter().map(|p| p.1);
        (
            (xs.clone().min().unwrap(), ys.clone().min().unwrap()),
            (xs.max().unwrap(), ys.max().unwrap()),
        )
    }
}

impl fmt::Display for ThirdIntegralPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vertices
            .iter()
            .map(|&(x, y)| format!("({}, {})", Ratio::new(x, 3), Ratio::new(y, 3)))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

fn support_spread(p: &ThirdIntegralPolygon, z: Point) -> i64 {
    let vals = p.vertices.iter().map(|&(x, y)| z.0 * x + z.1 * y);
    vals.clone().max().unwrap() - vals.min().unwrap()
}

/// `max ⟨z, a⟩ - min ⟨z, a⟩` over the polygon.
pub fn width_along(p: &ThirdIntegralPolygon, z: Point) -> Result<Ratio<i64>, HollowError> {
    if z == (0, 0) {
        return Err(HollowError::ZeroDirection);
    }
    Ok(Ratio::new(support_spread(p, z), 3))
}

pub fn contains_integer_point(p: &ThirdIntegralPolygon) -> bool {
    let ((x0, y0), (x1, y1)) = p.bounding_box();
    let (ix0, ix1) = (
        x0.div_euclid(3) + i64::from(x0.rem_euclid(3) != 0),
        x1.div_euclid(3),
    );
    let (iy0, iy1) = (
        y0.div_euclid(3) + i64::from(y0.rem_euclid(3) != 0),
        y1.div_euclid(3),
    );
    (ix0..=ix1).any(|i| (iy0..=iy1).any(|j| p.contains((3 * i, 3 * j))))
}

/// The image of every vertex under `Aᵀ`.
pub fn unimodular_image(
    p: &ThirdIntegralPolygon,
    a: [[i64; 2]; 2],
) -> Result<ThirdIntegralPolygon, HollowError> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.abs() != 1 {
        return Err(HollowError::NotUnimodular(det));
    }
    let img: Vec<Point> = p
        .vertices
        .iter()
        .map(|&(x, y)| (a[0][0] * x + a[1][0] * y, a[0][1] * x + a[1][1] * y))
        .collect();
    ThirdIntegralPolygon::hull_of(&img)
}

/// Primitive directions up to sign with `max(|z1|, |z2|) <= bound`, by
/// max-norm, then by `(z2, z1)`. The representative has `z2 > 0`, or
/// `z2 = 0` and `z1 > 0`.
pub fn directions(bound: i64) -> Vec<Point> {
    let mut out = Vec::new();
    for k in 1..=bound {
        let mut level: Vec<Point> = Vec::new();
        for z2 in 0..=k {
            for z1 in -k..=k {
                if z1.abs().max(z2) != k || (z2 == 0 && z1 <= 0) {
                    continue;
                }
                if num_integer::gcd(z1, z2) == 1 {
                    level.push((z1, z2));
                }
            }
        }
        level.sort_unstable_by_key(|&(z1, z2)| (z2, z1));
        out.extend(level);
    }
    out
}

/// The first direction (in [`directions`] order) of width below `threshold`.
pub fn narrow_direction(
    p: &ThirdIntegralPolygon,
    threshold: Ratio<i64>,
    bound: i64,
) -> Option<Point> {
    narrow_in(p, threshold, &directions(bound))
}

fn narrow_in(p: &ThirdIntegralPolygon, threshold: Ratio<i64>, dirs: &[Point]) -> Option<Point> {
    dirs.iter()
        .copied()
        .find(|&z| Ratio::from_integer(support_spread(p, z)) < threshold * 3)
}

/// Smallest width over the given directions, with the direction attaining it.
pub fn min_width(p: &ThirdIntegralPolygon, dirs: &[Point]) -> (Ratio<i64>, Point) {
    let (w, z) = dirs
        .iter()
        .map(|&z| (support_spread(p, z), z))
        .min_by_key(|&(w, _)| w)
        .expect("at least one direction");
    (Ratio::new(w, 3), z)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Box `[0, width/3] × [0, height/3]`.
    pub width: i64,
    pub height: i64,
    pub bound: i64,
    pub jobs: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            width: 8,
            height: 13,
            bound: 42,
            jobs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub grid: (usize, usize),
    pub bound: i64,
    /// Distinct hollow grid-closed sets visited.
    pub hulls_examined: u64,
    pub maximal_hollow: u64,
    /// Maximal hollow hulls with no narrow direction within `bound`.
    pub failures: Vec<ThirdIntegralPolygon>,
    /// Failures that a direction within `2 * bound` resolves.
    pub resolved_by_doubling: Vec<(ThirdIntegralPolygon, Point)>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn unresolved(&self) -> usize {
        self.failures.len() - self.resolved_by_doubling.len()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# every convex polygon with vertices on the grid is the hull of its grid points,"
        )?;
        writeln!(
            f,
            "# so enumerating hollow grid-closed point sets covers all such polygons"
        )?;
        writeln!(f, "grid {}x{}", self.grid.0, self.grid.1)?;
        writeln!(f, "direction bound {}", self.bound)?;
        writeln!(f, "hulls examined {}", self.hulls_examined)?;
        writeln!(f, "maximal hollow hulls {}", self.maximal_hollow)?;
        writeln!(f, "failures {}", self.failures.len())?;
        for p in &self.failures {
            let fix = self.resolved_by_doubling.iter().find(|(q, _)| q == p);
            match fix {
                Some((_, z)) => writeln!(f, "  {p} resolved at bound {} by {z:?}", 2 * self.bound)?,
                None => writeln!(f, "  {p} unresolved")?,
            }
        }
        write!(f, "unresolved {}", self.unresolved())
    }
}

struct Grid {
    nx: i64,
    ny: i64,
    points: Vec<Point>,
    integer_points: Vec<Point>,
    integer_mask: u128,
}

impl Grid {
    fn new(width: i64, height: i64) -> Result<Self, HollowError> {
        let (nx, ny) = (width + 1, height + 1);
        let n = (nx * ny) as usize;
        if n > 128 {
            return Err(HollowError::BoxTooLarge(n));
        }
        let points: Vec<Point> = (0..nx).flat_map(|x| (0..ny).map(move |y| (x, y))).collect();
        let integer_mask = points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.0 % 3 == 0 && p.1 % 3 == 0)
            .fold(0u128, |m, (i, _)| m | (1 << i));
        let integer_points = points
            .iter()
            .copied()
            .filter(|p| p.0 % 3 == 0 && p.1 % 3 == 0)
            .collect();
        Ok(Grid {
            nx,
            ny,
            points,
            integer_points,
            integer_mask,
        })
    }

    fn index(&self, p: Point) -> usize {
        (p.0 * self.ny + p.1) as usize
    }

    /// Grid points inside the hull.
    fn closure(&self, hull: &ThirdIntegralPolygon) -> u128 {
        let ((x0, y0), (x1, y1)) = hull.bounding_box();
        let mut mask = 0u128;
        for x in x0.max(0)..=x1.min(self.nx - 1) {
            for y in y0.max(0)..=y1.min(self.ny - 1) {
                if hull.contains((x, y)) {
                    mask |= 1 << self.index((x, y));
                }
            }
        }
        mask
    }

    /// Hull with `q` added, unless it swallows an integer point.
    fn extend_hollow(&self, hull: &ThirdIntegralPolygon, q: usize) -> Option<ThirdIntegralPolygon> {
        let mut pts = hull.vertices.clone();
        pts.push(self.points[q]);
        let h = ThirdIntegralPolygon {
            vertices: convex_hull(&pts),
        };
        let ((x0, y0), (x1, y1)) = h.bounding_box();
        let hit = self
            .integer_points
            .iter()
            .any(|&p| p.0 >= x0 && p.0 <= x1 && p.1 >= y0 && p.1 <= y1 && h.contains(p));
        (!hit).then_some(h)
    }
}

#[derive(Default)]
struct RootResult {
    examined: u64,
    maximal: u64,
    failures: Vec<ThirdIntegralPolygon>,
}

fn explore_root(grid: &Grid, root: usize, dirs: &[Point]) -> RootResult {
    let mut out = RootResult::default();
    if grid.integer_mask >> root & 1 == 1 {
        return out;
    }
    let n = grid.points.len();
    let below: u128 = (1u128 << root) - 1;
    let start = ThirdIntegralPolygon {
        vertices: vec![grid.points[root]],
    };
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(1 << root);
    let mut stack = vec![(start, 1u128 << root)];
    let two = Ratio::from_integer(2);
    while let Some((hull, mask)) = stack.pop() {
        out.examined += 1;
        let mut maximal = true;
        for q in 0..n {
            if mask >> q & 1 == 1 || grid.integer_mask >> q & 1 == 1 {
                continue;
            }
            let Some(h) = grid.extend_hollow(&hull, q) else {
                continue;
            };
            maximal = false;
            if q < root {
                continue;
            }
            let m = grid.closure(&h);
            if m & below != 0 || !seen.insert(m) {
                continue;
            }
            stack.push((h, m));
        }
        if maximal {
            out.maximal += 1;
            if narrow_in(&hull, two, dirs).is_none() {
                out.failures.push(hull);
            }
        }
    }
    out
}

/// Enumerates every hollow grid-closed set in the box and checks that each
/// maximal one has width below two along some direction within the bound.
pub fn enumerate_and_verify(cfg: &VerifyConfig) -> Result<VerificationReport, HollowError> {
    let started = Instant::now();
    let grid = Grid::new(cfg.width, cfg.height)?;
    let dirs = directions(cfg.bound);
    let roots: Vec<usize> = (0..grid.points.len()).collect();
    let run = |r: &usize| explore_root(&grid, *r, &dirs);
    let parts: Vec<RootResult> = if cfg.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .expect("thread pool");
        pool.install(|| roots.par_iter().map(run).collect())
    } else {
        roots.iter().map(run).collect()
    };
    let mut failures: Vec<ThirdIntegralPolygon> = Vec::new();
    let (mut examined, mut maximal) = (0, 0);
    for p in parts {
        examined += p.examined;
        maximal += p.maximal;
        failures.extend(p.failures);
    }
    failures.sort();
    let wider = directions(2 * cfg.bound);
    let resolved_by_doubling = failures
        .iter()
        .filter_map(|p| narrow_in(p, Ratio::from_integer(2), &wider).map(|z| (p.clone(), z)))
        .collect();
    Ok(VerificationReport {
        grid: (grid.nx as usize, grid.ny as usize),
        bound: cfg.bound,
        hulls_examined: examined,
        maximal_hollow: maximal,
        failures,
        resolved_by_doubling,
        elapsed: started.elapsed(),
    })
}
