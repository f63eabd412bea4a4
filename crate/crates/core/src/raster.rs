//! Brute-force planar oracle: bodies as sets of grid cells.
//!
//! Every node is rasterized from its definition rather than from support
//! functions: generator bodies by exact membership `max_i |y - x_i| <= 1`
//! of the cell centers, c-duals by `z ∈ K^c iff |z - y| <= 1` for every
//! occupied `y` of the rasterized argument, Minkowski combinations by
//! summing the scaled cell clouds, and motions by mapping the cloud. All
//! sets involved are convex, so each grid row holds one interval of cells
//! and clouds are summarized by their convex hulls.

use std::collections::BTreeMap;

use crate::body::{BallBodyExpr, Node};
use crate::error::{Error, Result};
use crate::geom::{min_max_power, minimal_enclosing_ball, Ball, Vector};

type P2 = [f64; 2];

/// Axis-aligned box in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub min: P2,
    pub max: P2,
}

impl Bounds {
    pub fn new(min: P2, max: P2) -> Self {
        Bounds { min, max }
    }

    pub fn square(half_width: f64) -> Self {
        Bounds { min: [-half_width; 2], max: [half_width; 2] }
    }

    /// Smallest box containing the enclosing balls of all `bodies`, padded.
    pub fn around(bodies: &[&BallBodyExpr], pad: f64) -> Self {
        let mut b = Bounds { min: [f64::INFINITY; 2], max: [f64::NEG_INFINITY; 2] };
        for k in bodies {
            let e = k.enclosing();
            for a in 0..2 {
                b.min[a] = b.min[a].min(e.center[a] - e.radius - pad);
                b.max[a] = b.max[a].max(e.center[a] + e.radius + pad);
            }
        }
        b
    }

    fn contains_ball(&self, ball: &Ball) -> bool {
        (0..2).all(|a| ball.center[a] - ball.radius >= self.min[a] && ball.center[a] + ball.radius <= self.max[a])
    }
}

/// Cell grid: cell `(i, j)` has center `origin + cell * (i, j)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub origin: P2,
    pub cell: f64,
    pub cols: i64,
    pub rows: i64,
}

impl Grid {
    fn new(cell: f64, bounds: &Bounds) -> Self {
        let cols = ((bounds.max[0] - bounds.min[0]) / cell).floor() as i64;
        let rows = ((bounds.max[1] - bounds.min[1]) / cell).floor() as i64;
        Grid { origin: bounds.min, cell, cols, rows }
    }

    pub fn center(&self, i: i64, j: i64) -> P2 {
        [self.origin[0] + self.cell * i as f64, self.origin[1] + self.cell * j as f64]
    }

    pub fn nearest(&self, p: P2) -> (i64, i64) {
        let i = ((p[0] - self.origin[0]) / self.cell).round() as i64;
        let j = ((p[1] - self.origin[1]) / self.cell).round() as i64;
        (i.clamp(0, self.cols), j.clamp(0, self.rows))
    }

    fn row_y(&self, j: i64) -> f64 {
        self.origin[1] + self.cell * j as f64
    }

    /// Cells whose centers lie in `[lo, hi]` on a row.
    fn span(&self, lo: f64, hi: f64) -> Option<(i64, i64)> {
        let a = ((lo - self.origin[0]) / self.cell - 1e-9).ceil() as i64;
        let b = ((hi - self.origin[0]) / self.cell + 1e-9).floor() as i64;
        let (a, b) = (a.max(0), b.min(self.cols));
        (a <= b).then_some((a, b))
    }
}

/// A rasterized convex body: one interval of occupied cells per row.
#[derive(Clone, Debug, PartialEq)]
pub struct RasterBody {
    grid: Grid,
    rows: BTreeMap<i64, (i64, i64)>,
}

impl RasterBody {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn cell(&self) -> f64 {
        self.grid.cell
    }

    pub fn len(&self) -> usize {
        self.rows.values().map(|(a, b)| (b - a + 1) as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.len() as f64 * self.grid.cell * self.grid.cell
    }

    pub fn contains_cell(&self, i: i64, j: i64) -> bool {
        self.rows.get(&j).is_some_and(|&(a, b)| a <= i && i <= b)
    }

    /// Membership of the cell nearest to `p`.
    pub fn contains_point(&self, p: P2) -> bool {
        let (i, j) = self.grid.nearest(p);
        self.contains_cell(i, j)
    }

    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.rows.iter().flat_map(|(&j, &(a, b))| (a..=b).map(move |i| (i, j)))
    }

    /// Occupied cells with an unoccupied 4-neighbour.
    pub fn boundary_cells(&self) -> Vec<(i64, i64)> {
        self.cells()
            .filter(|&(i, j)| {
                !(self.contains_cell(i - 1, j)
                    && self.contains_cell(i + 1, j)
                    && self.contains_cell(i, j - 1)
                    && self.contains_cell(i, j + 1))
            })
            .collect()
    }

    /// Convex hull (counter-clockwise) of the occupied cell centers.
    pub fn hull(&self) -> Vec<P2> {
        let mut pts: Vec<P2> = Vec::with_capacity(2 * self.rows.len());
        for (&j, &(a, b)) in &self.rows {
            pts.push(self.grid.center(a, j));
            if b != a {
                pts.push(self.grid.center(b, j));
            }
        }
        convex_hull(pts)
    }

    /// Smallest enclosing ball of the occupied cell centers.
    pub fn circumball(&self) -> Result<Ball> {
        let pts: Vec<Vector> = self.hull().iter().map(|p| Vector::from_column_slice(p)).collect();
        minimal_enclosing_ball(&pts)
    }

    /// Raster c-dual: cells within distance 1 of every occupied cell.
    pub fn c_dual(&self) -> Result<RasterBody> {
        from_unit_balls(self.grid, &self.hull())
    }
}

/// Rasterizes a planar body on the grid of spacing `cell` anchored at
/// `bounds.min`.
pub fn rasterize(k: &BallBodyExpr, cell: f64, bounds: &Bounds) -> Result<RasterBody> {
    if k.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: k.dim() });
    }
    if !(cell > 0.0) {
        return Err(Error::InvalidArgument(format!("cell must be > 0, got {cell}")));
    }
    if !bounds.contains_ball(k.enclosing()) {
        return Err(Error::InvalidArgument("bounds do not contain the body".into()));
    }
    let grid = Grid::new(cell, bounds);
    raster_node(k, grid)
}

/// Rasterizes `k` onto `grid`; operands get grids of their own, since
/// they need not lie inside the bounds of the result.
fn raster_node(k: &BallBodyExpr, grid: Grid) -> Result<RasterBody> {
    let own = |child: &BallBodyExpr| raster_node(child, Grid::new(grid.cell, &Bounds::around(&[child], 2.0 * grid.cell)));
    match k.node() {
        Node::Generators(g) => {
            let centers: Vec<P2> = g.centers().iter().map(|c| [c[0], c[1]]).collect();
            from_unit_balls(grid, &centers)
        }
        Node::CDual(of) => from_unit_balls(grid, &own(of)?.hull()),
        Node::Combine { lambda, a, b } => {
            let ha = own(a)?.hull();
            let hb = own(b)?.hull();
            let l = *lambda;
            let mut sums = Vec::with_capacity(ha.len() * hb.len());
            for p in &ha {
                for q in &hb {
                    sums.push([(1.0 - l) * p[0] + l * q[0], (1.0 - l) * p[1] + l * q[1]]);
                }
            }
            from_polygon(grid, &convex_hull(sums))
        }
        Node::Motion { motion, of } => {
            let moved: Vec<P2> = own(of)?
                .hull()
                .iter()
                .map(|p| {
                    let y = motion.apply(&Vector::from_column_slice(p));
                    [y[0], y[1]]
                })
                .collect();
            from_polygon(grid, &convex_hull(moved))
        }
    }
}

/// Cells in `⋂ B(c, 1)`; a nonempty region missing every cell center
/// collapses to the cell nearest to it.
fn from_unit_balls(grid: Grid, centers: &[P2]) -> Result<RasterBody> {
    let (ylo, yhi) = centers
        .iter()
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(lo, hi), c| (lo.max(c[1] - 1.0), hi.min(c[1] + 1.0)));
    let mut rows = BTreeMap::new();
    if ylo <= yhi {
        let j0 = ((ylo - grid.origin[1]) / grid.cell).ceil().max(0.0) as i64;
        let j1 = (((yhi - grid.origin[1]) / grid.cell).floor() as i64).min(grid.rows);
        for j in j0..=j1 {
            let y = grid.row_y(j);
            let mut lo = f64::NEG_INFINITY;
            let mut hi = f64::INFINITY;
            for c in centers {
                let dy = y - c[1];
                let h2 = 1.0 - dy * dy;
                if h2 < 0.0 {
                    lo = f64::INFINITY;
                    break;
                }
                let h = h2.sqrt();
                lo = lo.max(c[0] - h);
                hi = hi.min(c[0] + h);
            }
            if lo <= hi {
                if let Some(span) = grid.span(lo, hi) {
                    rows.insert(j, span);
                }
            }
        }
    }
    if rows.is_empty() {
        let pts: Vec<Vector> = centers.iter().map(|c| Vector::from_column_slice(c)).collect();
        let pc = min_max_power(&pts, &vec![-1.0; pts.len()])?;
        if pc.value > 1e-9 {
            return Err(Error::EmptyRaster { cell: grid.cell });
        }
        let (i, j) = grid.nearest([pc.center[0], pc.center[1]]);
        rows.insert(j, (i, i));
    }
    Ok(RasterBody { grid, rows })
}

/// Cells whose centers lie in a convex polygon (counter-clockwise, possibly
/// degenerate); an empty result collapses to the cell nearest the centroid.
fn from_polygon(grid: Grid, poly: &[P2]) -> Result<RasterBody> {
    if poly.is_empty() {
        return Err(Error::EmptyRaster { cell: grid.cell });
    }
    let ylo = poly.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
    let yhi = poly.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
    let mut rows = BTreeMap::new();
    let j0 = ((ylo - grid.origin[1]) / grid.cell - 1e-9).ceil().max(0.0) as i64;
    let j1 = (((yhi - grid.origin[1]) / grid.cell + 1e-9).floor() as i64).min(grid.rows);
    for j in j0..=j1 {
        let y = grid.row_y(j);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for e in 0..poly.len() {
            let p = poly[e];
            let q = poly[(e + 1) % poly.len()];
            let (ymin, ymax) = (p[1].min(q[1]), p[1].max(q[1]));
            let eps = 1e-9 * grid.cell;
            if y < ymin - eps || y > ymax + eps {
                continue;
            }
            if (q[1] - p[1]).abs() <= eps {
                lo = lo.min(p[0].min(q[0]));
                hi = hi.max(p[0].max(q[0]));
            } else {
                let s = ((y - p[1]) / (q[1] - p[1])).clamp(0.0, 1.0);
                let x = p[0] + s * (q[0] - p[0]);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        if lo <= hi {
            if let Some(span) = grid.span(lo, hi) {
                rows.insert(j, span);
            }
        }
    }
    if rows.is_empty() {
        let n = poly.len() as f64;
        let c = [poly.iter().map(|p| p[0]).sum::<f64>() / n, poly.iter().map(|p| p[1]).sum::<f64>() / n];
        let (i, j) = grid.nearest(c);
        rows.insert(j, (i, i));
    }
    Ok(RasterBody { grid, rows })
}

/// Andrew's monotone chain; collinear points are dropped.
fn convex_hull(mut pts: Vec<P2>) -> Vec<P2> {
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: P2, a: P2, b: P2| (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    let mut lower: Vec<P2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<P2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Hausdorff distance between two rasters on the same grid: the larger of
/// the directed point-cloud distances, each measured from boundary cells
/// to the nearest boundary cell of the other raster.
pub fn raster_hausdorff(a: &RasterBody, b: &RasterBody) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    Ok(directed(a, b).max(directed(b, a)))
}

fn directed(from: &RasterBody, to: &RasterBody) -> f64 {
    let target = to.boundary_cells();
    let mut worst = 0i64;
    for (i, j) in from.boundary_cells() {
        if to.contains_cell(i, j) {
            continue;
        }
        let best = target
            .iter()
            .map(|&(p, q)| (p - i) * (p - i) + (q - j) * (q - j))
            .min()
            .unwrap_or(i64::MAX);
        worst = worst.max(best);
    }
    (worst as f64).sqrt() * from.grid.cell
}
