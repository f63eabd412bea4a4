use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Ball, Matrix, Vector};
use crate::error::{Error, Result};

/// Minimizer of the largest power distance `|y - x_i|^2 + w_i`.
#[derive(Clone, Debug)]
pub struct PowerCenter {
    pub center: Vector,
    /// `max_i |center - x_i|^2 + w_i` at the minimizer.
    pub value: f64,
}

/// Smallest ball containing all `points` (Welzl's algorithm).
pub fn minimal_enclosing_ball(points: &[Vector]) -> Result<Ball> {
    let weights = vec![0.0; points.len()];
    let pc = min_max_power(points, &weights)?;
    let radius = points
        .iter()
        .map(|p| (p - &pc.center).norm())
        .fold(0.0f64, f64::max);
    Ok(Ball { center: pc.center, radius })
}

/// Minimizes `max_i |y - x_i|^2 + w_i` over `y`.
///
/// With `w_i = -r_i^2` the optimum is negative exactly when the balls
/// `B(x_i, r_i)` have a common interior point, and the intersection then
/// lies inside `B(center, sqrt(-value))`. All weights zero gives the
/// minimal enclosing ball. The problem has the same combinatorial
/// structure as the enclosing-ball problem, so Welzl's recursion applies
/// unchanged: the optimum lies in the affine hull of at most `n + 1`
/// tight points, all at equal power.
pub fn min_max_power(points: &[Vector], weights: &[f64]) -> Result<PowerCenter> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty point set".into()))?;
    if weights.len() != points.len() {
        return Err(Error::InvalidArgument("one weight per point required".into()));
    }
    let dim = first.len();
    for p in points {
        if p.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: p.len() });
        }
        super::check_finite(p)?;
    }

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed_ba11));
    let pts: Vec<&Vector> = order.iter().map(|&i| &points[i]).collect();
    let ws: Vec<f64> = order.iter().map(|&i| weights[i]).collect();

    let scale = pts.iter().map(|p| p.norm_squared()).fold(0.0, f64::max)
        + ws.iter().map(|w| w.abs()).fold(0.0, f64::max);
    let eps = 1e-13 * (1.0 + scale);

    let solver = Welzl { pts: &pts, ws: &ws, dim, eps };
    let mut boundary = Vec::with_capacity(dim + 1);
    let (center, _) = solver.run(pts.len(), &mut boundary);
    let value = (0..pts.len())
        .map(|i| solver.power(i, &center))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(PowerCenter { center, value })
}

struct Welzl<'a> {
    pts: &'a [&'a Vector],
    ws: &'a [f64],
    dim: usize,
    eps: f64,
}

impl Welzl<'_> {
    fn power(&self, i: usize, y: &Vector) -> f64 {
        (y - self.pts[i]).norm_squared() + self.ws[i]
    }

    fn run(&self, end: usize, boundary: &mut Vec<usize>) -> (Vector, f64) {
        let (mut y, mut v) = self.solve_boundary(boundary);
        if boundary.len() == self.dim + 1 {
            return (y, v);
        }
        for i in 0..end {
            if self.power(i, &y) > v + self.eps {
                boundary.push(i);
                (y, v) = self.run(i, boundary);
                boundary.pop();
            }
        }
        (y, v)
    }

    /// Point of the affine hull of `boundary` with equal power to all of it.
    fn solve_boundary(&self, boundary: &[usize]) -> (Vector, f64) {
        let Some(&i0) = boundary.first() else {
            return (Vector::zeros(self.dim), f64::NEG_INFINITY);
        };
        let x0 = self.pts[i0];
        let k = boundary.len() - 1;
        if k == 0 {
            return (x0.clone(), self.ws[i0]);
        }
        let mut basis = Matrix::zeros(self.dim, k);
        let mut rhs = Vector::zeros(k);
        for (j, &i) in boundary[1..].iter().enumerate() {
            let v = self.pts[i] - x0;
            rhs[j] = 0.5 * (v.norm_squared() + self.ws[i] - self.ws[i0]);
            basis.set_column(j, &v);
        }
        let gram = basis.transpose() * &basis;
        let svd = gram.svd(true, true);
        let smax = svd.singular_values.max();
        let coeffs = svd
            .solve(&rhs, 1e-14 * smax.max(f64::MIN_POSITIVE))
            .unwrap_or_else(|_| Vector::zeros(k));
        let y = x0 + basis * coeffs;
        let v = boundary
            .iter()
            .map(|&i| self.power(i, &y))
            .fold(f64::NEG_INFINITY, f64::max);
        (y, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vector;

    /// Brute-force oracle: grid search over candidate centers.
    fn grid_radius(points: &[Vector], lo: f64, hi: f64, steps: usize) -> (f64, f64, f64) {
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..=steps {
            for j in 0..=steps {
                let c = vector(&[
                    lo + (hi - lo) * i as f64 / steps as f64,
                    lo + (hi - lo) * j as f64 / steps as f64,
                ]);
                let r = points.iter().map(|p| (p - &c).norm()).fold(0.0, f64::max);
                if r < best.0 {
                    best = (r, c[0], c[1]);
                }
            }
        }
        best
    }

    #[test]
    fn single_point() {
        let b = minimal_enclosing_ball(&[vector(&[0.0, 0.0])]).unwrap();
        assert_eq!(b.radius, 0.0);
        assert_eq!(b.center, vector(&[0.0, 0.0]));
    }

    #[test]
    fn segment_midpoint() {
        let b = minimal_enclosing_ball(&[vector(&[0.0, 0.0]), vector(&[1.0, 0.0])]).unwrap();
        assert!((b.center - vector(&[0.5, 0.0])).norm() < 1e-12);
        assert!((b.radius - 0.5).abs() < 1e-12);
    }

    #[test]
    fn right_triangle_matches_grid_oracle() {
        let pts = [vector(&[0.0, 0.0]), vector(&[1.0, 0.0]), vector(&[0.0, 1.0])];
        let b = minimal_enclosing_ball(&pts).unwrap();
        let (r, cx, cy) = grid_radius(&pts, -0.5, 1.5, 400);
        // frozen from the oracle: center (0.5, 0.5), radius sqrt(2)/2
        assert!((r - 0.5f64.sqrt()).abs() < 1e-9);
        assert!((cx - 0.5).abs() < 1e-9 && (cy - 0.5).abs() < 1e-9);
        assert!((b.radius - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((b.center - vector(&[0.5, 0.5])).norm() < 1e-12);
    }

    #[test]
    fn collinear_and_duplicate_points() {
        let pts = [
            vector(&[0.0, 0.0]),
            vector(&[1.0, 0.0]),
            vector(&[2.0, 0.0]),
            vector(&[2.0, 0.0]),
            vector(&[0.5, 0.0]),
        ];
        let b = minimal_enclosing_ball(&pts).unwrap();
        assert!((b.center - vector(&[1.0, 0.0])).norm() < 1e-12);
        assert!((b.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn weighted_balls_common_interior() {
        // B((0,0),1) and B((1,0),1): the lens has its widest chord at x = 1/2.
        let pts = [vector(&[0.0, 0.0]), vector(&[1.0, 0.0])];
        let pc = min_max_power(&pts, &[-1.0, -1.0]).unwrap();
        assert!((pc.center - vector(&[0.5, 0.0])).norm() < 1e-12);
        assert!((pc.value - (0.25 - 1.0)).abs() < 1e-12);
        // very different radii: the small ball dominates
        let pc = min_max_power(&pts, &[-9.0, -0.01]).unwrap();
        assert!((pc.center - vector(&[1.0, 0.0])).norm() < 1e-12);
        assert!((pc.value + 0.01).abs() < 1e-12);
    }

    #[test]
    fn rejects_empty() {
        assert!(minimal_enclosing_ball(&[]).is_err());
    }
}
