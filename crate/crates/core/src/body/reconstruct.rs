use super::solver::BallIntersection;
use super::support::Support;
use crate::error::{Error, Result};
use crate::geom::{Ball, Vector};

/// `K̂ = ⋂_x (x + d_x B)` over a finite probe set.
///
/// When every `d_x` is the point-to-body distance `δ(x, K)` of a ball body
/// `K`, the farthest point of `K` from `x` is at distance `d_x`, so
/// `K ⊆ K̂`; refining the probes shrinks `K̂` towards `K`.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    balls: BallIntersection,
    tol: f64,
    probes: usize,
}

pub fn reconstruct(probes: &[(Vector, f64)], tol: f64) -> Result<Reconstruction> {
    if probes.is_empty() {
        return Err(Error::InvalidArgument("at least one probe required".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be > 0, got {tol}")));
    }
    let dim = probes[0].0.len();
    let mut centers = Vec::with_capacity(probes.len());
    let mut radii = Vec::with_capacity(probes.len());
    for (x, d) in probes {
        if x.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: x.len() });
        }
        if !(*d >= 0.0) || !d.is_finite() {
            return Err(Error::InvalidArgument(format!("probe distance {d} must be >= 0")));
        }
        centers.push(x.clone());
        radii.push(*d);
    }
    let scale = radii.iter().fold(1.0f64, |m, r| m.max(r * r));
    let balls = BallIntersection::new(&centers, &radii, 1e-12 * scale).map_err(|e| match e {
        Error::Infeasible => Error::EmptyReconstruction,
        other => other,
    })?;
    Ok(Reconstruction { balls, tol, probes: probes.len() })
}

impl Reconstruction {
    pub fn probe_count(&self) -> usize {
        self.probes
    }

    /// Constraint balls left after discarding redundant ones.
    pub fn active_count(&self) -> usize {
        self.balls.len()
    }

    pub fn contains(&self, y: &Vector, slack: f64) -> bool {
        self.balls.contains(y, slack)
    }
}

impl Support for Reconstruction {
    fn dim(&self) -> usize {
        self.balls.dim()
    }

    fn tol(&self) -> f64 {
        self.tol
    }

    fn enclosing(&self) -> Ball {
        self.balls.enclosing()
    }

    fn support_point_unit(&self, u: &Vector) -> Result<(f64, Vector)> {
        let sol = self.balls.support(u, self.tol)?;
        Ok((sol.value, sol.point))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::{hausdorff, point_distance, BallBodyExpr, SupportEval, DEFAULT_TOL};
    use crate::geom::{make_sphere_net, vector};

    fn grid(extent: f64, spacing: f64) -> Vec<Vector> {
        let steps = (2.0 * extent / spacing).round() as i64;
        let mut pts = Vec::new();
        for i in 0..=steps {
            for j in 0..=steps {
                pts.push(vector(&[-extent + i as f64 * spacing, -extent + j as f64 * spacing]));
            }
        }
        pts
    }

    #[test]
    fn single_probe_is_a_ball() {
        let r = reconstruct(&[(vector(&[1.0, 2.0]), 0.5)], DEFAULT_TOL).unwrap();
        let u = vector(&[0.6, 0.8]);
        assert!((r.support(&u).unwrap() - (vector(&[1.0, 2.0]).dot(&u) + 0.5)).abs() < 1e-12);
    }

    #[test]
    fn unit_ball_from_grid_probes() {
        let net = make_sphere_net(2, 0.02).unwrap();
        let k = SupportEval::with_default_tol(BallBodyExpr::unit_ball(vector(&[0.0, 0.0])).unwrap());
        let probes: Vec<(Vector, f64)> = grid(2.0, 0.5)
            .into_iter()
            .map(|x| {
                let d = point_distance(&k, &x, &net).unwrap();
                (x, d)
            })
            .collect();
        let rec = reconstruct(&probes, DEFAULT_TOL).unwrap();
        for u in net.directions() {
            assert!(k.support(u).unwrap() <= rec.support(u).unwrap() + DEFAULT_TOL);
        }
        assert!(hausdorff(&k, &rec, &net).unwrap().value <= 0.05);
    }

    #[test]
    fn point_body_shrinks_with_refinement() {
        let net = make_sphere_net(2, 0.02).unwrap();
        let p = vector(&[0.3, -0.2]);
        let k = SupportEval::with_default_tol(BallBodyExpr::point(p.clone()).unwrap());
        let mut last = f64::INFINITY;
        for spacing in [1.0, 0.5, 0.25] {
            let probes: Vec<(Vector, f64)> =
                grid(2.0, spacing).into_iter().map(|x| (x.clone(), (&x - &p).norm())).collect();
            let rec = reconstruct(&probes, DEFAULT_TOL).unwrap();
            assert!(rec.contains(&p, 1e-9));
            let d = hausdorff(&k, &rec, &net).unwrap().value;
            assert!(d <= last + 2.0 * DEFAULT_TOL, "{d} > {last}");
            last = d;
        }
    }

    #[test]
    fn disjoint_probes_rejected() {
        let probes = [(vector(&[0.0, 0.0]), 0.5), (vector(&[2.0, 0.0]), 0.5)];
        assert!(matches!(reconstruct(&probes, DEFAULT_TOL), Err(Error::EmptyReconstruction)));
    }
}
