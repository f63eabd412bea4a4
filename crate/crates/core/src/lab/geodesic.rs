//! Geodesic triples and the "no point between non-points" check.

use serde::Serialize;

use crate::body::{circumball_from_profile, profile_distance, BallBodyExpr, HausdorffResult, SupportEval, SupportProfile};
use crate::error::{Error, Result};
use crate::geom::{SphereNet, Vector};

pub const POINT_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeodesicCheck {
    /// `δ(K0,K1)`, `δ(K1,K2)`, `δ(K0,K2)`.
    pub distances: [f64; 3],
    pub radii: [f64; 3],
    /// `|δ(K0,K1) + δ(K1,K2) - δ(K0,K2)|` and the certified slack it is
    /// compared against.
    pub excess: f64,
    pub allowance: f64,
    pub point_tol: f64,
    /// Both endpoints are non-points.
    pub hypothesis: bool,
    pub passed: bool,
}

/// Checks that an additive triple with non-point endpoints has a
/// non-point middle. Fails with [`Error::NotGeodesicTriple`] if the triple
/// is not additive within the certified error bounds.
pub fn geodesic_midpoint_check(
    k0: &BallBodyExpr,
    k1: &BallBodyExpr,
    k2: &BallBodyExpr,
    net: &SphereNet,
    tol: f64,
    point_tol: f64,
) -> Result<GeodesicCheck> {
    let p: Vec<SupportProfile> = [k0, k1, k2]
        .iter()
        .map(|k| SupportProfile::new(&SupportEval::new((*k).clone(), tol)?, net))
        .collect::<Result<_>>()?;
    let d01 = profile_distance(&p[0], &p[1], net);
    let d12 = profile_distance(&p[1], &p[2], net);
    let d02 = profile_distance(&p[0], &p[2], net);
    let slack = |d: &HausdorffResult| d.error_bound + d.lower_slack;
    let excess = (d01.value + d12.value - d02.value).abs();
    let allowance = slack(&d01) + slack(&d12) + slack(&d02);
    if excess > allowance {
        return Err(Error::NotGeodesicTriple { excess, allowance });
    }
    let radii = [
        circumball_from_profile(&p[0], net)?.radius,
        circumball_from_profile(&p[1], net)?.radius,
        circumball_from_profile(&p[2], net)?.radius,
    ];
    let hypothesis = radii[0] >= point_tol && radii[2] >= point_tol;
    Ok(GeodesicCheck {
        distances: [d01.value, d12.value, d02.value],
        radii,
        excess,
        allowance,
        point_tol,
        hypothesis,
        passed: !hypothesis || radii[1] >= point_tol,
    })
}

/// The path `t ↦ t u` on `[0, 1/2]` followed by `u/2 + (t - 1/2) B` on
/// `[1/2, 1]`, for a unit vector `u`.
pub fn point_then_ball_path(u: &Vector, t: f64) -> Result<BallBodyExpr> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!("path parameter must lie in [0, 1], got {t}")));
    }
    if t <= 0.5 {
        return BallBodyExpr::point(u * t);
    }
    // u/2 + s B = (1 - s) {u / (2 (1 - s))} + s B, s = t - 1/2
    let s = t - 0.5;
    let p = BallBodyExpr::point(u * (0.5 / (1.0 - s)))?;
    BallBodyExpr::combine(s, &p, &BallBodyExpr::unit_ball(Vector::zeros(u.len()))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{make_sphere_net, vector};

    #[test]
    fn path_triple_is_additive_with_point_endpoint() {
        let net = make_sphere_net(2, 0.02).unwrap();
        let u = vector(&[0.6, 0.8]);
        let ks: Vec<_> = [0.0, 0.5, 1.0].iter().map(|&t| point_then_ball_path(&u, t).unwrap()).collect();
        let c = geodesic_midpoint_check(&ks[0], &ks[1], &ks[2], &net, 1e-6, POINT_TOL).unwrap();
        assert!((c.distances[0] - 0.5).abs() < 1e-4 && (c.distances[1] - 0.5).abs() < 1e-4);
        assert!((c.distances[2] - 1.0).abs() < 1e-4);
        assert!(!c.hypothesis && c.passed);
        assert!(c.radii[1] < POINT_TOL);
    }

    #[test]
    fn constant_triple_passes() {
        let net = make_sphere_net(2, 0.05).unwrap();
        let k = BallBodyExpr::generators(vec![vector(&[0.0, 0.0]), vector(&[0.5, 0.5])]).unwrap();
        let c = geodesic_midpoint_check(&k, &k, &k, &net, 1e-6, POINT_TOL).unwrap();
        assert!(c.hypothesis && c.passed);
    }

    #[test]
    fn detour_is_not_geodesic() {
        let net = make_sphere_net(2, 0.05).unwrap();
        let p = |x: f64, y: f64| BallBodyExpr::point(vector(&[x, y])).unwrap();
        let e = geodesic_midpoint_check(&p(0.0, 0.0), &p(0.0, 1.0), &p(1.0, 0.0), &net, 1e-6, POINT_TOL);
        assert!(matches!(e, Err(Error::NotGeodesicTriple { .. })));
    }
}
