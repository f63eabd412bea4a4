//! Geometric operations on ball bodies, evaluated through support
//! functions over a [`SphereNet`].

use super::expr::{BallBodyExpr, Node};
use super::support::{Support, SupportEval};
use crate::error::{Error, Result};
use crate::geom::{chebyshev_center, Ball, RigidMotion, SphereNet, Vector};
use crate::par;

/// `K^c`.
pub fn c_dual(k: &BallBodyExpr) -> Result<BallBodyExpr> {
    k.c_dual()
}

/// `(1 - λ) K + λ T`.
pub fn combine(lambda: f64, k: &BallBodyExpr, t: &BallBodyExpr) -> Result<BallBodyExpr> {
    BallBodyExpr::combine(lambda, k, t)
}

/// `g K`.
pub fn apply_motion(g: &RigidMotion, k: &BallBodyExpr) -> Result<BallBodyExpr> {
    BallBodyExpr::apply_motion(g, k)
}

fn check_net<S: Support + ?Sized>(k: &S, net: &SphereNet) -> Result<()> {
    if k.dim() != net.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), got: net.dim() });
    }
    Ok(())
}

/// Support values of a body on every net direction, with the metadata
/// needed to certify distances computed from them.
#[derive(Clone, Debug)]
pub struct SupportProfile {
    pub values: Vec<f64>,
    pub enclosing: Ball,
    pub norm_bound: f64,
    pub tol: f64,
}

impl SupportProfile {
    pub fn new<S: Support + ?Sized>(k: &S, net: &SphereNet) -> Result<Self> {
        check_net(k, net)?;
        let values = par::try_map(net.directions(), |u| k.support_point_unit(u).map(|p| p.0))?;
        Ok(SupportProfile { values, enclosing: k.enclosing(), norm_bound: k.norm_bound(), tol: k.tol() })
    }
}

/// Hausdorff distance with a certified bracket: the true distance lies in
/// `[value - lower_slack, value + error_bound]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HausdorffResult {
    pub value: f64,
    pub error_bound: f64,
    pub lower_slack: f64,
}

impl HausdorffResult {
    pub fn lower(&self) -> f64 {
        (self.value - self.lower_slack).max(0.0)
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }
}

/// `δ(K, T)` as the sup-distance of support functions over the net.
///
/// `h_K - h_T` is Lipschitz on the sphere with constant
/// `L = min(2 max(R_K, R_T), |c_K - c_T| + r_K + r_T)` for enclosing
/// balls `B(c, r)`, so the sup over the sphere exceeds the net maximum by
/// at most `L · mesh` plus the evaluation errors.
pub fn hausdorff<A, B>(k: &A, t: &B, net: &SphereNet) -> Result<HausdorffResult>
where
    A: Support + ?Sized,
    B: Support + ?Sized,
{
    if k.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), got: t.dim() });
    }
    let pk = SupportProfile::new(k, net)?;
    let pt = SupportProfile::new(t, net)?;
    Ok(profile_distance(&pk, &pt, net))
}

/// [`hausdorff`] on precomputed profiles.
pub fn profile_distance(a: &SupportProfile, b: &SupportProfile, net: &SphereNet) -> HausdorffResult {
    let value = a
        .values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let lip = (2.0 * a.norm_bound.max(b.norm_bound))
        .min((&a.enclosing.center - &b.enclosing.center).norm() + a.enclosing.radius + b.enclosing.radius);
    let tols = a.tol + b.tol;
    HausdorffResult { value, error_bound: lip * net.mesh() + 2.0 * tols, lower_slack: 2.0 * tols }
}

/// Circumball `(c(K), r(K))`: minimizes `max_u (h_K(u) - <z, u>)` over the
/// net directions as a linear program.
pub fn circumball<S: Support + ?Sized>(k: &S, net: &SphereNet) -> Result<Ball> {
    let profile = SupportProfile::new(k, net)?;
    circumball_from_profile(&profile, net)
}

pub fn circumball_from_profile(profile: &SupportProfile, net: &SphereNet) -> Result<Ball> {
    let cc = chebyshev_center(net.directions(), &profile.values)?;
    Ok(Ball { center: cc.center, radius: cc.radius.max(0.0) })
}

/// Result of a membership query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership {
    pub inside: bool,
    /// `min_u (h_K(u) - <y, u>)` over the net: the distance to the
    /// boundary for inside points, minus the distance to `K` outside.
    pub margin: f64,
    /// Exact verdict for plain generator bodies (`max_i |y - x_i| <= 1`).
    pub exact: Option<bool>,
}

/// Membership `y ∈ K` via `<y, u> <= h_K(u) + tol` on every net direction.
pub fn contains_point(k: &SupportEval, y: &Vector, net: &SphereNet) -> Result<Membership> {
    if y.len() != k.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), got: y.len() });
    }
    let profile = SupportProfile::new(k, net)?;
    let margin = net
        .directions()
        .iter()
        .zip(&profile.values)
        .map(|(u, h)| h - y.dot(u))
        .fold(f64::INFINITY, f64::min);
    let exact = match k.body().node() {
        Node::Generators(g) => Some(g.contains(y, k.tol())),
        _ => None,
    };
    let inside = exact.unwrap_or(margin >= -k.tol());
    Ok(Membership { inside, margin, exact })
}

/// `δ({x}, K) = max_{y∈K} |y - x|`, refined beyond the net.
///
/// The best net directions seed the ascent `u <- (y(u) - x) / |y(u) - x|`
/// where `y(u)` is the contact point; each step cannot decrease
/// `h_K(u) - <x, u>`.
pub fn point_distance<S: Support + ?Sized>(k: &S, x: &Vector, net: &SphereNet) -> Result<f64> {
    check_net(k, net)?;
    if x.len() != k.dim() {
        return Err(Error::DimensionMismatch { expected: k.dim(), got: x.len() });
    }
    let profile = SupportProfile::new(k, net)?;
    let mut scored: Vec<(f64, usize)> = net
        .directions()
        .iter()
        .zip(&profile.values)
        .enumerate()
        .map(|(j, (u, h))| (h - x.dot(u), j))
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let seeds: Vec<usize> = scored.iter().take(6).map(|s| s.1).collect();
    let refined = par::try_map(&seeds, |&j| {
        let mut u = net.directions()[j].clone();
        let mut best = scored.iter().find(|s| s.1 == j).map(|s| s.0).unwrap_or(f64::NEG_INFINITY);
        for _ in 0..200 {
            let (h, y) = k.support_point_unit(&u)?;
            best = best.max(h - x.dot(&u));
            let d = &y - x;
            let norm = d.norm();
            if norm < 1e-15 {
                break;
            }
            let next = d / norm;
            if (&next - &u).norm() < 1e-12 {
                break;
            }
            u = next;
        }
        Ok::<f64, Error>(best)
    })?;
    Ok(refined.into_iter().fold(scored[0].0, f64::max).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{make_sphere_net, vector};

    fn eval(b: BallBodyExpr) -> SupportEval {
        SupportEval::with_default_tol(b)
    }

    #[test]
    fn distance_to_self_is_zero() {
        let net = make_sphere_net(2, 0.02).unwrap();
        let k = eval(BallBodyExpr::generators(vec![vector(&[0.0, 0.0]), vector(&[0.7, 0.2])]).unwrap());
        let d = hausdorff(&k, &k, &net).unwrap();
        assert!(d.value <= 2.0 * k.tol());
    }

    #[test]
    fn point_to_point() {
        let net = make_sphere_net(2, 0.02).unwrap();
        let x = eval(BallBodyExpr::point(vector(&[0.0, 0.0])).unwrap());
        let y = eval(BallBodyExpr::point(vector(&[0.3, 0.4])).unwrap());
        let d = hausdorff(&x, &y, &net).unwrap();
        assert!(d.lower() <= 0.5 && 0.5 <= d.upper());
        assert!((d.value - 0.5).abs() <= d.error_bound);
    }

    #[test]
    fn point_to_ball_closed_form() {
        let net = make_sphere_net(2, 0.02).unwrap();
        for (x, y) in [([0.0, 0.0], [0.0, 0.0]), ([0.0, 0.0], [2.0, 0.0]), ([1.0, -1.0], [0.5, 0.3])] {
            let px = eval(BallBodyExpr::point(vector(&x)).unwrap());
            let by = eval(BallBodyExpr::unit_ball(vector(&y)).unwrap());
            let d = hausdorff(&px, &by, &net).unwrap();
            let expected = 1.0 + (vector(&x) - vector(&y)).norm();
            assert!(d.lower() <= expected && expected <= d.upper(), "{d:?} vs {expected}");
        }
    }

    #[test]
    fn dimension_mismatch() {
        let net = make_sphere_net(3, 0.3).unwrap();
        let k = eval(BallBodyExpr::unit_ball(vector(&[0.0, 0.0])).unwrap());
        assert!(hausdorff(&k, &k, &net).is_err());
    }

    #[test]
    fn circumball_examples() {
        let net = make_sphere_net(2, 0.02).unwrap();
        let ball = eval(BallBodyExpr::unit_ball(vector(&[1.0, 2.0])).unwrap());
        let cb = circumball(&ball, &net).unwrap();
        assert!((cb.center - vector(&[1.0, 2.0])).norm() < 1e-6);
        assert!((cb.radius - 1.0).abs() < 1e-6);

        let p = eval(BallBodyExpr::point(vector(&[-0.5, 0.25])).unwrap());
        let cb = circumball(&p, &net).unwrap();
        assert!((cb.center - vector(&[-0.5, 0.25])).norm() < 1e-9);
        assert!(cb.radius < 1e-9);

        let lens = eval(BallBodyExpr::generators(vec![vector(&[0.0, 0.0]), vector(&[1.0, 0.0])]).unwrap());
        let cb = circumball(&lens, &net).unwrap();
        // the discretized min-max has a flat optimum of width O(mesh)
        assert!((cb.center - vector(&[0.5, 0.0])).norm() < 2.0 * net.mesh());
        assert!((cb.radius - 3f64.sqrt() / 2.0).abs() < 1e-3);
    }

    #[test]
    fn membership() {
        let net = make_sphere_net(2, 0.02).unwrap();
        let c = vector(&[0.2, 0.1]);
        let k = eval(BallBodyExpr::unit_ball(c.clone()).unwrap());
        assert!(contains_point(&k, &c, &net).unwrap().inside);
        let far = &c + vector(&[1.0 + 1e-3, 0.0]);
        let m = contains_point(&k, &far, &net).unwrap();
        assert!(!m.inside);
        assert_eq!(m.exact, Some(false));
        // net verdict agrees away from the boundary
        let dual = eval(BallBodyExpr::unit_ball(c.clone()).unwrap().c_dual().unwrap().c_dual().unwrap());
        let m = contains_point(&dual, &far, &net).unwrap();
        assert!(!m.inside && m.exact.is_none());
        assert!((m.margin + 1e-3).abs() < 1e-6);
    }

    #[test]
    fn circumcenter_is_inside() {
        let net = make_sphere_net(2, 0.02).unwrap();
        let body = BallBodyExpr::generators(vec![
            vector(&[0.0, 0.0]),
            vector(&[0.8, 0.1]),
            vector(&[0.3, 0.7]),
        ])
        .unwrap();
        let k = eval(body);
        let cb = circumball(&k, &net).unwrap();
        assert!(contains_point(&k, &cb.center, &net).unwrap().inside);
    }

    #[test]
    fn refined_point_distance() {
        let net = make_sphere_net(2, 0.2).unwrap();
        let lens = eval(BallBodyExpr::generators(vec![vector(&[0.0, 0.0]), vector(&[1.0, 0.0])]).unwrap());
        // farthest points of the lens from (0.5, -3) is the upper tip
        let x = vector(&[0.5, -3.0]);
        let d = point_distance(&lens, &x, &net).unwrap();
        assert!((d - (3.0 + 3f64.sqrt() / 2.0)).abs() < 1e-6, "{d}");
        let ball = eval(BallBodyExpr::unit_ball(vector(&[0.0, 0.0])).unwrap());
        let d = point_distance(&ball, &vector(&[0.3, 0.4]), &net).unwrap();
        assert!((d - 1.5).abs() < 1e-9);
    }
}
