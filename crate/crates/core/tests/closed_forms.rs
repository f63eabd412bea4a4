//! Closed-form examples checked through the public API, each against an
//! independent route (formula, raster, or a planted answer).

use std::f64::consts::PI;

use ballbody::geom::{make_sphere_net, vector};
use ballbody::lab::{classify_isometry, ClassifyConfig, Kind, SnMap};
use ballbody::raster::{rasterize, Bounds};
use ballbody::{circumball, hausdorff, point_distance, BallBodyExpr, RigidMotion, SupportEval};

fn lens() -> BallBodyExpr {
    BallBodyExpr::generators(vec![vector(&[0.0, 0.0]), vector(&[1.0, 0.0])]).unwrap()
}

#[test]
fn lens_circumball_matches_the_tips() {
    let net = make_sphere_net(2, 0.02).unwrap();
    let b = circumball(&SupportEval::with_default_tol(lens()), &net).unwrap();
    // the net min-max is flat along x to within a mesh width; the radius is sharp
    assert!((&b.center - vector(&[0.5, 0.0])).norm() < 2.0 * net.mesh(), "{:?}", b.center);
    assert!((b.radius - 3f64.sqrt() / 2.0).abs() < 1e-3, "{}", b.radius);

    let k = lens();
    let r = rasterize(&k, 0.01, &Bounds::around(&[&k], 0.02)).unwrap();
    assert!((r.area() - (2.0 * PI / 3.0 - 3f64.sqrt() / 2.0)).abs() < 0.05);
    assert!((r.circumball().unwrap().radius - b.radius).abs() < 0.03);
}

#[test]
fn point_to_ball_is_one_plus_gap() {
    let net = make_sphere_net(2, 0.02).unwrap();
    for (x, y) in [([0.0, 0.0], [0.0, 0.0]), ([0.3, -0.4], [1.0, 1.0]), ([2.0, 0.0], [-1.0, 0.5])] {
        let (x, y) = (vector(&x), vector(&y));
        let p = SupportEval::with_default_tol(BallBodyExpr::point(x.clone()).unwrap());
        let b = SupportEval::with_default_tol(BallBodyExpr::unit_ball(y.clone()).unwrap());
        let d = hausdorff(&p, &b, &net).unwrap();
        let exact = 1.0 + (&x - &y).norm();
        assert!(d.lower() <= exact && exact <= d.upper(), "{d:?} vs {exact}");
    }
}

#[test]
fn farthest_point_of_a_lens() {
    // the upper tip (1/2, √3/2) is the farthest point from below
    let net = make_sphere_net(2, 0.02).unwrap();
    let d = point_distance(&SupportEval::with_default_tol(lens()), &vector(&[0.5, -2.0]), &net).unwrap();
    let exact = 2.0 + 3f64.sqrt() / 2.0;
    assert!((d - exact).abs() < 1e-3, "{d} vs {exact}");
}

#[test]
fn plain_duality_classifies_as_dual_with_identity_motion() {
    let net = make_sphere_net(2, 0.02).unwrap();
    let cfg = ClassifyConfig::standard(net, 1e-6, 0).unwrap();
    let c = classify_isometry(&SnMap::CDual, &cfg).unwrap();
    assert_eq!(c.kind, Kind::CDual);
    let id = RigidMotion::identity(2);
    assert!(c.motion.rotation_distance(&id) < 1e-4 && c.motion.translation_distance(&id) < 1e-4);
}

#[test]
fn planted_motion_is_recovered() {
    let net = make_sphere_net(2, 0.02).unwrap();
    let cfg = ClassifyConfig::standard(net, 1e-6, 3).unwrap();
    let g = RigidMotion::planar(1.1, true, [0.4, -1.3]);
    let c = classify_isometry(&SnMap::Motion(g.clone()), &cfg).unwrap();
    assert_eq!(c.kind, Kind::Identity);
    assert!(c.motion.rotation_distance(&g) < 1e-4 && c.motion.translation_distance(&g) < 1e-4);
    assert!(c.residual <= 5.0 * c.residual_error_bound);
}
