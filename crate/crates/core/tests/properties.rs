//! Property tests over random bodies, motions and point sets.

use std::f64::consts::TAU;

use approx::assert_abs_diff_eq;
use ballbody::body::{circumball_from_profile, profile_distance, SupportProfile};
use ballbody::geom::{make_sphere_net, vector, winding_number, SphereNet};
use ballbody::random::{random_body, random_in_box, random_motion};
use ballbody::raster::{raster_hausdorff, rasterize, Bounds};
use ballbody::{
    hausdorff, minimal_enclosing_ball, procrustes_fit, BallBodyExpr, Support, SupportEval, Vector,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-6;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn net(n: usize) -> SphereNet {
    make_sphere_net(n, if n == 2 { 0.02 } else { 0.1 }).unwrap()
}

fn profile(k: &BallBodyExpr, net: &SphereNet) -> SupportProfile {
    SupportProfile::new(&SupportEval::new(k.clone(), TOL).unwrap(), net).unwrap()
}

fn max_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn enclosing_ball_contains_and_touches(seed in any::<u64>(), n in 2usize..=4, count in 1usize..40) {
        let mut r = rng(seed);
        let pts: Vec<Vector> = (0..count).map(|_| random_in_box(&mut r, n, 3.0)).collect();
        let b = minimal_enclosing_ball(&pts).unwrap();
        let far = pts.iter().map(|p| (p - &b.center).norm()).fold(0.0, f64::max);
        prop_assert!(far <= b.radius * (1.0 + 1e-9) + 1e-12);
        // minimal: some point sits on the sphere, and no point pair is
        // farther apart than the diameter
        prop_assert!(far >= b.radius * (1.0 - 1e-9) - 1e-12);
        let diam = pts.iter().flat_map(|p| pts.iter().map(move |q| (p - q).norm())).fold(0.0, f64::max);
        prop_assert!(diam <= 2.0 * b.radius + 1e-9);
    }

    #[test]
    fn procrustes_recovers_planted_motion(seed in any::<u64>(), n in 2usize..=3, reflect in any::<bool>()) {
        let mut r = rng(seed);
        let g = random_motion(&mut r, n, 3.0, reflect);
        let src: Vec<Vector> = (0..(n + 4)).map(|_| random_in_box(&mut r, n, 2.0)).collect();
        let dst: Vec<Vector> = src.iter().map(|x| g.apply(x)).collect();
        let (fit, rms) = procrustes_fit(&src, &dst).unwrap();
        prop_assert!(rms < 1e-9);
        prop_assert!(fit.rotation_distance(&g) < 1e-8);
        prop_assert!(fit.translation_distance(&g) < 1e-8);
    }

    #[test]
    fn winding_survives_refinement(k in -3i64..=3, samples in 16usize..64, extra in 1usize..4, wobble in 0.0f64..0.3) {
        let curve = |t: f64| {
            let r = 1.0 + wobble * (3.0 * t).sin();
            [r * (k as f64 * t).cos(), r * (k as f64 * t).sin()]
        };
        let sample = |m: usize| -> Vec<(f64, [f64; 2])> {
            (0..m).map(|i| {
                let t = TAU * i as f64 / m as f64;
                (t, curve(t))
            }).collect()
        };
        let coarse = winding_number(&sample(samples)).unwrap();
        let fine = winding_number(&sample(samples * (extra + 1))).unwrap();
        prop_assert_eq!(coarse, k);
        prop_assert_eq!(fine, k);
    }

    #[test]
    fn double_dual_is_identity(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let k = random_body(&mut r, n, 2).unwrap();
        let net = net(n);
        let p = profile(&k, &net);
        let pcc = profile(&k.c_dual().unwrap().c_dual().unwrap(), &net);
        prop_assert!(max_gap(&p.values, &pcc.values) <= 2.0 * TOL);
    }

    #[test]
    fn support_identity_with_dual(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let k = random_body(&mut r, n, 2).unwrap();
        let (ek, ed) = (SupportEval::new(k.clone(), TOL).unwrap(), SupportEval::new(k.c_dual().unwrap(), TOL).unwrap());
        for u in net(n).directions().iter().step_by(7) {
            let s = ek.support(u).unwrap() + ed.support(&(-u)).unwrap();
            assert_abs_diff_eq!(s, 1.0, epsilon = 2.0 * TOL);
        }
    }

    #[test]
    fn duality_preserves_distance(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let (k, t) = (random_body(&mut r, n, 2).unwrap(), random_body(&mut r, n, 2).unwrap());
        let net = net(n);
        let d = profile_distance(&profile(&k, &net), &profile(&t, &net), &net);
        let dc = profile_distance(&profile(&k.c_dual().unwrap(), &net), &profile(&t.c_dual().unwrap(), &net), &net);
        let allow = d.error_bound + d.lower_slack + dc.error_bound + dc.lower_slack;
        prop_assert!((d.value - dc.value).abs() <= allow, "{} vs {} (allow {allow})", d.value, dc.value);
    }

    #[test]
    fn averaging_is_linear_along_the_segment(seed in any::<u64>(), n in 2usize..=3, l in 0.05f64..0.95) {
        let mut r = rng(seed);
        let (k, t) = (random_body(&mut r, n, 2).unwrap(), random_body(&mut r, n, 2).unwrap());
        let net = net(n);
        let m = BallBodyExpr::combine(l, &k, &t).unwrap();
        let (pk, pt, pm) = (profile(&k, &net), profile(&t, &net), profile(&m, &net));
        let d_km = profile_distance(&pk, &pm, &net);
        let d_kt = profile_distance(&pk, &pt, &net);
        let d_mt = profile_distance(&pm, &pt, &net);
        // sup-distance of supports scales exactly along a Minkowski segment
        prop_assert!((d_km.value - l * d_kt.value).abs() <= 4.0 * TOL);
        prop_assert!((d_mt.value - (1.0 - l) * d_kt.value).abs() <= 4.0 * TOL);
    }

    #[test]
    fn support_is_sublinear(seed in any::<u64>(), n in 2usize..=3, a in 0.1f64..2.0, b in 0.1f64..2.0) {
        let mut r = rng(seed);
        let k = SupportEval::new(random_body(&mut r, n, 2).unwrap(), TOL).unwrap();
        let net = net(n);
        let dirs = net.directions();
        for i in (0..dirs.len()).step_by(11) {
            let (u, v) = (&dirs[i], &dirs[(i * 7 + 3) % dirs.len()]);
            let w = u * a + v * b;
            let len = w.norm();
            if len < 1e-6 {
                continue;
            }
            let lhs = len * k.support(&(w / len)).unwrap();
            let rhs = a * k.support(u).unwrap() + b * k.support(v).unwrap();
            prop_assert!(lhs <= rhs + 4.0 * TOL * (a + b));
        }
    }

    #[test]
    fn circumradius_at_most_one(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let k = random_body(&mut r, n, 2).unwrap();
        let net = net(n);
        let ball = circumball_from_profile(&profile(&k, &net), &net).unwrap();
        prop_assert!(ball.radius <= 1.0 + 1e-4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 6, ..ProptestConfig::default() })]

    #[test]
    fn kernel_agrees_with_raster(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (k, t) = (random_body(&mut r, 2, 2).unwrap(), random_body(&mut r, 2, 2).unwrap());
        let cell = 0.01;
        let bounds = Bounds::around(&[&k, &t], 2.0 * cell);
        let net = net(2);
        let d = hausdorff(&SupportEval::new(k.clone(), TOL).unwrap(), &SupportEval::new(t.clone(), TOL).unwrap(), &net).unwrap();
        let dr = raster_hausdorff(&rasterize(&k, cell, &bounds).unwrap(), &rasterize(&t, cell, &bounds).unwrap()).unwrap();
        prop_assert!((d.value - dr).abs() <= d.error_bound + 4.0 * cell, "{} vs {dr}", d.value);
    }
}

#[test]
fn example_geodesic_is_additive() {
    let net = net(2);
    let u = vector(&[0.6, 0.8]);
    let path: Vec<BallBodyExpr> = [0.0, 0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|&t| ballbody::lab::point_then_ball_path(&u, t).unwrap())
        .collect();
    let profiles: Vec<SupportProfile> = path.iter().map(|k| profile(k, &net)).collect();
    for i in 0..path.len() {
        for j in i..path.len() {
            let d = profile_distance(&profiles[i], &profiles[j], &net);
            let exact = 0.25 * (j - i) as f64;
            assert!(d.lower() <= exact && exact <= d.upper(), "{i} {j}: {d:?}");
        }
    }
}
