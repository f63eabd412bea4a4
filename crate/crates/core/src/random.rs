//! Seeded random fixtures: bodies, motions and directions.
//!
//! Everything here is driven by an explicit RNG so that test suites and
//! self-test reports are reproducible from a single seed.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::body::BallBodyExpr;
use crate::error::Result;
use crate::geom::{random_orthogonal, RigidMotion, Vector};

pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector {
    loop {
        let g = Vector::from_iterator(dim, (0..dim).map(|_| StandardNormal.sample(rng)));
        let n = g.norm();
        if n > 1e-9 {
            return g / n;
        }
    }
}

/// Uniform point of the ball `B(0, radius)`.
pub fn random_in_ball<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> Vector {
    let u = random_unit(rng, dim);
    let r = radius * rng.random::<f64>().powf(1.0 / dim as f64);
    u * r
}

pub fn random_in_box<R: Rng + ?Sized>(rng: &mut R, dim: usize, half_width: f64) -> Vector {
    Vector::from_iterator(dim, (0..dim).map(|_| rng.random_range(-half_width..=half_width)))
}

/// Random rigid motion with translation uniform in `[-t, t]^n`.
pub fn random_motion<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_translation: f64, reflect: bool) -> RigidMotion {
    let q = random_orthogonal(dim, reflect, rng);
    let t = random_in_box(rng, dim, max_translation);
    RigidMotion::new(q, t).expect("orthogonal by construction")
}

/// Generator body with `count` centers within `0.9` of an anchor drawn
/// from `[-spread, spread]^n`. The body contains `B(anchor, 0.1)`.
pub fn random_generators<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize, spread: f64) -> BallBodyExpr {
    let anchor = random_in_box(rng, dim, spread);
    let centers = (0..count.max(1)).map(|_| &anchor + random_in_ball(rng, dim, 0.9)).collect();
    BallBodyExpr::generators(centers).expect("centers fit in a unit ball")
}

/// Random expression tree of depth at most `depth + 1`, mixing every
/// node kind.
pub fn random_body<R: Rng + ?Sized>(rng: &mut R, dim: usize, depth: usize) -> Result<BallBodyExpr> {
    if depth == 0 || rng.random_bool(0.35) {
        let count = rng.random_range(1..=5);
        return Ok(random_generators(rng, dim, count, 1.0));
    }
    match rng.random_range(0..3) {
        0 => random_body(rng, dim, depth - 1)?.c_dual(),
        1 => {
            let lambda = rng.random::<f64>();
            let a = random_body(rng, dim, depth - 1)?;
            let b = random_body(rng, dim, depth - 1)?;
            BallBodyExpr::combine(lambda, &a, &b)
        }
        _ => {
            let reflect = rng.random_bool(0.5);
            let g = random_motion(rng, dim, 1.0, reflect);
            BallBodyExpr::apply_motion(&g, &random_body(rng, dim, depth - 1)?)
        }
    }
}
