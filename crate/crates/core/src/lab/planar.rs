//! Degree-based surjectivity evidence for planar maps.
//!
//! For a continuous ε-isometry `f` and a target `y`, a rigid motion `U`
//! fitted on a large disk stays within `C` of `f`. On the circle of radius
//! `R > 2 (|y - f(0)| + C + ε)` the straight-line homotopy between
//! `f - y` and `U - y` avoids the origin, so `f - y` winds `±1` times and
//! `f` has a preimage of `y` inside. The verifier measures `ε` and `C`
//! empirically, certifies the windings by sampling with bounded angular
//! steps, and then locates a preimage by degree bisection.

use std::cell::RefCell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::maps::PlanarMap;
use crate::error::{Error, Result};
use crate::geom::{adaptive_winding, procrustes_fit, RigidMotion, Vector};
use crate::random::random_in_ball;

type P2 = [f64; 2];

fn dist(a: P2, b: P2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn sub(a: P2, b: P2) -> P2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// `max | |f(x) - f(x')| - |x - x'| |` over `samples` random pairs in the
/// disk of the given radius, plus pairs straddling the origin. A lower
/// bound on the true ε.
pub fn eps_isometry_defect_planar<F: PlanarMap + ?Sized>(f: &F, radius: f64, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut check = |x: P2, z: P2| {
        let d = (dist(f.evaluate(x), f.evaluate(z)) - dist(x, z)).abs();
        worst = worst.max(d);
    };
    for _ in 0..samples {
        let x = random_in_ball(&mut rng, 2, radius);
        let z = random_in_ball(&mut rng, 2, radius);
        check([x[0], x[1]], [z[0], z[1]]);
    }
    // short symmetric pairs expose local tearing that uniform pairs miss
    for k in 0..samples.min(64) {
        let a = std::f64::consts::TAU * k as f64 / 64.0;
        let r = radius * 1e-3 * (1.0 + k as f64);
        check([r * a.cos(), r * a.sin()], [-r * a.cos(), -r * a.sin()]);
    }
    worst
}

#[derive(Clone, Debug)]
pub struct SurjectivityConfig {
    pub eps_samples: usize,
    pub fit_samples: usize,
    pub initial_samples: usize,
    pub budget: usize,
    pub root_tol: f64,
    pub homotopy_steps: usize,
    pub max_bisections: usize,
    pub seed: u64,
}

impl Default for SurjectivityConfig {
    fn default() -> Self {
        SurjectivityConfig {
            eps_samples: 2000,
            fit_samples: 400,
            initial_samples: 64,
            budget: 1 << 16,
            root_tol: 1e-6,
            homotopy_steps: 10,
            max_bisections: 200,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    SurjectiveEvidence { preimage: P2, residual: f64 },
    Violation { hypothesis: Hypothesis, witness: Witness },
}

/// Which premise of the surjectivity argument the map fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Hypothesis {
    /// Not a continuous ε-isometry: the degree forces a zero that the map
    /// never attains because it tears a neighbourhood apart.
    Continuity,
    /// Not close to a rigid motion at the scale `R`: the degree on the
    /// circle differs from the fitted motion's.
    EpsIsometry,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Witness {
    /// A square of the given half-width around `center` whose boundary
    /// image still winds around the target although its diameter stays
    /// `oscillation`; `min_residual` is the smallest `|f(x) - y|` seen.
    Discontinuity { center: P2, half_width: f64, oscillation: f64, min_residual: f64 },
    /// Winding numbers that disagree on circles around the origin.
    DegreeMismatch { radius: f64, winding: i64, fitted: i64, min_residual: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct SurjectivityReport {
    pub target: P2,
    pub epsilon_hat: f64,
    #[serde(serialize_with = "super::ser_motion")]
    pub affine_fit: RigidMotion,
    pub fit_error: f64,
    pub radius: f64,
    /// `(radius, winding of f - y)` on the tested circles.
    pub degrees: Vec<(f64, i64)>,
    /// Winding of `U - y` on the circle of radius `radius`.
    pub fitted_degree: i64,
    /// Smallest `|(1 - t)(f - y) + t(U - y)|` on the homotopy grid.
    pub homotopy_min: f64,
    pub verdict: Verdict,
    /// Finite-resolution evidence, not a proof.
    pub note: &'static str,
}

const NOTE: &str = "evidence at finite resolution: windings sampled with angular steps below pi/2";

fn circle(r: f64, t: f64) -> P2 {
    [r * t.cos(), r * t.sin()]
}

/// Fits a rigid motion to `f` on the disk of radius `r`; returns it with
/// the largest deviation `max |f(x) - U(x)|` over the sample.
fn fit_on_disk<F: PlanarMap + ?Sized>(f: &F, r: f64, samples: usize, seed: u64) -> Result<(RigidMotion, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs: Vec<P2> = (0..samples)
        .map(|_| {
            let v = random_in_ball(&mut rng, 2, r);
            [v[0], v[1]]
        })
        .collect();
    xs.extend((0..64).map(|k| circle(r, std::f64::consts::TAU * k as f64 / 64.0)));
    let src: Vec<Vector> = xs.iter().map(|x| Vector::from_column_slice(x)).collect();
    let tgt: Vec<Vector> = xs.iter().map(|x| Vector::from_column_slice(&f.evaluate(*x))).collect();
    let (u, _) = procrustes_fit(&src, &tgt)?;
    let c = xs
        .iter()
        .map(|x| dist(f.evaluate(*x), super::maps::apply2(&u, *x)))
        .fold(0.0, f64::max);
    Ok((u, c))
}

struct Tracker {
    best: P2,
    best_res: f64,
}

/// Winding of `f - y` along a closed curve, remembering the sample closest
/// to a preimage. A sample that lands on `y` is reported as `Ok(None)`.
fn traced_winding<F: PlanarMap + ?Sized>(
    f: &F,
    y: P2,
    curve: impl Fn(f64) -> P2,
    cfg: &SurjectivityConfig,
    tracker: &RefCell<Tracker>,
) -> Result<Option<i64>> {
    let result = adaptive_winding(
        |t| {
            let x = curve(t);
            let v = sub(f.evaluate(x), y);
            let res = v[0].hypot(v[1]);
            let mut tr = tracker.borrow_mut();
            if res < tr.best_res {
                tr.best_res = res;
                tr.best = x;
            }
            v
        },
        cfg.initial_samples,
        cfg.budget,
    );
    match result {
        Ok((w, _)) => Ok(Some(w)),
        Err(Error::CurveHitsOrigin { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn surjectivity_probe_planar<F: PlanarMap + ?Sized>(
    f: &F,
    target: P2,
    cfg: &SurjectivityConfig,
) -> Result<SurjectivityReport> {
    let f0 = f.evaluate([0.0, 0.0]);
    let offset = dist(target, f0);
    let mut r = 2.0 * (offset + 1.0);
    let (mut eps, mut fit, mut c);
    let mut round = 0u64;
    loop {
        eps = eps_isometry_defect_planar(f, r, cfg.eps_samples, cfg.seed ^ round);
        (fit, c) = fit_on_disk(f, r, cfg.fit_samples, cfg.seed ^ (round + 0x100))?;
        let needed = 2.0 * (offset + c + eps);
        round += 1;
        if needed <= r || round >= 8 {
            r = r.max(needed);
            break;
        }
        r = needed;
    }

    let tracker = RefCell::new(Tracker { best: [0.0, 0.0], best_res: f64::INFINITY });
    let mut degrees = Vec::new();
    for scale in [1.0, 1.5, 2.0] {
        let rr = r * scale;
        let w = traced_winding(f, target, |t| circle(rr, t), cfg, &tracker)?;
        degrees.push((rr, w.unwrap_or(0)));
    }
    let fitted = adaptive_winding(
        |t| sub(super::maps::apply2(&fit, circle(r, t)), target),
        cfg.initial_samples,
        cfg.budget,
    )?
    .0;

    let mut homotopy_min = f64::INFINITY;
    let m = 4 * cfg.initial_samples;
    for k in 0..m {
        let x = circle(r, std::f64::consts::TAU * k as f64 / m as f64);
        let a = sub(f.evaluate(x), target);
        let b = sub(super::maps::apply2(&fit, x), target);
        for j in 0..=cfg.homotopy_steps {
            let s = j as f64 / cfg.homotopy_steps as f64;
            let v = [(1.0 - s) * a[0] + s * b[0], (1.0 - s) * a[1] + s * b[1]];
            homotopy_min = homotopy_min.min(v[0].hypot(v[1]));
        }
    }

    let consistent = fitted != 0 && homotopy_min > 0.0 && degrees.iter().all(|&(_, w)| w == fitted);
    let verdict = if !consistent {
        let &(radius, winding) = degrees.iter().find(|&&(_, w)| w != fitted).unwrap_or(&degrees[0]);
        Verdict::Violation {
            hypothesis: Hypothesis::EpsIsometry,
            witness: Witness::DegreeMismatch { radius, winding, fitted, min_residual: tracker.borrow().best_res },
        }
    } else {
        bisect(f, target, r, cfg, &tracker)?
    };

    Ok(SurjectivityReport {
        target,
        epsilon_hat: eps,
        affine_fit: fit,
        fit_error: c,
        radius: r,
        degrees,
        fitted_degree: fitted,
        homotopy_min,
        verdict,
        note: NOTE,
    })
}

/// Degree bisection: keeps a sub-rectangle whose boundary still winds
/// around the target. Splits are jittered so that the preimage is
/// unlikely to sit on a boundary; child windings sum to the parent's, so
/// a winding child always exists unless a boundary sample hits `y`.
fn bisect<F: PlanarMap + ?Sized>(
    f: &F,
    y: P2,
    r: f64,
    cfg: &SurjectivityConfig,
    tracker: &RefCell<Tracker>,
) -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb15e_c7);
    let done = |tr: &RefCell<Tracker>| {
        let t = tr.borrow();
        (t.best_res <= cfg.root_tol).then(|| Verdict::SurjectiveEvidence { preimage: t.best, residual: t.best_res })
    };
    let mut q = [-r, r, -r, r];
    let w = traced_winding(f, y, |t| rect(q, t), cfg, tracker)?;
    if let Some(v) = done(tracker) {
        return Ok(v);
    }
    if w == Some(0) {
        let w = Witness::DegreeMismatch { radius: r, winding: 0, fitted: 1, min_residual: tracker.borrow().best_res };
        return Ok(Verdict::Violation { hypothesis: Hypothesis::EpsIsometry, witness: w });
    }
    for _ in 0..cfg.max_bisections {
        let center = [(q[0] + q[1]) / 2.0, (q[2] + q[3]) / 2.0];
        let res = dist(f.evaluate(center), y);
        {
            let mut tr = tracker.borrow_mut();
            if res < tr.best_res {
                tr.best_res = res;
                tr.best = center;
            }
        }
        if let Some(v) = done(tracker) {
            return Ok(v);
        }
        let (wx, wy) = (q[1] - q[0], q[3] - q[2]);
        if wx.max(wy) < 1e-14 * (1.0 + r) {
            break;
        }
        let sx = center[0] + wx * rng.random_range(-0.1..0.1);
        let sy = center[1] + wy * rng.random_range(-0.1..0.1);
        let quads = [[q[0], sx, q[2], sy], [sx, q[1], q[2], sy], [q[0], sx, sy, q[3]], [sx, q[1], sy, q[3]]];
        let mut next = None;
        for c in quads {
            let w = traced_winding(f, y, |t| rect(c, t), cfg, tracker)?;
            if let Some(v) = done(tracker) {
                return Ok(v);
            }
            if w.is_some_and(|w| w != 0) {
                next = Some(c);
                break;
            }
        }
        match next {
            Some(c) => q = c,
            None => return Err(Error::ResolutionExhausted { samples: cfg.budget }),
        }
    }
    let center = [(q[0] + q[1]) / 2.0, (q[2] + q[3]) / 2.0];
    let half_width = (q[1] - q[0]).max(q[3] - q[2]) / 2.0;
    let pts: Vec<P2> = (0..64).map(|k| f.evaluate(rect(q, std::f64::consts::TAU * k as f64 / 64.0))).collect();
    let oscillation = pts.iter().flat_map(|a| pts.iter().map(move |b| dist(*a, *b))).fold(0.0, f64::max);
    let t = tracker.borrow();
    Ok(Verdict::Violation {
        hypothesis: Hypothesis::Continuity,
        witness: Witness::Discontinuity { center, half_width, oscillation, min_residual: t.best_res },
    })
}

/// Boundary of the rectangle `[x0, x1] × [y0, y1]`, counter-clockwise,
/// parametrized by `[0, 2π)`.
fn rect(q: [f64; 4], t: f64) -> P2 {
    let s = (t / std::f64::consts::TAU * 4.0).rem_euclid(4.0);
    let side = s.floor();
    let a = 2.0 * (s - side) - 1.0;
    let (dx, dy) = match side as u8 {
        0 => (1.0, a),
        1 => (-a, 1.0),
        2 => (-1.0, -a),
        _ => (a, -1.0),
    };
    let c = [(q[0] + q[1]) / 2.0, (q[2] + q[3]) / 2.0];
    [c[0] + dx * (q[1] - q[0]) / 2.0, c[1] + dy * (q[3] - q[2]) / 2.0]
}
