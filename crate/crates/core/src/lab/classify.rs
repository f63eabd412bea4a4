//! Isometry screening and classification of maps `S_n -> S_n`.
//!
//! An isometry either sends points to points (and is then a rigid motion)
//! or sends unit balls to points (and is then a rigid motion composed with
//! c-duality). The classifier probes a lattice of points and unit balls,
//! decides the branch from the circumradii of the images, fits the motion
//! to the circumcenters and verifies it on random test bodies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::maps::BodyMap;
use crate::body::{circumball, hausdorff, BallBodyExpr, SupportEval};
use crate::error::{Error, Result};
use crate::geom::{procrustes_fit, RigidMotion, SphereNet, Vector};
use crate::par;
use crate::random::random_generators;

/// Certified comparison of `δ(TK, TL)` with `δ(K, L)` over probe pairs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DefectReport {
    /// Largest `|δ(TK,TL) - δ(K,L)|` compatible with the certified
    /// intervals.
    pub worst_case: f64,
    /// Largest difference of the computed values.
    pub estimate: f64,
    /// Largest drift from zero an exact isometry could show on a pair.
    pub allowance: f64,
    /// Largest amount by which a pair's difference exceeds its allowance.
    pub excess: f64,
}

impl DefectReport {
    pub fn passes(&self, defect_tol: f64) -> bool {
        self.excess <= defect_tol
    }
}

fn eval_at<M: BodyMap + ?Sized>(t: &M, k: &BallBodyExpr, index: usize) -> Result<BallBodyExpr> {
    t.evaluate(k).map_err(|e| Error::Evaluation { index, source: Box::new(e) })
}

fn eval(k: BallBodyExpr, tol: f64) -> Result<SupportEval> {
    SupportEval::new(k, tol)
}

pub fn isometry_defect<M: BodyMap + ?Sized>(
    t: &M,
    probes: &[(BallBodyExpr, BallBodyExpr)],
    net: &SphereNet,
    tol: f64,
) -> Result<DefectReport> {
    let indexed: Vec<usize> = (0..probes.len()).collect();
    let rows = par::try_map(&indexed, |&i| {
        let (k, l) = &probes[i];
        let (tk, tl) = (eval_at(t, k, i)?, eval_at(t, l, i)?);
        let wrap = |e: Error| Error::Evaluation { index: i, source: Box::new(e) };
        let d0 = hausdorff(&eval(k.clone(), tol)?, &eval(l.clone(), tol)?, net).map_err(wrap)?;
        let d1 = hausdorff(&eval(tk, tol)?, &eval(tl, tol)?, net).map_err(wrap)?;
        let worst = (d1.upper() - d0.lower()).abs().max((d1.lower() - d0.upper()).abs());
        let est = (d1.value - d0.value).abs();
        let allow = d0.error_bound + d0.lower_slack + d1.error_bound + d1.lower_slack;
        Ok::<_, Error>((worst, est, allow))
    })?;
    let mut report = DefectReport { worst_case: 0.0, estimate: 0.0, allowance: 0.0, excess: f64::NEG_INFINITY };
    for (w, e, a) in rows {
        report.worst_case = report.worst_case.max(w);
        report.estimate = report.estimate.max(e);
        report.allowance = report.allowance.max(a);
        report.excess = report.excess.max(e - a);
    }
    report.excess = report.excess.max(0.0);
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    Identity,
    CDual,
}

#[derive(Clone, Debug)]
pub struct ClassifyConfig {
    pub net: SphereNet,
    pub tol: f64,
    /// Circumradius below which an image counts as a point.
    pub r_tol: f64,
    pub defect_tol: f64,
    pub lattice_spacing: f64,
    pub lattice_radius: f64,
    pub test_bodies: Vec<BallBodyExpr>,
    pub screening: Vec<(BallBodyExpr, BallBodyExpr)>,
}

pub const R_TOL: f64 = 1e-3;

impl ClassifyConfig {
    /// Lattice of spacing 1 within radius 3, 20 random generator bodies
    /// with 2 to 5 centers, and a mixed screening set, all from `seed`.
    pub fn standard(net: SphereNet, tol: f64, seed: u64) -> Result<Self> {
        let n = net.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc1a5_5e5);
        let test_bodies = (0..20)
            .map(|_| {
                let count = rng.random_range(2..=5);
                random_generators(&mut rng, n, count, 1.5)
            })
            .collect();
        let mut screening = Vec::new();
        for _ in 0..4 {
            let (ca, cb) = (rng.random_range(1..=4), rng.random_range(1..=4));
            let a = random_generators(&mut rng, n, ca, 1.5);
            let b = random_generators(&mut rng, n, cb, 1.5);
            screening.push((a, b));
        }
        for _ in 0..2 {
            let p = crate::random::random_in_box(&mut rng, n, 2.0);
            let q = crate::random::random_in_box(&mut rng, n, 2.0);
            screening.push((BallBodyExpr::point(p.clone())?, BallBodyExpr::point(q.clone())?));
            screening.push((BallBodyExpr::point(p)?, BallBodyExpr::unit_ball(q)?));
        }
        Ok(ClassifyConfig {
            net,
            tol,
            r_tol: R_TOL,
            defect_tol: 1e-3,
            lattice_spacing: 1.0,
            lattice_radius: 3.0,
            test_bodies,
            screening,
        })
    }

    /// Lattice points `spacing · Z^n` with norm at most `lattice_radius`.
    pub fn lattice(&self) -> Vec<Vector> {
        let n = self.net.dim();
        let m = (self.lattice_radius / self.lattice_spacing).floor() as i64;
        let mut out = Vec::new();
        let mut idx = vec![-m; n];
        loop {
            let p = Vector::from_iterator(n, idx.iter().map(|&i| i as f64 * self.lattice_spacing));
            if p.norm() <= self.lattice_radius + 1e-12 {
                out.push(p);
            }
            let mut a = 0;
            while a < n && idx[a] == m {
                idx[a] = -m;
                a += 1;
            }
            if a == n {
                break;
            }
            idx[a] += 1;
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IsometryClassification {
    pub kind: Kind,
    #[serde(serialize_with = "super::ser_motion")]
    pub motion: RigidMotion,
    /// `max δ(TK, gK)` or `max δ(TK, g K^c)` over the test bodies.
    pub residual: f64,
    /// Largest certified error bound among the residual distances.
    pub residual_error_bound: f64,
    pub isometry_defect: f64,
    pub screening: DefectReport,
    pub point_image_radius: f64,
    pub ball_image_radius: f64,
    pub r_tol: f64,
    pub fit_rms: f64,
    pub lattice_size: usize,
}

pub fn classify_isometry<M: BodyMap + ?Sized>(t: &M, config: &ClassifyConfig) -> Result<IsometryClassification> {
    let net = &config.net;
    let n = net.dim();
    let screening = isometry_defect(t, &config.screening, net, config.tol)?;
    if !screening.passes(config.defect_tol) {
        return Err(Error::NotIsometry(format!(
            "fails isometry screening: distance defect exceeds its allowance by {:.6} (tolerance {:.1e})",
            screening.excess, config.defect_tol
        )));
    }

    let lattice = config.lattice();
    let indexed: Vec<usize> = (0..lattice.len()).collect();
    let images = par::try_map(&indexed, |&i| {
        let x = &lattice[i];
        let tp = eval_at(t, &BallBodyExpr::point(x.clone())?, i)?;
        let tb = eval_at(t, &BallBodyExpr::unit_ball(x.clone())?, i)?;
        if tp.dim() != n || tb.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: tp.dim() });
        }
        let cp = circumball(&eval(tp, config.tol)?, net)?;
        let cb = circumball(&eval(tb, config.tol)?, net)?;
        Ok::<_, Error>((cp, cb))
    })?;
    let point_r = images.iter().map(|(p, _)| p.radius).fold(0.0, f64::max);
    let ball_r = images.iter().map(|(_, b)| b.radius).fold(0.0, f64::max);
    let kind = match (point_r <= config.r_tol, ball_r <= config.r_tol) {
        (true, false) => Kind::Identity,
        (false, true) => Kind::CDual,
        (true, true) => {
            return Err(Error::Ambiguous(format!(
                "both points (radius {point_r:.3e}) and unit balls (radius {ball_r:.3e}) map to near-points"
            )))
        }
        (false, false) => {
            return Err(Error::NotIsometry(format!(
                "neither points (radius {point_r:.3e}) nor unit balls (radius {ball_r:.3e}) map to points within {:.1e}",
                config.r_tol
            )))
        }
    };
    let targets: Vec<Vector> = images
        .into_iter()
        .map(|(p, b)| if kind == Kind::Identity { p.center } else { b.center })
        .collect();
    let (motion, fit_rms) = procrustes_fit(&lattice, &targets)?;

    let rows = par::try_map(&config.test_bodies, |k| {
        let tk = t.evaluate(k)?;
        let base = if kind == Kind::Identity { k.clone() } else { k.c_dual()? };
        let gk = BallBodyExpr::apply_motion(&motion, &base)?;
        let d = hausdorff(&eval(tk, config.tol)?, &eval(gk, config.tol)?, net)?;
        Ok::<_, Error>((d.value, d.error_bound))
    })?;
    let residual = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let residual_error_bound = rows.iter().map(|r| r.1).fold(0.0, f64::max);

    Ok(IsometryClassification {
        kind,
        motion,
        residual,
        residual_error_bound,
        isometry_defect: screening.worst_case,
        screening,
        point_image_radius: point_r,
        ball_image_radius: ball_r,
        r_tol: config.r_tol,
        fit_rms,
        lattice_size: lattice.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::make_sphere_net;
    use crate::lab::SnMap;
    use crate::random::random_motion;

    fn config(n: usize, mesh: f64) -> ClassifyConfig {
        ClassifyConfig::standard(make_sphere_net(n, mesh).unwrap(), 1e-6, 11).unwrap()
    }

    #[test]
    fn lattice_counts() {
        assert_eq!(config(2, 0.05).lattice().len(), 29);
        assert_eq!(config(3, 0.2).lattice().len(), 123);
    }

    #[test]
    fn identity_and_cdual() {
        let cfg = config(2, 0.02);
        let id = classify_isometry(&SnMap::Compose(vec![]), &cfg).unwrap();
        assert_eq!(id.kind, Kind::Identity);
        assert!(id.motion.rotation_distance(&RigidMotion::identity(2)) < 1e-4);
        assert!(id.residual <= 5.0 * id.residual_error_bound);

        let cd = classify_isometry(&SnMap::CDual, &cfg).unwrap();
        assert_eq!(cd.kind, Kind::CDual);
        assert!(cd.motion.translation().norm() < 1e-4);
        assert!(cd.residual <= 5.0 * cd.residual_error_bound);
    }

    #[test]
    fn planted_motion_after_cdual_in_space() {
        let cfg = config(3, 0.08);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = random_motion(&mut rng, 3, 1.0, true);
        let map = SnMap::Compose(vec![SnMap::Motion(g.clone()), SnMap::CDual]);
        let c = classify_isometry(&map, &cfg).unwrap();
        assert_eq!(c.kind, Kind::CDual);
        assert!(c.motion.rotation_distance(&g) < 1e-4);
        assert!(c.motion.translation_distance(&g) < 1e-4);
    }

    #[test]
    fn constant_and_scale_rejected() {
        let cfg = config(2, 0.02);
        let k = BallBodyExpr::unit_ball(Vector::zeros(2)).unwrap();
        for m in [SnMap::Constant(k), SnMap::Scale(0.5)] {
            let e = classify_isometry(&m, &cfg).unwrap_err();
            assert_eq!(e.exit_code(), 4, "{e}");
        }
    }

    #[test]
    fn defect_of_exact_isometries_within_allowance() {
        let cfg = config(2, 0.02);
        for m in [SnMap::CDual, SnMap::Compose(vec![])] {
            let d = isometry_defect(&m, &cfg.screening, &cfg.net, cfg.tol).unwrap();
            assert_eq!(d.excess, 0.0, "{d:?}");
        }
    }

    #[test]
    fn constant_map_defect_is_probe_diameter() {
        let cfg = config(2, 0.02);
        let k = BallBodyExpr::unit_ball(Vector::zeros(2)).unwrap();
        let d = isometry_defect(&SnMap::Constant(k), &cfg.screening, &cfg.net, cfg.tol).unwrap();
        let mut diam: f64 = 0.0;
        for (a, b) in &cfg.screening {
            let h = hausdorff(&SupportEval::with_default_tol(a.clone()), &SupportEval::with_default_tol(b.clone()), &cfg.net)
                .unwrap();
            diam = diam.max(h.value);
        }
        assert!((d.estimate - diam).abs() < 1e-9);
    }
}
