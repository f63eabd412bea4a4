//! Black-box maps and their JSON descriptions.
//!
//! ```json
//! {"map":"motion","rotation":[[0,-1],[1,0]],"translation":[1,0]}
//! {"map":"cdual"}
//! {"map":"compose","of":[<map>, ...]}
//! {"map":"constant","body":<body>}
//! {"map":"scale","factor":0.5}
//! {"map":"planar_rigid","angle":0.3,"reflect":false,"translation":[1,2]}
//! {"map":"planar_perturbed","amplitude":0.2,"seed":7}
//! {"map":"planar_radial_hole"}
//! ```
//! `compose` applies its last entry first, so `of[0]` is the outermost
//! map. `scale` sends `K` to `factor · K`, which stays a ball body for
//! factors in `[0, 1]`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::body::doc::{motion_from_rows, BodyDoc};
use crate::body::BallBodyExpr;
use crate::error::{Error, Result};
use crate::geom::{RigidMotion, Vector};

/// A map `S_n -> S_n` given as a procedure.
pub trait BodyMap: Sync {
    fn evaluate(&self, k: &BallBodyExpr) -> Result<BallBodyExpr>;
}

/// A map of the plane given as a procedure.
pub trait PlanarMap: Sync {
    fn evaluate(&self, x: [f64; 2]) -> [f64; 2];
}

impl<F: Fn(&BallBodyExpr) -> Result<BallBodyExpr> + Sync> BodyMap for F {
    fn evaluate(&self, k: &BallBodyExpr) -> Result<BallBodyExpr> {
        self(k)
    }
}

/// Body maps expressible as documents.
#[derive(Clone, Debug)]
pub enum SnMap {
    Motion(RigidMotion),
    CDual,
    /// `of[0] ∘ of[1] ∘ ...`
    Compose(Vec<SnMap>),
    Constant(BallBodyExpr),
    Scale(f64),
}

impl BodyMap for SnMap {
    fn evaluate(&self, k: &BallBodyExpr) -> Result<BallBodyExpr> {
        match self {
            SnMap::Motion(g) => BallBodyExpr::apply_motion(g, k),
            SnMap::CDual => k.c_dual(),
            SnMap::Compose(of) => of.iter().rev().try_fold(k.clone(), |acc, m| m.evaluate(&acc)),
            SnMap::Constant(body) => {
                if body.dim() != k.dim() {
                    return Err(Error::DimensionMismatch { expected: k.dim(), got: body.dim() });
                }
                Ok(body.clone())
            }
            SnMap::Scale(s) => {
                let origin = BallBodyExpr::point(Vector::zeros(k.dim()))?;
                BallBodyExpr::combine(*s, &origin, k)
            }
        }
    }
}

/// Planar maps expressible as documents.
#[derive(Clone, Debug)]
pub enum PlanarMapSpec {
    Rigid(RigidMotion),
    /// `g(x) + a (sin(ω x₂ + φ₁), cos(ω x₁ + φ₂))`.
    Perturbed { base: RigidMotion, amplitude: f64, omega: f64, phase: [f64; 2] },
    /// `x ↦ (|x| + 1) x / |x|`, with `0 ↦ (1, 0)`.
    RadialHole,
}

impl PlanarMap for PlanarMapSpec {
    fn evaluate(&self, x: [f64; 2]) -> [f64; 2] {
        match self {
            PlanarMapSpec::Rigid(g) => apply2(g, x),
            PlanarMapSpec::Perturbed { base, amplitude, omega, phase } => {
                let y = apply2(base, x);
                [
                    y[0] + amplitude * (omega * x[1] + phase[0]).sin(),
                    y[1] + amplitude * (omega * x[0] + phase[1]).cos(),
                ]
            }
            PlanarMapSpec::RadialHole => {
                let r = x[0].hypot(x[1]);
                if r == 0.0 {
                    [1.0, 0.0]
                } else {
                    let s = (r + 1.0) / r;
                    [s * x[0], s * x[1]]
                }
            }
        }
    }
}

impl<F: Fn([f64; 2]) -> [f64; 2] + Sync> PlanarMap for F {
    fn evaluate(&self, x: [f64; 2]) -> [f64; 2] {
        self(x)
    }
}

pub(crate) fn apply2(g: &RigidMotion, x: [f64; 2]) -> [f64; 2] {
    let y = g.apply(&Vector::from_column_slice(&x));
    [y[0], y[1]]
}

/// Map description document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "map", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapDoc {
    Motion { rotation: Vec<Vec<f64>>, translation: Vec<f64> },
    Cdual,
    Compose { of: Vec<MapDoc> },
    Constant { body: BodyDoc },
    Scale { factor: f64 },
    PlanarRigid {
        #[serde(default)]
        angle: f64,
        #[serde(default)]
        reflect: bool,
        #[serde(default)]
        translation: [f64; 2],
    },
    PlanarPerturbed {
        amplitude: f64,
        #[serde(default)]
        seed: u64,
    },
    PlanarRadialHole,
}

/// Either kind of map a document can describe.
#[derive(Clone, Debug)]
pub enum AnyMap {
    Body(SnMap),
    Planar(PlanarMapSpec),
}

impl MapDoc {
    pub fn build(&self) -> Result<AnyMap> {
        Ok(match self {
            MapDoc::PlanarRigid { angle, reflect, translation } => {
                AnyMap::Planar(PlanarMapSpec::Rigid(RigidMotion::planar(*angle, *reflect, *translation)))
            }
            MapDoc::PlanarPerturbed { amplitude, seed } => AnyMap::Planar(perturbed(*amplitude, *seed)?),
            MapDoc::PlanarRadialHole => AnyMap::Planar(PlanarMapSpec::RadialHole),
            other => AnyMap::Body(other.body_map()?),
        })
    }

    pub fn body_map(&self) -> Result<SnMap> {
        match self {
            MapDoc::Motion { rotation, translation } => Ok(SnMap::Motion(motion_from_rows(rotation, translation)?)),
            MapDoc::Cdual => Ok(SnMap::CDual),
            MapDoc::Compose { of } => Ok(SnMap::Compose(of.iter().map(|m| m.body_map()).collect::<Result<_>>()?)),
            MapDoc::Constant { body } => Ok(SnMap::Constant(body.build()?)),
            MapDoc::Scale { factor } => {
                if !(0.0..=1.0).contains(factor) {
                    return Err(Error::InvalidArgument(format!("scale factor must lie in [0, 1], got {factor}")));
                }
                Ok(SnMap::Scale(*factor))
            }
            _ => Err(Error::InvalidArgument("planar map where a body map is required".into())),
        }
    }

    pub fn planar_map(&self) -> Result<PlanarMapSpec> {
        match self.build()? {
            AnyMap::Planar(p) => Ok(p),
            AnyMap::Body(_) => Err(Error::InvalidArgument("body map where a planar map is required".into())),
        }
    }
}

/// Seeded random rigid base with a bounded smooth perturbation of the
/// given amplitude.
pub fn perturbed(amplitude: f64, seed: u64) -> Result<PlanarMapSpec> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(Error::InvalidArgument(format!("amplitude must be >= 0, got {amplitude}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    let reflect = rng.random_bool(0.5);
    let t = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
    let phase = [rng.random_range(0.0..std::f64::consts::TAU), rng.random_range(0.0..std::f64::consts::TAU)];
    Ok(PlanarMapSpec::Perturbed { base: RigidMotion::planar(angle, reflect, t), amplitude, omega: 1.0, phase })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::doc::parse_json;
    use crate::geom::vector;

    #[test]
    fn parses_every_map_kind() {
        let docs = [
            r#"{"map":"motion","rotation":[[0,-1],[1,0]],"translation":[1,0]}"#,
            r#"{"map":"cdual"}"#,
            r#"{"map":"compose","of":[{"map":"cdual"},{"map":"scale","factor":0.5}]}"#,
            r#"{"map":"constant","body":{"type":"generators","centers":[[0,0]]}}"#,
            r#"{"map":"planar_rigid","angle":0.3,"translation":[1,2]}"#,
            r#"{"map":"planar_perturbed","amplitude":0.2,"seed":3}"#,
            r#"{"map":"planar_radial_hole"}"#,
        ];
        for d in docs {
            parse_json::<MapDoc>(d).unwrap().build().unwrap();
        }
        assert!(parse_json::<MapDoc>(r#"{"map":"warp"}"#).is_err());
        assert!(parse_json::<MapDoc>(r#"{"map":"scale","factor":2}"#).unwrap().build().is_err());
    }

    #[test]
    fn compose_applies_last_first() {
        let g = RigidMotion::translation_by(vector(&[0.5, 0.0]));
        let k = BallBodyExpr::generators(vec![vector(&[0.0, 0.0])]).unwrap();
        let m = SnMap::Compose(vec![SnMap::Motion(g), SnMap::CDual]);
        let out = m.evaluate(&k).unwrap();
        assert!(matches!(out.node(), crate::body::Node::Motion { .. }));
    }

    #[test]
    fn radial_hole_misses_unit_disk() {
        let f = PlanarMapSpec::RadialHole;
        for x in [[0.0, 0.0], [1e-9, 0.0], [0.3, -0.4], [-5.0, 2.0]] {
            let y = f.evaluate(x);
            assert!(y[0].hypot(y[1]) >= 1.0);
        }
    }
}
