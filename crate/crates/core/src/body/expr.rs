use std::sync::Arc;

use super::solver::BallIntersection;
use crate::error::{Error, Result};
use crate::geom::{check_dim, check_finite, minimal_enclosing_ball, Ball, RigidMotion, Vector};

/// Maximum expression depth accepted by the constructors.
pub const DEPTH_BOUND: usize = 16;

/// Generator sets whose enclosing radius exceeds `1 - BOUNDARY_MARGIN`
/// are flagged as boundary bodies (at most a tiny lens around a point).
pub const BOUNDARY_MARGIN: f64 = 1e-9;

/// Rounding slack when deciding that an enclosing radius exceeds 1.
const EMPTY_SLACK: f64 = 1e-12;

/// An immutable expression denoting a ball body. Cloning is cheap.
#[derive(Clone, Debug)]
pub struct BallBodyExpr {
    inner: Arc<Inner>,
}

#[derive(Debug)]
struct Inner {
    node: Node,
    dim: usize,
    depth: usize,
    /// a ball containing the body, radius at most 1
    enclosing: Ball,
    /// a point of the body
    witness: Vector,
}

#[derive(Debug)]
pub enum Node {
    /// `⋂_i (x_i + B)`
    Generators(Generators),
    /// `K^c`
    CDual(BallBodyExpr),
    /// `(1 - λ) a + λ b`
    Combine { lambda: f64, a: BallBodyExpr, b: BallBodyExpr },
    /// `g K`
    Motion { motion: RigidMotion, of: BallBodyExpr },
}

#[derive(Debug)]
pub struct Generators {
    centers: Vec<Vector>,
    balls: BallIntersection,
    circumradius: f64,
    boundary: bool,
}

impl Generators {
    pub fn centers(&self) -> &[Vector] {
        &self.centers
    }

    /// Radius of the smallest ball containing the centers.
    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    /// True when the centers need an enclosing ball of radius `1` (up to
    /// [`BOUNDARY_MARGIN`]), so the body is a point or nearly one.
    pub fn is_boundary(&self) -> bool {
        self.boundary
    }

    pub(crate) fn balls(&self) -> &BallIntersection {
        &self.balls
    }

    /// Exact membership `max_i |y - x_i| <= 1 + slack`.
    pub fn contains(&self, y: &Vector, slack: f64) -> bool {
        self.centers.iter().all(|c| (y - c).norm() <= 1.0 + slack)
    }
}

impl BallBodyExpr {
    fn from_node(node: Node, dim: usize, depth: usize, enclosing: Ball, witness: Vector) -> Result<Self> {
        if depth > DEPTH_BOUND {
            return Err(Error::TooDeep { depth, bound: DEPTH_BOUND });
        }
        Ok(BallBodyExpr { inner: Arc::new(Inner { node, dim, depth, enclosing, witness }) })
    }

    /// `⋂_i (x_i + B)`. Rejects empty intersections: the centers must fit
    /// in a unit ball.
    pub fn generators(centers: Vec<Vector>) -> Result<Self> {
        let dim = centers
            .first()
            .map(|c| c.len())
            .ok_or_else(|| Error::InvalidArgument("generator set must be nonempty".into()))?;
        if dim < 2 {
            return Err(Error::InvalidArgument(format!("dimension must be >= 2, got {dim}")));
        }
        for c in &centers {
            check_dim(c, dim)?;
            check_finite(c)?;
        }
        let meb = minimal_enclosing_ball(&centers)?;
        if meb.radius > 1.0 + EMPTY_SLACK {
            return Err(Error::EmptyBody { radius: meb.radius });
        }
        let boundary = meb.radius > 1.0 - BOUNDARY_MARGIN;
        let radii = vec![1.0; centers.len()];
        let balls = BallIntersection::new(&centers, &radii, 4.0 * EMPTY_SLACK)?;
        let enclosing = balls.enclosing();
        let witness = enclosing.center.clone();
        let node = Node::Generators(Generators { centers, balls, circumradius: meb.radius, boundary });
        Self::from_node(node, dim, 1, enclosing, witness)
    }

    /// The unit ball `c + B`.
    pub fn unit_ball(center: Vector) -> Result<Self> {
        Self::generators(vec![center])
    }

    /// The point body `{p}`, written as `(p + B)^c`.
    pub fn point(p: Vector) -> Result<Self> {
        Self::unit_ball(p)?.c_dual()
    }

    /// `K^c = ⋂_{x∈K} (x + B)`.
    pub fn c_dual(&self) -> Result<Self> {
        let enclosing = Ball { center: self.inner.witness.clone(), radius: 1.0 };
        // K ⊆ B(c, r) with r <= 1 puts c within distance 1 of all of K
        let witness = self.inner.enclosing.center.clone();
        let depth = self.inner.depth + 1;
        Self::from_node(Node::CDual(self.clone()), self.inner.dim, depth, enclosing, witness)
    }

    /// `(1 - λ) a + λ b`.
    pub fn combine(lambda: f64, a: &Self, b: &Self) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument(format!("lambda {lambda} outside [0, 1]")));
        }
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
        }
        let (ea, eb) = (&a.inner.enclosing, &b.inner.enclosing);
        let enclosing = Ball {
            center: &ea.center * (1.0 - lambda) + &eb.center * lambda,
            radius: (1.0 - lambda) * ea.radius + lambda * eb.radius,
        };
        let witness = &a.inner.witness * (1.0 - lambda) + &b.inner.witness * lambda;
        let depth = 1 + a.depth().max(b.depth());
        let node = Node::Combine { lambda, a: a.clone(), b: b.clone() };
        Self::from_node(node, a.dim(), depth, enclosing, witness)
    }

    /// `g K`.
    pub fn apply_motion(motion: &RigidMotion, of: &Self) -> Result<Self> {
        if motion.dim() != of.dim() {
            return Err(Error::DimensionMismatch { expected: of.dim(), got: motion.dim() });
        }
        let enclosing = Ball {
            center: motion.apply(&of.inner.enclosing.center),
            radius: of.inner.enclosing.radius,
        };
        let witness = motion.apply(&of.inner.witness);
        let node = Node::Motion { motion: motion.clone(), of: of.clone() };
        Self::from_node(node, of.dim(), of.depth() + 1, enclosing, witness)
    }

    pub fn node(&self) -> &Node {
        &self.inner.node
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn depth(&self) -> usize {
        self.inner.depth
    }

    /// A ball known to contain the body; its radius is at most 1.
    pub fn enclosing(&self) -> &Ball {
        &self.inner.enclosing
    }

    /// A point known to lie in the body.
    pub fn witness(&self) -> &Vector {
        &self.inner.witness
    }

    /// Upper bound on `max_{y∈K} |y|`.
    pub fn norm_bound(&self) -> f64 {
        self.inner.enclosing.center.norm() + self.inner.enclosing.radius
    }

    /// Same body expressed with generator centers moved by `g`, when the
    /// expression is a plain generator set.
    pub fn moved_generators(&self, motion: &RigidMotion) -> Option<Result<Self>> {
        match self.node() {
            Node::Generators(g) => {
                Some(Self::generators(g.centers.iter().map(|c| motion.apply(c)).collect()))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vector;

    #[test]
    fn rejects_empty_generator_sets() {
        assert!(BallBodyExpr::generators(vec![]).is_err());
        let far = vec![vector(&[0.0, 0.0]), vector(&[2.5, 0.0])];
        assert!(matches!(BallBodyExpr::generators(far), Err(Error::EmptyBody { .. })));
    }

    #[test]
    fn boundary_flag() {
        let tight = BallBodyExpr::generators(vec![vector(&[-1.0, 0.0]), vector(&[1.0, 0.0])]).unwrap();
        match tight.node() {
            Node::Generators(g) => assert!(g.is_boundary()),
            _ => unreachable!(),
        }
        let lens = BallBodyExpr::generators(vec![vector(&[0.0, 0.0]), vector(&[1.0, 0.0])]).unwrap();
        match lens.node() {
            Node::Generators(g) => assert!(!g.is_boundary()),
            _ => unreachable!(),
        }
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let a = BallBodyExpr::unit_ball(vector(&[0.0, 0.0])).unwrap();
        let b = BallBodyExpr::unit_ball(vector(&[0.0, 0.0, 0.0])).unwrap();
        assert!(BallBodyExpr::combine(0.5, &a, &b).is_err());
        assert!(BallBodyExpr::generators(vec![vector(&[0.0, 0.0]), vector(&[0.0, 0.0, 1.0])]).is_err());
    }

    #[test]
    fn depth_bound() {
        let mut k = BallBodyExpr::unit_ball(vector(&[0.0, 0.0])).unwrap();
        let g = RigidMotion::identity(2);
        for _ in 0..DEPTH_BOUND - 1 {
            k = BallBodyExpr::apply_motion(&g, &k).unwrap();
        }
        assert_eq!(k.depth(), DEPTH_BOUND);
        assert!(matches!(BallBodyExpr::apply_motion(&g, &k), Err(Error::TooDeep { .. })));
        assert!(k.c_dual().is_err());
    }

    #[test]
    fn lambda_range() {
        let a = BallBodyExpr::unit_ball(vector(&[0.0, 0.0])).unwrap();
        assert!(BallBodyExpr::combine(-0.1, &a, &a).is_err());
        assert!(BallBodyExpr::combine(1.1, &a, &a).is_err());
    }

    #[test]
    fn enclosing_balls_have_radius_at_most_one() {
        let a = BallBodyExpr::generators(vec![vector(&[0.0, 0.0]), vector(&[1.0, 0.5])]).unwrap();
        let b = a.c_dual().unwrap();
        let c = BallBodyExpr::combine(0.3, &a, &b).unwrap();
        for k in [&a, &b, &c] {
            assert!(k.enclosing().radius <= 1.0);
        }
    }
}
