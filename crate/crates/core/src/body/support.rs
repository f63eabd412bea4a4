use super::expr::{BallBodyExpr, Node};
use crate::error::{Error, Result};
use crate::geom::{unit_direction, Ball, Vector};

/// Default certified accuracy of one support evaluation.
pub const DEFAULT_TOL: f64 = 1e-6;

/// A support-function oracle `u -> h_K(u)` on unit directions.
pub trait Support: Sync {
    fn dim(&self) -> usize;

    /// Certified absolute accuracy of each returned support value.
    fn tol(&self) -> f64;

    /// A ball containing the body.
    fn enclosing(&self) -> Ball;

    /// Support value and a near-maximizing point for a unit `u`.
    fn support_point_unit(&self, u: &Vector) -> Result<(f64, Vector)>;

    /// Upper bound `R` on `max_{y∈K} |y|`.
    fn norm_bound(&self) -> f64 {
        let b = self.enclosing();
        b.center.norm() + b.radius
    }

    /// `h_K(u)`; `u` is normalized if within `1e-6` of unit length.
    fn support(&self, u: &Vector) -> Result<f64> {
        if u.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: u.len() });
        }
        Ok(self.support_point_unit(&unit_direction(u)?)?.0)
    }
}

/// Support oracle of a [`BallBodyExpr`] with certified tolerance.
#[derive(Clone, Debug)]
pub struct SupportEval {
    body: BallBodyExpr,
    tol: f64,
}

impl SupportEval {
    pub fn new(body: BallBodyExpr, tol: f64) -> Result<Self> {
        if !(tol > 0.0) || !tol.is_finite() {
            return Err(Error::InvalidArgument(format!("support tolerance must be > 0, got {tol}")));
        }
        Ok(SupportEval { body, tol })
    }

    pub fn with_default_tol(body: BallBodyExpr) -> Self {
        SupportEval { body, tol: DEFAULT_TOL }
    }

    pub fn body(&self) -> &BallBodyExpr {
        &self.body
    }

    /// Leaves are solved to a bracket of width `tol` and report its
    /// midpoint, so every node is within `tol / 2`: c-duality and motions
    /// copy the leaf error, convex combinations average it.
    fn eval(&self, k: &BallBodyExpr, u: &Vector) -> Result<(f64, Vector)> {
        match k.node() {
            Node::Generators(g) => {
                let sol = g.balls().support(u, self.tol)?;
                Ok((sol.value, sol.point))
            }
            Node::CDual(of) => {
                // h_{K^c}(u) = 1 - h_K(-u); the contact point moves by u
                let (v, y) = self.eval(of, &-u)?;
                Ok((1.0 - v, y + u))
            }
            Node::Combine { lambda, a, b } => {
                let l = *lambda;
                if l == 0.0 {
                    return self.eval(a, u);
                }
                if l == 1.0 {
                    return self.eval(b, u);
                }
                let (va, ya) = self.eval(a, u)?;
                let (vb, yb) = self.eval(b, u)?;
                Ok(((1.0 - l) * va + l * vb, ya * (1.0 - l) + yb * l))
            }
            Node::Motion { motion, of } => {
                let (v, y) = self.eval(of, &motion.rotate_back(u))?;
                Ok((v + motion.translation().dot(u), motion.apply(&y)))
            }
        }
    }
}

impl Support for SupportEval {
    fn dim(&self) -> usize {
        self.body.dim()
    }

    fn tol(&self) -> f64 {
        self.tol
    }

    fn enclosing(&self) -> Ball {
        self.body.enclosing().clone()
    }

    fn support_point_unit(&self, u: &Vector) -> Result<(f64, Vector)> {
        self.eval(&self.body, u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::vector;

    fn dir(theta: f64) -> Vector {
        vector(&[theta.cos(), theta.sin()])
    }

    #[test]
    fn single_ball() {
        let c = vector(&[0.4, -2.0]);
        let k = SupportEval::with_default_tol(BallBodyExpr::unit_ball(c.clone()).unwrap());
        for i in 0..12 {
            let u = dir(i as f64 * 0.5);
            assert!((k.support(&u).unwrap() - (c.dot(&u) + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn lens_support() {
        let body = BallBodyExpr::generators(vec![vector(&[0.0, 0.0]), vector(&[1.0, 0.0])]).unwrap();
        let k = SupportEval::with_default_tol(body);
        assert!((k.support(&dir(0.0)).unwrap() - 1.0).abs() <= 1e-6);
        assert!((k.support(&dir(std::f64::consts::FRAC_PI_2)).unwrap() - 3f64.sqrt() / 2.0).abs() <= 1e-6);
    }

    #[test]
    fn dual_of_origin_ball_is_origin() {
        let k = SupportEval::with_default_tol(BallBodyExpr::point(vector(&[0.0, 0.0])).unwrap());
        for i in 0..8 {
            assert!(k.support(&dir(i as f64)).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn direction_normalization() {
        let k = SupportEval::with_default_tol(BallBodyExpr::unit_ball(vector(&[0.0, 0.0])).unwrap());
        assert!((k.support(&vector(&[1.0 + 5e-7, 0.0])).unwrap() - 1.0).abs() < 1e-12);
        assert!(k.support(&vector(&[1.1, 0.0])).is_err());
        assert!(k.support(&vector(&[1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn rejects_bad_tolerance() {
        let b = BallBodyExpr::unit_ball(vector(&[0.0, 0.0])).unwrap();
        assert!(SupportEval::new(b.clone(), 0.0).is_err());
        assert!(SupportEval::new(b, f64::NAN).is_err());
    }
}
