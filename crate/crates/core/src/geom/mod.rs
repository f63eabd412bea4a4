//! Dimension-generic numerical substrate.

mod lp;
mod meb;
mod net;
mod procrustes;
mod winding;

pub use lp::{chebyshev_center, ChebyshevCenter};
pub use meb::{min_max_power, minimal_enclosing_ball, PowerCenter};
pub use net::{make_sphere_net, SphereNet};
pub use procrustes::{procrustes_fit, random_orthogonal, RigidMotion};
pub use winding::{adaptive_winding, winding_number, WindingSample};

use crate::error::{Error, Result};

pub type Vector = nalgebra::DVector<f64>;
pub type Matrix = nalgebra::DMatrix<f64>;

/// Slack allowed when normalizing a direction that should be unit length.
pub const UNIT_SLACK: f64 = 1e-6;

/// Builds a vector from a coordinate slice.
pub fn vector(coords: &[f64]) -> Vector {
    Vector::from_column_slice(coords)
}

/// Rejects vectors with NaN or infinite entries.
pub fn check_finite(v: &Vector) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("non-finite coordinates {:?}", v.as_slice())))
    }
}

pub fn check_dim(v: &Vector, dim: usize) -> Result<()> {
    if v.len() == dim {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: dim, got: v.len() })
    }
}

/// Normalizes `u` if it is within [`UNIT_SLACK`] of unit length.
pub fn unit_direction(u: &Vector) -> Result<Vector> {
    check_finite(u)?;
    let norm = u.norm();
    if (norm - 1.0).abs() > UNIT_SLACK {
        return Err(Error::InvalidArgument(format!("direction has norm {norm}, expected 1")));
    }
    Ok(u / norm)
}

/// A closed Euclidean ball.
#[derive(Clone, Debug, PartialEq)]
pub struct Ball {
    pub center: Vector,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vector, radius: f64) -> Result<Self> {
        check_finite(&center)?;
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!("ball radius {radius} must be >= 0")));
        }
        Ok(Ball { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains(&self, p: &Vector, slack: f64) -> bool {
        (p - &self.center).norm() <= self.radius + slack
    }
}
