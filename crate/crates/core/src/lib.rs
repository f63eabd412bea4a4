//! Numerical toolkit for the metric space of ball bodies.
//!
//! A ball body is a nonempty intersection of translated Euclidean unit
//! balls. Bodies are represented as expression trees ([`BallBodyExpr`])
//! and evaluated through their support functions, on which c-duality,
//! Minkowski averaging and rigid motions act by one-line formulas. The
//! Hausdorff distance is the sup-distance of support functions and is
//! reported with a certified error interval over a [`SphereNet`].
//!
//! Layout:
//! - [`geom`]: vectors, sphere nets, minimal enclosing balls, Procrustes
//!   fitting, winding numbers and a small LP solver.
//! - [`body`]: the body model, the certified support solver and the
//!   geometric operations (distance, duality, circumball, reconstruction).
//! - [`raster`]: an independent brute-force 2D backend used as an oracle.
//! - [`lab`]: isometry screening and classification, geodesic checks and
//!   the planar surjectivity verifier.
//! - [`selftest`]: the acceptance suite, shared by the CLI and the tests.

pub mod body;
pub mod error;
pub mod geom;
pub mod lab;
pub mod par;
pub mod random;
pub mod raster;
pub mod selftest;

pub use body::{
    apply_motion, c_dual, circumball, combine, contains_point, hausdorff, point_distance,
    reconstruct, BallBodyExpr, HausdorffResult, Membership, Node, Reconstruction, Support,
    SupportEval, DEFAULT_TOL,
};
pub use error::{Error, Result};
pub use geom::{
    make_sphere_net, minimal_enclosing_ball, procrustes_fit, winding_number, Ball, RigidMotion,
    SphereNet, Vector,
};

/// Library version string, embedded in every report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
