//! The ball-body model and its geometric operations.

pub mod doc;
mod expr;
mod ops;
mod reconstruct;
mod solver;
mod support;

pub use expr::{BallBodyExpr, Generators, Node, BOUNDARY_MARGIN, DEPTH_BOUND};
pub use ops::{
    apply_motion, c_dual, circumball, circumball_from_profile, combine, contains_point, hausdorff,
    point_distance, profile_distance, HausdorffResult, Membership, SupportProfile,
};
pub use reconstruct::{reconstruct, Reconstruction};
pub use solver::{BallIntersection, SupportSolution};
pub use support::{Support, SupportEval, DEFAULT_TOL};
