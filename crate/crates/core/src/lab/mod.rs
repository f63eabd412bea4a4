//! Executable checks on maps of ball bodies and of the plane.

mod classify;
mod geodesic;
mod maps;
mod planar;

pub use classify::{classify_isometry, isometry_defect, ClassifyConfig, DefectReport, IsometryClassification, Kind, R_TOL};
pub use geodesic::{geodesic_midpoint_check, point_then_ball_path, GeodesicCheck, POINT_TOL};
pub use maps::{perturbed, AnyMap, BodyMap, MapDoc, PlanarMap, PlanarMapSpec, SnMap};
pub use planar::{
    eps_isometry_defect_planar, surjectivity_probe_planar, Hypothesis, SurjectivityConfig, SurjectivityReport,
    Verdict, Witness,
};

use serde::Serializer;

use crate::body::doc::motion_to_rows;
use crate::geom::RigidMotion;

/// Serializes a motion as `{"rotation": rows, "translation": vector}`.
pub fn ser_motion<S: Serializer>(g: &RigidMotion, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let (rotation, translation) = motion_to_rows(g);
    let mut st = s.serialize_struct("RigidMotion", 2)?;
    st.serialize_field("rotation", &rotation)?;
    st.serialize_field("translation", &translation)?;
    st.end()
}
