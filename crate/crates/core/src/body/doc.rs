//! JSON body documents.
//!
//! ```json
//! {"type":"generators","centers":[[0,0],[1,0]]}
//! {"type":"cdual","of":<body>}
//! {"type":"combine","lambda":0.5,"a":<body>,"b":<body>}
//! {"type":"motion","rotation":[[0,-1],[1,0]],"translation":[1,0],"of":<body>}
//! ```
//! Rotation matrices are given row by row. The dimension is inferred from
//! the vectors and must be consistent across the tree.

use serde::{Deserialize, Serialize};

use super::expr::{BallBodyExpr, Node};
use crate::error::{Error, Result};
use crate::geom::{Matrix, RigidMotion, Vector};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodyDoc {
    Generators { centers: Vec<Vec<f64>> },
    Cdual { of: Box<BodyDoc> },
    Combine { lambda: f64, a: Box<BodyDoc>, b: Box<BodyDoc> },
    Motion { rotation: Vec<Vec<f64>>, translation: Vec<f64>, of: Box<BodyDoc> },
}

/// Parses JSON text into a document, reporting line and column on error.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {} column {}: {}", e.line(), e.column(), e)))
}

pub fn parse_body(text: &str) -> Result<BallBodyExpr> {
    parse_json::<BodyDoc>(text)?.build()
}

pub fn motion_from_rows(rotation: &[Vec<f64>], translation: &[f64]) -> Result<RigidMotion> {
    let n = translation.len();
    if rotation.len() != n || rotation.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: rotation.len() });
    }
    let flat: Vec<f64> = rotation.iter().flatten().copied().collect();
    RigidMotion::new(Matrix::from_row_slice(n, n, &flat), Vector::from_column_slice(translation))
}

pub fn motion_to_rows(g: &RigidMotion) -> (Vec<Vec<f64>>, Vec<f64>) {
    let q = g.rotation();
    let rows = (0..q.nrows()).map(|i| (0..q.ncols()).map(|j| q[(i, j)]).collect()).collect();
    (rows, g.translation().iter().copied().collect())
}

impl BodyDoc {
    pub fn build(&self) -> Result<BallBodyExpr> {
        match self {
            BodyDoc::Generators { centers } => {
                BallBodyExpr::generators(centers.iter().map(|c| Vector::from_column_slice(c)).collect())
            }
            BodyDoc::Cdual { of } => of.build()?.c_dual(),
            BodyDoc::Combine { lambda, a, b } => BallBodyExpr::combine(*lambda, &a.build()?, &b.build()?),
            BodyDoc::Motion { rotation, translation, of } => {
                let g = motion_from_rows(rotation, translation)?;
                BallBodyExpr::apply_motion(&g, &of.build()?)
            }
        }
    }

    pub fn from_expr(k: &BallBodyExpr) -> BodyDoc {
        match k.node() {
            Node::Generators(g) => BodyDoc::Generators {
                centers: g.centers().iter().map(|c| c.iter().copied().collect()).collect(),
            },
            Node::CDual(of) => BodyDoc::Cdual { of: Box::new(Self::from_expr(of)) },
            Node::Combine { lambda, a, b } => BodyDoc::Combine {
                lambda: *lambda,
                a: Box::new(Self::from_expr(a)),
                b: Box::new(Self::from_expr(b)),
            },
            Node::Motion { motion, of } => {
                let (rotation, translation) = motion_to_rows(motion);
                BodyDoc::Motion { rotation, translation, of: Box::new(Self::from_expr(of)) }
            }
        }
    }
}
