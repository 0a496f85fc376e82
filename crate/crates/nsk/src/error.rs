//! Error types. Anything flagged as an anomaly indicates an internal
//! inconsistency (a certificate failed to re-verify, an impossible case was
//! reached); the CLI maps those to exit code 2 rather than 1.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TriError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("tetrahedron {tet} face {face} is not glued")]
    OpenFace { tet: usize, face: usize },
    #[error("tetrahedron {tet} face {face} is glued to itself")]
    SelfGlued { tet: usize, face: usize },
    #[error("gluing of tetrahedron {tet} face {face} is not matched by its inverse")]
    Involution { tet: usize, face: usize },
    #[error("gluing of tetrahedron {tet} face {face} references tetrahedron {target} which does not exist")]
    BadTarget { tet: usize, face: usize, target: usize },
    #[error("no consistent orientation of the tetrahedra exists")]
    NonOrientable,
    #[error("edge {{{u},{w}}} of tetrahedron {tet} is identified with itself reversed")]
    ReversedEdge { tet: usize, u: usize, w: usize },
    #[error("complex is not a closed 3-manifold: {details}")]
    NotClosed { details: String },
}

#[derive(Debug, Error)]
pub enum NormalError {
    #[error("coordinate vector has {got} entries, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coordinate {index} is negative")]
    NegativeEntry { index: usize },
    #[error("octagon slot is invalid: {msg}")]
    BadOctagon { msg: String },
    #[error("vectors are not compatible: tetrahedron {tet} carries two different quad types")]
    IncompatibleSum { tet: usize },
    #[error("vectors are not compatible: octagon slots disagree")]
    IncompatibleOctagon,
    #[error("malformed vector text: {msg}")]
    Parse { msg: String },
}

#[derive(Debug, Error)]
pub enum SurfaceError {
    #[error("vector is not admissible: {0}")]
    NotAdmissible(String),
    #[error("edge weights disagree across a face gluing (tet {tet} face {face}): {left} vs {right}")]
    WeightMismatch { tet: usize, face: usize, left: String, right: String },
    #[error("reconstructed complex is degenerate: {0}")]
    Degenerate(String),
}

#[derive(Debug, Error)]
pub enum LpError {
    #[error("point does not satisfy the constraints it is tested against")]
    InfeasiblePoint,
    #[error("simplex invariant violated: {0}")]
    Anomaly(String),
}

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("triangulation has {vertices} vertex classes; this operation requires exactly one")]
    NotOneVertex { vertices: usize },
    #[error("triangulation is not valid input: {0}")]
    BadInput(String),
    #[error("sphere recognition requires a triangulation with no nontrivial normal sphere")]
    SphereObstruction,
    #[error("optimal surface has impossible invariants: {0}")]
    Anomaly(String),
}

#[derive(Debug, Error)]
pub enum CrushError {
    #[error("surface is not a crushable sphere: {0}")]
    Precondition(String),
    #[error("cell decomposition is inconsistent: {0}")]
    Anomaly(String),
}

#[derive(Debug, Error)]
pub enum SumError {
    #[error("no face of the summand has three distinct vertex classes and uniform corner arcs; add a vertex first")]
    NoQualifyingArc,
    #[error("connected sum assembly failed validation: {0}")]
    Anomaly(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Tri(#[from] TriError),
    #[error(transparent)]
    Normal(#[from] NormalError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Crush(#[from] CrushError),
    #[error(transparent)]
    Sum(#[from] SumError),
    #[error("{0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Internal inconsistencies get a distinct exit code so automation can
    /// tell "bad input" from "the kernel contradicted itself".
    pub fn is_anomaly(&self) -> bool {
        matches!(
            self,
            Error::Lp(LpError::Anomaly(_))
                | Error::Search(SearchError::Anomaly(_))
                | Error::Crush(CrushError::Anomaly(_))
                | Error::Sum(SumError::Anomaly(_))
                | Error::Surface(SurfaceError::Degenerate(_))
        )
    }
}
