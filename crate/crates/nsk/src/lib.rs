//! Computational kernel for normal surface theory on generalized
//! triangulations of closed orientable 3-manifolds: exact matching-equation
//! solvers, vertex enumeration over the admissible cones, normal sphere
//! search, sphere crushing, connected sums, and prime decomposition.

pub mod error;
pub mod geom;
pub mod homology;
pub mod lp;
pub mod normal;
pub mod search;
pub mod snf;
pub mod surface;
pub mod tri;
mod util;

pub use error::Error;
pub use homology::{homology, AbGroup, Homology};
pub use tri::{GluingBuilder, Skeleton, Triangulation};
