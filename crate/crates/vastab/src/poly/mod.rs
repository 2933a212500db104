//! Exact polyhedral convex geometry: cones in half-space and generator
//! representation, canonicalization, face-lattice enumeration, polars, and
//! the tangent, normal and critical cones of convex polyhedral sets.

mod dd;
mod fm;
mod hcone;
mod polyset;
mod vcone;

pub use dd::extreme_rays;
pub use fm::{polyhedron_contains, polyhedron_equal, project_to};
pub use hcone::{FaceId, HCone};
pub use polyset::PolySet;
pub use vcone::VCone;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("infeasible point {0}")]
    InfeasiblePoint(String),
    #[error("{0} is not a normal vector at the given point")]
    NotANormalVector(String),
    #[error("index set {0:?} is not a face of the cone")]
    NotAFace(Vec<usize>),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
}

/// H-representation of a cone generated by rays and lines (the polar of
/// [`VCone::polar_v`]); round-tripping through the polar uses the double
/// description method once.
pub fn to_hcone(v: &VCone) -> HCone {
    let polar = v.polar_v();
    let polar_gens = extreme_rays(&polar);
    polar_gens.polar_v()
}

/// Generator representation of an H-cone via double description.
pub fn to_vcone(c: &HCone) -> VCone {
    extreme_rays(c)
}
