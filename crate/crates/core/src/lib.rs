//! Spectral-element metric terms and free-stream preservation on curved,
//! non-conforming hexahedral meshes.
//!
//! The crate is organised bottom-up:
//!
//! - [`spectral`]: node sets, interpolation, differentiation and quadrature;
//! - [`geometry`]: polynomial element mappings, faces, affine subdivision;
//! - [`mesh`]: periodic meshes with conforming faces and 4:1 mortars;
//! - [`metrics`]: metric terms under several strategies and the volume/face
//!   residuals that decide whether a constant state is preserved;
//! - [`solver`]: a semi-discrete nodal DG discretisation of the Euler equations;
//! - [`harness`]: configuration, experiment drivers and CSV reports.

pub mod error;
pub mod geometry;
pub mod harness;
pub mod mesh;
pub mod metrics;
pub mod solver;
pub mod spectral;
pub mod vec3;

pub use error::{Error, Result};
