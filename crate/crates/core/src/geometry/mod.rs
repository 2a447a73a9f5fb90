//! Curved element mappings, face patches and watertight affine subdivision.

mod deform;
mod mapping;
mod subdivide;

pub use deform::{Box3, DeformSpec, DEFAULT_PHASE};
pub use mapping::{sample_analytic_mapping, ElementMapping, FacePatch, Side};
pub use subdivide::{
    child_face_patch, restrict_face, subdivide_element, AffineSubmap, FaceSubmap,
};
