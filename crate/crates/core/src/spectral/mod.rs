//! One-dimensional spectral building blocks: node sets, interpolation,
//! differentiation, quadrature, and tensor-product grids.

mod appendix;
mod grid;
mod lagrange;
mod nodes;

pub use appendix::{product_interpolation_mismatch, ProductMismatch};
pub use grid::{
    contract_axis, discrete_inner_product, discrete_inner_product_scalar, tangential_axes, FaceGrid,
    Field, TensorGrid3,
};
pub use nodes::{legendre, NodeKind, NodeSet};
