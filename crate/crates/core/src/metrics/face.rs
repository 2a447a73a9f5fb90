//! Normal metric terms computed from a face patch alone.

use crate::error::Result;
use crate::geometry::{FacePatch, FaceSubmap};
use crate::spectral::{tangential_axes, FaceGrid, NodeKind, NodeSet};
use crate::vec3::{self, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Built from the unrefined element's face patch.
    ParentFace,
    /// Trace of an element's own volume metrics.
    ChildLocal,
}

/// Nodal `(Ja^d)*` on a degree-`q` face grid, `d` the face normal axis.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceMetric {
    pub axis: usize,
    pub nodes: NodeSet,
    pub values: FaceGrid<Vec3>,
    pub provenance: Provenance,
    /// Set once the values have been scaled onto a child face.
    pub beta: Option<f64>,
}

impl FaceMetric {
    pub fn evaluate(&self, rs: [f64; 2]) -> Vec3 {
        let l0 = self.nodes.lagrange_basis(rs[0]);
        let l1 = self.nodes.lagrange_basis(rs[1]);
        let mut out = [0.0; 3];
        let [n0, n1] = self.values.dims();
        for q in 0..n1 {
            for p in 0..n0 {
                out = vec3::add(out, vec3::scale(self.values.get(p, q), l0[p] * l1[q]));
            }
        }
        out
    }

    /// `beta * (Ja^d)*(r(s))` at the child face nodes, where `r` is `sub`.
    pub fn restrict(&self, sub: &FaceSubmap) -> FaceMetric {
        let ns = &self.nodes;
        let m0 = ns.interpolation_matrix(&ns.mapped_nodes(sub.scale[0], sub.offset[0]));
        let m1 = ns.interpolation_matrix(&ns.mapped_nodes(sub.scale[1], sub.offset[1]));
        let beta = sub.beta();
        FaceMetric {
            axis: self.axis,
            nodes: self.nodes.clone(),
            values: self.values.apply(0, &m0).apply(1, &m1).map(|v| vec3::scale(*v, beta)),
            provenance: self.provenance,
            beta: Some(self.beta.unwrap_or(1.0) * beta),
        }
    }
}

/// Curl-form `(Ja^axis)*` from the face polynomial `X(r, s)` only.
///
/// With `(j, k)` cyclic after `axis`, `Ja_n = d_k I(X_l d_j X_m) - d_j I(X_l d_k X_m)`
/// where `(n, m, l)` is cyclic; both derivatives are tangential on the face.
/// Products are interpolated at the degree-`q` Lobatto nodes and the result
/// is re-expressed exactly on the degree-`q` nodes of `kind`.
pub fn face_metrics_parent(
    patch: &FacePatch,
    axis: usize,
    q: usize,
    kind: NodeKind,
) -> Result<FaceMetric> {
    let lq = NodeSet::lobatto(q)?;
    let t = tangential_axes(axis);
    let local = |a: usize| t.iter().position(|&b| b == a).expect("tangential axis");
    let (fj, fk) = (local((axis + 1) % 3), local((axis + 2) % 3));
    let mut values = super::exact::face_curl_metrics(patch.points(), patch.nodes(), &lq, fj, fk);
    let nodes = NodeSet::new(kind, q)?;
    if kind == NodeKind::Gauss {
        let to = lq.interpolation_to(&nodes);
        values = values.apply(0, &to).apply(1, &to);
    }
    Ok(FaceMetric {
        axis,
        nodes,
        values,
        provenance: Provenance::ParentFace,
        beta: None,
    })
}
