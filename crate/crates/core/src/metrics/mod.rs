//! Contravariant metric terms `Ja^i` and Jacobians under several
//! construction strategies, and the volume and face residuals that decide
//! whether a constant state stays an exact steady solution.
//!
//! Metric vectors live on the quadrature grid of degree `Q` (equal to the
//! solution degree `N` unless overintegrating); Jacobians live on the
//! solution grid.

mod conditions;
mod exact;

pub(crate) use exact::Source;
mod face;
mod strategy;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::{AffineSubmap, ElementMapping, Side};
use crate::spectral::{FaceGrid, NodeKind, NodeSet, TensorGrid3};
use crate::vec3::{self, Vec3};

pub use conditions::{
    condition_f_conforming, condition_f_mortar, condition_report, condition_v_residual,
    metric_divergence,
    ConditionReport, FaceResidual,
};
pub use face::{face_metrics_parent, FaceMetric, Provenance};
pub use strategy::{compute_mesh_metrics, MeshMetrics, Strategy};

/// Metric terms of one element.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSet {
    pub strategy: Strategy,
    /// Solution degree.
    pub n: usize,
    /// Quadrature degree of `ja`.
    pub q: usize,
    pub kind: NodeKind,
    /// `Ja^1, Ja^2, Ja^3` at the degree-`q` nodes.
    pub ja: [TensorGrid3<Vec3>; 3],
    /// `J` at the degree-`n` nodes.
    pub jac: TensorGrid3<f64>,
}

impl MetricSet {
    pub fn solution_nodes(&self) -> NodeSet {
        NodeSet::new(self.kind, self.n).expect("validated on construction")
    }

    pub fn quadrature_nodes(&self) -> NodeSet {
        NodeSet::new(self.kind, self.q).expect("validated on construction")
    }

    /// `max |Ja| * N^2`, the normalisation for residuals.
    pub fn scale(&self) -> f64 {
        let m = self
            .ja
            .iter()
            .flat_map(|g| g.iter())
            .fold(0.0f64, |m, v| m.max(vec3::norm(*v)));
        let n = self.n.max(1) as f64;
        m * n * n
    }

    pub fn min_jacobian(&self) -> f64 {
        self.jac.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Trace of `Ja^axis` on `side`, on the degree-`q` face grid.
    pub fn face_normal_metric(&self, side: Side) -> FaceGrid<Vec3> {
        let qs = self.quadrature_nodes();
        let grid = &self.ja[side.axis];
        match self.kind {
            NodeKind::Lobatto => grid.slice(side.axis, if side.positive { self.q } else { 0 }),
            NodeKind::Gauss => grid.contract_to_face(side.axis, &qs.boundary_vector(side.sign())),
        }
    }

    /// Largest nodal difference from `other` over all three metric vectors.
    pub fn max_difference(&self, other: &MetricSet) -> f64 {
        let mut m = 0.0f64;
        for i in 0..3 {
            for (a, b) in self.ja[i].iter().zip(other.ja[i].iter()) {
                m = m.max(vec3::max_diff(*a, *b));
            }
        }
        m
    }
}

/// Covariant vectors `a_i = dX/dxi^i` of the degree-`N` interpolant of `X` at the nodes of `ns`.
pub fn covariant_basis(m: &ElementMapping, ns: &NodeSet) -> [TensorGrid3<Vec3>; 3] {
    exact::covariant_basis(Source::own(m), ns)
}

/// `J = a_1 . (a_2 x a_3)` at the nodes of `ns`.
pub fn jacobian(m: &ElementMapping, ns: &NodeSet) -> TensorGrid3<f64> {
    exact::jacobian(Source::own(m), ns)
}

fn check_jacobian(jac: &TensorGrid3<f64>) -> Result<()> {
    match jac.iter().copied().find(|j| !(*j > 0.0)) {
        Some(j) => Err(Error::NonPositiveJacobian {
            element: usize::MAX,
            jacobian: j,
        }),
        None => Ok(()),
    }
}

fn quadrature_degree(n: usize, q: usize) -> Result<usize> {
    if q < n {
        return Err(Error::InvalidDegree {
            what: "metric interpolation",
            degree: q,
            min: n,
        });
    }
    Ok(q)
}

/// Nodal cross products `Ja^i = a_j x a_k` at the degree-`q` nodes.
pub fn metrics_cross_product(
    m: &ElementMapping,
    n: usize,
    q: usize,
    kind: NodeKind,
) -> Result<MetricSet> {
    cross_product_from(Source::own(m), n, q, kind)
}

pub(crate) fn cross_product_from(src: Source<'_>, n: usize, q: usize, kind: NodeKind) -> Result<MetricSet> {
    let q = quadrature_degree(n, q)?;
    let ns = NodeSet::new(kind, n)?;
    let qs = NodeSet::new(kind, q)?;
    let ja = exact::cross_product_metrics(src, &qs);
    let jac = exact::jacobian(src, &ns);
    check_jacobian(&jac)?;
    Ok(MetricSet {
        strategy: Strategy::CrossProduct,
        n,
        q,
        kind,
        ja,
        jac,
    })
}

/// Curl-form metrics with products interpolated at degree `q >= n`.
///
/// `Ja_n^i = -x_i . curl(I(X_l grad X_m))` is formed on the degree-`q`
/// Lobatto grid, so the trace on any face depends on the face data alone,
/// and then re-expressed on the nodes of `kind`. The result is tagged
/// `curl_form` when `q == n` and `overintegrated(q)` otherwise.
pub fn metrics_curl_form(
    m: &ElementMapping,
    n: usize,
    q: usize,
    kind: NodeKind,
) -> Result<MetricSet> {
    curl_form_from(Source::own(m), n, q, kind)
}

pub(crate) fn curl_form_from(src: Source<'_>, n: usize, q: usize, kind: NodeKind) -> Result<MetricSet> {
    let q = quadrature_degree(n, q)?;
    let ns = NodeSet::new(kind, n)?;
    let lq = NodeSet::lobatto(q)?;
    let ja = exact::curl_metrics(src, &lq);
    let ja = match kind {
        NodeKind::Lobatto => ja,
        NodeKind::Gauss => {
            let to = lq.interpolation_to(&NodeSet::new(kind, q)?);
            ja.map(|g| g.apply_all(&to))
        }
    };
    let jac = exact::jacobian(src, &ns);
    check_jacobian(&jac)?;
    Ok(MetricSet {
        strategy: if q == n {
            Strategy::CurlForm
        } else {
            Strategy::Overintegrated(q)
        },
        n,
        q,
        kind,
        ja,
        jac,
    })
}

fn evaluate_at_mapped<T: crate::spectral::Field>(
    grid: &TensorGrid3<T>,
    ns: &NodeSet,
    sub: &AffineSubmap,
) -> TensorGrid3<T> {
    let mats: [DMatrix<f64>; 3] = [0, 1, 2]
        .map(|d| ns.interpolation_matrix(&ns.mapped_nodes(sub.scale[d], sub.offset[d])));
    grid.apply(0, &mats[0]).apply(1, &mats[1]).apply(2, &mats[2])
}

/// Child metrics read off the parent's polynomials through `sub`:
/// `Ja^i = alpha_j alpha_k Ja^i_parent(r)`, `J = alpha_1 alpha_2 alpha_3 J_parent(r)`.
pub fn inherit_parent_metrics(parent: &MetricSet, sub: &AffineSubmap) -> MetricSet {
    let qs = parent.quadrature_nodes();
    let ns = parent.solution_nodes();
    let ja = [0, 1, 2].map(|i| {
        let beta = sub.face_beta(i);
        evaluate_at_mapped(&parent.ja[i], &qs, sub).map(|v| vec3::scale(*v, beta))
    });
    let vol = sub.volume_factor();
    let jac = evaluate_at_mapped(&parent.jac, &ns, sub).map(|j| vol * j);
    MetricSet {
        strategy: Strategy::ParentInherited,
        n: parent.n,
        q: parent.q,
        kind: parent.kind,
        ja,
        jac,
    }
}
