//! Metric strategies and their assembly over a whole mesh.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::{
    cross_product_from, curl_form_from, face_metrics_parent, inherit_parent_metrics,
    metrics_curl_form, FaceMetric, MetricSet, Source,
};
use crate::error::{Error, Result};
use crate::mesh::{ChildGeometry, ConformingFace, Mesh};
use crate::spectral::{FaceGrid, NodeKind};
use crate::vec3::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Nodal `a_j x a_k`.
    CrossProduct,
    /// Curl of interpolated products at the solution degree.
    CurlForm,
    /// Refined children read their metrics off the parent's curl-form polynomials.
    ParentInherited,
    /// Curl form with products interpolated, and the volume integrals
    /// evaluated, at degree `M`.
    Overintegrated(usize),
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::CrossProduct => "cross_product",
            Strategy::CurlForm => "curl_form",
            Strategy::ParentInherited => "parent_inherited",
            Strategy::Overintegrated(_) => "overintegrated",
        }
    }

    /// Quadrature degree used with solution degree `n`.
    pub fn quadrature_degree(self, n: usize) -> usize {
        match self {
            Strategy::Overintegrated(m) => m,
            _ => n,
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Overintegrated(m) => write!(f, "overintegrated({m})"),
            s => f.write_str(s.name()),
        }
    }
}

/// Accepts the plain names; `overintegrated` takes its degree as
/// `overintegrated(M)` or `overintegrated:M`, and defaults to 0 (to be filled in later).
impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.as_str() {
            "cross_product" | "cross" => return Ok(Strategy::CrossProduct),
            "curl_form" | "curl" => return Ok(Strategy::CurlForm),
            "parent_inherited" | "inherited" => return Ok(Strategy::ParentInherited),
            "overintegrated" => return Ok(Strategy::Overintegrated(0)),
            _ => {}
        }
        let deg = s
            .strip_prefix("overintegrated")
            .map(|r| r.trim_start_matches([':', '(']).trim_end_matches(')'))
            .and_then(|r| r.parse::<usize>().ok());
        deg.map(Strategy::Overintegrated)
            .ok_or_else(|| Error::Parse(format!("unknown metric strategy `{s}`")))
    }
}

/// Metrics of every element plus the face metrics of every mortar.
#[derive(Clone, Debug)]
pub struct MeshMetrics {
    pub strategy: Strategy,
    pub n: usize,
    pub q: usize,
    pub kind: NodeKind,
    pub elements: Vec<MetricSet>,
    /// `(Ja^d)*` from the unrefined side of each mortar, in mesh order.
    pub mortars: Vec<FaceMetric>,
}

impl MeshMetrics {
    /// `(Ja^d)*` of a conforming face: the left element's own trace.
    pub fn conforming_face_metric(&self, face: &ConformingFace) -> FaceGrid<Vec3> {
        self.elements[face.left.element].face_normal_metric(face.left.side)
    }
}

/// Builds metrics for every element of `mesh` with solution degree `n`.
pub fn compute_mesh_metrics(
    mesh: &Mesh,
    strategy: Strategy,
    n: usize,
    kind: NodeKind,
) -> Result<MeshMetrics> {
    if n < 1 {
        return Err(Error::InvalidDegree {
            what: "solution",
            degree: n,
            min: 1,
        });
    }
    let q = strategy.quadrature_degree(n);
    let parents: Vec<MetricSet> = if strategy == Strategy::ParentInherited {
        mesh.parents
            .par_iter()
            .map(|p| metrics_curl_form(p, n, n, kind))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let elements = mesh
        .elements
        .par_iter()
        .enumerate()
        .map(|(e, el)| {
            // restricted children are exactly the parent polynomial on a sub-box
            let src = match (mesh.spec.child_geometry, &el.parent) {
                (ChildGeometry::Restricted, Some(link)) => Source {
                    mapping: &mesh.parents[link.parent],
                    sub: Some(&link.submap),
                },
                _ => Source::own(&el.mapping),
            };
            let ms = match (strategy, el.parent) {
                (Strategy::CrossProduct, _) => cross_product_from(src, n, q, kind),
                (Strategy::ParentInherited, Some(link)) => {
                    Ok(inherit_parent_metrics(&parents[link.parent], &link.submap))
                }
                _ => curl_form_from(src, n, q, kind),
            };
            let ms = ms.map_err(|err| match err {
                Error::NonPositiveJacobian { jacobian, .. } => Error::NonPositiveJacobian {
                    element: e,
                    jacobian,
                },
                other => other,
            })?;
            if !(ms.min_jacobian() > 0.0) {
                return Err(Error::NonPositiveJacobian {
                    element: e,
                    jacobian: ms.min_jacobian(),
                });
            }
            Ok(ms)
        })
        .collect::<Result<Vec<_>>>()?;
    let mortars = mesh
        .mortars
        .iter()
        .map(|m| {
            let patch = mesh.elements[m.parent.element].mapping.face(m.parent.side);
            face_metrics_parent(&patch, m.parent.side.axis, q, kind)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MeshMetrics {
        strategy,
        n,
        q,
        kind,
        elements,
        mortars,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategy_names_round_trip() {
        for s in [
            Strategy::CrossProduct,
            Strategy::CurlForm,
            Strategy::ParentInherited,
            Strategy::Overintegrated(8),
        ] {
            assert_eq!(s.to_string().parse::<Strategy>().unwrap(), s);
        }
        assert_eq!(
            "overintegrated:6".parse::<Strategy>().unwrap(),
            Strategy::Overintegrated(6)
        );
        assert!("spline".parse::<Strategy>().is_err());
    }
}
