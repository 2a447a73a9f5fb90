//! Flux exchange across 4:1 mortar faces.

use nalgebra::DMatrix;

use super::euler::{lax_friedrichs_numerical_flux, State};
use crate::error::Result;
use crate::geometry::FaceSubmap;
use crate::mesh::MortarFace;
use crate::metrics::FaceMetric;
use crate::spectral::{FaceGrid, NodeSet};
use crate::vec3;

/// Restriction and projection matrices for the two halves of a face direction.
#[derive(Clone, Debug)]
pub struct MortarOperators {
    /// Parent nodal basis evaluated at the child nodes mapped into the lower/upper half.
    pub restrict: [DMatrix<f64>; 2],
    /// `M^-1 Phi^T W G / 2`: child nodal values to their contribution to the
    /// parent's L2 projection, with `G` interpolating to a Gauss rule of one more
    /// point, `W` its weights, `Phi` the parent basis at the mapped Gauss points,
    /// `M` the exact parent mass matrix and `1/2` the length of a half interval.
    pub project: [DMatrix<f64>; 2],
    /// The Gauss rule used by `project`.
    pub gauss: NodeSet,
}

fn half(offset: f64) -> usize {
    usize::from(offset > 0.0)
}

impl MortarOperators {
    pub fn new(qs: &NodeSet) -> Result<Self> {
        let gauss = NodeSet::gauss(qs.degree() + 1)?;
        let g = qs.interpolation_matrix(gauss.nodes());
        let w = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(gauss.weights()));
        let minv = qs
            .mass_matrix()
            .try_inverse()
            .expect("mass matrix of a nodal basis is invertible");
        let restrict = [-0.5, 0.5].map(|o| qs.interpolation_matrix(&qs.mapped_nodes(0.5, o)));
        let project = [-0.5, 0.5].map(|o| {
            let phi = qs.interpolation_matrix(&gauss.mapped_nodes(0.5, o));
            (&minv * phi.transpose() * &w * &g) * 0.5
        });
        Ok(MortarOperators {
            restrict,
            project,
            gauss,
        })
    }

    /// Parent face values evaluated at the nodes of the child face `sub`.
    pub fn restrict_to_child<T: crate::spectral::Field>(
        &self,
        parent: &FaceGrid<T>,
        sub: &FaceSubmap,
    ) -> FaceGrid<T> {
        parent
            .apply(0, &self.restrict[half(sub.offset[0])])
            .apply(1, &self.restrict[half(sub.offset[1])])
    }

    /// Contribution of one child patch to the L2 projection onto the parent face
    /// of the piecewise function that equals `child` on the quadrant `sub`.
    pub fn project_to_parent(&self, child: &FaceGrid<State>, sub: &FaceSubmap) -> FaceGrid<State> {
        child
            .apply(0, &self.project[half(sub.offset[0])])
            .apply(1, &self.project[half(sub.offset[1])])
    }
}

/// Fluxes exchanged across one mortar.
#[derive(Clone, Debug)]
pub struct MortarFluxes {
    /// Outward numerical flux on each child face, at the child nodes.
    pub children: [FaceGrid<State>; 4],
    /// Outward numerical flux on the parent face: the L2 projection of the
    /// negated child fluxes.
    pub parent: FaceGrid<State>,
}

/// Restricts the parent trace to each child, evaluates the Lax-Friedrichs flux
/// through the child-scaled parent metric, and projects back onto the parent.
///
/// Child fluxes are per unit child reference area, through `beta` times the
/// parent metric; the parent flux integrates to minus the sum of their integrals.
pub fn mortar_surface_exchange(
    ops: &MortarOperators,
    mortar: &MortarFace,
    parent_trace: &FaceGrid<State>,
    child_traces: [&FaceGrid<State>; 4],
    face_metric: &FaceMetric,
) -> Result<MortarFluxes> {
    let mut parent = FaceGrid::<State>::zeros(parent_trace.dims());
    let mut children = Vec::with_capacity(4);
    for (child, trace) in mortar.children.iter().zip(child_traces) {
        let outer = ops.restrict_to_child(parent_trace, &child.submap);
        let normal = face_metric.restrict(&child.submap);
        let sign = child.face.side.sign();
        let mut flux = FaceGrid::<State>::zeros(trace.dims());
        for (p, out) in flux.as_mut_slice().iter_mut().enumerate() {
            let n = vec3::scale(normal.values.as_slice()[p], sign);
            *out = lax_friedrichs_numerical_flux(&trace.as_slice()[p], &outer.as_slice()[p], n)?;
        }
        // the child flux is per unit child reference area; per parent area it is 1/beta larger
        let contribution = ops.project_to_parent(&flux, &child.submap);
        let scale = 1.0 / child.beta;
        for (o, c) in parent.as_mut_slice().iter_mut().zip(contribution.iter()) {
            for k in 0..5 {
                o[k] -= scale * c[k];
            }
        }
        children.push(flux);
    }
    Ok(MortarFluxes {
        children: children.try_into().expect("four children"),
        parent,
    })
}
