//! Tensor-product polynomial element mappings and their face patches.

use nalgebra::DMatrix;

use super::deform::{Box3, DeformSpec};
use crate::error::{Error, Result};
use crate::spectral::{tangential_axes, FaceGrid, NodeKind, NodeSet, TensorGrid3};
use crate::vec3::{self, Vec3};

/// One of the six faces of the reference cube.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Side {
    pub axis: usize,
    pub positive: bool,
}

impl Side {
    pub const XI_MINUS: Side = Side { axis: 0, positive: false };
    pub const XI_PLUS: Side = Side { axis: 0, positive: true };
    pub const ETA_MINUS: Side = Side { axis: 1, positive: false };
    pub const ETA_PLUS: Side = Side { axis: 1, positive: true };
    pub const ZETA_MINUS: Side = Side { axis: 2, positive: false };
    pub const ZETA_PLUS: Side = Side { axis: 2, positive: true };

    pub const ALL: [Side; 6] = [
        Side::XI_MINUS,
        Side::XI_PLUS,
        Side::ETA_MINUS,
        Side::ETA_PLUS,
        Side::ZETA_MINUS,
        Side::ZETA_PLUS,
    ];

    /// Position in [`Side::ALL`].
    pub fn index(self) -> usize {
        2 * self.axis + usize::from(self.positive)
    }

    /// Local side number 1..=6.
    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn from_index(i: usize) -> Side {
        Side::ALL[i]
    }

    /// `+1` or `-1`, the reference coordinate of the face and the sign of its outward normal.
    pub fn sign(self) -> f64 {
        if self.positive {
            1.0
        } else {
            -1.0
        }
    }

    pub fn opposite(self) -> Side {
        Side {
            axis: self.axis,
            positive: !self.positive,
        }
    }

    pub fn tangential(self) -> [usize; 2] {
        tangential_axes(self.axis)
    }

    /// Embeds face parameters `(r, s)` into the reference cube.
    pub fn embed(self, rs: [f64; 2]) -> Vec3 {
        let t = self.tangential();
        let mut xi = [0.0; 3];
        xi[self.axis] = self.sign();
        xi[t[0]] = rs[0];
        xi[t[1]] = rs[1];
        xi
    }
}

/// `X(xi)` stored as nodal points of a degree-`Ng` tensor-product interpolant.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementMapping {
    nodes: NodeSet,
    points: TensorGrid3<Vec3>,
}

impl ElementMapping {
    pub fn new(nodes: NodeSet, points: TensorGrid3<Vec3>) -> Result<Self> {
        let n = nodes.len();
        if points.dims() != [n, n, n] {
            return Err(Error::ShapeMismatch(format!(
                "mapping with {n} nodes per direction given grid {:?}",
                points.dims()
            )));
        }
        if points.iter().any(|p| p.iter().any(|c| !c.is_finite())) {
            return Err(Error::ShapeMismatch("non-finite mapping node".into()));
        }
        Ok(ElementMapping { nodes, points })
    }

    /// Interpolates `f` at the degree-`ng` nodes of `kind`.
    pub fn from_fn(ng: usize, kind: NodeKind, f: impl Fn(Vec3) -> Vec3) -> Result<Self> {
        let nodes = NodeSet::new(kind, ng)?;
        let points = TensorGrid3::sample([&nodes, &nodes, &nodes], f);
        Self::new(nodes, points)
    }

    pub fn degree(&self) -> usize {
        self.nodes.degree()
    }

    pub fn kind(&self) -> NodeKind {
        self.nodes.kind()
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn points(&self) -> &TensorGrid3<Vec3> {
        &self.points
    }

    pub fn evaluate(&self, xi: Vec3) -> Vec3 {
        let l = [0, 1, 2].map(|d| self.nodes.lagrange_basis(xi[d]));
        let mut x = [0.0; 3];
        for (idx, p) in self.points.indexed() {
            let w = l[0][idx[0]] * l[1][idx[1]] * l[2][idx[2]];
            for c in 0..3 {
                x[c] += w * p[c];
            }
        }
        x
    }

    /// Values of the mapping at the tensor product of `ns`.
    pub fn sample_at(&self, ns: &NodeSet) -> TensorGrid3<Vec3> {
        self.points.apply_all(&self.nodes.interpolation_to(ns))
    }

    /// Re-interpolates the mapping at the nodes of `ns`; exact when `ns` has degree `>= Ng`.
    pub fn resample(&self, ns: &NodeSet) -> ElementMapping {
        ElementMapping {
            nodes: ns.clone(),
            points: self.sample_at(ns),
        }
    }

    /// Covariant vectors `dX/dxi^i` at the mapping's own nodes.
    pub fn covariant_at_nodes(&self) -> [TensorGrid3<Vec3>; 3] {
        let d = self.nodes.differentiation_matrix();
        [0, 1, 2].map(|axis| self.points.apply(axis, &d))
    }

    /// Jacobian `a_1 . (a_2 x a_3)` at the mapping's own nodes.
    pub fn jacobian_at_nodes(&self) -> TensorGrid3<f64> {
        let [a1, a2, a3] = self.covariant_at_nodes();
        TensorGrid3::from_fn(self.points.dims(), |j, k, l| {
            vec3::triple(a1.get(j, k, l), a2.get(j, k, l), a3.get(j, k, l))
        })
    }

    /// Fails with the first non-positive nodal Jacobian.
    pub fn check_positive(&self) -> Result<f64> {
        let jac = self.jacobian_at_nodes();
        let mut min = f64::INFINITY;
        for (idx, &j) in jac.indexed() {
            if !(j > 0.0) {
                return Err(Error::InvertedElement {
                    jacobian: j,
                    node: idx,
                });
            }
            min = min.min(j);
        }
        Ok(min)
    }

    /// The face patch `X` restricted to `side`.
    ///
    /// Lobatto mappings slice the nodal data; Gauss mappings contract the normal
    /// direction with the boundary interpolation vector.
    pub fn face(&self, side: Side) -> FacePatch {
        let points = match self.nodes.kind() {
            NodeKind::Lobatto => {
                let idx = if side.positive { self.nodes.degree() } else { 0 };
                self.points.slice(side.axis, idx)
            }
            NodeKind::Gauss => self
                .points
                .contract_to_face(side.axis, &self.nodes.boundary_vector(side.sign())),
        };
        FacePatch {
            nodes: self.nodes.clone(),
            points,
        }
    }

    pub fn faces(&self) -> [FacePatch; 6] {
        Side::ALL.map(|s| self.face(s))
    }

    /// Child mapping `xi -> X(scale * xi + offset)` interpolated at the same nodes.
    pub fn restrict(&self, sub: &super::AffineSubmap) -> ElementMapping {
        let mats: [DMatrix<f64>; 3] = [0, 1, 2].map(|d| {
            self.nodes
                .interpolation_matrix(&self.nodes.mapped_nodes(sub.scale[d], sub.offset[d]))
        });
        let points = self
            .points
            .apply(0, &mats[0])
            .apply(1, &mats[1])
            .apply(2, &mats[2]);
        ElementMapping {
            nodes: self.nodes.clone(),
            points,
        }
    }

    /// Rigid translation of every node.
    pub fn translated(&self, by: Vec3) -> ElementMapping {
        ElementMapping {
            nodes: self.nodes.clone(),
            points: self.points.map(|p| vec3::add(*p, by)),
        }
    }

    /// Plain-text dump, one line `elem_id j k l x y z` per geometry node.
    pub fn write_dump(&self, elem_id: usize, out: &mut impl std::io::Write) -> std::io::Result<()> {
        for (idx, p) in self.points.indexed() {
            writeln!(
                out,
                "{elem_id} {} {} {} {:.17e} {:.17e} {:.17e}",
                idx[0], idx[1], idx[2], p[0], p[1], p[2]
            )?;
        }
        Ok(())
    }
}

/// A face `Gamma(r, s)` stored as nodal points of a degree-`Ng` interpolant.
#[derive(Clone, Debug, PartialEq)]
pub struct FacePatch {
    nodes: NodeSet,
    points: FaceGrid<Vec3>,
}

impl FacePatch {
    pub fn new(nodes: NodeSet, points: FaceGrid<Vec3>) -> Result<Self> {
        let n = nodes.len();
        if points.dims() != [n, n] {
            return Err(Error::ShapeMismatch(format!(
                "face with {n} nodes per direction given grid {:?}",
                points.dims()
            )));
        }
        Ok(FacePatch { nodes, points })
    }

    pub fn from_fn(ng: usize, kind: NodeKind, f: impl Fn([f64; 2]) -> Vec3) -> Result<Self> {
        let nodes = NodeSet::new(kind, ng)?;
        let points = FaceGrid::sample([&nodes, &nodes], f);
        Self::new(nodes, points)
    }

    pub fn degree(&self) -> usize {
        self.nodes.degree()
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn points(&self) -> &FaceGrid<Vec3> {
        &self.points
    }

    pub fn evaluate(&self, rs: [f64; 2]) -> Vec3 {
        let l0 = self.nodes.lagrange_basis(rs[0]);
        let l1 = self.nodes.lagrange_basis(rs[1]);
        let [n0, n1] = self.points.dims();
        let mut x = [0.0; 3];
        for q in 0..n1 {
            for p in 0..n0 {
                let w = l0[p] * l1[q];
                let v = self.points.get(p, q);
                for c in 0..3 {
                    x[c] += w * v[c];
                }
            }
        }
        x
    }

    /// Values at the tensor product of `ns`.
    pub fn sample_at(&self, ns: &NodeSet) -> FaceGrid<Vec3> {
        let m = self.nodes.interpolation_to(ns);
        self.points.apply(0, &m).apply(1, &m)
    }

    /// Points at the four parameter corners in the order `(-,-), (+,-), (-,+), (+,+)`.
    pub fn corners(&self) -> [Vec3; 4] {
        [[-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0], [1.0, 1.0]].map(|rs| self.evaluate(rs))
    }

    /// Average of the four corners.
    pub fn centroid(&self) -> Vec3 {
        let c = self.corners();
        [0, 1, 2].map(|d| 0.25 * (c[0][d] + c[1][d] + c[2][d] + c[3][d]))
    }
}

/// Samples `deform` over `bx` at degree-`ng` nodes of `kind`.
///
/// Fails if any nodal Jacobian of the resulting polynomial mapping is not positive.
pub fn sample_analytic_mapping(
    deform: &DeformSpec,
    bx: &Box3,
    ng: usize,
    kind: NodeKind,
) -> Result<ElementMapping> {
    if ng < 1 {
        return Err(Error::InvalidDegree {
            what: "geometry",
            degree: ng,
            min: 1,
        });
    }
    if bx.is_degenerate() {
        return Err(Error::MeshSpec(format!("degenerate box {bx:?}")));
    }
    let m = ElementMapping::from_fn(ng, kind, |xi| deform.apply(bx.map(xi)))?;
    m.check_positive()?;
    Ok(m)
}
