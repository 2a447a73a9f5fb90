//! Volume and face residuals of the discrete metric identities.

use nalgebra::DMatrix;

use super::{MeshMetrics, MetricSet};
use crate::mesh::{ConformingFace, Mesh};
use crate::spectral::{FaceGrid, NodeSet, TensorGrid3};
use crate::vec3::{self, Vec3};

/// Nodal `sum_i d/dxi^i I(Ja^i)` at the quadrature nodes.
pub fn metric_divergence(ms: &MetricSet) -> TensorGrid3<Vec3> {
    let d = ms.quadrature_nodes().differentiation_matrix();
    let mut div = TensorGrid3::<Vec3>::zeros(ms.ja[0].dims());
    for i in 0..3 {
        let g = ms.ja[i].apply(i, &d);
        for (o, v) in div.as_mut_slice().iter_mut().zip(g.iter()) {
            *o = vec3::add(*o, *v);
        }
    }
    div
}

/// `max_{nodes, n} |sum_i d/dxi^i I(Ja_n^i)|`, differentiated at the quadrature degree.
pub fn condition_v_residual(ms: &MetricSet) -> f64 {
    metric_divergence(ms).max_abs()
}

/// Face residual in both the weak and the pointwise sense.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceResidual {
    /// `max_{j, n} |sum_q w_q (Ja* - Ja)_n(q) phi_j(q)|` over both sides.
    pub weak: f64,
    /// `max_{q, n} |(Ja* - Ja)_n(q)|` over both sides.
    pub pointwise: f64,
    /// Largest residual scale of the adjacent elements.
    pub scale: f64,
}

impl FaceResidual {
    /// Pointwise residual relative to the scale; this is what pass/fail uses.
    pub fn normalized(&self) -> f64 {
        self.pointwise / self.scale
    }

    pub fn weak_normalized(&self) -> f64 {
        self.weak / self.scale
    }

    fn merge(self, other: FaceResidual) -> FaceResidual {
        FaceResidual {
            weak: self.weak.max(other.weak),
            pointwise: self.pointwise.max(other.pointwise),
            scale: self.scale.max(other.scale),
        }
    }
}

/// Tests a face-grid difference against the degree-`n` nodal basis with degree-`q` quadrature.
fn side_residual(diff: &FaceGrid<Vec3>, qs: &NodeSet, ns: &NodeSet, scale: f64) -> FaceResidual {
    let w = qs.weights();
    let weighted = FaceGrid::from_fn(diff.dims(), |p, q| vec3::scale(diff.get(p, q), w[p] * w[q]));
    let vt: DMatrix<f64> = ns.interpolation_to(qs).transpose();
    let tested = weighted.apply(0, &vt).apply(1, &vt);
    FaceResidual {
        weak: tested.max_abs(),
        pointwise: diff.max_abs(),
        scale,
    }
}

fn difference(a: &FaceGrid<Vec3>, b: &FaceGrid<Vec3>) -> FaceGrid<Vec3> {
    a.zip_map(b, |x, y| vec3::sub(*x, *y))
}

pub fn condition_f_conforming(mm: &MeshMetrics, face: &ConformingFace) -> FaceResidual {
    let left = &mm.elements[face.left.element];
    let right = &mm.elements[face.right.element];
    let star = mm.conforming_face_metric(face);
    let qs = left.quadrature_nodes();
    let ns = left.solution_nodes();
    let scale = left.scale().max(right.scale());
    let l = side_residual(
        &difference(&star, &left.face_normal_metric(face.left.side)),
        &qs,
        &ns,
        scale,
    );
    let r = side_residual(
        &difference(&star, &right.face_normal_metric(face.right.side)),
        &qs,
        &ns,
        scale,
    );
    l.merge(r)
}

/// Residual of mortar `index` on the parent side and on each child, the child
/// reference being `beta` times the parent face metric through the submap.
pub fn condition_f_mortar(mesh: &Mesh, mm: &MeshMetrics, index: usize) -> FaceResidual {
    let mortar = &mesh.mortars[index];
    let star = &mm.mortars[index];
    let parent = &mm.elements[mortar.parent.element];
    let qs = parent.quadrature_nodes();
    let ns = parent.solution_nodes();
    let scale = mortar
        .children
        .iter()
        .map(|c| mm.elements[c.face.element].scale())
        .fold(parent.scale(), f64::max);
    let mut res = side_residual(
        &difference(&star.values, &parent.face_normal_metric(mortar.parent.side)),
        &qs,
        &ns,
        scale,
    );
    for child in &mortar.children {
        let own = mm.elements[child.face.element].face_normal_metric(child.face.side);
        let target = star.restrict(&child.submap);
        res = res.merge(side_residual(&difference(&target.values, &own), &qs, &ns, scale));
    }
    res
}

/// Per-element and per-face residuals of a mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    /// `(residual, scale)` per element.
    pub volume: Vec<(f64, f64)>,
    pub conforming: Vec<FaceResidual>,
    pub mortar: Vec<FaceResidual>,
}

impl ConditionReport {
    /// Largest volume residual relative to its element scale.
    pub fn max_v(&self) -> f64 {
        self.volume.iter().map(|(r, s)| r / s).fold(0.0, f64::max)
    }

    /// Largest pointwise face residual relative to its face scale.
    pub fn max_f(&self) -> f64 {
        self.conforming
            .iter()
            .chain(&self.mortar)
            .map(FaceResidual::normalized)
            .fold(0.0, f64::max)
    }

    pub fn max_f_weak(&self) -> f64 {
        self.conforming
            .iter()
            .chain(&self.mortar)
            .map(FaceResidual::weak_normalized)
            .fold(0.0, f64::max)
    }

    pub fn max_f_mortar(&self) -> f64 {
        self.mortar
            .iter()
            .map(FaceResidual::normalized)
            .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_v() <= tol && self.max_f() <= tol
    }

    /// Rows `kind,id,strategy,residual` with residuals relative to their scale;
    /// `condF` rows are pointwise and `condF_weak` rows hold the tested form.
    pub fn csv_rows(&self, strategy: &str) -> Vec<String> {
        let mut rows = Vec::new();
        for (e, (r, s)) in self.volume.iter().enumerate() {
            rows.push(format!("condV,elem{e},{strategy},{:.6e}", r / s));
        }
        for (f, r) in self.conforming.iter().enumerate() {
            rows.push(format!("condF,face{f},{strategy},{:.6e}", r.normalized()));
            rows.push(format!("condF_weak,face{f},{strategy},{:.6e}", r.weak_normalized()));
        }
        for (f, r) in self.mortar.iter().enumerate() {
            rows.push(format!("condF,mortar{f},{strategy},{:.6e}", r.normalized()));
            rows.push(format!("condF_weak,mortar{f},{strategy},{:.6e}", r.weak_normalized()));
        }
        rows
    }
}

pub fn condition_report(mesh: &Mesh, mm: &MeshMetrics) -> ConditionReport {
    ConditionReport {
        volume: mm
            .elements
            .iter()
            .map(|ms| (condition_v_residual(ms), ms.scale()))
            .collect(),
        conforming: mesh
            .conforming
            .iter()
            .map(|f| condition_f_conforming(mm, f))
            .collect(),
        mortar: (0..mesh.mortars.len())
            .map(|i| condition_f_mortar(mesh, mm, i))
            .collect(),
    }
}
