//! Geometric gap between the two sides of every interface.

use super::Mesh;
use crate::vec3::{self, Vec3};

const SAMPLES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaceId {
    Conforming(usize),
    /// Mortar index and child quadrant `0..4`.
    Mortar(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WatertightReport {
    pub max_gap: f64,
    pub worst_face: Option<FaceId>,
}

fn sample_params() -> impl Iterator<Item = [f64; 2]> {
    let t = |i: usize| -1.0 + 2.0 * i as f64 / (SAMPLES - 1) as f64;
    (0..SAMPLES).flat_map(move |j| (0..SAMPLES).map(move |i| [t(i), t(j)]))
}

fn gap(p: Vec3, q: Vec3, shift: Vec3) -> f64 {
    vec3::norm(vec3::sub(p, vec3::add(q, shift)))
}

/// Largest distance between matching points of the two sides of each face,
/// sampled on a uniform 10 x 10 parameter grid.
pub fn watertight_residual(mesh: &Mesh) -> WatertightReport {
    let mut report = WatertightReport {
        max_gap: 0.0,
        worst_face: None,
    };
    let mut record = |g: f64, id: FaceId| {
        if g > report.max_gap || report.worst_face.is_none() {
            report.max_gap = report.max_gap.max(g);
            report.worst_face = Some(id);
        }
    };
    for (f, face) in mesh.conforming.iter().enumerate() {
        let l = mesh.elements[face.left.element].mapping.face(face.left.side);
        let r = mesh.elements[face.right.element].mapping.face(face.right.side);
        let g = sample_params()
            .map(|rs| gap(l.evaluate(rs), r.evaluate(rs), face.shift))
            .fold(0.0, f64::max);
        record(g, FaceId::Conforming(f));
    }
    for (m, mortar) in mesh.mortars.iter().enumerate() {
        let p = mesh.elements[mortar.parent.element]
            .mapping
            .face(mortar.parent.side);
        for (q, child) in mortar.children.iter().enumerate() {
            let c = mesh.elements[child.face.element].mapping.face(child.face.side);
            let g = sample_params()
                .map(|rs| gap(p.evaluate(child.submap.apply(rs)), c.evaluate(rs), child.shift))
                .fold(0.0, f64::max);
            record(g, FaceId::Mortar(m, q));
        }
    }
    report
}
