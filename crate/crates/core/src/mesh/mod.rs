//! Periodic hexahedral meshes of the unit cube with conforming faces and
//! 4:1 mortar faces produced by 8:1 element refinement.

mod connect;
mod watertight;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{
    sample_analytic_mapping, subdivide_element, AffineSubmap, Box3, DeformSpec, ElementMapping,
    FaceSubmap, Side,
};
use crate::spectral::NodeKind;
use crate::vec3::Vec3;

pub use connect::connect_faces;
pub use watertight::{watertight_residual, FaceId, WatertightReport};

/// How the nodes of refined children are produced.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ChildGeometry {
    /// Parent polynomial evaluated at affinely mapped nodes; watertight.
    #[default]
    Restricted,
    /// Analytic deformation sampled directly over the child box; leaves gaps
    /// against the unrefined neighbours whenever the deformation is not polynomial.
    Resampled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeshSpec {
    /// Coarse elements per direction.
    pub k: usize,
    /// Coarse lattice ids `i + K (j + K l)` to refine 8:1. For extruded
    /// deformations every id refines its whole `z` column.
    pub refine: Vec<usize>,
    pub deform: DeformSpec,
    /// Geometry degree.
    pub ng: usize,
    pub child_geometry: ChildGeometry,
}

impl Default for MeshSpec {
    fn default() -> Self {
        MeshSpec {
            k: 2,
            refine: vec![0],
            deform: DeformSpec::default(),
            ng: 2,
            child_geometry: ChildGeometry::Restricted,
        }
    }
}

impl MeshSpec {
    pub fn extruded(&self) -> bool {
        self.deform.extruded
    }

    pub fn lattice_index(&self, id: usize) -> [usize; 3] {
        let k = self.k;
        [id % k, (id / k) % k, id / (k * k)]
    }

    pub fn lattice_id(&self, idx: [usize; 3]) -> usize {
        idx[0] + self.k * (idx[1] + self.k * idx[2])
    }

    /// Coarse ids actually refined after column expansion.
    pub fn refined_ids(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &id in &self.refine {
            if self.extruded() {
                let [i, j, _] = self.lattice_index(id);
                for l in 0..self.k {
                    out.insert(self.lattice_id([i, j, l]));
                }
            } else {
                out.insert(id);
            }
        }
        out
    }
}

/// Link from a refined child back to the coarse mapping it was cut from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParentLink {
    /// Index into [`Mesh::parents`].
    pub parent: usize,
    pub octant: usize,
    pub submap: AffineSubmap,
}

#[derive(Clone, Debug)]
pub struct Element {
    pub mapping: ElementMapping,
    pub level: u8,
    /// Undeformed box the element covers.
    pub bx: Box3,
    pub parent: Option<ParentLink>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceRef {
    pub element: usize,
    pub side: Side,
}

/// All faces in the synthetic lattice share axis-aligned, co-oriented parameterisations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Orientation {
    #[default]
    Aligned,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConformingFace {
    /// The element whose face is on its positive side.
    pub left: FaceRef,
    pub right: FaceRef,
    pub orientation: Orientation,
    /// Periodic translation taking right-side points onto left-side points.
    pub shift: Vec3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MortarChild {
    pub face: FaceRef,
    /// Child face parameters to parent face parameters.
    pub submap: FaceSubmap,
    pub beta: f64,
    /// Periodic translation taking child points onto parent points.
    pub shift: Vec3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MortarFace {
    /// Face of the unrefined element.
    pub parent: FaceRef,
    pub children: [MortarChild; 4],
}

#[derive(Clone, Debug)]
pub struct Mesh {
    pub spec: MeshSpec,
    pub elements: Vec<Element>,
    /// Coarse mappings of refined elements, before subdivision.
    pub parents: Vec<ElementMapping>,
    pub conforming: Vec<ConformingFace>,
    pub mortars: Vec<MortarFace>,
}

/// Builds and connects the mesh described by `spec`.
pub fn build_mesh(spec: &MeshSpec) -> Result<Mesh> {
    let mesh = build_elements(spec)?;
    connect_faces(mesh)
}

/// Builds the elements without connecting faces.
pub fn build_elements(spec: &MeshSpec) -> Result<Mesh> {
    if spec.k < 2 {
        return Err(Error::MeshSpec(format!(
            "need at least 2 elements per direction, got {}",
            spec.k
        )));
    }
    if spec.ng < 1 {
        return Err(Error::InvalidDegree {
            what: "geometry",
            degree: spec.ng,
            min: 1,
        });
    }
    let ncoarse = spec.k.pow(3);
    if let Some(bad) = spec.refine.iter().find(|&&id| id >= ncoarse) {
        return Err(Error::MeshSpec(format!(
            "refine id {bad} outside 0..{ncoarse}"
        )));
    }
    let refined = spec.refined_ids();
    check_adjacency(spec, &refined)?;

    let mut elements = Vec::new();
    let mut parents = Vec::new();
    for id in 0..ncoarse {
        let idx = spec.lattice_index(id);
        let bx = Box3::lattice(spec.k, idx);
        let coarse = sample_analytic_mapping(&spec.deform, &bx, spec.ng, NodeKind::Lobatto)?;
        if !refined.contains(&id) {
            elements.push(Element {
                mapping: coarse,
                level: 0,
                bx,
                parent: None,
            });
            continue;
        }
        let parent = parents.len();
        for (octant, (child, submap)) in subdivide_element(&coarse).into_iter().enumerate() {
            let child_box = Box3 {
                origin: [0, 1, 2].map(|d| {
                    bx.origin[d] + 0.5 * (submap.offset[d] + 0.5) * bx.size[d]
                }),
                size: bx.size.map(|s| 0.5 * s),
            };
            let mapping = match spec.child_geometry {
                ChildGeometry::Restricted => {
                    child.check_positive()?;
                    child
                }
                ChildGeometry::Resampled => sample_analytic_mapping(
                    &spec.deform,
                    &child_box,
                    spec.ng,
                    NodeKind::Lobatto,
                )?,
            };
            elements.push(Element {
                mapping,
                level: 1,
                bx: child_box,
                parent: Some(ParentLink {
                    parent,
                    octant,
                    submap,
                }),
            });
        }
        parents.push(coarse);
    }
    Ok(Mesh {
        spec: spec.clone(),
        elements,
        parents,
        conforming: Vec::new(),
        mortars: Vec::new(),
    })
}

fn check_adjacency(spec: &MeshSpec, refined: &BTreeSet<usize>) -> Result<()> {
    let k = spec.k as isize;
    // z neighbours inside a refined column are allowed for extruded meshes
    let axes: &[usize] = if spec.extruded() { &[0, 1] } else { &[0, 1, 2] };
    for &id in refined {
        let idx = spec.lattice_index(id);
        for &axis in axes {
            for step in [-1isize, 1] {
                let mut n = idx;
                n[axis] = ((idx[axis] as isize + step).rem_euclid(k)) as usize;
                let nid = spec.lattice_id(n);
                if nid != id && refined.contains(&nid) {
                    return Err(Error::AdjacentRefinement(id.min(nid), id.max(nid)));
                }
            }
        }
    }
    Ok(())
}

impl Mesh {
    pub fn element_count(&self) -> usize {
        self.elements.len()
    }

    pub fn min_jacobian(&self) -> f64 {
        self.elements
            .iter()
            .flat_map(|e| e.mapping.jacobian_at_nodes().into_vec())
            .fold(f64::INFINITY, f64::min)
    }

    /// Writes every geometry node as `elem_id j k l x y z`.
    pub fn write_geometry_dump(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        for (id, e) in self.elements.iter().enumerate() {
            e.mapping.write_dump(id, out)?;
        }
        Ok(())
    }
}

/// Aggregate diagnostics of a connected mesh.
#[derive(Clone, Debug, PartialEq)]
pub struct TopologyReport {
    pub element_count: usize,
    pub conforming_faces: usize,
    pub mortar_faces: usize,
    /// `2 * conforming + 5 * mortar`.
    pub covered_face_slots: usize,
    /// `6 * element_count`.
    pub element_face_slots: usize,
    pub min_jacobian: f64,
    pub watertight_gap: f64,
    pub worst_face: Option<FaceId>,
}

impl TopologyReport {
    pub fn partition_holds(&self) -> bool {
        self.covered_face_slots == self.element_face_slots
    }
}

impl fmt::Display for TopologyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "element_count: {}", self.element_count)?;
        writeln!(f, "conforming_faces: {}", self.conforming_faces)?;
        writeln!(f, "mortar_faces: {}", self.mortar_faces)?;
        writeln!(f, "min_jacobian: {:.6e}", self.min_jacobian)?;
        writeln!(f, "watertight_gap: {:.3e}", self.watertight_gap)
    }
}

pub fn validate_topology(mesh: &Mesh) -> TopologyReport {
    let gap = watertight_residual(mesh);
    TopologyReport {
        element_count: mesh.elements.len(),
        conforming_faces: mesh.conforming.len(),
        mortar_faces: mesh.mortars.len(),
        covered_face_slots: 2 * mesh.conforming.len() + 5 * mesh.mortars.len(),
        element_face_slots: 6 * mesh.elements.len(),
        min_jacobian: mesh.min_jacobian(),
        watertight_gap: gap.max_gap,
        worst_face: gap.worst_face,
    }
}
