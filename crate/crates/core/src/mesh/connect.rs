//! Periodic face matching by physical centroids.

use std::collections::HashMap;

use super::{ConformingFace, FaceRef, Mesh, MortarChild, MortarFace, Orientation};
use crate::error::{Error, Result};
use crate::geometry::{restrict_face, FacePatch, FaceSubmap, Side};
use crate::vec3::{self, Vec3};

/// Centroids closer than this (modulo the unit period) denote the same face.
pub const MATCH_TOL: f64 = 1e-10;
/// Corner agreement required when confirming that two faces are co-oriented.
const ORIENTATION_TOL: f64 = 1e-8;
const CELL: f64 = 1e-6;

/// `a - b` reduced to the periodic cell `[-1/2, 1/2)^3`.
fn periodic_diff(a: Vec3, b: Vec3) -> Vec3 {
    [0, 1, 2].map(|d| {
        let v = a[d] - b[d];
        v - v.round()
    })
}

/// Integer translation `round(a - b)`.
fn period_shift(a: Vec3, b: Vec3) -> Vec3 {
    [0, 1, 2].map(|d| (a[d] - b[d]).round())
}

/// Spatial hash over centroids wrapped into the unit cube.
struct CentroidIndex {
    cells: HashMap<[i64; 3], Vec<usize>>,
    ncell: i64,
}

impl CentroidIndex {
    fn new() -> Self {
        CentroidIndex {
            cells: HashMap::new(),
            ncell: (1.0 / CELL).round() as i64,
        }
    }

    fn key(&self, c: Vec3) -> [i64; 3] {
        c.map(|v| ((v - v.floor()) / CELL).floor() as i64 % self.ncell)
    }

    fn insert(&mut self, c: Vec3, slot: usize) {
        self.cells.entry(self.key(c)).or_default().push(slot);
    }

    /// Slots in the cell of `c` and its 26 neighbours.
    fn candidates(&self, c: Vec3) -> Vec<usize> {
        let k = self.key(c);
        let mut out = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let key = [
                        (k[0] + dx).rem_euclid(self.ncell),
                        (k[1] + dy).rem_euclid(self.ncell),
                        (k[2] + dz).rem_euclid(self.ncell),
                    ];
                    if let Some(v) = self.cells.get(&key) {
                        out.extend_from_slice(v);
                    }
                }
            }
        }
        out
    }
}

struct Slot {
    face: FaceRef,
    level: u8,
    patch: FacePatch,
    centroid: Vec3,
}

fn corners_agree(a: &FacePatch, b: &FacePatch, shift: Vec3) -> bool {
    a.corners()
        .iter()
        .zip(b.corners())
        .all(|(p, q)| vec3::norm(vec3::sub(*p, vec3::add(q, shift))) <= ORIENTATION_TOL)
}

/// Fills the conforming and mortar face lists of `mesh`.
pub fn connect_faces(mut mesh: Mesh) -> Result<Mesh> {
    let mut slots = Vec::with_capacity(6 * mesh.elements.len());
    for (e, el) in mesh.elements.iter().enumerate() {
        for side in Side::ALL {
            let patch = el.mapping.face(side);
            let centroid = patch.centroid();
            slots.push(Slot {
                face: FaceRef { element: e, side },
                level: el.level,
                patch,
                centroid,
            });
        }
    }
    let mut index = CentroidIndex::new();
    for (i, s) in slots.iter().enumerate() {
        index.insert(s.centroid, i);
    }
    let mut used = vec![false; slots.len()];

    let find = |c: Vec3, side: Side, level: u8, used: &[bool]| -> Option<usize> {
        index.candidates(c).into_iter().find(|&j| {
            !used[j]
                && slots[j].face.side == side
                && slots[j].level == level
                && vec3::norm(periodic_diff(slots[j].centroid, c)) <= MATCH_TOL
        })
    };

    let mut conforming = Vec::new();
    for i in 0..slots.len() {
        let s = &slots[i];
        if used[i] || !s.face.side.positive {
            continue;
        }
        let Some(j) = find(s.centroid, s.face.side.opposite(), s.level, &used) else {
            continue;
        };
        let r = &slots[j];
        let shift = period_shift(s.centroid, r.centroid);
        if !corners_agree(&s.patch, &r.patch, shift) {
            return Err(Error::Orientation(s.face.element, r.face.element));
        }
        used[i] = true;
        used[j] = true;
        conforming.push(ConformingFace {
            left: s.face,
            right: r.face,
            orientation: Orientation::Aligned,
            shift,
        });
    }

    let mut mortars = Vec::new();
    for i in 0..slots.len() {
        if used[i] || slots[i].level != 0 {
            continue;
        }
        let s = &slots[i];
        let mut children = Vec::with_capacity(4);
        for q in 1..=4 {
            let sub = FaceSubmap::quadrant(q);
            let piece = restrict_face(&s.patch, &sub);
            let c = piece.centroid();
            let Some(j) = find(c, s.face.side.opposite(), 1, &used) else {
                break;
            };
            let child = &slots[j];
            let shift = period_shift(c, child.centroid);
            if !corners_agree(&piece, &child.patch, shift) {
                return Err(Error::Orientation(s.face.element, child.face.element));
            }
            children.push((j, MortarChild {
                face: child.face,
                submap: sub,
                beta: sub.beta(),
                shift,
            }));
        }
        if children.len() != 4 {
            continue;
        }
        used[i] = true;
        for (j, _) in &children {
            used[*j] = true;
        }
        let children: Vec<MortarChild> = children.into_iter().map(|(_, c)| c).collect();
        mortars.push(MortarFace {
            parent: s.face,
            children: children.try_into().expect("four quadrants"),
        });
    }

    if let Some(i) = used.iter().position(|u| !u) {
        let f = slots[i].face;
        return Err(Error::UnmatchedFace {
            element: f.element,
            side: f.side.number(),
        });
    }
    log::debug!(
        "connected {} conforming and {} mortar faces",
        conforming.len(),
        mortars.len()
    );
    mesh.conforming = conforming;
    mesh.mortars = mortars;
    Ok(mesh)
}
