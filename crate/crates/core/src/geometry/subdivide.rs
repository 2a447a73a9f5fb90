//! Affine subdivision of elements and faces.

use super::mapping::{ElementMapping, FacePatch, Side};
use crate::vec3::Vec3;

/// Child-to-parent reference map `r^d = scale_d * xi^d + offset_d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineSubmap {
    pub scale: Vec3,
    pub offset: Vec3,
}

impl AffineSubmap {
    pub fn identity() -> Self {
        AffineSubmap {
            scale: [1.0; 3],
            offset: [0.0; 3],
        }
    }

    /// Halving map onto octant `o` (0..8); bit `d` of `o` selects the upper half in direction `d`.
    pub fn octant(o: usize) -> Self {
        assert!(o < 8, "octant {o} out of range");
        AffineSubmap {
            scale: [0.5; 3],
            offset: [0, 1, 2].map(|d| if o >> d & 1 == 1 { 0.5 } else { -0.5 }),
        }
    }

    pub fn apply(&self, xi: Vec3) -> Vec3 {
        [0, 1, 2].map(|d| self.scale[d] * xi[d] + self.offset[d])
    }

    /// `beta = alpha_j * alpha_k` for the face normal to `axis`.
    pub fn face_beta(&self, axis: usize) -> f64 {
        let t = crate::spectral::tangential_axes(axis);
        self.scale[t[0]] * self.scale[t[1]]
    }

    /// `alpha_1 alpha_2 alpha_3`, the ratio of child to parent Jacobians.
    pub fn volume_factor(&self) -> f64 {
        self.scale.iter().product()
    }

    /// The part of the map tangential to `side`.
    pub fn face_submap(&self, side: Side) -> FaceSubmap {
        let t = side.tangential();
        FaceSubmap {
            scale: [self.scale[t[0]], self.scale[t[1]]],
            offset: [self.offset[t[0]], self.offset[t[1]]],
        }
    }

    /// True when the image of the reference cube stays inside it.
    pub fn is_contained(&self) -> bool {
        (0..3).all(|d| {
            let s = self.scale[d];
            s > 0.0 && s <= 1.0 && self.offset[d].abs() + s <= 1.0 + 1e-15
        })
    }
}

/// Child-face-to-parent-face parameter map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceSubmap {
    pub scale: [f64; 2],
    pub offset: [f64; 2],
}

impl FaceSubmap {
    /// Quadrants are numbered `1: (-,-)`, `2: (+,-)`, `3: (-,+)`, `4: (+,+)`.
    pub fn quadrant(q: usize) -> Self {
        assert!((1..=4).contains(&q), "quadrant {q} out of range");
        let b = q - 1;
        FaceSubmap {
            scale: [0.5; 2],
            offset: [
                if b & 1 == 1 { 0.5 } else { -0.5 },
                if b & 2 == 2 { 0.5 } else { -0.5 },
            ],
        }
    }

    pub fn apply(&self, rs: [f64; 2]) -> [f64; 2] {
        [
            self.scale[0] * rs[0] + self.offset[0],
            self.scale[1] * rs[1] + self.offset[1],
        ]
    }

    pub fn beta(&self) -> f64 {
        self.scale[0] * self.scale[1]
    }
}

/// Child face whose nodes are the parent evaluated at the affinely mapped nodes.
pub fn child_face_patch(parent: &FacePatch, quadrant: usize) -> FacePatch {
    restrict_face(parent, &FaceSubmap::quadrant(quadrant))
}

pub fn restrict_face(parent: &FacePatch, sub: &FaceSubmap) -> FacePatch {
    let ns = parent.nodes();
    let m0 = ns.interpolation_matrix(&ns.mapped_nodes(sub.scale[0], sub.offset[0]));
    let m1 = ns.interpolation_matrix(&ns.mapped_nodes(sub.scale[1], sub.offset[1]));
    let points = parent.points().apply(0, &m0).apply(1, &m1);
    FacePatch::new(ns.clone(), points).expect("restriction keeps the grid shape")
}

/// The eight octant children of `parent`, each with its submap.
pub fn subdivide_element(parent: &ElementMapping) -> Vec<(ElementMapping, AffineSubmap)> {
    (0..8)
        .map(|o| {
            let sub = AffineSubmap::octant(o);
            (parent.restrict(&sub), sub)
        })
        .collect()
}
