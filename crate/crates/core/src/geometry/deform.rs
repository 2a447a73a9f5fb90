//! Analytic smooth periodic deformations of the unit cube.

use std::f64::consts::TAU;

use crate::vec3::Vec3;

/// Amplitude and wavenumbers of the deformation `x -> x + a * d(x)`.
///
/// The general variant displaces every coordinate by a product of sines in the other two,
/// `d = (s(y) s(z), s(z) s(x), s(x) s(y))` with `s(t) = sin 2pi k (t + phase)`.
/// Without a phase every plane `t = m/2` is a zero of `s`, so the faces of a
/// `K = 2` lattice would only bulge along their own normal, and a quarter
/// period turns `s` into a cosine with the same kind of symmetry. The default
/// phase of 0.3 periods avoids both and curves every face in all directions. The extruded
/// variant leaves `z` untouched and displaces `(x, y)` by functions of `(x, y)` alone,
/// `d = (sin 2pi(x + y), sin 2pi(x - y), 0)`, so element mappings stay affine in `zeta`.
/// Both are periodic on the unit cube.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeformSpec {
    pub amplitude: f64,
    pub wavenumbers: [u32; 3],
    /// Shift of the sine arguments of the general variant, in periods.
    pub phase: f64,
    pub extruded: bool,
}

pub const DEFAULT_PHASE: f64 = 0.3;

impl Default for DeformSpec {
    fn default() -> Self {
        DeformSpec::general(0.05)
    }
}

impl DeformSpec {
    pub fn general(amplitude: f64) -> Self {
        DeformSpec {
            amplitude,
            wavenumbers: [1, 1, 1],
            phase: DEFAULT_PHASE,
            extruded: false,
        }
    }

    pub fn extruded(amplitude: f64) -> Self {
        DeformSpec {
            extruded: true,
            ..Self::general(amplitude)
        }
    }

    pub fn identity() -> Self {
        Self::general(0.0)
    }

    pub fn apply(&self, x: Vec3) -> Vec3 {
        let a = self.amplitude;
        if a == 0.0 {
            return x;
        }
        let k = self.wavenumbers.map(|k| k as f64 * TAU);
        if self.extruded {
            let sp = (k[0] * x[0] + k[1] * x[1]).sin();
            let sm = (k[0] * x[0] - k[1] * x[1]).sin();
            [x[0] + a * sp, x[1] + a * sm, x[2]]
        } else {
            let s = [0, 1, 2].map(|d| (k[d] * (x[d] + self.phase)).sin());
            [
                x[0] + a * s[1] * s[2],
                x[1] + a * s[2] * s[0],
                x[2] + a * s[0] * s[1],
            ]
        }
    }
}

/// Axis-aligned box `origin + [0, size]` in the undeformed unit cube.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Box3 {
    pub origin: Vec3,
    pub size: Vec3,
}

impl Box3 {
    pub fn unit() -> Self {
        Box3 {
            origin: [0.0; 3],
            size: [1.0; 3],
        }
    }

    /// Box `(i, j, k)` of a `K x K x K` lattice on the unit cube.
    ///
    /// Corners are the correctly rounded `i / K` and the size is their exact
    /// difference, so [`Box3::map`] reproduces a shared face bit for bit from
    /// either side.
    pub fn lattice(k: usize, idx: [usize; 3]) -> Self {
        let lo = idx.map(|i| i as f64 / k as f64);
        let hi = idx.map(|i| (i + 1) as f64 / k as f64);
        Box3 {
            origin: lo,
            size: [0, 1, 2].map(|d| hi[d] - lo[d]),
        }
    }

    /// Linear map from the reference cube onto the box.
    pub fn map(&self, xi: Vec3) -> Vec3 {
        [0, 1, 2].map(|d| self.origin[d] + 0.5 * (xi[d] + 1.0) * self.size[d])
    }

    pub fn is_degenerate(&self) -> bool {
        self.size.iter().any(|s| !(s.is_finite() && *s > 0.0))
    }
}
