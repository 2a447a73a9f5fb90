//! Metric kernels evaluated in double-double arithmetic and rounded once.
//!
//! Curl-form metrics differentiate coordinate products twice, so in plain
//! `f64` their rounding error grows like `eps N^4 |X|^2` and differs between
//! two elements that share a face. Here every sum is carried in double-double
//! and the operators are balanced so that derivative rows sum to zero and
//! interpolation rows to one. The rounded result is then a function of the
//! face coordinates alone and does not change when all coordinates are
//! shifted by a constant, so neighbours (periodic ones included) get
//! bitwise equal normals.

use nalgebra::DMatrix;
use twofloat::TwoFloat;

use crate::geometry::{AffineSubmap, ElementMapping};
use crate::spectral::{FaceGrid, NodeSet, TensorGrid3};
use crate::vec3::Vec3;

type Dd = TwoFloat;

const ZERO: Dd = TwoFloat::from_f64(0.0);

/// Dense operator whose rows sum exactly to a fixed value.
struct Op {
    rows: usize,
    cols: usize,
    a: Vec<Dd>,
}

impl Op {
    /// Copies `m` and replaces the largest entry of each row so the row sums to `target`.
    fn balanced(m: &DMatrix<f64>, target: f64) -> Op {
        let (rows, cols) = m.shape();
        let mut a = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let row: Vec<f64> = (0..cols).map(|j| m[(i, j)]).collect();
            let big = (0..cols)
                .max_by(|&x, &y| row[x].abs().total_cmp(&row[y].abs()))
                .expect("non-empty row");
            let rest = (0..cols)
                .filter(|&j| j != big)
                .fold(ZERO, |s, j| s + row[j]);
            a.extend((0..cols).map(|j| if j == big { Dd::from(target) - rest } else { Dd::from(row[j]) }));
        }
        Op { rows, cols, a }
    }

    fn derivative(ns: &NodeSet) -> Op {
        Op::balanced(&ns.differentiation_matrix(), 0.0)
    }

    fn interpolation(from: &NodeSet, to: &NodeSet) -> Op {
        Op::balanced(&from.interpolation_to(to), 1.0)
    }
}

/// Scalar double-double values on a tensor grid, first index fastest.
#[derive(Clone)]
struct Grid {
    dims: [usize; 3],
    v: Vec<Dd>,
}

impl Grid {
    fn from_f64(dims: [usize; 3], v: impl Iterator<Item = f64>) -> Grid {
        Grid {
            dims,
            v: v.map(Dd::from).collect(),
        }
    }

    fn apply(&self, axis: usize, op: &Op) -> Grid {
        assert_eq!(self.dims[axis], op.cols, "operator shape");
        let mut dims = self.dims;
        dims[axis] = op.rows;
        let si: usize = self.dims[..axis].iter().product();
        let mut v = vec![ZERO; dims.iter().product()];
        for l in 0..dims[2] {
            for k in 0..dims[1] {
                for j in 0..dims[0] {
                    let mut idx = [j, k, l];
                    let row = idx[axis];
                    idx[axis] = 0;
                    let base = idx[0] + self.dims[0] * (idx[1] + self.dims[1] * idx[2]);
                    let out = j + dims[0] * (k + dims[1] * l);
                    v[out] = (0..op.cols).fold(ZERO, |s, c| {
                        s + op.a[row * op.cols + c] * self.v[base + c * si]
                    });
                }
            }
        }
        Grid { dims, v }
    }

    fn zip(&self, other: &Grid, f: impl Fn(Dd, Dd) -> Dd) -> Grid {
        Grid {
            dims: self.dims,
            v: self.v.iter().zip(&other.v).map(|(a, b)| f(*a, *b)).collect(),
        }
    }
}

fn components(points: &[Vec3], dims: [usize; 3]) -> [Grid; 3] {
    [0, 1, 2].map(|c| Grid::from_f64(dims, points.iter().map(|p| p[c])))
}

fn round3(g: &[Grid; 3]) -> Vec<Vec3> {
    (0..g[0].v.len())
        .map(|p| [0, 1, 2].map(|c| g[c].v[p].hi()))
        .collect()
}

/// Coordinates of an element: its own nodal mapping, or a coarser mapping
/// composed with an affine submap, which avoids rounding the child nodes.
#[derive(Clone, Copy)]
pub(crate) struct Source<'a> {
    pub mapping: &'a ElementMapping,
    pub sub: Option<&'a AffineSubmap>,
}

impl<'a> Source<'a> {
    pub fn own(mapping: &'a ElementMapping) -> Self {
        Source { mapping, sub: None }
    }
}

/// Coordinates at the nodes of `to` along every axis.
fn interpolate_volume(src: Source<'_>, to: &NodeSet) -> [Grid; 3] {
    let from = src.mapping.nodes();
    let ops: [Op; 3] = [0, 1, 2].map(|d| match src.sub {
        None => Op::interpolation(from, to),
        Some(sub) => Op::balanced(
            &from.interpolation_matrix(&to.mapped_nodes(sub.scale[d], sub.offset[d])),
            1.0,
        ),
    });
    let points = src.mapping.points();
    components(points.as_slice(), points.dims())
        .map(|g| g.apply(0, &ops[0]).apply(1, &ops[1]).apply(2, &ops[2]))
}

/// `dX/dxi^j` for `j = 0, 1, 2`, each as three components.
fn gradients(x: &[Grid; 3], d: &Op) -> [[Grid; 3]; 3] {
    [0, 1, 2].map(|j| [0, 1, 2].map(|c| x[c].apply(j, d)))
}

fn cross(a: &[Grid; 3], b: &[Grid; 3]) -> [Grid; 3] {
    [0, 1, 2].map(|c| {
        let (m, l) = ((c + 1) % 3, (c + 2) % 3);
        let p = a[m].zip(&b[l], |x, y| x * y);
        let q = a[l].zip(&b[m], |x, y| x * y);
        p.zip(&q, |x, y| x - y)
    })
}

fn to_tensor(g: &[Grid; 3]) -> TensorGrid3<Vec3> {
    TensorGrid3::from_vec(g[0].dims, round3(g)).expect("grid shape")
}

/// Covariant vectors `dX/dxi^i` of the interpolant of `src` at the nodes of `to`.
pub(super) fn covariant_basis(src: Source<'_>, to: &NodeSet) -> [TensorGrid3<Vec3>; 3] {
    let x = interpolate_volume(src, to);
    let a = gradients(&x, &Op::derivative(to));
    [0, 1, 2].map(|i| to_tensor(&a[i]))
}

/// `J = a_1 . (a_2 x a_3)` at the nodes of `to`.
pub(super) fn jacobian(src: Source<'_>, to: &NodeSet) -> TensorGrid3<f64> {
    let x = interpolate_volume(src, to);
    let a = gradients(&x, &Op::derivative(to));
    let c = cross(&a[1], &a[2]);
    let dims = x[0].dims;
    let v = (0..c[0].v.len())
        .map(|p| (0..3).fold(ZERO, |s, k| s + a[0][k].v[p] * c[k].v[p]).hi())
        .collect();
    TensorGrid3::from_vec(dims, v).expect("grid shape")
}

/// Nodal cross products `Ja^i = a_j x a_k` at the nodes of `to`.
pub(super) fn cross_product_metrics(src: Source<'_>, to: &NodeSet) -> [TensorGrid3<Vec3>; 3] {
    let x = interpolate_volume(src, to);
    let a = gradients(&x, &Op::derivative(to));
    [0, 1, 2].map(|i| to_tensor(&cross(&a[(i + 1) % 3], &a[(i + 2) % 3])))
}

/// `Ja_n^i = d_k I(X_l d_j X_m) - d_j I(X_l d_k X_m)` with `(i, j, k)` and
/// `(n, m, l)` cyclic, on the grid `lq`, which must be a Lobatto grid.
pub(super) fn curl_metrics(src: Source<'_>, lq: &NodeSet) -> [TensorGrid3<Vec3>; 3] {
    let x = interpolate_volume(src, lq);
    let d = Op::derivative(lq);
    let dx = gradients(&x, &d);
    let mut ja: [[Grid; 3]; 3] = [0, 1, 2].map(|_| x.clone());
    for n in 0..3 {
        let (m, l) = ((n + 1) % 3, (n + 2) % 3);
        let v: Vec<Grid> = (0..3).map(|j| x[l].zip(&dx[j][m], |a, b| a * b)).collect();
        for (i, out) in ja.iter_mut().enumerate() {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            out[n] = v[j].apply(k, &d).zip(&v[k].apply(j, &d), |a, b| a - b);
        }
    }
    ja.map(|g| to_tensor(&g))
}

/// The curl formula for `Ja^axis` from a face patch alone; `fj` and `fk` are
/// the face-local indices of the cyclic successors of `axis`.
pub(super) fn face_curl_metrics(
    points: &FaceGrid<Vec3>,
    from: &NodeSet,
    lq: &NodeSet,
    fj: usize,
    fk: usize,
) -> FaceGrid<Vec3> {
    let [n0, n1] = points.dims();
    let op = Op::interpolation(from, lq);
    let x = components(points.as_slice(), [n0, n1, 1]).map(|g| g.apply(0, &op).apply(1, &op));
    let d = Op::derivative(lq);
    let dj: [Grid; 3] = [0, 1, 2].map(|c| x[c].apply(fj, &d));
    let dk: [Grid; 3] = [0, 1, 2].map(|c| x[c].apply(fk, &d));
    let out: [Grid; 3] = [0, 1, 2].map(|n| {
        let (m, l) = ((n + 1) % 3, (n + 2) % 3);
        let vj = x[l].zip(&dj[m], |a, b| a * b);
        let vk = x[l].zip(&dk[m], |a, b| a * b);
        vj.apply(fk, &d).zip(&vk.apply(fj, &d), |a, b| a - b)
    });
    let dims = [out[0].dims[0], out[0].dims[1]];
    FaceGrid::from_vec(dims, round3(&out)).expect("face shape")
}
