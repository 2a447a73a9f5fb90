//! Nodal values on tensor-product grids and one-dimensional operators applied along an axis.

use nalgebra::DMatrix;

use super::nodes::NodeSet;
use crate::error::{Error, Result};

/// Values that can be combined linearly: scalars and small fixed-length vectors.
pub trait Field: Copy + Send + Sync + std::fmt::Debug + 'static {
    const ZERO: Self;

    /// `self += a * x`
    fn axpy(&mut self, a: f64, x: &Self);

    fn max_abs(&self) -> f64;

    fn scaled(self, a: f64) -> Self {
        let mut out = Self::ZERO;
        out.axpy(a, &self);
        out
    }

    fn sub(&self, other: &Self) -> Self {
        let mut out = *self;
        out.axpy(-1.0, other);
        out
    }
}

impl Field for f64 {
    const ZERO: Self = 0.0;

    #[inline]
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }

    fn max_abs(&self) -> f64 {
        self.abs()
    }
}

impl<const K: usize> Field for [f64; K] {
    const ZERO: Self = [0.0; K];

    #[inline]
    fn axpy(&mut self, a: f64, x: &Self) {
        for (s, v) in self.iter_mut().zip(x) {
            *s += a * v;
        }
    }

    fn max_abs(&self) -> f64 {
        self.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Contracts axis `axis` of a row-major-by-first-index array with `mat`.
///
/// `out[.., r, ..] = sum_c mat[(r, c)] * data[.., c, ..]`; index 0 runs fastest.
pub fn contract_axis<T: Field>(
    data: &[T],
    dims: &[usize],
    axis: usize,
    mat: &DMatrix<f64>,
) -> Vec<T> {
    let n = dims[axis];
    assert_eq!(mat.ncols(), n, "operator width does not match axis length");
    let m = mat.nrows();
    let inner: usize = dims[..axis].iter().product();
    let outer: usize = dims[axis + 1..].iter().product();
    let mut out = vec![T::ZERO; inner * m * outer];
    for o in 0..outer {
        for r in 0..m {
            let dst = inner * (r + m * o);
            for c in 0..n {
                let a = mat[(r, c)];
                if a == 0.0 {
                    continue;
                }
                let src = inner * (c + n * o);
                for i in 0..inner {
                    out[dst + i].axpy(a, &data[src + i]);
                }
            }
        }
    }
    out
}

/// Nodal values `v_jkl` on a three-dimensional tensor grid, `j` fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorGrid3<T> {
    dims: [usize; 3],
    data: Vec<T>,
}

impl<T: Field> TensorGrid3<T> {
    pub fn filled(dims: [usize; 3], value: T) -> Self {
        TensorGrid3 {
            dims,
            data: vec![value; dims.iter().product()],
        }
    }

    pub fn zeros(dims: [usize; 3]) -> Self {
        Self::filled(dims, T::ZERO)
    }

    pub fn from_vec(dims: [usize; 3], data: Vec<T>) -> Result<Self> {
        if data.len() != dims.iter().product::<usize>() {
            return Err(Error::ShapeMismatch(format!(
                "{} values for grid {:?}",
                data.len(),
                dims
            )));
        }
        Ok(TensorGrid3 { dims, data })
    }

    /// Fills a grid by calling `f(j, k, l)` at every index.
    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dims.iter().product());
        for l in 0..dims[2] {
            for k in 0..dims[1] {
                for j in 0..dims[0] {
                    data.push(f(j, k, l));
                }
            }
        }
        TensorGrid3 { dims, data }
    }

    /// Samples `f` at the tensor product of three node sets.
    pub fn sample(ns: [&NodeSet; 3], mut f: impl FnMut([f64; 3]) -> T) -> Self {
        let dims = [ns[0].len(), ns[1].len(), ns[2].len()];
        Self::from_fn(dims, |j, k, l| {
            f([ns[0].nodes()[j], ns[1].nodes()[k], ns[2].nodes()[l]])
        })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    /// Polynomial degree per direction, one less than the point count.
    pub fn degrees(&self) -> [usize; 3] {
        self.dims.map(|d| d.saturating_sub(1))
    }

    #[inline]
    pub fn index(&self, j: usize, k: usize, l: usize) -> usize {
        debug_assert!(j < self.dims[0] && k < self.dims[1] && l < self.dims[2]);
        j + self.dims[0] * (k + self.dims[1] * l)
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize, l: usize) -> T {
        self.data[self.index(j, k, l)]
    }

    #[inline]
    pub fn get_mut(&mut self, j: usize, k: usize, l: usize) -> &mut T {
        let i = self.index(j, k, l);
        &mut self.data[i]
    }

    /// Value at a multi-index given as an array.
    #[inline]
    pub fn at(&self, idx: [usize; 3]) -> T {
        self.get(idx[0], idx[1], idx[2])
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    /// Iterates `([j, k, l], value)`.
    pub fn indexed(&self) -> impl Iterator<Item = ([usize; 3], &T)> {
        let [n0, n1, _] = self.dims;
        self.data
            .iter()
            .enumerate()
            .map(move |(i, v)| ([i % n0, (i / n0) % n1, i / (n0 * n1)], v))
    }

    pub fn map<U: Field>(&self, f: impl FnMut(&T) -> U) -> TensorGrid3<U> {
        TensorGrid3 {
            dims: self.dims,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn zip_map<U: Field, V: Field>(
        &self,
        other: &TensorGrid3<U>,
        mut f: impl FnMut(&T, &U) -> V,
    ) -> TensorGrid3<V> {
        assert_eq!(self.dims, other.dims);
        TensorGrid3 {
            dims: self.dims,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    /// Applies a one-dimensional operator along `axis`.
    pub fn apply(&self, axis: usize, mat: &DMatrix<f64>) -> Self {
        let mut dims = self.dims;
        let data = contract_axis(&self.data, &dims, axis, mat);
        dims[axis] = mat.nrows();
        TensorGrid3 { dims, data }
    }

    /// Applies the same operator along all three axes.
    pub fn apply_all(&self, mat: &DMatrix<f64>) -> Self {
        self.apply(0, mat).apply(1, mat).apply(2, mat)
    }

    /// Contracts `axis` with a single vector, giving the face grid over the other two axes.
    pub fn contract_to_face(&self, axis: usize, vec: &[f64]) -> FaceGrid<T> {
        let row = DMatrix::from_row_slice(1, vec.len(), vec);
        let data = contract_axis(&self.data, &self.dims, axis, &row);
        let t = tangential_axes(axis);
        FaceGrid {
            dims: [self.dims[t[0]], self.dims[t[1]]],
            data,
        }
    }

    /// Copies the layer `index` along `axis`.
    pub fn slice(&self, axis: usize, index: usize) -> FaceGrid<T> {
        let t = tangential_axes(axis);
        let dims = [self.dims[t[0]], self.dims[t[1]]];
        let mut data = Vec::with_capacity(dims[0] * dims[1]);
        for q in 0..dims[1] {
            for p in 0..dims[0] {
                let mut idx = [0; 3];
                idx[axis] = index;
                idx[t[0]] = p;
                idx[t[1]] = q;
                data.push(self.at(idx));
            }
        }
        FaceGrid { dims, data }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.max_abs()))
    }
}

/// The two axes tangential to a face normal to `axis`, in increasing order.
pub fn tangential_axes(axis: usize) -> [usize; 2] {
    match axis {
        0 => [1, 2],
        1 => [0, 2],
        2 => [0, 1],
        _ => panic!("axis {axis} out of range"),
    }
}

/// Nodal values on a two-dimensional face grid, first index fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceGrid<T> {
    dims: [usize; 2],
    data: Vec<T>,
}

impl<T: Field> FaceGrid<T> {
    pub fn zeros(dims: [usize; 2]) -> Self {
        FaceGrid {
            dims,
            data: vec![T::ZERO; dims[0] * dims[1]],
        }
    }

    pub fn from_fn(dims: [usize; 2], mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(dims[0] * dims[1]);
        for q in 0..dims[1] {
            for p in 0..dims[0] {
                data.push(f(p, q));
            }
        }
        FaceGrid { dims, data }
    }

    pub fn sample(ns: [&NodeSet; 2], mut f: impl FnMut([f64; 2]) -> T) -> Self {
        Self::from_fn([ns[0].len(), ns[1].len()], |p, q| {
            f([ns[0].nodes()[p], ns[1].nodes()[q]])
        })
    }

    pub fn from_vec(dims: [usize; 2], data: Vec<T>) -> Result<Self> {
        if data.len() != dims[0] * dims[1] {
            return Err(Error::ShapeMismatch(format!(
                "{} values for face grid {:?}",
                data.len(),
                dims
            )));
        }
        Ok(FaceGrid { dims, data })
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize) -> T {
        self.data[p + self.dims[0] * q]
    }

    #[inline]
    pub fn get_mut(&mut self, p: usize, q: usize) -> &mut T {
        let d = self.dims[0];
        &mut self.data[p + d * q]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U: Field>(&self, f: impl FnMut(&T) -> U) -> FaceGrid<U> {
        FaceGrid {
            dims: self.dims,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn zip_map<U: Field, V: Field>(
        &self,
        other: &FaceGrid<U>,
        mut f: impl FnMut(&T, &U) -> V,
    ) -> FaceGrid<V> {
        assert_eq!(self.dims, other.dims);
        FaceGrid {
            dims: self.dims,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn apply(&self, axis: usize, mat: &DMatrix<f64>) -> Self {
        let mut dims = self.dims;
        let data = contract_axis(&self.data, &dims, axis, mat);
        dims[axis] = mat.nrows();
        FaceGrid { dims, data }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.max_abs()))
    }
}

/// `sum_jkl A_jkl . B_jkl w_j w_k w_l` over scalar or vector nodal data.
pub fn discrete_inner_product<const K: usize>(
    a: &TensorGrid3<[f64; K]>,
    b: &TensorGrid3<[f64; K]>,
    ns: [&NodeSet; 3],
) -> Result<f64> {
    let dims = [ns[0].len(), ns[1].len(), ns[2].len()];
    if a.dims() != dims || b.dims() != dims {
        return Err(Error::ShapeMismatch(format!(
            "inner product of grids {:?} and {:?} with nodes {:?}",
            a.dims(),
            b.dims(),
            dims
        )));
    }
    let mut sum = 0.0;
    for (idx, va) in a.indexed() {
        let vb = b.at(idx);
        let w = ns[0].weights()[idx[0]] * ns[1].weights()[idx[1]] * ns[2].weights()[idx[2]];
        let dot: f64 = va.iter().zip(&vb).map(|(x, y)| x * y).sum();
        sum += dot * w;
    }
    Ok(sum)
}

/// Scalar convenience wrapper for [`discrete_inner_product`].
pub fn discrete_inner_product_scalar(
    a: &TensorGrid3<f64>,
    b: &TensorGrid3<f64>,
    ns: [&NodeSet; 3],
) -> Result<f64> {
    discrete_inner_product(&a.map(|v| [*v]), &b.map(|v| [*v]), ns)
}
