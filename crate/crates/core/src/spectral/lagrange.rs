//! Barycentric Lagrange interpolation and differentiation on a [`NodeSet`].

use nalgebra::DMatrix;

use super::grid::Field;
use super::nodes::NodeSet;

impl NodeSet {
    /// Values `l_j(x)` of all Lagrange basis polynomials at `x` (second barycentric form).
    pub fn lagrange_basis(&self, x: f64) -> Vec<f64> {
        let nodes = self.nodes();
        let w = self.barycentric_weights();
        if let Some(hit) = nodes.iter().position(|&xj| xj == x) {
            let mut out = vec![0.0; nodes.len()];
            out[hit] = 1.0;
            return out;
        }
        let terms: Vec<f64> = nodes
            .iter()
            .zip(w)
            .map(|(xj, wj)| wj / (x - xj))
            .collect();
        let denom: f64 = terms.iter().sum();
        terms.into_iter().map(|t| t / denom).collect()
    }

    /// Matrix `I[(t, j)] = l_j(targets[t])`.
    pub fn interpolation_matrix(&self, targets: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(targets.len(), self.len());
        for (t, &x) in targets.iter().enumerate() {
            if !(-1.0..=1.0).contains(&x) {
                log::debug!("extrapolating degree {} interpolant to {x}", self.degree());
            }
            for (j, v) in self.lagrange_basis(x).into_iter().enumerate() {
                m[(t, j)] = v;
            }
        }
        m
    }

    /// Interpolation from this node set to the nodes of `other`.
    pub fn interpolation_to(&self, other: &NodeSet) -> DMatrix<f64> {
        if self == other {
            return DMatrix::identity(self.len(), self.len());
        }
        self.interpolation_matrix(other.nodes())
    }

    /// Evaluates the interpolant of `values` at each target.
    pub fn interpolate<T: Field>(&self, values: &[T], targets: &[f64]) -> Vec<T> {
        assert_eq!(values.len(), self.len(), "one value per node expected");
        targets
            .iter()
            .map(|&x| {
                if !(-1.0..=1.0).contains(&x) {
                    log::debug!("extrapolating degree {} interpolant to {x}", self.degree());
                }
                let mut acc = T::ZERO;
                for (l, v) in self.lagrange_basis(x).iter().zip(values) {
                    acc.axpy(*l, v);
                }
                acc
            })
            .collect()
    }

    /// `D[(i, j)] = l_j'(x_i)`, with the diagonal fixed by the zero row sum.
    pub fn differentiation_matrix(&self) -> DMatrix<f64> {
        let x = self.nodes();
        let w = self.barycentric_weights();
        let n = x.len();
        let mut d = DMatrix::zeros(n, n);
        for i in 0..n {
            let mut diag = 0.0;
            for j in 0..n {
                if i != j {
                    let v = (w[j] / w[i]) / (x[i] - x[j]);
                    d[(i, j)] = v;
                    diag -= v;
                }
            }
            d[(i, i)] = diag;
        }
        d
    }

    /// `b_j = l_j(side)` for `side = +1` or `-1`.
    pub fn boundary_vector(&self, side: f64) -> Vec<f64> {
        self.lagrange_basis(side)
    }

    /// The image of this node set under `x -> scale * x + offset`.
    pub fn mapped_nodes(&self, scale: f64, offset: f64) -> Vec<f64> {
        self.nodes().iter().map(|x| scale * x + offset).collect()
    }

    /// Exact mass matrix `M[(i, j)] = int l_i l_j`, integrated with a Gauss rule one degree higher.
    pub fn mass_matrix(&self) -> DMatrix<f64> {
        let g = NodeSet::gauss(self.degree() + 1).expect("gauss rule of positive degree");
        let v = self.interpolation_matrix(g.nodes());
        let w = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(g.weights()));
        v.transpose() * w * v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::NodeKind;
    use approx::assert_abs_diff_eq;

    fn samples(ns: &NodeSet, f: impl Fn(f64) -> f64) -> Vec<f64> {
        ns.nodes().iter().map(|&x| f(x)).collect()
    }

    fn apply(d: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
        (0..d.nrows())
            .map(|i| (0..d.ncols()).map(|j| d[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Direct Lagrange product formula, independent of the barycentric path.
    fn lagrange_oracle(nodes: &[f64], values: &[f64], x: f64) -> f64 {
        let mut sum = 0.0;
        for (j, xj) in nodes.iter().enumerate() {
            let mut l = 1.0;
            for (k, xk) in nodes.iter().enumerate() {
                if k != j {
                    l *= (x - xk) / (xj - xk);
                }
            }
            sum += values[j] * l;
        }
        sum
    }

    #[test]
    fn lobatto_one_derivative() {
        let d = NodeSet::lobatto(1).unwrap().differentiation_matrix();
        assert_abs_diff_eq!(d[(0, 0)], -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(0, 1)], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(1, 0)], -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d[(1, 1)], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn derivative_exactness() {
        for kind in [NodeKind::Gauss, NodeKind::Lobatto] {
            for n in 2..=12 {
                let ns = NodeSet::new(kind, n).unwrap();
                let d = ns.differentiation_matrix();
                for i in 0..=n {
                    let row: f64 = (0..=n).map(|j| d[(i, j)]).sum();
                    assert_abs_diff_eq!(row, 0.0, epsilon = 1e-13);
                }
                let got = apply(&d, &samples(&ns, |x| x * x));
                for (g, x) in got.iter().zip(ns.nodes()) {
                    assert_abs_diff_eq!(*g, 2.0 * x, epsilon = 1e-12);
                }
            }
        }
        let ns = NodeSet::gauss(3).unwrap();
        let got = apply(&ns.differentiation_matrix(), &samples(&ns, |x| x.powi(3)));
        for (g, x) in got.iter().zip(ns.nodes()) {
            assert_abs_diff_eq!(*g, 3.0 * x * x, epsilon = 1e-13);
        }
    }

    #[test]
    fn interpolation_examples() {
        let ns = NodeSet::gauss(4).unwrap();
        let c = ns.interpolate(&[2.5; 5], &[-1.0, -0.3, 0.9]);
        assert!(c.iter().all(|v| (v - 2.5).abs() < 1e-14));

        let ns = NodeSet::gauss(2).unwrap();
        let v = ns.interpolate(&samples(&ns, |x| x), &[0.5]);
        assert_abs_diff_eq!(v[0], 0.5, epsilon = 1e-15);

        let ns = NodeSet::gauss(3).unwrap();
        let vals = samples(&ns, |x| x.powi(4));
        let got = ns.interpolate(&vals, &[0.0])[0];
        let want = lagrange_oracle(ns.nodes(), &vals, 0.0);
        assert_abs_diff_eq!(got, want, epsilon = 1e-14);
        assert!(got.abs() > 1e-3);
    }

    #[test]
    fn interpolation_is_a_projection() {
        for n in 1..=8 {
            let ns = NodeSet::gauss(n).unwrap();
            let vals: Vec<f64> = (0..=n).map(|j| (j as f64 * 0.7).sin()).collect();
            assert_eq!(ns.interpolate(&vals, ns.nodes()), vals);
        }
    }

    #[test]
    fn boundary_vectors() {
        let ns = NodeSet::lobatto(4).unwrap();
        assert_eq!(ns.boundary_vector(1.0), vec![0.0, 0.0, 0.0, 0.0, 1.0]);
        let ns = NodeSet::gauss(1).unwrap();
        let b = ns.boundary_vector(1.0);
        let s3 = 3f64.sqrt();
        assert_abs_diff_eq!(b[0], (1.0 - s3) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b[1], (1.0 + s3) / 2.0, epsilon = 1e-15);
        for n in 1..=10 {
            let ns = NodeSet::gauss(n).unwrap();
            for side in [-1.0, 1.0] {
                let b = ns.boundary_vector(side);
                assert_abs_diff_eq!(b.iter().sum::<f64>(), 1.0, epsilon = 1e-13);
                let p = |x: f64| (0..=n).map(|k| x.powi(k as i32) * 0.3f64.powi(k as i32)).sum::<f64>();
                let dot: f64 = b.iter().zip(ns.nodes()).map(|(bj, x)| bj * p(*x)).sum();
                assert_abs_diff_eq!(dot, p(side), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn mass_matrix_matches_gauss_weights() {
        let ns = NodeSet::gauss(5).unwrap();
        let m = ns.mass_matrix();
        for i in 0..6 {
            for j in 0..6 {
                let want = if i == j { ns.weights()[i] } else { 0.0 };
                assert_abs_diff_eq!(m[(i, j)], want, epsilon = 1e-14);
            }
        }
    }
}
