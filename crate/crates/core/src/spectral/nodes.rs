//! Legendre-Gauss and Legendre-Gauss-Lobatto node sets.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Which family of quadrature points a [`NodeSet`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Gauss,
    Lobatto,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::Gauss => "gauss",
            NodeKind::Lobatto => "lobatto",
        }
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for NodeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gauss" | "g" => Ok(NodeKind::Gauss),
            "lobatto" | "gl" | "gauss-lobatto" | "gauss_lobatto" => Ok(NodeKind::Lobatto),
            other => Err(Error::Parse(format!("unknown node kind `{other}`"))),
        }
    }
}

/// Nodes, quadrature weights and barycentric weights of one degree-`N` rule on `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeSet {
    kind: NodeKind,
    degree: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    bary: Vec<f64>,
}

impl NodeSet {
    /// Builds the `N + 1` point rule of the requested kind.
    ///
    /// Gauss rules accept any `N >= 0`; Lobatto rules need `N >= 1` since
    /// they always contain both endpoints.
    pub fn new(kind: NodeKind, degree: usize) -> Result<Self> {
        let (nodes, weights) = match kind {
            NodeKind::Gauss => gauss_rule(degree),
            NodeKind::Lobatto => {
                if degree == 0 {
                    return Err(Error::InvalidDegree {
                        what: "lobatto node set",
                        degree,
                        min: 1,
                    });
                }
                lobatto_rule(degree)
            }
        };
        let bary = barycentric_weights(&nodes);
        Ok(NodeSet {
            kind,
            degree,
            nodes,
            weights,
            bary,
        })
    }

    pub fn gauss(degree: usize) -> Result<Self> {
        Self::new(NodeKind::Gauss, degree)
    }

    pub fn lobatto(degree: usize) -> Result<Self> {
        Self::new(NodeKind::Lobatto, degree)
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of points, `N + 1`.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn barycentric_weights(&self) -> &[f64] {
        &self.bary
    }

    /// Smallest gap between neighbouring nodes.
    pub fn min_spacing(&self) -> f64 {
        if self.nodes.len() < 2 {
            return 2.0;
        }
        self.nodes
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Legendre polynomial `P_n(x)` and its derivative by the three-term recurrence.
pub fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    if n == 1 {
        return (x, 1.0);
    }
    let (mut p2, mut p1) = (1.0, x);
    let (mut d2, mut d1) = (0.0, 1.0);
    for k in 2..=n {
        let kf = k as f64;
        let p = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p2) / kf;
        let d = d2 + (2.0 * kf - 1.0) * p1;
        p2 = p1;
        p1 = p;
        d2 = d1;
        d1 = d;
    }
    (p1, d1)
}

/// Newton iteration with step halving whenever the residual grows.
fn damped_newton(mut x: f64, f: impl Fn(f64) -> (f64, f64)) -> f64 {
    for _ in 0..NEWTON_MAX_ITER {
        let (val, der) = f(x);
        if der == 0.0 {
            break;
        }
        let mut step = val / der;
        let mut trial = x - step;
        let mut halvings = 0;
        while f(trial).0.abs() > val.abs() && halvings < 8 && val.abs() > f64::EPSILON {
            step *= 0.5;
            trial = x - step;
            halvings += 1;
        }
        x = trial;
        if step.abs() <= NEWTON_TOL * x.abs().max(1.0) {
            break;
        }
    }
    x
}

fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let n = nodes.len();
    for j in 0..n / 2 {
        let x = 0.5 * (nodes[n - 1 - j] - nodes[j]);
        let w = 0.5 * (weights[j] + weights[n - 1 - j]);
        nodes[j] = -x;
        nodes[n - 1 - j] = x;
        weights[j] = w;
        weights[n - 1 - j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

fn gauss_rule(degree: usize) -> (Vec<f64>, Vec<f64>) {
    let m = degree + 1;
    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for j in 0..m {
        let guess = -((2 * j + 1) as f64 * PI / (2 * m) as f64).cos();
        let x = damped_newton(guess, |x| legendre(m, x));
        let (_, d) = legendre(m, x);
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * d * d));
    }
    symmetrize(&mut nodes, &mut weights);
    (nodes, weights)
}

fn lobatto_rule(degree: usize) -> (Vec<f64>, Vec<f64>) {
    let n = degree;
    let nf = n as f64;
    let mut nodes = vec![0.0; n + 1];
    let mut weights = vec![0.0; n + 1];
    nodes[0] = -1.0;
    nodes[n] = 1.0;
    // interior nodes are the roots of P_{N+1} - P_{N-1}, whose derivative is (2N+1) P_N
    let q = |x: f64| {
        let (pn1, _) = legendre(n + 1, x);
        let (pm1, _) = legendre(n - 1, x);
        let (pn, _) = legendre(n, x);
        (pn1 - pm1, (2.0 * nf + 1.0) * pn)
    };
    for (j, node) in nodes.iter_mut().enumerate().take(n).skip(1) {
        let guess = -(j as f64 * PI / nf).cos();
        *node = damped_newton(guess, q);
    }
    for (x, w) in nodes.iter().zip(weights.iter_mut()) {
        let (pn, _) = legendre(n, *x);
        *w = 2.0 / (nf * (nf + 1.0) * pn * pn);
    }
    symmetrize(&mut nodes, &mut weights);
    nodes[0] = -1.0;
    nodes[n] = 1.0;
    (nodes, weights)
}

fn barycentric_weights(nodes: &[f64]) -> Vec<f64> {
    let mut w: Vec<f64> = nodes
        .iter()
        .enumerate()
        .map(|(j, xj)| {
            let prod: f64 = nodes
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != j)
                .map(|(_, xk)| xj - xk)
                .product();
            1.0 / prod
        })
        .collect();
    let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for v in &mut w {
        *v /= scale;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn monomial_integral(k: u32) -> f64 {
        if k % 2 == 1 {
            0.0
        } else {
            2.0 / (k as f64 + 1.0)
        }
    }

    fn quad(ns: &NodeSet, k: u32) -> f64 {
        ns.nodes()
            .iter()
            .zip(ns.weights())
            .map(|(x, w)| w * x.powi(k as i32))
            .sum()
    }

    #[test]
    fn gauss_one() {
        let ns = NodeSet::gauss(1).unwrap();
        let r = 1.0 / 3f64.sqrt();
        assert_abs_diff_eq!(ns.nodes()[0], -r, epsilon = 1e-15);
        assert_abs_diff_eq!(ns.nodes()[1], r, epsilon = 1e-15);
        assert_abs_diff_eq!(ns.weights()[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ns.weights()[1], 1.0, epsilon = 1e-15);
        for k in 0..=3 {
            assert_abs_diff_eq!(quad(&ns, k), monomial_integral(k), epsilon = 1e-15);
        }
    }

    #[test]
    fn lobatto_two_and_one() {
        let ns = NodeSet::lobatto(2).unwrap();
        assert_eq!(ns.nodes(), &[-1.0, 0.0, 1.0]);
        assert_abs_diff_eq!(ns.weights()[0], 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ns.weights()[1], 4.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ns.weights()[2], 1.0 / 3.0, epsilon = 1e-15);
        for k in 0..=3 {
            assert_abs_diff_eq!(quad(&ns, k), monomial_integral(k), epsilon = 1e-15);
        }
        let ns = NodeSet::lobatto(1).unwrap();
        assert_eq!(ns.nodes(), &[-1.0, 1.0]);
        assert_eq!(ns.weights(), &[1.0, 1.0]);
    }

    #[test]
    fn gauss_zero_is_midpoint() {
        let ns = NodeSet::gauss(0).unwrap();
        assert_eq!(ns.nodes(), &[0.0]);
        assert_abs_diff_eq!(ns.weights()[0], 2.0, epsilon = 1e-15);
    }

    #[test]
    fn lobatto_zero_rejected() {
        assert!(matches!(
            NodeSet::lobatto(0),
            Err(Error::InvalidDegree { .. })
        ));
    }

    #[test]
    fn invariants_over_degrees() {
        for kind in [NodeKind::Gauss, NodeKind::Lobatto] {
            for n in 1..=16 {
                let ns = NodeSet::new(kind, n).unwrap();
                let total: f64 = ns.weights().iter().sum();
                assert_abs_diff_eq!(total, 2.0, epsilon = 1e-14);
                for j in 0..=n {
                    assert_abs_diff_eq!(ns.nodes()[j], -ns.nodes()[n - j], epsilon = 1e-14);
                    assert!(ns.weights()[j] > 0.0);
                }
                assert!(ns.nodes().windows(2).all(|w| w[0] < w[1]));
                let exact = match kind {
                    NodeKind::Gauss => 2 * n + 1,
                    NodeKind::Lobatto => 2 * n - 1,
                };
                for k in 0..=exact as u32 {
                    assert_abs_diff_eq!(quad(&ns, k), monomial_integral(k), epsilon = 1e-13);
                }
                // one degree beyond exactness must fail
                let k = exact as u32 + 1;
                assert!((quad(&ns, k) - monomial_integral(k)).abs() > 1e-10);
            }
        }
    }

    #[test]
    fn kind_parses() {
        assert_eq!("Gauss".parse::<NodeKind>().unwrap(), NodeKind::Gauss);
        assert_eq!("lobatto".parse::<NodeKind>().unwrap(), NodeKind::Lobatto);
        assert!("chebyshev".parse::<NodeKind>().is_err());
    }
}
