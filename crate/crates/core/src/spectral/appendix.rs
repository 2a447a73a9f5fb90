//! Interpolating a product on a half interval versus restricting the product's interpolant.

use super::nodes::NodeSet;

const DENSE_SAMPLES: usize = 1001;

/// Largest discrepancy between the two constructions and where it occurs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductMismatch {
    pub max_mismatch: f64,
    /// Coordinate `xi` in the left child interval's reference frame.
    pub witness_point: f64,
}

/// Compares `W = I^N(UV)` restricted to the left half of `[-1, 1]` against `W_L`, the
/// interpolant of `UV` built from samples at the left-half images `(xi_j - 1) / 2`.
///
/// The two agree exactly when `deg(U) + deg(V) <= N`; otherwise the interpolation
/// operators on the two intervals see different nodes and generically disagree.
pub fn product_interpolation_mismatch(
    u_vals: &[f64],
    v_vals: &[f64],
    ns: &NodeSet,
) -> ProductMismatch {
    assert_eq!(u_vals.len(), ns.len());
    assert_eq!(v_vals.len(), ns.len());
    let w_whole: Vec<f64> = u_vals.iter().zip(v_vals).map(|(u, v)| u * v).collect();

    let left_nodes = ns.mapped_nodes(0.5, -0.5);
    let u_left = ns.interpolate(u_vals, &left_nodes);
    let v_left = ns.interpolate(v_vals, &left_nodes);
    let w_left: Vec<f64> = u_left.iter().zip(&v_left).map(|(u, v)| u * v).collect();

    let xi: Vec<f64> = (0..DENSE_SAMPLES)
        .map(|i| -1.0 + 2.0 * i as f64 / (DENSE_SAMPLES - 1) as f64)
        .collect();
    let s: Vec<f64> = xi.iter().map(|x| 0.5 * (x - 1.0)).collect();
    let restricted = ns.interpolate(&w_whole, &s);
    let local = ns.interpolate(&w_left, &xi);

    let mut best = ProductMismatch {
        max_mismatch: 0.0,
        witness_point: xi[0],
    };
    for ((x, a), b) in xi.iter().zip(&restricted).zip(&local) {
        let d = (a - b).abs();
        if d > best.max_mismatch {
            best = ProductMismatch {
                max_mismatch: d,
                witness_point: *x,
            };
        }
    }
    best
}
