//! Property tests for invariants that must hold for every input in a family,
//! not just for the fixed acceptance configurations.

use freestream::geometry::{
    sample_analytic_mapping, subdivide_element, AffineSubmap, Box3, DeformSpec, ElementMapping,
    Side,
};
use freestream::mesh::{build_mesh, validate_topology, MeshSpec};
use freestream::metrics::{
    condition_v_residual, face_metrics_parent, metrics_cross_product, metrics_curl_form,
    inherit_parent_metrics,
};
use freestream::geometry::FaceSubmap;
use freestream::solver::{
    euler_physical_flux, lax_friedrichs_numerical_flux, normal_flux, MortarOperators, Primitive, State,
};
use freestream::spectral::FaceGrid;
use freestream::spectral::{product_interpolation_mismatch, NodeKind, NodeSet};
use freestream::vec3;
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = NodeKind> {
    prop_oneof![Just(NodeKind::Gauss), Just(NodeKind::Lobatto)]
}

fn coefficients(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..=max_len)
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, ck| acc * x + ck)
}

/// Exact integral over [-1, 1] of `sum c_k x^k`.
fn monomial_integral(c: &[f64]) -> f64 {
    c.iter()
        .enumerate()
        .filter(|(k, _)| k % 2 == 0)
        .map(|(k, ck)| 2.0 * ck / (k as f64 + 1.0))
        .sum()
}

/// `I - 1` and `N` in the range `1..=6`, with the exactness degree of the rule.
fn exactness(kind: NodeKind, n: usize) -> usize {
    match kind {
        NodeKind::Gauss => 2 * n + 1,
        NodeKind::Lobatto => 2 * n - 1,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quadrature_integrates_up_to_its_exactness_degree(
        kind in kind(),
        n in 1usize..=8,
        c in coefficients(18),
    ) {
        let ns = NodeSet::new(kind, n).unwrap();
        let c = &c[..c.len().min(exactness(kind, n) + 1)];
        let q: f64 = ns.nodes().iter().zip(ns.weights()).map(|(x, w)| w * horner(c, *x)).sum();
        prop_assert!((q - monomial_integral(c)).abs() <= 1e-13, "{} vs {}", q, monomial_integral(c));
    }

    #[test]
    fn interpolating_at_own_nodes_is_the_identity(
        kind in kind(),
        n in 1usize..=10,
        seed in prop::collection::vec(-10.0f64..10.0, 11),
    ) {
        let ns = NodeSet::new(kind, n).unwrap();
        let vals = &seed[..ns.len()];
        let back = ns.interpolate(vals, ns.nodes());
        for (a, b) in vals.iter().zip(&back) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn derivative_rows_sum_to_zero_and_differentiate_polynomials(
        kind in kind(),
        n in 1usize..=10,
        c in coefficients(11),
    ) {
        let ns = NodeSet::new(kind, n).unwrap();
        let c = &c[..c.len().min(n + 1)];
        let d = ns.differentiation_matrix();
        for i in 0..ns.len() {
            let s: f64 = d.row(i).iter().sum();
            prop_assert!(s.abs() <= 1e-13 * (n * n) as f64);
        }
        let dc: Vec<f64> = c.iter().enumerate().skip(1).map(|(k, ck)| k as f64 * ck).collect();
        let vals: Vec<f64> = ns.nodes().iter().map(|x| horner(c, *x)).collect();
        for (i, x) in ns.nodes().iter().enumerate() {
            let got: f64 = (0..ns.len()).map(|j| d[(i, j)] * vals[j]).sum();
            prop_assert!((got - horner(&dc, *x)).abs() <= 1e-12 * (n * n) as f64);
        }
    }

    #[test]
    fn affine_restriction_reproduces_the_polynomial(
        kind in kind(),
        n in 1usize..=8,
        c in coefficients(9),
        s in -1.0f64..1.0,
    ) {
        let ns = NodeSet::new(kind, n).unwrap();
        let c = &c[..c.len().min(n + 1)];
        let left = ns.mapped_nodes(0.5, -0.5);
        let samples: Vec<f64> = left.iter().map(|x| horner(c, *x)).collect();
        let got = ns.interpolate(&samples, &[s])[0];
        prop_assert!((got - horner(c, 0.5 * s - 0.5)).abs() <= 1e-13);
    }

    #[test]
    fn product_mismatch_vanishes_exactly_when_the_degree_fits(
        kind in kind(),
        n in 1usize..=6,
        a in 0usize..=6,
        cu in coefficients(7),
        cv in coefficients(7),
    ) {
        let ns = NodeSet::new(kind, n).unwrap();
        let a = a.min(n);
        let mut cu = cu[..cu.len().min(a + 1)].to_vec();
        let mut cv = cv[..cv.len().min(n - a + 1)].to_vec();
        cu.resize(a + 1, 0.0);
        cv.resize(n - a + 1, 0.0);
        let u: Vec<f64> = ns.nodes().iter().map(|x| horner(&cu, *x)).collect();
        let v: Vec<f64> = ns.nodes().iter().map(|x| horner(&cv, *x)).collect();
        let m = product_interpolation_mismatch(&u, &v, &ns);
        prop_assert!(m.max_mismatch <= 1e-13, "{:?}", m);
    }
}

fn deform() -> impl Strategy<Value = DeformSpec> {
    (0.0f64..0.06, 0.0f64..1.0, prop::bool::ANY).prop_map(|(a, phase, extruded)| {
        let mut d = if extruded { DeformSpec::extruded(a) } else { DeformSpec::general(a) };
        d.phase = phase;
        d
    })
}

fn element(ng: usize) -> impl Strategy<Value = ElementMapping> {
    (deform(), 0usize..8).prop_map(move |(d, id)| {
        let bx = Box3::lattice(2, [id % 2, (id / 2) % 2, id / 4]);
        sample_analytic_mapping(&d, &bx, ng, NodeKind::Lobatto).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subdivision_reproduces_the_parent(
        m in (1usize..=4).prop_flat_map(element),
        pts in prop::collection::vec(prop::array::uniform3(-1.0f64..1.0), 10),
    ) {
        for (child, sub) in subdivide_element(&m) {
            prop_assert_eq!(child.degree(), m.degree());
            for xi in &pts {
                let d = vec3::max_diff(child.evaluate(*xi), m.evaluate(sub.apply(*xi)));
                prop_assert!(d <= 1e-13, "{}", d);
            }
        }
    }

    #[test]
    fn faces_agree_with_the_volume_mapping(
        m in (1usize..=4).prop_flat_map(element),
        rs in prop::array::uniform2(-1.0f64..1.0),
    ) {
        for side in Side::ALL {
            let d = vec3::max_diff(m.face(side).evaluate(rs), m.evaluate(side.embed(rs)));
            prop_assert!(d <= 1e-13, "{:?}: {}", side, d);
        }
    }

    #[test]
    fn child_normals_are_beta_times_the_parent(
        m in (1usize..=3).prop_flat_map(element),
        octant in 0usize..8,
        rs in prop::array::uniform2(-1.0f64..1.0),
    ) {
        let sub = AffineSubmap::octant(octant);
        let child = m.restrict(&sub);
        // only the sides the child shares with its parent
        for side in Side::ALL.into_iter().filter(|s| (octant >> s.axis & 1 == 1) == s.positive) {
            let axis = side.axis;
            let fs = sub.face_submap(side);
            let pf = face_metrics_parent(&m.face(side), axis, 6, NodeKind::Lobatto).unwrap();
            let cf = face_metrics_parent(&child.face(side), axis, 6, NodeKind::Lobatto).unwrap();
            let want = vec3::scale(pf.evaluate(fs.apply(rs)), fs.beta());
            let got = cf.evaluate(rs);
            prop_assert!(vec3::max_diff(got, want) <= 1e-12 * vec3::norm(want).max(1e-3));
        }
    }

    #[test]
    fn strategies_agree_on_affine_elements(
        a in prop::array::uniform3(prop::array::uniform3(-0.3f64..0.3)),
        kind in kind(),
        n in 1usize..=5,
    ) {
        let m = ElementMapping::from_fn(1, NodeKind::Lobatto, |x| {
            [0, 1, 2].map(|i| x[i] + (0..3).map(|j| a[i][j] * x[j]).sum::<f64>())
        }).unwrap();
        let cross = metrics_cross_product(&m, n, n, kind).unwrap();
        let curl = metrics_curl_form(&m, n, n, kind).unwrap();
        let over = metrics_curl_form(&m, n, 2 * n, kind).unwrap();
        let inherited = inherit_parent_metrics(&curl, &AffineSubmap::identity());
        prop_assert!(cross.max_difference(&curl) <= 1e-13);
        prop_assert!(inherited.max_difference(&curl) <= 1e-13);
        let first = over.ja[0].as_slice()[0];
        prop_assert!(vec3::max_diff(first, curl.ja[0].as_slice()[0]) <= 1e-13);
    }

    #[test]
    fn curl_form_satisfies_the_volume_condition(
        m in (1usize..=4).prop_flat_map(element),
        kind in kind(),
        n in 1usize..=6,
    ) {
        let ms = metrics_curl_form(&m, n, n, kind).unwrap();
        prop_assert!(ms.min_jacobian() > 0.0);
        let r = condition_v_residual(&ms);
        prop_assert!(r <= 1e-12 * ms.scale(), "{} vs scale {}", r, ms.scale());
    }

    #[test]
    fn extruded_cross_and_curl_forms_agree(
        a in 0.0f64..0.06,
        id in 0usize..8,
        ng in 1usize..=4,
        extra in 0usize..=2,
    ) {
        let n = ng + extra;
        let bx = Box3::lattice(2, [id % 2, (id / 2) % 2, id / 4]);
        let m = sample_analytic_mapping(&DeformSpec::extruded(a), &bx, ng, NodeKind::Lobatto).unwrap();
        let cross = metrics_cross_product(&m, n, n, NodeKind::Gauss).unwrap();
        let curl = metrics_curl_form(&m, n, n, NodeKind::Gauss).unwrap();
        prop_assert!(condition_v_residual(&cross) <= 1e-12 * cross.scale());
        prop_assert!(condition_v_residual(&curl) <= 1e-12 * curl.scale());
        // Ja^3 is a_1 x a_2, whose z-component aliases in the cross-product form
        for i in 0..3 {
            for (x, y) in cross.ja[i].iter().zip(curl.ja[i].iter()) {
                let comps = if i == 2 { 0..2 } else { 0..3 };
                for c in comps {
                    prop_assert!((x[c] - y[c]).abs() <= 1e-12);
                }
            }
        }
    }
}

fn refine_set() -> impl Strategy<Value = (usize, Vec<usize>)> {
    prop_oneof![
        Just((2, vec![])),
        Just((2, vec![0])),
        Just((2, vec![5])),
        Just((3, vec![0, 13])),
        Just((3, vec![4])),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn faces_partition_the_element_sides(
        (k, refine) in refine_set(),
        d in deform(),
        ng in 1usize..=3,
    ) {
        let mesh = build_mesh(&MeshSpec { k, refine, deform: d, ng, ..MeshSpec::default() }).unwrap();
        let t = validate_topology(&mesh);
        prop_assert!(t.partition_holds(), "{:?}", t);
        prop_assert!(t.watertight_gap <= 1e-12, "{}", t.watertight_gap);
        prop_assert!(t.min_jacobian > 0.0);
    }

    #[test]
    fn lax_friedrichs_is_consistent_and_antisymmetric(
        rho in (0.2f64..2.0, 0.2f64..2.0),
        v in (prop::array::uniform3(-1.0f64..1.0), prop::array::uniform3(-1.0f64..1.0)),
        p in (0.2f64..2.0, 0.2f64..2.0),
        n in prop::array::uniform3(-1.0f64..1.0),
    ) {
        prop_assume!(vec3::norm(n) > 1e-3);
        let ul = Primitive::new(rho.0, v.0, p.0).to_conserved();
        let ur = Primitive::new(rho.1, v.1, p.1).to_conserved();
        let same = lax_friedrichs_numerical_flux(&ul, &ul, n).unwrap();
        let exact = normal_flux(&euler_physical_flux(&ul).unwrap(), n);
        for c in 0..5 {
            prop_assert!((same[c] - exact[c]).abs() <= 1e-14 * (1.0 + exact[c].abs()));
        }
        let fwd = lax_friedrichs_numerical_flux(&ul, &ur, n).unwrap();
        let back = lax_friedrichs_numerical_flux(&ur, &ul, vec3::scale(n, -1.0)).unwrap();
        for c in 0..5 {
            prop_assert!((fwd[c] + back[c]).abs() <= 1e-13 * (1.0 + fwd[c].abs()));
        }
    }
}

fn face_integral(g: &FaceGrid<State>, ns: &NodeSet) -> State {
    let w = ns.weights();
    let [n0, n1] = g.dims();
    let mut s = [0.0; 5];
    for b in 0..n1 {
        for a in 0..n0 {
            let v = g.as_slice()[a + n0 * b];
            for c in 0..5 {
                s[c] += w[a] * w[b] * v[c];
            }
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn mortar_projection_conserves_the_face_integral(
        kind in kind(),
        n in 1usize..=6,
        vals in prop::collection::vec(-1.0f64..1.0, 4 * 5 * 49),
    ) {
        let ns = NodeSet::new(kind, n).unwrap();
        let ops = MortarOperators::new(&ns).unwrap();
        let m = ns.len();
        let mut parent = [0.0; 5];
        let mut children = [0.0; 5];
        for q in 0..4 {
            let data: Vec<State> = (0..m * m)
                .map(|p| std::array::from_fn(|c| vals[(q * 49 + p) * 5 + c]))
                .collect();
            let child = FaceGrid::from_vec([m, m], data).unwrap();
            let proj = ops.project_to_parent(&child, &FaceSubmap::quadrant(q + 1));
            let (pi, ci) = (face_integral(&proj, &ns), face_integral(&child, &ns));
            for c in 0..5 {
                parent[c] += pi[c];
                // a quadrant covers a quarter of the parent reference face
                children[c] += 0.25 * ci[c];
            }
        }
        for c in 0..5 {
            prop_assert!((parent[c] - children[c]).abs() <= 1e-13, "{:?} vs {:?}", parent, children);
        }
    }
}
