//! Nodal discontinuous Galerkin discretisation of the compressible Euler
//! equations in strong form, with Lax-Friedrichs coupling across conforming
//! and mortar faces.
//!
//! Volume and face integrals are evaluated at the quadrature degree `Q` of
//! the metrics. With `Q = N` this is the usual collocated scheme; with
//! `Q > N` the solution is interpolated up, fluxes are formed at degree `Q`,
//! and the result is tested against the degree-`N` basis. The mass matrix is
//! always the lumped one at the solution nodes.

mod euler;
mod mortar;
mod rhs;
mod time;
mod volume;

pub use euler::{
    euler_physical_flux, lax_friedrichs_numerical_flux, normal_flux, wave_speed, Primitive, State,
    GAMMA,
};
pub use mortar::{mortar_surface_exchange, MortarFluxes, MortarOperators};
pub use rhs::{max_norm, semidiscrete_rhs, Discretization, Operators};
pub use time::{rk_advance, SolverConfig, RK_A, RK_B, RK_C};
pub use volume::{contravariant_volume_flux, flux_difference_volume, strong_divergence};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::DeformSpec;
    use crate::mesh::{build_mesh, MeshSpec};
    use crate::metrics::Strategy;
    use crate::spectral::NodeKind;

    fn disc(ng: usize, refine: Vec<usize>, strategy: Strategy, n: usize, kind: NodeKind) -> Discretization {
        let mesh = build_mesh(&MeshSpec {
            k: 2,
            refine,
            deform: DeformSpec::general(0.05),
            ng,
            ..MeshSpec::default()
        })
        .unwrap();
        Discretization::new(mesh, strategy, n, kind).unwrap()
    }

    fn freestream_rhs(d: &Discretization) -> f64 {
        max_norm(&d.rhs(&d.constant_state(Primitive::default())).unwrap())
    }

    #[test]
    fn freestream_rhs_dichotomy() {
        for kind in [NodeKind::Gauss, NodeKind::Lobatto] {
            let conforming = freestream_rhs(&disc(4, vec![], Strategy::CurlForm, 4, kind));
            assert!(conforming <= 1e-11, "{kind} conforming {conforming:e}");
            let half = freestream_rhs(&disc(2, vec![0], Strategy::CurlForm, 4, kind));
            assert!(half <= 1e-11, "{kind} half order {half:e}");
            let local = freestream_rhs(&disc(4, vec![0], Strategy::CurlForm, 4, kind));
            assert!(local > 1e-9, "{kind} child-local {local:e}");
            let inherited = freestream_rhs(&disc(4, vec![0], Strategy::ParentInherited, 4, kind));
            assert!(inherited <= 1e-11, "{kind} inherited {inherited:e}");
            let over = freestream_rhs(&disc(4, vec![0], Strategy::Overintegrated(8), 4, kind));
            assert!(over <= 1e-11, "{kind} overintegrated {over:e}");
        }
    }

    #[test]
    fn zero_time_leaves_states_unchanged() {
        let d = disc(2, vec![0], Strategy::CurlForm, 3, NodeKind::Gauss);
        let mut u = d.constant_state(Primitive::default());
        let before = u.clone();
        let steps = rk_advance(&d, &mut u, 0.1, 0.0, |_, _, _| {}).unwrap();
        assert_eq!(steps, 0);
        assert_eq!(u, before);
    }

    #[test]
    fn density_wave_converges_spectrally() {
        // undeformed conforming periodic box, rho advected with the uniform velocity
        let mut errs = Vec::new();
        for n in 2..=6 {
            let mesh = build_mesh(&MeshSpec {
                k: 4,
                refine: vec![],
                deform: DeformSpec::identity(),
                ng: 1,
                ..MeshSpec::default()
            })
            .unwrap();
            let d = Discretization::new(mesh, Strategy::CurlForm, n, NodeKind::Gauss).unwrap();
            let v = [1.0, 0.5, 0.25];
            let exact = |x: [f64; 3], t: f64| {
                let phase = 2.0 * std::f64::consts::PI * (x[0] - v[0] * t);
                Primitive::new(1.0 + 0.2 * phase.sin(), v, 1.0).to_conserved()
            };
            let mut u = d.sample_state(|x| exact(x, 0.0));
            let t_final = 0.1;
            let dt = d.stable_dt(&u, 0.3).unwrap();
            rk_advance(&d, &mut u, dt, t_final, |_, _, _| {}).unwrap();
            let mut err = 0.0f64;
            for (e, g) in u.iter().enumerate() {
                let xs = d.node_coordinates(e);
                for (s, x) in g.iter().zip(xs.iter()) {
                    err = err.max((s[0] - exact(*x, t_final)[0]).abs());
                }
            }
            errs.push(err);
        }
        for w in errs.windows(2) {
            assert!(w[1] < w[0], "{errs:?}");
        }
        assert!(errs[4] < 1e-2 * errs[0], "{errs:?}");
    }
}
