//! Element volume operators.

use nalgebra::DMatrix;

use super::euler::{euler_physical_flux, normal_flux, State};
use crate::error::Result;
use crate::spectral::TensorGrid3;
use crate::vec3::{self, Vec3};

/// `F^i = sum_d Ja^i_d f_d(U)` nodewise.
pub fn contravariant_volume_flux(
    u: &TensorGrid3<State>,
    ja: &[TensorGrid3<Vec3>; 3],
) -> Result<[TensorGrid3<State>; 3]> {
    let dims = u.dims();
    let mut out = [0, 1, 2].map(|_| TensorGrid3::<State>::zeros(dims));
    for (p, s) in u.as_slice().iter().enumerate() {
        let f = euler_physical_flux(s)?;
        for i in 0..3 {
            out[i].as_mut_slice()[p] = normal_flux(&f, ja[i].as_slice()[p]);
        }
    }
    Ok(out)
}

/// `sum_i D_i F^i`.
pub fn strong_divergence(f: &[TensorGrid3<State>; 3], d: &DMatrix<f64>) -> TensorGrid3<State> {
    let mut div = f[0].apply(0, d);
    for i in 1..3 {
        let g = f[i].apply(i, d);
        for (o, v) in div.as_mut_slice().iter_mut().zip(g.iter()) {
            for c in 0..5 {
                o[c] += v[c];
            }
        }
    }
    div
}

fn strides(dims: [usize; 3]) -> [usize; 3] {
    [1, dims[0], dims[0] * dims[1]]
}

/// Split-form volume term `sum_i sum_m 2 D_am F#(U_a, U_m; {Ja^i})` with the
/// arithmetic-mean two-point flux and averaged metrics.
pub fn flux_difference_volume(
    u: &TensorGrid3<State>,
    ja: &[TensorGrid3<Vec3>; 3],
    d: &DMatrix<f64>,
) -> Result<TensorGrid3<State>> {
    let dims = u.dims();
    let st = strides(dims);
    let f: Vec<[State; 3]> = u
        .iter()
        .map(euler_physical_flux)
        .collect::<Result<_>>()?;
    let mut out = TensorGrid3::<State>::zeros(dims);
    for (idx, _) in u.indexed() {
        let a = u.index(idx[0], idx[1], idx[2]);
        let mut acc = [0.0; 5];
        for i in 0..3 {
            let base = a - idx[i] * st[i];
            let jaa = ja[i].as_slice()[a];
            for m in 0..dims[i] {
                let b = base + m * st[i];
                let dam = d[(idx[i], m)];
                if dam == 0.0 {
                    continue;
                }
                let nav = vec3::scale(vec3::add(jaa, ja[i].as_slice()[b]), 0.5);
                let fa = normal_flux(&f[a], nav);
                let fb = normal_flux(&f[b], nav);
                for c in 0..5 {
                    acc[c] += dam * (fa[c] + fb[c]);
                }
            }
        }
        out.as_mut_slice()[a] = acc;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::euler::Primitive;
    use crate::spectral::NodeSet;

    fn identity_metrics(dims: [usize; 3]) -> [TensorGrid3<Vec3>; 3] {
        [0, 1, 2].map(|i| {
            let mut e = [0.0; 3];
            e[i] = 1.0;
            TensorGrid3::filled(dims, e)
        })
    }

    #[test]
    fn identity_metrics_give_physical_fluxes() {
        let u = TensorGrid3::filled([3, 3, 3], Primitive::default().to_conserved());
        let f = contravariant_volume_flux(&u, &identity_metrics([3, 3, 3])).unwrap();
        let phys = euler_physical_flux(&u.get(0, 0, 0)).unwrap();
        for i in 0..3 {
            assert!(f[i].iter().all(|v| v == &phys[i]));
        }
    }

    #[test]
    fn affine_rest_state_flux() {
        let ja = [
            TensorGrid3::filled([2, 2, 2], [3.0, 0.0, 0.0]),
            TensorGrid3::filled([2, 2, 2], [0.0, 2.0, 0.0]),
            TensorGrid3::filled([2, 2, 2], [0.0, 0.0, 6.0]),
        ];
        let u = TensorGrid3::filled([2, 2, 2], Primitive::new(1.0, [0.0; 3], 2.0).to_conserved());
        let f = contravariant_volume_flux(&u, &ja).unwrap();
        assert!(f[0].iter().all(|v| v == &[0.0, 6.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn strong_divergence_of_linear_flux() {
        let ns = NodeSet::gauss(4).unwrap();
        let d = ns.differentiation_matrix();
        let f1 = TensorGrid3::sample([&ns, &ns, &ns], |x| [x[0]; 5]);
        let zero = TensorGrid3::<State>::zeros([5, 5, 5]);
        let div = strong_divergence(&[f1, zero.clone(), zero.clone()], &d);
        assert!(div.iter().all(|v| v.iter().all(|c| (c - 1.0).abs() < 1e-13)));
        let c = TensorGrid3::filled([5, 5, 5], [0.3; 5]);
        let div = strong_divergence(&[c.clone(), c.clone(), c], &d);
        assert!(div.max_abs() < 1e-13);
    }

    #[test]
    fn flux_differencing_matches_strong_form_for_affine_metrics() {
        let ns = NodeSet::gauss(3).unwrap();
        let d = ns.differentiation_matrix();
        let ja = [
            TensorGrid3::filled([4; 3], [0.5, 0.1, 0.0]),
            TensorGrid3::filled([4; 3], [0.0, 0.7, -0.2]),
            TensorGrid3::filled([4; 3], [0.1, 0.0, 0.4]),
        ];
        let u = TensorGrid3::sample([&ns, &ns, &ns], |x| {
            Primitive::new(1.0 + 0.1 * x[0] - 0.05 * x[2], [0.2, 0.1 * x[1], 0.3], 1.0 + 0.1 * x[1])
                .to_conserved()
        });
        let split = flux_difference_volume(&u, &ja, &d).unwrap();
        let strong = strong_divergence(&contravariant_volume_flux(&u, &ja).unwrap(), &d);
        for (a, b) in split.iter().zip(strong.iter()) {
            for c in 0..5 {
                assert!((a[c] - b[c]).abs() < 1e-10);
            }
        }
    }
}
