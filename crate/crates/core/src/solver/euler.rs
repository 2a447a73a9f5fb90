//! Compressible Euler fluxes for an ideal gas.

use crate::error::{Error, Result};
use crate::vec3::{self, Vec3};

pub const GAMMA: f64 = 1.4;

/// Conserved variables `(rho, rho v1, rho v2, rho v3, E)`.
pub type State = [f64; 5];

/// Primitive variables `(rho, v1, v2, v3, p)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub velocity: Vec3,
    pub pressure: f64,
}

impl Primitive {
    pub fn new(rho: f64, velocity: Vec3, pressure: f64) -> Self {
        Primitive {
            rho,
            velocity,
            pressure,
        }
    }

    pub fn to_conserved(self) -> State {
        let Primitive {
            rho,
            velocity: v,
            pressure: p,
        } = self;
        [
            rho,
            rho * v[0],
            rho * v[1],
            rho * v[2],
            p / (GAMMA - 1.0) + 0.5 * rho * vec3::dot(v, v),
        ]
    }

    pub fn from_conserved(u: &State) -> Result<Self> {
        let rho = u[0];
        let velocity = [u[1] / rho, u[2] / rho, u[3] / rho];
        let pressure = (GAMMA - 1.0) * (u[4] - 0.5 * rho * vec3::dot(velocity, velocity));
        if !(rho > 0.0 && pressure > 0.0) {
            return Err(Error::NonphysicalState { rho, pressure });
        }
        Ok(Primitive {
            rho,
            velocity,
            pressure,
        })
    }

    pub fn sound_speed(&self) -> f64 {
        (GAMMA * self.pressure / self.rho).sqrt()
    }
}

impl Default for Primitive {
    /// The reference free stream `(0.7, 0.2, 0.3, -0.4, 1.0)`.
    fn default() -> Self {
        Primitive::new(0.7, [0.2, 0.3, -0.4], 1.0)
    }
}

fn flux_from(u: &State, w: &Primitive) -> [State; 3] {
    let p = w.pressure;
    [0, 1, 2].map(|d| {
        let vd = w.velocity[d];
        let mut f = [u[0] * vd, u[1] * vd, u[2] * vd, u[3] * vd, (u[4] + p) * vd];
        f[1 + d] += p;
        f
    })
}

/// Physical fluxes `f_1, f_2, f_3`.
pub fn euler_physical_flux(u: &State) -> Result<[State; 3]> {
    let w = Primitive::from_conserved(u)?;
    Ok(flux_from(u, &w))
}

/// `sum_d f_d n_d`.
pub fn normal_flux(f: &[State; 3], n: Vec3) -> State {
    std::array::from_fn(|c| f[0][c] * n[0] + f[1][c] * n[1] + f[2][c] * n[2])
}

/// `|v . n| + c |n|`.
pub fn wave_speed(w: &Primitive, n: Vec3) -> f64 {
    vec3::dot(w.velocity, n).abs() + w.sound_speed() * vec3::norm(n)
}

/// Local Lax-Friedrichs flux through the scaled normal `n`.
pub fn lax_friedrichs_numerical_flux(ul: &State, ur: &State, n: Vec3) -> Result<State> {
    let wl = Primitive::from_conserved(ul)?;
    let wr = Primitive::from_conserved(ur)?;
    let fl = normal_flux(&flux_from(ul, &wl), n);
    let fr = normal_flux(&flux_from(ur, &wr), n);
    let len = vec3::norm(n);
    let unit = vec3::scale(n, 1.0 / len);
    let lambda = wave_speed(&wl, unit).max(wave_speed(&wr, unit));
    Ok(std::array::from_fn(|c| {
        0.5 * (fl[c] + fr[c]) - 0.5 * lambda * len * (ur[c] - ul[c])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn close(a: &State, b: &State, tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn rest_state_flux_is_pressure() {
        let u = Primitive::new(1.0, [0.0; 3], 1.0).to_conserved();
        let f = euler_physical_flux(&u).unwrap();
        assert_eq!(f[0], [0.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(f[2], [0.0, 0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn primitive_round_trip() {
        let w = Primitive::default();
        let back = Primitive::from_conserved(&w.to_conserved()).unwrap();
        assert_abs_diff_eq!(back.rho, 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(back.pressure, 1.0, epsilon = 1e-14);
        assert!(vec3::max_diff(back.velocity, w.velocity) < 1e-15);
    }

    #[test]
    fn flux_is_homogeneous_of_degree_one() {
        let u = Primitive::default().to_conserved();
        let u2 = u.map(|c| 2.0 * c);
        let f = euler_physical_flux(&u).unwrap();
        let f2 = euler_physical_flux(&u2).unwrap();
        for d in 0..3 {
            assert!(close(&f2[d], &f[d].map(|c| 2.0 * c), 1e-14));
        }
    }

    #[test]
    fn nonphysical_states_rejected() {
        assert!(matches!(
            euler_physical_flux(&[-1.0, 0.0, 0.0, 0.0, 1.0]),
            Err(Error::NonphysicalState { .. })
        ));
        assert!(euler_physical_flux(&[1.0, 0.0, 0.0, 0.0, -1.0]).is_err());
    }

    #[test]
    fn lax_friedrichs_properties() {
        let n = [0.3, -0.2, 0.9];
        let c = Primitive::default().to_conserved();
        let f = lax_friedrichs_numerical_flux(&c, &c, n).unwrap();
        assert!(close(&f, &normal_flux(&euler_physical_flux(&c).unwrap(), n), 1e-15));

        let ul = Primitive::new(1.0, [0.1, 0.0, 0.2], 1.0).to_conserved();
        let ur = Primitive::new(0.8, [0.0, 0.3, -0.1], 0.9).to_conserved();
        let a = lax_friedrichs_numerical_flux(&ul, &ur, n).unwrap();
        let b = lax_friedrichs_numerical_flux(&ur, &ul, vec3::scale(n, -1.0)).unwrap();
        assert!(close(&a, &b.map(|v| -v), 1e-15));

        // equal pressure at rest: only the dissipation term survives
        let n = [2.0, 0.0, 0.0];
        let ul = Primitive::new(1.0, [0.0; 3], 1.0).to_conserved();
        let ur = Primitive::new(0.5, [0.0; 3], 1.0).to_conserved();
        let f = lax_friedrichs_numerical_flux(&ul, &ur, n).unwrap();
        let lambda = (GAMMA / 0.5f64).sqrt();
        assert_abs_diff_eq!(f[0], -0.5 * lambda * 2.0 * (0.5 - 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(f[1], 2.0, epsilon = 1e-15);
    }
}
