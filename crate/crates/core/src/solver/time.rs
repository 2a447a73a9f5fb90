//! Explicit time integration.

use rayon::prelude::*;

use super::euler::State;
use super::rhs::Discretization;
use crate::error::{Error, Result};
use crate::metrics::Strategy;
use crate::spectral::{NodeKind, TensorGrid3};

/// Five-stage fourth-order low-storage Runge-Kutta coefficients of Carpenter and Kennedy.
pub const RK_A: [f64; 5] = [
    0.0,
    -567301805773.0 / 1357537059087.0,
    -2404267990393.0 / 2016746695238.0,
    -3550918686646.0 / 2091501179385.0,
    -1275806237668.0 / 842570457699.0,
];
pub const RK_B: [f64; 5] = [
    1432997174477.0 / 9575080441755.0,
    5161836677717.0 / 13612068292357.0,
    1720146321549.0 / 2090206949498.0,
    3134564353537.0 / 4481467310338.0,
    2277821191437.0 / 14882151754819.0,
];
pub const RK_C: [f64; 5] = [
    0.0,
    1432997174477.0 / 9575080441755.0,
    2526269341429.0 / 6820363962896.0,
    2006345519317.0 / 3224310063776.0,
    2802321613138.0 / 2924317926251.0,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub n: usize,
    pub kind: NodeKind,
    pub cfl: f64,
    pub t_final: f64,
    pub strategy: Strategy,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n: 4,
            kind: NodeKind::Gauss,
            cfl: 0.5,
            t_final: 0.5,
            strategy: Strategy::CurlForm,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Config(format!("N = {} must be at least 1", self.n)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config(format!("CFL = {} outside (0, 1]", self.cfl)));
        }
        if !(self.t_final >= 0.0) {
            return Err(Error::Config(format!("T = {} must be non-negative", self.t_final)));
        }
        if let Strategy::Overintegrated(m) = self.strategy {
            if m < self.n {
                return Err(Error::Config(format!(
                    "overintegration degree M = {m} below N = {}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

fn check_finite(states: &[TensorGrid3<State>], step: usize, time: f64) -> Result<()> {
    for (e, g) in states.iter().enumerate() {
        for s in g.iter() {
            if s.iter().any(|v| !v.is_finite()) {
                return Err(Error::BlowUp {
                    step,
                    time,
                    reason: format!("non-finite value in element {e}"),
                });
            }
            if !(s[0] > 0.0) {
                return Err(Error::BlowUp {
                    step,
                    time,
                    reason: format!("density {:.3e} in element {e}", s[0]),
                });
            }
        }
    }
    Ok(())
}

/// Advances `states` to `t_final` with steps no longer than `dt`; `on_step`
/// sees the step number, time and states after every step.
///
/// Returns the number of steps taken.
pub fn rk_advance(
    disc: &Discretization,
    states: &mut [TensorGrid3<State>],
    dt: f64,
    t_final: f64,
    mut on_step: impl FnMut(usize, f64, &[TensorGrid3<State>]),
) -> Result<usize> {
    if t_final <= 0.0 {
        return Ok(0);
    }
    let steps = (t_final / dt).ceil().max(1.0) as usize;
    let dt = t_final / steps as f64;
    let mut du: Vec<TensorGrid3<State>> = states
        .iter()
        .map(|g| TensorGrid3::zeros(g.dims()))
        .collect();
    for step in 1..=steps {
        let t = (step - 1) as f64 * dt;
        for stage in 0..5 {
            let rhs = disc.rhs(states).map_err(|err| Error::BlowUp {
                step,
                time: t + RK_C[stage] * dt,
                reason: err.to_string(),
            })?;
            let (a, b) = (RK_A[stage], RK_B[stage]);
            states
                .par_iter_mut()
                .zip(du.par_iter_mut())
                .zip(rhs.par_iter())
                .for_each(|((u, d), r)| {
                    for ((uv, dv), rv) in u
                        .as_mut_slice()
                        .iter_mut()
                        .zip(d.as_mut_slice().iter_mut())
                        .zip(r.iter())
                    {
                        for c in 0..5 {
                            dv[c] = a * dv[c] + dt * rv[c];
                            uv[c] += b * dv[c];
                        }
                    }
                });
        }
        let time = step as f64 * dt;
        check_finite(states, step, time)?;
        on_step(step, time, states);
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficients_are_consistent() {
        // the update weights of a 2N scheme reproduce first order: sum of effective b = 1
        let mut w = [0.0; 5];
        for i in (0..5).rev() {
            let mut coef = RK_B[i];
            let mut prod = 1.0;
            for j in (i + 1)..5 {
                prod *= RK_A[j];
                coef += RK_B[j] * prod;
            }
            w[i] = coef;
        }
        let total: f64 = w.iter().sum();
        assert!((total - 1.0).abs() < 1e-12, "{total}");
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        for bad in [
            SolverConfig {
                n: 0,
                ..Default::default()
            },
            SolverConfig {
                cfl: 1.5,
                ..Default::default()
            },
            SolverConfig {
                t_final: -1.0,
                ..Default::default()
            },
            SolverConfig {
                strategy: Strategy::Overintegrated(2),
                ..Default::default()
            },
        ] {
            assert!(matches!(bad.validate(), Err(Error::Config(_))));
        }
    }
}
