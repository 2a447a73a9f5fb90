//! PASS/FAIL checks with measured values and thresholds.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::RunConfig;
use crate::error::Result;
use crate::mesh::{build_mesh, watertight_residual, Mesh};
use crate::metrics::{
    compute_mesh_metrics, condition_report, metric_divergence, metrics_cross_product,
    ConditionReport, MeshMetrics,
};
use crate::solver::{euler_physical_flux, flux_difference_volume};
use crate::spectral::{legendre, product_interpolation_mismatch, NodeSet, TensorGrid3};

pub const WATERTIGHT_TOL: f64 = 1e-12;
/// Metric residuals are compared relative to `max|Ja| N^2`.
pub const CONDITION_TOL: f64 = 1e-12;
pub const APPENDIX_EXACT_TOL: f64 = 1e-13;
pub const APPENDIX_MISMATCH_MIN: f64 = 1e-6;
pub const FLUX_DIFFERENCING_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    Above,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckLine {
    pub label: String,
    /// Name of the measured quantity in the printed line.
    pub quantity: &'static str,
    pub measured: f64,
    pub threshold: f64,
    pub relation: Relation,
}

impl CheckLine {
    pub fn at_most(label: impl Into<String>, quantity: &'static str, measured: f64, threshold: f64) -> Self {
        CheckLine {
            label: label.into(),
            quantity,
            measured,
            threshold,
            relation: Relation::AtMost,
        }
    }

    pub fn above(label: impl Into<String>, quantity: &'static str, measured: f64, threshold: f64) -> Self {
        CheckLine {
            relation: Relation::Above,
            ..Self::at_most(label, quantity, measured, threshold)
        }
    }

    pub fn passed(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.measured <= self.threshold,
            Relation::Above => self.measured > self.threshold,
        }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let rel = match self.relation {
            Relation::AtMost => "≤",
            Relation::Above => ">",
        };
        write!(
            f,
            "{} {verdict} ({}={:.3e} {rel} {:.0e})",
            self.label, self.quantity, self.measured, self.threshold
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CheckReport {
    pub lines: Vec<CheckLine>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.lines.iter().all(CheckLine::passed)
    }

    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|l| !l.passed()).count()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.lines {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

pub fn watertight_check(mesh: &Mesh) -> CheckLine {
    let rep = watertight_residual(mesh);
    CheckLine::at_most("watertight", "gap", rep.max_gap, WATERTIGHT_TOL)
}

pub fn condition_checks(rep: &ConditionReport) -> [CheckLine; 2] {
    [
        CheckLine::at_most("condV", "max", rep.max_v(), CONDITION_TOL),
        CheckLine::at_most("condF", "max", rep.max_f(), CONDITION_TOL),
    ]
}

/// Samples `sum_k c_k P_k` with random `c_k`, leading coefficient bounded
/// away from zero, scaled to unit maximum at the nodes.
fn random_polynomial(rng: &mut impl Rng, degree: usize, ns: &NodeSet) -> Vec<f64> {
    let mut c: Vec<f64> = (0..=degree).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let lead = rng.gen_range(0.5..1.0);
    c[degree] = if rng.gen_bool(0.5) { lead } else { -lead };
    let vals: Vec<f64> = ns
        .nodes()
        .iter()
        .map(|&x| c.iter().enumerate().map(|(k, ck)| ck * legendre(k, x).0).sum())
        .collect();
    let max = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    vals.iter().map(|v| v / max).collect()
}

/// The two halves of the product-interpolation property at degree `ns.degree()`:
/// `pairs` random inputs whose product degrees fit in `N`, and `pairs` random full-degree inputs.
pub fn appendix_checks(ns: &NodeSet, pairs: usize, seed: u64) -> [CheckLine; 2] {
    let n = ns.degree();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = (n / 2, n - n / 2);
    let mut exact = 0.0f64;
    let mut full = f64::INFINITY;
    for _ in 0..pairs {
        let u = random_polynomial(&mut rng, a, ns);
        let v = random_polynomial(&mut rng, b, ns);
        exact = exact.max(product_interpolation_mismatch(&u, &v, ns).max_mismatch);
        let u = random_polynomial(&mut rng, n, ns);
        let v = random_polynomial(&mut rng, n, ns);
        full = full.min(product_interpolation_mismatch(&u, &v, ns).max_mismatch);
    }
    let low = if a == b {
        format!("deg-{a}")
    } else {
        format!("deg-{a}/deg-{b}")
    };
    [
        CheckLine::above(
            format!("mismatch > 0 for deg-{n} inputs:"),
            "min mismatch",
            full,
            APPENDIX_MISMATCH_MIN,
        ),
        CheckLine::at_most(
            format!("mismatch ≤ 1e-13 for {low} inputs:"),
            "max mismatch",
            exact,
            APPENDIX_EXACT_TOL,
        ),
    ]
}

/// Largest nodal gap, over all elements, between the flux-differencing volume
/// term at a constant state and `sum_n f_n (metric divergence)_n`, using
/// nodal cross-product metrics so that the divergence is not zero.
pub fn flux_differencing_gap(cfg: &RunConfig, mesh: &Mesh) -> Result<f64> {
    let u0 = cfg.freestream.to_conserved();
    let f = euler_physical_flux(&u0)?;
    let mut gap = 0.0f64;
    for el in &mesh.elements {
        let ms = metrics_cross_product(&el.mapping, cfg.n, cfg.n, cfg.kind)?;
        let d = ms.quadrature_nodes().differentiation_matrix();
        let u = TensorGrid3::filled(ms.ja[0].dims(), u0);
        let lhs = flux_difference_volume(&u, &ms.ja, &d)?;
        let div = metric_divergence(&ms);
        for (l, dv) in lhs.iter().zip(div.iter()) {
            for c in 0..5 {
                let r: f64 = (0..3).map(|k| f[k][c] * dv[k]).sum();
                gap = gap.max((l[c] - r).abs());
            }
        }
    }
    Ok(gap)
}

pub fn conditions_for(cfg: &RunConfig, mesh: &Mesh) -> Result<(MeshMetrics, ConditionReport)> {
    let strategy = cfg.resolve_strategy(cfg.strategy, cfg.n);
    let mm = compute_mesh_metrics(mesh, strategy, cfg.n, cfg.kind)?;
    let rep = condition_report(mesh, &mm);
    Ok((mm, rep))
}

/// Every check on the mesh and degrees of `cfg`.
pub fn run_checks(cfg: &RunConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let mesh = build_mesh(&cfg.mesh_spec(cfg.ng))?;
    let mut lines = vec![watertight_check(&mesh)];
    let (_, rep) = conditions_for(cfg, &mesh)?;
    lines.extend(condition_checks(&rep));
    lines.extend(appendix_checks(&NodeSet::new(cfg.kind, cfg.n)?, 20, cfg.seed));
    lines.push(CheckLine::at_most(
        "flux differencing identity",
        "gap",
        flux_differencing_gap(cfg, &mesh)?,
        FLUX_DIFFERENCING_TOL,
    ));
    Ok(CheckReport { lines })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Strategy;

    #[test]
    fn default_mesh_checks_pass() {
        let rep = run_checks(&RunConfig::default()).unwrap();
        assert!(rep.all_passed(), "{rep}");
        let first = rep.lines[0].to_string();
        assert!(first.starts_with("watertight PASS (gap="), "{first}");
        assert!(first.ends_with("≤ 1e-12)"), "{first}");
    }

    #[test]
    fn appendix_demo_lines() {
        let [high, low] = appendix_checks(&NodeSet::gauss(2).unwrap(), 20, 7);
        assert!(high.to_string().starts_with("mismatch > 0 for deg-2 inputs: PASS"), "{high}");
        assert!(low.to_string().starts_with("mismatch ≤ 1e-13 for deg-1 inputs: PASS"), "{low}");
    }

    #[test]
    fn cross_product_on_curved_mesh_fails_volume_condition() {
        let mut cfg = RunConfig::default();
        cfg.apply_flags(&["Ng=4", "N=4"]).unwrap();
        cfg.strategy = Strategy::CrossProduct;
        let rep = run_checks(&cfg).unwrap();
        let cond_v = rep.lines.iter().find(|l| l.label == "condV").unwrap();
        assert!(!cond_v.passed());
        assert!(cond_v.to_string().starts_with("condV FAIL"));
        // the identity holds whatever the metrics
        assert!(rep.lines.last().unwrap().passed(), "{rep}");
    }
}
