//! Freestream runs and parameter sweeps.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use super::config::RunConfig;
use crate::error::Result;
use crate::mesh::build_mesh;
use crate::metrics::{condition_report, Strategy};
use crate::solver::{rk_advance, Discretization};
use crate::spectral::NodeKind;

pub const CSV_HEADER: &str =
    "mesh,node_kind,strategy,N,Ng,M,max_density_err,condV,condF,steps,seconds";

/// Outcome of one freestream run.
#[derive(Clone, Debug, PartialEq)]
pub struct FreestreamReport {
    pub mesh: String,
    pub kind: NodeKind,
    pub strategy: Strategy,
    pub n: usize,
    pub ng: usize,
    /// Quadrature degree; equals `n` unless overintegrated.
    pub m: usize,
    /// `max |rho - rho_inf|` over all solution nodes and all steps.
    pub max_density_error: f64,
    /// Largest Condition (V) residual relative to its element scale.
    pub cond_v: f64,
    /// Largest pointwise Condition (F) residual relative to its face scale.
    pub cond_f: f64,
    pub steps: usize,
    pub seconds: f64,
}

impl FreestreamReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.6e},{:.6e},{:.6e},{},{:.3}",
            self.mesh,
            self.kind,
            self.strategy.name(),
            self.n,
            self.ng,
            self.m,
            self.max_density_error,
            self.cond_v,
            self.cond_f,
            self.steps,
            self.seconds
        )
    }
}

/// Runs `cfg` at its own `(N, Ng, strategy, node kind)`.
pub fn run_freestream(cfg: &RunConfig) -> Result<FreestreamReport> {
    cfg.validate()?;
    run_case(cfg, cfg.n, cfg.ng, cfg.strategy, cfg.kind)
}

fn run_case(
    cfg: &RunConfig,
    n: usize,
    ng: usize,
    strategy: Strategy,
    kind: NodeKind,
) -> Result<FreestreamReport> {
    let start = Instant::now();
    let solver = cfg.solver_config(n, strategy, kind);
    solver.validate()?;
    let mesh = build_mesh(&cfg.mesh_spec(ng))?;
    let disc = Discretization::new(mesh, solver.strategy, n, kind)?;
    let conditions = condition_report(&disc.mesh, &disc.metrics);

    let w = cfg.freestream;
    let mut states = disc.constant_state(w);
    // the state is constant up to rounding, so the initial step stays valid
    let dt = disc.stable_dt(&states, solver.cfl)?;
    let mut err = 0.0f64;
    let steps = rk_advance(&disc, &mut states, dt, solver.t_final, |_, _, st| {
        for g in st {
            for s in g.iter() {
                err = err.max((s[0] - w.rho).abs());
            }
        }
    })?;
    log::info!(
        "{} {kind} {} N={n} Ng={ng}: err {err:.3e} in {steps} steps",
        cfg.mesh_label(),
        solver.strategy
    );
    Ok(FreestreamReport {
        mesh: cfg.mesh_label(),
        kind,
        strategy: solver.strategy,
        n,
        ng,
        m: disc.metrics.q,
        max_density_error: err,
        cond_v: conditions.max_v(),
        cond_f: conditions.max_f(),
        steps,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// One sweep combination and its result.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub kind: NodeKind,
    pub strategy: Strategy,
    pub n: usize,
    pub ng: usize,
    pub result: std::result::Result<FreestreamReport, String>,
}

impl SweepRow {
    fn sort_key(&self) -> (&'static str, usize, usize, NodeKind) {
        (self.strategy.name(), self.ng, self.n, self.kind)
    }

    pub fn csv_row(&self, mesh: &str, m: usize) -> String {
        match &self.result {
            Ok(r) => r.csv_row(),
            Err(_) => format!(
                "{mesh},{},{},{},{},{m},nan,nan,nan,nan,nan",
                self.kind,
                self.strategy.name(),
                self.n,
                self.ng
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepOutput {
    pub mesh: String,
    pub rows: Vec<SweepRow>,
}

impl SweepOutput {
    /// Header plus one line per row; failed runs carry `nan` and are
    /// followed by a `# error:` note.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let m = match row.strategy {
                Strategy::Overintegrated(m) => m,
                _ => row.n,
            };
            out.push_str(&row.csv_row(&self.mesh, m));
            out.push('\n');
            if let Err(e) = &row.result {
                let _ = writeln!(out, "# error: {e}");
            }
        }
        out
    }

    pub fn failures(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.result.is_err())
    }

    pub fn reports(&self) -> impl Iterator<Item = &FreestreamReport> {
        self.rows.iter().filter_map(|r| r.result.as_ref().ok())
    }
}

/// Runs every `(strategy, Ng, N, node kind)` in `cfg.sweep` in parallel and
/// returns the rows sorted by strategy, then `Ng`, then `N`.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let sw = &cfg.sweep;
    let mut combos = Vec::new();
    for &strategy in &sw.strategies {
        for ng in sw.ng.clone() {
            for n in sw.n.clone() {
                for &kind in &sw.kinds {
                    combos.push((cfg.resolve_strategy(strategy, n), ng, n, kind));
                }
            }
        }
    }
    let mut rows: Vec<SweepRow> = combos
        .into_par_iter()
        .map(|(strategy, ng, n, kind)| SweepRow {
            kind,
            strategy,
            n,
            ng,
            result: run_case(cfg, n, ng, strategy, kind).map_err(|e| e.to_string()),
        })
        .collect();
    rows.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    Ok(SweepOutput {
        mesh: cfg.mesh_label(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(flags: &[&str]) -> RunConfig {
        let mut cfg = RunConfig::default();
        cfg.apply_flags(&["T=0.05"]).unwrap();
        cfg.apply_flags(flags).unwrap();
        cfg
    }

    #[test]
    fn half_order_run_preserves_freestream() {
        let r = run_freestream(&quick(&["N=4", "Ng=2"])).unwrap();
        assert!(r.max_density_error <= 1e-11, "{r:?}");
        assert!(r.steps > 0);
        assert_eq!((r.n, r.ng, r.m), (4, 2, 4));
        assert!(r.cond_v <= 1e-12 && r.cond_f <= 1e-12);
    }

    #[test]
    fn report_conditions_match_standalone_metrics() {
        let cfg = quick(&["N=4", "Ng=4"]);
        let r = run_freestream(&cfg).unwrap();
        let mesh = build_mesh(&cfg.mesh_spec(4)).unwrap();
        let mm = crate::metrics::compute_mesh_metrics(&mesh, Strategy::CurlForm, 4, NodeKind::Gauss)
            .unwrap();
        let rep = condition_report(&mesh, &mm);
        assert_eq!(r.cond_v.to_bits(), rep.max_v().to_bits());
        assert_eq!(r.cond_f.to_bits(), rep.max_f().to_bits());
        assert!(r.max_density_error >= 1e-9);
    }

    #[test]
    fn sweep_rows_are_sorted_and_failures_are_nan() {
        let cfg = quick(&[
            "sweep_N=2..3",
            "sweep_Ng=1..2",
            "sweep_strategies=overintegrated,curl_form",
            "M=2",
        ]);
        let out = run_sweep(&cfg).unwrap();
        let csv = out.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        let keys: Vec<(String, usize, usize)> = out
            .rows
            .iter()
            .map(|r| (r.strategy.name().to_string(), r.ng, r.n))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        // M = 2 is below N = 3
        let failed: Vec<_> = out.failures().collect();
        assert_eq!(failed.len(), 2);
        assert!(failed.iter().all(|r| r.n == 3));
        assert!(csv.contains(",nan,nan,nan,nan,nan"));
        assert!(csv.contains("# error:"));
    }

    #[test]
    fn sweep_is_deterministic_apart_from_timing() {
        let cfg = quick(&["sweep_N=2..3", "sweep_Ng=1", "sweep_node_kinds=gauss,lobatto"]);
        let strip = |s: String| -> Vec<String> {
            s.lines()
                .map(|l| l.rsplit_once(',').map_or(l, |(a, _)| a).to_string())
                .collect()
        };
        let a = strip(run_sweep(&cfg).unwrap().to_csv());
        let b = strip(run_sweep(&cfg).unwrap().to_csv());
        assert_eq!(a, b);
    }
}
