//! Assembly of the semi-discrete right-hand side.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::euler::{Primitive, State};
use super::mortar::{mortar_surface_exchange, MortarOperators};
use super::volume::{contravariant_volume_flux, strong_divergence};
use crate::error::Result;
use crate::geometry::Side;
use crate::mesh::Mesh;
use crate::metrics::{compute_mesh_metrics, MeshMetrics, Strategy};
use crate::spectral::{FaceGrid, NodeKind, NodeSet, TensorGrid3};
use crate::vec3::{self, Vec3};

/// One-dimensional operators shared by every element.
#[derive(Clone, Debug)]
pub struct Operators {
    pub n: usize,
    pub q: usize,
    pub kind: NodeKind,
    /// Solution nodes.
    pub ns: NodeSet,
    /// Quadrature nodes.
    pub qs: NodeSet,
    /// Interpolation from solution to quadrature nodes, `(q+1) x (n+1)`.
    pub v: DMatrix<f64>,
    pub vt: DMatrix<f64>,
    /// Differentiation at the quadrature nodes.
    pub dq: DMatrix<f64>,
    /// Boundary interpolation vectors at `-1` and `+1`, solution and quadrature degree.
    pub bn: [Vec<f64>; 2],
    pub bq: [Vec<f64>; 2],
    pub mortar: MortarOperators,
}

impl Operators {
    pub fn new(kind: NodeKind, n: usize, q: usize) -> Result<Self> {
        let ns = NodeSet::new(kind, n)?;
        let qs = NodeSet::new(kind, q)?;
        let v = ns.interpolation_to(&qs);
        Ok(Operators {
            n,
            q,
            kind,
            vt: v.transpose(),
            v,
            dq: qs.differentiation_matrix(),
            bn: [ns.boundary_vector(-1.0), ns.boundary_vector(1.0)],
            bq: [qs.boundary_vector(-1.0), qs.boundary_vector(1.0)],
            mortar: MortarOperators::new(&qs)?,
            ns,
            qs,
        })
    }

    fn to_quadrature(&self, u: &TensorGrid3<State>) -> TensorGrid3<State> {
        if self.q == self.n {
            u.clone()
        } else {
            u.apply_all(&self.v)
        }
    }

    fn trace<T: crate::spectral::Field>(&self, g: &TensorGrid3<T>, side: Side) -> FaceGrid<T> {
        let b = &self.bq[usize::from(side.positive)];
        match self.kind {
            NodeKind::Lobatto => g.slice(side.axis, if side.positive { self.q } else { 0 }),
            NodeKind::Gauss => g.contract_to_face(side.axis, b),
        }
    }
}

/// A mesh, its metrics and the operators needed to evaluate the right-hand side.
#[derive(Clone, Debug)]
pub struct Discretization {
    pub mesh: Mesh,
    pub metrics: MeshMetrics,
    pub ops: Operators,
}

/// Per-element data needed by the face stage.
struct ElementStage {
    div: TensorGrid3<State>,
    u: [FaceGrid<State>; 6],
    /// Trace of `F^axis` (unsigned) on each side.
    f: [FaceGrid<State>; 6],
}

impl Discretization {
    pub fn new(mesh: Mesh, strategy: Strategy, n: usize, kind: NodeKind) -> Result<Self> {
        let metrics = compute_mesh_metrics(&mesh, strategy, n, kind)?;
        Self::from_parts(mesh, metrics)
    }

    pub fn from_parts(mesh: Mesh, metrics: MeshMetrics) -> Result<Self> {
        let ops = Operators::new(metrics.kind, metrics.n, metrics.q)?;
        Ok(Discretization { mesh, metrics, ops })
    }

    pub fn element_count(&self) -> usize {
        self.mesh.elements.len()
    }

    /// Physical coordinates of the solution nodes of element `e`.
    pub fn node_coordinates(&self, e: usize) -> TensorGrid3<Vec3> {
        self.mesh.elements[e].mapping.sample_at(&self.ops.ns)
    }

    pub fn constant_state(&self, w: Primitive) -> Vec<TensorGrid3<State>> {
        let n = self.ops.n + 1;
        vec![TensorGrid3::filled([n; 3], w.to_conserved()); self.element_count()]
    }

    /// Samples `f` at every solution node.
    pub fn sample_state(&self, f: impl Fn(Vec3) -> State + Sync) -> Vec<TensorGrid3<State>> {
        (0..self.element_count())
            .into_par_iter()
            .map(|e| self.node_coordinates(e).map(|x| f(*x)))
            .collect()
    }

    fn element_stage(&self, e: usize, u: &TensorGrid3<State>) -> Result<ElementStage> {
        let ms = &self.metrics.elements[e];
        let uq = self.ops.to_quadrature(u);
        let f = contravariant_volume_flux(&uq, &ms.ja)?;
        let div = strong_divergence(&f, &self.ops.dq);
        Ok(ElementStage {
            div,
            u: Side::ALL.map(|s| self.ops.trace(&uq, s)),
            f: Side::ALL.map(|s| self.ops.trace(&f[s.axis], s)),
        })
    }

    /// `S = F*_out - sign * F^d` on every element side.
    fn surface_terms(&self, stages: &[ElementStage]) -> Result<Vec<[Option<FaceGrid<State>>; 6]>> {
        let penalty = |st: &ElementStage, side: Side, star: &FaceGrid<State>| {
            let sign = side.sign();
            star.zip_map(&st.f[side.index()], |a, b| std::array::from_fn(|c| a[c] - sign * b[c]))
        };
        let conforming: Vec<_> = self
            .mesh
            .conforming
            .par_iter()
            .map(|face| {
                let (l, r) = (&stages[face.left.element], &stages[face.right.element]);
                let normal = self.metrics.conforming_face_metric(face);
                let ul = &l.u[face.left.side.index()];
                let ur = &r.u[face.right.side.index()];
                let mut star = FaceGrid::<State>::zeros(ul.dims());
                for (p, out) in star.as_mut_slice().iter_mut().enumerate() {
                    let n = vec3::scale(normal.as_slice()[p], face.left.side.sign());
                    *out = super::euler::lax_friedrichs_numerical_flux(
                        &ul.as_slice()[p],
                        &ur.as_slice()[p],
                        n,
                    )?;
                }
                let neg = star.map(|v| v.map(|c| -c));
                Ok([
                    (face.left, penalty(l, face.left.side, &star)),
                    (face.right, penalty(r, face.right.side, &neg)),
                ])
            })
            .collect::<Result<_>>()?;
        let mortars: Vec<_> = self
            .mesh
            .mortars
            .par_iter()
            .zip(&self.metrics.mortars)
            .map(|(mortar, metric)| {
                let p = &stages[mortar.parent.element];
                let traces = mortar
                    .children
                    .each_ref()
                    .map(|c| &stages[c.face.element].u[c.face.side.index()]);
                let fluxes = mortar_surface_exchange(
                    &self.ops.mortar,
                    mortar,
                    &p.u[mortar.parent.side.index()],
                    traces,
                    metric,
                )?;
                let mut out = vec![(
                    mortar.parent,
                    penalty(p, mortar.parent.side, &fluxes.parent),
                )];
                for (child, flux) in mortar.children.iter().zip(&fluxes.children) {
                    let st = &stages[child.face.element];
                    out.push((child.face, penalty(st, child.face.side, flux)));
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;

        let mut surf: Vec<[Option<FaceGrid<State>>; 6]> =
            (0..stages.len()).map(|_| Default::default()).collect();
        let all = conforming
            .into_iter()
            .flat_map(|pair: [_; 2]| pair.into_iter())
            .chain(mortars.into_iter().flatten());
        for (face, s) in all {
            surf[face.element][face.side.index()] = Some(s);
        }
        Ok(surf)
    }

    /// `dU/dt` on every element.
    pub fn rhs(&self, states: &[TensorGrid3<State>]) -> Result<Vec<TensorGrid3<State>>> {
        let stages: Vec<ElementStage> = states
            .par_iter()
            .enumerate()
            .map(|(e, u)| self.element_stage(e, u))
            .collect::<Result<_>>()?;
        let surf = self.surface_terms(&stages)?;
        Ok(stages
            .par_iter()
            .zip(&surf)
            .enumerate()
            .map(|(e, (st, s))| self.lift(e, st, s))
            .collect())
    }

    /// Tests volume and surface terms against the solution basis and divides by the lumped mass.
    fn lift(
        &self,
        e: usize,
        st: &ElementStage,
        surf: &[Option<FaceGrid<State>>; 6],
    ) -> TensorGrid3<State> {
        let ops = &self.ops;
        let wq = ops.qs.weights();
        let weighted = TensorGrid3::from_fn(st.div.dims(), |a, b, c| {
            let w = wq[a] * wq[b] * wq[c];
            st.div.get(a, b, c).map(|v| w * v)
        });
        let mut r = if ops.q == ops.n {
            weighted
        } else {
            weighted.apply_all(&ops.vt)
        };
        for side in Side::ALL {
            let s = surf[side.index()]
                .as_ref()
                .expect("every element side belongs to a face");
            let ws = FaceGrid::from_fn(s.dims(), |p, q| s.get(p, q).map(|v| wq[p] * wq[q] * v));
            let g = if ops.q == ops.n {
                ws
            } else {
                ws.apply(0, &ops.vt).apply(1, &ops.vt)
            };
            let b = &ops.bn[usize::from(side.positive)];
            let t = side.tangential();
            let dims = r.dims();
            for l in 0..dims[2] {
                for k in 0..dims[1] {
                    for j in 0..dims[0] {
                        let idx = [j, k, l];
                        let bj = b[idx[side.axis]];
                        if bj == 0.0 {
                            continue;
                        }
                        let gv = g.get(idx[t[0]], idx[t[1]]);
                        let out = r.get_mut(j, k, l);
                        for c in 0..5 {
                            out[c] += bj * gv[c];
                        }
                    }
                }
            }
        }
        let wn = ops.ns.weights();
        let jac = &self.metrics.elements[e].jac;
        TensorGrid3::from_fn(r.dims(), |j, k, l| {
            let m = jac.get(j, k, l) * wn[j] * wn[k] * wn[l];
            r.get(j, k, l).map(|v| -v / m)
        })
    }

    /// Largest stable time step for `states` at Courant number `cfl`.
    pub fn stable_dt(&self, states: &[TensorGrid3<State>], cfl: f64) -> Result<f64> {
        let speeds: Vec<f64> = states
            .par_iter()
            .enumerate()
            .map(|(e, u)| {
                let ms = &self.metrics.elements[e];
                let uq = self.ops.to_quadrature(u);
                let mut max = 0.0f64;
                for (p, s) in uq.as_slice().iter().enumerate() {
                    let w = Primitive::from_conserved(s)?;
                    let sum: f64 = (0..3)
                        .map(|i| super::euler::wave_speed(&w, ms.ja[i].as_slice()[p]))
                        .sum();
                    max = max.max(sum);
                }
                Ok(max / ms.min_jacobian())
            })
            .collect::<Result<_>>()?;
        let lambda = speeds.into_iter().fold(0.0, f64::max);
        Ok(cfl * self.ops.ns.min_spacing() / lambda)
    }
}

/// `dU/dt` of `states` on `disc`.
pub fn semidiscrete_rhs(
    disc: &Discretization,
    states: &[TensorGrid3<State>],
) -> Result<Vec<TensorGrid3<State>>> {
    disc.rhs(states)
}

/// Largest absolute entry over all elements.
pub fn max_norm(grids: &[TensorGrid3<State>]) -> f64 {
    grids.iter().map(|g| g.max_abs()).fold(0.0, f64::max)
}
