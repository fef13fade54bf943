//! 2D plane-strain nonlinear finite elements: bilinear quads with 2x2 Gauss
//! quadrature in a total-Lagrangian setting, contact coupling against a rigid
//! line, and a monolithic extra unknown for the plate height under normal
//! force control.
//!
//! Global dof layout: node `i` owns dofs `2i` (x) and `2i+1` (y); the plate
//! height is dof `2 n_nodes`. The residual is
//! `R_u = f_int(u) - f_ext - f_contact(u, y_p)` for the structural rows and
//! `R_p = F_contact_normal + F_target` for the plate row under force control
//! (so compressive preloads are negative targets, matching the reported
//! normal force `F_n = -F_contact_normal`).

pub mod newton;
pub mod program;

use crate::contact::{
    evaluate_facet, CommittedPoint, ContactParams, FacetContribution, PointEval,
};
use crate::kinematics::RigidSurface;
use crate::material::{neo_hooke_stress_tangent, Material, MaterialError};
use crate::mesh::{Mesh, MeshError};
use crate::traction::LawError;
use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{SparseColMat, Triplet};
use faer::Col;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FemError {
    #[error(transparent)]
    Material(#[from] MaterialError),
    #[error(transparent)]
    Law(#[from] LawError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("newton solver did not converge: {0}")]
    NonConvergence(String),
    #[error("linear solver failed: {0}")]
    LinearSolve(String),
    #[error("invalid system setup: {0}")]
    Setup(String),
}

/// How the rigid plate's vertical position is driven.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlateControl {
    /// Prescribed height; the plate dof is Dirichlet-constrained.
    Height(f64),
    /// Normal force control: the plate height is an unknown and the plate
    /// row enforces `F_contact_normal + target = 0`.
    Force(f64),
}

/// Contact surface configuration: the law parameters plus the facet list of
/// the deformable body's contact boundary.
#[derive(Debug, Clone)]
pub struct ContactConfig {
    pub params: ContactParams,
    pub facets: Vec<[usize; 2]>,
}

/// Primary unknowns plus the prescribed horizontal plate offset.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    /// Nodal displacements, interleaved x/y.
    pub u: Vec<f64>,
    pub plate_height: f64,
    /// Prescribed horizontal plate displacement (load parameter, not a dof).
    pub plate_offset: f64,
}

impl State {
    pub fn zeros(n_nodes: usize, plate_height: f64) -> Self {
        Self {
            u: vec![0.0; 2 * n_nodes],
            plate_height,
            plate_offset: 0.0,
        }
    }

    pub fn node_position(&self, mesh: &Mesh, node: usize) -> [f64; 2] {
        [
            mesh.coords[node][0] + self.u[2 * node],
            mesh.coords[node][1] + self.u[2 * node + 1],
        ]
    }
}

/// Committed per-point contact history, two Gauss points per facet.
#[derive(Debug, Clone)]
pub struct History {
    pub points: Vec<CommittedPoint>,
}

impl History {
    /// Anchors every Gauss point at its reference position.
    pub fn initial(mesh: &Mesh, facets: &[[usize; 2]]) -> Self {
        const GAUSS: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];
        let mut points = Vec::with_capacity(2 * facets.len());
        for f in facets {
            let (a, b) = (mesh.coords[f[0]], mesh.coords[f[1]]);
            for &xi in &GAUSS {
                let x = 0.5 * (1.0 - xi) * a[0] + 0.5 * (1.0 + xi) * b[0];
                points.push(CommittedPoint::initial(x));
            }
        }
        Self { points }
    }
}

/// The assembled FE problem.
pub struct System {
    pub mesh: Mesh,
    pub material: Material,
    pub contact: Option<ContactConfig>,
    /// Prescribed dofs (structural only; the plate dof is controlled via
    /// [`PlateControl`]).
    pub dirichlet: Vec<(usize, f64)>,
    /// External nodal forces (zeros unless a test applies point loads).
    pub nodal_forces: Vec<f64>,
    /// Out-of-plane thickness used for reported forces and areas.
    pub thickness: f64,
    /// Assembly threads; results are bitwise identical for any count.
    pub threads: usize,
}

/// One assembled linearization: residual, tangent, and contact observables.
pub struct Assembled {
    pub residual: Vec<f64>,
    pub matrix: SparseColMat<usize, f64>,
    pub evals: Vec<PointEval>,
    /// Total contact force on the body (per unit thickness).
    pub f_contact: [f64; 2],
    pub f_int_norm: f64,
    pub f_contact_norm: f64,
}

#[derive(Clone, Copy)]
struct ElemOut {
    f: [f64; 8],
    k: [[f64; 8]; 8],
}

impl Default for ElemOut {
    fn default() -> Self {
        Self {
            f: [0.0; 8],
            k: [[0.0; 8]; 8],
        }
    }
}

const GAUSS_2D: [(f64, f64); 4] = {
    const G: f64 = 0.577_350_269_189_625_8;
    [(-G, -G), (G, -G), (G, G), (-G, G)]
};
const CORNER_XI: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];
const CORNER_ETA: [f64; 4] = [-1.0, -1.0, 1.0, 1.0];

fn element_kernel(
    coords: &[[f64; 2]],
    quad: &[usize; 4],
    u: &[f64],
    material: &Material,
) -> Result<ElemOut, MaterialError> {
    let mut out = ElemOut::default();
    let x: [[f64; 2]; 4] = std::array::from_fn(|a| coords[quad[a]]);
    let ue: [[f64; 2]; 4] =
        std::array::from_fn(|a| [u[2 * quad[a]], u[2 * quad[a] + 1]]);

    for &(xi, eta) in &GAUSS_2D {
        // shape function gradients in the reference element
        let mut dn_dxi = [[0.0; 2]; 4];
        for a in 0..4 {
            dn_dxi[a][0] = 0.25 * CORNER_XI[a] * (1.0 + CORNER_ETA[a] * eta);
            dn_dxi[a][1] = 0.25 * CORNER_ETA[a] * (1.0 + CORNER_XI[a] * xi);
        }
        // reference Jacobian
        let mut jac = [[0.0; 2]; 2];
        for a in 0..4 {
            for i in 0..2 {
                for j in 0..2 {
                    jac[i][j] += x[a][i] * dn_dxi[a][j];
                }
            }
        }
        let det_j = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if !(det_j > 0.0) {
            return Err(MaterialError::ElementInversion(det_j));
        }
        let inv_j = [
            [jac[1][1] / det_j, -jac[0][1] / det_j],
            [-jac[1][0] / det_j, jac[0][0] / det_j],
        ];
        // gradients w.r.t. reference coordinates
        let mut grad = [[0.0; 2]; 4];
        for a in 0..4 {
            for j in 0..2 {
                grad[a][j] = dn_dxi[a][0] * inv_j[0][j] + dn_dxi[a][1] * inv_j[1][j];
            }
        }
        // deformation gradient
        let mut f = [[0.0; 2]; 2];
        for i in 0..2 {
            f[i][i] = 1.0;
        }
        for a in 0..4 {
            for i in 0..2 {
                for j in 0..2 {
                    f[i][j] += ue[a][i] * grad[a][j];
                }
            }
        }
        let st = neo_hooke_stress_tangent(&f, material)?;

        for a in 0..4 {
            for i in 0..2 {
                out.f[2 * a + i] +=
                    det_j * (st.pk1[i][0] * grad[a][0] + st.pk1[i][1] * grad[a][1]);
            }
        }
        for a in 0..4 {
            for b in 0..4 {
                for i in 0..2 {
                    for k in 0..2 {
                        let mut v = 0.0;
                        for jj in 0..2 {
                            for l in 0..2 {
                                v += st.tangent[i][jj][k][l] * grad[a][jj] * grad[b][l];
                            }
                        }
                        out.k[2 * a + i][2 * b + k] += det_j * v;
                    }
                }
            }
        }
    }
    Ok(out)
}

impl System {
    pub fn new(
        mesh: Mesh,
        material: Material,
        contact: Option<ContactConfig>,
        dirichlet: Vec<(usize, f64)>,
    ) -> Result<Self, FemError> {
        let n = 2 * mesh.n_nodes();
        for &(d, _) in &dirichlet {
            if d >= n {
                return Err(FemError::Setup(format!("dirichlet dof {d} out of range")));
            }
        }
        if !crate::capmesh::all_jacobians_positive(&mesh) {
            return Err(FemError::Setup(
                "mesh has non-positive Jacobians in the reference configuration".into(),
            ));
        }
        Ok(Self {
            nodal_forces: vec![0.0; n],
            mesh,
            material,
            contact,
            dirichlet,
            thickness: 1.0,
            threads: 1,
        })
    }

    /// Fixes both components of every node in the named set.
    pub fn clamp_set(mesh: &Mesh, set: &str) -> Result<Vec<(usize, f64)>, MeshError> {
        Ok(mesh
            .set(set)?
            .iter()
            .flat_map(|&n| [(2 * n, 0.0), (2 * n + 1, 0.0)])
            .collect())
    }

    pub fn n_dofs(&self) -> usize {
        2 * self.mesh.n_nodes() + 1
    }

    pub fn plate_dof(&self) -> usize {
        2 * self.mesh.n_nodes()
    }

    pub fn initial_history(&self) -> History {
        match &self.contact {
            Some(c) => History::initial(&self.mesh, &c.facets),
            None => History { points: Vec::new() },
        }
    }

    /// Writes the prescribed values into the state so Dirichlet rows start
    /// exactly satisfied.
    pub fn apply_dirichlet(&self, state: &mut State, control: PlateControl) {
        for &(d, v) in &self.dirichlet {
            state.u[d] = v;
        }
        if let PlateControl::Height(h) = control {
            state.plate_height = h;
        }
    }

    fn element_contributions(&self, state: &State) -> Result<Vec<ElemOut>, FemError> {
        let n_el = self.mesh.quads.len();
        let mut out = vec![ElemOut::default(); n_el];
        let threads = self.threads.max(1).min(n_el.max(1));
        if threads <= 1 {
            for (e, slot) in out.iter_mut().enumerate() {
                *slot =
                    element_kernel(&self.mesh.coords, &self.mesh.quads[e], &state.u, &self.material)?;
            }
        } else {
            let chunk = n_el.div_ceil(threads);
            let results: Vec<Result<(), MaterialError>> = std::thread::scope(|s| {
                let handles: Vec<_> = out
                    .chunks_mut(chunk)
                    .enumerate()
                    .map(|(ci, slots)| {
                        let coords = &self.mesh.coords;
                        let quads = &self.mesh.quads;
                        let u = &state.u;
                        let material = &self.material;
                        s.spawn(move || {
                            for (off, slot) in slots.iter_mut().enumerate() {
                                *slot = element_kernel(
                                    coords,
                                    &quads[ci * chunk + off],
                                    u,
                                    material,
                                )?;
                            }
                            Ok(())
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });
            for r in results {
                r?;
            }
        }
        Ok(out)
    }

    /// Assembles residual and tangent at the given state. The sparsity
    /// pattern is independent of regimes and control mode, so a symbolic
    /// factorization can be reused across all iterations of a run.
    pub fn assemble(
        &self,
        state: &State,
        history: &History,
        control: PlateControl,
    ) -> Result<Assembled, FemError> {
        let n = self.n_dofs();
        let plate = self.plate_dof();
        let mut residual = vec![0.0; n];

        let mut constrained = vec![false; n];
        for &(d, _) in &self.dirichlet {
            constrained[d] = true;
        }
        if matches!(control, PlateControl::Height(_)) {
            constrained[plate] = true;
        }

        let elems = self.element_contributions(state)?;

        let n_facets = self.contact.as_ref().map_or(0, |c| c.facets.len());
        let mut triplets: Vec<Triplet<usize, usize, f64>> =
            Vec::with_capacity(64 * elems.len() + 25 * n_facets + self.dirichlet.len() + 2);
        let mut push = |r: usize, c: usize, v: f64| {
            let v = if constrained[r] || constrained[c] { 0.0 } else { v };
            triplets.push(Triplet::new(r, c, v));
        };

        let mut f_int_norm = 0.0f64;
        for (e, quad) in self.mesh.quads.iter().enumerate() {
            let eo = &elems[e];
            for a in 0..4 {
                for i in 0..2 {
                    let row = 2 * quad[a] + i;
                    residual[row] += eo.f[2 * a + i];
                    f_int_norm = f_int_norm.max(eo.f[2 * a + i].abs());
                    for b in 0..4 {
                        for k in 0..2 {
                            push(row, 2 * quad[b] + k, eo.k[2 * a + i][2 * b + k]);
                        }
                    }
                }
            }
        }

        for (d, &f) in self.nodal_forces.iter().enumerate() {
            residual[d] -= f;
        }

        // contact coupling
        let mut evals = Vec::with_capacity(2 * n_facets);
        let mut f_contact = [0.0f64; 2];
        let mut f_contact_norm = 0.0f64;
        if let Some(cfg) = &self.contact {
            let surf = RigidSurface {
                kind: crate::kinematics::SurfaceKind::FlatLine,
                height: state.plate_height,
                offset: state.plate_offset,
            };
            for (fi, facet) in cfg.facets.iter().enumerate() {
                let x_ref = [self.mesh.coords[facet[0]], self.mesh.coords[facet[1]]];
                let x_cur = [
                    state.node_position(&self.mesh, facet[0]),
                    state.node_position(&self.mesh, facet[1]),
                ];
                let committed: [CommittedPoint; 2] =
                    [history.points[2 * fi], history.points[2 * fi + 1]];
                let contrib: FacetContribution =
                    evaluate_facet(&x_ref, &x_cur, &committed, &surf, &cfg.params)?;

                let dofs = [
                    2 * facet[0],
                    2 * facet[0] + 1,
                    2 * facet[1],
                    2 * facet[1] + 1,
                    plate,
                ];
                for local in 0..4 {
                    residual[dofs[local]] -= contrib.force[local];
                    f_contact_norm = f_contact_norm.max(contrib.force[local].abs());
                    for col in 0..5 {
                        push(dofs[local], dofs[col], -contrib.tangent[local][col]);
                    }
                }
                // plate equilibrium row accumulates the normal resultant
                residual[plate] += contrib.plate_normal_force;
                for col in 0..5 {
                    push(plate, dofs[col], contrib.tangent[4][col]);
                }
                f_contact[0] += contrib.force[0] + contrib.force[2];
                f_contact[1] += contrib.force[1] + contrib.force[3];
                evals.extend_from_slice(&contrib.evals);
            }
        }

        match control {
            PlateControl::Force(target) => {
                residual[plate] += target;
                if self.contact.is_none() {
                    return Err(FemError::Setup(
                        "force control requires a contact surface".into(),
                    ));
                }
            }
            PlateControl::Height(_) => {
                residual[plate] = 0.0;
            }
        }

        // Dirichlet rows: zero residual, identity diagonal. The triplet
        // filter has already zeroed their rows and columns.
        for &(d, _) in &self.dirichlet {
            residual[d] = 0.0;
            triplets.push(Triplet::new(d, d, 1.0));
        }
        if constrained[plate] {
            triplets.push(Triplet::new(plate, plate, 1.0));
        } else {
            // keep the diagonal slot in the pattern
            triplets.push(Triplet::new(plate, plate, 0.0));
        }

        let matrix = SparseColMat::try_new_from_triplets(n, n, &triplets)
            .map_err(|e| FemError::LinearSolve(format!("{e:?}")))?;

        Ok(Assembled {
            residual,
            matrix,
            evals,
            f_contact,
            f_int_norm,
            f_contact_norm,
        })
    }

    /// Commits contact history at a converged state.
    pub fn commit(&self, history: &mut History, state: &State, evals: &[PointEval]) {
        for (p, e) in history.points.iter_mut().zip(evals) {
            p.t_t = e.t_t;
            p.slip += e.plastic_increment;
            p.x = e.x;
            p.surf_offset = state.plate_offset;
            p.regime = e.regime;
        }
    }
}

/// Sparse LU with a symbolic factorization computed once and reused while the
/// pattern is unchanged.
pub struct LinearSolver {
    symbolic: Option<SymbolicLu<usize>>,
    nnz: usize,
}

impl LinearSolver {
    pub fn new() -> Self {
        Self {
            symbolic: None,
            nnz: 0,
        }
    }

    pub fn solve(
        &mut self,
        matrix: &SparseColMat<usize, f64>,
        rhs: &[f64],
    ) -> Result<Vec<f64>, FemError> {
        let nnz = matrix.compute_nnz();
        if self.symbolic.is_none() || self.nnz != nnz {
            self.symbolic = Some(
                SymbolicLu::try_new(matrix.symbolic())
                    .map_err(|e| FemError::LinearSolve(format!("{e:?}")))?,
            );
            self.nnz = nnz;
        }
        let lu = Lu::try_new_with_symbolic(
            self.symbolic.as_ref().unwrap().clone(),
            matrix.as_ref(),
        )
        .map_err(|e| FemError::LinearSolve(format!("{e:?}")))?;
        let b = Col::<f64>::from_fn(rhs.len(), |i| rhs[i]);
        let x = lu.solve(&b);
        let out: Vec<f64> = (0..rhs.len()).map(|i| x[i]).collect();
        if out.iter().any(|v| !v.is_finite()) {
            return Err(FemError::LinearSolve("non-finite solution".into()));
        }
        Ok(out)
    }
}

impl Default for LinearSolver {
    fn default() -> Self {
        Self::new()
    }
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}
