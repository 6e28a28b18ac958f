//! Global skeleton system with the transferred boundary condition.
//!
//! Interior faces carry the transmission condition, summed over the two
//! adjacent elements. On a boundary face `e` with element `T^e` the row is
//!
//! ```text
//! <uhat, mu> - <int_0^l kappa^-1 q(x + s n).n ds, mu> = <g(xbar), mu>
//! ```
//!
//! where `q` is the extrapolated element flux. The flux functional `G`
//! acting on the `q` coefficients of `T^e` is rewritten through the local
//! recovery `q = Rhat_q uhat + Rsrc_q b`, so only trace unknowns remain.

use std::collections::HashMap;

use faer::linalg::solvers::Solve;
use faer::sparse::linalg::solvers::Lu;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;
use nalgebra::{DMatrix, DVector};

use crate::error::{HdgError, Result};
use crate::fe::basis::RefBasis;
use crate::fe::element::{ElementBasis, Point};
use crate::fe::quadrature::QuadratureSet;
use crate::geometry::mesh::Triangulation;
use crate::geometry::problem::CurvedProblem;
use crate::geometry::transfer::TransferMap;
use crate::hdg::local::{local_solver, LocalFace, LocalOperator};
use crate::hdg::state::HdgState;

/// Transfer coupling of one boundary face.
#[derive(Debug, Clone)]
pub struct BoundaryCoupling {
    pub element: usize,
    /// `nf x 2n` functional on the `q` coefficients of the element.
    pub flux: DMatrix<f64>,
    /// `<g(xbar), mu_i>`.
    pub data: Vec<f64>,
}

/// Everything that does not depend on the Picard iterate: local operators,
/// boundary couplings and the factored skeleton matrix.
pub struct Discretization<'a> {
    pub tri: &'a Triangulation,
    pub tmap: &'a TransferMap,
    pub problem: &'a CurvedProblem,
    pub k: usize,
    pub tau: f64,
    pub quad: QuadratureSet,
    pub basis: RefBasis,
    pub locals: Vec<LocalOperator>,
    pub boundary: Vec<Option<BoundaryCoupling>>,
    pub matrix: SparseColMat<usize, f64>,
    lu: Lu<usize, f64>,
    /// Reference basis values at the triangle quadrature points.
    table: Vec<Vec<f64>>,
}

/// Right-hand side of the skeleton system for a given source.
#[derive(Debug, Clone)]
pub struct SkeletonSystem<'d, 'a> {
    pub disc: &'d Discretization<'a>,
    pub rhs: Vec<f64>,
    /// Source moments `(F(zeta), phi_c)_T`, `n` per element.
    pub source: Vec<f64>,
}

impl std::fmt::Debug for Discretization<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Discretization")
            .field("k", &self.k)
            .field("tau", &self.tau)
            .field("elements", &self.tri.num_elements())
            .field("faces", &self.tri.num_faces())
            .finish()
    }
}

/// Local faces of element `e` in the global face orientation.
pub fn local_faces(tri: &Triangulation, e: usize) -> [LocalFace; 3] {
    std::array::from_fn(|i| {
        let f = tri.element_faces[e][i];
        LocalFace {
            edge: tri.face_geometry(f),
            sign: tri.normal_sign(f, e),
        }
    })
}

impl<'a> Discretization<'a> {
    pub fn new(
        tri: &'a Triangulation,
        tmap: &'a TransferMap,
        problem: &'a CurvedProblem,
        k: usize,
        tau: f64,
    ) -> Result<Self> {
        if k == 0 {
            return Err(HdgError::Config("polynomial degree must be at least 1".into()));
        }
        if tmap.rule.len() < k + 1 {
            return Err(HdgError::Config(format!(
                "transfer map has {} boundary nodes per face, need at least {}",
                tmap.rule.len(),
                k + 1
            )));
        }
        let quad = QuadratureSet::new(k);
        let basis = RefBasis::new(k);
        let kappa = |x: Point| problem.kappa(x);
        let locals = (0..tri.num_elements())
            .map(|e| local_solver(tri.element_geometry(e), &local_faces(tri, e), &kappa, tau, &basis, &quad, e))
            .collect::<Result<Vec<_>>>()?;

        let mut boundary = vec![None; tri.num_faces()];
        for ft in &tmap.faces {
            boundary[ft.face] = Some(boundary_coupling(tri, tmap, problem, &basis, &quad, ft.face));
        }

        let table = quad
            .triangle
            .points
            .iter()
            .map(|p| {
                let mut v = vec![0.0; basis.len()];
                basis.eval_into(p[0], p[1], &mut v);
                v
            })
            .collect();

        let matrix = skeleton_matrix(tri, &locals, &boundary, k)?;
        let lu = matrix
            .sp_lu()
            .map_err(|e| HdgError::SolveFailure(format!("sparse LU: {e:?}")))?;
        Ok(Self {
            tri,
            tmap,
            problem,
            k,
            tau,
            quad,
            basis,
            locals,
            boundary,
            matrix,
            lu,
            table,
        })
    }

    pub fn n_local(&self) -> usize {
        self.basis.len()
    }

    pub fn n_trace(&self) -> usize {
        self.k + 1
    }

    pub fn n_dofs(&self) -> usize {
        self.tri.num_faces() * self.n_trace()
    }

    pub fn element_basis(&self, e: usize) -> ElementBasis<'_> {
        ElementBasis::new(self.tri.element_geometry(e), &self.basis)
    }

    /// Moments `(F(zeta), phi_c)_T` with `zeta` given by `P_k` coefficients
    /// (`None` means `zeta = 0`).
    pub fn source_moments(&self, zeta: Option<&[f64]>) -> Vec<f64> {
        let n = self.n_local();
        let mut out = vec![0.0; n * self.tri.num_elements()];
        for e in 0..self.tri.num_elements() {
            let geom = self.tri.element_geometry(e);
            let scale = 1.0 / geom.det().sqrt();
            let det = geom.det();
            let z = zeta.map(|z| &z[n * e..n * (e + 1)]);
            let b = &mut out[n * e..n * (e + 1)];
            for ((p, w), v) in self.quad.triangle.points.iter().zip(&self.quad.triangle.weights).zip(&self.table) {
                let x = geom.to_physical(*p);
                let zx = z.map_or(0.0, |z| scale * z.iter().zip(v).map(|(a, b)| a * b).sum::<f64>());
                let f = self.problem.source(zx, x) * w * det * scale;
                for c in 0..n {
                    b[c] += f * v[c];
                }
            }
        }
        out
    }

    /// Assembles the right-hand side for the source `F(zeta)`.
    pub fn assemble(&self, zeta: Option<&[f64]>) -> SkeletonSystem<'_, 'a> {
        let source = self.source_moments(zeta);
        self.assemble_with_moments(source)
    }

    pub fn assemble_with_moments(&self, source: Vec<f64>) -> SkeletonSystem<'_, 'a> {
        let n = self.n_local();
        let nf = self.n_trace();
        let mut rhs = vec![0.0; self.n_dofs()];
        for (e, op) in self.locals.iter().enumerate() {
            let b = DVector::from_column_slice(&source[n * e..n * (e + 1)]);
            let contrib = &op.esrc * &b;
            for (i, &f) in self.tri.element_faces[e].iter().enumerate() {
                if self.boundary[f].is_some() {
                    continue;
                }
                for a in 0..nf {
                    rhs[f * nf + a] -= contrib[i * nf + a];
                }
            }
        }
        for (f, bc) in self.boundary.iter().enumerate() {
            let Some(bc) = bc else { continue };
            let op = &self.locals[bc.element];
            let b = DVector::from_column_slice(&source[n * bc.element..n * (bc.element + 1)]);
            let q_src = op.rsrc.rows(0, 2 * n) * b;
            let extra = &bc.flux * q_src;
            for a in 0..nf {
                rhs[f * nf + a] = bc.data[a] + extra[a];
            }
        }
        SkeletonSystem {
            disc: self,
            rhs,
            source,
        }
    }

    /// Recovers `(q, u)` on every element from the traces.
    pub fn recover(&self, uhat: &[f64], source: &[f64]) -> HdgState {
        let n = self.n_local();
        let nf = self.n_trace();
        let mut st = HdgState::zeros(self.k, self.tau, self.tri.num_elements(), self.tri.num_faces());
        st.uhat.copy_from_slice(uhat);
        let mut local = vec![0.0; 3 * nf];
        for (e, op) in self.locals.iter().enumerate() {
            for (i, &f) in self.tri.element_faces[e].iter().enumerate() {
                local[i * nf..(i + 1) * nf].copy_from_slice(&uhat[f * nf..(f + 1) * nf]);
            }
            let x = op.recover(&local, &source[n * e..n * (e + 1)]);
            st.q[2 * n * e..2 * n * (e + 1)].copy_from_slice(&x.as_slice()[..2 * n]);
            st.u[n * e..n * (e + 1)].copy_from_slice(&x.as_slice()[2 * n..]);
        }
        st
    }

    /// Skeleton residual `A uhat - rhs`.
    pub fn residual(&self, system: &SkeletonSystem<'_, '_>, uhat: &[f64]) -> Vec<f64> {
        let mut r: Vec<f64> = system.rhs.iter().map(|v| -v).collect();
        for (col, c) in (0..self.matrix.ncols()).zip(uhat) {
            let rows = self.matrix.row_idx_of_col_raw(col);
            let vals = self.matrix.val_of_col(col);
            for (&row, &v) in rows.iter().zip(vals) {
                r[row] += v * c;
            }
        }
        r
    }

    pub(crate) fn factor(&self) -> &Lu<usize, f64> {
        &self.lu
    }
}

/// Transfer functional and boundary data of boundary face `f`.
fn boundary_coupling(
    tri: &Triangulation,
    tmap: &TransferMap,
    problem: &CurvedProblem,
    reference: &RefBasis,
    quad: &QuadratureSet,
    f: usize,
) -> BoundaryCoupling {
    let ft = tmap.for_face(f).expect("boundary face");
    let k = reference.degree();
    let nf = k + 1;
    let edge = tri.face_geometry(f);
    let basis = ElementBasis::new(tri.element_geometry(ft.element), reference);
    let n = basis.len();
    let mut flux = DMatrix::zeros(nf, 2 * n);
    let mut data = vec![0.0; nf];
    let (mut mu, mut v) = (vec![0.0; nf], vec![0.0; n]);
    for (node, &wt) in ft.nodes.iter().zip(&tmap.rule.weights) {
        let w = wt * edge.length;
        edge.basis(k, node.t, &mut mu);
        let gx = problem.g(node.anchor);
        for a in 0..nf {
            data[a] += w * gx * mu[a];
        }
        if node.length == 0.0 {
            continue;
        }
        for (&s, &ws) in quad.segment.points.iter().zip(&quad.segment.weights) {
            let y = [
                node.x[0] + s * node.length * ft.normal[0],
                node.x[1] + s * node.length * ft.normal[1],
            ];
            basis.eval(y, &mut v);
            let c = node.length * ws / problem.kappa(y);
            for a in 0..nf {
                for d in 0..n {
                    let m = w * mu[a] * c * v[d];
                    flux[(a, d)] += m * ft.normal[0];
                    flux[(a, n + d)] += m * ft.normal[1];
                }
            }
        }
    }
    BoundaryCoupling {
        element: ft.element,
        flux,
        data,
    }
}

fn skeleton_matrix(
    tri: &Triangulation,
    locals: &[LocalOperator],
    boundary: &[Option<BoundaryCoupling>],
    k: usize,
) -> Result<SparseColMat<usize, f64>> {
    let nf = k + 1;
    let size = tri.num_faces() * nf;
    let mut entries: HashMap<(usize, usize), f64> = HashMap::with_capacity(size * 5 * nf);
    for (e, op) in locals.iter().enumerate() {
        let faces = tri.element_faces[e];
        for (i, &fi) in faces.iter().enumerate() {
            if boundary[fi].is_some() {
                continue;
            }
            for (j, &fj) in faces.iter().enumerate() {
                for a in 0..nf {
                    for b in 0..nf {
                        *entries.entry((fi * nf + a, fj * nf + b)).or_insert(0.0) += op.ahat[(i * nf + a, j * nf + b)];
                    }
                }
            }
        }
    }
    for (f, bc) in boundary.iter().enumerate() {
        let Some(bc) = bc else { continue };
        let op = &locals[bc.element];
        let n = op.n;
        let coupling = &bc.flux * op.rhat.rows(0, 2 * n);
        for a in 0..nf {
            *entries.entry((f * nf + a, f * nf + a)).or_insert(0.0) += 1.0;
        }
        for (j, &fj) in tri.element_faces[bc.element].iter().enumerate() {
            for a in 0..nf {
                for b in 0..nf {
                    *entries.entry((f * nf + a, fj * nf + b)).or_insert(0.0) -= coupling[(a, j * nf + b)];
                }
            }
        }
    }
    let mut triplets: Vec<Triplet<usize, usize, f64>> =
        entries.into_iter().map(|((r, c), v)| Triplet::new(r, c, v)).collect();
    triplets.sort_unstable_by_key(|t| (t.col, t.row));
    SparseColMat::try_new_from_triplets(size, size, &triplets)
        .map_err(|e| HdgError::SolveFailure(format!("sparse matrix: {e:?}")))
}

/// Solves the skeleton system and recovers the element fields.
pub fn solve_linearized(system: &SkeletonSystem<'_, '_>) -> Result<HdgState> {
    let disc = system.disc;
    let b = Mat::<f64>::from_fn(system.rhs.len(), 1, |i, _| system.rhs[i]);
    let x = disc.factor().solve(&b);
    let uhat: Vec<f64> = (0..system.rhs.len()).map(|i| x[(i, 0)]).collect();
    if uhat.iter().any(|v| !v.is_finite()) {
        return Err(HdgError::SolveFailure("non-finite trace solution".into()));
    }
    Ok(disc.recover(&uhat, &system.source))
}
