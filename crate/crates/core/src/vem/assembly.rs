//! Global DOF numbering, assembly, boundary conditions and the linear solve.

use alloc::collections::BTreeMap;

use nalgebra::DVector;

use super::local::{build_local, LocalData, Stabilization};
use crate::geometry::Point;
use crate::linalg::{CsrMatrix, SolverKind, SpdSolver};
use crate::mesh::Mesh;
use crate::prelude::*;
use crate::{Error, Result};

/// Global numbering: all vertex DOFs first (indexed like the mesh vertices),
/// then `k - 1` DOFs per unique edge oriented from the smaller to the larger
/// vertex index, then the moment DOFs of each element.
#[derive(Debug, Clone)]
pub struct DofMap {
    pub k: usize,
    pub count: usize,
    /// Local-to-global index list of each element.
    pub elements: Vec<Vec<usize>>,
    pub boundary: Vec<bool>,
    /// Position of each vertex/edge DOF (moment DOFs have none).
    pub positions: Vec<Option<Point>>,
}

impl DofMap {
    pub fn new(mesh: &Mesh, locals: &[LocalData]) -> Self {
        let k = locals.first().map_or(1, |l| l.k);
        let nv = mesh.num_vertices();
        let edges = mesh.edges();
        let mut edge_base = BTreeMap::new();
        let mut count = nv;
        let mut boundary: Vec<bool> = mesh.boundary.clone();
        let mut positions: Vec<Option<Point>> = mesh.vertices.iter().map(|&p| Some(p)).collect();
        for (&key, &owners) in &edges {
            edge_base.insert(key, count);
            count += k - 1;
            boundary.extend(core::iter::repeat_n(owners == 1, k - 1));
            positions.extend(core::iter::repeat_n(None, k - 1));
        }
        let n_int = k * (k - 1) / 2;
        let mut elements = Vec::with_capacity(mesh.num_elements());
        for (el, loc) in mesh.elements.iter().zip(locals) {
            let ns = el.len();
            let mut map = Vec::with_capacity(loc.dof_count());
            map.extend_from_slice(el);
            for e in 0..ns {
                let (a, b) = (el[e], el[(e + 1) % ns]);
                let base = edge_base[&(a.min(b), a.max(b))];
                for j in 1..k {
                    let g = if a < b { base + j - 1 } else { base + k - 1 - j };
                    map.push(g);
                    positions[g] = Some(loc.nodes[ns + e * (k - 1) + j - 1]);
                }
            }
            for _ in 0..n_int {
                map.push(count);
                count += 1;
                boundary.push(false);
                positions.push(None);
            }
            elements.push(map);
        }
        Self {
            k,
            count,
            elements,
            boundary,
            positions,
        }
    }

    pub fn num_free(&self) -> usize {
        self.boundary.iter().filter(|&&b| !b).count()
    }
}

/// Solver settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VemConfig {
    pub k: usize,
    pub stabilization: Stabilization,
    pub solver: SolverKind,
    pub cg_tol: f64,
}

impl Default for VemConfig {
    fn default() -> Self {
        Self {
            k: 1,
            stabilization: Stabilization::DRecipe,
            solver: SolverKind::Auto,
            cg_tol: 1e-12,
        }
    }
}

/// Builds every element's local data, tagging failures with the element id.
pub fn build_locals(mesh: &Mesh, k: usize) -> Result<Vec<LocalData>> {
    if mesh.elements.is_empty() {
        return Err(Error::EmptyMesh);
    }
    (0..mesh.num_elements())
        .map(|e| {
            build_local(&mesh.polygon(e), k).map_err(|err| match err {
                Error::ElementConditioning { cond, .. } => Error::ElementConditioning { element: e, cond },
                other => other,
            })
        })
        .collect()
}

/// The assembled discrete problem.
#[derive(Debug, Clone)]
pub struct Discretization {
    pub config: VemConfig,
    pub locals: Vec<LocalData>,
    pub dofs: DofMap,
    /// Full stiffness `a_h` over all DOFs (boundary included).
    pub stiffness: CsrMatrix,
    pub load: Vec<f64>,
    /// Global indices of the unknowns, in reduced-system order.
    pub free: Vec<usize>,
    /// Stiffness restricted to the free DOFs: the matrix actually solved.
    pub reduced: CsrMatrix,
}

impl Discretization {
    pub fn new<F: Fn(Point) -> f64>(mesh: &Mesh, config: VemConfig, f: F) -> Result<Self> {
        let locals = build_locals(mesh, config.k)?;
        let dofs = DofMap::new(mesh, &locals);
        let mut triplets = Vec::new();
        let mut load = vec![0.0; dofs.count];
        for (e, loc) in locals.iter().enumerate() {
            let poly = mesh.polygon(e);
            let k = loc.stiffness(config.stabilization);
            let fl = loc.load(&poly, &f);
            let map = &dofs.elements[e];
            for (i, &gi) in map.iter().enumerate() {
                load[gi] += fl[i];
                for (j, &gj) in map.iter().enumerate() {
                    triplets.push((gi, gj, k[(i, j)]));
                }
            }
        }
        let stiffness = CsrMatrix::from_triplets(dofs.count, &triplets);
        let free: Vec<usize> = (0..dofs.count).filter(|&i| !dofs.boundary[i]).collect();
        let mut reduced_index = vec![usize::MAX; dofs.count];
        for (r, &g) in free.iter().enumerate() {
            reduced_index[g] = r;
        }
        let reduced_triplets: Vec<_> = free
            .iter()
            .enumerate()
            .flat_map(|(r, &g)| {
                let ri = &reduced_index;
                stiffness.row(g).filter_map(move |(j, v)| (ri[j] != usize::MAX).then_some((r, ri[j], v)))
            })
            .collect();
        let reduced = CsrMatrix::from_triplets(free.len(), &reduced_triplets);
        Ok(Self {
            config,
            locals,
            dofs,
            stiffness,
            load,
            free,
            reduced,
        })
    }

    /// Factors (or preconditions) the reduced matrix per the configuration.
    pub fn solver(&self) -> Result<SpdSolver<'_>> {
        SpdSolver::new(&self.reduced, self.config.solver, self.config.cg_tol)
    }

    /// Solves with Dirichlet data `g`, imposed by setting every boundary DOF
    /// to the value of `g` at its node and moving the lifting to the right
    /// hand side.
    pub fn solve<G: Fn(Point) -> f64>(&self, g: G) -> Result<Solution> {
        if self.free.is_empty() {
            return Ok(Solution {
                u: self.lifting(g),
                iterations: 0,
                direct: true,
            });
        }
        self.solve_with(&self.solver()?, g)
    }

    pub fn solve_with<G: Fn(Point) -> f64>(&self, solver: &SpdSolver<'_>, g: G) -> Result<Solution> {
        let mut u = self.lifting(g);
        let lift = self.stiffness.mul_vec(&u);
        let rhs: Vec<f64> = self.free.iter().map(|&i| self.load[i] - lift[i]).collect();
        let (x, iterations) = solver.solve(&rhs)?;
        for (&i, v) in self.free.iter().zip(x) {
            u[i] = v;
        }
        Ok(Solution {
            u,
            iterations,
            direct: solver.is_direct(),
        })
    }

    fn lifting<G: Fn(Point) -> f64>(&self, g: G) -> Vec<f64> {
        let mut u = vec![0.0; self.dofs.count];
        for (i, &b) in self.dofs.boundary.iter().enumerate() {
            if b {
                u[i] = g(self.dofs.positions[i].expect("boundary DOFs are vertex or edge DOFs"));
            }
        }
        u
    }

    /// Global interpolant `u_I`: nodal values plus element moments.
    pub fn interpolate<U: Fn(Point) -> f64>(&self, mesh: &Mesh, u: U) -> Vec<f64> {
        let mut out = vec![0.0; self.dofs.count];
        for (e, loc) in self.locals.iter().enumerate() {
            let vi = loc.interpolate(&mesh.polygon(e), &u);
            for (&g, v) in self.dofs.elements[e].iter().zip(vi.iter()) {
                out[g] = *v;
            }
        }
        out
    }

    /// `a_h(v, w)` with the assembled stiffness.
    pub fn energy(&self, v: &[f64], w: &[f64]) -> f64 {
        self.stiffness.mul_vec(w).iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Local DOF vector of element `e`.
    pub fn local_dofs(&self, e: usize, global: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.dofs.elements[e].len(), self.dofs.elements[e].iter().map(|&g| global[g]))
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub u: Vec<f64>,
    pub iterations: usize,
    pub direct: bool,
}
