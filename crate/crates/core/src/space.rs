//! Lowest-order Lagrange space on a [`Mesh`].
//!
//! Functions carry one coefficient per vertex. Vertices on Dirichlet edges are
//! constrained; the linear algebra only sees the free ones through a
//! [`DofMap`].

use crate::mesh::Mesh;
use crate::{Error, Point, Result};

#[derive(Clone, Debug)]
pub struct DofMap {
    dofs: Vec<Option<usize>>,
    free: Vec<usize>,
}

impl DofMap {
    /// Constrains exactly the endpoints of Dirichlet edges.
    pub fn new(mesh: &Mesh) -> Result<DofMap> {
        let constrained = mesh.dirichlet_vertices();
        let mut dofs = vec![None; mesh.num_vertices()];
        let mut free = Vec::new();
        for (v, &c) in constrained.iter().enumerate() {
            if !c {
                dofs[v] = Some(free.len());
                free.push(v);
            }
        }
        if free.is_empty() {
            return Err(Error::EmptySpace);
        }
        Ok(DofMap { dofs, free })
    }

    pub fn num_free(&self) -> usize {
        self.free.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.dofs.len()
    }

    /// Free-dof index of vertex `v`, `None` if constrained.
    pub fn dof(&self, v: usize) -> Option<usize> {
        self.dofs[v]
    }

    pub fn is_constrained(&self, v: usize) -> bool {
        self.dofs[v].is_none()
    }

    /// Vertex of free dof `i`.
    pub fn vertex(&self, i: usize) -> usize {
        self.free[i]
    }

    /// Free-dof values of a vertex vector.
    pub fn restrict(&self, values: &[f64]) -> Vec<f64> {
        self.free.iter().map(|&v| values[v]).collect()
    }

    /// Vertex vector with constrained entries set to zero.
    pub fn extend(&self, free_values: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dofs.len()];
        for (&v, &x) in self.free.iter().zip(free_values) {
            out[v] = x;
        }
        out
    }
}

/// A continuous piecewise-linear function, one coefficient per vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct FeFunction {
    mesh_id: u64,
    coeffs: Vec<f64>,
}

impl FeFunction {
    pub fn zeros(mesh: &Mesh) -> FeFunction {
        FeFunction { mesh_id: mesh.id(), coeffs: vec![0.0; mesh.num_vertices()] }
    }

    pub fn from_coefficients(mesh: &Mesh, coeffs: Vec<f64>) -> Result<FeFunction> {
        if coeffs.len() != mesh.num_vertices() {
            return Err(Error::DimensionMismatch { expected: mesh.num_vertices(), found: coeffs.len() });
        }
        Ok(FeFunction { mesh_id: mesh.id(), coeffs })
    }

    /// Nodal interpolant of `g`.
    pub fn interpolate<G: Fn(Point) -> f64>(mesh: &Mesh, g: G) -> FeFunction {
        FeFunction { mesh_id: mesh.id(), coeffs: mesh.vertices().iter().map(|&p| g(p)).collect() }
    }

    /// Builds a function from free-dof values; constrained vertices get 0.
    pub fn from_free(mesh: &Mesh, dofmap: &DofMap, free: &[f64]) -> FeFunction {
        FeFunction { mesh_id: mesh.id(), coeffs: dofmap.extend(free) }
    }

    pub fn mesh_id(&self) -> u64 {
        self.mesh_id
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coefficients_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn free_values(&self, dofmap: &DofMap) -> Vec<f64> {
        dofmap.restrict(&self.coeffs)
    }

    /// Sets every constrained coefficient to zero.
    pub fn pin(&mut self, dofmap: &DofMap) {
        for (v, c) in self.coeffs.iter_mut().enumerate() {
            if dofmap.is_constrained(v) {
                *c = 0.0;
            }
        }
    }

    /// `self + factor * other`.
    pub fn axpy(&self, factor: f64, other: &FeFunction) -> Result<FeFunction> {
        if self.mesh_id != other.mesh_id {
            return Err(Error::MeshMismatch { expected: self.mesh_id, found: other.mesh_id });
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + factor * b).collect();
        Ok(FeFunction { mesh_id: self.mesh_id, coeffs })
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub(crate) fn check_mesh(&self, mesh: &Mesh) -> Result<()> {
        if self.mesh_id != mesh.id() {
            return Err(Error::MeshMismatch { expected: mesh.id(), found: self.mesh_id });
        }
        Ok(())
    }
}

/// Transfers a function to a mesh obtained from its own mesh by NVB
/// refinement. New vertices are edge midpoints, so their value is the mean of
/// the two edge endpoints and the function is reproduced exactly.
pub fn prolongate(f: &FeFunction, fine: &Mesh) -> Result<FeFunction> {
    let coarse_count = fine
        .ancestor_vertex_count(f.mesh_id)
        .ok_or(Error::MeshMismatch { expected: fine.id(), found: f.mesh_id })?;
    if coarse_count != f.coeffs.len() {
        return Err(Error::DimensionMismatch { expected: coarse_count, found: f.coeffs.len() });
    }
    let mut coeffs = Vec::with_capacity(fine.num_vertices());
    coeffs.extend_from_slice(&f.coeffs);
    for v in coarse_count..fine.num_vertices() {
        let [a, b] = fine.vertex_parents(v).expect("refined vertices have parents");
        coeffs.push(0.5 * (coeffs[a] + coeffs[b]));
    }
    Ok(FeFunction { mesh_id: fine.id(), coeffs })
}

/// Constant gradient of `f` on triangle `t`.
pub fn element_gradient(mesh: &Mesh, f: &FeFunction, t: usize) -> Result<Point> {
    f.check_mesh(mesh)?;
    if t >= mesh.num_triangles() {
        return Err(Error::InvalidParameter(format!("triangle index {t} out of range")));
    }
    let g = mesh.geometry(t);
    if !(g.area > 0.0) || !g.area.is_finite() {
        return Err(Error::DegenerateTriangle(t));
    }
    Ok(gradient_unchecked(mesh, &f.coeffs, t))
}

#[inline]
pub(crate) fn gradient_unchecked(mesh: &Mesh, coeffs: &[f64], t: usize) -> Point {
    let g = mesh.geometry(t);
    let v = mesh.triangles()[t].v;
    let mut grad = [0.0; 2];
    for i in 0..3 {
        grad[0] += coeffs[v[i]] * g.grads[i][0];
        grad[1] += coeffs[v[i]] * g.grads[i][1];
    }
    grad
}

/// Gradients of `f` on every triangle.
pub fn gradients(mesh: &Mesh, f: &FeFunction) -> Result<Vec<Point>> {
    f.check_mesh(mesh)?;
    Ok((0..mesh.num_triangles()).map(|t| gradient_unchecked(mesh, &f.coeffs, t)).collect())
}

/// Point value by barycentric interpolation on the containing triangle.
pub fn evaluate(mesh: &Mesh, f: &FeFunction, p: Point) -> Result<f64> {
    f.check_mesh(mesh)?;
    let (t, b) = mesh.locate(p).ok_or(Error::PointOutside(p[0], p[1]))?;
    Ok(evaluate_in(mesh, f, t, b))
}

/// Value at barycentric coordinates `b` of triangle `t`.
pub fn evaluate_in(mesh: &Mesh, f: &FeFunction, t: usize, b: [f64; 3]) -> f64 {
    let v = mesh.triangles()[t].v;
    b[0] * f.coeffs[v[0]] + b[1] * f.coeffs[v[1]] + b[2] * f.coeffs[v[2]]
}
