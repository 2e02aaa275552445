//! Quadrature, sparse symmetric matrices, scalar-product matrices and
//! residual vectors.

use rayon::prelude::*;

use crate::mesh::{BoundaryLabel, Mesh};
use crate::model::{Problem, ScalarProductSpec};
use crate::space::{gradient_unchecked, DofMap, FeFunction};
use crate::{Error, Point, Result};

/// Symmetric 6-point rule on triangles, exact for polynomials of degree 4.
/// Barycentric points; weights sum to one and are scaled by the area.
pub const TRIANGLE_POINTS: [[f64; 3]; 6] = {
    const A: f64 = 0.445_948_490_915_964_886_319;
    const B: f64 = 0.091_576_213_509_770_743_460;
    [
        [A, A, 1.0 - 2.0 * A],
        [A, 1.0 - 2.0 * A, A],
        [1.0 - 2.0 * A, A, A],
        [B, B, 1.0 - 2.0 * B],
        [B, 1.0 - 2.0 * B, B],
        [1.0 - 2.0 * B, B, B],
    ]
};

pub const TRIANGLE_WEIGHTS: [f64; 6] = {
    const WA: f64 = 0.223_381_589_678_011_465_944;
    const WB: f64 = 0.109_951_743_655_321_867_389;
    [WA, WA, WA, WB, WB, WB]
};

/// 3-point Gauss rule on `[0, 1]`, exact up to degree 5.
pub const EDGE_POINTS: [f64; 3] = [0.112_701_665_379_258_31, 0.5, 0.887_298_334_620_741_7];
pub const EDGE_WEIGHTS: [f64; 3] = [5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0];

/// Physical location of barycentric coordinates `b` in triangle `t`.
#[inline]
pub fn physical_point(mesh: &Mesh, t: usize, b: [f64; 3]) -> Point {
    let p = mesh.triangle_points(t);
    [
        b[0] * p[0][0] + b[1] * p[1][0] + b[2] * p[2][0],
        b[0] * p[0][1] + b[1] * p[1][1] + b[2] * p[2][1],
    ]
}

/// `int_T g` by the degree-4 rule.
pub fn integrate_triangle(mesh: &Mesh, t: usize, g: impl Fn(Point) -> f64) -> f64 {
    let area = mesh.area(t);
    TRIANGLE_POINTS.iter().zip(TRIANGLE_WEIGHTS).map(|(b, w)| w * g(physical_point(mesh, t, *b))).sum::<f64>() * area
}

/// Compressed sparse rows with both triangles stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSymMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

const PARALLEL_ROWS: usize = 20_000;

impl SparseSymMatrix {
    /// Sums duplicate entries. Every `(i, j, v)` must be mirrored by `(j, i, v)`
    /// for the result to be symmetric; use [`SparseSymMatrix::from_upper`] otherwise.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<SparseSymMatrix> {
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        for &(i, j, _) in &sorted {
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch { expected: n, found: i.max(j) + 1 });
            }
        }
        sorted.sort_by_key(|t| (t.0, t.1));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(sorted.len());
        let mut vals: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *vals.last_mut().expect("entry exists") += v;
            } else {
                cols.push(j);
                vals.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        let m = SparseSymMatrix { n, row_ptr, cols, vals };
        if !m.is_symmetric() {
            return Err(Error::InvalidParameter("triplets do not describe a symmetric matrix".into()));
        }
        Ok(m)
    }

    /// Builds the symmetric matrix from entries with `i <= j`.
    pub fn from_upper(n: usize, upper: &[(usize, usize, f64)]) -> Result<SparseSymMatrix> {
        let mut all = Vec::with_capacity(2 * upper.len());
        for &(i, j, v) in upper {
            if i > j {
                return Err(Error::InvalidParameter(format!("entry ({i}, {j}) is below the diagonal")));
            }
            all.push((i, j, v));
            if i != j {
                all.push((j, i, v));
            }
        }
        SparseSymMatrix::from_triplets(n, &all)
    }

    pub fn identity(n: usize) -> SparseSymMatrix {
        SparseSymMatrix { n, row_ptr: (0..=n).collect(), cols: (0..n).collect(), vals: vec![1.0; n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let row = &self.cols[self.row_ptr[i]..self.row_ptr[i + 1]];
        match row.binary_search(&j) {
            Ok(k) => self.vals[self.row_ptr[i] + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            (self.row_ptr[i]..self.row_ptr[i + 1]).all(|k| self.get(self.cols[k], i) == self.vals[k])
        })
    }

    #[inline]
    fn row_dot(&self, i: usize, x: &[f64]) -> f64 {
        let mut s = 0.0;
        for k in self.row_ptr[i]..self.row_ptr[i + 1] {
            s += self.vals[k] * x[self.cols[k]];
        }
        s
    }

    /// `y = M x`.
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(y.len(), self.n);
        if self.n >= PARALLEL_ROWS {
            y.par_iter_mut().enumerate().for_each(|(i, yi)| *yi = self.row_dot(i, x));
        } else {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi = self.row_dot(i, x);
            }
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        let mut y = vec![0.0; self.n];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// `x^T M x`.
    pub fn quadratic_form(&self, x: &[f64]) -> Result<f64> {
        let y = self.matvec(x)?;
        Ok(dot(x, &y))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, row) in d.iter_mut().enumerate() {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                row[self.cols[k]] = self.vals[k];
            }
        }
        d
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `sqrt(x^T M x)`.
pub fn energy_norm(m: &SparseSymMatrix, x: &[f64]) -> Result<f64> {
    let q = m.quadratic_form(x)?;
    if q < 0.0 {
        return Err(Error::NotPositiveDefinite(format!("x^T M x = {q:e}")));
    }
    Ok(q.sqrt())
}

/// Sparsity of the P1 stiffness matrix on the free dofs, with the position
/// of every local element entry.
#[derive(Clone, Debug)]
pub struct SparsityPattern {
    mesh_id: u64,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    /// `slots[t][3 a + b]`, `usize::MAX` when a vertex is constrained.
    slots: Vec<[usize; 9]>,
}

impl SparsityPattern {
    pub fn new(mesh: &Mesh, dofmap: &DofMap) -> SparsityPattern {
        let n = dofmap.num_free();
        let mut rows: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        for e in mesh.edges() {
            if let (Some(a), Some(b)) = (dofmap.dof(e.v[0]), dofmap.dof(e.v[1])) {
                rows[a].push(b);
                rows[b].push(a);
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        for r in &mut rows {
            r.sort_unstable();
            cols.extend_from_slice(r);
            row_ptr.push(cols.len());
        }
        let slots = mesh
            .triangles()
            .iter()
            .map(|tri| {
                let mut s = [usize::MAX; 9];
                for a in 0..3 {
                    let Some(i) = dofmap.dof(tri.v[a]) else { continue };
                    for b in 0..3 {
                        let Some(j) = dofmap.dof(tri.v[b]) else { continue };
                        let row = &cols[row_ptr[i]..row_ptr[i + 1]];
                        let k = row.binary_search(&j).expect("edge of a triangle is in the pattern");
                        s[3 * a + b] = row_ptr[i] + k;
                    }
                }
                s
            })
            .collect();
        SparsityPattern { mesh_id: mesh.id(), row_ptr, cols, slots }
    }

    /// `sum_T c_T int_T grad phi_j . grad phi_i` for elementwise constants `c_T`.
    pub fn stiffness(&self, mesh: &Mesh, coefficients: &[f64]) -> Result<SparseSymMatrix> {
        if mesh.id() != self.mesh_id {
            return Err(Error::MeshMismatch { expected: self.mesh_id, found: mesh.id() });
        }
        if coefficients.len() != mesh.num_triangles() {
            return Err(Error::DimensionMismatch { expected: mesh.num_triangles(), found: coefficients.len() });
        }
        let mut vals = vec![0.0; self.cols.len()];
        for (t, slots) in self.slots.iter().enumerate() {
            let g = mesh.geometry(t);
            let c = coefficients[t] * g.area;
            for a in 0..3 {
                for b in 0..3 {
                    let s = slots[3 * a + b];
                    if s != usize::MAX {
                        vals[s] += c * (g.grads[a][0] * g.grads[b][0] + g.grads[a][1] * g.grads[b][1]);
                    }
                }
            }
        }
        Ok(SparseSymMatrix { n: self.row_ptr.len() - 1, row_ptr: self.row_ptr.clone(), cols: self.cols.clone(), vals })
    }
}

/// The diffusion coefficient `A` of a scalar product.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Unit,
    /// `mu(|grad u*|^2)`, varying inside elements.
    Exact,
    /// One value per triangle.
    Elementwise(Vec<f64>),
}

impl Coefficient {
    pub fn value(&self, problem: &Problem, t: usize, p: Point) -> Result<f64> {
        match self {
            Coefficient::Unit => Ok(1.0),
            Coefficient::Exact => problem.exact_weight(p),
            Coefficient::Elementwise(c) => Ok(c[t]),
        }
    }

    /// Elementwise gradient of `A`; zero unless `A` varies inside elements.
    pub fn gradient(&self, problem: &Problem, p: Point) -> Result<Point> {
        match self {
            Coefficient::Exact => problem.exact_weight_gradient(p),
            _ => Ok([0.0, 0.0]),
        }
    }

    pub fn is_elementwise_constant(&self) -> bool {
        !matches!(self, Coefficient::Exact)
    }
}

/// A scalar product `a(v, w) = (A grad v, grad w)` on the free dofs.
#[derive(Clone, Debug)]
pub struct ScalarProduct {
    pub spec: ScalarProductSpec,
    pub coefficient: Coefficient,
    pub matrix: SparseSymMatrix,
}

impl ScalarProduct {
    pub fn norm(&self, free_values: &[f64]) -> Result<f64> {
        energy_norm(&self.matrix, free_values)
    }
}

/// Elementwise coefficient for the matrix: the mean of `A` over each triangle.
fn element_means(mesh: &Mesh, problem: &Problem, spec: ScalarProductSpec, w: Option<&FeFunction>) -> Result<(Coefficient, Vec<f64>)> {
    match spec {
        ScalarProductSpec::H1 => Ok((Coefficient::Unit, vec![1.0; mesh.num_triangles()])),
        ScalarProductSpec::WeightedExact => {
            if problem.exact.is_none() {
                return Err(Error::MissingExactSolution);
            }
            let means = (0..mesh.num_triangles())
                .into_par_iter()
                .map(|t| {
                    let mut s = 0.0;
                    for (b, wq) in TRIANGLE_POINTS.iter().zip(TRIANGLE_WEIGHTS) {
                        s += wq * problem.exact_weight(physical_point(mesh, t, *b))?;
                    }
                    Ok(s)
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok((Coefficient::Exact, means))
        }
        ScalarProductSpec::WeightedIterate => {
            let w = w.ok_or_else(|| Error::InvalidParameter("the iterate-weighted product needs the current iterate".into()))?;
            w.check_mesh(mesh)?;
            let n = &problem.nonlinearity;
            let c: Vec<f64> = (0..mesh.num_triangles())
                .map(|t| {
                    let g = gradient_unchecked(mesh, w.coefficients(), t);
                    n.mu(g[0] * g[0] + g[1] * g[1])
                })
                .collect();
            Ok((Coefficient::Elementwise(c.clone()), c))
        }
    }
}

/// Scalar-product matrix `M_ij = int A grad phi_j . grad phi_i` on the free dofs,
/// reusing a precomputed pattern.
pub fn assemble_scalar_product_with(
    pattern: &SparsityPattern,
    mesh: &Mesh,
    problem: &Problem,
    spec: ScalarProductSpec,
    w: Option<&FeFunction>,
) -> Result<ScalarProduct> {
    let (coefficient, means) = element_means(mesh, problem, spec, w)?;
    let matrix = pattern.stiffness(mesh, &means)?;
    Ok(ScalarProduct { spec, coefficient, matrix })
}

/// Scalar-product matrix `M_ij = int A grad phi_j . grad phi_i` on the free dofs.
/// `w` is the current iterate and is required for the iterate-weighted product.
pub fn assemble_scalar_product(
    mesh: &Mesh,
    dofmap: &DofMap,
    problem: &Problem,
    spec: ScalarProductSpec,
    w: Option<&FeFunction>,
) -> Result<ScalarProduct> {
    assemble_scalar_product_with(&SparsityPattern::new(mesh, dofmap), mesh, problem, spec, w)
}

fn scatter(dofmap: &DofMap, mesh: &Mesh, local: &[[f64; 3]]) -> Vec<f64> {
    let mut b = vec![0.0; dofmap.num_free()];
    for (tri, l) in mesh.triangles().iter().zip(local) {
        for a in 0..3 {
            if let Some(i) = dofmap.dof(tri.v[a]) {
                b[i] += l[a];
            }
        }
    }
    b
}

/// `<F, phi_i> = int f phi_i + int fvec . grad phi_i + int_{Gamma_N} phi_N phi_i`.
pub fn assemble_load(mesh: &Mesh, dofmap: &DofMap, problem: &Problem) -> Vec<f64> {
    let local: Vec<[f64; 3]> = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| {
            let g = mesh.geometry(t);
            let mut l = [0.0; 3];
            for (b, wq) in TRIANGLE_POINTS.iter().zip(TRIANGLE_WEIGHTS) {
                let x = physical_point(mesh, t, *b);
                let f = (problem.source)(x);
                let fv = problem.flux_source_at(x);
                for a in 0..3 {
                    l[a] += wq * g.area * (f * b[a] + fv[0] * g.grads[a][0] + fv[1] * g.grads[a][1]);
                }
            }
            l
        })
        .collect();
    let mut b = scatter(dofmap, mesh, &local);
    if let Some(phi) = &problem.neumann {
        for e in mesh.edges().iter().filter(|e| e.label == BoundaryLabel::Neumann) {
            let (t, local) = e.triangles[0].expect("edge has a triangle");
            let g = mesh.geometry(t);
            let tri = mesh.triangles()[t];
            let (ia, ib) = ((local + 1) % 3, (local + 2) % 3);
            let (pa, pb) = (mesh.vertices()[tri.v[ia]], mesh.vertices()[tri.v[ib]]);
            let (mut ca, mut cb) = (0.0, 0.0);
            for (s, wq) in EDGE_POINTS.iter().zip(EDGE_WEIGHTS) {
                let x = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
                let val = wq * g.edge_lengths[local] * phi(x, g.normals[local]);
                ca += val * (1.0 - s);
                cb += val * s;
            }
            if let Some(i) = dofmap.dof(tri.v[ia]) {
                b[i] += ca;
            }
            if let Some(i) = dofmap.dof(tri.v[ib]) {
                b[i] += cb;
            }
        }
    }
    b
}

/// `<A w, phi_i> = int mu(|grad w|^2) grad w . grad phi_i`.
pub fn apply_operator(mesh: &Mesh, dofmap: &DofMap, problem: &Problem, w: &FeFunction) -> Result<Vec<f64>> {
    w.check_mesh(mesh)?;
    let local: Vec<[f64; 3]> = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| {
            let g = mesh.geometry(t);
            let flux = problem.nonlinearity.flux(gradient_unchecked(mesh, w.coefficients(), t));
            let mut l = [0.0; 3];
            for a in 0..3 {
                l[a] = g.area * (flux[0] * g.grads[a][0] + flux[1] * g.grads[a][1]);
            }
            l
        })
        .collect();
    Ok(scatter(dofmap, mesh, &local))
}

/// `<F - A w, phi_i>` on the free dofs.
pub fn assemble_residual(mesh: &Mesh, dofmap: &DofMap, problem: &Problem, w: &FeFunction) -> Result<Vec<f64>> {
    let mut b = assemble_load(mesh, dofmap, problem);
    let aw = apply_operator(mesh, dofmap, problem, w)?;
    for (bi, ai) in b.iter_mut().zip(aw) {
        *bi -= ai;
    }
    Ok(b)
}

/// `||grad(u* - u)||_{L^2}` by element quadrature.
pub fn h1_error(mesh: &Mesh, problem: &Problem, u: &FeFunction) -> Result<f64> {
    u.check_mesh(mesh)?;
    let exact = problem.exact.as_ref().ok_or(Error::MissingExactSolution)?;
    let sum: f64 = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| {
            let gh = gradient_unchecked(mesh, u.coefficients(), t);
            integrate_triangle(mesh, t, |x| {
                let g = (exact.gradient)(x);
                (g[0] - gh[0]).powi(2) + (g[1] - gh[1]).powi(2)
            })
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok(sum.sqrt())
}

/// `||grad v||_{L^2}`.
pub fn gradient_norm(mesh: &Mesh, v: &FeFunction) -> Result<f64> {
    v.check_mesh(mesh)?;
    let s: f64 = (0..mesh.num_triangles())
        .map(|t| {
            let g = gradient_unchecked(mesh, v.coefficients(), t);
            mesh.area(t) * (g[0] * g[0] + g[1] * g[1])
        })
        .sum();
    Ok(s.sqrt())
}
