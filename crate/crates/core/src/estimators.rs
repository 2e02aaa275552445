//! Residual estimator `eta` of the nonlinear problem and the reconstruction
//! estimator `zeta` of the linearized update problem.
//!
//! Both share one elementwise routine: with the discrete flux
//! `sigma = A grad z + mu(|grad w|^2) grad w - fvec`,
//!
//! ```text
//! ind(T)^2 = |T|     ||grad A . grad z + f||^2_T
//!          + |T|^1/2 ||[sigma . n]||^2_{dT interior}
//!          + |T|^1/2 ||phi_N - sigma . n||^2_{dT Neumann}
//! ```
//!
//! and `eta(w) = zeta(w, 0)`. Interior jumps are charged in full to both
//! neighbours. `fvec` is sampled at the centroid and must be elementwise
//! constant.

use rayon::prelude::*;

use crate::assembly::{physical_point, Coefficient, EDGE_POINTS, EDGE_WEIGHTS, TRIANGLE_POINTS, TRIANGLE_WEIGHTS};
use crate::mesh::{BoundaryLabel, Mesh};
use crate::model::{Problem, ScalarProductSpec};
use crate::space::{gradient_unchecked, FeFunction};
use crate::{Error, Point, Result};

/// Squared elementwise indicators.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorField {
    entries: Vec<f64>,
}

impl IndicatorField {
    pub fn new(entries: Vec<f64>) -> Result<IndicatorField> {
        if let Some(i) = entries.iter().position(|e| !(*e >= 0.0) || !e.is_finite()) {
            return Err(Error::InvalidParameter(format!("indicator {i} is {}", entries[i])));
        }
        Ok(IndicatorField { entries })
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_squared(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn total(&self) -> f64 {
        self.total_squared().sqrt()
    }

    /// `sqrt(sum_{T in subset} ind(T)^2)`.
    pub fn restrict_total(&self, subset: &[usize]) -> f64 {
        subset.iter().map(|&t| self.entries[t]).sum::<f64>().sqrt()
    }
}

/// Elementwise data entering the discrete flux.
struct Fluxes {
    /// `mu(|grad w|^2) grad w - fvec` per triangle.
    base: Vec<Point>,
    /// `grad z` per triangle, absent for `eta`.
    grad_z: Option<Vec<Point>>,
}

fn compute_indicators(
    mesh: &Mesh,
    problem: &Problem,
    coefficient: &Coefficient,
    w: &FeFunction,
    z: Option<&FeFunction>,
) -> Result<IndicatorField> {
    w.check_mesh(mesh)?;
    if let Some(z) = z {
        z.check_mesh(mesh)?;
    }
    if let Coefficient::Elementwise(c) = coefficient {
        if c.len() != mesh.num_triangles() {
            return Err(Error::DimensionMismatch { expected: mesh.num_triangles(), found: c.len() });
        }
    }
    if matches!(coefficient, Coefficient::Exact) && z.is_some() && problem.exact.is_none() {
        return Err(Error::MissingExactSolution);
    }
    let n = &problem.nonlinearity;
    let fluxes = Fluxes {
        base: (0..mesh.num_triangles())
            .map(|t| {
                let fl = n.flux(gradient_unchecked(mesh, w.coefficients(), t));
                let fv = problem.flux_source_at(mesh.centroid(t));
                [fl[0] - fv[0], fl[1] - fv[1]]
            })
            .collect(),
        grad_z: z.map(|z| (0..mesh.num_triangles()).map(|t| gradient_unchecked(mesh, z.coefficients(), t)).collect()),
    };
    let sigma = |t: usize, x: Point| -> Result<Point> {
        let b = fluxes.base[t];
        match &fluxes.grad_z {
            None => Ok(b),
            Some(gz) => {
                let a = coefficient.value(problem, t, x)?;
                Ok([a * gz[t][0] + b[0], a * gz[t][1] + b[1]])
            }
        }
    };
    let entries = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| {
            let g = mesh.geometry(t);
            let tri = mesh.triangles()[t];
            let mut volume = 0.0;
            for (bq, wq) in TRIANGLE_POINTS.iter().zip(TRIANGLE_WEIGHTS) {
                let x = physical_point(mesh, t, *bq);
                let mut r = (problem.source)(x);
                if let (Some(gz), false) = (&fluxes.grad_z, coefficient.is_elementwise_constant()) {
                    let ga = coefficient.gradient(problem, x)?;
                    r += ga[0] * gz[t][0] + ga[1] * gz[t][1];
                }
                volume += wq * r * r;
            }
            volume *= g.area * g.area;

            let mut edges = 0.0;
            for (local, &e) in mesh.triangle_edges(t).iter().enumerate() {
                let edge = &mesh.edges()[e];
                if edge.label == BoundaryLabel::Dirichlet {
                    continue;
                }
                let neighbour = edge.other(t).map(|(s, _)| s);
                let nrm = g.normals[local];
                let pa = mesh.vertices()[tri.v[(local + 1) % 3]];
                let pb = mesh.vertices()[tri.v[(local + 2) % 3]];
                let mut s2 = 0.0;
                for (s, wq) in EDGE_POINTS.iter().zip(EDGE_WEIGHTS) {
                    let x = [pa[0] + s * (pb[0] - pa[0]), pa[1] + s * (pb[1] - pa[1])];
                    let own = sigma(t, x)?;
                    let jump = match neighbour {
                        Some(other) => {
                            let o = sigma(other, x)?;
                            (own[0] - o[0]) * nrm[0] + (own[1] - o[1]) * nrm[1]
                        }
                        None => {
                            let phi = problem.neumann.as_ref().map_or(0.0, |phi| phi(x, nrm));
                            phi - (own[0] * nrm[0] + own[1] * nrm[1])
                        }
                    };
                    s2 += wq * jump * jump;
                }
                edges += g.edge_lengths[local] * s2;
            }
            Ok(volume + g.area.sqrt() * edges)
        })
        .collect::<Result<Vec<f64>>>()?;
    IndicatorField::new(entries)
}

/// `eta(T, v)^2` for every triangle.
pub fn eta_indicators(mesh: &Mesh, problem: &Problem, v: &FeFunction) -> Result<IndicatorField> {
    compute_indicators(mesh, problem, &Coefficient::Unit, v, None)
}

/// `zeta(w; T, z)^2` for every triangle, with the diffusion coefficient of
/// the scalar product: for the iterate-weighted product it is taken from `w`.
pub fn zeta_indicators(
    mesh: &Mesh,
    problem: &Problem,
    spec: ScalarProductSpec,
    w: &FeFunction,
    z: &FeFunction,
) -> Result<IndicatorField> {
    let coefficient = match spec {
        ScalarProductSpec::H1 => Coefficient::Unit,
        ScalarProductSpec::WeightedExact => Coefficient::Exact,
        ScalarProductSpec::WeightedIterate => {
            w.check_mesh(mesh)?;
            Coefficient::Elementwise(
                (0..mesh.num_triangles())
                    .map(|t| {
                        let g = gradient_unchecked(mesh, w.coefficients(), t);
                        problem.nonlinearity.mu(g[0] * g[0] + g[1] * g[1])
                    })
                    .collect(),
            )
        }
    };
    zeta_indicators_with(mesh, problem, &coefficient, w, z)
}

/// As [`zeta_indicators`] with an explicit coefficient.
pub fn zeta_indicators_with(
    mesh: &Mesh,
    problem: &Problem,
    coefficient: &Coefficient,
    w: &FeFunction,
    z: &FeFunction,
) -> Result<IndicatorField> {
    compute_indicators(mesh, problem, coefficient, w, Some(z))
}
