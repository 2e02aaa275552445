//! The adaptive loop: damped Zarantonello steps on each mesh until the update
//! is dominated by the reconstruction estimator, Dörfler marking, NVB
//! refinement and nested iteration.

use std::fmt;
use std::time::Instant;

use crate::assembly::{
    apply_operator, assemble_load, assemble_scalar_product_with, h1_error, ScalarProduct, SparseSymMatrix,
    SparsityPattern,
};
use crate::estimators::{eta_indicators, zeta_indicators_with, IndicatorField};
use crate::mesh::Mesh;
use crate::model::{Problem, ScalarProductSpec};
use crate::solver::solve_spd;
use crate::space::{prolongate, DofMap, FeFunction};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct AdaptiveParams {
    /// Bulk parameter in `(0, 1]`; `1` refines uniformly.
    pub theta: f64,
    /// Balancing parameter of the stopping criterion `||z|| <= lambda zeta`.
    pub lambda: f64,
    pub delta: f64,
    pub scalar_product: ScalarProductSpec,
    /// The run stops after the first level with more free dofs than this.
    pub max_dofs: usize,
    pub max_inner: usize,
    /// The run stops once `||grad(u* - u)|| <= error_tol` at the end of a level.
    pub error_tol: Option<f64>,
    pub solver_rtol: f64,
}

impl AdaptiveParams {
    pub fn new(theta: f64, lambda: f64, delta: f64, scalar_product: ScalarProductSpec) -> AdaptiveParams {
        AdaptiveParams {
            theta,
            lambda,
            delta,
            scalar_product,
            max_dofs: 10_000,
            max_inner: 500,
            error_tol: None,
            solver_rtol: 1e-10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.theta > 0.0 && self.theta <= 1.0) {
            return bad(format!("theta must lie in (0,1], got {}", self.theta));
        }
        if !(self.lambda > 0.0) || !self.lambda.is_finite() {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return bad(format!("delta must be positive, got {}", self.delta));
        }
        if !(self.solver_rtol > 0.0 && self.solver_rtol < 1.0) {
            return bad(format!("solver rtol must lie in (0,1), got {}", self.solver_rtol));
        }
        if self.max_inner == 0 {
            return bad("max_inner must be at least 1".into());
        }
        if let Some(tol) = self.error_tol {
            if !(tol > 0.0) {
                return bad(format!("error tolerance must be positive, got {tol}"));
            }
        }
        Ok(())
    }
}

/// One step `(ell, k)` of the adaptive algorithm.
#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub ell: usize,
    pub k: usize,
    /// Position in the lexicographic enumeration of all steps, from 0.
    pub abs_index: usize,
    pub ndofs: usize,
    /// `zeta(u^{k-1}; z^k)`
    pub zeta: f64,
    /// `eta(u^k)`
    pub eta: f64,
    /// `||z^k||_a`
    pub z_norm: f64,
    /// `||z^k||_a + zeta(u^{k-1}; z^k)`
    pub tilde_z: f64,
    /// `||grad(u* - u^k)||`
    pub h1_error: Option<f64>,
    /// Sum of `ndofs` over all steps up to this one.
    pub cum_cost: u64,
    pub wall_time_s: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    MaxDofs,
    ErrorTol,
    LuckyBreakdown,
    InnerCap,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::MaxDofs => "max_dofs",
            Termination::ErrorTol => "error_tol",
            Termination::LuckyBreakdown => "lucky_breakdown",
            Termination::InnerCap => "inner_cap",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelSummary {
    pub ell: usize,
    pub k_bar: usize,
    pub ndofs: usize,
    pub num_triangles: usize,
    /// Number of marked triangles; zero on the last level.
    pub marked: usize,
    /// `eta(u^{k_bar})^2`
    pub eta_squared: f64,
    /// `eta(M, u^{k_bar})^2`, absent when nothing was marked.
    pub eta_marked_squared: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct RunLog {
    pub params: AdaptiveParams,
    pub problem: String,
    pub records: Vec<IterationRecord>,
    pub levels: Vec<LevelSummary>,
    pub termination: Termination,
    pub final_mesh: Mesh,
    pub final_solution: FeFunction,
}

impl RunLog {
    /// `k_bar[ell]` for every level.
    pub fn k_bar(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.k_bar).collect()
    }

    /// The record `(ell, k_bar[ell])` of every level.
    pub fn final_records(&self) -> Vec<&IterationRecord> {
        let mut out: Vec<&IterationRecord> = Vec::new();
        for r in &self.records {
            match out.last() {
                Some(last) if last.ell == r.ell => *out.last_mut().expect("non-empty") = r,
                _ => out.push(r),
            }
        }
        out
    }

    pub fn last(&self) -> &IterationRecord {
        self.records.last().expect("a run records at least one step")
    }
}

/// Progress events for callers that want to inspect intermediate states.
pub enum Event<'a> {
    LevelStart { ell: usize, mesh: &'a Mesh, initial: &'a FeFunction },
    Step { record: &'a IterationRecord, u: &'a FeFunction, z: &'a FeFunction },
    LevelEnd { ell: usize, mesh: &'a Mesh, solution: &'a FeFunction, marked: &'a [usize] },
}

/// Minimal set `M` with `theta * sum ind >= sum_{T in M} ind`: greedy on the
/// indicators sorted descending with ties broken by index. `theta = 1`
/// marks every triangle.
pub fn doerfler_mark(ind: &IndicatorField, theta: f64) -> Vec<usize> {
    let n = ind.len();
    if theta >= 1.0 {
        return (0..n).collect();
    }
    let total = ind.total_squared();
    if total == 0.0 {
        return Vec::new();
    }
    let e = ind.entries();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| e[b].total_cmp(&e[a]).then(a.cmp(&b)));
    let goal = theta * total;
    let mut acc = 0.0;
    let mut marked = Vec::new();
    for t in order {
        if acc >= goal {
            break;
        }
        acc += e[t];
        marked.push(t);
    }
    marked.sort_unstable();
    marked
}

struct Level<'a> {
    mesh: &'a Mesh,
    dofmap: DofMap,
    pattern: SparsityPattern,
    load: Vec<f64>,
}

impl<'a> Level<'a> {
    fn new(mesh: &'a Mesh, problem: &Problem) -> Result<Level<'a>> {
        let dofmap = DofMap::new(mesh)?;
        let pattern = SparsityPattern::new(mesh, &dofmap);
        let load = assemble_load(mesh, &dofmap, problem);
        Ok(Level { mesh, dofmap, pattern, load })
    }

    fn scalar_product(&self, problem: &Problem, spec: ScalarProductSpec, w: &FeFunction) -> Result<ScalarProduct> {
        assemble_scalar_product_with(&self.pattern, self.mesh, problem, spec, Some(w))
    }

    /// Solves `a(z, v) = <F - A w, v>` and returns `(z, free values of z)`.
    fn update(&self, matrix: &SparseSymMatrix, problem: &Problem, w: &FeFunction, rtol: f64) -> Result<(FeFunction, Vec<f64>)> {
        let aw = apply_operator(self.mesh, &self.dofmap, problem, w)?;
        let rhs: Vec<f64> = self.load.iter().zip(aw).map(|(f, a)| f - a).collect();
        let free = solve_spd(matrix, &rhs, rtol)?;
        Ok((FeFunction::from_free(self.mesh, &self.dofmap, &free), free))
    }
}

/// One damped Zarantonello step: `z` solves `a(z, v) = <F - A u_prev, v>`
/// with the given scalar-product matrix, and `u_next = u_prev + delta z`.
pub fn zarantonello_step(
    mesh: &Mesh,
    dofmap: &DofMap,
    matrix: &SparseSymMatrix,
    problem: &Problem,
    delta: f64,
    u_prev: &FeFunction,
    rtol: f64,
) -> Result<(FeFunction, FeFunction)> {
    u_prev.check_mesh(mesh)?;
    if matrix.dim() != dofmap.num_free() {
        return Err(Error::DimensionMismatch { expected: dofmap.num_free(), found: matrix.dim() });
    }
    let aw = apply_operator(mesh, dofmap, problem, u_prev)?;
    let rhs: Vec<f64> = assemble_load(mesh, dofmap, problem).into_iter().zip(aw).map(|(f, a)| f - a).collect();
    let z = FeFunction::from_free(mesh, dofmap, &solve_spd(matrix, &rhs, rtol)?);
    let u_next = u_prev.axpy(delta, &z)?;
    Ok((z, u_next))
}

/// Zarantonello iteration on a fixed mesh until `||z||_a <= tol_ref`, from
/// `u = 0`. Only the scalar product, damping and solver tolerance of
/// `params` are used.
pub fn reference_discrete_solution(
    mesh: &Mesh,
    problem: &Problem,
    params: &AdaptiveParams,
    tol_ref: f64,
    max_iter: usize,
) -> Result<FeFunction> {
    if !(tol_ref > 0.0 && tol_ref <= 1e-11) {
        return Err(Error::InvalidParameter(format!("reference tolerance must lie in (0, 1e-11], got {tol_ref}")));
    }
    let level = Level::new(mesh, problem)?;
    let mut u = FeFunction::zeros(mesh);
    let mut sp = level.scalar_product(problem, params.scalar_product, &u)?;
    let mut last = f64::INFINITY;
    for _ in 0..max_iter {
        if params.scalar_product == ScalarProductSpec::WeightedIterate {
            sp = level.scalar_product(problem, params.scalar_product, &u)?;
        }
        let (z, free) = level.update(&sp.matrix, problem, &u, params.solver_rtol)?;
        last = sp.norm(&free)?;
        u = u.axpy(params.delta, &z)?;
        if last <= tol_ref {
            return Ok(u);
        }
    }
    Err(Error::IterationCap { iterations: max_iter, tol: tol_ref, last })
}

/// Runs the adaptive algorithm from the initial mesh of the problem's domain.
pub fn run(problem: &Problem, params: &AdaptiveParams) -> Result<RunLog> {
    run_on(Mesh::initial(problem.domain), problem, params, &mut |_| {})
}

/// Runs the adaptive algorithm from `mesh`, reporting progress to `observer`.
pub fn run_on(mesh: Mesh, problem: &Problem, params: &AdaptiveParams, observer: &mut dyn FnMut(Event<'_>)) -> Result<RunLog> {
    params.validate()?;
    if params.scalar_product == ScalarProductSpec::WeightedExact && problem.exact.is_none() {
        return Err(Error::MissingExactSolution);
    }
    let start = Instant::now();
    let mut records: Vec<IterationRecord> = Vec::new();
    let mut levels = Vec::new();
    let mut cum_cost: u64 = 0;
    let mut mesh = mesh;
    let mut u = FeFunction::zeros(&mesh);

    for ell in 0.. {
        let level = Level::new(&mesh, problem)?;
        let ndofs = level.dofmap.num_free();
        observer(Event::LevelStart { ell, mesh: &mesh, initial: &u });

        let mut sp = level.scalar_product(problem, params.scalar_product, &u)?;
        let mut termination = None;
        let mut k = 0;
        let (marking_indicators, eta_field) = loop {
            k += 1;
            if params.scalar_product == ScalarProductSpec::WeightedIterate && k > 1 {
                sp = level.scalar_product(problem, params.scalar_product, &u)?;
            }
            let (z, free) = level.update(&sp.matrix, problem, &u, params.solver_rtol)?;
            let z_norm = sp.norm(&free)?;
            let zeta_field = zeta_indicators_with(&mesh, problem, &sp.coefficient, &u, &z)?;
            let zeta = zeta_field.total();
            u = u.axpy(params.delta, &z)?;
            let eta_field = eta_indicators(&mesh, problem, &u)?;
            let h1 = match problem.exact {
                Some(_) => Some(h1_error(&mesh, problem, &u)?),
                None => None,
            };
            cum_cost += ndofs as u64;
            let record = IterationRecord {
                ell,
                k,
                abs_index: records.len(),
                ndofs,
                zeta,
                eta: eta_field.total(),
                z_norm,
                tilde_z: z_norm + zeta,
                h1_error: h1,
                cum_cost,
                wall_time_s: start.elapsed().as_secs_f64(),
            };
            observer(Event::Step { record: &record, u: &u, z: &z });
            records.push(record);

            if zeta == 0.0 && z_norm == 0.0 {
                termination = Some(Termination::LuckyBreakdown);
                break (zeta_field, eta_field);
            }
            if z_norm <= params.lambda * zeta {
                break (zeta_field, eta_field);
            }
            if k >= params.max_inner {
                termination = Some(Termination::InnerCap);
                break (zeta_field, eta_field);
            }
        };

        let mut summary = LevelSummary {
            ell,
            k_bar: k,
            ndofs,
            num_triangles: mesh.num_triangles(),
            marked: 0,
            eta_squared: eta_field.total_squared(),
            eta_marked_squared: None,
        };
        if termination.is_none() {
            let last = records.last().expect("at least one step per level");
            if let (Some(tol), Some(err)) = (params.error_tol, last.h1_error) {
                if err <= tol {
                    termination = Some(Termination::ErrorTol);
                }
            }
            if termination.is_none() && ndofs > params.max_dofs {
                termination = Some(Termination::MaxDofs);
            }
        }
        if let Some(reason) = termination {
            observer(Event::LevelEnd { ell, mesh: &mesh, solution: &u, marked: &[] });
            levels.push(summary);
            return Ok(RunLog {
                params: params.clone(),
                problem: problem.name.clone(),
                records,
                levels,
                termination: reason,
                final_mesh: mesh,
                final_solution: u,
            });
        }

        let marked = doerfler_mark(&marking_indicators, params.theta);
        summary.marked = marked.len();
        summary.eta_marked_squared = Some(eta_field.restrict_total(&marked).powi(2));
        observer(Event::LevelEnd { ell, mesh: &mesh, solution: &u, marked: &marked });
        levels.push(summary);
        let fine = mesh.refine_nvb(&marked);
        u = prolongate(&u, &fine)?;
        mesh = fine;
    }
    unreachable!("the level loop only exits by returning")
}

/// Measured `eta(M_ell, u^{k_bar})^2 / eta(u^{k_bar})^2` per level; absent on
/// levels without marking or with vanishing estimator.
pub fn doerfler_monitor(log: &RunLog) -> Vec<Option<f64>> {
    log.levels
        .iter()
        .map(|l| match l.eta_marked_squared {
            Some(m) if l.eta_squared > 0.0 => Some(m / l.eta_squared),
            _ => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::{assemble_residual, assemble_scalar_product};
    use crate::mesh::DomainId;
    use crate::model::{benchmark1, Nonlinearity};

    fn field(v: &[f64]) -> IndicatorField {
        IndicatorField::new(v.to_vec()).unwrap()
    }

    #[test]
    fn marking_examples() {
        assert_eq!(doerfler_mark(&field(&[4.0, 1.0, 1.0, 1.0, 1.0]), 0.5), vec![0]);
        assert_eq!(doerfler_mark(&field(&[4.0, 1.0, 1.0, 1.0, 1.0]), 1.0), vec![0, 1, 2, 3, 4]);
        assert_eq!(doerfler_mark(&field(&[1.0, 1.0, 1.0, 1.0]), 0.5), vec![0, 1]);
        assert_eq!(doerfler_mark(&field(&[1.0, 3.0, 0.0, 2.0]), 0.6), vec![1, 3]);
        assert!(doerfler_mark(&field(&[0.0, 0.0]), 0.5).is_empty());
        assert_eq!(doerfler_mark(&field(&[0.0, 0.0]), 1.0), vec![0, 1]);
    }

    #[test]
    fn params_are_validated() {
        let ok = AdaptiveParams::new(0.5, 0.1, 1.0, ScalarProductSpec::H1);
        assert!(ok.validate().is_ok());
        for bad in [
            AdaptiveParams { theta: 0.0, ..ok.clone() },
            AdaptiveParams { theta: 1.5, ..ok.clone() },
            AdaptiveParams { lambda: 0.0, ..ok.clone() },
            AdaptiveParams { delta: -1.0, ..ok.clone() },
            AdaptiveParams { solver_rtol: 1.0, ..ok.clone() },
            AdaptiveParams { max_inner: 0, ..ok.clone() },
            AdaptiveParams { error_tol: Some(0.0), ..ok.clone() },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn linear_problem_converges_in_one_step() {
        let m = Mesh::initial(DomainId::ZShape).uniform_refine();
        let d = DofMap::new(&m).unwrap();
        let p = Problem::new("poisson", DomainId::ZShape, Nonlinearity::constant(1.0).unwrap()).with_source(|x| 1.0 + x[0]);
        let sp = assemble_scalar_product(&m, &d, &p, ScalarProductSpec::H1, None).unwrap();
        let (_, u1) = zarantonello_step(&m, &d, &sp.matrix, &p, 1.0, &FeFunction::zeros(&m), 1e-12).unwrap();
        let direct = solve_spd(&sp.matrix, &assemble_load(&m, &d, &p), 1e-12).unwrap();
        for (a, b) in u1.free_values(&d).iter().zip(&direct) {
            assert!((a - b).abs() < 1e-12);
        }
        let (z2, _) = zarantonello_step(&m, &d, &sp.matrix, &p, 1.0, &u1, 1e-12).unwrap();
        assert!(z2.max_abs() < 1e-10);
        let params = AdaptiveParams::new(0.5, 0.1, 1.0, ScalarProductSpec::H1);
        let reference = reference_discrete_solution(&m, &p, &params, 1e-12, 10).unwrap();
        for (a, b) in reference.free_values(&d).iter().zip(&direct) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(reference_discrete_solution(&m, &p, &params, 1e-6, 10).is_err());
    }

    #[test]
    fn first_step_norm_scales_with_delta() {
        let m = Mesh::initial(DomainId::ZShape).uniform_refine();
        let d = DofMap::new(&m).unwrap();
        let p = benchmark1();
        let sp = assemble_scalar_product(&m, &d, &p, ScalarProductSpec::H1, None).unwrap();
        let delta = 0.3;
        let (z, u1) = zarantonello_step(&m, &d, &sp.matrix, &p, delta, &FeFunction::zeros(&m), 1e-12).unwrap();
        let nz = sp.norm(&z.free_values(&d)).unwrap();
        let nu = sp.norm(&u1.free_values(&d)).unwrap();
        assert!((nu - delta * nz).abs() < 1e-14 * nz);
    }

    #[test]
    fn fixed_point_has_vanishing_residual() {
        let m = Mesh::initial(DomainId::ZShape).uniform_refine().uniform_refine();
        let d = DofMap::new(&m).unwrap();
        let p = benchmark1();
        let params = AdaptiveParams::new(0.5, 0.1, 0.5, ScalarProductSpec::H1);
        let u = reference_discrete_solution(&m, &p, &params, 1e-12, 2000).unwrap();
        let b0 = assemble_load(&m, &d, &p);
        let scale = 1.0 + b0.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        let r = assemble_residual(&m, &d, &p, &u).unwrap();
        assert!(r.iter().all(|x| x.abs() <= 1e-10 * scale));
        let sp = assemble_scalar_product(&m, &d, &p, ScalarProductSpec::H1, None).unwrap();
        let (z, u_next) = zarantonello_step(&m, &d, &sp.matrix, &p, 0.5, &u, 1e-10).unwrap();
        assert!(z.max_abs() < 1e-10);
        assert!(u_next.axpy(-1.0, &u).unwrap().max_abs() < 1e-10);
    }

    #[test]
    fn final_records_pick_the_last_step_per_level() {
        let p = benchmark1();
        let mut params = AdaptiveParams::new(0.5, 0.1, 0.5, ScalarProductSpec::H1);
        params.max_dofs = 200;
        let log = run(&p, &params).unwrap();
        let finals = log.final_records();
        assert_eq!(finals.len(), log.levels.len());
        for (f, l) in finals.iter().zip(&log.levels) {
            assert_eq!(f.k, l.k_bar);
            assert_eq!(f.ell, l.ell);
        }
        assert_eq!(log.termination, Termination::MaxDofs);
        assert!(log.last().ndofs > 200);
    }
}
