//! Preconditioned conjugate gradients for the symmetric positive definite
//! update systems.

use crate::assembly::{dot, SparseSymMatrix};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// `||M x - b|| / ||b||` at exit.
    pub relative_residual: f64,
}

/// Solves `M x = b` until `||M x - b||_2 <= rtol ||b||_2`.
pub fn solve_spd(m: &SparseSymMatrix, b: &[f64], rtol: f64) -> Result<Vec<f64>> {
    solve_spd_with_stats(m, b, rtol).map(|(x, _)| x)
}

/// Jacobi-preconditioned CG with at most `10 n` iterations, started from zero.
pub fn solve_spd_with_stats(m: &SparseSymMatrix, b: &[f64], rtol: f64) -> Result<(Vec<f64>, SolveStats)> {
    let n = m.dim();
    if b.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: b.len() });
    }
    if !(rtol > 0.0 && rtol < 1.0) {
        return Err(Error::InvalidParameter(format!("rtol must lie in (0,1), got {rtol}")));
    }
    let mut x = vec![0.0; n];
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        return Ok((x, SolveStats { iterations: 0, relative_residual: 0.0 }));
    }
    let inv_diag = m
        .diagonal()
        .iter()
        .enumerate()
        .map(|(i, d)| {
            if *d > 0.0 {
                Ok(1.0 / d)
            } else {
                Err(Error::NotPositiveDefinite(format!("diagonal entry {i} is {d:e}")))
            }
        })
        .collect::<Result<Vec<f64>>>()?;

    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let max_iter = 10 * n.max(1);
    let target = rtol * b_norm;
    for it in 1..=max_iter {
        m.matvec_into(&p, &mut ap);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::NotPositiveDefinite(format!("p^T M p = {pap:e} in iteration {it}")));
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let r_norm = dot(&r, &r).sqrt();
        if r_norm <= target {
            // confirm with the true residual, which drifts from the recursive one
            let true_res = residual_norm(m, &x, b);
            if true_res <= target {
                return Ok((x, SolveStats { iterations: it, relative_residual: true_res / b_norm }));
            }
            r = b.iter().zip(m.matvec(&x)?).map(|(bi, mi)| bi - mi).collect();
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NoConvergence { iterations: max_iter, residual: residual_norm(m, &x, b) / b_norm })
}

fn residual_norm(m: &SparseSymMatrix, x: &[f64], b: &[f64]) -> f64 {
    let mut mx = vec![0.0; x.len()];
    m.matvec_into(x, &mut mx);
    mx.iter().zip(b).map(|(a, b)| (b - a) * (b - a)).sum::<f64>().sqrt()
}
