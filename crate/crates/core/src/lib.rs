//! Adaptive lowest-order finite elements for quasilinear elliptic problems
//!
//! ```text
//! -div(mu(|grad u|^2) grad u) = f - div fvec
//! ```
//!
//! The discrete nonlinear systems are linearized by a damped Zarantonello
//! (Banach-Picard) iteration. Every linearization step solves one symmetric
//! positive definite problem in a user-selected scalar product, and mesh
//! refinement is steered by a residual estimator for that linear problem
//! (the elliptic-reconstruction estimator). The inner loop stops once the
//! update norm is dominated by the estimator, so that linearization and
//! discretization errors stay balanced.
//!
//! Modules, bottom-up:
//!
//! * [`mesh`]: conforming triangulations and newest-vertex bisection
//! * [`space`]: P1 degrees of freedom, prolongation, evaluation
//! * [`model`]: nonlinearities and the two benchmark problems
//! * [`assembly`]: quadrature, scalar-product matrices, residual vectors
//! * [`solver`]: preconditioned conjugate gradients
//! * [`estimators`]: the residual estimator and the reconstruction estimator
//! * [`driver`]: the adaptive loop with bookkeeping of steps and cost
//! * [`report`]: CSV output, rate fits, weighted cost, and the CLI

pub mod assembly;
pub mod driver;
pub mod error;
pub mod estimators;
pub mod mesh;
pub mod model;
pub mod report;
pub mod solver;
pub mod space;

pub use error::{Error, Result};

/// A point or vector in the plane.
pub type Point = [f64; 2];
