//! Periodized Riesz kernel, the pointwise principal-value formula and a
//! nonlocal Dirichlet solver.

mod dirichlet;
mod kernel;
mod pointwise;
mod zeta;

pub use dirichlet::{
    dirichlet_solve, harnack_ratio_experiment, DirichletSolver, ExteriorData, HarnackGeometry, HarnackReport,
    NonlocalDirichletProblem,
};
pub use kernel::{direct_lattice_sum, PeriodizedKernel};
pub use pointwise::{frac_laplacian_pointwise, frac_laplacian_pointwise_with, PointwiseReport};
pub use zeta::lattice_moment_zeta;
