use nalgebra::{DMatrix, DVector};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::kernel::PeriodizedKernel;
use crate::error::{Error, Result};
use crate::spectral_core::{synthesize, SpectralFunction, TorusFunction, TorusGrid};

/// `(-Δ)^σ v = 0` on the interior nodes, `v = g` on the rest.
#[derive(Debug, Clone)]
pub struct NonlocalDirichletProblem {
    pub grid: TorusGrid,
    pub interior: Vec<bool>,
    /// Values on exterior nodes; interior entries are ignored.
    pub exterior: Vec<f64>,
}

/// Factored stiffness system for a fixed grid, interior set and kernel.
pub struct DirichletSolver {
    grid: TorusGrid,
    interior: Vec<usize>,
    exterior: Vec<usize>,
    table: Vec<f64>,
    factor: nalgebra::Cholesky<f64, nalgebra::Dyn>,
}

impl DirichletSolver {
    pub fn new(grid: TorusGrid, interior_mask: &[bool], kernel: &PeriodizedKernel) -> Result<Self> {
        if interior_mask.len() != grid.len() {
            return Err(Error::Input("interior mask length differs from grid".into()));
        }
        let interior: Vec<usize> = (0..grid.len()).filter(|&i| interior_mask[i]).collect();
        let exterior: Vec<usize> = (0..grid.len()).filter(|&i| !interior_mask[i]).collect();
        if interior.is_empty() || exterior.is_empty() {
            return Err(Error::Input("interior must be nonempty and not the whole grid".into()));
        }
        let table = kernel.offset_table(&grid)?;
        let w = grid.cell_volume();
        let diag = w * table.iter().sum::<f64>();
        let m = interior.len();
        let entries: Vec<f64> = (0..m * m)
            .into_par_iter()
            .map(|idx| {
                let (r, c) = (idx / m, idx % m);
                if r == c {
                    diag
                } else {
                    -w * table[offset(&grid, interior[r], interior[c])]
                }
            })
            .collect();
        let matrix = DMatrix::from_row_slice(m, m, &entries);
        let factor = matrix
            .cholesky()
            .ok_or_else(|| Error::Solver("stiffness matrix is not positive definite".into()))?;
        Ok(Self { grid, interior, exterior, table, factor })
    }

    pub fn solve(&self, data: &[f64]) -> Result<TorusFunction> {
        if data.len() != self.grid.len() {
            return Err(Error::Input("exterior data length differs from grid".into()));
        }
        let w = self.grid.cell_volume();
        let rhs = DVector::from_iterator(
            self.interior.len(),
            self.interior.iter().map(|&i| {
                self.exterior
                    .iter()
                    .map(|&j| w * self.table[offset(&self.grid, i, j)] * data[j])
                    .sum::<f64>()
            }),
        );
        let sol = self.factor.solve(&rhs);
        let mut values = data.to_vec();
        for (k, &i) in self.interior.iter().enumerate() {
            values[i] = sol[k];
        }
        TorusFunction::new(self.grid, values)
    }
}

/// Flat index of the offset `x_j - x_i` on the grid.
fn offset(grid: &TorusGrid, i: usize, j: usize) -> usize {
    let n = grid.points();
    let a = grid.multi_index(i);
    let b = grid.multi_index(j);
    let d: Vec<usize> = a.iter().zip(&b).map(|(&x, &y)| (y + n - x) % n).collect();
    grid.flat_index(&d)
}

pub fn dirichlet_solve(problem: &NonlocalDirichletProblem, kernel: &PeriodizedKernel) -> Result<TorusFunction> {
    DirichletSolver::new(problem.grid, &problem.interior, kernel)?.solve(&problem.exterior)
}

/// Open cube `𝒪 = {|z|_∞ < outer}` and compact cube `𝒦 = {|z|_∞ ≤ inner}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarnackGeometry {
    pub outer: f64,
    pub inner: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarnackReport {
    pub max_ratio: f64,
    pub ratios: Vec<f64>,
    /// Trials where `inf_𝒦 v ≤ 0`.
    pub violations: Vec<usize>,
}

/// Exterior data for Harnack trials: a constant or squared random
/// trigonometric polynomials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExteriorData {
    Constant,
    SquaredTrig { degree: usize },
}

pub fn harnack_ratio_experiment(
    kernel: &PeriodizedKernel,
    geometry: HarnackGeometry,
    points: usize,
    data: ExteriorData,
    trials: usize,
    seed: u64,
) -> Result<HarnackReport> {
    let grid = TorusGrid::new(kernel.dim(), points)?;
    let h = grid.spacing();
    if !(geometry.inner >= 0.0 && geometry.inner + h <= geometry.outer && geometry.outer < std::f64::consts::PI) {
        return Err(Error::Config(format!(
            "need 0 ≤ inner, inner + h ≤ outer < π (inner {}, outer {}, h {h})",
            geometry.inner, geometry.outer
        )));
    }
    let linf = |p: &[f64]| p.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let interior: Vec<bool> = grid.nodes().map(|p| linf(&p) < geometry.outer).collect();
    let compact: Vec<usize> = (0..grid.len()).filter(|&i| linf(&grid.node(i)) <= geometry.inner + 1e-12).collect();
    if compact.is_empty() {
        return Err(Error::Config("compact set contains no grid nodes".into()));
    }
    let solver = DirichletSolver::new(grid, &interior, kernel)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ratios = Vec::with_capacity(trials);
    let mut violations = Vec::new();
    for t in 0..trials {
        let g: Vec<f64> = match data {
            ExteriorData::Constant => vec![1.0; grid.len()],
            ExteriorData::SquaredTrig { degree } => {
                let p = SpectralFunction::random(grid.dim(), degree, rng.next_u64())?;
                synthesize(&p, &grid)?.values().iter().map(|x| x * x).collect()
            }
        };
        let v = solver.solve(&g)?;
        let vals: Vec<f64> = compact.iter().map(|&i| v.values()[i]).collect();
        let sup = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let inf = vals.iter().copied().fold(f64::INFINITY, f64::min);
        if inf <= 0.0 {
            violations.push(t);
            ratios.push(f64::INFINITY);
        } else {
            ratios.push(sup / inf);
        }
    }
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(HarnackReport { max_ratio, ratios, violations })
}
