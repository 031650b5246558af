use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform grid on the torus `Q_n = (-π, π]^n`.
///
/// Nodes along each axis are `z_j = -π + 2π (j+1)/N`, `j = 0..N`, so the last
/// node is `π` and `-π` (the same torus point) is not repeated. Multi-indices
/// are flattened row-major: the first axis varies slowest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusGrid {
    dim: usize,
    points: usize,
}

impl TorusGrid {
    pub fn new(dim: usize, points: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Input(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if points < 4 || points % 2 != 0 {
            return Err(Error::Input(format!("points per axis must be even and >= 4, got {points}")));
        }
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Points per axis.
    pub fn points(&self) -> usize {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * PI / self.points as f64
    }

    /// Quadrature weight of a node, `h^n`.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn coordinate(&self, j: usize) -> f64 {
        -PI + self.spacing() * (j + 1) as f64
    }

    pub fn axis_nodes(&self) -> Vec<f64> {
        (0..self.points).map(|j| self.coordinate(j)).collect()
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim];
        let mut rest = flat;
        for a in (0..self.dim).rev() {
            idx[a] = rest % self.points;
            rest /= self.points;
        }
        idx
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.points + i)
    }

    pub fn node(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat).into_iter().map(|j| self.coordinate(j)).collect()
    }

    pub fn nodes(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(move |i| self.node(i))
    }
}

/// Coordinate-wise wrap into `(-π, π]`.
pub fn wrap(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let shifted = x - two_pi * ((x - PI) / two_pi).ceil();
    if shifted <= -PI {
        shifted + two_pi
    } else {
        shifted
    }
}

pub fn wrap_point(x: &[f64]) -> Vec<f64> {
    x.iter().map(|&c| wrap(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_lie_in_half_open_cube() {
        let g = TorusGrid::new(2, 8).unwrap();
        assert_eq!(g.len(), 64);
        for p in g.nodes() {
            for c in p {
                assert!(c > -PI && c <= PI + 1e-15);
            }
        }
        assert_eq!(g.coordinate(7), PI);
        assert!((g.coordinate(3)).abs() < 1e-15);
    }

    #[test]
    fn flat_and_multi_index_agree() {
        let g = TorusGrid::new(3, 6).unwrap();
        for flat in 0..g.len() {
            assert_eq!(g.flat_index(&g.multi_index(flat)), flat);
        }
        assert_eq!(g.multi_index(1), vec![0, 0, 1]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(TorusGrid::new(4, 8).is_err());
        assert!(TorusGrid::new(1, 7).is_err());
        assert!(TorusGrid::new(1, 2).is_err());
    }

    #[test]
    fn wrap_keeps_pi_side() {
        assert_eq!(wrap(PI), PI);
        assert!((wrap(-PI) - PI).abs() < 1e-15);
        assert!((wrap(3.0 * PI) - PI).abs() < 1e-14);
        assert!((wrap(2.0 * PI + 1.0) - 1.0).abs() < 1e-14);
        assert!((wrap(-7.0) - (-7.0 + 2.0 * PI)).abs() < 1e-14);
    }
}
