use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::periodize::{LatticeSum, LatticeSumConfig};
use crate::spectral_core::{wrap, FracOrder, TorusGrid};
use crate::special_fn::{gamma, gamma_q, upper_gamma};

/// Ewald splitting parameter; balances `e^{-π|k|²}` decay on both sides.
const ALPHA: f64 = 1.0 / (4.0 * PI);
const MAX_RADIUS: usize = 64;

/// `K(x) = C · Σ_k |x + 2πk|^{-(n+2σ)}` on the torus.
///
/// The lattice sum is evaluated by Ewald summation: a real-space part with
/// incomplete gamma screening and a rapidly converging reciprocal part.
/// Both truncations are covered by an explicit tail bound.
#[derive(Debug, Clone)]
pub struct PeriodizedKernel {
    dim: usize,
    order: FracOrder,
    constant: f64,
    radius: usize,
    tail_bound: f64,
    /// `(m, weight)` for the reciprocal part, `m` on one half-lattice plus `m = 0`.
    reciprocal: Vec<(Vec<i64>, f64)>,
}

fn box_indices(dim: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-radius..=radius).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

fn shell_count_bound(dim: usize, j: f64) -> f64 {
    2.0 * dim as f64 * (2.0 * j + 1.0).powi(dim as i32 - 1)
}

impl PeriodizedKernel {
    pub fn new(dim: usize, order: FracOrder, cfg: &LatticeSumConfig) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Input(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        let sigma = order.sigma();
        let s = dim as f64 + 2.0 * sigma;
        let mut radius = cfg.radius.max(1);
        let mut tail_bound = Self::ewald_tail(dim, sigma, radius)?;
        while tail_bound > cfg.tol {
            if radius >= MAX_RADIUS {
                return Err(Error::Accuracy { what: "periodized kernel tail".into(), estimate: tail_bound });
            }
            radius += 1;
            tail_bound = Self::ewald_tail(dim, sigma, radius)?;
        }
        let prefactor = PI.powf(0.5 * dim as f64) / ((2.0 * PI).powi(dim as i32) * gamma(0.5 * s)?);
        let mut reciprocal = vec![(vec![0; dim], prefactor * ALPHA.powf(sigma) / sigma)];
        for m in box_indices(dim, radius as i64) {
            let first = m.iter().find(|&&x| x != 0);
            if first.is_none_or(|&x| x < 0) {
                continue;
            }
            let m2: f64 = m.iter().map(|&x| (x * x) as f64).sum();
            // both m and -m, combined into a cosine
            let weight = 2.0 * prefactor * (0.25 * m2).powf(sigma) * upper_gamma(-sigma, m2 / (4.0 * ALPHA))?;
            reciprocal.push((m, weight));
        }
        Ok(Self { dim, order, constant: order.kernel_const(dim), radius, tail_bound, reciprocal })
    }

    /// Bound on both truncated Ewald sums beyond `radius`, uniform in `x ∈ Q_n`.
    fn ewald_tail(dim: usize, sigma: f64, radius: usize) -> Result<f64> {
        let s = dim as f64 + 2.0 * sigma;
        let a = 0.5 * s;
        let ga = gamma(a)?;
        let n = dim as i32;
        // real space: |x+2πk| ≥ π(2j-1) on shell j, Γ(a,x) ≤ 2x^{a-1}e^{-x} once x ≥ 2a-1
        let real_term = |j: f64| {
            let r = PI * (2.0 * j - 1.0);
            shell_count_bound(dim, j) * 2.0 * ALPHA.powf(a - 1.0) * r.powi(-2) * (-ALPHA * r * r).exp() / ga
        };
        let real_ratio = |j: f64| {
            ((2.0 * j + 3.0) / (2.0 * j + 1.0)).powi(n - 1)
                * ((2.0 * j - 1.0) / (2.0 * j + 1.0)).powi(2)
                * (-8.0 * ALPHA * PI * PI * j).exp()
        };
        // reciprocal: Γ(-σ, x) ≤ x^{-σ-1} e^{-x}
        let prefactor = PI.powf(0.5 * dim as f64) / ((2.0 * PI).powi(n) * ga);
        let recip_term = |j: f64| {
            shell_count_bound(dim, j) * prefactor * ALPHA.powf(sigma + 1.0) * 4.0 / (j * j) * (-j * j / (4.0 * ALPHA)).exp()
        };
        let recip_ratio = |j: f64| {
            ((2.0 * j + 3.0) / (2.0 * j + 1.0)).powi(n - 1) * (j / (j + 1.0)).powi(2) * (-(2.0 * j + 1.0) / (4.0 * ALPHA)).exp()
        };
        let start = (radius + 1) as f64;
        let r0 = PI * (2.0 * start - 1.0);
        if ALPHA * r0 * r0 < 2.0 * a - 1.0 {
            return Ok(f64::INFINITY);
        }
        let tail = |term: &dyn Fn(f64) -> f64, ratio: &dyn Fn(f64) -> f64| -> f64 {
            let t = term(start);
            let q = ratio(start);
            if q >= 1.0 {
                f64::INFINITY
            } else {
                t / (1.0 - q)
            }
        };
        Ok(tail(&real_term, &real_ratio) + tail(&recip_term, &recip_ratio))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> &FracOrder {
        &self.order
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// `Σ_k |x + 2πk|^{-(n+2σ)}` at the wrapped point.
    pub fn lattice_sum(&self, x: &[f64]) -> Result<LatticeSum> {
        if x.len() != self.dim {
            return Err(Error::Input("point dimension differs from kernel".into()));
        }
        let x: Vec<f64> = x.iter().map(|&c| wrap(c)).collect();
        let r2: f64 = x.iter().map(|c| c * c).sum();
        if r2 == 0.0 {
            return Err(Error::Domain("kernel is singular at the origin".into()));
        }
        let s = self.dim as f64 + 2.0 * self.order.sigma();
        let a = 0.5 * s;
        let mut real = 0.0;
        for k in box_indices(self.dim, self.radius as i64) {
            let d2: f64 = x.iter().zip(&k).map(|(&xi, &ki)| (xi + 2.0 * PI * ki as f64).powi(2)).sum();
            real += gamma_q(a, ALPHA * d2)? * d2.powf(-a);
        }
        let recip: f64 = self
            .reciprocal
            .iter()
            .map(|(m, wgt)| {
                let phase: f64 = m.iter().zip(&x).map(|(&mi, &xi)| mi as f64 * xi).sum();
                wgt * phase.cos()
            })
            .sum();
        Ok(LatticeSum { value: real + recip, tail_bound: self.tail_bound, radius: self.radius })
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        Ok(self.constant * self.lattice_sum(x)?.value)
    }

    /// Kernel at every grid offset `j·h` (row-major); the zero offset holds 0.
    pub fn offset_table(&self, grid: &TorusGrid) -> Result<Vec<f64>> {
        if grid.dim() != self.dim {
            return Err(Error::Input("grid dimension differs from kernel".into()));
        }
        let h = grid.spacing();
        let p = grid.points();
        let negated = |flat: usize| -> usize {
            let idx: Vec<usize> = grid.multi_index(flat).iter().map(|&j| (p - j) % p).collect();
            grid.flat_index(&idx)
        };
        let mut table = (0..grid.len())
            .into_par_iter()
            .map(|flat| {
                if flat == 0 || negated(flat) < flat {
                    return Ok(0.0);
                }
                let y: Vec<f64> = grid.multi_index(flat).iter().map(|&j| wrap(j as f64 * h)).collect();
                self.eval(&y)
            })
            .collect::<Result<Vec<f64>>>()?;
        // exact evenness keeps the stiffness matrix exactly symmetric
        for flat in 0..table.len() {
            let neg = negated(flat);
            if neg < flat {
                table[flat] = table[neg];
            }
        }
        Ok(table)
    }
}

/// Plain truncated sum `Σ_{|k|_∞ ≤ R} |x+2πk|^{-(n+2σ)}` with the bound
/// `2n·3^{n-1} π^{-(n+2σ)} (2R-1)^{-2σ} / (4σ)` on the rest.
pub fn direct_lattice_sum(dim: usize, sigma: f64, x: &[f64], radius: usize) -> Result<LatticeSum> {
    if radius < 1 {
        return Err(Error::Config("radius must be at least 1".into()));
    }
    let x: Vec<f64> = x.iter().map(|&c| wrap(c)).collect();
    if x.iter().all(|&c| c == 0.0) {
        return Err(Error::Domain("kernel is singular at the origin".into()));
    }
    let s = dim as f64 + 2.0 * sigma;
    let value: f64 = box_indices(dim, radius as i64)
        .par_iter()
        .map(|k| {
            let d2: f64 = x.iter().zip(k).map(|(&xi, &ki)| (xi + 2.0 * PI * ki as f64).powi(2)).sum();
            d2.powf(-0.5 * s)
        })
        .sum();
    let tail_bound = 2.0 * dim as f64 * 3f64.powi(dim as i32 - 1) * PI.powf(-s)
        * (2.0 * radius as f64 - 1.0).powf(-2.0 * sigma)
        / (4.0 * sigma);
    Ok(LatticeSum { value, tail_bound, radius })
}
