use std::f64::consts::PI;

use super::profile::SchwartzProfile;
use crate::error::{Error, Result};
use crate::spectral_core::{wrap, wrap_point, SpectralFunction, TorusFunction};

/// Truncation of sums over `ℤⁿ`: radius in the max norm and the requested
/// absolute tail tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSumConfig {
    pub radius: usize,
    pub tol: f64,
}

impl LatticeSumConfig {
    pub fn new(radius: usize, tol: f64) -> Result<Self> {
        if radius < 1 {
            return Err(Error::Config("lattice radius must be at least 1".into()));
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::Config(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self { radius, tol })
    }
}

impl Default for LatticeSumConfig {
    fn default() -> Self {
        Self { radius: 2, tol: 1e-12 }
    }
}

/// A truncated lattice sum with a rigorous bound on the omitted terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSum {
    pub value: f64,
    pub tail_bound: f64,
    /// Radius actually used after any enlargement.
    pub radius: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonCheck {
    pub spatial: LatticeSum,
    pub spectral: LatticeSum,
    pub residual: f64,
}

const MAX_RADIUS: usize = 1 << 16;

/// `Σ_{j ≥ from} term(j)` where `term(j+1) ≤ ratio(j)·term(j)` and `ratio`
/// is non-increasing; returns an upper bound.
fn geometric_tail<T: Fn(i64) -> f64, R: Fn(i64) -> f64>(term: T, ratio: R, from: i64) -> f64 {
    let mut sum = 0.0;
    let mut j = from;
    loop {
        let t = term(j);
        if t == 0.0 {
            return sum;
        }
        sum += t;
        let r = ratio(j);
        if r < 1.0 {
            let rest = t * r / (1.0 - r);
            if rest <= 1e-6 * sum || j - from > 10_000 {
                return sum + rest;
            }
        }
        j += 1;
    }
}

struct AxisSum {
    value: f64,
    tail: f64,
}

/// Spatial sum along one axis over a window of `2R+1` translates centred on
/// the profile, so far-away centers cost nothing extra.
fn spatial_axis(phi: &SchwartzProfile, axis: usize, z: f64, radius: usize) -> AxisSum {
    let d0 = z - phi.center()[axis];
    let k0 = (-d0 / (2.0 * PI)).round();
    let r = radius as i64;
    let value = (-r..=r)
        .map(|j| phi.axis_factor(axis, z + 2.0 * PI * (k0 + j as f64)))
        .sum();
    let m = phi.monomial()[axis] as i32;
    let a = phi.width();
    let g = |u: f64| u.powi(m) * (-a * u * u).exp();
    let tail = geometric_tail(
        |j| 2.0 * g(PI * (2 * j - 1) as f64),
        |j| {
            let q = (2 * j + 1) as f64 / (2 * j - 1) as f64;
            q.powi(m) * (-8.0 * a * PI * PI * j as f64).exp()
        },
        r + 1,
    );
    AxisSum { value, tail }
}

fn spectral_axis(phi: &SchwartzProfile, axis: usize, z: f64, radius: usize) -> AxisSum {
    let r = radius as i64;
    let value = (-r..=r)
        .map(|k| (phi.axis_fourier(axis, k as f64) * num_complex::Complex64::from_polar(1.0, k as f64 * z)).re)
        .sum();
    let m = phi.monomial()[axis] as i32;
    let a = phi.width();
    let tail = geometric_tail(
        |k| 2.0 * phi.axis_fourier_bound(axis, k as f64),
        |k| ((k + 1) as f64 / k as f64).powi(m) * (-((2 * k + 1) as f64) / (4.0 * a)).exp(),
        r + 1,
    );
    AxisSum { value, tail }
}

/// Error bound of a product of per-axis sums with per-axis errors.
fn product_error(axes: &[AxisSum]) -> f64 {
    // Π(|S|+ε) - Π|S| expanded axis by axis to avoid cancellation
    let mut exact_part = 1.0;
    let mut err = 0.0;
    for ax in axes {
        let s = ax.value.abs();
        err = err * (s + ax.tail) + exact_part * ax.tail;
        exact_part *= s;
    }
    err
}

fn product_sum<F>(phi: &SchwartzProfile, cfg: &LatticeSumConfig, min_radius: usize, axis_sum: F) -> Result<LatticeSum>
where
    F: Fn(usize, usize) -> AxisSum,
{
    let mut radius = cfg.radius.max(min_radius).max(1);
    loop {
        let axes: Vec<AxisSum> = (0..phi.dim()).map(|a| axis_sum(a, radius)).collect();
        let tail_bound = product_error(&axes);
        if tail_bound <= cfg.tol {
            let value = axes.iter().map(|a| a.value).product();
            return Ok(LatticeSum { value, tail_bound, radius });
        }
        if radius >= MAX_RADIUS {
            return Err(Error::Accuracy { what: "lattice sum tail".into(), estimate: tail_bound });
        }
        radius *= 2;
    }
}

/// `(p_Σ φ)(z) = Σ_k φ(z + 2πk)` with rigorous tail control; the radius is
/// enlarged automatically until the tail bound is below `cfg.tol`.
pub fn periodize(phi: &SchwartzProfile, z: &[f64], cfg: &LatticeSumConfig) -> Result<LatticeSum> {
    if z.len() != phi.dim() {
        return Err(Error::Input("point dimension differs from profile".into()));
    }
    let min_radius = (0..phi.dim())
        .map(|a| (phi.axis_monotone_radius(a) / (2.0 * PI) + 1.0).ceil() as usize)
        .max()
        .unwrap_or(1);
    product_sum(phi, cfg, min_radius, |a, r| spatial_axis(phi, a, z[a], r))
}

/// Compares `p_Σφ(z)` with `Σ_k φ̂(k) e^{ik·z}`, each side summed independently.
pub fn poisson_summation_check(phi: &SchwartzProfile, z: &[f64], cfg: &LatticeSumConfig) -> Result<PoissonCheck> {
    let spatial = periodize(phi, z, cfg)?;
    let min_radius = (0..phi.dim())
        .map(|a| phi.fourier_monotone_radius(a).ceil() as usize + 1)
        .max()
        .unwrap_or(1);
    let spectral = product_sum(phi, cfg, min_radius, |a, r| spectral_axis(phi, a, z[a], r))?;
    Ok(PoissonCheck { spatial, spectral, residual: (spatial.value - spectral.value).abs() })
}

/// `(Rv)(x) = v(wrap(x))`, evaluating the series exactly.
pub fn repetition_eval(v: &SpectralFunction, x: &[f64]) -> f64 {
    v.eval(&wrap_point(x))
}

/// `(Rv)(x)` for sampled `v`, through trigonometric interpolation.
pub fn repetition_eval_samples(v: &TorusFunction, x: &[f64]) -> Result<f64> {
    trig_interpolate(v, &wrap_point(x))
}

/// Interpolation weights `w_j(x)` of the band-limited interpolant on one
/// axis, with the Nyquist mode split evenly between `±N/2`.
fn interpolation_weights(nodes: &[f64], x: f64) -> Vec<f64> {
    let n = nodes.len();
    let half = n / 2;
    nodes
        .iter()
        .map(|&z| {
            let t = x - z;
            let mut s = 1.0 + (half as f64 * t).cos();
            for k in 1..half {
                s += 2.0 * (k as f64 * t).cos();
            }
            s / n as f64
        })
        .collect()
}

/// Trigonometric interpolant of the samples, evaluated at `x`.
pub fn trig_interpolate(v: &TorusFunction, x: &[f64]) -> Result<f64> {
    let grid = v.grid();
    if x.len() != grid.dim() {
        return Err(Error::Input("point dimension differs from grid".into()));
    }
    let nodes = grid.axis_nodes();
    let weights: Vec<Vec<f64>> = x.iter().map(|&xa| interpolation_weights(&nodes, wrap(xa))).collect();
    let mut acc = 0.0;
    for (flat, value) in v.values().iter().enumerate() {
        let idx = grid.multi_index(flat);
        let w: f64 = idx.iter().enumerate().map(|(a, &j)| weights[a][j]).product();
        acc += w * value;
    }
    Ok(acc)
}
