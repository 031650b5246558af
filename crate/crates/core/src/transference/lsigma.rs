use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::periodize::trig_interpolate;
use crate::quad::GaussLegendre;
use crate::special_fn::{bessel_k, gamma};
use crate::spectral_core::{FracOrder, TorusFunction};

/// Largest radius tried before giving up on the tail bound.
const MAX_CELLS: usize = 1 << 16;
const TAIL_TARGET: f64 = 1e-9;
const FOURIER_TERMS: usize = 48;

/// `∫_ℝ |Rv(x)| (1+x²)^{-(1+2σ)/2} dx` by two routes.
#[derive(Debug, Clone, PartialEq)]
pub struct LSigmaNorm {
    /// Direct quadrature over `[-L, L]` plus the mean-value tail.
    pub value: f64,
    /// Bound on what the mean-value tail leaves out.
    pub tail_bound: f64,
    /// Quadrature error of the direct route (panel halving).
    pub quadrature_error: f64,
    /// `∫_{𝕋} |v| p_Σ w`, with `p_Σ w` summed from its Fourier series.
    pub periodized: f64,
    /// Truncation radius actually used.
    pub radius: f64,
}

impl LSigmaNorm {
    pub fn discrepancy(&self) -> f64 {
        (self.value - self.periodized).abs()
    }
}

fn weight(beta: f64, x: f64) -> f64 {
    (1.0 + x * x).powf(-beta)
}

/// `∫_L^∞ (1+x²)^{-β} dx` for `L > 1` from the binomial series in `x^{-2}`.
fn weight_tail(beta: f64, l: f64) -> f64 {
    let mut coeff = 1.0;
    let mut total = 0.0;
    for i in 0..200 {
        let term = coeff * l.powf(1.0 - 2.0 * beta - 2.0 * i as f64) / (2.0 * beta + 2.0 * i as f64 - 1.0);
        total += term;
        if term.abs() < 1e-18 * total.abs() {
            break;
        }
        coeff *= -(beta + i as f64) / (i as f64 + 1.0);
    }
    total
}

/// Break points of `|v|` in `[-π, π]`: sign changes of `v`, located by bisection.
fn kinks<F: Fn(f64) -> f64>(v: &F, samples: usize) -> Vec<f64> {
    let h = 2.0 * PI / samples as f64;
    let mut out = vec![-PI];
    let mut prev = v(-PI);
    for i in 1..=samples {
        let x = -PI + h * i as f64;
        let cur = v(x);
        if prev * cur < 0.0 {
            let (mut lo, mut hi, mut flo) = (x - h, x, prev);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let fm = v(mid);
                if fm * flo <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev = cur;
    }
    out.push(PI);
    out
}

/// `∫_{-π}^{π} f` on the pieces between break points, at two panel counts.
fn piecewise<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], panels: usize) -> (f64, f64) {
    let rule = GaussLegendre::default_rule();
    let mut fine = 0.0;
    let mut coarse = 0.0;
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            fine += rule.integrate_panels(f, w[0], w[1], 2 * panels);
            coarse += rule.integrate_panels(f, w[0], w[1], panels);
        }
    }
    (fine, (fine - coarse).abs())
}

/// The weighted integral that places `Rv` in `L_σ`, for `n = 1`.
///
/// `radius` must be a positive multiple of `2π`; it is doubled until the
/// tail bound drops below `1e-9 (1 + value)`.
pub fn lsigma_norm(v: &TorusFunction, order: &FracOrder, radius: f64) -> Result<LSigmaNorm> {
    let grid = v.grid();
    if grid.dim() != 1 {
        return Err(Error::Unsupported("the L_σ integral is implemented for n = 1".into()));
    }
    let cells_f = radius / (2.0 * PI);
    let mut cells = cells_f.round() as usize;
    if !(radius > 0.0) || cells == 0 || (cells_f - cells as f64).abs() > 1e-9 * cells_f {
        return Err(Error::Input(format!("truncation radius {radius} is not a positive multiple of 2π")));
    }
    let sigma = order.sigma();
    let beta = 0.5 + sigma;
    let eval = |z: f64| trig_interpolate(v, &[z]).unwrap_or(f64::NAN);
    let mut breaks = kinks(&eval, 32 * grid.points());
    // the cell count of [-L, L] over a point z changes at z = 0
    breaks.push(0.0);
    breaks.sort_by(f64::total_cmp);
    let abs_v = |z: f64| eval(z).abs();
    let panels = 2 + grid.points() / 8;

    let (mass, _) = piecewise(&abs_v, &breaks, panels);
    let mean = mass / (2.0 * PI);
    let (spread, _) = piecewise(&|z| (abs_v(z) - mean).abs(), &breaks, panels);
    // antiderivative G of the mean-free antiderivative of |v| - mean: |G| ≤ π ∫||v| - mean|
    let g_max = PI * spread;

    let (value, quadrature_error, tail_bound, radius) = loop {
        let l = 2.0 * PI * cells as f64;
        let w_prime = (2.0 * beta) * l * (1.0 + l * l).powf(-beta - 1.0);
        let tail_bound = 4.0 * g_max * w_prime;
        let enough = tail_bound <= TAIL_TARGET * (1.0 + mass);
        if enough || cells >= MAX_CELLS {
            let c = cells as i64;
            let summed = |z: f64| {
                let (lo, hi) = if z >= 0.0 { (-c, c - 1) } else { (1 - c, c) };
                let mut s = 0.0;
                for j in lo..=hi {
                    s += weight(beta, z + 2.0 * PI * j as f64);
                }
                abs_v(z) * s
            };
            let (inner, err) = piecewise(&summed, &breaks, panels);
            let value = inner + 2.0 * mean * weight_tail(beta, l);
            if !enough {
                return Err(Error::Accuracy { what: "L_σ tail".into(), estimate: tail_bound });
            }
            break (value, err, tail_bound, l);
        }
        cells *= 2;
    };

    let head = PI.sqrt() * gamma(sigma)? / gamma(beta)?;
    let mut coeffs = vec![head / (2.0 * PI)];
    for k in 1..=FOURIER_TERMS {
        let kf = k as f64;
        let kv = bessel_k(sigma, kf)?.value;
        coeffs.push(2.0 * PI.sqrt() / gamma(beta)? * (0.5 * kf).powf(sigma) * kv / (2.0 * PI));
    }
    let periodized_weight = |z: f64| {
        coeffs[0] + 2.0 * coeffs[1..].iter().enumerate().map(|(i, c)| c * ((i + 1) as f64 * z).cos()).sum::<f64>()
    };
    let (periodized, _) = piecewise(&|z| abs_v(z) * periodized_weight(z), &breaks, panels);

    Ok(LSigmaNorm { value, tail_bound, quadrature_error, periodized, radius })
}
