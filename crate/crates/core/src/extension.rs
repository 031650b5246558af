//! Extension to `𝕋ⁿ × (0, ∞)`: mode-wise multiplier, Poisson-kernel
//! convolution and the weighted conormal limit.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::quad::{gregory_tail_sum, Estimate, GaussLegendre};
use crate::spectral_core::{synthesize, FracOrder, SpectralFunction, TorusFunction, TorusGrid};
use crate::special_fn::{bessel_k, gamma};

fn check_s(s: f64) -> Result<()> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("multiplier argument must be >= 0, got {s}")));
    }
    Ok(())
}

/// `m(s) = 2^{1-σ}/Γ(σ) · s^σ K_σ(s)`, `m(0) = 1`.
pub fn extension_multiplier(order: &FracOrder, s: f64) -> Result<f64> {
    check_s(s)?;
    let sigma = order.sigma();
    if s == 0.0 {
        return Ok(1.0);
    }
    if sigma == 0.5 {
        return Ok((-s).exp());
    }
    Ok(2f64.powf(1.0 - sigma) / gamma(sigma)? * s.powf(sigma) * bessel_k(sigma, s)?.value)
}

/// `m'(s) = -2^{1-σ}/Γ(σ) · s^σ K_{1-σ}(s)`.
pub fn extension_multiplier_derivative(order: &FracOrder, s: f64) -> Result<f64> {
    check_s(s)?;
    let sigma = order.sigma();
    if s == 0.0 {
        return Err(Error::Domain("derivative of the multiplier is singular at 0".into()));
    }
    Ok(-2f64.powf(1.0 - sigma) / gamma(sigma)? * s.powf(sigma) * bessel_k(1.0 - sigma, s)?.value)
}

/// `V(z, y) = Σ_k c_k m(|k| y) e^{ik·z}`.
#[derive(Debug, Clone)]
pub struct ExtensionField {
    coeffs: SpectralFunction,
    order: FracOrder,
}

fn modulus(k: &[i64]) -> f64 {
    k.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt()
}

impl ExtensionField {
    pub fn new(coeffs: SpectralFunction, order: FracOrder) -> Self {
        Self { coeffs, order }
    }

    pub fn slice(&self, y: f64) -> Result<SpectralFunction> {
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::Domain(format!("height must be positive, got {y}")));
        }
        self.coeffs.try_map_multiplier(|k| extension_multiplier(&self.order, modulus(k) * y))
    }

    pub fn eval(&self, z: &[f64], y: f64) -> Result<f64> {
        Ok(self.slice(y)?.eval(z))
    }
}

/// Values of `V(·, y)` on the grid.
pub fn extend(v: &SpectralFunction, order: &FracOrder, y: f64, grid: &TorusGrid) -> Result<TorusFunction> {
    synthesize(&ExtensionField::new(v.clone(), *order).slice(y)?, grid)
}

/// `∫_ℝ (Rv)(z - x) P_y(x) dx` with `P_y(x) = C y^{2σ} (x² + y²)^{-(1+2σ)/2}`
/// of unit mass, by direct quadrature against the periodized kernel (n = 1).
pub fn extend_by_convolution(v: &SpectralFunction, order: &FracOrder, y: f64, z: f64) -> Result<Estimate> {
    if v.dim() != 1 {
        return Err(Error::Unsupported("convolution check is one-dimensional".into()));
    }
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::Domain(format!("height must be positive, got {y}")));
    }
    let sigma = order.sigma();
    let a = 0.5 + sigma;
    let c = gamma(a)? / (PI.sqrt() * gamma(sigma)?);
    let ys = y.powf(2.0 * sigma);
    let kernel = move |x: f64| c * ys * (x * x + y * y).powf(-a);
    // ∫_X^∞ (t²+y²)^{-a} dt = Σ_i binom(-a, i) y^{2i} X^{1-2a-2i} / (2a+2i-1)
    let tail = move |x0: f64| -> Estimate {
        let q = (y / x0).powi(2);
        let mut term_coeff = 1.0;
        let mut acc = 0.0;
        let mut last = 0.0;
        for i in 0..60 {
            let t = term_coeff * q.powi(i) * x0.powf(1.0 - 2.0 * a) / (2.0 * a + 2.0 * i as f64 - 1.0);
            acc += t;
            last = t.abs();
            if last < 1e-18 * acc.abs() {
                break;
            }
            term_coeff *= -(a + i as f64) / (i as f64 + 1.0);
        }
        Estimate { value: c * ys * acc, error: c * ys * last }
    };
    let periodized = |x: f64| -> f64 {
        let right = gregory_tail_sum(kernel, x, 2.0 * PI, 24, tail);
        let left = gregory_tail_sum(kernel, -x, 2.0 * PI, 24, tail);
        kernel(x) + right.value + left.value
    };
    // graded panels around the peak at x = 0
    let rule = GaussLegendre::default_rule();
    let mut breaks = vec![0.0];
    let mut b = y.min(PI) / 8.0;
    while b < PI {
        breaks.push(b);
        b *= 2.0;
    }
    breaks.push(PI);
    let integrand = |x: f64| v.eval(&[z - x]) * periodized(x);
    let mut fine = 0.0;
    let mut coarse = 0.0;
    for w in breaks.windows(2) {
        for sign in [1.0, -1.0] {
            let (lo, hi) = (sign * w[0], sign * w[1]);
            fine += sign * rule.integrate_panels(integrand, lo, hi, 4);
            coarse += sign * rule.integrate_panels(integrand, lo, hi, 2);
        }
    }
    Ok(Estimate { value: fine, error: (fine - coarse).abs() })
}

/// Conormal limit `-lim y^{1-2σ} ∂_y V` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConormalLimit {
    pub limit_field: TorusFunction,
    /// Extrapolated coefficients `k ↦ lim`, for comparison with the spectral side.
    pub limit_coeffs: SpectralFunction,
    pub richardson_error: f64,
}

pub fn default_heights() -> Vec<f64> {
    (0..9).map(|j| 0.1 * 0.5f64.powi(j)).collect()
}

/// Powers of `y` in the small-height expansion of the weighted derivative.
fn expansion_exponents(sigma: f64, count: usize) -> Vec<f64> {
    let mut e: Vec<f64> = (0..count)
        .flat_map(|j| [2.0 - 2.0 * sigma + 2.0 * j as f64, 2.0 + 2.0 * j as f64])
        .collect();
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    e.truncate(count);
    e
}

/// Fits `L + Σ a_e (y/y_0)^e` through the samples and returns `L`.
fn extrapolate(heights: &[f64], values: &[f64], exponents: &[f64]) -> Result<f64> {
    let n = heights.len();
    let y0 = heights[0];
    let mut m = DMatrix::zeros(n, n);
    for (i, &y) in heights.iter().enumerate() {
        m[(i, 0)] = 1.0;
        for (j, &e) in exponents.iter().take(n - 1).enumerate() {
            m[(i, j + 1)] = (y / y0).powf(e);
        }
    }
    let sol = m
        .lu()
        .solve(&DVector::from_column_slice(values))
        .ok_or_else(|| Error::Accuracy { what: "Richardson system".into(), estimate: f64::INFINITY })?;
    Ok(sol[0])
}

pub fn conormal_limit(v: &SpectralFunction, order: &FracOrder, grid: &TorusGrid, heights: &[f64]) -> Result<ConormalLimit> {
    if heights.len() < 4 {
        return Err(Error::Input("need at least 4 heights".into()));
    }
    if heights.iter().any(|&y| !(y > 0.0 && y.is_finite())) || heights.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Input("heights must be positive and strictly decreasing".into()));
    }
    let sigma = order.sigma();
    let exponents = expansion_exponents(sigma, heights.len());
    let mut error = 0.0f64;
    let coeffs = v.try_map_multiplier(|k| {
        let r = modulus(k);
        if r == 0.0 {
            return Ok(0.0);
        }
        let samples = heights
            .iter()
            .map(|&y| Ok(-y.powf(1.0 - 2.0 * sigma) * r * extension_multiplier_derivative(order, r * y)?))
            .collect::<Result<Vec<f64>>>()?;
        let full = extrapolate(heights, &samples, &exponents)?;
        let reduced = extrapolate(&heights[1..], &samples[1..], &exponents)?;
        error = error.max((full - reduced).abs() / full.abs().max(1e-300));
        Ok(full)
    })?;
    if !error.is_finite() || error > 1e-3 {
        return Err(Error::Accuracy { what: "conormal extrapolation".into(), estimate: error });
    }
    let limit_field = synthesize(&coeffs, grid)?;
    Ok(ConormalLimit { limit_field, limit_coeffs: coeffs, richardson_error: error })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::frac_laplacian_spectral;

    #[test]
    fn half_order_multiplier_is_exponential() {
        let o = FracOrder::new(0.5).unwrap();
        assert_eq!(extension_multiplier(&o, 0.0).unwrap(), 1.0);
        assert!((extension_multiplier(&o, 1.0).unwrap() - (-1f64).exp()).abs() < 1e-15);
        // the integral route at an order near 1/2 is continuous with the closed form
        let near = FracOrder::new(0.5 + 1e-9).unwrap();
        for s in [0.1, 1.0, 5.0] {
            assert!((extension_multiplier(&near, s).unwrap() - (-s).exp()).abs() < 1e-8);
        }
    }

    #[test]
    fn multiplier_solves_radial_equation() {
        for sigma in [0.2, 0.7] {
            let o = FracOrder::new(sigma).unwrap();
            let m = |x: f64| extension_multiplier(&o, x).unwrap();
            // Richardson-extrapolated central differences, O(h⁴)
            let d1h = |s: f64, h: f64| (m(s + h) - m(s - h)) / (2.0 * h);
            let d2h = |s: f64, h: f64| (m(s + h) - 2.0 * m(s) + m(s - h)) / (h * h);
            let h = 2e-3;
            for s in [0.1, 0.5, 2.0, 10.0] {
                let fd1 = (4.0 * d1h(s, h / 2.0) - d1h(s, h)) / 3.0;
                let d2 = (4.0 * d2h(s, h / 2.0) - d2h(s, h)) / 3.0;
                let d1 = extension_multiplier_derivative(&o, s).unwrap();
                assert!((d1 - fd1).abs() < 1e-8, "{sigma} {s}: {d1} vs {fd1}");
                let res = d2 + (1.0 - 2.0 * sigma) / s * fd1 - m(s);
                assert!(res.abs() < 1e-6, "{sigma} {s}: {res}");
            }
        }
    }

    #[test]
    fn small_argument_slope() {
        let o = FracOrder::new(0.3).unwrap();
        let f = |s: f64| 1.0 - extension_multiplier(&o, s).unwrap();
        let slope = (f(1e-2) / f(1e-3)).ln() / 10f64.ln();
        assert!((slope - 0.6).abs() < 0.02, "{slope}");
        let lead = f(1e-5) / 1e-5f64.powf(0.6);
        assert!((lead - o.c_sigma() / 0.6).abs() < 1e-3 * lead, "{lead}");
    }

    #[test]
    fn extension_of_cosine_at_half_order() {
        let o = FracOrder::new(0.5).unwrap();
        let g = TorusGrid::new(1, 16).unwrap();
        let v = SpectralFunction::cosine(&[1], 1.0).unwrap();
        let e = extend(&v, &o, 1.0, &g).unwrap();
        for (j, x) in e.values().iter().enumerate() {
            assert!((x - (-1f64).exp() * g.coordinate(j).cos()).abs() < 1e-15);
        }
        assert!(extend(&v, &o, 0.0, &g).is_err());
    }

    #[test]
    fn convolution_matches_spectral_extension() {
        let v = SpectralFunction::random(1, 3, 21).unwrap();
        for (sigma, y) in [(0.3, 0.5), (0.5, 0.2), (0.8, 1.0)] {
            let o = FracOrder::new(sigma).unwrap();
            let field = ExtensionField::new(v.clone(), o);
            for z in [-2.0, 0.4, 3.0] {
                let conv = extend_by_convolution(&v, &o, y, z).unwrap();
                let spec = field.eval(&[z], y).unwrap();
                assert!((conv.value - spec).abs() < 1e-8, "{sigma} {y} {z}: {} vs {spec}", conv.value);
            }
        }
    }

    #[test]
    fn conormal_recovers_c_sigma() {
        let g = TorusGrid::new(2, 16).unwrap();
        let v = SpectralFunction::random(2, 3, 5).unwrap();
        for sigma in [0.1, 0.3, 0.5, 0.9] {
            let o = FracOrder::new(sigma).unwrap();
            let lim = conormal_limit(&v, &o, &g, &default_heights()).unwrap();
            let spec = frac_laplacian_spectral(&v, &o).scale(o.c_sigma());
            for (k, c) in spec.iter() {
                assert!((lim.limit_coeffs.get(k) - c).norm() <= 1e-7 * c.norm().max(1e-12), "{sigma} {k:?}");
            }
        }
    }
}
