use std::f64::consts::PI;

use super::heat::{axis_heat, product_difference, AxisHeat};
use crate::error::{Error, Result};
use crate::periodize::SchwartzProfile;
use crate::quad::{tanh_sinh, Estimate, GaussLegendre};
use crate::spectral_core::FracOrder;
use crate::special_fn::{bessel_j, gamma};

/// How `(-Δ_{ℝⁿ})^σ φ` is evaluated for a Gaussian-family profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RnRoute {
    /// Radial reduction of `∫ |ξ|^{2σ} φ̂(ξ) e^{ix·ξ} dξ` (pure Gaussians).
    Fourier,
    /// `φ + Γ(-σ)^{-1} ∫_0^∞ (G_t φ - e^{-t} φ) t^{-1-σ} dt`.
    Heat,
}

/// `(-Δ_{ℝⁿ})^σ φ(x)`; pure Gaussians use the Fourier route, others the heat route.
pub fn frac_laplacian_rn_gaussian(phi: &SchwartzProfile, order: &FracOrder, x: &[f64]) -> Result<Estimate> {
    let route = if phi.monomial().iter().all(|&m| m == 0) { RnRoute::Fourier } else { RnRoute::Heat };
    frac_laplacian_rn_with(phi, order, x, route)
}

pub fn frac_laplacian_rn_with(phi: &SchwartzProfile, order: &FracOrder, x: &[f64], route: RnRoute) -> Result<Estimate> {
    if x.len() != phi.dim() {
        return Err(Error::Input("point dimension differs from profile".into()));
    }
    match route {
        RnRoute::Fourier => fourier_route(phi, order.sigma(), x),
        RnRoute::Heat => heat_route(phi, order.sigma(), x),
    }
}

fn fourier_route(phi: &SchwartzProfile, sigma: f64, x: &[f64]) -> Result<Estimate> {
    if phi.monomial().iter().any(|&m| m != 0) {
        return Err(Error::Unsupported("Fourier route needs a pure Gaussian".into()));
    }
    let n = phi.dim();
    let a = phi.width();
    let r = x.iter().zip(phi.center()).map(|(xi, ci)| (xi - ci).powi(2)).sum::<f64>().sqrt();
    let radial: Box<dyn Fn(f64) -> f64> = match n {
        1 => Box::new(move |rho: f64| 2.0 * rho.powf(2.0 * sigma) * (rho * r).cos()),
        2 => Box::new(move |rho: f64| 2.0 * PI * rho.powf(2.0 * sigma + 1.0) * bessel_j(0, rho * r)),
        _ => Box::new(move |rho: f64| {
            let sinc = if rho * r == 0.0 { 1.0 } else { (rho * r).sin() / (rho * r) };
            4.0 * PI * rho.powf(2.0 * sigma + 2.0) * sinc
        }),
    };
    let f = |rho: f64| radial(rho) * (-rho * rho / (4.0 * a)).exp();
    let prefactor = (PI / a).powf(0.5 * n as f64) / (2.0 * PI).powi(n as i32);
    // the power at the origin is only Hölder, so the first unit goes to tanh-sinh
    let head = tanh_sinh(&f, 0.0, 1.0, 1e-16, 1e-15);
    let top = (4.0 * a * 45.0).sqrt().max(2.0);
    let panels = ((top * (1.0 + r)) as usize).max(8);
    let rule = GaussLegendre::default_rule();
    let body = rule.integrate_panels(&f, 1.0, top, panels);
    let coarse = rule.integrate_panels(&f, 1.0, top, panels / 2);
    Ok(Estimate {
        value: prefactor * (head.value + body),
        error: prefactor * (head.error + (body - coarse).abs()),
    })
}

/// Start of the log-time grid; below it `g(t) ≈ g'(0) t` and the piece
/// `∫_0^{t0} g t^{-1-σ} dt` is added in closed form.
pub(crate) const LOG_TIME_START: f64 = -32.0;

/// `∫_0^{e^{s_max}} g(t) t^{-1-σ} dt` for `g(t) = O(t)` at 0, by the
/// trapezoid rule in `s = ln t`.
pub(crate) fn log_time_trapezoid<F: Fn(f64) -> f64>(g: F, sigma: f64, s_max: f64, step: f64) -> Estimate {
    let s_min = LOG_TIME_START;
    let count = ((s_max - s_min) / step).ceil() as usize;
    let h = (s_max - s_min) / count as f64;
    let values: Vec<f64> = (0..=count)
        .map(|i| {
            let s = s_min + h * i as f64;
            let t = s.exp();
            g(t) * t.powf(-sigma)
        })
        .collect();
    // below s_min the integrand is v0·e^{(1-σ)(s-s_min)}; continue the grid geometrically
    let rate = 1.0 - sigma;
    let head = |step: f64| values[0] * step * (0.5 + (-rate * step).exp() / -(-rate * step).exp_m1());
    let fine: f64 = head(h) + h * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[count]));
    let coarse: f64 = if count % 2 == 0 {
        let picks: Vec<f64> = values.iter().step_by(2).copied().collect();
        head(2.0 * h) + 2.0 * h * (picks.iter().sum::<f64>() - 0.5 * (picks[0] + picks[picks.len() - 1]))
    } else {
        fine
    };
    Estimate { value: fine, error: (fine - coarse).abs() }
}

fn heat_route(phi: &SchwartzProfile, sigma: f64, x: &[f64]) -> Result<Estimate> {
    let n = phi.dim();
    let lambda = 1.0 / n as f64;
    let rel: Vec<f64> = x.iter().zip(phi.center()).map(|(xi, ci)| xi - ci).collect();
    let g = |t: f64| -> f64 {
        let axes: Vec<AxisHeat> = (0..n)
            .map(|ax| axis_heat(phi.width(), phi.monomial()[ax], rel[ax], t, lambda))
            .collect();
        product_difference(&axes)
    };
    // integrand in s = ln t decays like t^{-n/2-σ} at ∞
    let s_max = 39.0 / (0.5 * n as f64 + sigma) + 4.0;
    let est = log_time_trapezoid(g, sigma, s_max, 0.1);
    let gm = gamma(-sigma)?;
    Ok(Estimate { value: phi.eval(x) + est.value / gm, error: est.error / gm.abs() })
}
