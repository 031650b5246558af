use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use super::heat::{axis_heat, AxisHeat};
use super::rn::log_time_trapezoid;
use crate::error::{Error, Result};
use crate::periodize::SchwartzProfile;
use crate::special_fn::gamma;
use crate::spectral_core::{check_transference_condition, CoefficientSource, FracOrder, SpectralFunction};

/// Quadrature settings for [`verify_transference`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransferenceConfig {
    /// Pass threshold, relative to `1 + |rhs|`.
    pub tol: f64,
    /// Step of the trapezoid rule in `s = ln t`.
    pub time_step: f64,
    /// Points per period of the spatial trapezoid; chosen from the profile if `None`.
    pub points: Option<usize>,
    /// Upper end `T` of the time integral.
    pub time_horizon: f64,
}

impl Default for TransferenceConfig {
    fn default() -> Self {
        Self { tol: 1e-7, time_step: 0.05, points: None, time_horizon: 60.0 }
    }
}

/// Error components of the `ℝⁿ` side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorBudget {
    /// Spatial trapezoid: change when the mesh is halved.
    pub spatial: f64,
    /// Log-time trapezoid: change when the step is doubled.
    pub time: f64,
    /// Time integral beyond the horizon.
    pub truncation: f64,
    pub rounding: f64,
}

impl ErrorBudget {
    pub fn total(&self) -> f64 {
        self.spatial + self.time + self.truncation + self.rounding
    }
}

/// Both sides of `∫ (Rv)(-Δ)^σ φ dx = ∫ v (-Δ)^σ (p_Σ φ) dz`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferenceReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub budget: ErrorBudget,
    /// `tol · (1 + |rhs|)`.
    pub tolerance: f64,
    pub passed: bool,
}

impl fmt::Display for TransferenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lhs = {:.16e}", self.lhs)?;
        writeln!(f, "rhs = {:.16e}", self.rhs)?;
        writeln!(f, "residual = {:.16e}", self.residual)?;
        writeln!(f, "budget.spatial = {:.16e}", self.budget.spatial)?;
        writeln!(f, "budget.time = {:.16e}", self.budget.time)?;
        writeln!(f, "budget.truncation = {:.16e}", self.budget.truncation)?;
        writeln!(f, "budget.rounding = {:.16e}", self.budget.rounding)?;
        writeln!(f, "budget.total = {:.16e}", self.budget.total())?;
        writeln!(f, "tolerance = {:.16e}", self.tolerance)?;
        write!(f, "status = {}", if self.passed { "PASS" } else { "FAIL" })
    }
}

/// `(2π)ⁿ Σ_k conj(c_k) |k|^{2σ} φ̂(k)`.
pub fn transference_rhs(v: &SpectralFunction, phi: &SchwartzProfile, order: &FracOrder) -> f64 {
    let sigma = order.sigma();
    let mut total = 0.0;
    for (k, c) in v.iter() {
        let r2: f64 = k.iter().map(|&x| (x * x) as f64).sum();
        if r2 == 0.0 {
            continue;
        }
        let xi: Vec<f64> = k.iter().map(|&x| x as f64).collect();
        total += (c.conj() * phi.fourier(&xi)).re * r2.powf(sigma);
    }
    (2.0 * PI).powi(v.dim() as i32) * total
}

fn axis_integral(a: f64, m: u32) -> f64 {
    if m % 2 == 1 {
        return 0.0;
    }
    let p = 0.5 * (m as f64 + 1.0);
    gamma(p).unwrap_or(f64::NAN) * a.powf(-p)
}

/// Per-axis trapezoid sums `h Σ_r e^{ikr} F(r)` of the 2π-folded heat data,
/// for `|k| ≤ cutoff`, indexed `k + cutoff`.
struct AxisTransforms {
    evolved: Vec<Complex64>,
    reference: Vec<Complex64>,
    difference: Vec<Complex64>,
}

fn axis_transforms(phi: &SchwartzProfile, axis: usize, points: usize, cutoff: usize, t: f64) -> AxisTransforms {
    let a = phi.width();
    let m = phi.monomial()[axis];
    let c = phi.center()[axis];
    let h = 2.0 * PI / points as f64;
    let reach = ((50.0 + 3.0 * m as f64) * (1.0 / a + 4.0 * t)).sqrt();
    let j_lo = ((c - reach - PI) / (2.0 * PI)).floor() as i64;
    let j_hi = ((c + reach + PI) / (2.0 * PI)).ceil() as i64;
    let width = 2 * cutoff + 1;
    let mut out = AxisTransforms {
        evolved: vec![Complex64::new(0.0, 0.0); width],
        reference: vec![Complex64::new(0.0, 0.0); width],
        difference: vec![Complex64::new(0.0, 0.0); width],
    };
    for p in 0..points {
        let r = -PI + h * (p + 1) as f64;
        let mut folded = AxisHeat { evolved: 0.0, reference: 0.0, difference: 0.0 };
        for j in j_lo..=j_hi {
            let y = r + 2.0 * PI * j as f64 - c;
            let ax = axis_heat(a, m, y, t, 0.0);
            folded.evolved += ax.evolved;
            folded.reference += ax.reference;
            folded.difference += ax.difference;
        }
        for (i, k) in (-(cutoff as i64)..=cutoff as i64).enumerate() {
            let e = Complex64::from_polar(h, k as f64 * r);
            out.evolved[i] += e * folded.evolved;
            out.reference[i] += e * folded.reference;
            out.difference[i] += e * folded.difference;
        }
    }
    out
}

/// `(∫ Rv G_tφ - ∫ Rv φ, ∫ Rv φ)` by the lattice-aligned trapezoid rule.
fn heat_pairing(v: &SpectralFunction, phi: &SchwartzProfile, points: usize, t: f64) -> (f64, f64) {
    let n = v.dim();
    let cutoff = v.cutoff();
    let axes: Vec<AxisTransforms> = (0..n).map(|ax| axis_transforms(phi, ax, points, cutoff, t)).collect();
    let mut diff = Complex64::new(0.0, 0.0);
    let mut base = Complex64::new(0.0, 0.0);
    for (k, c) in v.iter() {
        let idx: Vec<usize> = k.iter().map(|&x| (x + cutoff as i64) as usize).collect();
        let mut term = Complex64::new(0.0, 0.0);
        for a in 0..n {
            let mut prod = axes[a].difference[idx[a]];
            for b in 0..n {
                if b < a {
                    prod *= axes[b].evolved[idx[b]];
                } else if b > a {
                    prod *= axes[b].reference[idx[b]];
                }
            }
            term += prod;
        }
        diff += c * term;
        base += c * (0..n).map(|b| axes[b].reference[idx[b]]).product::<Complex64>();
    }
    (diff.re, base.re)
}

fn default_points(v: &SpectralFunction, phi: &SchwartzProfile) -> usize {
    let m = phi.monomial().iter().copied().max().unwrap_or(0) as f64;
    let need = v.cutoff() as f64 + (4.0 * phi.width() * (50.0 + 3.0 * m)).sqrt() + 8.0;
    let p = need.ceil() as usize;
    (p + p % 2).max(16)
}

/// `∫_{ℝⁿ} (Rv)(-Δ)^σ φ dx` through the heat semigroup:
/// `(H_0 - H_∞) + Γ(-σ)^{-1} ∫_0^∞ R(t) t^{-1-σ} dt` with `H(t) = ∫ Rv G_tφ`,
/// `H_∞ = c_0 ∫φ` and `R = (H - H_0) + (H_0 - H_∞)(1 - e^{-t})`.
fn lhs_at(v: &SpectralFunction, phi: &SchwartzProfile, sigma: f64, points: usize, cfg: &TransferenceConfig) -> Result<(f64, f64, f64)> {
    let n = v.dim();
    let mass: f64 = (0..n).map(|ax| axis_integral(phi.width(), phi.monomial()[ax])).product();
    let h_inf = v.get(&vec![0; n]).re * mass;
    let (_, h0) = heat_pairing(v, phi, points, 0.0);
    let jump = h0 - h_inf;
    let remainder = |t: f64| {
        let (d, _) = heat_pairing(v, phi, points, t);
        d - jump * (-t).exp_m1()
    };
    let s_max = cfg.time_horizon.ln();
    let est = log_time_trapezoid(&remainder, sigma, s_max, cfg.time_step);
    let gm = gamma(-sigma)?;
    let t_max = cfg.time_horizon;
    // R decays at least like e^{-t} past the horizon
    let tail = (remainder(t_max).abs() + jump.abs() * (-t_max).exp()) * t_max.powf(-1.0 - sigma) / gm.abs();
    Ok((jump + est.value / gm, est.error / gm.abs(), tail))
}

/// Both sides of the transference identity for a band-limited `v` and a
/// Gaussian-family `φ`.
pub fn verify_transference(
    v: &SpectralFunction,
    phi: &SchwartzProfile,
    order: &FracOrder,
    cfg: &TransferenceConfig,
) -> Result<TransferenceReport> {
    if v.dim() != phi.dim() {
        return Err(Error::Input(format!("v has dimension {}, φ has {}", v.dim(), phi.dim())));
    }
    if !(cfg.tol > 0.0 && cfg.time_step > 0.0 && cfg.time_horizon > 1.0) {
        return Err(Error::Config("tol, time_step must be positive and time_horizon > 1".into()));
    }
    let cond = check_transference_condition(&CoefficientSource::Finite(v), v.cutoff())?;
    if !cond.holds {
        return Err(Error::Refused("v fails the transference condition".into()));
    }
    let sigma = order.sigma();
    let points = cfg.points.unwrap_or_else(|| default_points(v, phi));
    let (lhs, time_err, truncation) = lhs_at(v, phi, sigma, points, cfg)?;
    let (fine, _, _) = lhs_at(v, phi, sigma, 2 * points, cfg)?;
    let rhs = transference_rhs(v, phi, order);
    let scale = v.l1_norm() * (1.0 + rhs.abs() + lhs.abs());
    let budget = ErrorBudget {
        spatial: (fine - lhs).abs(),
        time: time_err,
        truncation,
        rounding: 1e3 * f64::EPSILON * scale,
    };
    let residual = (lhs - rhs).abs();
    let tolerance = cfg.tol * (1.0 + rhs.abs());
    let passed = residual <= tolerance && budget.total() <= tolerance;
    Ok(TransferenceReport { lhs, rhs, residual, budget, tolerance, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss(n: usize, a: f64) -> SchwartzProfile {
        SchwartzProfile::gaussian(a, vec![0.0; n]).unwrap()
    }

    #[test]
    fn cosine_half_order_closed_form() {
        let v = SpectralFunction::cosine(&[1], 1.0).unwrap();
        let order = FracOrder::new(0.5).unwrap();
        let r = verify_transference(&v, &gauss(1, 0.5), &order, &TransferenceConfig::default()).unwrap();
        // sqrt(2π) e^{-1/2}
        assert!((r.rhs - 1.5203469010662808056).abs() < 1e-13, "{}", r.rhs);
        assert!(r.residual < 1e-7, "{r}");
        assert!(r.passed, "{r}");
    }

    #[test]
    fn constant_gives_zero() {
        let v = SpectralFunction::constant(2, 1.7).unwrap();
        let order = FracOrder::new(0.3).unwrap();
        let r = verify_transference(&v, &gauss(2, 2.0), &order, &TransferenceConfig::default()).unwrap();
        assert_eq!(r.rhs, 0.0);
        assert!(r.lhs.abs() < 1e-10, "{r}");
    }

    #[test]
    fn translation_by_period() {
        let v = SpectralFunction::random(1, 3, 5).unwrap();
        let order = FracOrder::new(0.25).unwrap();
        let phi = SchwartzProfile::gaussian(0.5, vec![0.4]).unwrap();
        let cfg = TransferenceConfig::default();
        let r0 = verify_transference(&v, &phi, &order, &cfg).unwrap();
        let r1 = verify_transference(&v, &phi.translated(&[2.0 * PI]), &order, &cfg).unwrap();
        assert!((r0.lhs - r1.lhs).abs() < 1e-12 && (r0.rhs - r1.rhs).abs() < 1e-12);
        assert!(r0.passed, "{r0}");
    }

    #[test]
    fn monomial_profile_two_dims() {
        let v = SpectralFunction::random(2, 2, 11).unwrap();
        let order = FracOrder::new(0.6).unwrap();
        let phi = SchwartzProfile::gaussian_times_monomial(1.0, vec![0.3, -0.2], vec![1, 2]).unwrap();
        let r = verify_transference(&v, &phi, &order, &TransferenceConfig::default()).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn dimension_mismatch_is_input_error() {
        let v = SpectralFunction::constant(1, 1.0).unwrap();
        let order = FracOrder::new(0.3).unwrap();
        let r = verify_transference(&v, &gauss(2, 1.0), &order, &TransferenceConfig::default());
        assert!(matches!(r, Err(Error::Input(_))));
    }
}
