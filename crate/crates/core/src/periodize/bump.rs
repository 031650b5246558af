use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral_core::{wrap_point, SpectralFunction};

const NORMALIZATION: f64 = 315.0 / 256.0;

/// `∫_{-∞}^{s} η` for the unit mollifier `η(t) = (315/256)(1-t²)⁴` on `|t| < 1`.
fn mollifier_cdf(s: f64) -> f64 {
    if s <= -1.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let s2 = s * s;
    let p = s * (1.0 + s2 * (-4.0 / 3.0 + s2 * (6.0 / 5.0 + s2 * (-4.0 / 7.0 + s2 / 9.0))));
    0.5 + NORMALIZATION * p
}

/// Partition of unity `ψ = χ_Q * η_ε` (tensor product of the one-dimensional
/// smoothed indicator), with `Σ_k ψ(x + 2πk) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpPartition {
    dim: usize,
    eps: f64,
}

impl BumpPartition {
    pub fn new(dim: usize, eps: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Input(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if !(eps > 0.0 && eps < PI) {
            return Err(Error::Config(format!("mollifier width must lie in (0, π), got {eps}")));
        }
        let part = Self { dim, eps };
        let residue = part.unity_residue(64);
        if residue > 1e-10 {
            return Err(Error::Config(format!("partition of unity residue {residue:e}")));
        }
        Ok(part)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Half-width of the support cube.
    pub fn support_radius(&self) -> f64 {
        PI + self.eps
    }

    fn axis(&self, x: f64) -> f64 {
        mollifier_cdf((x + PI) / self.eps) - mollifier_cdf((x - PI) / self.eps)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        x.iter().map(|&xa| self.axis(xa)).product()
    }

    /// `max |Σ_k ψ(x+2πk) - 1|` over `samples` points per axis of one period.
    pub fn unity_residue(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|i| {
                let x = -PI + 2.0 * PI * (i as f64 + 0.5) / samples as f64;
                let s: f64 = (-1..=1).map(|k| self.axis(x + 2.0 * PI * k as f64)).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// `φ = ψ · Rϕ`, a compactly supported function on `ℝⁿ` whose periodization
/// is `ϕ`.
#[derive(Debug, Clone)]
pub struct LiftedFunction<'a> {
    torus: &'a SpectralFunction,
    part: BumpPartition,
}

impl LiftedFunction<'_> {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let w = self.part.eval(x);
        if w == 0.0 {
            0.0
        } else {
            w * self.torus.eval(&wrap_point(x))
        }
    }

    pub fn support_radius(&self) -> f64 {
        self.part.support_radius()
    }

    /// `Σ_k φ(z + 2πk)`; only neighbouring cells meet the support.
    pub fn periodize(&self, z: &[f64]) -> f64 {
        let dim = z.len();
        let mut total = 0.0;
        for code in 0..3usize.pow(dim as u32) {
            let mut c = code;
            let x: Vec<f64> = z
                .iter()
                .map(|&za| {
                    let k = (c % 3) as f64 - 1.0;
                    c /= 3;
                    za + 2.0 * PI * k
                })
                .collect();
            total += self.eval(&x);
        }
        total
    }
}

pub fn bump_lift<'a>(torus: &'a SpectralFunction, part: &BumpPartition) -> Result<LiftedFunction<'a>> {
    if torus.dim() != part.dim() {
        return Err(Error::Input("dimension mismatch between function and partition".into()));
    }
    let residue = part.unity_residue(256);
    if residue > 1e-10 {
        return Err(Error::Config(format!("partition of unity residue {residue:e}")));
    }
    Ok(LiftedFunction { torus, part: *part })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::GaussLegendre;

    #[test]
    fn mollifier_has_unit_mass() {
        let m = GaussLegendre::default_rule().integrate(|t| NORMALIZATION * (1.0 - t * t).powi(4), -1.0, 1.0);
        assert!((m - 1.0).abs() < 1e-14);
        assert!((mollifier_cdf(0.3) - 0.5 - GaussLegendre::default_rule().integrate(|t| NORMALIZATION * (1.0 - t * t).powi(4), 0.0, 0.3)).abs() < 1e-15);
    }

    #[test]
    fn lift_of_cosine_periodizes_back() {
        let part = BumpPartition::new(1, 0.5).unwrap();
        let v = SpectralFunction::cosine(&[1], 1.0).unwrap();
        let lift = bump_lift(&v, &part).unwrap();
        for i in 0..17 {
            let z = -PI + 0.37 * i as f64;
            assert!((lift.periodize(&[z]) - z.cos()).abs() < 1e-12);
        }
        assert_eq!(lift.eval(&[PI + 0.6]), 0.0);
    }

    #[test]
    fn lift_integrates_to_mean() {
        let part = BumpPartition::new(1, 0.8).unwrap();
        let v = SpectralFunction::random(1, 2, 3).unwrap();
        let lift = bump_lift(&v, &part).unwrap();
        let r = part.support_radius();
        let integral = GaussLegendre::default_rule().integrate_panels(|x| lift.eval(&[x]), -r, r, 64);
        assert!((integral - 2.0 * PI * v.get(&[0]).re).abs() < 1e-10);
    }
}
