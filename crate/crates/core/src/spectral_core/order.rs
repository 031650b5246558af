use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special_fn::gamma;

/// Choice of the constant in front of the periodized kernel lattice sum.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum KernelConstant {
    /// `4^σ Γ(n/2+σ) / (π^{n/2} |Γ(-σ)|)`, consistent with the multiplier `|k|^{2σ}`.
    #[default]
    Standard,
    /// `2^σ Γ((n+σ)/2) / (|Γ(-σ/2)| π^{n/2})`, kept for comparison.
    Printed,
    Custom(f64),
}

/// Fractional order `σ ∈ (0,1)` with its derived constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    sigma: f64,
    c_sigma: f64,
    kernel: KernelConstant,
}

impl FracOrder {
    pub fn new(sigma: f64) -> Result<Self> {
        Self::with_kernel(sigma, KernelConstant::Standard)
    }

    pub fn with_kernel(sigma: f64, kernel: KernelConstant) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::Domain(format!("order must lie in (0,1), got {sigma}")));
        }
        if let KernelConstant::Custom(c) = kernel {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::Input(format!("kernel constant must be positive, got {c}")));
            }
        }
        let c_sigma = gamma(1.0 - sigma)? / (4f64.powf(sigma - 0.5) * gamma(sigma)?);
        Ok(Self { sigma, c_sigma, kernel })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// `Γ(1-σ) / (4^{σ-1/2} Γ(σ))`.
    pub fn c_sigma(&self) -> f64 {
        self.c_sigma
    }

    pub fn kernel_choice(&self) -> KernelConstant {
        self.kernel
    }

    pub fn kernel_const(&self, dim: usize) -> f64 {
        match self.kernel {
            KernelConstant::Standard => standard_kernel_const(dim, self.sigma),
            KernelConstant::Printed => printed_kernel_const(dim, self.sigma),
            KernelConstant::Custom(c) => c,
        }
    }
}

pub(crate) fn standard_kernel_const(dim: usize, sigma: f64) -> f64 {
    let h = 0.5 * dim as f64;
    4f64.powf(sigma) * gamma(h + sigma).unwrap() / (PI.powf(h) * gamma(-sigma).unwrap().abs())
}

pub(crate) fn printed_kernel_const(dim: usize, sigma: f64) -> f64 {
    let h = 0.5 * dim as f64;
    2f64.powf(sigma) * gamma(h + 0.5 * sigma).unwrap() / (gamma(-0.5 * sigma).unwrap().abs() * PI.powf(h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c_sigma_values() {
        assert_eq!(FracOrder::new(0.5).unwrap().c_sigma(), 1.0);
        let c = FracOrder::new(0.25).unwrap().c_sigma();
        assert!((c - 0.477988797486124995).abs() < 1e-13);
    }

    #[test]
    fn rejects_out_of_range() {
        for s in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(FracOrder::new(s).is_err());
        }
    }

    #[test]
    fn standard_constant_n1_half() {
        // 4^{1/2} Γ(1) / (π^{1/2} · 2√π) = 1/π
        let o = FracOrder::new(0.5).unwrap();
        assert!((o.kernel_const(1) - 1.0 / PI).abs() < 1e-14);
        let p = FracOrder::with_kernel(0.5, KernelConstant::Printed).unwrap();
        assert!((p.kernel_const(1) - o.kernel_const(1)).abs() > 1e-3);
    }
}
