use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::TorusGrid;
use crate::error::{Error, Result};

/// Samples of a real function on a [`TorusGrid`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusFunction {
    grid: TorusGrid,
    values: Vec<f64>,
}

impl TorusFunction {
    pub fn new(grid: TorusGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Input(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!("non-finite sample at index {i}")));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: Fn(&[f64]) -> f64>(grid: TorusGrid, f: F) -> Result<Self> {
        let values = grid.nodes().map(|p| f(&p)).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Lattice index `k ∈ ℤⁿ`.
pub type LatticeIndex = Vec<i64>;

/// Fourier coefficients `k ↦ c_k` with `|k|_∞ ≤ cutoff`; absent entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    dim: usize,
    cutoff: usize,
    coeffs: BTreeMap<LatticeIndex, Complex64>,
}

impl SpectralFunction {
    pub fn new(dim: usize, cutoff: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Input(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        Ok(Self { dim, cutoff, coeffs: BTreeMap::new() })
    }

    pub fn constant(dim: usize, value: f64) -> Result<Self> {
        let mut s = Self::new(dim, 0)?;
        s.insert(vec![0; dim], Complex64::new(value, 0.0))?;
        Ok(s)
    }

    /// `amplitude · cos(k·z)`.
    pub fn cosine(k: &[i64], amplitude: f64) -> Result<Self> {
        let mut s = Self::new(k.len(), linf(k) as usize)?;
        s.add_real_mode(k, Complex64::new(0.5 * amplitude, 0.0))?;
        Ok(s)
    }

    /// `amplitude · sin(k·z)`.
    pub fn sine(k: &[i64], amplitude: f64) -> Result<Self> {
        let mut s = Self::new(k.len(), linf(k) as usize)?;
        s.add_real_mode(k, Complex64::new(0.0, -0.5 * amplitude))?;
        Ok(s)
    }

    /// Random real trigonometric polynomial of degree `cutoff`, coefficients
    /// uniform in `[-1, 1]` (real and imaginary parts) on one half-lattice.
    pub fn random(dim: usize, cutoff: usize, seed: u64) -> Result<Self> {
        let mut s = Self::new(dim, cutoff)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for k in cube(dim, cutoff) {
            if is_zero(&k) {
                s.insert(k, Complex64::new(rng.gen_range(-1.0..1.0), 0.0))?;
            } else if is_canonical(&k) {
                let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                s.add_real_mode(&k, c)?;
            }
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn insert(&mut self, k: LatticeIndex, c: Complex64) -> Result<()> {
        self.check_index(&k)?;
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::Input(format!("non-finite coefficient at {k:?}")));
        }
        self.coeffs.insert(k, c);
        Ok(())
    }

    /// Adds `c` at `k` and `conj(c)` at `-k`.
    pub fn add_real_mode(&mut self, k: &[i64], c: Complex64) -> Result<()> {
        self.check_index(k)?;
        let neg: LatticeIndex = k.iter().map(|x| -x).collect();
        if is_zero(k) {
            *self.coeffs.entry(k.to_vec()).or_default() += Complex64::new(c.re, 0.0);
        } else {
            *self.coeffs.entry(k.to_vec()).or_default() += c;
            *self.coeffs.entry(neg).or_default() += c.conj();
        }
        Ok(())
    }

    fn check_index(&self, k: &[i64]) -> Result<()> {
        if k.len() != self.dim {
            return Err(Error::Input(format!("index {k:?} has wrong dimension")));
        }
        if linf(k) as usize > self.cutoff {
            return Err(Error::Input(format!("index {k:?} exceeds cutoff {}", self.cutoff)));
        }
        Ok(())
    }

    pub fn get(&self, k: &[i64]) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticeIndex, &Complex64)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `max_k |c_{-k} - conj(c_k)|`.
    pub fn hermitian_residue(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(k, c)| {
                let neg: LatticeIndex = k.iter().map(|x| -x).collect();
                (self.get(&neg) - c.conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of `|c_k|`, an upper bound for the sup norm.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).sum()
    }

    pub fn eval_complex(&self, z: &[f64]) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(k, c)| {
                let phase: f64 = k.iter().zip(z).map(|(&ki, &zi)| ki as f64 * zi).sum();
                c * Complex64::from_polar(1.0, phase)
            })
            .sum()
    }

    /// Real part of the series at `z`; the function is periodic so `z` need
    /// not be wrapped.
    pub fn eval(&self, z: &[f64]) -> f64 {
        self.eval_complex(z).re
    }

    pub fn map_multiplier<F: Fn(&[i64]) -> f64>(&self, m: F) -> Self {
        let coeffs = self.coeffs.iter().map(|(k, c)| (k.clone(), c * m(k))).collect();
        Self { dim: self.dim, cutoff: self.cutoff, coeffs }
    }

    pub fn try_map_multiplier<F: FnMut(&[i64]) -> Result<f64>>(&self, mut m: F) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (k, c) in &self.coeffs {
            coeffs.insert(k.clone(), c * m(k)?);
        }
        Ok(Self { dim: self.dim, cutoff: self.cutoff, coeffs })
    }

    /// Coefficients of `∂^γ v`: multiply by `Π (i k_a)^{γ_a}`.
    pub fn derivative(&self, gamma: &[usize]) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, c)| {
                let mut f = *c;
                for (&ka, &ga) in k.iter().zip(gamma) {
                    f *= Complex64::new(0.0, ka as f64).powu(ga as u32);
                }
                (k.clone(), f)
            })
            .collect();
        Self { dim: self.dim, cutoff: self.cutoff, coeffs }
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.map_multiplier(|_| factor)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Input("dimension mismatch".into()));
        }
        let mut out = Self::new(self.dim, self.cutoff.max(other.cutoff))?;
        for (k, c) in self.iter().chain(other.iter()) {
            *out.coeffs.entry(k.clone()).or_default() += c;
        }
        Ok(out)
    }

    pub(crate) fn from_map(dim: usize, cutoff: usize, coeffs: BTreeMap<LatticeIndex, Complex64>) -> Self {
        Self { dim, cutoff, coeffs }
    }
}

pub(crate) fn linf(k: &[i64]) -> i64 {
    k.iter().map(|x| x.abs()).max().unwrap_or(0)
}

pub(crate) fn norm_sq(k: &[i64]) -> f64 {
    k.iter().map(|&x| (x * x) as f64).sum()
}

fn is_zero(k: &[i64]) -> bool {
    k.iter().all(|&x| x == 0)
}

/// First nonzero component positive.
fn is_canonical(k: &[i64]) -> bool {
    k.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// All `k ∈ ℤⁿ` with `|k|_∞ ≤ radius`, lexicographic.
pub(crate) fn cube(dim: usize, radius: usize) -> Vec<LatticeIndex> {
    let r = radius as i64;
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_is_hermitian_and_seeded() {
        let a = SpectralFunction::random(2, 3, 7).unwrap();
        let b = SpectralFunction::random(2, 3, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.hermitian_residue(), 0.0);
        assert_eq!(a.len(), 49);
    }

    #[test]
    fn cosine_and_sine_evaluate() {
        let c = SpectralFunction::cosine(&[2], 1.5).unwrap();
        let s = SpectralFunction::sine(&[1, 1], 1.0).unwrap();
        assert!((c.eval(&[0.3]) - 1.5 * 0.6f64.cos()).abs() < 1e-15);
        assert!((s.eval(&[0.3, 0.4]) - 0.7f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn derivative_of_sine() {
        let s = SpectralFunction::sine(&[3], 1.0).unwrap();
        let d = s.derivative(&[1]);
        assert!((d.eval(&[0.2]) - 3.0 * 0.6f64.cos()).abs() < 1e-14);
    }

    #[test]
    fn cutoff_enforced() {
        let mut s = SpectralFunction::new(1, 2).unwrap();
        assert!(s.insert(vec![3], Complex64::new(1.0, 0.0)).is_err());
    }
}
