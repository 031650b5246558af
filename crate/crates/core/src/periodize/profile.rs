use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Gaussian,
    GaussianTimesMonomial,
}

/// `φ(x) = Π (x_a - x0_a)^{m_a} · e^{-a|x-x0|²}` on `ℝⁿ`.
///
/// The monomial is taken relative to the center so that translating the
/// profile is a pure change of `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwartzProfile {
    kind: ProfileKind,
    width: f64,
    center: Vec<f64>,
    monomial: Vec<u32>,
}

impl SchwartzProfile {
    pub fn gaussian(width: f64, center: Vec<f64>) -> Result<Self> {
        let dim = center.len();
        Self::build(ProfileKind::Gaussian, width, center, vec![0; dim])
    }

    pub fn gaussian_times_monomial(width: f64, center: Vec<f64>, monomial: Vec<u32>) -> Result<Self> {
        if monomial.len() != center.len() {
            return Err(Error::Input("monomial and center dimensions differ".into()));
        }
        Self::build(ProfileKind::GaussianTimesMonomial, width, center, monomial)
    }

    fn build(kind: ProfileKind, width: f64, center: Vec<f64>, monomial: Vec<u32>) -> Result<Self> {
        if !(1..=3).contains(&center.len()) {
            return Err(Error::Input(format!("dimension must be 1, 2 or 3, got {}", center.len())));
        }
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::Input(format!("width must be positive, got {width}")));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::Input("center must be finite".into()));
        }
        if monomial.iter().any(|&m| m > 12) {
            return Err(Error::Unsupported("monomial degree above 12".into()));
        }
        Ok(Self { kind, width, center, monomial })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn monomial(&self) -> &[u32] {
        &self.monomial
    }

    pub fn translated(&self, shift: &[f64]) -> Self {
        let center = self.center.iter().zip(shift).map(|(c, s)| c + s).collect();
        Self { center, ..self.clone() }
    }

    pub fn scaled_width(&self, width: f64) -> Result<Self> {
        Self::build(self.kind, width, self.center.clone(), self.monomial.clone())
    }

    /// One-dimensional factor along `axis`, as a function of `x_axis`.
    pub fn axis_factor(&self, axis: usize, x: f64) -> f64 {
        let d = x - self.center[axis];
        d.powi(self.monomial[axis] as i32) * (-self.width * d * d).exp()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (0..self.dim()).map(|a| self.axis_factor(a, x[a])).product()
    }

    /// One-dimensional factor of the Fourier transform along `axis`.
    pub fn axis_fourier(&self, axis: usize, xi: f64) -> Complex64 {
        let a = self.width;
        let m = self.monomial[axis];
        let s = 2.0 * a.sqrt();
        let base = (PI / a).sqrt() / (2.0 * PI) * (-xi * xi / (4.0 * a)).exp();
        let poly = hermite(m, xi / s) / s.powi(m as i32);
        let phase = Complex64::new(0.0, -1.0).powu(m) * Complex64::from_polar(1.0, -xi * self.center[axis]);
        phase * (base * poly)
    }

    /// `φ̂(ξ) = (2π)^{-n} ∫ φ(x) e^{-ix·ξ} dx`.
    pub fn fourier(&self, xi: &[f64]) -> Complex64 {
        (0..self.dim()).map(|a| self.axis_fourier(a, xi[a])).product()
    }

    /// `sup |axis factor|`, attained at `|x - x0| = sqrt(m/(2a))`.
    pub fn axis_sup(&self, axis: usize) -> f64 {
        let m = self.monomial[axis] as f64;
        if m == 0.0 {
            return 1.0;
        }
        let r = (m / (2.0 * self.width)).sqrt();
        r.powf(m) * (-self.width * r * r).exp()
    }

    /// Radius beyond which `|axis factor|` is decreasing in `|x - x0|`.
    pub fn axis_monotone_radius(&self, axis: usize) -> f64 {
        (self.monomial[axis] as f64 / (2.0 * self.width)).sqrt()
    }

    /// Upper bound for `|axis_fourier(ξ)|` that is non-increasing in `|ξ|`
    /// beyond [`Self::fourier_monotone_radius`].
    pub fn axis_fourier_bound(&self, axis: usize, xi: f64) -> f64 {
        let a = self.width;
        let m = self.monomial[axis];
        let s = 2.0 * a.sqrt();
        let base = (PI / a).sqrt() / (2.0 * PI) * (-xi * xi / (4.0 * a)).exp();
        base * hermite_abs_bound(m, (xi / s).abs()) / s.powi(m as i32)
    }

    pub fn fourier_monotone_radius(&self, axis: usize) -> f64 {
        // t^j e^{-t²} decreases for t ≥ sqrt(j/2); in ξ units t = ξ/(2√a)
        let m = self.monomial[axis] as f64;
        2.0 * self.width.sqrt() * (m / 2.0).sqrt()
    }
}

/// Physicists' Hermite polynomial `H_m(t)`.
pub fn hermite(m: u32, t: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * t);
    if m == 0 {
        return h0;
    }
    for k in 1..m {
        let h2 = 2.0 * t * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// `Σ |coefficient_j| t^j` for `H_m`, an increasing majorant of `|H_m(t)|` on `t ≥ 0`.
fn hermite_abs_bound(m: u32, t: f64) -> f64 {
    let mut prev = vec![1.0];
    let mut cur = vec![0.0, 2.0];
    if m == 0 {
        return 1.0;
    }
    for k in 1..m {
        let mut next = vec![0.0; cur.len() + 1];
        for (j, c) in cur.iter().enumerate() {
            next[j + 1] += 2.0 * c;
        }
        for (j, c) in prev.iter().enumerate() {
            next[j] -= 2.0 * k as f64 * c;
        }
        prev = cur;
        cur = next;
    }
    cur.iter().rev().fold(0.0, |acc, c| acc * t + c.abs())
}

impl fmt::Display for SchwartzProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ProfileKind::Gaussian => "gaussian",
            ProfileKind::GaussianTimesMonomial => "gaussian_times_monomial",
        };
        let center: Vec<String> = self.center.iter().map(|c| format!("{c:.16e}")).collect();
        let mono: Vec<String> = self.monomial.iter().map(|m| m.to_string()).collect();
        write!(
            f,
            "kind={kind} a={:.16e} center={} monomial={}",
            self.width,
            center.join(","),
            mono.join(",")
        )
    }
}

impl FromStr for SchwartzProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (mut kind, mut a, mut center, mut mono) = (None, None, None, None);
        for field in s.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {field}")))?;
            let floats = |v: &str| -> Result<Vec<f64>> {
                v.split(',')
                    .map(|x| x.parse::<f64>().map_err(|e| Error::Parse(format!("{x}: {e}"))))
                    .collect()
            };
            match key {
                "kind" => kind = Some(value.to_string()),
                "a" => a = Some(value.parse::<f64>().map_err(|e| Error::Parse(format!("{value}: {e}")))?),
                "center" => center = Some(floats(value)?),
                "monomial" => {
                    mono = Some(
                        value
                            .split(',')
                            .map(|x| x.parse::<u32>().map_err(|e| Error::Parse(format!("{x}: {e}"))))
                            .collect::<Result<Vec<_>>>()?,
                    )
                }
                _ => return Err(Error::Parse(format!("unknown field {key}"))),
            }
        }
        let a = a.ok_or_else(|| Error::Parse("missing a=".into()))?;
        let center = center.ok_or_else(|| Error::Parse("missing center=".into()))?;
        match kind.as_deref() {
            Some("gaussian") => Self::gaussian(a, center),
            Some("gaussian_times_monomial") => {
                let mono = mono.ok_or_else(|| Error::Parse("missing monomial=".into()))?;
                Self::gaussian_times_monomial(a, center, mono)
            }
            other => Err(Error::Parse(format!("unknown kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::GaussLegendre;

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(0, 0.7), 1.0);
        assert!((hermite(3, 0.5) - (8.0 * 0.125 - 12.0 * 0.5)).abs() < 1e-15);
        assert!((hermite(4, 1.5) - (16.0 * 5.0625 - 48.0 * 2.25 + 12.0)).abs() < 1e-12);
        assert!(hermite_abs_bound(4, 1.5) >= hermite(4, 1.5).abs());
    }

    #[test]
    fn fourier_matches_quadrature() {
        let rule = GaussLegendre::default_rule();
        let p = SchwartzProfile::gaussian_times_monomial(0.8, vec![0.3], vec![3]).unwrap();
        for xi in [0.0, 0.7, 2.0] {
            let re = rule.integrate_panels(|x| p.eval(&[x]) * (xi * x).cos(), -12.0, 12.0, 40) / (2.0 * PI);
            let im = -rule.integrate_panels(|x| p.eval(&[x]) * (xi * x).sin(), -12.0, 12.0, 40) / (2.0 * PI);
            let f = p.fourier(&[xi]);
            assert!((f.re - re).abs() < 1e-13 && (f.im - im).abs() < 1e-13, "{xi}: {f} vs {re} {im}");
        }
    }

    #[test]
    fn record_round_trip() {
        let p = SchwartzProfile::gaussian_times_monomial(2.0, vec![0.1, -3.0], vec![1, 0]).unwrap();
        let back: SchwartzProfile = p.to_string().parse().unwrap();
        assert_eq!(back, p);
        let g: SchwartzProfile = "kind=gaussian a=0.5 center=0".parse().unwrap();
        assert_eq!(g, SchwartzProfile::gaussian(0.5, vec![0.0]).unwrap());
        assert!("kind=gaussian a=-1 center=0".parse::<SchwartzProfile>().is_err());
    }
}
