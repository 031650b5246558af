//! Analytically continued lattice moment sums
//! `F_γ(w) = Σ_{j ∈ ℤⁿ, j ≠ 0} j^γ |j|^{-2w}`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad::tanh_sinh;
use crate::special_fn::{gamma, upper_gamma};

/// Direct-sum box for the `t ≥ 1` part; `π|j|² ≥ 250` beyond it.
const DIRECT_RADIUS: i64 = 9;
/// Dual terms for `t ≤ 1`; `e^{-π m²}` with `m = 7` is below `1e-66`.
const DUAL_RADIUS: i64 = 7;

fn double_factorial_odd(p: usize) -> f64 {
    // (p-1)!! for even p
    (1..p).step_by(2).map(|k| k as f64).product()
}

/// Coefficients of `P_r(u)`, where `θ_{2r}(t) = (-1/π)^r Σ_m t^{-1/2-r} e^{-πm²/t} P_r(πm²/t)`.
fn dual_polynomial(r: usize) -> Vec<f64> {
    let mut p = vec![1.0];
    for k in 0..r {
        let mut next = vec![0.0; p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            // (u - k - 1/2) P - u P'
            next[i + 1] += c;
            next[i] -= (k as f64 + 0.5) * c;
            next[i] -= i as f64 * c;
        }
        p = next;
    }
    p
}

fn horner(coeffs: &[f64], u: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * u + c)
}

/// One-dimensional moment theta `θ_p(t) = Σ_j j^p e^{-πj²t}` for `t ∈ (0, 1]`,
/// split into the leading power `c_p t^{-(p+1)/2}` and the exponentially
/// small remainder.
struct AxisTheta {
    leading: f64,
    remainder: f64,
}

fn axis_theta(p: usize, t: f64, poly: &[f64]) -> AxisTheta {
    let r = p / 2;
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    let scale = sign / PI.powi(r as i32) * t.powf(-0.5 - r as f64);
    let leading = scale * horner(poly, 0.0);
    let mut remainder = 0.0;
    for m in 1..=DUAL_RADIUS {
        let u = PI * (m * m) as f64 / t;
        let e = (-u).exp();
        if e == 0.0 {
            break;
        }
        remainder += 2.0 * scale * e * horner(poly, u);
    }
    AxisTheta { leading, remainder }
}

/// `F_γ(w)`; multi-indices with an odd entry give zero. Requires `w > 0`
/// and `w ≠ (n+|γ|)/2`.
pub fn lattice_moment_zeta(gamma_idx: &[usize], w: f64) -> Result<f64> {
    let n = gamma_idx.len();
    if !(1..=3).contains(&n) {
        return Err(Error::Input(format!("dimension must be 1, 2 or 3, got {n}")));
    }
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::Domain(format!("moment zeta needs w > 0, got {w}")));
    }
    if gamma_idx.iter().any(|g| g % 2 == 1) {
        return Ok(0.0);
    }
    let order: usize = gamma_idx.iter().sum();
    let pole = 0.5 * (n + order) as f64;
    if (w - pole).abs() < 1e-12 {
        return Err(Error::Pole(w));
    }

    // t ≥ 1: direct lattice sum with incomplete gamma weights
    let mut direct = 0.0;
    let r = DIRECT_RADIUS;
    let mut j = vec![-r; n];
    loop {
        let norm2: i64 = j.iter().map(|x| x * x).sum();
        if norm2 > 0 {
            let mono: f64 = j.iter().zip(gamma_idx).map(|(&x, &g)| (x as f64).powi(g as i32)).product();
            if mono != 0.0 {
                let x = PI * norm2 as f64;
                direct += mono * upper_gamma(w, x)? * x.powf(-w);
            }
        }
        let mut a = n;
        loop {
            if a == 0 {
                break;
            }
            a -= 1;
            if j[a] < r {
                j[a] += 1;
                break;
            }
            j[a] = -r;
            if a == 0 {
                a = usize::MAX;
                break;
            }
        }
        if a == usize::MAX {
            break;
        }
    }

    // t ≤ 1: leading power integrates in closed form
    let leading_coeff: f64 = gamma_idx
        .iter()
        .map(|&g| double_factorial_odd(g) / (2.0 * PI).powf(0.5 * g as f64))
        .product();
    let mut singular = leading_coeff / (w - pole);
    if order == 0 {
        singular -= 1.0 / w;
    }

    let polys: Vec<Vec<f64>> = gamma_idx.iter().map(|&g| dual_polynomial(g / 2)).collect();
    let integrand = |t: f64| -> f64 {
        let thetas: Vec<AxisTheta> = gamma_idx
            .iter()
            .zip(&polys)
            .map(|(&g, p)| axis_theta(g, t, p))
            .collect();
        // Π(L+R) - ΠL, telescoped
        let mut diff = 0.0;
        for a in 0..n {
            let mut term = thetas[a].remainder;
            for (b, th) in thetas.iter().enumerate() {
                if b < a {
                    term *= th.leading + th.remainder;
                } else if b > a {
                    term *= th.leading;
                }
            }
            diff += term;
        }
        t.powf(w - 1.0) * diff
    };
    let smooth = tanh_sinh(integrand, 0.0, 1.0, 1e-17, 1e-15);

    let total = direct + singular + smooth.value;
    Ok(total * PI.powf(w) / gamma(w)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn one_dimension_is_riemann_zeta() {
        // F_p(w) = 2 ζ(2w - p); reference values from mpmath
        let zeta_2s_minus_1 = [(0.25, -0.20788622497735457), (0.75, -1.4603545088095868), (0.1, -0.12198707766977113), (0.9, -4.4375384158955516)];
        let zeta_2s_minus_3 = [(0.25, 0.0085169287778503305), (0.75, -0.025485201889833036), (0.1, 0.0090807294856852492), (0.9, -0.054788441243880429)];
        for (s, z) in zeta_2s_minus_1 {
            let f = lattice_moment_zeta(&[2], 0.5 + s).unwrap();
            assert!(close(f, 2.0 * z, 1e-12), "{s}: {f} vs {}", 2.0 * z);
        }
        for (s, z) in zeta_2s_minus_3 {
            let f = lattice_moment_zeta(&[4], 0.5 + s).unwrap();
            assert!(close(f, 2.0 * z, 1e-12), "{s}: {f} vs {}", 2.0 * z);
        }
        assert!(close(lattice_moment_zeta(&[2], 1.0).unwrap(), -1.0, 1e-13));
        assert!(lattice_moment_zeta(&[4], 1.0).unwrap().abs() < 1e-13);
        // ζ(2) = π²/6 at a convergent point
        assert!(close(lattice_moment_zeta(&[0], 1.0).unwrap(), PI * PI / 3.0, 1e-13));
    }

    #[test]
    fn two_dimensions_zeta_times_beta() {
        // Σ_{j≠0} |j|^{-2w} = 4 ζ(w) β(w); reference values from mpmath
        for (w, v) in [(0.25, -1.9216892211799301), (0.7, -8.0035529362896319), (1.7, 7.2956470766356067), (2.0, 6.0268120396919401)] {
            let f = lattice_moment_zeta(&[0, 0], w).unwrap();
            assert!(close(f, v, 1e-12), "{w}: {f} vs {v}");
        }
    }

    #[test]
    fn moment_consistency_identities() {
        for w in [2.3, 2.6, 2.9] {
            let a = lattice_moment_zeta(&[2, 0], w).unwrap();
            let b = lattice_moment_zeta(&[0, 2], w).unwrap();
            let c = lattice_moment_zeta(&[0, 0], w - 1.0).unwrap();
            assert!(close(a, b, 1e-13));
            assert!(close(a + b, c, 1e-12), "{w}: {} vs {c}", a + b);
            let d4 = lattice_moment_zeta(&[4, 0], w).unwrap()
                + 2.0 * lattice_moment_zeta(&[2, 2], w).unwrap()
                + lattice_moment_zeta(&[0, 4], w).unwrap();
            assert!(close(d4, lattice_moment_zeta(&[0, 0], w - 2.0).unwrap(), 1e-11));
        }
        let w = 1.6;
        let sum = lattice_moment_zeta(&[2, 0], w).unwrap() + lattice_moment_zeta(&[0, 2], w).unwrap();
        assert!(close(sum, lattice_moment_zeta(&[0, 0], w - 1.0).unwrap(), 1e-12));
        let w = 1.8;
        let three = lattice_moment_zeta(&[2, 0, 0], w).unwrap() * 3.0;
        assert!(close(three, lattice_moment_zeta(&[0, 0, 0], w - 1.0).unwrap(), 1e-12));
    }

    #[test]
    fn odd_moments_vanish_and_poles_reported() {
        assert_eq!(lattice_moment_zeta(&[1, 2], 1.4).unwrap(), 0.0);
        assert!(matches!(lattice_moment_zeta(&[2], 1.5), Err(Error::Pole(_))));
    }
}
