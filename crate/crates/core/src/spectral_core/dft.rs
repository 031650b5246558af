use std::collections::BTreeMap;

use log::warn;
use num_complex::Complex64;

use super::function::{cube, norm_sq, SpectralFunction, TorusFunction};
use super::grid::TorusGrid;
use super::order::FracOrder;
use crate::error::{Error, Result};

/// Imaginary residue, relative to the coefficient l¹ norm, above which
/// synthesis fails.
pub const SYNTHESIS_TOLERANCE: f64 = 1e-10;

/// Contracts one axis of a row-major complex tensor with a dense matrix
/// `rows × shape[axis]`.
fn contract_axis(data: &[Complex64], shape: &[usize], axis: usize, matrix: &[Vec<Complex64>]) -> (Vec<Complex64>, Vec<usize>) {
    let pre: usize = shape[..axis].iter().product();
    let len = shape[axis];
    let post: usize = shape[axis + 1..].iter().product();
    let rows = matrix.len();
    let mut out = vec![Complex64::default(); pre * rows * post];
    for p in 0..pre {
        for (r, row) in matrix.iter().enumerate() {
            let dst = &mut out[(p * rows + r) * post..(p * rows + r + 1) * post];
            for (j, m) in row.iter().enumerate().take(len) {
                let src = &data[(p * len + j) * post..(p * len + j + 1) * post];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += m * s;
                }
            }
        }
    }
    let mut new_shape = shape.to_vec();
    new_shape[axis] = rows;
    (out, new_shape)
}

/// Discrete Fourier coefficients `c_k ≈ (2π)^{-n} ∫ v e^{-ik·z}` for
/// `|k|_∞ ≤ cutoff`, computed by the trapezoid rule (exact for trigonometric
/// polynomials of degree `< N/2`).
pub fn analyze(v: &TorusFunction, cutoff: usize) -> Result<SpectralFunction> {
    let grid = v.grid();
    let n = grid.points();
    if 2 * cutoff >= n {
        return Err(Error::Aliasing { cutoff, half: n / 2 });
    }
    let nodes = grid.axis_nodes();
    let m = cutoff as i64;
    let matrix: Vec<Vec<Complex64>> = (-m..=m)
        .map(|k| nodes.iter().map(|&z| Complex64::from_polar(1.0 / n as f64, -(k as f64) * z)).collect())
        .collect();
    let mut data: Vec<Complex64> = v.values().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let mut shape = vec![n; grid.dim()];
    for axis in 0..grid.dim() {
        (data, shape) = contract_axis(&data, &shape, axis, &matrix);
    }
    let mut coeffs = BTreeMap::new();
    for (flat, k) in cube(grid.dim(), cutoff).into_iter().enumerate() {
        coeffs.insert(k, data[flat]);
    }
    let mut s = SpectralFunction::from_map(grid.dim(), cutoff, coeffs);
    // enforce exact Hermitian symmetry: the input is real
    let sym: Vec<_> = s
        .iter()
        .map(|(k, c)| {
            let neg: Vec<i64> = k.iter().map(|x| -x).collect();
            (k.clone(), 0.5 * (c + s.get(&neg).conj()))
        })
        .collect();
    s = SpectralFunction::from_map(grid.dim(), cutoff, sym.into_iter().collect());
    Ok(s)
}

/// Evaluates `Σ c_k e^{ik·z}` on the grid nodes.
pub fn synthesize(s: &SpectralFunction, grid: &TorusGrid) -> Result<TorusFunction> {
    if s.dim() != grid.dim() {
        return Err(Error::Input("dimension mismatch between coefficients and grid".into()));
    }
    let scale = s.l1_norm().max(f64::MIN_POSITIVE);
    let residue = s.hermitian_residue();
    if residue > SYNTHESIS_TOLERANCE * scale {
        return Err(Error::Symmetry(residue));
    }
    let cutoff = s.cutoff();
    let width = 2 * cutoff + 1;
    let mut data = vec![Complex64::default(); width.pow(grid.dim() as u32)];
    for (k, c) in s.iter() {
        let flat = k.iter().fold(0usize, |acc, &x| acc * width + (x + cutoff as i64) as usize);
        data[flat] = *c;
    }
    let m = cutoff as i64;
    let matrix: Vec<Vec<Complex64>> = grid
        .axis_nodes()
        .iter()
        .map(|&z| (-m..=m).map(|k| Complex64::from_polar(1.0, k as f64 * z)).collect())
        .collect();
    let mut shape = vec![width; grid.dim()];
    for axis in 0..grid.dim() {
        (data, shape) = contract_axis(&data, &shape, axis, &matrix);
    }
    let imag = data.iter().fold(0.0f64, |a, c| a.max(c.im.abs()));
    if imag > SYNTHESIS_TOLERANCE * scale {
        return Err(Error::Symmetry(imag));
    }
    if residue > 0.0 {
        warn!("discarding imaginary residue {imag:e} in synthesis");
    }
    TorusFunction::new(*grid, data.iter().map(|c| c.re).collect())
}

/// Applies the multiplier `|k|^{2σ}`.
pub fn frac_laplacian_spectral(s: &SpectralFunction, order: &FracOrder) -> SpectralFunction {
    let sigma = order.sigma();
    s.map_multiplier(|k| {
        let r2 = norm_sq(k);
        if r2 == 0.0 {
            0.0
        } else {
            r2.powf(sigma)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_analyzes_to_two_halves() {
        let g = TorusGrid::new(1, 16).unwrap();
        let v = TorusFunction::from_fn(g, |z| z[0].cos()).unwrap();
        let s = analyze(&v, 7).unwrap();
        for (k, c) in s.iter() {
            let expect = if k[0].abs() == 1 { 0.5 } else { 0.0 };
            assert!((c - Complex64::new(expect, 0.0)).norm() < 1e-15, "{k:?} {c}");
        }
    }

    #[test]
    fn constant_analyzes_to_c0() {
        let g = TorusGrid::new(2, 8).unwrap();
        let v = TorusFunction::from_fn(g, |_| 3.0).unwrap();
        let s = analyze(&v, 3).unwrap();
        assert!((s.get(&[0, 0]).re - 3.0).abs() < 1e-14);
        assert!(s.iter().filter(|(k, _)| **k != vec![0, 0]).all(|(_, c)| c.norm() < 1e-14));
    }

    #[test]
    fn aliasing_rejected() {
        let g = TorusGrid::new(1, 16).unwrap();
        let v = TorusFunction::from_fn(g, |_| 1.0).unwrap();
        assert_eq!(analyze(&v, 8), Err(Error::Aliasing { cutoff: 8, half: 8 }));
    }

    #[test]
    fn synthesize_simple() {
        let g = TorusGrid::new(1, 12).unwrap();
        let one = synthesize(&SpectralFunction::constant(1, 1.0).unwrap(), &g).unwrap();
        assert!(one.values().iter().all(|&x| (x - 1.0).abs() < 1e-15));
        let c = synthesize(&SpectralFunction::cosine(&[1], 1.0).unwrap(), &g).unwrap();
        for (j, x) in c.values().iter().enumerate() {
            assert!((x - g.coordinate(j).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn random_round_trip() {
        let g = TorusGrid::new(2, 32).unwrap();
        let s = SpectralFunction::random(2, 5, 11).unwrap();
        let v = synthesize(&s, &g).unwrap();
        let back = analyze(&v, 5).unwrap();
        let v2 = synthesize(&back, &g).unwrap();
        for (a, b) in v.values().iter().zip(v2.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (k, c) in s.iter() {
            assert!((back.get(k) - c).norm() < 1e-13);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let g = TorusGrid::new(1, 8).unwrap();
        let mut s = SpectralFunction::new(1, 1).unwrap();
        s.insert(vec![1], Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(synthesize(&s, &g), Err(Error::Symmetry(_))));
    }

    #[test]
    fn multiplier_examples() {
        let o = FracOrder::new(0.75).unwrap();
        let s = SpectralFunction::cosine(&[2], 1.0).unwrap();
        let l = frac_laplacian_spectral(&s, &o);
        assert!((l.eval(&[0.4]) - 2f64.powf(1.5) * 0.8f64.cos()).abs() < 1e-14);
        let c = frac_laplacian_spectral(&SpectralFunction::constant(1, 5.0).unwrap(), &o);
        assert_eq!(c.get(&[0]).norm(), 0.0);
        let half = FracOrder::new(0.5).unwrap();
        let m = SpectralFunction::cosine(&[1, 0], 1.0).unwrap();
        assert_eq!(frac_laplacian_spectral(&m, &half), m);
    }
}
