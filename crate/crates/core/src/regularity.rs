//! Discrete Hölder norms on the torus with the geodesic distance, and the
//! ratio experiments behind the Hölder estimates for `(-Δ)^σ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spectral_core::{
    analyze, frac_laplacian_spectral, synthesize, wrap, FracOrder, SpectralFunction, TorusFunction, TorusGrid,
};

/// Pairs drawn for the Hölder quotient when `n = 3`.
const SAMPLED_PAIRS: usize = 200_000;
const PAIR_SEED: u64 = 0x5eed_0c0a;

/// Euclidean norm of the coordinate-wise wrapped difference.
pub fn geodesic_distance(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "points of different dimension");
    x.iter().zip(y).map(|(a, b)| wrap(a - b).powi(2)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct HoelderNorm {
    pub k: usize,
    pub alpha: f64,
    /// `max_{|γ|=k} [D^γ v]_α` over node pairs.
    pub seminorm: f64,
    /// `Σ_{i≤k} max_{|γ|=i} sup |D^γ v|`.
    pub sup_part: f64,
    /// `sup_part + seminorm`.
    pub norm: f64,
    /// Flat node indices realizing the seminorm.
    pub argmax: (usize, usize),
}

fn multi_indices(dim: usize, order: usize) -> Vec<Vec<usize>> {
    if dim == 1 {
        return vec![vec![order]];
    }
    let mut out = Vec::new();
    for first in (0..=order).rev() {
        for mut rest in multi_indices(dim - 1, order - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `(quotient, x, y)` maximizing `|f(x) - f(y)| / d(x,y)^α` with
/// ties broken towards the smallest pair.
fn pair_sup(grid: &TorusGrid, f: &[f64], alpha: f64) -> (f64, usize, usize) {
    let len = grid.len();
    let n = grid.dim();
    let pick = |a: (f64, usize, usize), b: (f64, usize, usize)| {
        if b.0 > a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
            b
        } else {
            a
        }
    };
    if n <= 2 {
        let p = grid.points();
        let offsets: Vec<(Vec<usize>, f64)> = (1..len)
            .map(|o| {
                let idx = grid.multi_index(o);
                let d = idx
                    .iter()
                    .map(|&j| {
                        let m = j.min(p - j) as f64;
                        (m * grid.spacing()).powi(2)
                    })
                    .sum::<f64>()
                    .sqrt();
                (idx, d.powf(-alpha))
            })
            .collect();
        (0..len)
            .into_par_iter()
            .map(|x| {
                let xi = grid.multi_index(x);
                let mut best = (0.0, usize::MAX, usize::MAX);
                let mut yi = vec![0; n];
                for (off, inv) in &offsets {
                    for a in 0..n {
                        yi[a] = (xi[a] + off[a]) % p;
                    }
                    let y = grid.flat_index(&yi);
                    let q = (f[x] - f[y]).abs() * inv;
                    best = pick(best, (q, x.min(y), x.max(y)));
                }
                best
            })
            .reduce(|| (0.0, usize::MAX, usize::MAX), pick)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(PAIR_SEED);
        let pairs: Vec<(usize, usize)> = (0..SAMPLED_PAIRS)
            .map(|_| (rng.gen_range(0..len), rng.gen_range(0..len)))
            .filter(|(x, y)| x != y)
            .collect();
        pairs
            .par_iter()
            .map(|&(x, y)| {
                let d = geodesic_distance(&grid.node(x), &grid.node(y));
                ((f[x] - f[y]).abs() / d.powf(alpha), x.min(y), x.max(y))
            })
            .reduce(|| (0.0, usize::MAX, usize::MAX), pick)
    }
}

fn check_hoelder_args(k: usize, alpha: f64) -> Result<()> {
    if k > 2 {
        return Err(Error::Unsupported(format!("derivative order {k} > 2")));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Input(format!("α must lie in (0, 1], got {alpha}")));
    }
    Ok(())
}

/// `C^{k,α}` norm of a band-limited function sampled on `grid`; derivatives are spectral.
pub fn hoelder_norm_spectral(v: &SpectralFunction, grid: &TorusGrid, k: usize, alpha: f64) -> Result<HoelderNorm> {
    check_hoelder_args(k, alpha)?;
    let mut sup_part = 0.0;
    let mut top = (0.0, 0, 0);
    for order in 0..=k {
        let mut sup = 0.0f64;
        for gamma in multi_indices(grid.dim(), order) {
            let d = synthesize(&v.derivative(&gamma), grid)?;
            sup = sup.max(d.max_abs());
            if order == k {
                let q = pair_sup(grid, d.values(), alpha);
                if q.0 > top.0 || top.1 == top.2 {
                    top = q;
                }
            }
        }
        sup_part += sup;
    }
    let (seminorm, x, y) = top;
    let argmax = if x == usize::MAX { (0, 0) } else { (x, y) };
    Ok(HoelderNorm { k, alpha, seminorm, sup_part, norm: sup_part + seminorm, argmax })
}

/// `C^{k,α}` norm of grid samples. For `k ≥ 1` the samples must be
/// band-limited below the Nyquist frequency.
pub fn hoelder_norm(v: &TorusFunction, k: usize, alpha: f64) -> Result<HoelderNorm> {
    check_hoelder_args(k, alpha)?;
    let grid = v.grid();
    if k == 0 {
        let (seminorm, x, y) = pair_sup(grid, v.values(), alpha);
        let argmax = if x == usize::MAX { (0, 0) } else { (x, y) };
        let sup_part = v.max_abs();
        return Ok(HoelderNorm { k, alpha, seminorm, sup_part, norm: sup_part + seminorm, argmax });
    }
    let s = analyze(v, grid.points() / 2 - 1)?;
    let back = synthesize(&s, grid)?;
    let gap = back.values().iter().zip(v.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if gap > 1e-10 * (1.0 + v.max_abs()) {
        return Err(Error::Input(format!("samples carry Nyquist content ({gap:.3e}); derivatives undefined")));
    }
    hoelder_norm_spectral(&s, grid, k, alpha)
}

/// Which Hölder estimate is exercised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularityCase {
    /// `C^{0,α} → C^{0,α-2σ}`, `2σ < α`.
    ZeroToZero,
    /// `C^{1,α} → C^{1,α-2σ}`, `2σ < α`.
    OneToOne,
    /// `C^{1,α} → C^{0,α-2σ+1}`, `2σ ≥ α`, `α - 2σ + 1 ≠ 0`.
    OneToZero,
    /// `C^{k,α} → C^{l,β}` with `l + β = k + α - 2σ` not an integer.
    General { k: usize },
}

impl RegularityCase {
    /// Cases by number 1..4; the fourth takes `k`.
    pub fn from_number(case: u32, k: usize) -> Result<Self> {
        match case {
            1 => Ok(Self::ZeroToZero),
            2 => Ok(Self::OneToOne),
            3 => Ok(Self::OneToZero),
            4 => Ok(Self::General { k }),
            _ => Err(Error::Input(format!("case must be 1, 2, 3 or 4, got {case}"))),
        }
    }

    /// Source `(k, α)` and target `(l, β)` exponents, after checking the constraints.
    pub fn exponents(&self, alpha: f64, sigma: f64) -> Result<((usize, f64), (usize, f64))> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Input(format!("α must lie in (0, 1], got {alpha}")));
        }
        let gap = alpha - 2.0 * sigma;
        match *self {
            Self::ZeroToZero | Self::OneToOne => {
                if !(gap > 0.0) {
                    return Err(Error::Input(format!(
                        "cases 1 and 2 require 0 < 2σ < α, got α - 2σ = {gap}"
                    )));
                }
                let k = if *self == Self::ZeroToZero { 0 } else { 1 };
                Ok(((k, alpha), (k, gap)))
            }
            Self::OneToZero => {
                if gap > 0.0 {
                    return Err(Error::Input(format!("case 3 requires 2σ ≥ α, got α - 2σ = {gap}")));
                }
                let beta = gap + 1.0;
                if beta.abs() < 1e-12 {
                    return Err(Error::Input("case 3 requires α - 2σ + 1 ≠ 0".into()));
                }
                if beta < 0.0 {
                    return Err(Error::Input(format!("case 3 needs α - 2σ + 1 > 0, got {beta}")));
                }
                Ok(((1, alpha), (0, beta)))
            }
            Self::General { k } => {
                if k > 2 {
                    return Err(Error::Unsupported(format!("case 4 with k = {k} > 2")));
                }
                let total = k as f64 + gap;
                if (total - total.round()).abs() < 1e-12 {
                    return Err(Error::Input(format!("case 4 requires k + α - 2σ not an integer, got {total}")));
                }
                if total < 0.0 {
                    return Err(Error::Input(format!("case 4 needs k + α - 2σ > 0, got {total}")));
                }
                let l = total.floor();
                Ok(((k, alpha), (l as usize, total - l)))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub dim: usize,
    pub cutoff: usize,
    pub points: usize,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub index: usize,
    pub source_norm: f64,
    pub target_norm: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub case: RegularityCase,
    pub source: (usize, f64),
    pub target: (usize, f64),
    pub max_ratio: f64,
    pub rows: Vec<SampleRow>,
}

/// `‖(-Δ)^σ v‖_{target} / ‖v‖_{source}`; zero when `v` vanishes.
pub fn regularity_ratio(
    v: &SpectralFunction,
    order: &FracOrder,
    grid: &TorusGrid,
    source: (usize, f64),
    target: (usize, f64),
) -> Result<(f64, f64, f64)> {
    let src = hoelder_norm_spectral(v, grid, source.0, source.1)?.norm;
    let tgt = hoelder_norm_spectral(&frac_laplacian_spectral(v, order), grid, target.0, target.1)?.norm;
    let ratio = if src > 0.0 { tgt / src } else { 0.0 };
    Ok((src, tgt, ratio))
}

/// Ratio table over seeded random band-limited samples.
pub fn regularity_ratio_suite(
    case: RegularityCase,
    alpha: f64,
    order: &FracOrder,
    cfg: &SuiteConfig,
) -> Result<SuiteReport> {
    let (source, target) = case.exponents(alpha, order.sigma())?;
    if 2 * cfg.cutoff >= cfg.points {
        return Err(Error::Aliasing { cutoff: cfg.cutoff, half: cfg.points / 2 });
    }
    let grid = TorusGrid::new(cfg.dim, cfg.points)?;
    let mut rows = Vec::with_capacity(cfg.samples);
    for index in 0..cfg.samples {
        let v = SpectralFunction::random(cfg.dim, cfg.cutoff, cfg.seed.wrapping_add(index as u64))?;
        let (source_norm, target_norm, ratio) = regularity_ratio(&v, order, &grid, source, target)?;
        rows.push(SampleRow { index, source_norm, target_norm, ratio });
    }
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(SuiteReport { case, source, target, max_ratio, rows })
}

/// `sup_{0<d≤π} 2|sin(kd/2)| / d^α`, the Hölder seminorm of `cos(kz)` in one dimension.
pub fn single_mode_seminorm(k: u32, alpha: f64) -> f64 {
    let samples = 20_000 * k.max(1) as usize;
    let f = |d: f64| 2.0 * (0.5 * k as f64 * d).sin().abs() / d.powf(alpha);
    let mut best = (0.0, 0usize);
    for i in 1..=samples {
        let v = f(std::f64::consts::PI * i as f64 / samples as f64);
        if v > best.0 {
            best = (v, i);
        }
    }
    // golden-section refinement around the best sample
    let h = std::f64::consts::PI / samples as f64;
    let (mut lo, mut hi) = ((best.1 as f64 - 1.0) * h, ((best.1 + 1) as f64 * h).min(std::f64::consts::PI));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if f(a.max(1e-300)) >= f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    best.0.max(f(0.5 * (lo + hi)))
}

/// Analytic ratio for `v = cos(kz)`, `n = 1`.
pub fn single_mode_ratio(k: u32, order: &FracOrder, source: (usize, f64), target: (usize, f64)) -> f64 {
    let kf = k as f64;
    let norm = |(j, a): (usize, f64)| {
        (0..=j).map(|i| kf.powi(i as i32)).sum::<f64>() + kf.powi(j as i32) * single_mode_seminorm(k, a)
    };
    kf.powf(2.0 * order.sigma()) * norm(target) / norm(source)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn geodesic_examples() {
        assert!((geodesic_distance(&[PI - 0.1], &[-PI + 0.1]) - 0.2).abs() < 1e-12);
        assert_eq!(geodesic_distance(&[0.4], &[0.4]), 0.0);
        assert!(geodesic_distance(&[PI, PI], &[-PI, -PI]) < 1e-12);
    }

    #[test]
    fn cosine_lipschitz_constant() {
        let grid = TorusGrid::new(1, 256).unwrap();
        let v = TorusFunction::from_fn(grid, |z| z[0].cos()).unwrap();
        let h = hoelder_norm(&v, 0, 1.0).unwrap();
        assert!((h.seminorm - 1.0).abs() < 1e-3, "{h:?}");
        assert!(h.norm >= h.sup_part);
    }

    #[test]
    fn constant_has_zero_seminorm() {
        let grid = TorusGrid::new(2, 16).unwrap();
        let v = TorusFunction::from_fn(grid, |_| 3.0).unwrap();
        assert_eq!(hoelder_norm(&v, 0, 0.5).unwrap().seminorm, 0.0);
        for k in 1..=2 {
            // the analysis leaves rounding-level coefficients at k ≠ 0
            assert!(hoelder_norm(&v, k, 0.5).unwrap().seminorm < 1e-12);
        }
    }

    #[test]
    fn third_derivatives_unsupported() {
        let grid = TorusGrid::new(1, 16).unwrap();
        let v = TorusFunction::from_fn(grid, |z| z[0].sin()).unwrap();
        assert!(matches!(hoelder_norm(&v, 3, 0.5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn case_three_exclusion() {
        let r = RegularityCase::OneToZero.exponents(0.2, 0.6);
        match r {
            Err(Error::Input(msg)) => assert!(msg.contains("α - 2σ + 1 ≠ 0")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn case_four_exponents() {
        let ((k, a), (l, b)) = RegularityCase::General { k: 2 }.exponents(0.5, 0.4).unwrap();
        assert_eq!((k, l), (2, 1));
        assert!((a - 0.5).abs() < 1e-15 && (b - 0.7).abs() < 1e-12);
        assert!(RegularityCase::General { k: 1 }.exponents(0.6, 0.3).is_err());
    }

    #[test]
    fn single_mode_matches_grid() {
        let order = FracOrder::new(0.2).unwrap();
        let grid = TorusGrid::new(1, 128).unwrap();
        for k in [1u32, 3] {
            let v = SpectralFunction::cosine(&[k as i64], 1.0).unwrap();
            for case in [RegularityCase::ZeroToZero, RegularityCase::OneToOne] {
                let (s, t) = case.exponents(0.9, 0.2).unwrap();
                let (_, _, ratio) = regularity_ratio(&v, &order, &grid, s, t).unwrap();
                let exact = single_mode_ratio(k, &order, s, t);
                assert!((ratio / exact - 1.0).abs() < 0.05, "k={k} {case:?}: {ratio} vs {exact}");
            }
        }
    }
}
