//! The acceptance suite: one function per criterion, each returning a
//! deterministic pass/fail line.

use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::extension::{conormal_limit, default_heights};
use crate::kernel_pv::{frac_laplacian_pointwise, harnack_ratio_experiment, ExteriorData, HarnackGeometry, PeriodizedKernel};
use crate::periodize::{bump_lift, poisson_summation_check, BumpPartition, LatticeSumConfig, SchwartzProfile};
use crate::regularity::{regularity_ratio, regularity_ratio_suite, single_mode_ratio, RegularityCase, SuiteConfig};
use crate::special_fn::{bessel_coefficient_identity, bessel_k};
use crate::spectral_core::{
    analyze, check_transference_condition, frac_laplacian_spectral, synthesize, CoefficientSource, FracOrder,
    GrowthBound, SpectralFunction, TorusFunction, TorusGrid,
};
use crate::transference::{lsigma_norm, verify_transference, TransferenceConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// Deterministic summary of the measured quantities.
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {}: {}: {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

fn finish(id: u32, name: &'static str, start: Instant, outcome: Result<(bool, String)>) -> CriterionResult {
    let (passed, detail) = match outcome {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult { id, name, passed, detail, elapsed: start.elapsed() }
}

fn rel_sup(a: &TorusFunction, b: &TorusFunction) -> f64 {
    let diff = a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    diff / b.max_abs().max(f64::MIN_POSITIVE)
}

fn cos_product(dim: usize) -> Result<SpectralFunction> {
    // cos z₁ cos z₂ = (cos(z₁+z₂) + cos(z₁-z₂)) / 2
    if dim == 1 {
        return SpectralFunction::cosine(&[1], 1.0);
    }
    SpectralFunction::cosine(&[1, 1], 0.5)?.add(&SpectralFunction::cosine(&[1, -1], 0.5)?)
}

/// Transference identity over twelve `(v, φ, σ)` combinations.
pub fn transference_identity(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let functions: Vec<(&str, SpectralFunction)> = vec![
            ("1", SpectralFunction::constant(1, 1.0)?),
            ("cos z", SpectralFunction::cosine(&[1], 1.0)?),
            ("cos z1 cos z2", cos_product(2)?),
            ("random M=3", SpectralFunction::random(2, 3, seed)?),
        ];
        let cfg = TransferenceConfig { tol: 1e-6, ..TransferenceConfig::default() };
        let mut worst: f64 = 0.0;
        let mut ok = true;
        let mut count = 0;
        for (iv, (_, v)) in functions.iter().enumerate() {
            for (is, &sigma) in [0.25, 0.5, 0.75].iter().enumerate() {
                let a = [0.5, 2.0][(iv + is) % 2];
                let phi = SchwartzProfile::gaussian(a, vec![0.3; v.dim()])?;
                let r = verify_transference(v, &phi, &FracOrder::new(sigma)?, &cfg)?;
                let scaled = r.residual / (1.0 + r.rhs.abs());
                worst = worst.max(scaled);
                ok &= scaled <= 1e-6;
                count += 1;
            }
        }
        let in_time = start.elapsed() <= Duration::from_secs(120);
        Ok((ok && in_time, format!("{count} cases, max |lhs-rhs|/(1+|rhs|) = {worst:.3e}")))
    };
    finish(1, "transference identity", start, run())
}

/// Spectral against pointwise-kernel and conormal-limit evaluations.
pub fn three_methods(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let mut ok = true;
        let mut kernel_err = [0.0f64; 2];
        for (slot, (dim, points, cutoff, tol)) in [(1usize, 64usize, 6usize, 1e-3), (2, 32, 4, 1e-2)].into_iter().enumerate() {
            let grid = TorusGrid::new(dim, points)?;
            for &sigma in &[0.3, 0.7] {
                let order = FracOrder::new(sigma)?;
                let v = SpectralFunction::random(dim, cutoff, seed.wrapping_add(slot as u64))?;
                let exact = synthesize(&frac_laplacian_spectral(&v, &order), &grid)?;
                let kernel = PeriodizedKernel::new(dim, order, &LatticeSumConfig::default())?;
                let pv = frac_laplacian_pointwise(&synthesize(&v, &grid)?, &kernel)?;
                let e = rel_sup(&pv.values, &exact);
                kernel_err[slot] = kernel_err[slot].max(e);
                ok &= e <= tol;
            }
        }
        let grid = TorusGrid::new(1, 32)?;
        let v = SpectralFunction::random(1, 4, seed)?;
        let mut conormal_err: f64 = 0.0;
        for j in 1..=9 {
            let order = FracOrder::new(j as f64 / 10.0)?;
            let exact = synthesize(&frac_laplacian_spectral(&v, &order), &grid)?;
            let lim = conormal_limit(&v, &order, &grid, &default_heights())?;
            // the weighted conormal derivative is c_σ (-Δ)^σ v
            let scaled = TorusFunction::new(
                grid.clone(),
                lim.limit_field.values().iter().map(|x| x / order.c_sigma()).collect(),
            )?;
            conormal_err = conormal_err.max(rel_sup(&scaled, &exact));
        }
        ok &= conormal_err <= 1e-4;
        Ok((
            ok,
            format!(
                "kernel rel err n=1 {:.3e}, n=2 {:.3e}; conormal rel err {:.3e}",
                kernel_err[0], kernel_err[1], conormal_err
            ),
        ))
    };
    finish(2, "three-method agreement", start, run())
}

/// Coefficient identity through the subordination integral, and large-argument `K_σ`.
pub fn bessel_identity(_seed: u64) -> CriterionResult {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let mut worst: f64 = 0.0;
        let mut ks: Vec<Vec<i64>> = (1..=3).map(|k| vec![k]).collect();
        let mut planar = Vec::new();
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                let r2 = a * a + b * b;
                if r2 > 0 && r2 <= 9 {
                    planar.push(vec![a, b]);
                }
            }
        }
        ks.extend(planar);
        for &sigma in &[0.25, 0.5, 0.75] {
            for k in &ks {
                let c = bessel_coefficient_identity(k.len(), sigma, k)?;
                worst = worst.max(c.residual);
            }
        }
        let mut ratios = Vec::new();
        for &sigma in &[0.25, 0.5, 0.75] {
            let z: f64 = 16.0;
            ratios.push(bessel_k(sigma, z)?.value * (2.0 * z / PI).sqrt() * z.exp());
        }
        let ratio_ok = ratios.iter().all(|r| (0.95..=1.05).contains(r));
        let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().copied().fold(0.0, f64::max);
        Ok((
            worst <= 1e-6 && ratio_ok,
            format!("{} identities, max residual {worst:.3e}; K ratio at 16 in [{lo:.6}, {hi:.6}]", 3 * ks.len()),
        ))
    };
    finish(3, "Bessel identity", start, run())
}

/// `L_σ` integral by two routes, and the condition partial sum for `c_k ≡ 1`.
pub fn lsigma_membership(_seed: u64) -> CriterionResult {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let grid = TorusGrid::new(1, 16)?;
        let tests: [(f64, fn(f64) -> f64); 3] = [
            (0.3, |_| 1.0),
            (0.5, |z| 1.0 + z.cos()),
            (0.25, |z| z.cos() + 0.3 * (2.0 * z).sin()),
        ];
        let mut worst: f64 = 0.0;
        for (sigma, f) in tests {
            let v = TorusFunction::from_fn(grid.clone(), |z| f(z[0]))?;
            let r = lsigma_norm(&v, &FracOrder::new(sigma)?, 2.0 * PI)?;
            worst = worst.max(r.discrepancy());
        }
        let one = |_: &[i64]| 1.0;
        let src = CoefficientSource::Rule {
            dim: 1,
            magnitude: &one,
            growth: Some(GrowthBound { constant: 1.0, power: 0.0 }),
        };
        let cond = check_transference_condition(&src, 8)?;
        let cond_ok = cond.holds && (cond.partial_sum - 0.754157).abs() <= 1e-5;
        Ok((
            worst <= 1e-6 && cond_ok,
            format!("max route discrepancy {worst:.3e}; condition partial sum {:.6}", cond.partial_sum),
        ))
    };
    finish(4, "L_sigma membership", start, run())
}

/// Poisson summation on the Gaussian family and the bump lift.
pub fn poisson_and_bump(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = LatticeSumConfig::default();
        let mut poisson: f64 = 0.0;
        let profiles = [
            SchwartzProfile::gaussian(0.5, vec![0.0])?,
            SchwartzProfile::gaussian(2.0, vec![0.7])?,
            SchwartzProfile::gaussian(0.3, vec![0.2, -1.0])?,
            SchwartzProfile::gaussian_times_monomial(1.0, vec![0.1, 0.4], vec![2, 1])?,
            SchwartzProfile::gaussian(1.5, vec![0.0, 0.5, -0.5])?,
            SchwartzProfile::gaussian_times_monomial(0.8, vec![-0.3], vec![3])?,
        ];
        for phi in &profiles {
            for _ in 0..5 {
                let z: Vec<f64> = (0..phi.dim()).map(|_| rng.gen_range(-PI..PI)).collect();
                poisson = poisson.max(poisson_summation_check(phi, &z, &cfg)?.residual);
            }
        }
        let functions = [
            SpectralFunction::constant(1, 1.0)?,
            SpectralFunction::cosine(&[1], 1.0)?,
            SpectralFunction::random(2, 2, seed)?,
        ];
        let mut bump: f64 = 0.0;
        for v in &functions {
            let part = BumpPartition::new(v.dim(), 0.5)?;
            let lifted = bump_lift(v, &part)?;
            for _ in 0..17 {
                let z: Vec<f64> = (0..v.dim()).map(|_| rng.gen_range(-PI..PI)).collect();
                bump = bump.max((lifted.periodize(&z) - v.eval(&z)).abs());
            }
        }
        Ok((
            poisson <= 1e-9 && bump <= 1e-9,
            format!("max Poisson residual {poisson:.3e}; max bump-lift residual {bump:.3e}"),
        ))
    };
    finish(5, "Poisson summation and bump lift", start, run())
}

/// Interior Harnack ratios under refinement.
pub fn interior_harnack(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let kernel = PeriodizedKernel::new(1, FracOrder::new(0.5)?, &LatticeSumConfig::default())?;
        let geo = HarnackGeometry { outer: PI / 2.0, inner: PI / 4.0 };
        let data = ExteriorData::SquaredTrig { degree: 3 };
        let coarse = harnack_ratio_experiment(&kernel, geo, 64, data, 100, seed)?;
        let fine = harnack_ratio_experiment(&kernel, geo, 128, data, 100, seed)?;
        let finite = coarse.max_ratio.is_finite() && fine.max_ratio.is_finite();
        let drift = (fine.max_ratio / coarse.max_ratio - 1.0).abs();
        let positive = coarse.violations.is_empty() && fine.violations.is_empty();
        let in_time = start.elapsed() <= Duration::from_secs(180);
        Ok((
            finite && positive && drift <= 0.2 && in_time,
            format!(
                "max ratio N=64 {:.6}, N=128 {:.6}, drift {:.3e}, violations {}",
                coarse.max_ratio,
                fine.max_ratio,
                drift,
                coarse.violations.len() + fine.violations.len()
            ),
        ))
    };
    finish(6, "interior Harnack", start, run())
}

/// Hölder ratio suite for the four cases, the case-3 exclusion and single modes.
pub fn hoelder_suite(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let cases = [
            (RegularityCase::ZeroToZero, 0.9, 0.2),
            (RegularityCase::OneToOne, 0.9, 0.2),
            (RegularityCase::OneToZero, 0.5, 0.4),
            (RegularityCase::General { k: 2 }, 0.5, 0.4),
        ];
        let mut ok = true;
        let mut parts = Vec::new();
        for (i, (case, alpha, sigma)) in cases.into_iter().enumerate() {
            let order = FracOrder::new(sigma)?;
            let cfg = |points| SuiteConfig { dim: 1, cutoff: 4, points, samples: 50, seed };
            let coarse = regularity_ratio_suite(case, alpha, &order, &cfg(64))?;
            let fine = regularity_ratio_suite(case, alpha, &order, &cfg(128))?;
            let drift = (fine.max_ratio / coarse.max_ratio - 1.0).abs();
            ok &= coarse.max_ratio.is_finite() && fine.max_ratio.is_finite() && drift <= 0.2;
            parts.push(format!("case {} {:.4}/{:.4}", i + 1, coarse.max_ratio, fine.max_ratio));
        }
        let rejected = RegularityCase::OneToZero.exponents(0.2, 0.6).is_err();
        ok &= rejected;
        let grid = TorusGrid::new(1, 128)?;
        let order = FracOrder::new(0.2)?;
        let mut mode_err: f64 = 0.0;
        for k in 1..=4u32 {
            let v = SpectralFunction::cosine(&[k as i64], 1.0)?;
            for case in [RegularityCase::ZeroToZero, RegularityCase::OneToOne] {
                let (s, t) = case.exponents(0.9, 0.2)?;
                let (_, _, ratio) = regularity_ratio(&v, &order, &grid, s, t)?;
                mode_err = mode_err.max((ratio / single_mode_ratio(k, &order, s, t) - 1.0).abs());
            }
        }
        ok &= mode_err <= 0.05;
        Ok((
            ok,
            format!(
                "{}; exclusion rejected {rejected}; single-mode rel err {mode_err:.3e}",
                parts.join(", ")
            ),
        ))
    };
    finish(7, "Hölder suite", start, run())
}

/// Round trips and reproducibility of seeded pieces.
pub fn infrastructure(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let run = || -> Result<(bool, String)> {
        let mut worst: f64 = 0.0;
        for (dim, points, cutoff) in [(1usize, 32usize, 10usize), (2, 16, 5), (3, 8, 3)] {
            let grid = TorusGrid::new(dim, points)?;
            let v = SpectralFunction::random(dim, cutoff, seed)?;
            let samples = synthesize(&v, &grid)?;
            let back = analyze(&samples, cutoff)?;
            for (k, c) in v.iter() {
                worst = worst.max((back.get(k) - c).norm());
            }
            let parsed = TorusFunction::from_csv(&samples.to_csv())?;
            worst = worst.max(rel_sup(&parsed, &samples) * samples.max_abs());
            let coeffs = SpectralFunction::from_csv(&v.to_csv())?;
            for (k, c) in v.iter() {
                worst = worst.max((coeffs.get(k) - c).norm());
            }
        }
        let again = SpectralFunction::random(2, 3, seed)?;
        let reproducible = again == SpectralFunction::random(2, 3, seed)?
            && again.get(&[0, 0]).im == 0.0
            && again.hermitian_residue() < 1e-15;
        let probe = |s: u64| -> Result<String> {
            let r = regularity_ratio_suite(
                RegularityCase::ZeroToZero,
                0.9,
                &FracOrder::new(0.2)?,
                &SuiteConfig { dim: 1, cutoff: 3, points: 32, samples: 5, seed: s },
            )?;
            Ok(r.rows.iter().map(|row| format!("{:.16e}", row.ratio)).collect::<Vec<_>>().join(","))
        };
        let deterministic = probe(seed)? == probe(seed)?;
        Ok((
            worst <= 1e-12 && reproducible && deterministic,
            format!("max round-trip error {worst:.3e}; seeded runs identical {}", reproducible && deterministic),
        ))
    };
    finish(8, "infrastructure", start, run())
}

/// Every criterion in order.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        transference_identity(seed),
        three_methods(seed),
        bessel_identity(seed),
        lsigma_membership(seed),
        poisson_and_bump(seed),
        interior_harnack(seed),
        hoelder_suite(seed),
        infrastructure(seed),
    ]
}
