use fraclap::extension::{conormal_limit, default_heights, extend_by_convolution, extension_multiplier, ExtensionField};
use fraclap::spectral_core::{frac_laplacian_spectral, FracOrder, SpectralFunction, TorusGrid};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplier_decreases(sigma in 0.05f64..0.95, s in 0.01f64..20.0, ds in 0.01f64..2.0) {
        let o = FracOrder::new(sigma).unwrap();
        prop_assert!(extension_multiplier(&o, s + ds).unwrap() < extension_multiplier(&o, s).unwrap());
    }

    #[test]
    fn convolution_matches_spectral(seed in any::<u64>(), sigma in 0.1f64..0.9, y in 0.2f64..1.5, z in -3.0f64..3.0) {
        let o = FracOrder::new(sigma).unwrap();
        let v = SpectralFunction::random(1, 3, seed).unwrap();
        let spectral = ExtensionField::new(v.clone(), o).eval(&[z], y).unwrap();
        let conv = extend_by_convolution(&v, &o, y, z).unwrap();
        prop_assert!((conv.value - spectral).abs() < 1e-8, "{conv:?} vs {spectral}");
    }
}

#[test]
fn conormal_sweep_recovers_constant() {
    let grid = TorusGrid::new(1, 16).unwrap();
    let v = SpectralFunction::random(1, 3, 2).unwrap();
    for j in 1..=9 {
        let o = FracOrder::new(j as f64 / 10.0).unwrap();
        let lim = conormal_limit(&v, &o, &grid, &default_heights()).unwrap();
        let spec = frac_laplacian_spectral(&v, &o);
        for (k, c) in spec.iter() {
            if c.norm() > 1e-12 {
                let ratio = lim.limit_coeffs.get(k).re / c.re;
                assert!((ratio / o.c_sigma() - 1.0).abs() < 1e-4, "σ={} k={k:?}", o.sigma());
            }
        }
    }
}
