use fraclap::periodize::SchwartzProfile;
use fraclap::spectral_core::{FracOrder, SpectralFunction};
use fraclap::transference::{verify_transference, TransferenceConfig};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn both_sides_linear_in_v(s1 in any::<u64>(), s2 in any::<u64>(), lam in -2.0f64..2.0, sigma in 0.1f64..0.9) {
        let order = FracOrder::new(sigma).unwrap();
        let phi = SchwartzProfile::gaussian(1.0, vec![0.2]).unwrap();
        let cfg = TransferenceConfig::default();
        let v1 = SpectralFunction::random(1, 3, s1).unwrap();
        let v2 = SpectralFunction::random(1, 3, s2).unwrap();
        let combo = v1.add(&v2.scale(lam)).unwrap();
        let r1 = verify_transference(&v1, &phi, &order, &cfg).unwrap();
        let r2 = verify_transference(&v2, &phi, &order, &cfg).unwrap();
        let rc = verify_transference(&combo, &phi, &order, &cfg).unwrap();
        let slack = r1.residual + lam.abs() * r2.residual + rc.residual + 1e-12;
        prop_assert!((rc.lhs - r1.lhs - lam * r2.lhs).abs() <= slack + 1e-9);
        prop_assert!((rc.rhs - r1.rhs - lam * r2.rhs).abs() <= 1e-12 * (1.0 + rc.rhs.abs()));
    }

    #[test]
    fn coefficient_decay_scales_both_sides(seed in any::<u64>(), t in 0.05f64..1.0) {
        let order = FracOrder::new(0.4).unwrap();
        let phi = SchwartzProfile::gaussian(2.0, vec![-0.5]).unwrap();
        let cfg = TransferenceConfig::default();
        let v = SpectralFunction::random(1, 2, seed).unwrap();
        let r = verify_transference(&v, &phi, &order, &cfg).unwrap();
        let rt = verify_transference(&v.scale(t), &phi, &order, &cfg).unwrap();
        prop_assert!(rt.passed);
        prop_assert!((rt.rhs - t * r.rhs).abs() < 1e-12 * (1.0 + r.rhs.abs()));
        prop_assert!((rt.lhs - t * r.lhs).abs() < 1e-9);
    }
}

#[test]
fn finer_mesh_does_not_drift_more() {
    let order = FracOrder::new(0.3).unwrap();
    let phi = SchwartzProfile::gaussian(2.0, vec![0.1]).unwrap();
    let v = SpectralFunction::random(1, 3, 4).unwrap();
    let coarse = verify_transference(&v, &phi, &order, &TransferenceConfig { points: Some(16), ..Default::default() }).unwrap();
    let fine = verify_transference(&v, &phi, &order, &TransferenceConfig { points: Some(32), ..Default::default() }).unwrap();
    assert!(fine.budget.spatial <= 0.5 * coarse.budget.spatial + 1e-14, "{coarse}\n{fine}");
    assert!(fine.residual <= fine.budget.total() + 1e-12);
}

#[test]
fn cosine_example() {
    let v = SpectralFunction::cosine(&[1], 1.0).unwrap();
    let phi = SchwartzProfile::gaussian(0.5, vec![0.0]).unwrap();
    let r = verify_transference(&v, &phi, &FracOrder::new(0.5).unwrap(), &TransferenceConfig::default()).unwrap();
    assert!((r.lhs - 1.5203469010662808056).abs() < 1e-7, "{r}");
}
