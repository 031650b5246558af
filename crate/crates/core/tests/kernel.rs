use std::f64::consts::PI;

use fraclap::kernel_pv::{
    dirichlet_solve, frac_laplacian_pointwise, lattice_moment_zeta, NonlocalDirichletProblem, PeriodizedKernel,
};
use fraclap::periodize::LatticeSumConfig;
use fraclap::spectral_core::{frac_laplacian_spectral, synthesize, wrap, FracOrder, SpectralFunction, TorusGrid};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_below_nearest_image_bound(sigma in 0.05f64..0.95, x in -PI..PI, y in -PI..PI) {
        prop_assume!(x.abs() + y.abs() > 1e-3);
        let k = PeriodizedKernel::new(2, FracOrder::new(sigma).unwrap(), &LatticeSumConfig::default()).unwrap();
        let s = 2.0 + 2.0 * sigma;
        let sum = k.lattice_sum(&[x, y]).unwrap();
        let bound = (x * x + y * y).powf(-s / 2.0) + PI.powf(-s) * lattice_moment_zeta(&[0, 0], s / 2.0).unwrap();
        prop_assert!(sum.value <= bound + sum.tail_bound);
    }

    #[test]
    fn pointwise_matches_spectral(seed in any::<u64>(), sigma in 0.05f64..0.95) {
        let grid = TorusGrid::new(1, 64).unwrap();
        let order = FracOrder::new(sigma).unwrap();
        let v = SpectralFunction::random(1, 4, seed).unwrap();
        let exact = synthesize(&frac_laplacian_spectral(&v, &order), &grid).unwrap();
        let k = PeriodizedKernel::new(1, order, &LatticeSumConfig::default()).unwrap();
        let pv = frac_laplacian_pointwise(&synthesize(&v, &grid).unwrap(), &k).unwrap();
        let err = pv.values.values().iter().zip(exact.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-3 * exact.max_abs());
    }

    #[test]
    fn dirichlet_maximum_principle(seed in any::<u64>(), sigma in 0.1f64..0.9) {
        let grid = TorusGrid::new(1, 32).unwrap();
        let k = PeriodizedKernel::new(1, FracOrder::new(sigma).unwrap(), &LatticeSumConfig::default()).unwrap();
        let g = SpectralFunction::random(1, 3, seed).unwrap();
        let interior: Vec<bool> = (0..32).map(|j| grid.coordinate(j).abs() < 1.5).collect();
        let exterior: Vec<f64> = (0..32).map(|j| g.eval(&[grid.coordinate(j)])).collect();
        let (lo, hi) = exterior.iter().zip(&interior).filter(|(_, &i)| !i)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), (&x, _)| (l.min(x), h.max(x)));
        let problem = NonlocalDirichletProblem { grid, interior: interior.clone(), exterior };
        let v = dirichlet_solve(&problem, &k).unwrap();
        for (x, &i) in v.values().iter().zip(&interior) {
            if i {
                prop_assert!(*x >= lo - 1e-12 && *x <= hi + 1e-12);
            }
        }
    }
}

#[test]
fn offset_table_is_even() {
    let grid = TorusGrid::new(2, 16).unwrap();
    let k = PeriodizedKernel::new(2, FracOrder::new(0.4).unwrap(), &LatticeSumConfig::default()).unwrap();
    let table = k.offset_table(&grid).unwrap();
    for o in 0..grid.len() {
        let idx = grid.multi_index(o);
        let neg: Vec<usize> = idx.iter().map(|&j| (16 - j) % 16).collect();
        assert_eq!(table[o], table[grid.flat_index(&neg)]);
    }
    assert_eq!(wrap(PI), PI);
}
