//! Repetition, periodization over `2πℤⁿ`, the Gaussian test family and
//! the bump partition of unity.

mod bump;
mod lattice;
mod profile;

pub use bump::{bump_lift, BumpPartition, LiftedFunction};
pub use lattice::{
    periodize, poisson_summation_check, repetition_eval, repetition_eval_samples, trig_interpolate,
    LatticeSumConfig, LatticeSum, PoissonCheck,
};
pub use profile::{hermite, ProfileKind, SchwartzProfile};
