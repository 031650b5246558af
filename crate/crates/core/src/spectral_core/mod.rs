//! Torus grids, discrete Fourier analysis and the spectral fractional
//! Laplacian.

mod condition;
mod dft;
mod function;
mod grid;
mod io;
mod order;

pub use condition::{check_transference_condition, CoefficientSource, GrowthBound, TransferenceCondition};
pub use dft::{analyze, frac_laplacian_spectral, synthesize, SYNTHESIS_TOLERANCE};
pub use function::{LatticeIndex, SpectralFunction, TorusFunction};
pub use grid::{wrap, wrap_point, TorusGrid};
pub use order::{FracOrder, KernelConstant};
