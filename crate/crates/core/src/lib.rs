pub mod error;
pub mod extension;
pub mod kernel_pv;
pub mod periodize;
pub mod quad;
pub mod regularity;
pub mod selftest;
pub mod special_fn;
pub mod spectral_core;
pub mod transference;

pub use error::{Error, Result};
