//! Kernel, panel rules and the adaptive convolution over the cavity cross-section.

mod convolve;
pub mod kernel;
mod oracle;
pub mod rules;

pub use convolve::{convolve, convolve_point, Convolution, Integrand, QuadratureSpec, SourceFunction};
pub use kernel::kernel;
pub use oracle::{
    derive_seed, mc_oracle, mc_oracle_points, mc_oracle_vector, McEstimate, MIN_SAMPLES,
};
pub use rules::{gauss_legendre, PanelRule};
