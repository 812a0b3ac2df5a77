//! Gravitational self-interaction of light stored in a rectangular cavity
//! and the quantum limits it places on measuring the speed of light.

pub mod bounds;
pub mod error;
pub mod grid;
pub mod metric;
pub mod modes;
pub mod quadrature;
pub mod resonance;
pub mod setup;

pub use error::{Error, Result};
