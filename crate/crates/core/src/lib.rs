//! Exact collective dynamics of a staggered-field Heisenberg antiferromagnet.

pub mod analysis;
pub mod collective;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod meanfield;
pub mod output;
pub mod params;
pub mod pendulum;
pub mod quadrature;
pub mod run;
pub mod smalln;
pub mod states;
pub mod timescales;
pub mod tridiag;

pub use error::{Error, Result};
pub use params::{ModelParams, Spin};
