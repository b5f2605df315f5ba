//! Dimensional analysis, perturbation expansions and multiple-scales solvers,
//! each paired with a direct numerical method to check it against.

pub mod blayer;
pub mod dimsys;
pub mod error;
pub mod linalg;
pub mod mspde;
pub mod msode;
pub mod ode;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use linalg::Rational;
