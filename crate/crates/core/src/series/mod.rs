//! Truncated power series, perturbation expansions of polynomial roots and
//! Euler's divergent asymptotic series.

pub mod coeff;
pub mod euler;
pub mod poly;
pub mod power_series;

pub use coeff::{Coeff, Radical};
pub use euler::{euler_error_bound, euler_f, euler_partial_sum, euler_remainder};
pub use poly::{
    expand_root, rescale_singular, rescale_singular_f64, scale_exponent_from_f64, PolyFamily,
    Rescaled,
};
pub use power_series::{series_arith, PerturbationSeries, SeriesOp};
