//! Wave packets in weakly nonlinear dispersive equations on a periodic line.
//!
//! Two equations are supported:
//!
//! * Klein–Gordon with a quadratic term, u_tt − u_xx + u = εu²
//! * a fourth-order equation with a cubic term, u_tt + u_xx + u_xxxx + u = εu³
//!
//! Each has a pseudospectral direct solver and an envelope (amplitude)
//! description advanced by split-step Fourier, joined by a reconstruction map.

mod direct;
mod nls;
mod packet;

pub use direct::{energy, solve_direct, solve_fourth_direct, solve_kg_direct, DirectRun, RealField};
pub use nls::{amplitude_rate, solve_nls, solve_nls_with, solve_two_wave, NlsCoefficients, TWO_WAVE_MATCH_TOL};
pub use packet::{
    centroid, packet_compare, reconstruct_field, Checkpoint, PacketParams, PacketReport, Snapshot,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::PeriodicGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dispersion {
    /// ω = √(1 + k²)
    KleinGordon,
    /// ω = √(k⁴ − k² + 1)
    FourthOrder,
}

impl Dispersion {
    /// ω² as a function of k; also the linear symbol of the direct solver.
    pub fn omega_sq(self, k: f64) -> f64 {
        let k2 = k * k;
        match self {
            Self::KleinGordon => 1.0 + k2,
            Self::FourthOrder => k2 * k2 - k2 + 1.0,
        }
    }

    pub fn omega(self, k: f64) -> f64 {
        self.omega_sq(k).sqrt()
    }

    /// Group velocity ω'(k).
    pub fn group_velocity(self, k: f64) -> f64 {
        let w = self.omega(k);
        match self {
            Self::KleinGordon => k / w,
            Self::FourthOrder => (2.0 * k * k * k - k) / w,
        }
    }

    pub fn omega_second(self, k: f64) -> f64 {
        let w = self.omega(k);
        let v = self.group_velocity(k);
        match self {
            Self::KleinGordon => 1.0 / (w * w * w),
            Self::FourthOrder => ((6.0 * k * k - 1.0) - v * v) / w,
        }
    }

    /// (ω, ω').
    pub fn eval(self, k: f64) -> (f64, f64) {
        (self.omega(k), self.group_velocity(k))
    }

    /// Degree of the nonlinear term.
    pub fn nonlinear_power(self) -> i32 {
        match self {
            Self::KleinGordon => 2,
            Self::FourthOrder => 3,
        }
    }

    /// Dealiasing divisor: modes with |m| < N/divisor are kept.
    pub(crate) fn band_divisor(self) -> usize {
        match self {
            Self::KleinGordon => 3,
            Self::FourthOrder => 4,
        }
    }
}

/// ω(nk) − n·ω(k). Zero means the n-th harmonic is resonant.
pub fn phase_match_residual(d: Dispersion, n: u32, k: f64) -> f64 {
    d.omega(f64::from(n) * k) - f64::from(n) * d.omega(k)
}

/// Roots of [`phase_match_residual`] in `[lo, hi]`, located by scanning
/// `samples` intervals for sign changes and refining by bisection to 1e−12.
pub fn find_phase_matched(d: Dispersion, n: u32, (lo, hi): (f64, f64), samples: usize) -> Vec<f64> {
    if !(hi > lo) || samples == 0 {
        return Vec::new();
    }
    let f = |k| phase_match_residual(d, n, k);
    let step = (hi - lo) / samples as f64;
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=samples {
        let b = if i == samples { hi } else { lo + step * i as f64 };
        let fb = f(b);
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            let (mut l, mut r, mut fl) = (a, b, fa);
            while r - l > 1e-12 {
                let m = 0.5 * (l + r);
                let fm = f(m);
                if fm == 0.0 {
                    l = m;
                    r = m;
                    break;
                }
                if (fm < 0.0) == (fl < 0.0) {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
            }
            roots.push(0.5 * (l + r));
        }
        a = b;
        fa = fb;
    }
    if fa == 0.0 {
        roots.push(hi);
    }
    roots
}

/// Complex envelope A(x, t) of a carrier e^{i(kx − ωt)}.
#[derive(Clone, Debug)]
pub struct WavePacketField {
    pub grid: PeriodicGrid,
    pub samples: Vec<Complex64>,
    pub k: f64,
    pub eps: f64,
    pub dispersion: Dispersion,
}

/// Checks that `k` is an integer multiple of 2π/L.
pub fn check_carrier(k: f64, length: f64) -> Result<()> {
    let m = k * length / (2.0 * PI);
    if (m - m.round()).abs() > 1e-9 * m.abs().max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "carrier k = {k} is not a multiple of 2π/L for L = {length}"
        )));
    }
    Ok(())
}

impl WavePacketField {
    pub fn new(
        dispersion: Dispersion,
        eps: f64,
        k: f64,
        length: f64,
        samples: Vec<Complex64>,
    ) -> Result<Self> {
        let grid = PeriodicGrid::new(samples.len(), length)?;
        check_carrier(k, length)?;
        Ok(Self { grid, samples, k, eps, dispersion })
    }

    /// a·exp(−(x − x_c)²/2σ²) sampled on an `n`-point grid.
    #[allow(clippy::too_many_arguments)]
    pub fn gaussian(
        dispersion: Dispersion,
        eps: f64,
        k: f64,
        length: f64,
        n: usize,
        amplitude: Complex64,
        x_c: f64,
        sigma: f64,
    ) -> Result<Self> {
        let grid = PeriodicGrid::new(n, length)?;
        let samples = grid
            .x()
            .iter()
            .map(|x| amplitude * (-(x - x_c).powi(2) / (2.0 * sigma * sigma)).exp())
            .collect();
        Self::new(dispersion, eps, k, length, samples)
    }

    /// Spatially constant envelope.
    pub fn uniform(dispersion: Dispersion, eps: f64, k: f64, length: f64, n: usize, a: Complex64) -> Result<Self> {
        Self::new(dispersion, eps, k, length, vec![a; n])
    }

    pub fn with_samples(&self, samples: Vec<Complex64>) -> Self {
        Self { samples, ..self.clone() }
    }

    /// ∫|A|² dx.
    pub fn l2_norm_sq(&self) -> f64 {
        self.grid.integrate(self.samples.iter().map(|z| z.norm_sqr()))
    }
}
