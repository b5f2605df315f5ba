//! Periodic Fourier grids and windowed spectra.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform periodic grid x_j = jL/N with planned transforms.
#[derive(Clone)]
pub struct PeriodicGrid {
    n: usize,
    length: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    kappa: Vec<f64>,
}

impl fmt::Debug for PeriodicGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PeriodicGrid")
            .field("n", &self.n)
            .field("length", &self.length)
            .finish()
    }
}

impl PeriodicGrid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::GridNotPowerOfTwo(n));
        }
        if !(length > 0.0) || !length.is_finite() {
            return Err(Error::InvalidArgument(format!("domain length must be positive, got {length}")));
        }
        let mut planner = FftPlanner::new();
        let kappa = (0..n)
            .map(|j| 2.0 * PI * mode_number(j, n) as f64 / length)
            .collect();
        Ok(Self {
            n,
            length,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            kappa,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self) -> Vec<f64> {
        (0..self.n).map(|j| j as f64 * self.dx()).collect()
    }

    /// Angular wavenumber of each transform slot.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.kappa
    }

    /// Physical samples to Fourier coefficients, scaled so that a pure
    /// e^{iκx} has coefficient 1.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.fwd.process(data);
        let s = 1.0 / self.n as f64;
        for z in data.iter_mut() {
            *z *= s;
        }
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.inv.process(data);
    }

    pub fn forward_real(&self, data: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }

    /// Slots with |mode number| < N/`divisor`.
    pub fn band(&self, divisor: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&j| mode_number(j, self.n).unsigned_abs() as usize * divisor < self.n)
            .collect()
    }

    /// `order`-th spatial derivative of periodic complex samples.
    pub fn derivative(&self, samples: &[Complex64], order: u32) -> Vec<Complex64> {
        let mut buf = samples.to_vec();
        self.forward(&mut buf);
        for (z, &k) in buf.iter_mut().zip(&self.kappa) {
            *z *= Complex64::new(0.0, k).powu(order);
        }
        // The Nyquist slot has no well-defined odd derivative.
        if order % 2 == 1 {
            buf[self.n / 2] = Complex64::new(0.0, 0.0);
        }
        self.inverse(&mut buf);
        buf
    }

    pub fn derivative_real(&self, samples: &[f64], order: u32) -> Vec<f64> {
        let z: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.derivative(&z, order).iter().map(|c| c.re).collect()
    }

    /// Rectangle-rule integral, exact for band-limited periodic data.
    pub fn integrate(&self, values: impl IntoIterator<Item = f64>) -> f64 {
        values.into_iter().sum::<f64>() * self.dx()
    }
}

/// Signed mode number of transform slot `j` on an `n`-point grid.
pub fn mode_number(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// One-sided Hann-windowed power spectrum of uniformly sampled data.
/// Returns angular frequencies and power per bin.
pub fn hann_power_spectrum(signal: &[f64], dt: f64) -> (Vec<f64>, Vec<f64>) {
    let n = signal.len();
    let mut buf: Vec<Complex64> = signal
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let w = 0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos();
            Complex64::new(s * w, 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let bins = n / 2 + 1;
    let df = 2.0 * PI / (n as f64 * dt);
    (
        (0..bins).map(|i| i as f64 * df).collect(),
        buf[..bins].iter().map(|z| z.norm_sqr()).collect(),
    )
}

/// The `count` largest local maxima of a spectrum, strongest first, as
/// (frequency, power) pairs.
pub fn spectral_peaks(freqs: &[f64], power: &[f64], count: usize) -> Vec<(f64, f64)> {
    let mut peaks: Vec<(f64, f64)> = (1..power.len().saturating_sub(1))
        .filter(|&i| power[i] > power[i - 1] && power[i] >= power[i + 1])
        .map(|i| (freqs[i], power[i]))
        .collect();
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
    peaks.truncate(count);
    peaks
}
