use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Dispersion;
use crate::error::{Error, Result};
use crate::ode::{self, OdeOptions, Output, SolverStats};
use crate::spectral::PeriodicGrid;

/// A real field u and its time derivative u_t on a periodic grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealField {
    pub length: f64,
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
}

impl RealField {
    pub fn new(length: f64, u: Vec<f64>, ut: Vec<f64>) -> Result<Self> {
        if u.len() != ut.len() {
            return Err(Error::LengthMismatch { expected: u.len(), found: ut.len() });
        }
        if !u.len().is_power_of_two() {
            return Err(Error::GridNotPowerOfTwo(u.len()));
        }
        Ok(Self { length, u, ut })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn grid(&self) -> Result<PeriodicGrid> {
        PeriodicGrid::new(self.len(), self.length)
    }
}

/// Snapshots of a direct run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectRun {
    pub times: Vec<f64>,
    pub snapshots: Vec<RealField>,
    pub energies: Vec<f64>,
    /// max |E(t) − E(0)| / |E(0)| over the snapshots.
    pub max_energy_drift: f64,
    pub stats: SolverStats,
}

/// Conserved energy of the equation selected by `d`.
pub fn energy(d: Dispersion, eps: f64, field: &RealField) -> Result<f64> {
    let g = field.grid()?;
    let ux = g.derivative_real(&field.u, 1);
    let density: Vec<f64> = match d {
        Dispersion::KleinGordon => field
            .u
            .iter()
            .zip(&field.ut)
            .zip(&ux)
            .map(|((u, ut), ux)| 0.5 * ut * ut + 0.5 * ux * ux + 0.5 * u * u - eps / 3.0 * u * u * u)
            .collect(),
        Dispersion::FourthOrder => {
            let uxx = g.derivative_real(&field.u, 2);
            field
                .u
                .iter()
                .zip(&field.ut)
                .zip(ux.iter().zip(&uxx))
                .map(|((u, ut), (ux, uxx))| {
                    0.5 * ut * ut - 0.5 * ux * ux + 0.5 * uxx * uxx + 0.5 * u * u - eps / 4.0 * u.powi(4)
                })
                .collect()
        }
    };
    Ok(g.integrate(density))
}

/// State in the interaction picture: for every retained mode with frequency
/// Ω, (p, q) = P(−t)(û, v̂) where P(t) is the free propagator, so the linear
/// part of the flow is removed exactly and only the nonlinear forcing drives
/// the integrator.
struct Interaction<'a> {
    grid: &'a PeriodicGrid,
    band: Vec<usize>,
    omega: Vec<f64>,
    eps: f64,
    power: i32,
    buf: Vec<Complex64>,
}

impl Interaction<'_> {
    fn physical(&mut self, t: f64, w: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let nb = self.band.len();
        let mut uh = vec![Complex64::new(0.0, 0.0); nb];
        let mut vh = vec![Complex64::new(0.0, 0.0); nb];
        for (i, &om) in self.omega.iter().enumerate() {
            let p = Complex64::new(w[2 * i], w[2 * i + 1]);
            let q = Complex64::new(w[2 * (nb + i)], w[2 * (nb + i) + 1]);
            let (s, c) = (om * t).sin_cos();
            uh[i] = p * c + q * (s / om);
            vh[i] = -p * (om * s) + q * c;
        }
        (uh, vh)
    }

    fn to_grid(&mut self, coeffs: &[Complex64]) -> Vec<f64> {
        self.buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for (&j, &c) in self.band.iter().zip(coeffs) {
            self.buf[j] = c;
        }
        self.grid.inverse(&mut self.buf);
        self.buf.iter().map(|z| z.re).collect()
    }

    fn rhs(&mut self, t: f64, w: &[f64], dw: &mut [f64]) {
        let nb = self.band.len();
        let (uh, _) = self.physical(t, w);
        let u = self.to_grid(&uh);
        for (z, v) in self.buf.iter_mut().zip(&u) {
            *z = Complex64::new(v.powi(self.power), 0.0);
        }
        self.grid.forward(&mut self.buf);
        for (i, (&j, &om)) in self.band.iter().zip(&self.omega).enumerate() {
            let f = self.buf[j] * self.eps;
            let (s, c) = (om * t).sin_cos();
            let dp = -f * (s / om);
            let dq = f * c;
            dw[2 * i] = dp.re;
            dw[2 * i + 1] = dp.im;
            dw[2 * (nb + i)] = dq.re;
            dw[2 * (nb + i) + 1] = dq.im;
        }
    }
}

/// Pseudospectral solution of the equation selected by `d`, sampled at
/// `times` (nondecreasing, starting at or after t = 0).
///
/// Initial data are projected onto the dealiased band, so the first snapshot
/// may differ from `u0` by the discarded high modes.
pub fn solve_direct(d: Dispersion, eps: f64, u0: &RealField, times: &[f64], rtol: f64) -> Result<DirectRun> {
    let grid = u0.grid()?;
    if times.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::InvalidArgument("snapshot times must be nonnegative".into()));
    }
    let band = grid.band(d.band_divisor());
    let omega: Vec<f64> = band.iter().map(|&j| d.omega(grid.wavenumbers()[j])).collect();
    let nb = band.len();
    let uh = grid.forward_real(&u0.u);
    let vh = grid.forward_real(&u0.ut);
    let mut w0 = vec![0.0; 4 * nb];
    for (i, &j) in band.iter().enumerate() {
        w0[2 * i] = uh[j].re;
        w0[2 * i + 1] = uh[j].im;
        w0[2 * (nb + i)] = vh[j].re;
        w0[2 * (nb + i) + 1] = vh[j].im;
    }
    let scale = w0.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);

    let mut sys = Interaction {
        grid: &grid,
        band,
        omega,
        eps,
        power: d.nonlinear_power(),
        buf: vec![Complex64::new(0.0, 0.0); grid.len()],
    };
    let t_end = times.last().copied().unwrap_or(0.0);
    let opts = OdeOptions::new(rtol, rtol * scale);
    let tr = ode::solve(|t, w, dw| sys.rhs(t, w, dw), 0.0, &w0, t_end, Output::At(times), &opts)?;

    let mut snapshots = Vec::with_capacity(times.len());
    let mut energies = Vec::with_capacity(times.len());
    for (&t, w) in tr.t.iter().zip(&tr.y) {
        let (uh, vh) = sys.physical(t, w);
        let field = RealField {
            length: u0.length,
            u: sys.to_grid(&uh),
            ut: sys.to_grid(&vh),
        };
        energies.push(energy(d, eps, &field)?);
        snapshots.push(field);
    }
    let e0 = energies.first().copied().unwrap_or(0.0);
    let max_energy_drift = energies
        .iter()
        .map(|e| (e - e0).abs() / e0.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max);
    Ok(DirectRun {
        times: tr.t,
        snapshots,
        energies,
        max_energy_drift,
        stats: tr.stats,
    })
}

/// u_tt − u_xx + u = εu².
pub fn solve_kg_direct(eps: f64, u0: &RealField, times: &[f64], rtol: f64) -> Result<DirectRun> {
    solve_direct(Dispersion::KleinGordon, eps, u0, times, rtol)
}

/// u_tt + u_xx + u_xxxx + u = εu³.
pub fn solve_fourth_direct(eps: f64, u0: &RealField, times: &[f64], rtol: f64) -> Result<DirectRun> {
    solve_direct(Dispersion::FourthOrder, eps, u0, times, rtol)
}
