use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{phase_match_residual, Dispersion, WavePacketField};
use crate::error::{Error, Result};
use crate::spectral::PeriodicGrid;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Carriers with |ω(3k) − 3ω(k)| below this are treated as phase matched.
pub const TWO_WAVE_MATCH_TOL: f64 = 1e-6;

/// A_t = −c·A_x + iβ·A_xx + iγ·|A|²A
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NlsCoefficients {
    pub c: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl NlsCoefficients {
    /// Coefficients of the amplitude equation for the field's equation.
    pub fn for_field(f: &WavePacketField) -> Self {
        let (w, c) = f.dispersion.eval(f.k);
        match f.dispersion {
            Dispersion::KleinGordon => Self {
                c,
                beta: 1.0 / (2.0 * w * w * w),
                gamma: f.eps * f.eps * 5.0 / (3.0 * w),
            },
            Dispersion::FourthOrder => Self {
                c,
                beta: 0.0,
                gamma: 3.0 * f.eps / (2.0 * w),
            },
        }
    }

    pub fn linear(self) -> Self {
        Self { gamma: 0.0, ..self }
    }
}

/// ∂_t A from the amplitude equation, evaluated spectrally.
pub fn amplitude_rate(f: &WavePacketField, co: &NlsCoefficients) -> Vec<Complex64> {
    let ax = f.grid.derivative(&f.samples, 1);
    let axx = f.grid.derivative(&f.samples, 2);
    f.samples
        .iter()
        .zip(ax.iter().zip(&axx))
        .map(|(a, (ax, axx))| -co.c * ax + I * co.beta * axx + I * co.gamma * a.norm_sqr() * a)
        .collect()
}

/// Multiplies each Fourier mode by exp((−icκ − iβκ²)·dt).
fn linear_step(grid: &PeriodicGrid, a: &mut [Complex64], c: f64, beta: f64, dt: f64) {
    grid.forward(a);
    for (z, &k) in a.iter_mut().zip(grid.wavenumbers()) {
        *z *= Complex64::from_polar(1.0, -(c * k + beta * k * k) * dt);
    }
    grid.inverse(a);
}

fn step_count(t_end: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidArgument(format!("time step must be positive, got {dt}")));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!("t_end must be nonnegative, got {t_end}")));
    }
    Ok((t_end / dt).ceil() as usize)
}

/// Strang-split solution of A_t = −cA_x + iβA_xx + iγ|A|²A over `t_end`
/// with steps no longer than `dt`. Both substeps are exact flows.
pub fn solve_nls_with(f: &WavePacketField, co: &NlsCoefficients, t_end: f64, dt: f64) -> Result<WavePacketField> {
    let steps = step_count(t_end, dt)?;
    let mut a = f.samples.clone();
    if steps == 0 {
        return Ok(f.with_samples(a));
    }
    let h = t_end / steps as f64;
    for _ in 0..steps {
        linear_step(&f.grid, &mut a, co.c, co.beta, 0.5 * h);
        if co.gamma != 0.0 {
            for z in a.iter_mut() {
                *z *= Complex64::from_polar(1.0, co.gamma * z.norm_sqr() * h);
            }
        }
        linear_step(&f.grid, &mut a, co.c, co.beta, 0.5 * h);
    }
    Ok(f.with_samples(a))
}

/// [`solve_nls_with`] using the field's own amplitude-equation coefficients.
pub fn solve_nls(f: &WavePacketField, t_end: f64, dt: f64) -> Result<WavePacketField> {
    solve_nls_with(f, &NlsCoefficients::for_field(f), t_end, dt)
}

/// Pointwise nonlinear part of the resonant two-wave system.
fn two_wave_forcing(a: Complex64, b: Complex64, eps: f64, wa: f64, wb: f64) -> (Complex64, Complex64) {
    let (ma, mb) = (a.norm_sqr(), b.norm_sqr());
    let fa = (-3.0 * ma * a - 6.0 * mb * a - 3.0 * a.conj() * a.conj() * b) / (2.0 * I * wa);
    let fb = (-3.0 * mb * b - 6.0 * ma * b - a * a * a) / (2.0 * I * wb);
    (eps * fa, eps * fb)
}

/// Envelopes A (carrier k) and B (carrier 3k) of the fourth-order equation
/// at a phase-matched k. Each step advects both exactly at their own group
/// velocities around one classical RK4 step of the pointwise coupling.
pub fn solve_two_wave(
    a: &WavePacketField,
    b: &WavePacketField,
    t_end: f64,
    dt: f64,
) -> Result<(WavePacketField, WavePacketField)> {
    if a.dispersion != Dispersion::FourthOrder {
        return Err(Error::InvalidArgument("the two-wave system belongs to the fourth-order equation".into()));
    }
    let residual = phase_match_residual(a.dispersion, 3, a.k);
    if residual.abs() >= TWO_WAVE_MATCH_TOL {
        return Err(Error::NotPhaseMatched { k: a.k, residual });
    }
    if a.samples.len() != b.samples.len() {
        return Err(Error::LengthMismatch { expected: a.samples.len(), found: b.samples.len() });
    }
    let steps = step_count(t_end, dt)?;
    let d = a.dispersion;
    let (wa, ca) = d.eval(a.k);
    let (wb, cb) = d.eval(3.0 * a.k);
    let eps = a.eps;
    let (mut za, mut zb) = (a.samples.clone(), b.samples.clone());
    if steps > 0 {
        let h = t_end / steps as f64;
        for _ in 0..steps {
            linear_step(&a.grid, &mut za, ca, 0.0, 0.5 * h);
            linear_step(&a.grid, &mut zb, cb, 0.0, 0.5 * h);
            for (x, y) in za.iter_mut().zip(zb.iter_mut()) {
                let f = |p: Complex64, q: Complex64| two_wave_forcing(p, q, eps, wa, wb);
                let (k1a, k1b) = f(*x, *y);
                let (k2a, k2b) = f(*x + 0.5 * h * k1a, *y + 0.5 * h * k1b);
                let (k3a, k3b) = f(*x + 0.5 * h * k2a, *y + 0.5 * h * k2b);
                let (k4a, k4b) = f(*x + h * k3a, *y + h * k3b);
                *x += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
                *y += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
            }
            linear_step(&a.grid, &mut za, ca, 0.0, 0.5 * h);
            linear_step(&a.grid, &mut zb, cb, 0.0, 0.5 * h);
        }
    }
    Ok((a.with_samples(za), b.with_samples(zb)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ode::{self, OdeOptions, Output};
    use std::f64::consts::PI;

    fn kg_packet(eps: f64) -> WavePacketField {
        let l = 2.0 * PI * 32.0;
        WavePacketField::gaussian(
            Dispersion::KleinGordon,
            eps,
            1.0,
            l,
            1024,
            Complex64::new(0.7, 0.2),
            0.4 * l,
            8.0,
        )
        .unwrap()
    }

    #[test]
    fn linear_flow_matches_analytic_gaussian() {
        let f = kg_packet(0.1);
        let co = NlsCoefficients::for_field(&f).linear();
        let t = 60.0;
        let out = solve_nls_with(&f, &co, t, 0.5).unwrap();
        // Complex-diffusion solution of a Gaussian with D = iβ.
        let (s2, x0, a0) = (64.0, 0.4 * f.grid.length(), Complex64::new(0.7, 0.2));
        let spread = Complex64::new(s2, 2.0 * co.beta * t);
        for (x, z) in f.grid.x().iter().zip(&out.samples) {
            let xi = x - x0 - co.c * t;
            let want = a0 * (s2 / spread).sqrt() * (-(xi * xi) / (2.0 * spread)).exp();
            assert!((z - want).norm() < 1e-10, "x={x}: {z} vs {want}");
        }
    }

    #[test]
    fn l2_is_conserved() {
        let f = kg_packet(0.3);
        let mut co = NlsCoefficients::for_field(&f);
        co.gamma = 2.0;
        let out = solve_nls_with(&f, &co, 1.0 / 0.3, 0.01).unwrap();
        let (n0, n1) = (f.l2_norm_sq(), out.l2_norm_sq());
        assert!(((n1 - n0) / n0).abs() < 1e-10);
    }

    #[test]
    fn zero_stays_zero() {
        let f = kg_packet(0.1).with_samples(vec![Complex64::new(0.0, 0.0); 1024]);
        let out = solve_nls(&f, 5.0, 0.1).unwrap();
        assert!(out.samples.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn second_order_in_dt() {
        let f = kg_packet(0.5);
        let mut co = NlsCoefficients::for_field(&f);
        co.gamma = 3.0;
        let fine = solve_nls_with(&f, &co, 4.0, 0.0025).unwrap();
        let err = |dt| {
            let o = solve_nls_with(&f, &co, 4.0, dt).unwrap();
            o.samples.iter().zip(&fine.samples).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
        };
        let ratio = err(0.2) / err(0.1);
        assert!((ratio.log2() - 2.0).abs() < 0.2, "{ratio}");
    }

    fn matched(eps: f64, a: Complex64, b: Complex64) -> (WavePacketField, WavePacketField) {
        let k = 1.0 / 3f64.sqrt();
        let l = 2.0 * PI / k * 8.0;
        (
            WavePacketField::uniform(Dispersion::FourthOrder, eps, k, l, 32, a).unwrap(),
            WavePacketField::uniform(Dispersion::FourthOrder, eps, 3.0 * k, l, 32, b).unwrap(),
        )
    }

    #[test]
    fn two_wave_rejects_unmatched_carrier() {
        let l = 2.0 * PI * 8.0;
        let a = WavePacketField::uniform(Dispersion::FourthOrder, 0.1, 1.0, l, 32, Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(solve_two_wave(&a, &a, 1.0, 0.1), Err(Error::NotPhaseMatched { .. })));
    }

    #[test]
    fn two_wave_zero_stays_zero() {
        let z = Complex64::new(0.0, 0.0);
        let (a, b) = matched(1.0, z, z);
        let (a, b) = solve_two_wave(&a, &b, 3.0, 0.1).unwrap();
        assert!(a.samples.iter().chain(&b.samples).all(|z| z.norm() == 0.0));
    }

    #[test]
    fn b_grows_along_forcing_direction() {
        let a0 = Complex64::new(0.4, 0.1);
        let (a, b) = matched(1.0, a0, Complex64::new(0.0, 0.0));
        let h = 1e-4;
        let (_, b1) = solve_two_wave(&a, &b, h, h).unwrap();
        let wb = Dispersion::FourthOrder.omega(3.0 * a.k);
        let rate = -(a0 * a0 * a0) / (2.0 * I * wb);
        let observed = b1.samples[0] / h;
        assert!((observed - rate).norm() < 1e-3 * rate.norm(), "{observed} vs {rate}");
    }

    #[test]
    fn uniform_two_wave_matches_ode_reference() {
        let eps = 0.2;
        let (a0, b0) = (Complex64::new(0.9, -0.3), Complex64::new(0.2, 0.5));
        let (a, b) = matched(eps, a0, b0);
        let t = 20.0;
        let (af, bf) = solve_two_wave(&a, &b, t, 0.005).unwrap();
        let d = Dispersion::FourthOrder;
        let (wa, wb) = (d.omega(a.k), d.omega(3.0 * a.k));
        // Independent real-valued form of the coupled system.
        let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
            let za = Complex64::new(y[0], y[1]);
            let zb = Complex64::new(y[2], y[3]);
            let ra = eps * (3.0 * za.norm_sqr() * za + 6.0 * zb.norm_sqr() * za + 3.0 * za.conj().powu(2) * zb)
                * I
                / (2.0 * wa);
            let rb = eps * (3.0 * zb.norm_sqr() * zb + 6.0 * za.norm_sqr() * zb + za.powu(3)) * I / (2.0 * wb);
            dy.copy_from_slice(&[ra.re, ra.im, rb.re, rb.im]);
        };
        let tr = ode::solve(rhs, 0.0, &[a0.re, a0.im, b0.re, b0.im], t, Output::At(&[t]), &OdeOptions::new(1e-12, 1e-14))
            .unwrap();
        let y = tr.last();
        for j in [0, 7, 31] {
            assert!((af.samples[j] - Complex64::new(y[0], y[1])).norm() < 1e-8);
            assert!((bf.samples[j] - Complex64::new(y[2], y[3])).norm() < 1e-8);
        }
    }
}
