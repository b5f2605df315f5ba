use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::direct::{solve_direct, RealField};
use super::nls::{amplitude_rate, solve_nls_with, NlsCoefficients};
use super::{check_carrier, Dispersion, WavePacketField};
use crate::error::{Error, Result};
use crate::ode::SolverStats;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real field (and its time derivative) represented by an envelope at time t.
///
/// Order 0 is 2Re(A e^{iθ}) with θ = kx − ωt. Order 1 adds the O(ε) harmonic
/// correction: 2|A|² − (2/3)Re(A²e^{2iθ}) for Klein–Gordon and
/// 2Re(A³e^{3iθ})/(72k⁴ − 8) for the fourth-order equation. The time
/// derivative uses ∂_t A from the amplitude equation.
pub fn reconstruct_field(a: &WavePacketField, t: f64, order: u32) -> Result<RealField> {
    if order > 1 {
        return Err(Error::InvalidArgument(format!("reconstruction order must be 0 or 1, got {order}")));
    }
    let (k, eps, d) = (a.k, a.eps, a.dispersion);
    let w = d.omega(k);
    let rate = amplitude_rate(a, &NlsCoefficients::for_field(a));
    let third = if d == Dispersion::FourthOrder && order == 1 {
        let den = 72.0 * k.powi(4) - 8.0;
        if den.abs() < 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "carrier k = {k} is phase matched; use the two-wave system"
            )));
        }
        1.0 / den
    } else {
        0.0
    };
    let corr = eps * f64::from(order);
    let x = a.grid.x();
    let n = x.len();
    let (mut u, mut ut) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for ((&xj, &z), &dz) in x.iter().zip(&a.samples).zip(&rate) {
        let e1 = Complex64::from_polar(1.0, k * xj - w * t);
        let mut uj = 2.0 * (z * e1).re;
        let mut vj = 2.0 * ((dz - I * w * z) * e1).re;
        match d {
            Dispersion::KleinGordon => {
                let e2 = e1 * e1;
                uj += corr * (2.0 * z.norm_sqr() - 2.0 / 3.0 * (z * z * e2).re);
                vj += corr
                    * (4.0 * (z.conj() * dz).re - 2.0 / 3.0 * ((2.0 * z * dz - 2.0 * I * w * z * z) * e2).re);
            }
            Dispersion::FourthOrder => {
                let e3 = e1 * e1 * e1;
                let z3 = z * z * z;
                uj += corr * third * 2.0 * (z3 * e3).re;
                vj += corr * third * 2.0 * ((3.0 * z * z * dz - 3.0 * I * w * z3) * e3).re;
            }
        }
        u.push(uj);
        ut.push(vj);
    }
    RealField::new(a.grid.length(), u, ut)
}

/// First moment of |A|² on the periodic grid.
pub fn centroid(x: &[f64], weight: &[f64]) -> f64 {
    let m: f64 = weight.iter().sum();
    x.iter().zip(weight).map(|(x, w)| x * w).sum::<f64>() / m
}

/// Gaussian packet a·exp(−(x − x_c)²/2σ²)·e^{ikx} and run settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketParams {
    pub dispersion: Dispersion,
    pub eps: f64,
    pub k: f64,
    pub length: f64,
    pub n: usize,
    pub amplitude: f64,
    /// Envelope width in carrier wavelengths 2π/k.
    pub sigma_wavelengths: f64,
    /// Envelope centre in units of σ.
    pub center_sigmas: f64,
    pub checkpoints: Vec<f64>,
    pub rtol: f64,
    pub nls_dt: f64,
    pub order: u32,
    /// Keep full snapshots in the report.
    #[serde(default)]
    pub keep_snapshots: bool,
}

impl PacketParams {
    /// Klein–Gordon packet at k = 1 with σ = 10 wavelengths on
    /// L = 2π·128, N = 2048.
    pub fn klein_gordon(eps: f64) -> Self {
        Self {
            dispersion: Dispersion::KleinGordon,
            eps,
            k: 1.0,
            length: 2.0 * PI * 128.0,
            n: 2048,
            amplitude: 0.5,
            sigma_wavelengths: 10.0,
            center_sigmas: 6.0,
            checkpoints: vec![0.5 / eps, 1.0 / eps, 0.5 / (eps * eps)],
            rtol: 1e-10,
            nls_dt: 0.05,
            order: 1,
            keep_snapshots: false,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma_wavelengths * 2.0 * PI / self.k.abs()
    }

    pub fn center(&self) -> f64 {
        self.center_sigmas * self.sigma()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.n.is_power_of_two() {
            return Err(Error::GridNotPowerOfTwo(self.n));
        }
        check_carrier(self.k, self.length)?;
        if !(self.eps >= 0.0) {
            return Err(Error::InvalidArgument(format!("eps must be nonnegative, got {}", self.eps)));
        }
        if self.sigma_wavelengths < 10.0 {
            return Err(Error::InvalidArgument(format!(
                "envelope must span at least 10 wavelengths, got {}",
                self.sigma_wavelengths
            )));
        }
        if self.checkpoints.is_empty() || self.checkpoints.windows(2).any(|w| w[1] <= w[0]) || self.checkpoints[0] < 0.0 {
            return Err(Error::InvalidArgument("checkpoints must be nonnegative and increasing".into()));
        }
        let t_end = *self.checkpoints.last().expect("nonempty");
        let reach = self.center() + self.dispersion.group_velocity(self.k).abs() * t_end + 6.0 * self.sigma();
        if self.length < reach {
            return Err(Error::InvalidArgument(format!(
                "domain length {} is shorter than the packet's reach {reach}",
                self.length
            )));
        }
        if !(self.rtol > 0.0 && self.nls_dt > 0.0) {
            return Err(Error::InvalidArgument("rtol and nls_dt must be positive".into()));
        }
        Ok(())
    }

    pub fn initial_envelope(&self) -> Result<WavePacketField> {
        WavePacketField::gaussian(
            self.dispersion,
            self.eps,
            self.k,
            self.length,
            self.n,
            Complex64::new(self.amplitude, 0.0),
            self.center(),
            self.sigma(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub t: f64,
    /// ‖u_direct − u_reconstructed‖₂ / ‖u_direct‖₂.
    pub rel_l2: f64,
    pub max_abs: f64,
    pub envelope_centroid: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub u_direct: Vec<f64>,
    pub u_reconstructed: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacketReport {
    pub params: PacketParams,
    pub group_velocity: f64,
    pub checkpoints: Vec<Checkpoint>,
    pub direct_energy_drift: f64,
    /// Relative change of ∫|A|² over the run.
    pub envelope_l2_drift: f64,
    pub direct_stats: SolverStats,
    pub wall_clock_secs: f64,
    #[serde(skip)]
    pub snapshots: Vec<Snapshot>,
}

/// Evolves a packet with the direct solver and with the envelope equation,
/// starting the direct solver from the reconstruction at t = 0, and reports
/// their gap at each checkpoint.
pub fn packet_compare(p: &PacketParams) -> Result<PacketReport> {
    let started = Instant::now();
    p.validate()?;
    let env0 = p.initial_envelope()?;
    let u0 = reconstruct_field(&env0, 0.0, p.order)?;
    let direct = solve_direct(p.dispersion, p.eps, &u0, &p.checkpoints, p.rtol)?;

    let co = NlsCoefficients::for_field(&env0);
    let x = env0.grid.x();
    let mut env = env0.clone();
    let mut t_prev = 0.0;
    let mut checkpoints = Vec::with_capacity(p.checkpoints.len());
    let mut snapshots = Vec::new();
    for (&t, field) in p.checkpoints.iter().zip(&direct.snapshots) {
        env = solve_nls_with(&env, &co, t - t_prev, p.nls_dt)?;
        t_prev = t;
        let rec = reconstruct_field(&env, t, p.order)?;
        let diff: f64 = field.u.iter().zip(&rec.u).map(|(a, b)| (a - b).powi(2)).sum();
        let norm: f64 = field.u.iter().map(|a| a * a).sum();
        let weight: Vec<f64> = env.samples.iter().map(|z| z.norm_sqr()).collect();
        checkpoints.push(Checkpoint {
            t,
            rel_l2: (diff / norm).sqrt(),
            max_abs: field.u.iter().zip(&rec.u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
            envelope_centroid: centroid(&x, &weight),
        });
        if p.keep_snapshots {
            snapshots.push(Snapshot {
                t,
                x: x.clone(),
                u_direct: field.u.clone(),
                u_reconstructed: rec.u,
            });
        }
    }
    let (n0, n1) = (env0.l2_norm_sq(), env.l2_norm_sq());
    Ok(PacketReport {
        params: p.clone(),
        group_velocity: p.dispersion.group_velocity(p.k),
        checkpoints,
        direct_energy_drift: direct.max_energy_drift,
        envelope_l2_drift: ((n1 - n0) / n0).abs(),
        direct_stats: direct.stats,
        wall_clock_secs: started.elapsed().as_secs_f64(),
        snapshots,
    })
}
