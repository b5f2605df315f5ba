//! Multiple-scales ODE catalog.
//!
//! Each [`CaseSpec`] pairs an original second-order system with its
//! amplitude equations and the reconstruction map taking amplitudes back to
//! the original state. [`compare`] runs both paths on a shared grid.

pub mod cases;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::solve_f64;
use crate::ode::{self, OdeOptions, Output, SolverStats, Trajectory};

/// Which terms of the amplitude equation are kept.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeOrder {
    /// Only the O(ε) term.
    First,
    /// O(ε) and O(ε²) terms, where the case has one.
    #[default]
    Second,
}

pub type Rhs = fn(f64, &[f64], f64, &mut [f64]);
pub type AmplitudeRhs = fn(f64, &[f64], f64, AmplitudeOrder, &mut [f64]);
/// Maps (t, amplitudes, ε, order) to the full original state, derivatives included.
pub type Reconstruct = fn(f64, &[f64], f64, AmplitudeOrder) -> Vec<f64>;
/// Maps (t, ε, initial state) to the exact state.
pub type Exact = fn(f64, f64, &[f64]) -> Vec<f64>;
/// Maps (t, A(0), ε, order) to A(t).
pub type ClosedForm = fn(f64, &[f64], f64, AmplitudeOrder) -> Vec<f64>;

/// One catalog entry.
///
/// The original system has `dim` second-order components stored as
/// (q₁, q₁', q₂, q₂', …).
#[derive(Debug)]
pub struct CaseSpec {
    pub name: &'static str,
    pub dim: usize,
    pub amplitude_len: usize,
    /// Expansion is designed to stay uniform for t ≲ ε^{−q}.
    pub validity_exponent: i32,
    pub original_rhs: Rhs,
    pub amplitude_rhs: AmplitudeRhs,
    pub reconstruct: Reconstruct,
    pub exact: Option<Exact>,
    pub amplitude_closed_form: Option<ClosedForm>,
    pub default_ics: &'static [f64],
    /// Every complex amplitude keeps its modulus under the flow.
    pub conserves_modulus: bool,
}

impl CaseSpec {
    pub fn state_len(&self) -> usize {
        2 * self.dim
    }

    /// Positions (q₁, q₂, …) extracted from a full state.
    pub fn positions(&self, state: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|i| state[2 * i]).collect()
    }
}

/// Looks up a case by name.
pub fn catalog(name: &str) -> Result<&'static CaseSpec> {
    cases::ALL
        .iter()
        .copied()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownCase(name.to_string()))
}

pub fn case_names() -> Vec<&'static str> {
    cases::ALL.iter().map(|c| c.name).collect()
}

/// Direct integration of the original system on `grid`.
pub fn integrate_original(
    case: &CaseSpec,
    ics: &[f64],
    grid: &[f64],
    eps: f64,
    rtol: f64,
    atol: f64,
) -> Result<Trajectory> {
    check_len(case.state_len(), ics.len())?;
    let rhs = case.original_rhs;
    ode::integrate_on_grid(|t, y, d| rhs(t, y, eps, d), ics, grid, rtol, atol)
}

/// How amplitudes are advanced in time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmplitudeMethod {
    Integrate,
    /// Use the case's closed form when it has one, else integrate.
    ClosedForm,
}

/// Amplitude trajectory on `grid` starting from `a0`.
pub fn integrate_amplitude(
    case: &CaseSpec,
    a0: &[f64],
    grid: &[f64],
    eps: f64,
    order: AmplitudeOrder,
    opts: &OdeOptions,
    method: AmplitudeMethod,
) -> Result<Trajectory> {
    check_len(case.amplitude_len, a0.len())?;
    if let (AmplitudeMethod::ClosedForm, Some(cf)) = (method, case.amplitude_closed_form) {
        let t0 = grid.first().copied().unwrap_or(0.0);
        return Ok(Trajectory {
            t: grid.to_vec(),
            y: grid.iter().map(|&t| cf(t - t0, a0, eps, order)).collect(),
            stats: SolverStats::default(),
        });
    }
    let rhs = case.amplitude_rhs;
    let (t0, t1) = match (grid.first(), grid.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::InvalidArgument("empty output grid".into())),
    };
    ode::solve(|t, y, d| rhs(t, y, eps, order, d), t0, a0, t1, Output::At(grid), opts)
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Newton iteration for amplitudes whose reconstruction at t = 0 has the
/// given state. Starts from the ε = 0 fit, itself found by Newton from zero.
pub fn fit_initial_amplitudes(
    case: &CaseSpec,
    ics: &[f64],
    eps: f64,
    order: AmplitudeOrder,
    newton_tol: f64,
) -> Result<Vec<f64>> {
    check_len(case.state_len(), ics.len())?;
    if case.amplitude_len != case.state_len() {
        return Err(Error::InvalidArgument(format!(
            "case `{}` has {} amplitude unknowns for {} initial conditions",
            case.name,
            case.amplitude_len,
            case.state_len()
        )));
    }
    let zero = vec![0.0; case.amplitude_len];
    let base = newton_fit(case, ics, 0.0, order, newton_tol, zero)?;
    if eps == 0.0 {
        return Ok(base);
    }
    newton_fit(case, ics, eps, order, newton_tol, base)
}

fn newton_fit(
    case: &CaseSpec,
    ics: &[f64],
    eps: f64,
    order: AmplitudeOrder,
    tol: f64,
    mut a: Vec<f64>,
) -> Result<Vec<f64>> {
    let n = a.len();
    let residual = |a: &[f64]| -> Vec<f64> {
        (case.reconstruct)(0.0, a, eps, order)
            .iter()
            .zip(ics)
            .map(|(r, y)| r - y)
            .collect()
    };
    let mut r = residual(&a);
    for _ in 0..50 {
        if max_abs(&r) <= tol {
            return Ok(a);
        }
        let mut jac = vec![vec![0.0; n]; n];
        for j in 0..n {
            let h = 1e-6 * a[j].abs().max(1.0);
            let mut ap = a.clone();
            let mut am = a.clone();
            ap[j] += h;
            am[j] -= h;
            let (rp, rm) = (residual(&ap), residual(&am));
            for i in 0..n {
                jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let step = solve_f64(jac, r.iter().map(|v| -v).collect()).ok_or(Error::NewtonDivergence {
            iterations: 0,
            residual: max_abs(&r),
        })?;
        for (ai, si) in a.iter_mut().zip(&step) {
            *ai += si;
        }
        r = residual(&a);
    }
    if max_abs(&r) <= tol {
        return Ok(a);
    }
    Err(Error::NewtonDivergence {
        iterations: 50,
        residual: max_abs(&r),
    })
}

/// The direct (non-uniform) two-term expansion of the damped oscillator with
/// y(0) = 1, y'(0) = 0: cos t + (ε/2)(−sin t − t cos t).
pub fn naive_damped_expansion(t: f64, eps: f64) -> f64 {
    let (s, c) = t.sin_cos();
    c + 0.5 * eps * (-s - t * c)
}

/// Which solution the multiscale path is measured against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    #[default]
    Integrator,
    /// The case's exact solution; falls back to the integrator when absent.
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareOptions {
    pub rtol: f64,
    pub atol: f64,
    pub order: AmplitudeOrder,
    pub samples: usize,
    /// Initial state of the original system; the case default when `None`.
    pub ics: Option<Vec<f64>>,
    pub reference: Reference,
    pub amplitude_method: AmplitudeMethod,
    pub newton_tol: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            order: AmplitudeOrder::Second,
            samples: 2048,
            ics: None,
            reference: Reference::Integrator,
            amplitude_method: AmplitudeMethod::Integrate,
            newton_tol: 1e-13,
        }
    }
}

/// Direct vs multiscale comparison on a uniform grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub case: String,
    pub eps: f64,
    pub horizon: f64,
    pub order: AmplitudeOrder,
    pub t: Vec<f64>,
    /// Positions per sample, one entry per component.
    pub direct: Vec<Vec<f64>>,
    pub multiscale: Vec<Vec<f64>>,
    /// Largest component error per sample.
    pub abs_error: Vec<f64>,
    pub max_abs_error: f64,
    /// Root-mean-square error over samples and components.
    pub l2_error: f64,
    pub initial_amplitudes: Vec<f64>,
    pub direct_stats: SolverStats,
    pub amplitude_stats: SolverStats,
    pub reference_used: Reference,
    pub wall_clock_secs: f64,
}

impl RunReport {
    /// Max error restricted to samples with t ≤ `t_max`.
    pub fn max_error_until(&self, t_max: f64) -> f64 {
        self.t
            .iter()
            .zip(&self.abs_error)
            .filter(|(t, _)| **t <= t_max)
            .fold(0.0, |m, (_, e)| m.max(*e))
    }
}

/// [`compare_until`] with horizon ε^{−horizon_exponent}.
pub fn compare(case: &CaseSpec, eps: f64, horizon_exponent: f64, opts: &CompareOptions) -> Result<RunReport> {
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument(
            "a horizon exponent needs eps > 0; use compare_until for eps = 0".into(),
        ));
    }
    check_horizon(case, horizon_exponent)?;
    compare_until(case, eps, eps.powf(-horizon_exponent), opts)
}

fn check_horizon(case: &CaseSpec, exponent: f64) -> Result<()> {
    if exponent > f64::from(case.validity_exponent) + 1.0 {
        return Err(Error::HorizonTooLong {
            case: case.name.to_string(),
            requested: exponent,
            validity: case.validity_exponent,
        });
    }
    Ok(())
}

/// Runs the direct and multiscale paths to `t_end` and records the errors.
pub fn compare_until(case: &CaseSpec, eps: f64, t_end: f64, opts: &CompareOptions) -> Result<RunReport> {
    let started = Instant::now();
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!("horizon must be positive and finite, got {t_end}")));
    }
    if eps > 0.0 {
        check_horizon(case, -t_end.ln() / eps.ln())?;
    }
    if opts.samples < 2 {
        return Err(Error::InvalidArgument("need at least two samples".into()));
    }
    let ics = opts.ics.clone().unwrap_or_else(|| case.default_ics.to_vec());
    check_len(case.state_len(), ics.len())?;
    let grid = ode::uniform_grid(0.0, t_end, opts.samples);

    let (direct_states, direct_stats, reference_used) = match (opts.reference, case.exact) {
        (Reference::Exact, Some(exact)) => (
            grid.iter().map(|&t| exact(t, eps, &ics)).collect::<Vec<_>>(),
            SolverStats::default(),
            Reference::Exact,
        ),
        _ => {
            let tr = integrate_original(case, &ics, &grid, eps, opts.rtol, opts.atol)?;
            (tr.y, tr.stats, Reference::Integrator)
        }
    };

    let a0 = fit_initial_amplitudes(case, &ics, eps, opts.order, opts.newton_tol)?;
    let amp_opts = OdeOptions::new(opts.rtol, opts.atol);
    let amps = integrate_amplitude(case, &a0, &grid, eps, opts.order, &amp_opts, opts.amplitude_method)?;

    let mut direct = Vec::with_capacity(grid.len());
    let mut multiscale = Vec::with_capacity(grid.len());
    let mut abs_error = Vec::with_capacity(grid.len());
    let mut sq = 0.0;
    for ((t, d), a) in grid.iter().zip(&direct_states).zip(&amps.y) {
        let dp = case.positions(d);
        let mp = case.positions(&(case.reconstruct)(*t, a, eps, opts.order));
        let e = dp
            .iter()
            .zip(&mp)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        sq += dp.iter().zip(&mp).map(|(x, y)| (x - y).powi(2)).sum::<f64>();
        direct.push(dp);
        multiscale.push(mp);
        abs_error.push(e);
    }
    let count = (grid.len() * case.dim) as f64;
    Ok(RunReport {
        case: case.name.to_string(),
        eps,
        horizon: t_end,
        order: opts.order,
        max_abs_error: abs_error.iter().fold(0.0, |m, e| m.max(*e)),
        l2_error: (sq / count).sqrt(),
        t: grid,
        direct,
        multiscale,
        abs_error,
        initial_amplitudes: a0,
        direct_stats,
        amplitude_stats: amps.stats,
        reference_used,
        wall_clock_secs: started.elapsed().as_secs_f64(),
    })
}
