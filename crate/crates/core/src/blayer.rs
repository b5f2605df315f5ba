//! Singularly perturbed two-point problems on [0, 1]:
//!
//! * linear: εy'' + y' − y = 0 with y(0) = 1, y(1) = 0
//! * nonlinear: εy'' + y' + y² = 0 with y(0) = 0, y(1) = 1/2
//!
//! Both develop a layer of width O(ε) at x = 0. The multiscale solutions are
//! checked against a centered finite-difference reference.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::msode::{cases::QUADRATIC_DAMPED, AmplitudeOrder};
use crate::ode::{self, OdeOptions, Output};

/// Smallest ε for which the closed forms are evaluated.
pub const EPS_FLOOR: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BvpKind {
    Linear,
    Nonlinear,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BvpProblem {
    pub eps: f64,
    pub kind: BvpKind,
    pub left: f64,
    pub right: f64,
}

impl BvpProblem {
    pub fn new(eps: f64, kind: BvpKind, left: f64, right: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {eps}")));
        }
        Ok(Self { eps, kind, left, right })
    }

    pub fn linear(eps: f64) -> Result<Self> {
        Self::new(eps, BvpKind::Linear, 1.0, 0.0)
    }

    pub fn nonlinear(eps: f64) -> Result<Self> {
        Self::new(eps, BvpKind::Nonlinear, 0.0, 0.5)
    }

    fn source(&self, y: f64) -> (f64, f64) {
        match self.kind {
            BvpKind::Linear => (-y, -1.0),
            BvpKind::Nonlinear => (y * y, 2.0 * y),
        }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps < 1.0) || eps.is_nan() {
        return Err(Error::InvalidArgument(format!("eps must lie in (0, 1), got {eps}")));
    }
    if !(eps >= EPS_FLOOR) {
        return Err(Error::EpsilonTooSmall { eps, floor: EPS_FLOOR });
    }
    Ok(())
}

/// Two-scale approximation to the linear problem.
///
/// The growing exponential e^{1/ε} only ever appears divided by itself, so
/// (1 − e^s)⁻¹e^r is evaluated as −e^{r−s}/(1 − e^{−s}).
pub fn linear_blayer_multiscale(x: f64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let s = 2.0 - 2.0 * eps + 1.0 / eps;
    let slow = -((1.0 - eps) * x - s).exp() / (1.0 - (-s).exp());
    let fast = ((-1.0 + eps - 1.0 / eps) * x).exp() / (1.0 - (-s).exp());
    Ok(slow + fast)
}

/// Exact solution of εy'' + y' − y = 0 with y(0) = `left`, y(1) = `right`.
pub fn linear_blayer_exact(x: f64, eps: f64, left: f64, right: f64) -> f64 {
    let root = (1.0 + 4.0 * eps).sqrt();
    let lp = (root - 1.0) / (2.0 * eps);
    let lm = -(1.0 + root) / (2.0 * eps);
    // y = α e^{λ₊(x−1)} + β e^{λ₋x}; every exponential stays bounded.
    let (p, q) = ((-lp).exp(), lm.exp());
    let det = p * q - 1.0;
    let alpha = (left * q - right) / det;
    let beta = (p * right - left) / det;
    alpha * (lp * (x - 1.0)).exp() + beta * (lm * x).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdSolution {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub newton_iterations: usize,
    /// Max-norm of the row-scaled discrete residual.
    pub residual: f64,
}

impl FdSolution {
    /// Piecewise-linear evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.x.len() - 1;
        let pos = (x.clamp(0.0, 1.0) * n as f64).min(n as f64 - 1.0);
        let i = pos.floor() as usize;
        let w = pos - i as f64;
        self.y[i] * (1.0 - w) + self.y[i + 1] * w
    }
}

/// Solves a tridiagonal system in place; `lower[0]` and `upper[n−1]` are ignored.
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut beta = diag[0];
    c[0] = upper[0] / beta;
    rhs[0] /= beta;
    for i in 1..n {
        beta = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / beta;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / beta;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
}

fn initial_guess(p: &BvpProblem, x: &[f64]) -> Vec<f64> {
    let mut y: Vec<f64> = match p.kind {
        BvpKind::Linear => vec![0.0; x.len()],
        BvpKind::Nonlinear => {
            // Reduced problem y' = −y² through the right boundary value,
            // plus a layer correcting the left one.
            let outer = |x: f64| {
                if p.right == 0.0 {
                    return 0.0;
                }
                let d = x + 1.0 / p.right - 1.0;
                if d > 0.0 {
                    1.0 / d
                } else {
                    p.right
                }
            };
            let jump = p.left - outer(0.0);
            x.iter().map(|&xi| outer(xi) + jump * (-xi / p.eps).exp()).collect()
        }
    };
    y[0] = p.left;
    *y.last_mut().expect("grid") = p.right;
    y
}

/// Second-order centered finite differences on N uniform intervals.
///
/// Each interior row is scaled by h²/(2ε). The linear problem converges in a
/// single Newton step; the nonlinear one uses backtracking Newton.
pub fn solve_bvp_fd(p: &BvpProblem, n: usize) -> Result<FdSolution> {
    if n < 64 {
        return Err(Error::InvalidArgument(format!("need N >= 64 intervals, got {n}")));
    }
    let h = 1.0 / n as f64;
    let x = ode::uniform_grid(0.0, 1.0, n + 1);
    let mut y = initial_guess(p, &x);
    let scale = h * h / (2.0 * p.eps);
    let (a, c) = (p.eps / (h * h), 0.5 / h);

    let residual = |y: &[f64]| -> Vec<f64> {
        (1..n)
            .map(|i| {
                let (q, _) = p.source(y[i]);
                scale * (a * (y[i + 1] - 2.0 * y[i] + y[i - 1]) + c * (y[i + 1] - y[i - 1]) + q)
            })
            .collect()
    };
    let norm = |r: &[f64]| r.iter().fold(0.0_f64, |m, v| m.max(v.abs()));

    let tol = 1e-12;
    let mut r = residual(&y);
    let mut res = norm(&r);
    let max_iter = 50;
    for it in 0..max_iter {
        if res <= tol {
            return Ok(FdSolution { x, y, newton_iterations: it, residual: res });
        }
        let m = n - 1;
        let lower = vec![scale * (a - c); m];
        let upper = vec![scale * (a + c); m];
        let diag: Vec<f64> = (1..n).map(|i| scale * (-2.0 * a + p.source(y[i]).1)).collect();
        let mut step: Vec<f64> = r.iter().map(|v| -v).collect();
        thomas(&lower, &diag, &upper, &mut step);

        let mut lambda = 1.0;
        loop {
            let mut trial = y.clone();
            for (i, s) in step.iter().enumerate() {
                trial[i + 1] += lambda * s;
            }
            let tr = residual(&trial);
            let tres = norm(&tr);
            if tres < res || lambda < 1e-6 || tres <= tol {
                y = trial;
                r = tr;
                res = tres;
                break;
            }
            lambda *= 0.5;
        }
    }
    if res <= tol {
        return Ok(FdSolution { x, y, newton_iterations: max_iter, residual: res });
    }
    Err(Error::NewtonDivergence { iterations: max_iter, residual: res })
}

/// First x at which y falls to half of y(0), linearly interpolated.
pub fn layer_half_width(x: &[f64], y: &[f64]) -> Option<f64> {
    let half = 0.5 * y[0];
    (1..y.len()).find(|&i| (y[i] - half) * y[0].signum() <= 0.0).map(|i| {
        let w = (y[i - 1] - half) / (y[i - 1] - y[i]);
        x[i - 1] + w * (x[i] - x[i - 1])
    })
}

/// Least-squares slope of log(err) against log(eps).
pub fn observed_order(eps: &[f64], err: &[f64]) -> f64 {
    let lx: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ly: Vec<f64> = err.iter().map(|e| e.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Shooting solution of the nonlinear problem in the inner variable ξ = x/ε.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonlinearBlayer {
    pub eps: f64,
    pub b0: f64,
    pub newton_iterations: usize,
    /// |u(1/ε) − 1/2| at the accepted B₀.
    pub shoot_residual: f64,
    xi: Vec<f64>,
    amps: Vec<[f64; 2]>,
    slopes: Vec<[f64; 2]>,
}

const SHOOT_SAMPLES: usize = 4097;

fn amp_rhs(eps: f64) -> impl Fn(f64, &[f64], &mut [f64]) {
    move |t, y, d| (QUADRATIC_DAMPED.amplitude_rhs)(t, y, eps, AmplitudeOrder::Second, d)
}

fn inner_u(eps: f64, xi: f64, a: f64, b: f64) -> f64 {
    a + b * (-xi).exp() - 0.5 * eps * b * b * (-2.0 * xi).exp()
}

fn shoot(eps: f64, b0: f64, grid: &[f64]) -> Result<ode::Trajectory> {
    let a0 = -b0 + 0.5 * eps * b0 * b0;
    let opts = OdeOptions::new(1e-10, 1e-12);
    let end = *grid.last().expect("grid");
    ode::solve(amp_rhs(eps), 0.0, &[a0, b0], end, Output::At(grid), &opts)
}

fn mismatch(eps: f64, b0: f64) -> Result<f64> {
    let end = 1.0 / eps;
    let tr = shoot(eps, b0, &[0.0, end])?;
    let s = tr.last();
    Ok(inner_u(eps, end, s[0], s[1]) - 0.5)
}

/// Finds B₀ by Newton with a centered-difference derivative, seeded at −1.
pub fn nonlinear_blayer_multiscale(eps: f64, shoot_tol: f64) -> Result<NonlinearBlayer> {
    if !(eps > 0.0 && eps <= 0.2) {
        return Err(Error::InvalidArgument(format!("shooting needs 0 < eps <= 0.2, got {eps}")));
    }
    let mut b0 = -1.0;
    let mut f = mismatch(eps, b0)?;
    let mut iterations = 0;
    while f.abs() > shoot_tol {
        if iterations == 50 {
            return Err(Error::NewtonDivergence { iterations, residual: f.abs() });
        }
        let h = 1e-6 * b0.abs().max(1.0);
        let df = (mismatch(eps, b0 + h)? - mismatch(eps, b0 - h)?) / (2.0 * h);
        if df == 0.0 || !df.is_finite() {
            return Err(Error::NewtonDivergence { iterations, residual: f.abs() });
        }
        b0 -= f / df;
        f = mismatch(eps, b0)?;
        iterations += 1;
    }

    let grid = ode::uniform_grid(0.0, 1.0 / eps, SHOOT_SAMPLES);
    let tr = shoot(eps, b0, &grid)?;
    let rhs = amp_rhs(eps);
    let mut slopes = Vec::with_capacity(grid.len());
    for (t, y) in tr.t.iter().zip(&tr.y) {
        let mut d = [0.0; 2];
        rhs(*t, y, &mut d);
        slopes.push(d);
    }
    Ok(NonlinearBlayer {
        eps,
        b0,
        newton_iterations: iterations,
        shoot_residual: f.abs(),
        xi: tr.t,
        amps: tr.y.iter().map(|y| [y[0], y[1]]).collect(),
        slopes,
    })
}

impl NonlinearBlayer {
    /// Amplitudes (A, B) at inner time ξ by cubic Hermite interpolation.
    pub fn amplitudes(&self, xi: f64) -> [f64; 2] {
        let n = self.xi.len() - 1;
        let span = self.xi[n];
        let pos = (xi.clamp(0.0, span) / span * n as f64).min(n as f64 - 1.0);
        let i = pos.floor() as usize;
        let h = self.xi[i + 1] - self.xi[i];
        let s = (xi.clamp(0.0, span) - self.xi[i]) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s),
            s * (1.0 - s) * (1.0 - s),
            s * s * (3.0 - 2.0 * s),
            s * s * (s - 1.0),
        );
        let mut out = [0.0; 2];
        for (k, o) in out.iter_mut().enumerate() {
            *o = h00 * self.amps[i][k]
                + h10 * h * self.slopes[i][k]
                + h01 * self.amps[i + 1][k]
                + h11 * h * self.slopes[i + 1][k];
        }
        out
    }

    /// u at inner time ξ.
    pub fn eval_inner(&self, xi: f64) -> f64 {
        let [a, b] = self.amplitudes(xi);
        inner_u(self.eps, xi, a, b)
    }

    /// y at outer coordinate x ∈ [0, 1].
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_inner(x / self.eps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiscale_boundary_values() {
        for eps in [0.2, 0.1, 0.01, 0.002] {
            assert!((linear_blayer_multiscale(0.0, eps).unwrap() - 1.0).abs() < 1e-12);
            assert!(linear_blayer_multiscale(1.0, eps).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn multiscale_finite_near_floor() {
        for i in 0..=100 {
            let y = linear_blayer_multiscale(i as f64 / 100.0, EPS_FLOOR).unwrap();
            assert!(y.is_finite());
        }
        assert!(matches!(
            linear_blayer_multiscale(0.5, 5e-4),
            Err(Error::EpsilonTooSmall { .. })
        ));
    }

    #[test]
    fn exact_satisfies_ode() {
        let eps = 0.07;
        let h = 1e-4;
        for i in 1..20 {
            let x = i as f64 / 20.0;
            let f = |x| linear_blayer_exact(x, eps, 1.0, 0.0);
            let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
            let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
            assert!((eps * d2 + d1 - f(x)).abs() < 1e-5, "x={x}");
        }
        assert!((linear_blayer_exact(0.0, eps, 1.0, 0.0) - 1.0).abs() < 1e-14);
        assert!(linear_blayer_exact(1.0, eps, 1.0, 0.0).abs() < 1e-14);
    }

    #[test]
    fn multiscale_error_against_exact() {
        let gap = |eps: f64| {
            (0..=2000)
                .map(|i| {
                    let x = i as f64 / 2000.0;
                    (linear_blayer_multiscale(x, eps).unwrap() - linear_blayer_exact(x, eps, 1.0, 0.0)).abs()
                })
                .fold(0.0, f64::max)
        };
        let e = [gap(0.2), gap(0.1), gap(0.05)];
        assert!(e[0] > e[1] && e[1] > e[2]);
        assert!(observed_order(&[0.2, 0.1, 0.05], &e) >= 2.0);
    }

    #[test]
    fn fd_boundary_rows_exact() {
        let s = solve_bvp_fd(&BvpProblem::linear(0.1).unwrap(), 128).unwrap();
        assert_eq!(s.y[0], 1.0);
        assert_eq!(*s.y.last().unwrap(), 0.0);
        let s = solve_bvp_fd(&BvpProblem::nonlinear(0.1).unwrap(), 128).unwrap();
        assert_eq!(s.y[0], 0.0);
        assert_eq!(*s.y.last().unwrap(), 0.5);
    }

    #[test]
    fn fd_linear_self_convergence_is_second_order() {
        let p = BvpProblem::linear(0.1).unwrap();
        let at = |n| solve_bvp_fd(&p, n).unwrap().eval(0.25);
        let (a, b, c) = (at(256), at(512), at(1024));
        let order = ((a - b) / (b - c)).abs().log2();
        assert!((order - 2.0).abs() < 0.2, "order {order}");
    }

    #[test]
    fn fd_linear_refinement() {
        let p = BvpProblem::linear(0.5).unwrap();
        let a = solve_bvp_fd(&p, 2048).unwrap();
        let b = solve_bvp_fd(&p, 4096).unwrap();
        for i in 0..=2048 {
            assert!((a.y[i] - b.y[2 * i]).abs() < 1e-6);
        }
    }

    #[test]
    fn fd_linear_against_exact() {
        let p = BvpProblem::linear(0.05).unwrap();
        let s = solve_bvp_fd(&p, 4096).unwrap();
        for (x, y) in s.x.iter().zip(&s.y) {
            assert!((y - linear_blayer_exact(*x, 0.05, 1.0, 0.0)).abs() < 1e-5);
        }
    }

    #[test]
    fn fd_rejects_small_grid() {
        assert!(solve_bvp_fd(&BvpProblem::linear(0.1).unwrap(), 32).is_err());
        assert!(BvpProblem::linear(1.5).is_err());
    }

    #[test]
    fn layer_width_scales_with_eps() {
        for eps in [0.1, 0.05, 0.01] {
            let s = solve_bvp_fd(&BvpProblem::linear(eps).unwrap(), 4096).unwrap();
            let w = layer_half_width(&s.x, &s.y).unwrap();
            assert!(w <= 5.0 * eps && w > 0.1 * eps, "eps={eps} w={w}");
        }
    }

    #[test]
    fn shooting_hits_both_boundaries() {
        for eps in [0.1, 0.01] {
            let s = nonlinear_blayer_multiscale(eps, 1e-10).unwrap();
            assert!(s.eval(0.0).abs() < 1e-12);
            assert!((s.eval(1.0) - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn shooting_tracks_fd_reference() {
        let gap = |eps: f64| {
            let s = nonlinear_blayer_multiscale(eps, 1e-10).unwrap();
            let fd = solve_bvp_fd(&BvpProblem::nonlinear(eps).unwrap(), 8192).unwrap();
            fd.x.iter().zip(&fd.y).map(|(x, y)| (s.eval(*x) - y).abs()).fold(0.0, f64::max)
        };
        let (g1, g2) = (gap(0.1), gap(0.01));
        assert!(g2 < g1, "{g1} {g2}");
        assert!(g1 < 0.1, "{g1} {g2}");
    }

    #[test]
    fn observed_order_of_power_law() {
        let e = [0.4, 0.2, 0.1];
        let err: Vec<f64> = e.iter().map(|x: &f64| 3.0 * x.powi(3)).collect();
        assert!((observed_order(&e, &err) - 3.0).abs() < 1e-12);
    }
}
