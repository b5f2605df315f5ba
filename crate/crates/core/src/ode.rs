//! Dormand–Prince 5(4) with step-size control and 4th-order dense output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// First trial step; chosen automatically when `None`.
    pub h_init: Option<f64>,
    /// Upper bound on the step; unbounded when `None`.
    pub h_max: Option<f64>,
}

impl OdeOptions {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 5_000_000,
            h_init: None,
            h_max: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

/// Sampled solution of an ODE.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub y: Vec<Vec<f64>>,
    pub stats: SolverStats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// The final state.
    pub fn last(&self) -> &[f64] {
        self.y.last().map_or(&[], Vec::as_slice)
    }

    /// Component `i` across all samples.
    pub fn component(&self, i: usize) -> Vec<f64> {
        self.y.iter().map(|s| s[i]).collect()
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

struct Stepper<F> {
    f: F,
    n: usize,
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    evals: usize,
}

impl<F: FnMut(f64, &[f64], &mut [f64])> Stepper<F> {
    fn eval(&mut self, t: f64, y: &[f64], slot: usize) {
        (self.f)(t, y, &mut self.k[slot]);
        self.evals += 1;
    }

    fn stage(&mut self, y: &[f64], h: f64, coeffs: &[(usize, f64)]) {
        for i in 0..self.n {
            let mut s = 0.0;
            for &(j, a) in coeffs {
                s += a * self.k[j][i];
            }
            self.tmp[i] = y[i] + h * s;
        }
    }

    /// One trial step; k[0] must hold f(t, y). Writes y_new and returns the
    /// scaled error norm. On return k[6] holds f(t + h, y_new).
    fn try_step(&mut self, t: f64, y: &[f64], h: f64, y_new: &mut [f64], opts: &OdeOptions) -> f64 {
        self.stage(y, h, &[(0, A21)]);
        let tmp = std::mem::take(&mut self.tmp);
        self.eval(t + C2 * h, &tmp, 1);
        self.tmp = tmp;
        self.stage(y, h, &[(0, A31), (1, A32)]);
        let tmp = std::mem::take(&mut self.tmp);
        self.eval(t + C3 * h, &tmp, 2);
        self.tmp = tmp;
        self.stage(y, h, &[(0, A41), (1, A42), (2, A43)]);
        let tmp = std::mem::take(&mut self.tmp);
        self.eval(t + C4 * h, &tmp, 3);
        self.tmp = tmp;
        self.stage(y, h, &[(0, A51), (1, A52), (2, A53), (3, A54)]);
        let tmp = std::mem::take(&mut self.tmp);
        self.eval(t + C5 * h, &tmp, 4);
        self.tmp = tmp;
        self.stage(y, h, &[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)]);
        let tmp = std::mem::take(&mut self.tmp);
        self.eval(t + h, &tmp, 5);
        self.tmp = tmp;
        self.stage(y, h, &[(0, A71), (2, A73), (3, A74), (4, A75), (5, A76)]);
        y_new.copy_from_slice(&self.tmp);
        self.eval(t + h, y_new, 6);
        let mut acc = 0.0;
        for i in 0..self.n {
            let e = h
                * (E1 * self.k[0][i]
                    + E3 * self.k[2][i]
                    + E4 * self.k[3][i]
                    + E5 * self.k[4][i]
                    + E6 * self.k[5][i]
                    + E7 * self.k[6][i]);
            let sc = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            acc += (e / sc).powi(2);
        }
        (acc / self.n.max(1) as f64).sqrt()
    }

    /// Coefficients of the dense-output polynomial for the last accepted step.
    fn dense(&self, y: &[f64], y_new: &[f64], h: f64) -> [Vec<f64>; 5] {
        let n = self.n;
        let mut r = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for i in 0..n {
            let dy = y_new[i] - y[i];
            let bspl = h * self.k[0][i] - dy;
            r[0][i] = y[i];
            r[1][i] = dy;
            r[2][i] = bspl;
            r[3][i] = dy - h * self.k[6][i] - bspl;
            r[4][i] = h
                * (D1 * self.k[0][i]
                    + D3 * self.k[2][i]
                    + D4 * self.k[3][i]
                    + D5 * self.k[4][i]
                    + D6 * self.k[5][i]
                    + D7 * self.k[6][i]);
        }
        r
    }
}

fn interpolate(r: &[Vec<f64>; 5], theta: f64) -> Vec<f64> {
    let t1 = 1.0 - theta;
    (0..r[0].len())
        .map(|i| r[0][i] + theta * (r[1][i] + t1 * (r[2][i] + theta * (r[3][i] + t1 * r[4][i]))))
        .collect()
}

fn wrms(v: &[f64], y: &[f64], opts: &OdeOptions) -> f64 {
    let s: f64 = v
        .iter()
        .zip(y)
        .map(|(a, b)| (a / (opts.atol + opts.rtol * b.abs())).powi(2))
        .sum();
    (s / v.len().max(1) as f64).sqrt()
}

/// Output selection for [`solve`].
#[derive(Clone, Copy, Debug)]
pub enum Output<'a> {
    /// Every accepted step (plus the initial point).
    Steps,
    /// Dense output at these increasing times inside the integration span.
    At(&'a [f64]),
}

/// Integrates y' = f(t, y) from `t0` to `t_end`.
pub fn solve<F>(
    f: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    output: Output<'_>,
    opts: &OdeOptions,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(Error::InvalidArgument("rtol and atol must be positive".into()));
    }
    if !(t_end >= t0) || !t0.is_finite() || !t_end.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "integration span [{t0}, {t_end}] is not increasing and finite"
        )));
    }
    let n = y0.len();
    let span = t_end - t0;
    let mut st = Stepper {
        f,
        n,
        k: std::array::from_fn(|_| vec![0.0; n]),
        tmp: vec![0.0; n],
        evals: 0,
    };
    let mut out_t = Vec::new();
    let mut out_y = Vec::new();
    let mut pending: &[f64] = match output {
        Output::At(ts) => {
            if ts.windows(2).any(|w| w[1] < w[0]) {
                return Err(Error::InvalidArgument("output times must be nondecreasing".into()));
            }
            if ts.iter().any(|&s| s < t0 || s > t_end) {
                return Err(Error::InvalidArgument("output time outside integration span".into()));
            }
            ts
        }
        Output::Steps => {
            out_t.push(t0);
            out_y.push(y0.to_vec());
            &[]
        }
    };
    let dense_mode = matches!(output, Output::At(_));
    while let Some((&s, rest)) = pending.split_first() {
        if s > t0 {
            break;
        }
        out_t.push(s);
        out_y.push(y0.to_vec());
        pending = rest;
    }
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut y_new = vec![0.0; n];
    let mut stats = SolverStats::default();
    if span == 0.0 {
        stats.rhs_evals = st.evals;
        return Ok(Trajectory {
            t: out_t,
            y: out_y,
            stats,
        });
    }
    st.eval(t, &y, 0);
    let h_max = opts.h_max.unwrap_or(span).min(span);
    let mut h = match opts.h_init {
        Some(h) => h,
        None => {
            let d0 = wrms(&y, &y, opts);
            let d1 = wrms(&st.k[0], &y, opts);
            let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
            let h0 = h0.min(span);
            let y1: Vec<f64> = (0..n).map(|i| y[i] + h0 * st.k[0][i]).collect();
            let mut f1 = vec![0.0; n];
            (st.f)(t + h0, &y1, &mut f1);
            st.evals += 1;
            let diff: Vec<f64> = (0..n).map(|i| f1[i] - st.k[0][i]).collect();
            let d2 = wrms(&diff, &y, opts) / h0;
            let m = d1.max(d2);
            let h1 = if m <= 1e-15 {
                (h0 * 1e-3).max(1e-6)
            } else {
                (0.01 / m).powf(0.2)
            };
            (100.0 * h0).min(h1)
        }
    }
    .min(h_max);
    let h_min = 1e-14 * span;
    let mut reject_streak = false;
    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::TooManySteps {
                t,
                max_steps: opts.max_steps,
            });
        }
        let last = t + h >= t_end - 1e-12 * span;
        if last {
            h = t_end - t;
        }
        if h < h_min && !last {
            return Err(Error::StepSizeUnderflow {
                t,
                h,
                span,
                steps: stats.accepted,
            });
        }
        let err = st.try_step(t, &y, h, &mut y_new, opts);
        if !err.is_finite() {
            stats.rejected += 1;
            h *= 0.2;
            reject_streak = true;
            continue;
        }
        if err <= 1.0 {
            let t_new = if last { t_end } else { t + h };
            if dense_mode {
                let mut r = None;
                while let Some((&s, rest)) = pending.split_first() {
                    if s > t_new {
                        break;
                    }
                    let r = r.get_or_insert_with(|| st.dense(&y, &y_new, h));
                    let theta = ((s - t) / h).clamp(0.0, 1.0);
                    out_t.push(s);
                    out_y.push(if s == t_new { y_new.clone() } else { interpolate(r, theta) });
                    pending = rest;
                }
            }
            stats.accepted += 1;
            t = t_new;
            std::mem::swap(&mut y, &mut y_new);
            st.k.swap(0, 6);
            if !dense_mode {
                out_t.push(t);
                out_y.push(y.clone());
            }
            if last {
                break;
            }
            let mut fac = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 5.0);
            if reject_streak {
                fac = fac.min(1.0);
            }
            reject_streak = false;
            h = (h * fac).min(h_max);
        } else {
            stats.rejected += 1;
            reject_streak = true;
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
    }
    stats.rhs_evals = st.evals;
    Ok(Trajectory {
        t: out_t,
        y: out_y,
        stats,
    })
}

/// Error-controlled reference integration returning every accepted step.
pub fn integrate_reference<F>(
    rhs: F,
    y0: &[f64],
    t_span: (f64, f64),
    rtol: f64,
    atol: f64,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    solve(rhs, t_span.0, y0, t_span.1, Output::Steps, &OdeOptions::new(rtol, atol))
}

/// As [`integrate_reference`] but sampled by dense output on `grid`.
pub fn integrate_on_grid<F>(rhs: F, y0: &[f64], grid: &[f64], rtol: f64, atol: f64) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    let (t0, t1) = match (grid.first(), grid.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::InvalidArgument("empty output grid".into())),
    };
    solve(rhs, t0, y0, t1, Output::At(grid), &OdeOptions::new(rtol, atol))
}

/// `n` uniformly spaced points covering [a, b] inclusive.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_decay() {
        let tr = integrate_reference(|_, y, d| d[0] = -y[0], &[1.0], (0.0, 1.0), 1e-10, 1e-14).unwrap();
        assert_eq!(*tr.t.last().unwrap(), 1.0);
        assert!((tr.last()[0] - (-1f64).exp()).abs() < 10.0 * 1e-10);
    }

    #[test]
    fn dense_output_matches_harmonic_solution() {
        let grid = uniform_grid(0.0, 20.0, 401);
        let tr = integrate_on_grid(
            |_, y, d| {
                d[0] = y[1];
                d[1] = -y[0];
            },
            &[1.0, 0.0],
            &grid,
            1e-11,
            1e-13,
        )
        .unwrap();
        assert_eq!(tr.t.len(), grid.len());
        for (t, y) in tr.t.iter().zip(&tr.y) {
            assert!((y[0] - t.cos()).abs() < 1e-8, "t={t}");
            assert!((y[1] + t.sin()).abs() < 1e-8, "t={t}");
        }
    }

    #[test]
    fn deterministic() {
        let run = || {
            integrate_reference(|t, y, d| d[0] = t.sin() * y[0], &[1.0], (0.0, 10.0), 1e-9, 1e-12)
                .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn blowup_underflows() {
        let err = integrate_reference(|_, y, d| d[0] = y[0] * y[0], &[1.0], (0.0, 2.0), 1e-8, 1e-10)
            .unwrap_err();
        assert!(matches!(
            err,
            Error::StepSizeUnderflow { .. } | Error::TooManySteps { .. }
        ));
    }

    #[test]
    fn step_budget() {
        let opts = OdeOptions {
            max_steps: 5,
            ..OdeOptions::new(1e-12, 1e-12)
        };
        let err = solve(
            |_, y, d| {
                d[0] = y[1];
                d[1] = -y[0];
            },
            0.0,
            &[1.0, 0.0],
            100.0,
            Output::Steps,
            &opts,
        )
        .unwrap_err();
        assert!(matches!(err, Error::TooManySteps { .. }));
    }

    #[test]
    fn invalid_arguments() {
        let f = |_: f64, _: &[f64], d: &mut [f64]| d[0] = 0.0;
        assert!(integrate_reference(f, &[1.0], (0.0, 1.0), 0.0, 1e-9).is_err());
        assert!(integrate_reference(f, &[1.0], (1.0, 0.0), 1e-9, 1e-9).is_err());
        assert!(integrate_on_grid(f, &[1.0], &[], 1e-9, 1e-9).is_err());
    }
}
