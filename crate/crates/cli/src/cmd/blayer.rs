use asymptotica::blayer::{
    layer_half_width, linear_blayer_exact, linear_blayer_multiscale, nonlinear_blayer_multiscale, observed_order,
    solve_bvp_fd, BvpKind, BvpProblem, EPS_FLOOR,
};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::sweep;
use crate::config::{positive, OneOrMany, Params};
use crate::error::CliError;
use crate::output::{indexed, Artifacts, Table};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlayerReference {
    /// Finite differences on `grid` intervals.
    #[default]
    Fd,
    /// Closed-form solution; linear problem only.
    Exact,
}

fn default_grid() -> usize {
    8192
}

fn default_shoot_tol() -> f64 {
    1e-10
}

fn default_stride() -> usize {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlayerParams {
    pub kind: BvpKind,
    pub eps: OneOrMany,
    /// Finite-difference intervals; also the sampling grid of the CSV.
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub reference: BlayerReference,
    #[serde(default = "default_shoot_tol")]
    pub shoot_tol: f64,
    /// Write every `stride`-th grid point.
    #[serde(default = "default_stride")]
    pub stride: usize,
}

impl Params for BlayerParams {
    fn validate(&self) -> Result<(), String> {
        let eps = self.eps.values();
        if eps.is_empty() {
            return Err("`eps` is empty".into());
        }
        let upper = match self.kind {
            BvpKind::Linear => 1.0,
            BvpKind::Nonlinear => 0.2,
        };
        for e in eps {
            if !(e >= EPS_FLOOR && e < upper) && !(self.kind == BvpKind::Nonlinear && e == upper) {
                return Err(format!("eps = {e} is outside [{EPS_FLOOR}, {upper}) for the {:?} problem", self.kind));
            }
        }
        if self.grid < 64 {
            return Err("`grid` must be at least 64".into());
        }
        if self.stride == 0 {
            return Err("`stride` must be positive".into());
        }
        if self.kind == BvpKind::Nonlinear && self.reference == BlayerReference::Exact {
            return Err("the nonlinear problem has no closed-form reference".into());
        }
        positive("shoot_tol", self.shoot_tol)
    }
}

struct Point {
    x: Vec<f64>,
    multiscale: Vec<f64>,
    reference: Vec<f64>,
    half_width: Option<f64>,
    extra: serde_json::Value,
}

fn solve_point(p: &BlayerParams, eps: f64) -> Result<Point, CliError> {
    let problem = match p.kind {
        BvpKind::Linear => BvpProblem::linear(eps)?,
        BvpKind::Nonlinear => BvpProblem::nonlinear(eps)?,
    };
    let fd = solve_bvp_fd(&problem, p.grid)?;
    let half_width = layer_half_width(&fd.x, &fd.y);
    let (multiscale, extra) = match p.kind {
        BvpKind::Linear => {
            let m = fd.x.iter().map(|&x| linear_blayer_multiscale(x, eps)).collect::<Result<Vec<_>, _>>()?;
            (m, json!({ "fd_newton_iterations": fd.newton_iterations, "fd_residual": fd.residual }))
        }
        BvpKind::Nonlinear => {
            let s = nonlinear_blayer_multiscale(eps, p.shoot_tol)?;
            let m = fd.x.iter().map(|&x| s.eval(x)).collect();
            let extra = json!({
                "b0": s.b0,
                "shoot_newton_iterations": s.newton_iterations,
                "shoot_residual": s.shoot_residual,
                "boundary_left": s.eval_inner(0.0),
                "boundary_right": s.eval_inner(1.0 / eps),
                "fd_newton_iterations": fd.newton_iterations,
                "fd_residual": fd.residual,
            });
            (m, extra)
        }
    };
    let reference = match p.reference {
        BlayerReference::Fd => fd.y,
        BlayerReference::Exact => fd.x.iter().map(|&x| linear_blayer_exact(x, eps, problem.left, problem.right)).collect(),
    };
    Ok(Point { x: fd.x, multiscale, reference, half_width, extra })
}

pub fn run(p: &BlayerParams, seed: u64) -> Result<Artifacts, CliError> {
    let eps = p.eps.values();
    let points = sweep(&eps, seed, |&e| solve_point(p, e))?;
    let n = eps.len();
    let mut art = Artifacts::default();
    let mut gaps = Vec::new();
    let mut details = Vec::new();
    for (i, (pt, &e)) in points.iter().zip(&eps).enumerate() {
        let gap = pt.multiscale.iter().zip(&pt.reference).map(|(m, r)| (m - r).abs()).fold(0.0, f64::max);
        gaps.push(gap);
        art.metric(indexed("max_gap", i, n), gap);
        if let Some(w) = pt.half_width {
            art.metric(indexed("half_width", i, n), w);
            art.metric(indexed("half_width_over_eps", i, n), w / e);
        }
        for key in ["b0", "shoot_residual", "boundary_left", "boundary_right"] {
            if let Some(v) = pt.extra.get(key).and_then(serde_json::Value::as_f64) {
                art.metric(indexed(key, i, n), v);
            }
        }
        let suffix = if n == 1 { String::new() } else { format!(".eps{i}") };
        let mut table = Table::new(suffix, &["x", "y_multiscale", "y_reference", "abs_error"]);
        let last = pt.x.len() - 1;
        for j in (0..pt.x.len()).filter(|j| j % p.stride == 0 || *j == last) {
            let (m, r) = (pt.multiscale[j], pt.reference[j]);
            table.push_floats(&[pt.x[j], m, r, (m - r).abs()]);
        }
        art.tables.push(table);
        let mut d = json!({ "eps": e, "max_gap": gap, "half_width": pt.half_width });
        if let (Some(obj), Some(extra)) = (d.as_object_mut(), pt.extra.as_object()) {
            obj.extend(extra.clone());
        }
        details.push(d);
    }
    if n >= 2 {
        art.metric("observed_order", observed_order(&eps, &gaps));
    }
    art.details = json!({ "kind": p.kind, "reference": p.reference, "runs": details });
    Ok(art)
}
