use asymptotica::blayer::observed_order;
use asymptotica::msode::{catalog, compare_until, AmplitudeMethod, AmplitudeOrder, CompareOptions, Reference};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::sweep;
use crate::config::{positive, OneOrMany, Params};
use crate::error::CliError;
use crate::output::{fmt_f64, indexed, Artifacts, Table};

fn default_samples() -> usize {
    2048
}

fn default_rtol() -> f64 {
    1e-10
}

fn default_atol() -> f64 {
    1e-12
}

fn default_newton_tol() -> f64 {
    1e-13
}

fn default_method() -> AmplitudeMethod {
    AmplitudeMethod::Integrate
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeParams {
    pub case: String,
    pub eps: OneOrMany,
    /// End time of the comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    /// End time as ε^{−horizon_exponent}, per sweep point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon_exponent: Option<f64>,
    #[serde(default)]
    pub order: AmplitudeOrder,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_rtol")]
    pub rtol: f64,
    #[serde(default = "default_atol")]
    pub atol: f64,
    #[serde(default = "default_newton_tol")]
    pub newton_tol: f64,
    #[serde(default)]
    pub reference: Reference,
    #[serde(default = "default_method")]
    pub amplitude_method: AmplitudeMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ics: Option<Vec<f64>>,
}

impl OdeParams {
    fn horizon_for(&self, eps: f64) -> f64 {
        match (self.horizon, self.horizon_exponent) {
            (Some(t), _) => t,
            (None, Some(p)) => eps.powf(-p),
            (None, None) => f64::NAN,
        }
    }

    fn options(&self) -> CompareOptions {
        CompareOptions {
            rtol: self.rtol,
            atol: self.atol,
            order: self.order,
            samples: self.samples,
            ics: self.ics.clone(),
            reference: self.reference,
            amplitude_method: self.amplitude_method,
            newton_tol: self.newton_tol,
        }
    }
}

impl Params for OdeParams {
    fn validate(&self) -> Result<(), String> {
        let case = catalog(&self.case).map_err(|e| e.to_string())?;
        if self.horizon.is_some() == self.horizon_exponent.is_some() {
            return Err("exactly one of `horizon` and `horizon_exponent` must be given".into());
        }
        positive("rtol", self.rtol)?;
        positive("atol", self.atol)?;
        positive("newton_tol", self.newton_tol)?;
        if self.samples < 2 {
            return Err("`samples` must be at least 2".into());
        }
        if let Some(ics) = &self.ics {
            if ics.len() != case.state_len() {
                return Err(format!("`ics` needs {} values for case `{}`", case.state_len(), case.name));
            }
        }
        let eps = self.eps.values();
        if eps.is_empty() {
            return Err("`eps` is empty".into());
        }
        let limit = f64::from(case.validity_exponent) + 1.0;
        for e in eps {
            if !(0.0..1.0).contains(&e) {
                return Err(format!("eps must lie in [0, 1), got {e}"));
            }
            let t_end = self.horizon_for(e);
            positive("horizon", t_end)?;
            if e > 0.0 && -t_end.ln() / e.ln() > limit {
                return Err(format!(
                    "horizon {t_end} exceeds eps^-{limit} for case `{}` at eps = {e}",
                    case.name
                ));
            }
        }
        Ok(())
    }
}

pub fn run(p: &OdeParams, seed: u64) -> Result<Artifacts, CliError> {
    let case = catalog(&p.case)?;
    let eps = p.eps.values();
    let opts = p.options();
    let reports = sweep(&eps, seed, |&e| Ok(compare_until(case, e, p.horizon_for(e), &opts)?))?;

    let mut art = Artifacts::default();
    let n = eps.len();
    let mut details = Vec::new();
    for (i, r) in reports.iter().enumerate() {
        let last = r.t.len() - 1;
        art.metric(indexed("max_abs_error", i, n), r.max_abs_error);
        art.metric(indexed("l2_error", i, n), r.l2_error);
        art.metric(indexed("horizon", i, n), r.horizon);
        art.metric(indexed("direct_final", i, n), r.direct[last][0]);
        art.metric(indexed("multiscale_final", i, n), r.multiscale[last][0]);
        if r.eps > 0.0 {
            art.metric(indexed("max_error_until_inv_eps", i, n), r.max_error_until(1.0 / r.eps));
        }

        let suffix = if n == 1 { String::new() } else { format!(".eps{i}") };
        let mut table = if case.dim == 1 {
            Table::new(suffix, &["t", "y_direct", "y_multiscale", "abs_error"])
        } else {
            Table::new(suffix, &["component", "t", "y_direct", "y_multiscale", "abs_error"])
        };
        for c in 0..case.dim {
            for ((t, d), m) in r.t.iter().zip(&r.direct).zip(&r.multiscale) {
                let row = [*t, d[c], m[c], (d[c] - m[c]).abs()];
                let mut cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
                if case.dim > 1 {
                    cells.insert(0, c.to_string());
                }
                table.rows.push(cells);
            }
        }
        art.tables.push(table);
        details.push(json!({
            "eps": r.eps,
            "horizon": r.horizon,
            "initial_amplitudes": r.initial_amplitudes,
            "reference_used": r.reference_used,
            "direct_stats": r.direct_stats,
            "amplitude_stats": r.amplitude_stats,
        }));
    }
    let positive_eps: Vec<(f64, f64)> =
        reports.iter().filter(|r| r.eps > 0.0).map(|r| (r.eps, r.max_abs_error)).collect();
    if positive_eps.len() >= 2 {
        let (e, err): (Vec<f64>, Vec<f64>) = positive_eps.into_iter().unzip();
        art.metric("observed_order", observed_order(&e, &err));
    }
    art.details = json!({ "case": case.name, "dim": case.dim, "runs": details });
    Ok(art)
}
