use asymptotica::series::{euler_error_bound, euler_f, euler_partial_sum, euler_remainder};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{positive, OneOrMany, Params};
use crate::error::CliError;
use crate::output::{fmt_f64, indexed, Artifacts, Table};

fn default_max_m() -> u32 {
    12
}

fn default_quad_tol() -> f64 {
    1e-13
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EulerParams {
    pub eps: OneOrMany,
    #[serde(default = "default_max_m")]
    pub max_m: u32,
    /// Relative tolerance of the quadratures.
    #[serde(default = "default_quad_tol")]
    pub quad_tol: f64,
}

impl Params for EulerParams {
    fn validate(&self) -> Result<(), String> {
        let eps = self.eps.values();
        if eps.is_empty() {
            return Err("`eps` is empty".into());
        }
        for e in eps {
            positive("eps", e)?;
        }
        if self.max_m > 60 {
            return Err(format!("max_m = {} is beyond the supported 60", self.max_m));
        }
        positive("quad_tol", self.quad_tol)
    }
}

pub fn run(p: &EulerParams, _seed: u64) -> Result<Artifacts, CliError> {
    let eps_list = p.eps.values();
    let mut art = Artifacts::default();
    let mut table = Table::new("", &["eps", "m", "f", "partial_sum", "remainder", "difference", "bound"]);
    let mut violations = 0usize;
    let mut worst: f64 = 0.0;
    let mut values = Vec::new();
    for (i, &eps) in eps_list.iter().enumerate() {
        let f = euler_f(eps, p.quad_tol)?;
        values.push(f);
        let mut best = (0u32, f64::INFINITY);
        for m in 0..=p.max_m {
            let s = euler_partial_sum(eps, m);
            let r = euler_remainder(eps, m, p.quad_tol)?;
            let bound = euler_error_bound(eps, m);
            if r.abs() > bound {
                violations += 1;
            }
            worst = worst.max(r.abs() / bound);
            if r.abs() < best.1 {
                best = (m, r.abs());
            }
            let mut row: Vec<String> = [eps, f, s, r, f - s, bound].iter().map(|v| fmt_f64(*v)).collect();
            row.insert(1, m.to_string());
            table.rows.push(row);
        }
        art.metric(indexed("f", i, eps_list.len()), f);
        art.metric(indexed("optimal_m", i, eps_list.len()), f64::from(best.0));
        art.metric(indexed("min_error", i, eps_list.len()), best.1);
    }
    art.metric("bound_violations", violations as f64);
    art.metric("max_bound_ratio", worst);
    art.details = json!({ "eps": eps_list, "f": values });
    art.tables.push(table);
    Ok(art)
}
