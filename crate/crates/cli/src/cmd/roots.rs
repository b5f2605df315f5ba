use std::fmt::Display;

use asymptotica::blayer::observed_order;
use asymptotica::series::{expand_root, rescale_singular, Coeff, PolyFamily, Radical};
use asymptotica::Rational;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{positive, Params};
use crate::error::CliError;
use crate::output::Artifacts;

/// An exact rational written as an integer or as a `"p/q"` string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exact {
    Int(i64),
    Text(String),
}

impl Exact {
    pub fn to_rational(&self) -> Result<Rational, String> {
        match self {
            Self::Int(i) => Ok(Rational::from_integer((*i).into())),
            Self::Text(s) => s.trim().parse().map_err(|_| format!("`{s}` is not a rational number")),
        }
    }
}

/// Unperturbed root: a rational, a real radical c^{1/n}, or a complex float.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootValue {
    Rational(Exact),
    Radical { radical: Exact, index: usize },
    Complex { re: f64, im: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootsParams {
    /// `coefficients[j][i]` multiplies ε^i x^j.
    pub coefficients: Vec<Vec<Exact>>,
    pub a0: RootValue,
    pub order: usize,
    /// Substitute x = ε^{−p} y first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rescale: Option<Exact>,
    /// ε values at which to measure |p(x(ε), ε)|.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual_eps: Option<Vec<f64>>,
}

impl Params for RootsParams {
    fn validate(&self) -> Result<(), String> {
        if self.coefficients.is_empty() {
            return Err("`coefficients` is empty".into());
        }
        let rows = self
            .coefficients
            .iter()
            .map(|row| row.iter().map(Exact::to_rational).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        if rows.last().is_none_or(|top| top.iter().all(Zero::is_zero)) {
            return Err("the highest power of x has a zero coefficient".into());
        }
        match &self.a0 {
            RootValue::Rational(e) => {
                e.to_rational()?;
            }
            RootValue::Radical { radical, index } => {
                let r = radical.to_rational()?;
                if *index == 0 || r <= Rational::zero() {
                    return Err("a radical root needs a positive radicand and index".into());
                }
            }
            RootValue::Complex { re, im } => {
                if !re.is_finite() || !im.is_finite() {
                    return Err("complex root must be finite".into());
                }
            }
        }
        if let Some(p) = &self.rescale {
            let p = p.to_rational()?;
            if p.numer().to_i64().is_none() || p.denom().to_i64().is_none() {
                return Err("rescale exponent is too large".into());
            }
        }
        for &e in self.residual_eps.iter().flatten() {
            positive("residual_eps entry", e)?;
        }
        Ok(())
    }
}

struct Expansion {
    exact: Vec<String>,
    values: Vec<Complex64>,
    ramification: usize,
    residuals: Vec<f64>,
}

fn expand<C: Coeff + Display>(
    p: &RootsParams,
    lift: impl Fn(&Rational) -> C,
    a0: C,
    to_complex: impl Fn(&C) -> Complex64,
) -> Result<Expansion, CliError> {
    let nested = p
        .coefficients
        .iter()
        .map(|row| row.iter().map(|e| e.to_rational().map(|r| lift(&r))).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(asymptotica::Error::InvalidArgument)?;
    let mut family = PolyFamily::from_nested(nested)?;
    let mut ramification = 1;
    if let Some(e) = &p.rescale {
        let r = rescale_singular(&family, &e.to_rational().map_err(asymptotica::Error::InvalidArgument)?)?;
        family = r.family;
        ramification = r.ramification;
    }
    let x = expand_root(&family, a0, p.order)?;

    let values: Vec<Complex64> = x.coeffs().iter().map(&to_complex).collect();
    let float_family: Vec<Vec<Complex64>> = family
        .coeffs()
        .iter()
        .map(|s| s.coeffs().iter().map(&to_complex).collect())
        .collect();
    let float_family = PolyFamily::from_nested(float_family)?;
    let residuals = p
        .residual_eps
        .iter()
        .flatten()
        .map(|&eps| {
            let delta = Complex64::new(eps.powf(1.0 / ramification as f64), 0.0);
            let xv = values.iter().rev().fold(Complex64::zero(), |acc, a| acc * delta + a);
            float_family.eval_at(&xv, &delta).norm()
        })
        .collect();
    Ok(Expansion { exact: x.coeffs().iter().map(ToString::to_string).collect(), values, ramification, residuals })
}

fn rat_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn run(p: &RootsParams, _seed: u64) -> Result<Artifacts, CliError> {
    let bad = |e: String| CliError::Solver(asymptotica::Error::InvalidArgument(e));
    let (field, ex) = match &p.a0 {
        RootValue::Rational(e) => {
            let a0 = e.to_rational().map_err(bad)?;
            ("rational", expand(p, Rational::clone, a0, |c| Complex64::new(rat_f64(c), 0.0))?)
        }
        RootValue::Radical { radical, index } => {
            let c = radical.to_rational().map_err(bad)?;
            let a0 = Radical::root(c, *index);
            ("radical", expand(p, |r| Radical::rational(r.clone()), a0, |c| Complex64::new(c.to_f64(), 0.0))?)
        }
        RootValue::Complex { re, im } => {
            let a0 = Complex64::new(*re, *im);
            ("complex", expand(p, |r| Complex64::new(rat_f64(r), 0.0), a0, |c| *c)?)
        }
    };

    let mut art = Artifacts::default();
    for (i, v) in ex.values.iter().enumerate() {
        art.metric(format!("coeff[{i}]"), v.re);
        if field == "complex" {
            art.metric(format!("coeff_im[{i}]"), v.im);
        }
    }
    art.metric("ramification", ex.ramification as f64);
    let eps = p.residual_eps.clone().unwrap_or_default();
    for (i, r) in ex.residuals.iter().enumerate() {
        art.metric(format!("residual[{i}]"), *r);
    }
    if eps.len() >= 2 {
        art.metric("residual_slope", observed_order(&eps, &ex.residuals));
    }
    art.details = json!({
        "field": field,
        "variable": if ex.ramification == 1 { "eps".to_string() } else { format!("eps^(1/{})", ex.ramification) },
        "coefficients": ex.exact,
        "values": ex.values.iter().map(|v| [v.re, v.im]).collect::<Vec<_>>(),
        "residual_eps": eps,
        "residuals": ex.residuals,
    });
    Ok(art)
}
