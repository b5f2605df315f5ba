use std::collections::BTreeMap;

use asymptotica::dimsys::{self, fixtures, parse_quantities, QuantitySet};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::Params;
use crate::error::CliError;
use crate::output::Artifacts;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiParams {
    /// Name of a built-in fixture such as `pendulum`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixture: Option<String>,
    /// Declaration text, `name: L^a T^b ...` per line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantities: Option<String>,
    /// Monomials to test for membership in the span of the groups. Defaults
    /// to the fixture's published monomials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<String>>,
}

impl PiParams {
    fn quantity_set(&self) -> Result<QuantitySet, String> {
        match (&self.fixture, &self.quantities) {
            (Some(name), None) => fixtures::by_name(name)
                .map(|f| f.quantities())
                .ok_or_else(|| format!("unknown fixture `{name}`")),
            (None, Some(text)) => parse_quantities(text).map_err(|e| e.to_string()),
            _ => Err("exactly one of `fixture` and `quantities` must be given".into()),
        }
    }

    fn members(&self) -> Vec<String> {
        match (&self.members, &self.fixture) {
            (Some(m), _) => m.clone(),
            (None, Some(name)) => fixtures::by_name(name)
                .map(|f| f.published.iter().map(|s| s.to_string()).collect())
                .unwrap_or_default(),
            (None, None) => Vec::new(),
        }
    }
}

impl Params for PiParams {
    fn validate(&self) -> Result<(), String> {
        let qs = self.quantity_set()?;
        for m in self.members() {
            fixtures::parse_monomial(&qs, &m).map_err(|e| format!("member `{m}`: {e}"))?;
        }
        Ok(())
    }
}

fn exact_map(map: BTreeMap<String, asymptotica::Rational>) -> BTreeMap<String, String> {
    map.into_iter().map(|(k, v)| (k, v.to_string())).collect()
}

pub fn run(p: &PiParams, _seed: u64) -> Result<Artifacts, CliError> {
    let qs = p.quantity_set().map_err(|e| asymptotica::Error::InvalidArgument(e))?;
    let groups = dimsys::pi_groups(&qs)?;
    let rank = dimsys::rank(&qs)?;
    let mut art = Artifacts::default();

    let mut proofs = Vec::new();
    let (mut in_span, mut dimensionless) = (0, 0);
    let members = p.members();
    for m in &members {
        let x = fixtures::parse_monomial(&qs, m)?;
        let is_dl = dimsys::is_dimensionless(&qs, &x)?;
        let coeffs = dimsys::span_membership(&groups, &x);
        dimensionless += usize::from(is_dl);
        in_span += usize::from(coeffs.is_some());
        proofs.push(json!({
            "monomial": m,
            "exponents": x.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "dimensionless": is_dl,
            "in_span": coeffs.is_some(),
            "coefficients": coeffs.map(|c| c.iter().map(ToString::to_string).collect::<Vec<_>>()),
        }));
    }

    art.metric("groups", groups.len() as f64);
    art.metric("rank", rank as f64);
    art.metric("quantities", qs.len() as f64);
    art.metric("members_total", members.len() as f64);
    art.metric("members_in_span", in_span as f64);
    art.metric("members_dimensionless", dimensionless as f64);
    art.details = json!({
        "quantities": qs.names(),
        "groups": groups.iter().map(|g| exact_map(g.to_map(&qs))).collect::<Vec<_>>(),
        "monomials": groups.iter().map(|g| g.display(&qs)).collect::<Vec<_>>(),
        "membership": proofs,
    });
    Ok(art)
}
