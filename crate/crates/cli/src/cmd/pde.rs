use std::f64::consts::PI;

use asymptotica::mspde::{find_phase_matched, packet_compare, Dispersion, PacketParams};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::config::{positive, Params};
use crate::error::CliError;
use crate::output::{indexed, Artifacts, Table};

fn default_dispersion() -> Dispersion {
    Dispersion::KleinGordon
}

fn default_k() -> f64 {
    1.0
}

fn default_length_2pi() -> f64 {
    128.0
}

fn default_n() -> usize {
    2048
}

fn default_amplitude() -> f64 {
    0.5
}

fn default_sigma() -> f64 {
    10.0
}

fn default_center() -> f64 {
    6.0
}

fn default_rtol() -> f64 {
    1e-10
}

fn default_nls_dt() -> f64 {
    0.05
}

fn default_order() -> u32 {
    1
}

fn default_true() -> bool {
    true
}

fn default_samples() -> usize {
    1000
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseMatchScan {
    /// n in ω(nk) = nω(k).
    pub harmonic: u32,
    pub range: [f64; 2],
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeParams {
    #[serde(default = "default_dispersion")]
    pub dispersion: Dispersion,
    pub eps: f64,
    #[serde(default = "default_k")]
    pub k: f64,
    /// Domain length in units of 2π.
    #[serde(default = "default_length_2pi")]
    pub length_2pi: f64,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
    #[serde(default = "default_sigma")]
    pub sigma_wavelengths: f64,
    #[serde(default = "default_center")]
    pub center_sigmas: f64,
    /// Defaults to 1/(2ε), 1/ε and 1/(2ε²).
    #[serde(default)]
    pub checkpoints: Option<Vec<f64>>,
    #[serde(default = "default_rtol")]
    pub rtol: f64,
    #[serde(default = "default_nls_dt")]
    pub nls_dt: f64,
    /// Reconstruction order, 0 or 1.
    #[serde(default = "default_order")]
    pub order: u32,
    /// Write one CSV per checkpoint.
    #[serde(default = "default_true")]
    pub snapshots: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_match: Option<PhaseMatchScan>,
}

impl PdeParams {
    fn packet(&self) -> Result<PacketParams, String> {
        let checkpoints = match &self.checkpoints {
            Some(c) => c.clone(),
            None if self.eps > 0.0 => {
                let e = self.eps;
                vec![0.5 / e, 1.0 / e, 0.5 / (e * e)]
            }
            None => return Err("`checkpoints` is required when eps = 0".into()),
        };
        Ok(PacketParams {
            dispersion: self.dispersion,
            eps: self.eps,
            k: self.k,
            length: 2.0 * PI * self.length_2pi,
            n: self.n,
            amplitude: self.amplitude,
            sigma_wavelengths: self.sigma_wavelengths,
            center_sigmas: self.center_sigmas,
            checkpoints,
            rtol: self.rtol,
            nls_dt: self.nls_dt,
            order: self.order,
            keep_snapshots: self.snapshots,
        })
    }
}

impl Params for PdeParams {
    fn validate(&self) -> Result<(), String> {
        if self.order > 1 {
            return Err(format!("reconstruction order must be 0 or 1, got {}", self.order));
        }
        if let Some(s) = &self.phase_match {
            if s.harmonic < 2 || s.samples == 0 || !(s.range[1] > s.range[0]) {
                return Err("phase_match needs harmonic >= 2, samples > 0 and an increasing range".into());
            }
        }
        positive("amplitude", self.amplitude)?;
        self.packet()?.validate().map_err(|e| e.to_string())
    }

    fn resolve(&mut self) {
        if let Ok(p) = self.packet() {
            self.checkpoints = Some(p.checkpoints);
        }
    }
}

pub fn run(p: &PdeParams, _seed: u64) -> Result<Artifacts, CliError> {
    let params = p.packet().map_err(asymptotica::Error::InvalidArgument)?;
    let rep = packet_compare(&params)?;
    let mut art = Artifacts::default();
    let n = rep.checkpoints.len();
    for (i, c) in rep.checkpoints.iter().enumerate() {
        art.metric(indexed("rel_l2", i, n), c.rel_l2);
        art.metric(indexed("max_abs", i, n), c.max_abs);
        art.metric(indexed("centroid", i, n), c.envelope_centroid);
    }
    let monotone = rep.checkpoints.windows(2).all(|w| w[1].rel_l2 > w[0].rel_l2);
    art.metric("error_growth_monotone", f64::from(u8::from(monotone)));
    art.metric("group_velocity", rep.group_velocity);
    art.metric("direct_energy_drift", rep.direct_energy_drift);
    art.metric("envelope_l2_drift", rep.envelope_l2_drift);

    let mut roots = Vec::new();
    if let Some(s) = &p.phase_match {
        roots = find_phase_matched(p.dispersion, s.harmonic, (s.range[0], s.range[1]), s.samples);
        art.metric("phase_matched_count", roots.len() as f64);
        for (i, k) in roots.iter().enumerate() {
            art.metric(format!("phase_matched[{i}]"), *k);
        }
    }

    for (i, s) in rep.snapshots.iter().enumerate() {
        let mut table = Table::new(format!(".t{i}"), &["x", "u_direct", "u_reconstructed", "abs_error"]);
        for ((x, d), r) in s.x.iter().zip(&s.u_direct).zip(&s.u_reconstructed) {
            table.push_floats(&[*x, *d, *r, (d - r).abs()]);
        }
        art.tables.push(table);
    }
    art.details = json!({
        "group_velocity": rep.group_velocity,
        "checkpoints": rep.checkpoints,
        "direct_energy_drift": rep.direct_energy_drift,
        "envelope_l2_drift": rep.envelope_l2_drift,
        "direct_stats": rep.direct_stats,
        "phase_matched": roots,
    });
    Ok(art)
}
