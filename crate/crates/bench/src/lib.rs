//! Shared inputs for the solver benchmarks.

use std::f64::consts::PI;

use asymptotica::mspde::{reconstruct_field, Dispersion, PacketParams, RealField, WavePacketField};

/// A Klein–Gordon packet small enough to time repeatedly.
pub fn small_packet(eps: f64) -> PacketParams {
    PacketParams {
        k: 2.0,
        length: 2.0 * PI * 64.0,
        n: 1024,
        checkpoints: vec![1.0, 2.0],
        ..PacketParams::klein_gordon(eps)
    }
}

pub fn small_envelope(d: Dispersion, n: usize) -> WavePacketField {
    let length = 2.0 * PI * 32.0;
    WavePacketField::gaussian(d, 0.1, 1.0, length, n, 0.5.into(), 0.5 * length, 12.0).expect("valid packet")
}

pub fn small_field(eps: f64) -> RealField {
    let env = small_packet(eps).initial_envelope().expect("valid packet");
    reconstruct_field(&env, 0.0, 1).expect("non-resonant carrier")
}
