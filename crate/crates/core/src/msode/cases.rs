//! Right-hand sides, amplitude equations and reconstructions for each case.
//!
//! Complex amplitudes are stored as consecutive (re, im) pairs.

use num_complex::Complex64;

use super::{AmplitudeOrder, CaseSpec};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn cx(a: &[f64], k: usize) -> Complex64 {
    Complex64::new(a[2 * k], a[2 * k + 1])
}

fn put(out: &mut [f64], k: usize, z: Complex64) {
    out[2 * k] = z.re;
    out[2 * k + 1] = z.im;
}

fn second(order: AmplitudeOrder) -> f64 {
    match order {
        AmplitudeOrder::First => 0.0,
        AmplitudeOrder::Second => 1.0,
    }
}

fn amplitude_derivative(spec: &CaseSpec, t: f64, amps: &[f64], eps: f64, order: AmplitudeOrder) -> Vec<f64> {
    let mut d = vec![0.0; amps.len()];
    (spec.amplitude_rhs)(t, amps, eps, order, &mut d);
    d
}

// y'' + εy' + y = 0

fn damped_rhs(_t: f64, y: &[f64], eps: f64, d: &mut [f64]) {
    d[0] = y[1];
    d[1] = -eps * y[1] - y[0];
}

fn damped_amp(_t: f64, a: &[f64], eps: f64, order: AmplitudeOrder, d: &mut [f64]) {
    let z = cx(a, 0);
    put(d, 0, -0.5 * eps * z - second(order) * eps * eps / 8.0 * I * z);
}

fn damped_reconstruct(t: f64, a: &[f64], eps: f64, order: AmplitudeOrder) -> Vec<f64> {
    let z = cx(a, 0);
    let dz = cx(&amplitude_derivative(&DAMPED_LINEAR, t, a, eps, order), 0);
    let e = Complex64::from_polar(1.0, t);
    vec![2.0 * (z * e).re, 2.0 * ((dz + I * z) * e).re]
}

/// General solution for initial state (y0, y0') when ε < 2.
fn damped_exact(t: f64, eps: f64, ics: &[f64]) -> Vec<f64> {
    let om = (1.0 - eps * eps / 4.0).sqrt();
    let (y0, v0) = (ics[0], ics[1]);
    let b = (v0 + 0.5 * eps * y0) / om;
    let decay = (-0.5 * eps * t).exp();
    let (s, c) = (om * t).sin_cos();
    let y = decay * (y0 * c + b * s);
    let v = -0.5 * eps * y + decay * (-y0 * om * s + b * om * c);
    vec![y, v]
}

fn damped_closed(t: f64, a0: &[f64], eps: f64, order: AmplitudeOrder) -> Vec<f64> {
    let z = cx(a0, 0) * (-0.5 * eps * t).exp() * Complex64::from_polar(1.0, -second(order) * eps * eps * t / 8.0);
    vec![z.re, z.im]
}

// y'' + y = εy³

fn cubic_rhs(_t: f64, y: &[f64], eps: f64, d: &mut [f64]) {
    d[0] = y[1];
    d[1] = -y[0] + eps * y[0].powi(3);
}

fn cubic_amp(_t: f64, a: &[f64], eps: f64, order: AmplitudeOrder, d: &mut [f64]) {
    let z = cx(a, 0);
    let m = z.norm_sqr();
    let rate = -1.5 * eps * m - second(order) * 15.0 / 16.0 * eps * eps * m * m;
    put(d, 0, I * rate * z);
}

fn cubic_reconstruct(t: f64, a: &[f64], eps: f64, order: AmplitudeOrder) -> Vec<f64> {
    let z = cx(a, 0);
    let dz = cx(&amplitude_derivative(&CUBIC, t, a, eps, order), 0);
    let e1 = Complex64::from_polar(1.0, t);
    let e3 = Complex64::from_polar(1.0, 3.0 * t);
    let z3 = z * z * z;
    let y = z * e1 - eps / 8.0 * z3 * e3;
    let v = (dz + I * z) * e1 - eps / 8.0 * (3.0 * z * z * dz + 3.0 * I * z3) * e3;
    vec![2.0 * y.re, 2.0 * v.re]
}

fn cubic_closed(t: f64, a0: &[f64], eps: f64, order: AmplitudeOrder) -> Vec<f64> {
    let z = cx(a0, 0);
    let m = z.norm_sqr();
    let rate = -1.5 * eps * m - second(order) * 15.0 / 16.0 * eps * eps * m * m;
    let z = z * Complex64::from_polar(1.0, rate * t);
    vec![z.re, z.im]
}

// y'' + y' + εy² = 0, real amplitudes (A, B)

fn quad_rhs(_t: f64, y: &[f64], eps: f64, d: &mut [f64]) {
    d[0] = y[1];
    d[1] = -y[1] - eps * y[0] * y[0];
}

fn quad_amp(_t: f64, a: &[f64], eps: f64, order: AmplitudeOrder, d: &mut [f64]) {
    let (aa, bb) = (a[0], a[1]);
    let s = second(order);
    d[0] = -eps * aa * aa - s * 2.0 * eps * eps * aa.powi(3);
    d[1] = 2.0 * eps * aa * bb + s * 2.0 * eps * eps * aa * aa * bb;
}

fn quad_reconstruct(t: f64, a: &[f64], eps: f64, order: AmplitudeOrder) -> Vec<f64> {
    let (aa, bb) = (a[0], a[1]);
    let d = amplitude_derivative(&QUADRATIC_DAMPED, t, a, eps, order);
    let e1 = (-t).exp();
    let e2 = (-2.0 * t).exp();
    let y = aa + bb * e1 - 0.5 * eps * bb * bb * e2;
    let v = d[0] + (d[1] - bb) * e1 - 0.5 * eps * (2.0 * bb * d[1] - 2.0 * bb * bb) * e2;
    vec![y, v]
}

// x'' + 2x − y = εxy², y'' + 3y − 2x = εyx²; state (x, x', y, y')

fn coupled_rhs(_t: f64, s: &[f64], eps: f64, d: &mut [f64]) {
    let (x, y) = (s[0], s[2]);
    d[0] = s[1];
    d[1] = -2.0 * x + y + eps * x * y * y;
    d[2] = s[3];
    d[3] = -3.0 * y + 2.0 * x + eps * y * x * x;
}

fn coupled_amp(_t: f64, a: &[f64], eps: f64, _order: AmplitudeOrder, d: &mut [f64]) {
    let (za, zb) = (cx(a, 0), cx(a, 1));
    let (ma, mb) = (za.norm_sqr(), zb.norm_sqr());
    put(d, 0, 0.5 * eps * I * (3.0 * ma - 2.0 * mb) * za);
    put(d, 1, 0.5 * eps * I * (3.0 * mb - ma) * zb);
}

fn coupled_reconstruct(t: f64, a: &[f64], eps: f64, order: AmplitudeOrder) -> Vec<f64> {
    let (za, zb) = (cx(a, 0), cx(a, 1));
    let d = amplitude_derivative(&COUPLED_CUBIC, t, a, eps, order);
    let (da, db) = (cx(&d, 0), cx(&d, 1));
    let e1 = Complex64::from_polar(1.0, -t);
    let e2 = Complex64::from_polar(1.0, -2.0 * t);
    let pa = za * e1;
    let pb = zb * e2;
    let va = (da - I * za) * e1;
    let vb = (db - 2.0 * I * zb) * e2;
    vec![
        2.0 * (pa + pb).re,
        2.0 * (va + vb).re,
        2.0 * (pa - 2.0 * pb).re,
        2.0 * (va - 2.0 * vb).re,
    ]
}

fn coupled_closed(t: f64, a0: &[f64], eps: f64, _order: AmplitudeOrder) -> Vec<f64> {
    let (za, zb) = (cx(a0, 0), cx(a0, 1));
    let (ma, mb) = (za.norm_sqr(), zb.norm_sqr());
    let a = za * Complex64::from_polar(1.0, 0.5 * eps * (3.0 * ma - 2.0 * mb) * t);
    let b = zb * Complex64::from_polar(1.0, 0.5 * eps * (3.0 * mb - ma) * t);
    vec![a.re, a.im, b.re, b.im]
}

pub static DAMPED_LINEAR: CaseSpec = CaseSpec {
    name: "damped_linear",
    dim: 1,
    amplitude_len: 2,
    validity_exponent: 3,
    original_rhs: damped_rhs,
    amplitude_rhs: damped_amp,
    reconstruct: damped_reconstruct,
    exact: Some(damped_exact),
    amplitude_closed_form: Some(damped_closed),
    default_ics: &[1.0, 0.0],
    conserves_modulus: false,
};

pub static CUBIC: CaseSpec = CaseSpec {
    name: "cubic",
    dim: 1,
    amplitude_len: 2,
    validity_exponent: 3,
    original_rhs: cubic_rhs,
    amplitude_rhs: cubic_amp,
    reconstruct: cubic_reconstruct,
    exact: None,
    amplitude_closed_form: Some(cubic_closed),
    default_ics: &[1.0, 0.0],
    conserves_modulus: true,
};

pub static QUADRATIC_DAMPED: CaseSpec = CaseSpec {
    name: "quadratic_damped",
    dim: 1,
    amplitude_len: 2,
    validity_exponent: 3,
    original_rhs: quad_rhs,
    amplitude_rhs: quad_amp,
    reconstruct: quad_reconstruct,
    exact: None,
    amplitude_closed_form: None,
    default_ics: &[1.0, 0.0],
    conserves_modulus: false,
};

pub static COUPLED_CUBIC: CaseSpec = CaseSpec {
    name: "coupled_cubic",
    dim: 2,
    amplitude_len: 4,
    validity_exponent: 2,
    original_rhs: coupled_rhs,
    amplitude_rhs: coupled_amp,
    reconstruct: coupled_reconstruct,
    exact: None,
    amplitude_closed_form: Some(coupled_closed),
    default_ics: &[1.2, 0.0, -0.6, 0.0],
    conserves_modulus: true,
};

pub static ALL: [&CaseSpec; 4] = [&DAMPED_LINEAR, &CUBIC, &QUADRATIC_DAMPED, &COUPLED_CUBIC];
