//! Euler's integral f(ε) = ∫₀^∞ e^{−t}/(1+εt) dt and its divergent series.

use crate::error::{Error, Result};

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate and |Kronrod − Gauss| on [a, b].
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive Gauss–Kronrod quadrature: the interval with the largest
/// error estimate is bisected until the summed estimate is below `tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let mut intervals = vec![{
        let (v, e) = gk15(&f, a, b);
        (a, b, v, e)
    }];
    for _ in 0..10_000 {
        let err: f64 = intervals.iter().map(|iv| iv.3).sum();
        if err <= tol {
            break;
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("nonempty");
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    // Sum smallest-first for a slightly better rounded total.
    let mut vals: Vec<f64> = intervals.iter().map(|iv| iv.2).collect();
    vals.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    (
        vals.iter().sum(),
        intervals.iter().map(|iv| iv.3).sum(),
    )
}

/// Euler's function by quadrature on [0, T] with e^{−T} below `quad_tol`/10;
/// the neglected tail is at most e^{−T}.
pub fn euler_f(eps: f64, quad_tol: f64) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    if !(quad_tol > 0.0) {
        return Err(Error::InvalidArgument(format!("quad_tol must be positive, got {quad_tol}")));
    }
    let t_max = (10.0 / quad_tol).ln().max(1.0);
    let (v, _) = integrate_adaptive(|t| (-t).exp() / (1.0 + eps * t), 0.0, t_max, 0.5 * quad_tol);
    Ok(v)
}

/// Σ_{n=0}^m (−1)^n n! ε^n.
pub fn euler_partial_sum(eps: f64, m: u32) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..=m {
        term *= -(n as f64) * eps;
        sum += term;
    }
    sum
}

/// f(ε) − S_m(ε) evaluated without cancellation as
/// (−ε)^{m+1} ∫₀^∞ t^{m+1} e^{−t}/(1+εt) dt, with relative accuracy about `rel_tol`.
pub fn euler_remainder(eps: f64, m: u32, rel_tol: f64) -> Result<f64> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::InvalidArgument(format!("eps must be positive, got {eps}")));
    }
    let p = f64::from(m + 1);
    // (m+1)! normalises the integrand so the tolerance is relative.
    let scale: f64 = (1..=m + 1).map(f64::from).product();
    let t_max = p + 50.0 + 12.0 * p.sqrt();
    let (v, _) = integrate_adaptive(
        |t| (p * t.ln() - t).exp() / (1.0 + eps * t) / scale,
        0.0,
        t_max,
        rel_tol,
    );
    let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
    Ok(sign * v * scale * eps.powf(p))
}

/// The bound (m+1)! ε^{m+1} on the truncation error after the ε^m term.
pub fn euler_error_bound(eps: f64, m: u32) -> f64 {
    (1..=m + 1).fold(1.0, |acc, n| acc * n as f64 * eps)
}
