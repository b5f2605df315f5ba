//! End-to-end acceptance checks. Each test prints one PASS/FAIL line with its
//! wall-clock time. Time budgets are reported for every build but only
//! enforced for optimised builds.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use asymptotica::blayer::{
    layer_half_width, linear_blayer_exact, linear_blayer_multiscale, nonlinear_blayer_multiscale,
    observed_order, solve_bvp_fd, BvpProblem,
};
use asymptotica::dimsys::{self, fixtures};
use asymptotica::linalg::{rat, ratio};
use asymptotica::msode::{
    self, catalog, compare, compare_until, naive_damped_expansion, AmplitudeMethod, AmplitudeOrder,
    CompareOptions, Reference,
};
use asymptotica::mspde::{
    find_phase_matched, packet_compare, reconstruct_field, solve_kg_direct, solve_nls, solve_nls_with,
    Dispersion, NlsCoefficients, PacketParams, WavePacketField,
};
use asymptotica::ode::{self, OdeOptions, Output};
use asymptotica::series::{
    euler_error_bound, euler_f, euler_partial_sum, euler_remainder, expand_root, PolyFamily, Radical,
};
use asymptotica::spectral::{hann_power_spectrum, spectral_peaks};
use asymptotica::Rational;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

struct Outcome {
    checks: Vec<(String, bool)>,
}

impl Outcome {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok));
    }

    fn finish(self, n: u32, title: &str, started: Instant, budget: Duration) {
        let elapsed = started.elapsed();
        let timed = cfg!(debug_assertions) || elapsed <= budget;
        let failed: Vec<&str> = self
            .checks
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(w, _)| w.as_str())
            .collect();
        let pass = failed.is_empty() && timed;
        println!(
            "criterion {n}: {} {title} ({:.3}s, budget {:?}{})",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget,
            if cfg!(debug_assertions) { ", unenforced in debug" } else { "" },
        );
        for (what, ok) in &self.checks {
            println!("    [{}] {what}", if *ok { "ok" } else { "FAILED" });
        }
        assert!(failed.is_empty(), "criterion {n} failed: {failed:?}");
        assert!(timed, "criterion {n} exceeded its {budget:?} budget: {elapsed:?}");
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn criterion_1_damped_table() {
    let started = Instant::now();
    let mut out = Outcome::new();
    let eps = 0.01;
    let case = catalog("damped_linear").unwrap();
    let times = [4.0, 40.0, 400.0];
    let tr = ode::solve(
        |t, y, d| (case.original_rhs)(t, y, eps, d),
        0.0,
        &[1.0, 0.0],
        400.0,
        Output::At(&times),
        &OdeOptions::new(1e-10, 1e-12),
    )
    .unwrap();
    let exact = case.exact.unwrap();
    for ((t, y), want) in times.iter().zip(&tr.y).zip([-0.6444, -0.5426, -0.0722]) {
        out.check(format!("integrator y({t}) = {:.5} vs {want}", y[0]), close(y[0], want, 5e-4));
        let e = exact(*t, eps, &[1.0, 0.0])[0];
        out.check(format!("closed form y({t}) = {e:.5} vs {want}"), close(e, want, 5e-4));
    }
    for (t, want) in times.iter().zip([-0.6367, -0.5372, 0.5295]) {
        let v = naive_damped_expansion(*t, eps);
        out.check(format!("naive expansion at {t} = {v:.5} vs {want}"), close(v, want, 5e-4));
    }
    out.finish(1, "damped-oscillator table", started, Duration::from_secs(1));
}

#[test]
fn criterion_2_two_term_damped() {
    let started = Instant::now();
    let mut out = Outcome::new();
    let case = catalog("damped_linear").unwrap();
    let opts = CompareOptions {
        reference: Reference::Exact,
        amplitude_method: AmplitudeMethod::ClosedForm,
        order: AmplitudeOrder::Second,
        samples: 1 << 16,
        ..CompareOptions::default()
    };
    let e1 = compare(case, 0.01, 2.0, &opts).unwrap();
    let e2 = compare(case, 0.005, 2.0, &opts).unwrap();
    out.check(
        format!("max error at eps=0.01 over [0, 1e4]: {:.3e} <= 5e-3", e1.max_abs_error),
        e1.max_abs_error <= 5e-3,
    );
    let ratio = e1.max_abs_error / e2.max_abs_error;
    out.check(format!("halving eps shrinks the error {ratio:.2}x >= 6x"), ratio >= 6.0);

    // Same comparison with both paths integrated numerically.
    let num = CompareOptions {
        samples: 4096,
        rtol: 1e-12,
        atol: 1e-14,
        ..CompareOptions::default()
    };
    let n1 = compare(case, 0.01, 2.0, &num).unwrap();
    out.check(
        format!("integrated paths agree: {:.3e} <= 5e-3", n1.max_abs_error),
        n1.max_abs_error <= 5e-3,
    );
    out.finish(2, "two-term multiscale damped oscillator", started, Duration::from_secs(5));
}

#[test]
fn criterion_3_polynomial_expansions() {
    let started = Instant::now();
    let mut out = Outcome::new();
    let quad = PolyFamily::from_nested(vec![vec![rat(0), rat(1)], vec![rat(-1)], vec![rat(1)]]).unwrap();
    let x = expand_root(&quad, rat(1), 4).unwrap();
    let want = [rat(1), rat(-1), rat(-1), rat(-2), rat(-5)];
    let shown: Vec<String> = x.coeffs().iter().map(ToString::to_string).collect();
    out.check(format!("quadratic coefficients [{}]", shown.join(", ")), x.coeffs() == want);

    let (z, one) = (Radical::zero, Radical::one);
    let quintic = PolyFamily::from_nested(vec![
        vec![z(), one()],
        vec![Radical::rational(rat(-2))],
        vec![z()],
        vec![z()],
        vec![z()],
        vec![one()],
    ])
    .unwrap();
    let q = expand_root(&quintic, Radical::root(rat(2), 4), 2).unwrap();
    out.check("quintic a1 = -1/8 exactly", q.coeff(1) == Radical::rational(ratio(-1, 8)));

    for n in [2usize, 4] {
        let xs = expand_root(&quad, rat(1), n).unwrap();
        let eps: Vec<Rational> = [10, 20, 40, 80].iter().map(|&d| ratio(1, d)).collect();
        let res: Vec<f64> = eps
            .iter()
            .map(|e| {
                let r = quad.eval_at(&xs.eval(e), e);
                r.to_f64().unwrap().abs()
            })
            .collect();
        let ef: Vec<f64> = eps.iter().map(|e| e.to_f64().unwrap()).collect();
        let slope = observed_order(&ef, &res);
        out.check(format!("residual slope for N={n}: {slope:.3} >= {}", n as f64 + 0.9), slope >= n as f64 + 0.9);
    }
    out.finish(3, "polynomial expansions", started, Duration::from_secs(1));
}

#[test]
fn criterion_4_euler_bound() {
    let started = Instant::now();
    let mut out = Outcome::new();
    let mut all_bounded = true;
    let mut worst_ratio: f64 = 0.0;
    let mut routes_agree = true;
    for eps in [0.01, 0.05, 0.1] {
        let f = euler_f(eps, 1e-15).unwrap();
        for m in 0..=12 {
            let rem = euler_remainder(eps, m, 1e-14).unwrap();
            let bound = euler_error_bound(eps, m);
            all_bounded &= rem.abs() <= bound;
            worst_ratio = worst_ratio.max(rem.abs() / bound);
            // Cross-check the remainder against the plain difference; the
            // latter carries rounding near 1e-16.
            let direct = f - euler_partial_sum(eps, m);
            routes_agree &= (direct - rem).abs() <= 1e-15 + 1e-10 * rem.abs();
        }
    }
    out.check(format!("|f - S_m| <= (m+1)! eps^(m+1) on the grid (worst ratio {worst_ratio:.3})"), all_bounded);
    out.check("remainder integral agrees with f - S_m", routes_agree);

    let errs: Vec<f64> = (0..=20).map(|m| euler_remainder(0.1, m, 1e-14).unwrap().abs()).collect();
    let best = (0..errs.len()).min_by(|&a, &b| errs[a].total_cmp(&errs[b])).unwrap();
    out.check(format!("optimal truncation at eps=0.1 near m=10 (found {best})"), (8..=11).contains(&best));
    let grows = errs[best..].windows(2).all(|w| w[1] > w[0]);
    out.check("error increases with m past the minimum", grows);
    out.finish(4, "Euler series bound and divergence", started, Duration::from_secs(5));
}

#[test]
fn criterion_5_pi_engine() {
    let started = Instant::now();
    let mut out = Outcome::new();
    let expected = [("pendulum", 2), ("drop", 1), ("waves", 0), ("waves_with_wavelength", 1)];
    for (name, count) in expected {
        let fx = fixtures::by_name(name).unwrap();
        let qs = fx.quantities();
        let groups = dimsys::pi_groups(&qs).unwrap();
        out.check(format!("{name}: {} groups, expected {count}", groups.len()), groups.len() == count);
        for text in fx.published {
            let target = fixtures::parse_monomial(&qs, text).unwrap();
            let dimensionless = dimsys::is_dimensionless(&qs, &target).unwrap();
            let member = dimsys::span_membership(&groups, &target).is_some();
            out.check(format!("{name}: `{text}` is dimensionless and in the span"), dimensionless && member);
        }
    }
    out.finish(5, "PI engine on worked examples", started, Duration::from_millis(100));
}

#[test]
fn criterion_6_coupled_cubic() {
    let started = Instant::now();
    let mut out = Outcome::new();
    let eps = 0.1;
    let case = catalog("coupled_cubic").unwrap();
    let a0 = msode::fit_initial_amplitudes(case, case.default_ics, eps, AmplitudeOrder::First, 1e-13).unwrap();
    out.check(
        format!("fitted |A(0)|, |B(0)| = {:.6}, {:.6}", a0[0].hypot(a0[1]), a0[2].hypot(a0[3])),
        close(a0[0].hypot(a0[1]), 0.3, 1e-12) && close(a0[2].hypot(a0[3]), 0.3, 1e-12),
    );

    let grid = ode::uniform_grid(0.0, 1.0 / (eps * eps), 1001);
    let amps = msode::integrate_amplitude(
        case,
        &a0,
        &grid,
        eps,
        AmplitudeOrder::First,
        &OdeOptions::new(1e-12, 1e-14),
        AmplitudeMethod::Integrate,
    )
    .unwrap();
    let drift = amps
        .y
        .iter()
        .map(|a| (a[0].hypot(a[1]) - 0.3).abs().max((a[2].hypot(a[3]) - 0.3).abs()))
        .fold(0.0, f64::max);
    out.check(format!("amplitude moduli drift {drift:.2e} <= 1e-10"), drift <= 1e-10);

    let (ma, mb) = (0.09, 0.09);
    let om1 = 1.0 + eps * (mb - 1.5 * ma);
    let om2 = 2.0 + eps * (0.5 * ma - 1.5 * mb);

    // Reconstructed signal over a long window resolves the shifts from 1 and 2.
    let dt = 0.5;
    let n = 8192;
    let x_rec: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 * dt;
            let a = (case.amplitude_closed_form.unwrap())(t, &a0, eps, AmplitudeOrder::First);
            (case.reconstruct)(t, &a, eps, AmplitudeOrder::First)[0]
        })
        .collect();
    let (f, p) = hann_power_spectrum(&x_rec, dt);
    let bin = f[1];
    let peaks = spectral_peaks(&f, &p, 2);
    let mut found: Vec<f64> = peaks.iter().map(|p| p.0).collect();
    found.sort_by(f64::total_cmp);
    out.check(
        format!("reconstruction peaks {:.5}, {:.5} vs {om1:.5}, {om2:.5} (bin {bin:.5})", found[0], found[1]),
        (found[0] - om1).abs() <= bin && (found[1] - om2).abs() <= bin,
    );
    out.check(
        "shifts resolved: peaks more than one bin from 1 and 2",
        (found[0] - 1.0).abs() > bin && (found[1] - 2.0).abs() > bin,
    );

    // Direct solution over t ≤ 1024.
    let dt = 0.125;
    let times: Vec<f64> = (0..8192).map(|i| i as f64 * dt).collect();
    let tr = ode::solve(
        |t, y, d| (case.original_rhs)(t, y, eps, d),
        0.0,
        case.default_ics,
        *times.last().unwrap(),
        Output::At(&times),
        &OdeOptions::new(1e-11, 1e-13),
    )
    .unwrap();
    let (f, p) = hann_power_spectrum(&tr.component(0), dt);
    let bin = f[1];
    let mut found: Vec<f64> = spectral_peaks(&f, &p, 2).iter().map(|p| p.0).collect();
    found.sort_by(f64::total_cmp);
    out.check(
        format!("direct peaks {:.5}, {:.5} within one bin ({bin:.5})", found[0], found[1]),
        (found[0] - om1).abs() <= bin && (found[1] - om2).abs() <= bin,
    );

    // Pinned from the pilot run (max 0.138 over t ≤ 100, 0.038 over t ≤ 10).
    let r = compare(case, eps, 2.0, &CompareOptions { samples: 8192, ..CompareOptions::default() }).unwrap();
    out.check(format!("max error over t <= 100: {:.4} <= 0.2", r.max_abs_error), r.max_abs_error <= 0.2);
    let short = r.max_error_until(1.0 / eps);
    out.check(format!("max error over t <= 10: {short:.4} <= 0.05"), short <= 0.05);
    out.finish(6, "coupled cubic oscillators", started, Duration::from_secs(10));
}

#[test]
fn criterion_7_linear_boundary_layer() {
    let started = Instant::now();
    let mut out = Outcome::new();
    let eps = [0.2, 0.1, 0.05];
    let mut gaps = Vec::new();
    let mut exact_gaps = Vec::new();
    for &e in &eps {
        let fd = solve_bvp_fd(&BvpProblem::linear(e).unwrap(), 8192).unwrap();
        let mut g: f64 = 0.0;
        let mut ge: f64 = 0.0;
        for (x, y) in fd.x.iter().zip(&fd.y) {
            let m = linear_blayer_multiscale(*x, e).unwrap();
            g = g.max((m - y).abs());
            ge = ge.max((m - linear_blayer_exact(*x, e, 1.0, 0.0)).abs());
        }
        gaps.push(g);
        exact_gaps.push(ge);
    }
    let order = observed_order(&eps, &gaps);
    out.check(format!("gaps vs FD {gaps:?}, observed order {order:.3} >= 2"), order >= 2.0);
    let order_exact = observed_order(&eps, &exact_gaps);
    out.check(format!("gaps vs exact solution, observed order {order_exact:.3} >= 2"), order_exact >= 2.0);
    for e in [0.1, 0.05, 0.01] {
        let fd = solve_bvp_fd(&BvpProblem::linear(e).unwrap(), 8192).unwrap();
        let w = layer_half_width(&fd.x, &fd.y).unwrap();
        out.check(format!("half-width at eps={e}: {w:.5} <= {:.3}", 5.0 * e), w <= 5.0 * e);
    }
    out.finish(7, "linear boundary layer", started, Duration::from_secs(5));
}

#[test]
fn criterion_8_nonlinear_boundary_layer() {
    let started = Instant::now();
    let mut out = Outcome::new();
    let mut gaps = Vec::new();
    for eps in [0.1, 0.01] {
        let s = nonlinear_blayer_multiscale(eps, 1e-10).unwrap();
        let (left, right) = (s.eval_inner(0.0), s.eval_inner(1.0 / eps));
        out.check(format!("eps={eps}: converged in {} Newton steps, B0 = {:.8}", s.newton_iterations, s.b0), true);
        out.check(format!("eps={eps}: u(0) = {left:.2e}"), left.abs() <= 1e-8);
        out.check(format!("eps={eps}: u(1/eps) - 1/2 = {:.2e}", right - 0.5), (right - 0.5).abs() <= 1e-8);
        let fd = solve_bvp_fd(&BvpProblem::nonlinear(eps).unwrap(), 8192).unwrap();
        gaps.push(fd.x.iter().zip(&fd.y).map(|(x, y)| (s.eval(*x) - y).abs()).fold(0.0, f64::max));
    }
    out.check(format!("gap to FD shrinks: {:.3e} at 0.01 < {:.3e} at 0.1", gaps[1], gaps[0]), gaps[1] < gaps[0]);
    out.finish(8, "nonlinear boundary layer", started, Duration::from_secs(10));
}

#[test]
fn criterion_9_pde_pipeline() {
    let started = Instant::now();
    let mut out = Outcome::new();

    let roots = find_phase_matched(Dispersion::FourthOrder, 3, (0.1, 2.0), 1000);
    let target = 1.0 / 3f64.sqrt();
    out.check(
        format!("(a) phase-matched roots {roots:?}"),
        roots.len() == 1 && (roots[0] - target).abs() <= 1e-10,
    );

    let mut p = PacketParams::klein_gordon(0.1);
    let env = p.initial_envelope().unwrap();
    let u0 = reconstruct_field(&env, 0.0, 1).unwrap();
    let times: Vec<f64> = (0..=20).map(|i| 5.0 * f64::from(i)).collect();
    let run = solve_kg_direct(0.1, &u0, &times, 1e-10).unwrap();
    out.check(
        format!("(b) KG energy drift over t=100: {:.2e} <= 1e-8", run.max_energy_drift),
        run.max_energy_drift <= 1e-8,
    );

    let eps = 0.1;
    let nls = solve_nls(&env, 1.0 / eps, 0.01).unwrap();
    let l2 = ((nls.l2_norm_sq() - env.l2_norm_sq()) / env.l2_norm_sq()).abs();
    out.check(format!("(c) NLS L2 drift over t=1/eps: {l2:.2e} <= 1e-10"), l2 <= 1e-10);
    let small = WavePacketField::gaussian(
        Dispersion::KleinGordon,
        eps,
        1.0,
        2.0 * PI * 32.0,
        1024,
        Complex64::new(0.5, 0.0),
        60.0,
        8.0,
    )
    .unwrap();
    let co = NlsCoefficients::for_field(&small).linear();
    let t = 60.0;
    let lin = solve_nls_with(&small, &co, t, 0.5).unwrap();
    let spread = Complex64::new(64.0, 2.0 * co.beta * t);
    let gap = small
        .grid
        .x()
        .iter()
        .zip(&lin.samples)
        .map(|(x, z)| {
            let xi = x - 60.0 - co.c * t;
            let want = 0.5 * (64.0 / spread).sqrt() * (-(xi * xi) / (2.0 * spread)).exp();
            (z - want).norm()
        })
        .fold(0.0, f64::max);
    out.check(format!("(c) linear NLS vs analytic propagator: {gap:.2e} <= 1e-10"), gap <= 1e-10);

    // Pilot-pinned grid: L = 2π·128, N = 2048, amplitude 0.5, σ = 10 wavelengths.
    p.checkpoints = vec![5.0, 10.0, 50.0];
    let rep = packet_compare(&p).unwrap();
    let errs: Vec<f64> = rep.checkpoints.iter().map(|c| c.rel_l2).collect();
    out.check(format!("(d) relative L2 error at t=10: {:.3e} <= 0.05", errs[1]), errs[1] <= 0.05);
    out.check(format!("(d) error grows across checkpoints {errs:?}"), errs.windows(2).all(|w| w[1] > w[0]));
    let moved = rep.checkpoints[1].envelope_centroid - p.center();
    let expect = rep.group_velocity * 10.0;
    out.check(
        format!("(d) envelope centroid moved {moved:.4} vs group velocity {expect:.4}"),
        ((moved - expect) / expect).abs() <= 0.02,
    );
    out.finish(9, "PDE pipeline", started, Duration::from_secs(120));
}

#[test]
fn eps_zero_comparisons_are_limited_by_tolerances() {
    for case in msode::cases::ALL {
        let r = compare_until(case, 0.0, 50.0, &CompareOptions { samples: 512, ..CompareOptions::default() }).unwrap();
        assert!(r.max_abs_error < 1e-8, "{}: {}", case.name, r.max_abs_error);
    }
}
