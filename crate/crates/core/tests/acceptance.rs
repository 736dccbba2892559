//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::fmt::Write as _;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;

use lowreg_nls::analysis::{
    exact_plane_wave, fit_log_log, h_r_distance, h_r_norm, oracle_cubic_dominant,
    oracle_cubic_integral, oracle_cubic_step, oracle_free_flow, plane_wave, smooth_data,
    uniform_draw, SmoothKind,
};
use lowreg_nls::harness::{preset, run_convergence_study, Scale, CSV_FILE};
use lowreg_nls::integrators::{
    step_lowreg, step_lowreg_twisted, step_quad_abs2, evolve, SchemeKind, SchemeSpec, Stepper,
};
use lowreg_nls::spectral::{
    apply, free_flow, inverse_derivative, make_grid, phi1_of_scaled_laplacian, Field, TorusGrid,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Seed of the single-draw rough-data studies.
const ROUGH_SEED: u64 = 2;
const QUAD_ROUGH_SEEDS: [u64; 3] = [1, 2, 3];

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: true,
            detail: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl AsRef<str>) {
        if !ok {
            self.passed = false;
        }
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(what.as_ref());
        if !ok {
            self.detail.push_str(" [x]");
        }
    }

    fn within(&mut self, elapsed: Duration, budget_secs: f64) {
        let s = elapsed.as_secs_f64();
        self.check(s < budget_secs, format!("{s:.1}s < {budget_secs}s"));
    }
}

fn random_field(grid: &std::sync::Arc<TorusGrid>, seed: u64) -> Field {
    let coeffs = (0..grid.len() as u64)
        .map(|j| Complex64::new(uniform_draw(seed, 2 * j) - 0.5, uniform_draw(seed, 2 * j + 1) - 0.5))
        .collect();
    Field::from_coefficients(grid, coeffs).unwrap()
}

fn max_coeff_diff(a: &Field, b: &Field) -> f64 {
    a.coefficients()
        .iter()
        .zip(b.coefficients().iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut out = Outcome::new();
    let g = make_grid(1, 8).unwrap();
    let (mu, tau) = (1.0, 0.1);
    let spec = SchemeSpec::power(SchemeKind::LowRegExp, mu, 1.0, tau);
    let w = random_field(&g, 2024);
    for t_n in [0.0, 0.37] {
        let u = oracle_free_flow(&w, t_n).unwrap();
        let scheme = step_lowreg(&u, t_n, &spec).unwrap();
        let oracle = oracle_free_flow(&oracle_cubic_step(&w, t_n, tau, mu).unwrap(), t_n + tau).unwrap();
        let d = max_coeff_diff(&scheme, &oracle);
        out.check(d <= 1e-12, format!("t_n={t_n}: {d:.2e} <= 1e-12"));
    }
    out.within(start.elapsed(), 1.0);
    out
}

fn remainder_order() -> Outcome {
    let start = Instant::now();
    let mut out = Outcome::new();
    let g = make_grid(1, 16).unwrap();
    let w = smooth_data(SmoothKind::SinCos, &g).unwrap();
    let remainder = |tau: f64| {
        let exact = oracle_cubic_integral(&w, 0.0, tau).unwrap();
        let approx = oracle_cubic_dominant(&w, 0.0, tau).unwrap();
        h_r_norm(&exact.sub(&approx).unwrap(), 1.0).unwrap()
    };
    for e in 6..=8 {
        let tau = 2f64.powi(-e);
        let ratio = remainder(tau) / remainder(tau / 2.0);
        out.check((3.3..=4.7).contains(&ratio), format!("tau=2^-{e}: ratio {ratio:.3} in [3.3, 4.7]"));
    }
    out.within(start.elapsed(), 5.0);
    out
}

fn plane_wave_exactness() -> Outcome {
    let start = Instant::now();
    let mut out = Outcome::new();
    let g = make_grid(1, 32).unwrap();
    let a = Complex64::new(1.0, 0.0);
    let u0 = plane_wave(&g, &[1], a);
    let exact = exact_plane_wave(&g, &[1], a, 1.0, 1.0, 1.0);
    let expected = [
        (SchemeKind::LowRegExp, 1.0),
        (SchemeKind::ClassicalExp, 1.0),
        (SchemeKind::LieSplit, 1.0),
        (SchemeKind::StrangSplit, 2.0),
    ];
    for (kind, order) in expected {
        let points: Vec<(f64, f64)> = (5..=10)
            .map(|e| {
                let n = 1usize << e;
                let spec = SchemeSpec::power(kind, 1.0, 1.0, 1.0 / n as f64);
                let u = evolve(&u0, &spec, n).unwrap().u;
                (spec.tau, h_r_distance(&u, &exact, 1.0).unwrap())
            })
            .collect();
        let errors: Vec<String> = points.iter().map(|p| format!("{:.1e}", p.1)).collect();
        match fit_log_log(&points) {
            Ok(slope) => out.check(
                (slope - order).abs() <= 0.1,
                format!("{kind} slope {slope:.3} vs {order} (errors {})", errors.join(" ")),
            ),
            Err(e) => out.check(false, format!("{kind}: no slope ({e}; errors {})", errors.join(" "))),
        }
    }
    out.within(start.elapsed(), 30.0);
    out
}

fn slope_of(table: &lowreg_nls::analysis::ErrorTable, kind: SchemeKind) -> Option<f64> {
    table.slope(kind)
}

fn fmt_slope(s: Option<f64>) -> String {
    s.map_or_else(|| "none".into(), |v| format!("{v:.3}"))
}

fn cubic_rough_slopes() -> Outcome {
    let start = Instant::now();
    let mut out = Outcome::new();
    let study = |theta: &str| {
        let mut c = preset(&format!("cubic-rough-{theta}"), Scale::Desk).unwrap();
        c.set_seed(ROUGH_SEED);
        run_convergence_study(&c).unwrap()
    };
    let two = study("2");
    let three = study("3");
    let five = study("5");
    let at_least = |out: &mut Outcome, label: &str, s: Option<f64>| {
        out.check(s.is_some_and(|v| v >= 0.85), format!("{label} {} >= 0.85", fmt_slope(s)));
    };
    at_least(&mut out, "theta=2 LowRegExp", slope_of(&two, SchemeKind::LowRegExp));
    at_least(&mut out, "theta=3 LowRegExp", slope_of(&three, SchemeKind::LowRegExp));
    at_least(&mut out, "theta=3 ClassicalExp", slope_of(&three, SchemeKind::ClassicalExp));
    at_least(&mut out, "theta=3 LieSplit", slope_of(&three, SchemeKind::LieSplit));
    let strang = slope_of(&five, SchemeKind::StrangSplit);
    out.check(
        strang.is_some_and(|v| (1.8..=2.2).contains(&v)),
        format!("theta=5 StrangSplit {} in [1.8, 2.2]", fmt_slope(strang)),
    );
    out.within(start.elapsed(), 300.0);
    out
}

fn quad_smooth_slopes() -> Outcome {
    let start = Instant::now();
    let mut out = Outcome::new();
    let table = run_convergence_study(&preset("quad-smooth", Scale::Desk).unwrap()).unwrap();
    for (kind, order) in [
        (SchemeKind::LieQuad, 1.0),
        (SchemeKind::StrangQuad, 2.0),
        (SchemeKind::ClassicalExp, 1.0),
        (SchemeKind::QuadU2, 1.0),
    ] {
        let s = table.slope(kind);
        out.check(
            s.is_some_and(|v| (v - order).abs() <= 0.2),
            format!("{kind} {} = {order} +- 0.2", fmt_slope(s)),
        );
    }
    out.within(start.elapsed(), 120.0);
    out
}

fn quad_rough_order_reduction() -> Outcome {
    let start = Instant::now();
    let mut out = Outcome::new();
    let mut good_seeds = 0;
    let mut detail = String::new();
    for seed in QUAD_ROUGH_SEEDS {
        let mut c = preset("quad-rough", Scale::Desk).unwrap();
        c.set_seed(seed);
        let table = run_convergence_study(&c).unwrap();
        let quad = table.slope(SchemeKind::QuadU2);
        let lie = table.slope(SchemeKind::LieQuad);
        let strang = table.slope(SchemeKind::StrangQuad);
        let classical = table.slope(SchemeKind::ClassicalExp);
        // no usable rung at all: every row failed or sits at the floor of a
        // reference that itself does not converge
        let classical_nonconvergent = table
            .rows_for(SchemeKind::ClassicalExp)
            .all(|r| r.failed || r.below_reference_floor);
        let ok = quad.is_some_and(|v| v >= 0.85)
            && lie.is_some_and(|v| v <= 0.75)
            && strang.is_some_and(|v| v <= 0.75)
            && (classical.is_some_and(|v| v <= 0.3) || classical_nonconvergent);
        good_seeds += ok as usize;
        if !detail.is_empty() {
            detail.push_str("; ");
        }
        let _ = write!(
            detail,
            "seed {seed}: QuadU2 {} Lie {} Strang {} ClassicalExp {}{}{}",
            fmt_slope(quad),
            fmt_slope(lie),
            fmt_slope(strang),
            fmt_slope(classical),
            if classical_nonconvergent { " (non-convergent)" } else { "" },
            if ok { "" } else { " [x]" },
        );
    }
    out.detail = detail;
    out.check(good_seeds >= 2, format!("{good_seeds}/3 seeds pass, need 2"));
    out.within(start.elapsed(), 180.0);
    out
}

fn property_suite() -> Outcome {
    let start = Instant::now();
    let mut out = Outcome::new();
    let g = make_grid(1, 32).unwrap();
    let g2 = make_grid(2, 8).unwrap();
    let seeds = 0..20u64;

    let mut worst = 0.0f64;
    for seed in seeds.clone() {
        for grid in [&g, &g2] {
            let f = random_field(grid, seed);
            let t = uniform_draw(seed, 999) * 10.0 - 5.0;
            for r in [0.0, 0.5, 1.0, 2.0] {
                let before = h_r_norm(&f, r).unwrap();
                let after = h_r_norm(&apply(&free_flow(grid, t), &f).unwrap(), r).unwrap();
                worst = worst.max((after - before).abs() / before);
            }
        }
    }
    out.check(worst <= 1e-12, format!("free-flow isometry {worst:.1e}"));

    let mut worst = 0.0f64;
    for seed in seeds.clone() {
        let f = random_field(&g, seed).into_physical();
        for kind in [SchemeKind::LieSplit, SchemeKind::StrangSplit] {
            for p in [1.0, 2.0] {
                let spec = SchemeSpec::power(kind, 2.0, p, 0.05 + 0.2 * uniform_draw(seed, 7));
                let next = Stepper::new(&g, &spec).unwrap().step(&f, 0.0).unwrap();
                worst = worst.max((next.mass() - f.mass()).abs() / f.mass());
            }
        }
    }
    out.check(worst <= 1e-12, format!("splitting mass drift {worst:.1e}"));

    let mut worst = 0.0f64;
    for seed in seeds.clone() {
        let f = random_field(&g, seed);
        let tau = 0.01 + uniform_draw(seed, 3);
        let linear = apply(&free_flow(&g, tau), &f).unwrap();
        for kind in SchemeKind::ALL {
            let spec = match kind {
                SchemeKind::QuadU2 | SchemeKind::LieQuad | SchemeKind::StrangQuad => {
                    SchemeSpec::square(kind, 0.0, tau)
                }
                SchemeKind::QuadAbsU2 => SchemeSpec::abs_square(kind, 0.0, tau),
                _ => SchemeSpec::power(kind, 0.0, 1.0, tau),
            };
            let next = Stepper::new(&g, &spec).unwrap().step(&f, 0.0).unwrap();
            worst = worst.max(max_coeff_diff(&next, &linear));
        }
    }
    out.check(worst <= 1e-11, format!("mu=0 free flow {worst:.1e}"));

    let mut worst = 0.0f64;
    for seed in seeds.clone() {
        let f = random_field(&g, seed);
        let phase = Complex64::from_polar(1.0, 6.0 * uniform_draw(seed, 11));
        let spec = SchemeSpec::power(SchemeKind::LowRegExp, 1.0, 1.0, 0.1);
        let lhs = step_lowreg(&f.scale(phase), 0.0, &spec).unwrap();
        let rhs = step_lowreg(&f, 0.0, &spec).unwrap().scale(phase);
        worst = worst.max(max_coeff_diff(&lhs, &rhs));
    }
    out.check(worst <= 1e-12, format!("gauge equivariance {worst:.1e}"));

    let mut worst = 0.0f64;
    for seed in seeds.clone() {
        let v = random_field(&g, seed);
        let t_n = 3.0 * uniform_draw(seed, 5);
        let spec = SchemeSpec::power(SchemeKind::LowRegExp, -1.0, 1.0, 0.05);
        let via_v = apply(&free_flow(&g, t_n + spec.tau), &step_lowreg_twisted(&v, t_n, &spec).unwrap()).unwrap();
        let via_u = step_lowreg(&apply(&free_flow(&g, t_n), &v).unwrap(), t_n, &spec).unwrap();
        worst = worst.max(max_coeff_diff(&via_v, &via_u));
    }
    out.check(worst <= 1e-12, format!("twisted/untwisted {worst:.1e}"));

    let mut largest = 0.0f64;
    for k in [8, 64, 1024] {
        let grid = make_grid(1, k).unwrap();
        for tau in [1e-12, 1e-9, 1e-6, 1e-3, 0.1, 1.0, 7.3] {
            for c in [Complex64::new(0.0, tau), Complex64::new(0.0, -2.0 * tau)] {
                let m = phi1_of_scaled_laplacian(&grid, c);
                largest = m.symbol().iter().map(|z| z.norm()).fold(largest, f64::max);
            }
        }
    }
    out.check(largest <= 1.0, format!("max |phi1 symbol| {largest}"));

    let mut worst = 0.0f64;
    for seed in seeds {
        let f = random_field(&g, seed);
        let d = apply(&inverse_derivative(&g, 0).unwrap(), &f).unwrap();
        worst = worst.max(d.coefficient(&[0]).norm());
    }
    out.check(worst == 0.0, format!("inverse derivative mean {worst:.1e}"));

    out.within(start.elapsed(), 30.0);
    out
}

/// Exact solution of `u' = -i mu |u|^2` (real part constant).
fn constant_mode_exact(a: Complex64, mu: f64, t: f64) -> Complex64 {
    let (re, im) = (a.re, a.im);
    Complex64::new(re, re * ((im / re).atan() - mu * re * t).tan())
}

fn abs_square_constant_mode() -> Outcome {
    let mut out = Outcome::new();
    let g = make_grid(1, 8).unwrap();
    let a = Complex64::new(0.8, -0.3);
    let mu = 1.0;
    let u = plane_wave(&g, &[0], a);
    let err = |tau: f64| {
        let spec = SchemeSpec::abs_square(SchemeKind::QuadAbsU2, mu, tau);
        let next = step_quad_abs2(&u, 0.0, &spec).unwrap();
        (next.coefficient(&[0]) - constant_mode_exact(a, mu, tau)).norm()
    };
    for tau in [0.1, 0.05, 0.025] {
        let ratio = err(tau) / err(tau / 2.0);
        out.check((3.3..=4.7).contains(&ratio), format!("tau={tau}: ratio {ratio:.3}"));
    }
    let tau = 0.1;
    let unfixed = SchemeSpec {
        quad_zero_mode_fix: false,
        ..SchemeSpec::abs_square(SchemeKind::QuadAbsU2, mu, tau)
    };
    let next = step_quad_abs2(&u, 0.0, &unfixed).unwrap();
    let d = (next.coefficient(&[0]) - (a - 2.0 * I * mu * tau * a.norm_sqr())).norm();
    out.check(d <= 1e-15, format!("fix off: A - 2i mu tau |A|^2 deviation {d:.1e}"));
    out
}

fn deterministic_csv() -> Outcome {
    let mut out = Outcome::new();
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str| {
        let target = dir.path().join(sub);
        let status = Command::new(env!("CARGO_BIN_EXE_lowreg-nls"))
            .args(["preset", "cubic-rough-2", "--scale", "desk", "--seed", "42", "--out"])
            .arg(&target)
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        std::fs::read(target.join(CSV_FILE)).unwrap()
    };
    let first = run("a");
    let second = run("b");
    let lines = first.iter().filter(|&&b| b == b'\n').count();
    out.check(first == second, format!("{} bytes, {lines} lines, identical", first.len()));
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("remainder order", remainder_order),
        ("plane-wave exactness", plane_wave_exactness),
        ("cubic rough-data slopes", cubic_rough_slopes),
        ("quadratic smooth slopes", quad_smooth_slopes),
        ("quadratic rough order reduction", quad_rough_order_reduction),
        ("property suite", property_suite),
        ("|u|^2 constant mode", abs_square_constant_mode),
        ("deterministic CSV", deterministic_csv),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        failures += !outcome.passed as usize;
        println!(
            "{} {}. {name}: {}",
            if outcome.passed { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail
        );
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
