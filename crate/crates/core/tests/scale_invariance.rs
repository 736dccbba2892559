//! Desk-scale presets against their full-size counterparts. Slow; run with
//! `cargo test --release --test scale_invariance -- --ignored`.

use lowreg_nls::harness::{preset, run_convergence_study, Scale};

const SLOPE_AGREEMENT: f64 = 0.15;

// Smooth initial data with a smooth nonlinearity. For p <= 1/2 the map
// u -> |u|^{2p} u is not smooth at the zeros of sin x and the splitting
// orders degrade in a range-dependent way.
const SMOOTH_PRESETS: [&str; 4] = ["quad-smooth", "quad-small-mu", "noninteger-p-1", "noninteger-p-0.75"];

fn compare(name: &str) -> Vec<String> {
    let desk = run_convergence_study(&preset(name, Scale::Desk).unwrap()).unwrap();
    let full = run_convergence_study(&preset(name, Scale::Paper).unwrap()).unwrap();
    let mut problems = Vec::new();
    for d in &desk.fitted_slopes {
        let f = full.slope(d.scheme);
        match (d.slope, f) {
            (Some(a), Some(b)) if (a - b).abs() <= SLOPE_AGREEMENT => {}
            (a, b) => problems.push(format!("{name} {}: desk {a:?} full {b:?}", d.scheme)),
        }
    }
    problems
}

#[test]
#[ignore]
fn desk_slopes_match_full_size_slopes() {
    let problems: Vec<String> = SMOOTH_PRESETS.iter().flat_map(|n| compare(n)).collect();
    assert!(problems.is_empty(), "{problems:#?}");
}
