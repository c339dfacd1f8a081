//! End-to-end checks, one per shipping criterion. Each test prints a single
//! PASS line with the measured values; a failure shows which bound broke.

use std::process::Command;
use std::time::Instant;

use exptrop::metric::{sampled_hausdorff, witness_family};
use exptrop::roots::{isolate_roots, wv_bound};
use exptrop::tropical::{root_interval, trop_points_1d};
use exptrop::verify::{circle_seven, run_suite};
use exptrop::{ExpSum, Rectangle};
use std::f64::consts::TAU;

const SEED: u64 = 0;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_exptrop"))
}

#[test]
fn criterion_01_circle_instance_through_the_cli() {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("circle7.json");
    std::fs::write(&input, circle_seven().to_json_string()).unwrap();

    let out = bin().args(["trop", "--input"]).arg(&input).output().unwrap();
    assert!(out.status.success(), "trop failed: {}", String::from_utf8_lossy(&out.stderr));
    let trop: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let vertices = trop["vertices"].as_array().unwrap();
    assert_eq!(vertices.len(), 3, "expected 3 vertices, got {}", vertices.len());

    let out = bin().args(["bounds", "--input"]).arg(&input).output().unwrap();
    assert!(out.status.success());
    let bounds: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let bound_1a = bounds["bound_1a"].as_f64().unwrap();
    assert!(
        (bound_1a - 2.0649).abs() <= 0.001,
        "bound_1a = {bound_1a}, expected 2.0649 +- 0.001"
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}, budget 10 s");
    println!(
        "criterion 1: PASS  3 vertices, bound_1a = {bound_1a:.4}, {:.2} s",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_02_squared_two_term_sum() {
    let g = witness_family(3, 1, 1.0).unwrap();
    let points = trop_points_1d(&g).unwrap().values();
    let ln2 = 2f64.ln();
    assert_eq!(points.len(), 2);
    assert!((points[0] + ln2).abs() <= 1e-9 && (points[1] - ln2).abs() <= 1e-9);

    let rect = Rectangle::new(-1.0, 1.0, 0.0, 4.0 * TAU).unwrap();
    let roots = isolate_roots(&g, &rect).unwrap();
    assert!(!roots.is_empty());
    let worst = roots.iter().map(|r| r.re.abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-8, "real part off axis by {worst:.3e}");

    let est = sampled_hausdorff(&g, 16, SEED).unwrap();
    assert!(
        (est.delta_estimate - ln2).abs() <= 1e-6,
        "estimate {} vs log 2",
        est.delta_estimate
    );
    println!(
        "criterion 2: PASS  Trop = +-log2, max |Re| = {worst:.2e}, estimate within {:.2e}",
        (est.delta_estimate - ln2).abs()
    );
}

#[test]
fn criterion_03_sparse_trinomial_real_part_clusters() {
    let g = ExpSum::univariate(&[
        (5.0, 0.0, 0.0),
        (1.0, 0.0, 0.0),
        (0.0, 0.0, 0.0),
    ])
    .unwrap();
    let points = trop_points_1d(&g).unwrap().values();
    assert_eq!(points.len(), 1);
    assert!(points[0].abs() <= 1e-9);

    let (lo, hi) = root_interval(&g).unwrap();
    let rect = Rectangle::new(lo, hi, 0.0, TAU * 3.0).unwrap();
    let roots = isolate_roots(&g, &rect).unwrap();
    let total: usize = roots.iter().map(|r| r.multiplicity).sum();

    let mut res: Vec<f64> = roots.iter().map(|r| r.re).collect();
    res.sort_by(f64::total_cmp);
    let mut distinct = 1;
    for pair in res.windows(2) {
        if pair[1] - pair[0] > 1e-6 {
            distinct += 1;
        }
    }
    assert_eq!(distinct, 3, "real parts {res:?}");

    let iv = wv_bound(&g, 0.0, TAU * 3.0).unwrap();
    assert!(iv.contains(total), "count {total} outside [{}, {}]", iv.lower(), iv.upper());
    println!("criterion 3: PASS  1 tropical point, 3 distinct real parts, count {total}");
}

fn suite_criterion(number: u32, suite: &str, budget_secs: Option<f64>) {
    let start = Instant::now();
    let reports = run_suite(suite, SEED).unwrap();
    let rep = &reports[0];
    let elapsed = start.elapsed().as_secs_f64();
    assert_eq!(
        rep.failures, 0,
        "criterion {number}: {} violation(s), first: {:?}",
        rep.failures,
        rep.violations.first()
    );
    if let Some(budget) = budget_secs {
        assert!(elapsed < budget, "took {elapsed:.1} s, budget {budget} s");
    }
    println!(
        "criterion {number}: PASS  {} checks over {} cases, 0 violations, {elapsed:.2} s",
        rep.checks, rep.cases
    );
}

#[test]
fn criterion_04_randomized_univariate_suite() {
    suite_criterion(4, "univariate", Some(300.0));
}

#[test]
fn criterion_05_domination_beyond_the_strip() {
    suite_criterion(5, "domination", None);
}

#[test]
fn criterion_06_simplex_triangle_inequality() {
    suite_criterion(6, "simplex", None);
}

#[test]
fn criterion_07_functoriality_under_affine_maps() {
    suite_criterion(7, "functoriality", None);
}

#[test]
fn criterion_08_projection_sampler_spacing_and_draws() {
    suite_criterion(8, "projection", None);
}

#[test]
fn criterion_09_redundancy_removal_equivalence() {
    suite_criterion(9, "lp", None);
}

#[test]
fn criterion_10_winding_additivity_and_residuals() {
    suite_criterion(10, "winding", None);
}
