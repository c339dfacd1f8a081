//! Seeded self-checks behind `exptrop verify`. Each suite draws reproducible
//! random instances, exercises one layer of the crate against facts that can
//! be computed independently (oracle root counts, direct evaluation, set
//! identities), and reports every violation it finds. The same seed always
//! replays the same instances.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::archnewt::{lift, lower_hull_1d};
use crate::expsum::{minimal_spacing, transform, ExpSum};
use crate::lp::{remove_redundant, LinearSystem};
use crate::metric::{bounds, nearest_trop_point, sample_projection, sampled_hausdorff, witness_family};
use crate::roots::{
    isolate_roots, strip_count_bounds, winding_count_detailed, wv_bound, Rectangle,
};
use crate::tropical::{
    active_terms, cell_query, clusters_1d, root_free_strips, root_interval, skeleton_2d,
    trop_points_1d, trop_vertices,
};
use crate::{Error, Result};

pub const SUITE_NAMES: &[&str] = &[
    "univariate",
    "domination",
    "simplex",
    "functoriality",
    "projection",
    "lp",
    "winding",
    "metric",
    "all",
];

/// Outcome of one suite: how many instances ran, how many individual checks
/// were made, and the violations (list truncated, count exact).
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub checks: usize,
    pub failures: usize,
    pub violations: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Run the named suite (or every suite for "all") with the given seed.
pub fn run_suite(name: &str, seed: u64) -> Result<Vec<SuiteReport>> {
    let single = |r: SuiteReport| Ok(vec![r]);
    match name {
        "univariate" => single(suite_univariate(seed)?),
        "domination" => single(suite_domination(seed)?),
        "simplex" => single(suite_simplex(seed)?),
        "functoriality" => single(suite_functoriality(seed)?),
        "projection" => single(suite_projection(seed)?),
        "lp" => single(suite_lp(seed)?),
        "winding" => single(suite_winding(seed)?),
        "metric" => single(suite_metric(seed)?),
        "all" => Ok(vec![
            suite_univariate(seed)?,
            suite_domination(seed)?,
            suite_simplex(seed)?,
            suite_functoriality(seed)?,
            suite_projection(seed)?,
            suite_lp(seed)?,
            suite_winding(seed)?,
            suite_metric(seed)?,
        ]),
        other => Err(Error::InvalidInput(format!(
            "unknown suite {other:?}; expected one of {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}

const MAX_RECORDED: usize = 64;

struct Checker {
    checks: usize,
    failures: usize,
    violations: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            checks: 0,
            failures: 0,
            violations: Vec::new(),
        }
    }

    fn check<F: FnOnce() -> String>(&mut self, ok: bool, msg: F) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.violations.len() < MAX_RECORDED {
                self.violations.push(msg());
            }
        }
    }

    fn finish(self, suite: &str, seed: u64, cases: usize) -> SuiteReport {
        SuiteReport {
            suite: suite.to_string(),
            seed,
            cases,
            checks: self.checks,
            failures: self.failures,
            violations: self.violations,
        }
    }
}

fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(case.wrapping_mul(0x9E3779B97F4A7C15)))
}

/// Random univariate instance: t in 2..=7, consecutive frequency gaps in
/// [0.5, 2.0] so delta >= 0.5, Re b in [-3, 3], Im b in [0, 2 pi).
fn random_univariate(rng: &mut ChaCha8Rng) -> ExpSum {
    let t = rng.random_range(2usize..=7);
    let mut freq = 0.0;
    let mut terms = Vec::with_capacity(t);
    for j in 0..t {
        if j > 0 {
            freq += rng.random_range(0.5..2.0);
        }
        terms.push((
            freq,
            rng.random_range(-3.0..3.0),
            rng.random_range(0.0..TAU),
        ));
    }
    ExpSum::univariate(&terms).expect("generated instance is valid")
}

/// Random bivariate instance: t frequencies in [-2, 2]^2 kept at pairwise
/// distance >= 0.5 by rejection.
fn random_bivariate(rng: &mut ChaCha8Rng, t: usize) -> ExpSum {
    let mut freqs: Vec<[f64; 2]> = Vec::with_capacity(t);
    while freqs.len() < t {
        let p = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
        if freqs
            .iter()
            .all(|q| (p[0] - q[0]).hypot(p[1] - q[1]) >= 0.5)
        {
            freqs.push(p);
        }
    }
    let terms = freqs
        .into_iter()
        .map(|a| {
            crate::expsum::Term::new(
                a.to_vec(),
                rng.random_range(-3.0..3.0),
                rng.random_range(0.0..TAU),
            )
        })
        .collect();
    ExpSum::new(2, terms).expect("generated instance is valid")
}

/// The seven-term sum with binomial coefficients and frequencies on the unit
/// circle; its spacing is 2 sin(pi/7).
pub fn circle_seven() -> ExpSum {
    let binom = [1.0f64, 7.0, 21.0, 35.0, 35.0, 21.0, 7.0];
    let terms = (0..7)
        .map(|j| {
            let phi = TAU * j as f64 / 7.0;
            crate::expsum::Term::new(vec![phi.cos(), phi.sin()], binom[j].ln(), 0.0)
        })
        .collect();
    ExpSum::new(2, terms).expect("circle instance is valid")
}

/// Root oracle against every univariate strip statement at once: distance of
/// real parts to the tropical points, containment in the root interval,
/// emptiness of root-free strips, the strip count interval, the per-cluster
/// joint deviation bound, existence of a root near every tropical point, and
/// the nearest-point distance cap.
fn suite_univariate(seed: u64) -> Result<SuiteReport> {
    const CASES: u64 = 100;
    let mut ck = Checker::new();
    for case in 0..CASES {
        let mut rng = case_rng(seed, case);
        let g = random_univariate(&mut rng);
        let t = g.t();
        let delta = minimal_spacing(&g)?.delta;
        let eps = 3f64.ln() / delta;
        let tvals = trop_points_1d(&g)?.values();
        let (lo, hi) = root_interval(&g)?;
        let requested = Rectangle::new(lo, hi, 0.0, 2.0 * TAU)?;

        let top = winding_count_detailed(&g, &requested)?;
        let eff = top.rect;
        let roots = isolate_roots(&g, &eff)?;
        let total: usize = roots.iter().map(|r| r.multiplicity).sum();

        let near_cap = ((t - 1) as f64).ln() / delta;
        for r in &roots {
            let d = tvals
                .iter()
                .map(|w| (r.re - w).abs())
                .fold(f64::INFINITY, f64::min);
            ck.check(d <= eps + 1e-9, || {
                format!("case {case}: root Re {:.6} is {d:.6} from Trop, cap {eps:.6}", r.re)
            });
            ck.check(r.re > lo - 1e-9 && r.re < hi + 1e-9, || {
                format!("case {case}: root Re {:.6} outside ({lo:.6}, {hi:.6})", r.re)
            });
            let (_, nd) = nearest_trop_point(&g, &[r.re])?;
            ck.check(nd <= near_cap + 1e-9, || {
                format!(
                    "case {case}: nearest tropical point {nd:.6} from root Re {:.6}, cap {near_cap:.6}",
                    r.re
                )
            });
        }

        for (s1, s2) in root_free_strips(&g)? {
            for r in &roots {
                ck.check(!(r.re >= s1 + 1e-9 && r.re <= s2 - 1e-9), || {
                    format!("case {case}: root Re {:.6} inside root-free [{s1:.6}, {s2:.6}]", r.re)
                });
            }
        }

        let wv = wv_bound(&g, eff.u, eff.v)?;
        ck.check(wv.contains(total), || {
            format!(
                "case {case}: oracle count {total} outside [{}, {}] (center {:.3}, radius {:.3})",
                wv.lower(),
                wv.upper(),
                wv.center,
                wv.radius
            )
        });

        let sc = strip_count_bounds(&g, eff.u, eff.v)?;
        let clusters = clusters_1d(&g)?;
        let mut deviation = 0.0;
        for (cl, iv) in &sc.per_cluster {
            let rc: usize = roots
                .iter()
                .filter(|r| r.re >= cl.w_min - eps - 1e-12 && r.re <= cl.w_max + eps + 1e-12)
                .map(|r| r.multiplicity)
                .sum();
            deviation += (rc as f64 - iv.center).abs();
        }
        let joint_cap = sc.budget + clusters.components.len() as f64;
        ck.check(deviation <= joint_cap + 1e-9, || {
            format!("case {case}: joint cluster deviation {deviation:.6} over {joint_cap:.6}")
        });

        for cl in &clusters.components {
            let rad = (2 * cl.count - 1) as f64 * eps + 1e-9;
            let members = tvals
                .iter()
                .copied()
                .filter(|w| *w >= cl.w_min - 1e-12 && *w <= cl.w_max + 1e-12);
            let mut tall_roots: Option<Vec<crate::roots::Root>> = None;
            for w in members {
                let mut ok = roots.iter().any(|r| (r.re - w).abs() <= rad);
                if !ok {
                    // The base strip can be too short to force a root over a
                    // narrow cluster; retry over a strip tall enough that the
                    // count interval over this cluster has a positive floor.
                    if tall_roots.is_none() {
                        let h = (TAU * (t as f64 + 1.0) / cl.span).max(eff.v - eff.u);
                        let tall =
                            Rectangle::new(cl.w_min - eps, cl.w_max + eps, eff.u, eff.u + h)?;
                        tall_roots = Some(isolate_roots(&g, &tall)?);
                    }
                    ok = tall_roots
                        .as_ref()
                        .unwrap()
                        .iter()
                        .any(|r| (r.re - w).abs() <= rad);
                }
                ck.check(ok, || {
                    format!("case {case}: no root within {rad:.6} of tropical point {w:.6}")
                });
            }
        }
    }
    Ok(ck.finish("univariate", seed, CASES as usize))
}

/// Domination beyond the strip boundary, checked by direct evaluation: past
/// each hull slope w by log(N+1)/delta_ell, the terms left of the edge sum to
/// strictly less than 1/N of the dominant term's modulus.
fn suite_domination(seed: u64) -> Result<SuiteReport> {
    const CASES: u64 = 100;
    const POINTS: usize = 100;
    let mut ck = Checker::new();
    for case in 0..CASES {
        let mut rng = case_rng(seed, case);
        let g = random_univariate(&mut rng);
        let sorted = g.sorted_by_freq()?;
        let hull = lower_hull_1d(&lift(&g))?;
        for edge in &hull.edges {
            let rank = sorted
                .iter()
                .position(|&j| j == edge.right_index)
                .expect("hull vertex is a term");
            for n_param in [1u32, 2, 4] {
                let rad = crate::roots::domination_radius(&g, rank, n_param)?;
                for _ in 0..POINTS {
                    let re = edge.slope + rad + rng.random_range(0.0..3.0);
                    let im = rng.random_range(0.0..TAU);
                    let log_dom = g.freq1(sorted[rank]) * re + g.beta(sorted[rank]);
                    let mut peak = f64::NEG_INFINITY;
                    for &j in &sorted[..rank] {
                        peak = peak.max(g.freq1(j) * re + g.beta(j));
                    }
                    let s: Complex64 = sorted[..rank]
                        .iter()
                        .map(|&j| {
                            Complex64::new(
                                g.freq1(j) * re + g.beta(j) - peak,
                                g.freq1(j) * im + g.b(j).im,
                            )
                            .exp()
                        })
                        .sum();
                    let log_partial = if s.norm() == 0.0 {
                        f64::NEG_INFINITY
                    } else {
                        peak + s.norm().ln()
                    };
                    let cap = log_dom - (n_param as f64).ln();
                    ck.check(log_partial < cap, || {
                        format!(
                            "case {case}: partial sum log {log_partial:.9} not below {cap:.9} \
                             at z = {re:.4} + {im:.4}i past slope {:.4} (N = {n_param})",
                            edge.slope
                        )
                    });
                }
            }
        }
    }
    Ok(ck.finish("domination", seed, CASES as usize))
}

fn canon_rows(sys: &LinearSystem) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = sys
        .m
        .iter()
        .zip(&sys.c)
        .map(|(m, &c)| {
            let norm = m.iter().map(|x| x * x).sum::<f64>().sqrt();
            m.iter()
                .map(|x| x / norm)
                .chain(std::iter::once(c / norm))
                .map(|x| (x * 1e6).round() as i64)
                .collect()
        })
        .collect();
    rows.sort();
    rows
}

/// The tropical line of 1 - e^{z1} - e^{z2}: sampled skeleton points satisfy
/// the closed triangle inequality on the moduli (1, e^{w1}, e^{w2}), and the
/// cell systems at one interior point per stratum come out as expected.
fn suite_simplex(seed: u64) -> Result<SuiteReport> {
    const SAMPLES: usize = 1000;
    let mut ck = Checker::new();
    let mut rng = case_rng(seed, 0);
    let g = ExpSum::new(
        2,
        vec![
            crate::expsum::Term::new(vec![0.0, 0.0], 0.0, 0.0),
            crate::expsum::Term::new(vec![1.0, 0.0], 0.0, std::f64::consts::PI),
            crate::expsum::Term::new(vec![0.0, 1.0], 0.0, std::f64::consts::PI),
        ],
    )?;

    let segments = skeleton_2d(&g, (-8.0, 8.0), (-8.0, 8.0))?;
    let total_len: f64 = segments.iter().map(|s| s.len()).sum();
    ck.check(!segments.is_empty() && total_len > 0.0, || {
        "skeleton of the tropical line is empty".to_string()
    });
    let mut placed = 0usize;
    'outer: loop {
        for seg in &segments {
            let share = ((SAMPLES as f64) * seg.len() / total_len).ceil() as usize;
            for _ in 0..share.max(1) {
                if placed >= SAMPLES {
                    break 'outer;
                }
                let t = rng.random_range(0.0..=1.0);
                let ([x1, y1], [x2, y2]) = seg.endpoints();
                let w = [x1 + t * (x2 - x1), y1 + t * (y2 - y1)];
                ck.check(active_terms(&g, &w).len() >= 2, || {
                    format!("sample ({:.6}, {:.6}) is not a tropical point", w[0], w[1])
                });
                let sides = [1.0, w[0].exp(), w[1].exp()];
                let sum: f64 = sides.iter().sum();
                let longest = sides.iter().cloned().fold(0.0, f64::max);
                ck.check(longest <= sum - longest + 1e-9 * sum, || {
                    format!(
                        "triangle inequality fails at ({:.6}, {:.6}): sides {:.6e} {:.6e} {:.6e}",
                        w[0], w[1], sides[0], sides[1], sides[2]
                    )
                });
                placed += 1;
            }
        }
    }

    let expect_interior: Vec<Vec<i64>> = vec![vec![0, 1_000_000, 0], vec![1_000_000, 0, 0]];
    let expect_edge: Vec<Vec<i64>> = vec![
        vec![-707_107, 707_107, 0],
        vec![0, -1_000_000, 0],
        vec![707_107, -707_107, 0],
    ];
    let expect_vertex: Vec<Vec<i64>> = vec![
        vec![-1_000_000, 0, 0],
        vec![0, -1_000_000, 0],
        vec![0, 1_000_000, 0],
        vec![1_000_000, 0, 0],
    ];
    for (label, point, expect) in [
        ("full-dimensional cell", [-1.0, -2.0], &expect_interior),
        ("diagonal edge", [2.0, 2.0], &expect_edge),
        ("vertex", [0.0, 0.0], &expect_vertex),
    ] {
        let cell = cell_query(&g, &point)?;
        let got = canon_rows(&cell.system());
        ck.check(&got == expect, || {
            format!("cell at {label} {point:?}: got rows {got:?}, expected {expect:?}")
        });
    }
    Ok(ck.finish("simplex", seed, SAMPLES + 3))
}

/// Tropical sets commute with affine changes of variables: compare the
/// transformed tropical points (1D) or vertex sets (2D) against the original
/// ones mapped through the inverse shift and scaling.
fn suite_functoriality(seed: u64) -> Result<SuiteReport> {
    const CASES: u64 = 50;
    let mut ck = Checker::new();
    for case in 0..CASES {
        let mut rng = case_rng(seed, case);
        let alpha = Complex64::from_polar(
            rng.random_range(0.3..3.0),
            rng.random_range(0.0..TAU),
        );
        if case % 2 == 0 {
            let g = random_univariate(&mut rng);
            let scale = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let beta = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let shift = rng.random_range(-1.0..1.0);
            let g2 = transform(&g, alpha, &[shift], &[beta], Some(&[vec![scale]]))?;
            let before = trop_points_1d(&g)?.values();
            let after = trop_points_1d(&g2)?.values();
            let mut expect: Vec<f64> = before.iter().map(|w| (w - beta.re) / scale).collect();
            expect.sort_by(f64::total_cmp);
            ck.check(after.len() == expect.len(), || {
                format!(
                    "case {case}: {} tropical points after transform, expected {}",
                    after.len(),
                    expect.len()
                )
            });
            for (a, e) in after.iter().zip(&expect) {
                ck.check((a - e).abs() <= 1e-8 * (1.0 + e.abs()), || {
                    format!("case {case}: tropical point {a:.10} vs expected {e:.10}")
                });
            }
        } else {
            let t = rng.random_range(3usize..=6);
            let g = random_bivariate(&mut rng, t);
            let m1 = rng.random_range(0.5..2.0);
            let m2 = rng.random_range(0.5..2.0);
            let beta = [
                Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
                Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)),
            ];
            let g2 = transform(
                &g,
                alpha,
                &[0.0, 0.0],
                &beta,
                Some(&[vec![m1, 0.0], vec![0.0, m2]]),
            )?;
            let before = trop_vertices(&g)?;
            let after = trop_vertices(&g2)?;
            let mut expect: Vec<Vec<f64>> = before
                .iter()
                .map(|v| vec![(v[0] - beta[0].re) / m1, (v[1] - beta[1].re) / m2])
                .collect();
            let lex = |a: &Vec<f64>, b: &Vec<f64>| {
                a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1]))
            };
            expect.sort_by(lex);
            let mut after = after;
            after.sort_by(lex);
            ck.check(after.len() == expect.len(), || {
                format!(
                    "case {case}: {} vertices after transform, expected {}",
                    after.len(),
                    expect.len()
                )
            });
            for (a, e) in after.iter().zip(&expect) {
                let d = (a[0] - e[0]).hypot(a[1] - e[1]);
                let s = 1.0 + e[0].hypot(e[1]);
                ck.check(d <= 1e-8 * s, || {
                    format!(
                        "case {case}: vertex ({:.10}, {:.10}) vs expected ({:.10}, {:.10})",
                        a[0], a[1], e[0], e[1]
                    )
                });
            }
        }
    }
    Ok(ck.finish("functoriality", seed, CASES as usize))
}

/// Projection sampler on the circle instance: every returned direction is a
/// unit vector whose projected frequency spacing clears the threshold, and
/// the rejection loop almost always succeeds within a couple of draws.
fn suite_projection(seed: u64) -> Result<SuiteReport> {
    const CALLS: u64 = 1000;
    let mut ck = Checker::new();
    let g = circle_seven();
    let delta = minimal_spacing(&g)?.delta;
    let floor = delta / ((2.0 * std::f64::consts::E).sqrt() * 49.0);
    let mut draws: Vec<u32> = Vec::with_capacity(CALLS as usize);
    for case in 0..CALLS {
        let p = sample_projection(&g, seed.wrapping_add(case.wrapping_mul(0x9E3779B97F4A7C15)))?;
        let norm: f64 = p.theta.iter().map(|x| x * x).sum::<f64>().sqrt();
        ck.check((norm - 1.0).abs() <= 1e-9, || {
            format!("call {case}: direction norm {norm:.12} is not 1")
        });
        let mut spacing = f64::INFINITY;
        for i in 0..g.t() {
            for j in i + 1..g.t() {
                let d: f64 = p
                    .theta
                    .iter()
                    .zip(g.freq(i).iter().zip(g.freq(j)))
                    .map(|(th, (ai, aj))| th * (ai - aj))
                    .sum();
                spacing = spacing.min(d.abs());
            }
        }
        ck.check(spacing >= p.threshold - 1e-12, || {
            format!("call {case}: projected spacing {spacing:.9e} below threshold {:.9e}", p.threshold)
        });
        ck.check(spacing >= floor - 1e-12, || {
            format!("call {case}: projected spacing {spacing:.9e} below floor {floor:.9e}")
        });
        draws.push(p.draws);
    }
    draws.sort_unstable();
    let median = 0.5 * (draws[draws.len() / 2 - 1] as f64 + draws[draws.len() / 2] as f64);
    ck.check(median <= 2.0, || {
        format!("median rejection draws {median:.1} exceeds 2")
    });
    Ok(ck.finish("projection", seed, CALLS as usize))
}

/// Redundancy removal on random feasible systems: removing twice changes
/// nothing, and the trimmed system carves out the same region as the full
/// one on a cloud of probe points.
fn suite_lp(seed: u64) -> Result<SuiteReport> {
    const CASES: u64 = 100;
    const PROBES: usize = 1000;
    let mut ck = Checker::new();
    for case in 0..CASES {
        let mut rng = case_rng(seed, case);
        let n = rng.random_range(1usize..=3);
        let rows = rng.random_range(5usize..=200);
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut m = Vec::with_capacity(rows);
        let mut c = Vec::with_capacity(rows);
        while m.len() < rows {
            let row: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm: f64 = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 0.1 {
                continue;
            }
            let dot: f64 = row.iter().zip(&x0).map(|(a, b)| a * b).sum();
            c.push(dot + rng.random_range(0.1..2.0));
            m.push(row);
        }
        let sys = LinearSystem::new(m, c)?;
        let trimmed = remove_redundant(&sys)?;
        let again = remove_redundant(&trimmed)?;
        ck.check(
            again.m == trimmed.m && again.c == trimmed.c,
            || format!("case {case}: second removal changed the system"),
        );
        ck.check(trimmed.nrows() <= sys.nrows(), || {
            format!("case {case}: removal grew the system")
        });
        for _ in 0..PROBES {
            let p: Vec<f64> = x0
                .iter()
                .map(|&x| x + rng.random_range(-3.0..3.0))
                .collect();
            ck.check(sys.contains(&p) == trimmed.contains(&p), || {
                format!("case {case}: probe {p:?} classified differently after removal")
            });
        }
    }
    Ok(ck.finish("lp", seed, CASES as usize))
}

/// Winding oracle self-consistency: a rectangle's count equals the sum over
/// its four quadrants, and every accepted integral sits close to its integer.
fn suite_winding(seed: u64) -> Result<SuiteReport> {
    const CASES: u64 = 50;
    let mut ck = Checker::new();
    for case in 0..CASES {
        let mut rng = case_rng(seed, case);
        let mut done = false;
        for _attempt in 0..8 {
            let g = random_univariate(&mut rng);
            let (lo, hi) = root_interval(&g)?;
            let x1 = lo + rng.random_range(0.0..0.5) * (hi - lo);
            let x2 = x1 + rng.random_range(0.3..1.0) * (hi - x1).max(0.5);
            let u = rng.random_range(0.0..TAU);
            let v = u + rng.random_range(std::f64::consts::PI..3.0 * std::f64::consts::PI);
            let rect = Rectangle::new(x1, x2, u, v)?;
            let parent = match winding_count_detailed(&g, &rect) {
                Ok(rep) if rep.jitter == 0.0 => rep,
                Ok(_) | Err(Error::RootOnBoundary(_)) => continue,
                Err(e) => return Err(e),
            };
            let (cx, cy) = (0.5 * (x1 + x2), 0.5 * (u + v));
            let quadrants = [
                Rectangle::new(x1, cx, u, cy)?,
                Rectangle::new(cx, x2, u, cy)?,
                Rectangle::new(x1, cx, cy, v)?,
                Rectangle::new(cx, x2, cy, v)?,
            ];
            let mut reports = Vec::with_capacity(4);
            let mut clean = true;
            for q in &quadrants {
                match winding_count_detailed(&g, q) {
                    Ok(rep) if rep.jitter == 0.0 => reports.push(rep),
                    Ok(_) | Err(Error::RootOnBoundary(_)) => {
                        clean = false;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            if !clean {
                continue;
            }
            let child_sum: usize = reports.iter().map(|r| r.count).sum();
            ck.check(child_sum == parent.count, || {
                format!(
                    "case {case}: quadrant counts sum to {child_sum}, parent has {}",
                    parent.count
                )
            });
            for rep in reports.iter().chain(std::iter::once(&parent)) {
                ck.check(rep.residual < 0.05, || {
                    format!("case {case}: accepted integral residual {:.4} >= 0.05", rep.residual)
                });
            }
            done = true;
            break;
        }
        ck.check(done, || {
            format!("case {case}: no jitter-free rectangle found in 8 attempts")
        });
    }
    Ok(ck.finish("winding", seed, CASES as usize))
}

/// Distance layer: the nearest-point construction lands on the tropical set
/// and is exact in 1D, sampled projections keep their spacing, and the
/// witness family realizes its advertised Hausdorff gap.
fn suite_metric(seed: u64) -> Result<SuiteReport> {
    const CASES: u64 = 30;
    let mut ck = Checker::new();
    for case in 0..CASES {
        let mut rng = case_rng(seed, case);
        if case < 12 {
            let g = random_univariate(&mut rng);
            let rep = bounds(&g)?;
            ck.check(
                rep.bound_1a.is_finite() && rep.bound_1b.is_finite() && rep.bound_1a <= rep.bound_1b,
                || format!("case {case}: bounds out of order: {rep:?}"),
            );
            let tvals = trop_points_1d(&g)?.values();
            let (lo, hi) = root_interval(&g)?;
            let rho = rng.random_range(lo - 2.0..hi + 2.0);
            let (point, dist) = nearest_trop_point(&g, &[rho])?;
            let true_dist = tvals
                .iter()
                .map(|w| (rho - w).abs())
                .fold(f64::INFINITY, f64::min);
            ck.check((dist - true_dist).abs() <= 1e-9 * (1.0 + true_dist), || {
                format!("case {case}: nearest distance {dist:.9} vs direct minimum {true_dist:.9}")
            });
            let on_trop = tvals.iter().any(|w| (point[0] - w).abs() <= 1e-9);
            ck.check(on_trop, || {
                format!("case {case}: nearest point {:.9} is not a tropical point", point[0])
            });
        } else if case < 24 {
            let t = rng.random_range(3usize..=6);
            let g = random_bivariate(&mut rng, t);
            let rho = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let (point, dist) = nearest_trop_point(&g, &rho)?;
            ck.check(active_terms(&g, &point).len() >= 2, || {
                format!(
                    "case {case}: nearest point ({:.6}, {:.6}) is not a tie point",
                    point[0], point[1]
                )
            });
            let direct = (rho[0] - point[0]).hypot(rho[1] - point[1]);
            ck.check((dist - direct).abs() <= 1e-9 * (1.0 + direct), || {
                format!("case {case}: reported distance {dist:.9} vs |rho - point| {direct:.9}")
            });
            let p = sample_projection(&g, seed.wrapping_add(case))?;
            let mut spacing = f64::INFINITY;
            for i in 0..g.t() {
                for j in i + 1..g.t() {
                    let d: f64 = p
                        .theta
                        .iter()
                        .zip(g.freq(i).iter().zip(g.freq(j)))
                        .map(|(th, (ai, aj))| th * (ai - aj))
                        .sum();
                    spacing = spacing.min(d.abs());
                }
            }
            ck.check(spacing >= p.threshold - 1e-12, || {
                format!("case {case}: projected spacing {spacing:.9e} below threshold {:.9e}", p.threshold)
            });
        } else {
            let t = 3 + (case as usize - 24) % 4;
            let delta = if (case - 24) < 4 { 1.0 } else { 0.7 };
            let w = witness_family(t, 1, delta)?;
            let est = sampled_hausdorff(&w, 12, seed.wrapping_add(case))?;
            let target = ((t - 1) as f64).ln() / delta;
            ck.check((est.delta_estimate - target).abs() <= 2e-3 * (1.0 + target), || {
                format!(
                    "case {case}: witness t = {t}, delta = {delta}: estimate {:.6} vs gap {target:.6}",
                    est.delta_estimate
                )
            });
            let rep = bounds(&w)?;
            ck.check(est.delta_estimate <= rep.bound_1b + 1e-9, || {
                format!(
                    "case {case}: estimate {:.6} exceeds coarse bound {:.6}",
                    est.delta_estimate, rep.bound_1b
                )
            });
            if let Some(lower) = rep.lower_witness {
                ck.check(est.delta_estimate >= lower - 2e-3 * (1.0 + lower), || {
                    format!(
                        "case {case}: estimate {:.6} below witness floor {lower:.6}",
                        est.delta_estimate
                    )
                });
            }
        }
    }
    Ok(ck.finish("metric", seed, CASES as usize))
}
