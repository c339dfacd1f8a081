//! Property tests over random instances: structural identities that must
//! hold for every input, independent of any particular example.

use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::TAU;

use exptrop::archnewt::{lift, lower_hull_1d};
use exptrop::expsum::{
    affine_dimension, evaluate, minimal_spacing, slice_to_line, transform, Term,
};
use exptrop::lp::{enumerate_vertices, remove_redundant, solve, LinearSystem, LpOutcome};
use exptrop::metric::{nearest_trop_point, sample_projection};
use exptrop::roots::{isolate_roots, winding_count_detailed, wv_bound};
use exptrop::tropical::{
    active_terms, cell_query, clusters_1d, root_interval, trop_points_1d,
};
use exptrop::{ExpSum, Rectangle};

fn univariate(max_t: usize) -> impl Strategy<Value = ExpSum> {
    (2..=max_t).prop_flat_map(|t| {
        (
            prop::collection::vec(0.5..2.0f64, t - 1),
            prop::collection::vec(-3.0..3.0f64, t),
            prop::collection::vec(0.0..TAU, t),
        )
            .prop_map(|(gaps, res, ims)| {
                let mut freq = 0.0;
                let terms: Vec<(f64, f64, f64)> = res
                    .iter()
                    .zip(&ims)
                    .enumerate()
                    .map(|(j, (&re, &im))| {
                        if j > 0 {
                            freq += gaps[j - 1];
                        }
                        (freq, re, im)
                    })
                    .collect();
                ExpSum::univariate(&terms).unwrap()
            })
    })
}

fn bivariate(max_t: usize) -> impl Strategy<Value = ExpSum> {
    (3..=max_t).prop_flat_map(|t| {
        (
            prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 4 * t),
            prop::collection::vec(-3.0..3.0f64, t),
            prop::collection::vec(0.0..TAU, t),
        )
            .prop_filter_map("needs t spread-out frequencies", move |(cands, res, ims)| {
                let mut freqs: Vec<(f64, f64)> = Vec::new();
                for p in cands {
                    if freqs
                        .iter()
                        .all(|q| (p.0 - q.0).hypot(p.1 - q.1) >= 0.5)
                    {
                        freqs.push(p);
                        if freqs.len() == t {
                            break;
                        }
                    }
                }
                if freqs.len() < t {
                    return None;
                }
                let terms = freqs
                    .into_iter()
                    .zip(res.iter().zip(&ims))
                    .map(|((x, y), (&re, &im))| Term::new(vec![x, y], re, im))
                    .collect();
                Some(ExpSum::new(2, terms).unwrap())
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn no_lifted_point_below_the_hull(g in univariate(10)) {
        let p = lift(&g);
        let hull = lower_hull_1d(&p).unwrap();
        for edge in &hull.edges {
            let (xl, hl) = (p.points[edge.left_index].0[0], p.points[edge.left_index].1);
            for (a, h) in &p.points {
                let line = hl + edge.slope * (a[0] - xl);
                prop_assert!(*h >= line - 1e-9 * (1.0 + h.abs() + line.abs()));
            }
        }
    }

    #[test]
    fn shear_shifts_every_slope(g in univariate(7), c in -2.0..2.0f64, c0 in -2.0..2.0f64) {
        let sheared = ExpSum::univariate(
            &g.terms()
                .iter()
                .map(|t| (t.a[0], t.b_re + c * t.a[0] + c0, t.b_im))
                .collect::<Vec<_>>(),
        ).unwrap();
        let s0 = trop_points_1d(&g).unwrap().values();
        let s1 = trop_points_1d(&sheared).unwrap().values();
        prop_assert_eq!(s0.len(), s1.len());
        for (a, b) in s0.iter().zip(&s1) {
            prop_assert!((a - c - b).abs() <= 1e-9 * (1.0 + a.abs() + c.abs()));
        }
    }

    #[test]
    fn spacing_ignores_coefficient_maps(g in univariate(7), re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let moved = transform(
            &g,
            Complex64::new(1.3, -0.4),
            &[0.0],
            &[Complex64::new(re, im)],
            None,
        ).unwrap();
        let d0 = minimal_spacing(&g).unwrap().delta;
        let d1 = minimal_spacing(&moved).unwrap().delta;
        prop_assert!((d0 - d1).abs() <= 1e-12 * (1.0 + d0));
    }

    #[test]
    fn slicing_commutes_with_evaluation(g in bivariate(5), s_re in -1.0..1.0f64, s_im in -1.0..1.0f64, w0 in -1.0..1.0f64, w1 in -1.0..1.0f64, ang in 0.0..TAU) {
        let theta = [ang.cos(), ang.sin()];
        let w = [w0, w1];
        let slice = match slice_to_line(&g, &w, &theta) {
            Ok(s) => s,
            Err(_) => return Ok(()),
        };
        let s = Complex64::new(s_re, s_im);
        let wperp0 = w[0] - (w[0] * theta[0] + w[1] * theta[1]) * theta[0];
        let wperp1 = w[1] - (w[0] * theta[0] + w[1] * theta[1]) * theta[1];
        let z = [
            s * theta[0] + wperp0,
            s * theta[1] + wperp1,
        ];
        let direct = evaluate(&g, &z).unwrap();
        let sliced = evaluate(&slice, &[s]).unwrap();
        prop_assert!((direct - sliced).norm() <= 1e-10 * (1.0 + direct.norm()));
    }

    #[test]
    fn affine_dimension_bounds(g in univariate(7), h in bivariate(6)) {
        prop_assert_eq!(affine_dimension(&ExpSum::univariate(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)]).unwrap()), 1);
        prop_assert!(affine_dimension(&g) <= g.t() - 1);
        prop_assert!(affine_dimension(&h) <= h.t() - 1);
    }

    #[test]
    fn translation_shifts_tropical_points(g in univariate(7), re in -2.0..2.0f64, im in -2.0..2.0f64) {
        let beta = Complex64::new(re, im);
        let moved = transform(&g, Complex64::new(1.0, 0.0), &[0.0], &[beta], None).unwrap();
        let s0 = trop_points_1d(&g).unwrap().values();
        let s1 = trop_points_1d(&moved).unwrap().values();
        prop_assert_eq!(s0.len(), s1.len());
        for (a, b) in s0.iter().zip(&s1) {
            prop_assert!((a - re - b).abs() <= 1e-9 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn dilation_scales_tropical_points(g in univariate(7), c in 0.5..3.0f64) {
        let scaled = transform(&g, Complex64::new(1.0, 0.0), &[0.0], &[Complex64::new(0.0, 0.0)], Some(&[vec![c]])).unwrap();
        let s0 = trop_points_1d(&g).unwrap().values();
        let s1 = trop_points_1d(&scaled).unwrap().values();
        prop_assert_eq!(s0.len(), s1.len());
        for (a, b) in s0.iter().zip(&s1) {
            prop_assert!((a / c - b).abs() <= 1e-9 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn cells_contain_their_query_point(g in bivariate(5), x in -4.0..4.0f64, y in -4.0..4.0f64) {
        let w = [x, y];
        let cell = cell_query(&g, &w).unwrap();
        let sys = cell.system();
        prop_assert!(sys.min_slack(&w) >= -1e-7);
        let original = cell.active_set.clone();
        if let Ok(vertices) = enumerate_vertices(&sys) {
            if let Some(v) = vertices.first() {
                let mid = [0.5 * (x + v.point[0]), 0.5 * (y + v.point[1])];
                let inner = cell_query(&g, &mid).unwrap();
                for j in &original {
                    let jv: f64 = g.freq(*j).iter().zip(&mid).map(|(a, b)| a * b).sum::<f64>() + g.beta(*j);
                    let best = (0..g.t())
                        .map(|k| g.freq(k).iter().zip(&mid).map(|(a, b)| a * b).sum::<f64>() + g.beta(k))
                        .fold(f64::NEG_INFINITY, f64::max);
                    prop_assert!(jv >= best - 1e-6 * (1.0 + best.abs()));
                    let _ = &inner;
                }
            }
        }
    }

    #[test]
    fn cluster_spans_telescope(g in univariate(10)) {
        let clusters = clusters_1d(&g).unwrap();
        let total: f64 = clusters.components.iter().map(|c| c.span).sum();
        let sorted = g.sorted_by_freq().unwrap();
        let full = g.freq1(*sorted.last().unwrap()) - g.freq1(sorted[0]);
        prop_assert!((total - full).abs() <= 1e-12 * (1.0 + full));
    }

    #[test]
    fn redundancy_removal_is_idempotent_and_equivalent(
        rows in prop::collection::vec((prop::collection::vec(-1.0..1.0f64, 2), 0.1..2.0f64), 4..40),
        probes in prop::collection::vec(prop::collection::vec(-4.0..4.0f64, 2), 100)
    ) {
        let m: Vec<Vec<f64>> = rows.iter().map(|(r, _)| r.clone()).collect();
        prop_assume!(m.iter().all(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt() > 0.1));
        let c: Vec<f64> = rows.iter().map(|(_, s)| *s).collect();
        let sys = LinearSystem::new(m, c).unwrap();
        let trimmed = remove_redundant(&sys).unwrap();
        let again = remove_redundant(&trimmed).unwrap();
        prop_assert_eq!(&again.m, &trimmed.m);
        for p in &probes {
            prop_assert_eq!(sys.contains(p), trimmed.contains(p));
        }
    }

    #[test]
    fn optimum_survives_row_permutation(
        rows in prop::collection::vec((prop::collection::vec(-1.0..1.0f64, 2), 0.1..2.0f64), 4..20),
        obj in prop::collection::vec(-1.0..1.0f64, 2),
        swap in (0usize..20, 0usize..20)
    ) {
        let m: Vec<Vec<f64>> = rows.iter().map(|(r, _)| r.clone()).collect();
        prop_assume!(m.iter().all(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt() > 0.1));
        let c: Vec<f64> = rows.iter().map(|(_, s)| *s).collect();
        let sys = LinearSystem::new(m.clone(), c.clone()).unwrap();
        let (i, j) = (swap.0 % rows.len(), swap.1 % rows.len());
        let mut m2 = m;
        let mut c2 = c;
        m2.swap(i, j);
        c2.swap(i, j);
        let sys2 = LinearSystem::new(m2, c2).unwrap();
        match (solve(&sys, &obj), solve(&sys2, &obj)) {
            (Ok(LpOutcome::Optimal { optimum: v1, .. }), Ok(LpOutcome::Optimal { optimum: v2, .. })) => {
                prop_assert!((v1 - v2).abs() <= 1e-8 * (1.0 + v1.abs()));
            }
            (Ok(LpOutcome::Unbounded), Ok(LpOutcome::Unbounded)) => {}
            (a, b) => prop_assert!(false, "outcomes diverge: {a:?} vs {b:?}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn winding_counts_add_over_quadrants(g in univariate(5), fx in 0.2..0.8f64, fy in 0.2..0.8f64) {
        let (lo, hi) = root_interval(&g).unwrap();
        let rect = Rectangle::new(lo, hi, 0.5, 0.5 + TAU).unwrap();
        let parent = match winding_count_detailed(&g, &rect) {
            Ok(rep) if rep.jitter == 0.0 => rep,
            _ => return Ok(()),
        };
        let cx = lo + fx * (hi - lo);
        let cy = 0.5 + fy * TAU;
        let quads = [
            Rectangle::new(lo, cx, 0.5, cy).unwrap(),
            Rectangle::new(cx, hi, 0.5, cy).unwrap(),
            Rectangle::new(lo, cx, cy, 0.5 + TAU).unwrap(),
            Rectangle::new(cx, hi, cy, 0.5 + TAU).unwrap(),
        ];
        let mut sum = 0usize;
        for q in &quads {
            match winding_count_detailed(&g, q) {
                Ok(rep) if rep.jitter == 0.0 => sum += rep.count,
                _ => return Ok(()),
            }
        }
        prop_assert_eq!(sum, parent.count);
    }

    #[test]
    fn isolated_roots_respect_the_tropical_strips(g in univariate(4)) {
        let (lo, hi) = root_interval(&g).unwrap();
        let rect = Rectangle::new(lo, hi, 0.0, TAU).unwrap();
        let roots = isolate_roots(&g, &rect).unwrap();
        let delta = minimal_spacing(&g).unwrap().delta;
        let cap = 3f64.ln() / delta;
        let tvals = trop_points_1d(&g).unwrap().values();
        let total: usize = roots.iter().map(|r| r.multiplicity).sum();
        for r in &roots {
            prop_assert!(r.re > lo - 1e-9 && r.re < hi + 1e-9);
            let d = tvals.iter().map(|w| (r.re - w).abs()).fold(f64::INFINITY, f64::min);
            prop_assert!(d <= cap + 1e-9);
        }
        let iv = wv_bound(&g, rect.u, rect.v).unwrap();
        prop_assert!(total <= iv.upper());
    }

    #[test]
    fn nearest_point_lands_on_a_tie(g in bivariate(5), x in -3.0..3.0f64, y in -3.0..3.0f64) {
        let (point, dist) = nearest_trop_point(&g, &[x, y]).unwrap();
        prop_assert!(active_terms(&g, &point).len() >= 2);
        let direct = (x - point[0]).hypot(y - point[1]);
        prop_assert!((dist - direct).abs() <= 1e-9 * (1.0 + direct));
    }

    #[test]
    fn projected_spacing_clears_its_threshold(g in bivariate(6), seed in 0u64..1000) {
        let p = sample_projection(&g, seed).unwrap();
        let mut spacing = f64::INFINITY;
        for i in 0..g.t() {
            for j in i + 1..g.t() {
                let d: f64 = p.theta.iter()
                    .zip(g.freq(i).iter().zip(g.freq(j)))
                    .map(|(th, (ai, aj))| th * (ai - aj))
                    .sum();
                spacing = spacing.min(d.abs());
            }
        }
        prop_assert!(spacing >= p.threshold - 1e-12);
    }
}
