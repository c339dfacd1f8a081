//! Hausdorff-distance machinery between Re(Z(g)) and Trop(g): closed-form
//! bound calculators, the constructive nearest-tropical-point map, random
//! spacing-preserving projections, desk-scale sampled Hausdorff estimation,
//! and the tightness witness family.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::expsum::{affine_dimension, minimal_spacing, slice_to_line, ExpSum, Term};
use crate::linalg;
use crate::roots::{isolate_roots, Rectangle};
use crate::tropical::{
    clusters_1d, distance_to_trop, root_interval, skeleton_2d, trop_points_1d, trop_vertices,
};
use crate::{Error, Result};

const MAX_PROJECTION_DRAWS: u32 = 64;

fn ln3() -> f64 {
    3.0f64.ln()
}

/// Upper and lower bounds on the Hausdorff distance between Re(Z(g)) and
/// Trop(g), all scaled by 1/delta. `bound_1a` applies to the directed
/// distance from Re(Z) to Trop in any dimension; `bound_1b` bounds the full
/// Hausdorff distance through the projection pipeline; `bound_uni` is the
/// sharper univariate two-sided constant (2s-1) log3/delta; `lower_witness`
/// is the log(t-n)/delta floor attained by the witness family at the same
/// parameters.
#[derive(Debug, Clone, Serialize)]
pub struct DistanceReport {
    pub bound_1a: f64,
    pub bound_1b: f64,
    pub bound_uni: Option<f64>,
    pub lower_witness: Option<f64>,
    pub d: usize,
    pub s: Option<usize>,
    pub delta: f64,
}

pub fn bounds(g: &ExpSum) -> Result<DistanceReport> {
    let delta = minimal_spacing(g)?.delta;
    let d = affine_dimension(g);
    let t = g.t() as f64;
    let bound_1a = (t - 1.0).ln() / delta;
    let bound_1b =
        (std::f64::consts::E * d as f64).sqrt() * t * t * (2.0 * t - 3.0) * ln3() / delta;
    let (bound_uni, s) = if g.n() == 1 {
        let s = clusters_1d(g)?.max_cardinality();
        (Some((2 * s - 1) as f64 * ln3() / delta), Some(s))
    } else {
        (None, None)
    };
    let lower_witness = if g.t() > g.n() {
        Some(((g.t() - g.n()) as f64).ln() / delta)
    } else {
        None
    };
    Ok(DistanceReport {
        bound_1a,
        bound_1b,
        bound_uni,
        lower_witness,
        d,
        s,
        delta,
    })
}

/// Project rho onto the nearest tie hyperplane of the dominant term: with
/// term 1 the argmax of v_j = a_j . rho + beta_j, the step to the hyperplane
/// {v_1 = v_i} is eta_i = lambda_i (a_i - a_1) with lambda_i = (v_1 - v_i) /
/// |a_1 - a_i|^2; the shortest eta lands on Trop(g). Returns the landing
/// point and the distance moved. When rho is the real part of a zero of g,
/// the distance is at most log(t-1)/delta.
pub fn nearest_trop_point(g: &ExpSum, rho: &[f64]) -> Result<(Vec<f64>, f64)> {
    let n = g.n();
    if rho.len() != n {
        return Err(Error::InvalidInput(format!(
            "nearest_trop_point: point must have length {n}"
        )));
    }
    if !rho.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("nearest_trop_point"));
    }
    let values: Vec<f64> = (0..g.t())
        .map(|j| linalg::dot(g.freq(j), rho) + g.beta(j))
        .collect();
    let j1 = (0..g.t())
        .max_by(|&a, &b| values[a].total_cmp(&values[b]).then(b.cmp(&a)))
        .unwrap();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for i in 0..g.t() {
        if i == j1 {
            continue;
        }
        let diff = linalg::sub(g.freq(i), g.freq(j1));
        let lambda = ((values[j1] - values[i]) / linalg::dot(&diff, &diff)).max(0.0);
        let eta = linalg::scale(&diff, lambda);
        let norm = linalg::norm(&eta);
        if best.as_ref().is_none_or(|(b, _)| norm < *b) {
            best = Some((norm, eta));
        }
    }
    let (distance, eta) = best.unwrap();
    Ok((linalg::add_scaled(rho, &eta, 1.0), distance))
}

/// A spacing-preserving projection direction: a unit vector in the affine
/// hull of the frequencies whose projected pairwise spacing clears the
/// delta/(sqrt(ed) t^2) threshold.
#[derive(Debug, Clone, Serialize)]
pub struct Projection {
    pub theta: Vec<f64>,
    pub spacing: f64,
    pub threshold: f64,
    pub draws: u32,
}

fn projected_spacing(g: &ExpSum, theta: &[f64]) -> f64 {
    let mut min = f64::INFINITY;
    for i in 0..g.t() {
        for j in i + 1..g.t() {
            let d = linalg::dot(g.freq(i), theta) - linalg::dot(g.freq(j), theta);
            min = min.min(d.abs());
        }
    }
    min
}

/// Draw unit directions in the frequency hull (seeded Gaussian, normalized)
/// until the projected spacing clears the threshold; each draw succeeds with
/// probability above one half, so the 64-draw cutoff is unreachable in
/// practice. Collinear frequencies short-circuit to the hull direction.
pub fn sample_projection(g: &ExpSum, seed: u64) -> Result<Projection> {
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidInput(
            "sample_projection requires n >= 2".into(),
        ));
    }
    let delta = minimal_spacing(g)?.delta;
    let diffs: Vec<Vec<f64>> = (1..g.t())
        .map(|j| linalg::sub(g.freq(j), g.freq(0)))
        .collect();
    let basis = linalg::orthonormal_basis(&diffs);
    let d = basis.len();
    let t = g.t() as f64;
    let threshold = delta / ((std::f64::consts::E * d as f64).sqrt() * t * t);
    if d == 1 {
        let theta = basis[0].clone();
        let spacing = projected_spacing(g, &theta);
        return Ok(Projection {
            theta,
            spacing,
            threshold,
            draws: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for draw in 1..=MAX_PROJECTION_DRAWS {
        let coeffs: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
        let cn = linalg::norm(&coeffs);
        if cn < 1e-12 {
            continue;
        }
        let mut theta = vec![0.0; n];
        for (c, b) in coeffs.iter().zip(&basis) {
            theta = linalg::add_scaled(&theta, b, c / cn);
        }
        let spacing = projected_spacing(g, &theta);
        if spacing >= threshold {
            return Ok(Projection {
                theta,
                spacing,
                threshold,
                draws: draw,
            });
        }
    }
    Err(Error::ProjectionSamplingFailed(MAX_PROJECTION_DRAWS))
}

/// Desk-scale estimate of both directed Hausdorff distances. `rz_to_trop`
/// is a certified lower bound on the sup over Re(Z) (every sample is a real
/// part of an actual zero and its tropical distance is computed exactly);
/// `trop_to_rz` is an empirical upper-biased estimate (the inf runs over the
/// sampled zeros only).
#[derive(Debug, Clone, Serialize)]
pub struct HausdorffEstimate {
    pub rz_to_trop: f64,
    pub trop_to_rz: f64,
    pub delta_lower: f64,
    pub delta_estimate: f64,
    pub root_samples: usize,
    pub trop_samples: usize,
}

pub fn sampled_hausdorff(g: &ExpSum, budget: usize, seed: u64) -> Result<HausdorffEstimate> {
    match g.n() {
        1 => hausdorff_1d(g, budget),
        2 => hausdorff_2d(g, budget, seed),
        n => Err(Error::InvalidInput(format!(
            "sampled_hausdorff supports n = 1 or 2, got {n}"
        ))),
    }
}

fn sup_inf(from: &[f64], to: &[f64]) -> f64 {
    from.iter()
        .map(|x| {
            to.iter()
                .map(|y| (x - y).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn hausdorff_1d(g: &ExpSum, budget: usize) -> Result<HausdorffEstimate> {
    let trop = trop_points_1d(g)?.values();
    let (lo, hi) = root_interval(g)?;
    let order = g.sorted_by_freq()?;
    let span = g.freq1(order[order.len() - 1]) - g.freq1(order[0]);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut strips = ((budget as f64 / span.max(1.0)).ceil() as usize).clamp(1, 32);
    let mut roots = isolate_roots(g, &Rectangle::new(lo, hi, 0.0, two_pi * strips as f64)?)?;
    if roots.is_empty() {
        strips = ((2.0 * g.t() as f64 / span).ceil() as usize).clamp(strips + 1, 256);
        roots = isolate_roots(g, &Rectangle::new(lo, hi, 0.0, two_pi * strips as f64)?)?;
    }
    let re_parts: Vec<f64> = roots.iter().map(|r| r.re).collect();
    let rz_to_trop = sup_inf(&re_parts, &trop);
    let trop_to_rz = sup_inf(&trop, &re_parts);
    Ok(HausdorffEstimate {
        rz_to_trop,
        trop_to_rz,
        delta_lower: rz_to_trop,
        delta_estimate: rz_to_trop.max(trop_to_rz),
        root_samples: re_parts.len(),
        trop_samples: trop.len(),
    })
}

/// Points along the 2d tropical skeleton inside a box padded past the root
/// belt, roughly `count` of them, always including segment endpoints.
fn skeleton_samples(g: &ExpSum, count: usize) -> Result<Vec<Vec<f64>>> {
    let mut hubs = trop_vertices(g)?;
    for p in 0..g.t() {
        for q in p + 1..g.t() {
            let normal = linalg::sub(g.freq(p), g.freq(q));
            let rhs = g.beta(q) - g.beta(p);
            hubs.push(linalg::scale(&normal, rhs / linalg::dot(&normal, &normal)));
        }
    }
    let mut center = vec![0.0; 2];
    for h in &hubs {
        center = linalg::add_scaled(&center, h, 1.0 / hubs.len() as f64);
    }
    let spread = hubs
        .iter()
        .map(|h| linalg::norm(&linalg::sub(h, &center)))
        .fold(0.0, f64::max);
    let delta = minimal_spacing(g)?.delta;
    let half = spread + 1.0 + ((g.t() - 1) as f64).ln() / delta;
    let segments = skeleton_2d(
        g,
        (center[0] - half, center[0] + half),
        (center[1] - half, center[1] + half),
    )?;
    let total: f64 = segments.iter().map(|s| s.len()).sum();
    let step = total / count.max(4) as f64;
    let mut samples = Vec::new();
    for seg in &segments {
        let (a, b) = seg.endpoints();
        let pieces = (seg.len() / step).ceil().max(1.0) as usize;
        for k in 0..=pieces {
            let f = k as f64 / pieces as f64;
            samples.push(vec![a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])]);
        }
    }
    Ok(samples)
}

fn hausdorff_2d(g: &ExpSum, budget: usize, seed: u64) -> Result<HausdorffEstimate> {
    let projection = sample_projection(g, seed)?;
    let theta = &projection.theta;
    let two_pi = 2.0 * std::f64::consts::PI;
    let anchors = skeleton_samples(g, (budget / 4).clamp(6, 32))?;
    let mut root_points: Vec<Vec<f64>> = Vec::new();
    for anchor in &anchors {
        let slice = slice_to_line(g, anchor, theta)?;
        let order = slice.sorted_by_freq()?;
        let span = slice.freq1(order[order.len() - 1]) - slice.freq1(order[0]);
        let strips = ((2.0 / span).ceil() as usize).clamp(1, 64);
        let (lo, hi) = root_interval(&slice)?;
        let rect = Rectangle::new(lo, hi, 0.0, two_pi * strips as f64)?;
        let wdott = linalg::dot(anchor, theta);
        let wperp = linalg::add_scaled(anchor, theta, -wdott);
        for root in isolate_roots(&slice, &rect)? {
            root_points.push(linalg::add_scaled(&wperp, theta, root.re));
        }
    }
    let mut rz_to_trop = 0.0f64;
    for p in &root_points {
        rz_to_trop = rz_to_trop.max(distance_to_trop(g, p)?.distance);
    }
    let trop_to_rz = anchors
        .iter()
        .map(|q| {
            root_points
                .iter()
                .map(|p| linalg::norm(&linalg::sub(q, p)))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max);
    Ok(HausdorffEstimate {
        rz_to_trop,
        trop_to_rz,
        delta_lower: rz_to_trop,
        delta_estimate: rz_to_trop.max(trop_to_rz),
        root_samples: root_points.len(),
        trop_samples: anchors.len(),
    })
}

/// The tightness witness (e^{delta z_1} + 1)^{t-n} + e^{delta z_2} + ... +
/// e^{delta z_n}, expanded into t explicit terms with log-binomial
/// coefficients. Its Hausdorff gap is at least log(t-n)/delta.
pub fn witness_family(t: usize, n: usize, delta: f64) -> Result<ExpSum> {
    if n < 1 || t < n + 1 {
        return Err(Error::InvalidInput(format!(
            "witness family needs t >= n + 1 >= 2, got t = {t}, n = {n}"
        )));
    }
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "witness spacing must be positive, got {delta}"
        )));
    }
    let m = t - n;
    if m > 60 {
        return Err(Error::InvalidInput(format!(
            "witness expansion is limited to t - n <= 60, got {m}"
        )));
    }
    let mut terms = Vec::with_capacity(t);
    let mut lnc = 0.0;
    for j in 0..=m {
        let mut a = vec![0.0; n];
        a[0] = j as f64 * delta;
        terms.push(Term::new(a, lnc, 0.0));
        if j < m {
            lnc += ((m - j) as f64).ln() - ((j + 1) as f64).ln();
        }
    }
    for k in 1..n {
        let mut a = vec![0.0; n];
        a[k] = delta;
        terms.push(Term::new(a, 0.0, 0.0));
    }
    ExpSum::new(n, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::active_terms;
    use std::f64::consts::{LN_2, PI};

    fn circle7() -> ExpSum {
        let mut terms = Vec::new();
        let mut lnc = 0.0;
        for j in 0..7 {
            let phi = 2.0 * PI * j as f64 / 7.0;
            terms.push(Term::new(vec![phi.cos(), phi.sin()], lnc, 0.0));
            lnc += ((7 - j) as f64).ln() - ((j + 1) as f64).ln();
        }
        ExpSum::new(2, terms).unwrap()
    }

    fn tropical_line() -> ExpSum {
        ExpSum::new(
            2,
            vec![
                Term::new(vec![0.0, 0.0], 0.0, 0.0),
                Term::new(vec![1.0, 0.0], 0.0, PI),
                Term::new(vec![0.0, 1.0], 0.0, PI),
            ],
        )
        .unwrap()
    }

    fn euler_squared() -> ExpSum {
        ExpSum::univariate(&[(0.0, 0.0, 0.0), (1.0, LN_2, 0.0), (2.0, 0.0, 0.0)]).unwrap()
    }

    #[test]
    fn bounds_on_the_heptagon() {
        let r = bounds(&circle7()).unwrap();
        let delta = 2.0 * (PI / 7.0).sin();
        assert!((r.delta - delta).abs() < 1e-12);
        assert!((r.bound_1a - 6.0f64.ln() / delta).abs() < 1e-12);
        assert!(r.bound_1a < 2.065 && r.bound_1a > 2.064);
        assert_eq!(r.d, 2);
        assert!(r.bound_uni.is_none());
        assert!(r.bound_1a <= r.bound_1b);
    }

    #[test]
    fn bounds_on_the_squared_binomial() {
        let r = bounds(&euler_squared()).unwrap();
        assert!((r.bound_1a - LN_2).abs() < 1e-12);
        assert_eq!(r.s, Some(2));
        assert!((r.bound_uni.unwrap() - 3.0 * 3.0f64.ln()).abs() < 1e-12);
        assert!((r.lower_witness.unwrap() - LN_2).abs() < 1e-12);
    }

    #[test]
    fn bounds_vanish_for_two_terms() {
        let g = ExpSum::univariate(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)]).unwrap();
        let r = bounds(&g).unwrap();
        assert_eq!(r.bound_1a, 0.0);
        assert_eq!(r.lower_witness, Some(0.0));
    }

    #[test]
    fn nearest_point_on_the_line_example() {
        let g = tropical_line();
        let (p, dist) = nearest_trop_point(&g, &[-LN_2, -LN_2]).unwrap();
        assert!((dist - LN_2).abs() < 1e-12);
        assert!(p[0].abs() < 1e-12 && (p[1] + LN_2).abs() < 1e-12);
    }

    #[test]
    fn nearest_point_fixes_tropical_inputs() {
        let g = tropical_line();
        let (p, dist) = nearest_trop_point(&g, &[2.0, 2.0]).unwrap();
        assert_eq!(dist, 0.0);
        assert_eq!(p, vec![2.0, 2.0]);
        let two = ExpSum::univariate(&[(1.0, 0.3, 0.0), (0.0, 0.0, 0.0)]).unwrap();
        let w = trop_points_1d(&two).unwrap().values()[0];
        let (_, d0) = nearest_trop_point(&two, &[w]).unwrap();
        assert!(d0.abs() < 1e-12);
    }

    #[test]
    fn nearest_point_always_lands_on_the_variety() {
        let g = circle7();
        for rho in [
            vec![0.3, -1.7],
            vec![4.0, 0.2],
            vec![-2.0, 5.0],
            vec![0.9, 0.9],
        ] {
            let (p, _) = nearest_trop_point(&g, &rho).unwrap();
            assert!(active_terms(&g, &p).len() >= 2);
        }
    }

    #[test]
    fn projection_clears_the_threshold() {
        let g = circle7();
        let p = sample_projection(&g, 7).unwrap();
        let delta = 2.0 * (PI / 7.0).sin();
        let expect = delta / ((2.0 * std::f64::consts::E).sqrt() * 49.0);
        assert!((p.threshold - expect).abs() < 1e-12);
        assert!(p.spacing >= p.threshold);
        assert!((linalg::norm(&p.theta) - 1.0).abs() < 1e-9);
        let again = sample_projection(&g, 7).unwrap();
        assert_eq!(p.theta, again.theta);
        assert_eq!(p.draws, again.draws);
    }

    #[test]
    fn projection_shortcuts_collinear_frequencies() {
        let g = ExpSum::new(
            2,
            vec![
                Term::unit(vec![0.0, 0.0]),
                Term::unit(vec![1.0, 0.0]),
                Term::unit(vec![2.5, 0.0]),
            ],
        )
        .unwrap();
        let p = sample_projection(&g, 0).unwrap();
        assert_eq!(p.draws, 0);
        assert!((p.spacing - 1.0).abs() < 1e-12);
        assert!((p.theta[0].abs() - 1.0).abs() < 1e-12 && p.theta[1].abs() < 1e-12);
    }

    #[test]
    fn projection_rejects_univariate() {
        let g = ExpSum::univariate(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0)]).unwrap();
        assert!(sample_projection(&g, 0).is_err());
    }

    #[test]
    fn witness_expands_the_binomial() {
        let g = witness_family(3, 1, 1.0).unwrap();
        assert_eq!(g.t(), 3);
        let mut seen: Vec<(f64, f64)> = g.terms().iter().map(|t| (t.a[0], t.b_re)).collect();
        seen.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((seen[0].0 - 0.0).abs() < 1e-12 && seen[0].1.abs() < 1e-12);
        assert!((seen[1].0 - 1.0).abs() < 1e-12 && (seen[1].1 - LN_2).abs() < 1e-12);
        assert!((seen[2].0 - 2.0).abs() < 1e-12 && seen[2].1.abs() < 1e-12);
    }

    #[test]
    fn witness_cubed_has_three_tropical_points() {
        let g = witness_family(4, 1, 1.0).unwrap();
        let v = trop_points_1d(&g).unwrap().values();
        let l3 = 3.0f64.ln();
        assert_eq!(v.len(), 3);
        assert!((v[0] + l3).abs() < 1e-12);
        assert!(v[1].abs() < 1e-12);
        assert!((v[2] - l3).abs() < 1e-12);
    }

    #[test]
    fn witness_multivariate_shape() {
        let g = witness_family(3, 2, 2.0).unwrap();
        assert_eq!((g.t(), g.n()), (3, 2));
        assert!(witness_family(2, 2, 1.0).is_err());
        assert!(witness_family(70, 1, 1.0).is_err());
        assert!(witness_family(3, 1, 0.0).is_err());
    }

    #[test]
    fn hausdorff_vanishes_when_sets_agree() {
        let g = ExpSum::univariate(&[(1.0, 0.0, 0.0), (0.0, 0.0, 0.0)]).unwrap();
        let h = sampled_hausdorff(&g, 12, 1).unwrap();
        assert!(h.rz_to_trop < 1e-9);
        assert!(h.trop_to_rz < 1e-9);
        assert!(h.root_samples > 0);
    }

    #[test]
    fn hausdorff_of_the_witness_is_log2() {
        let h = sampled_hausdorff(&euler_squared(), 16, 1).unwrap();
        assert!((h.rz_to_trop - LN_2).abs() < 1e-6);
        assert!((h.trop_to_rz - LN_2).abs() < 1e-6);
        assert!((h.delta_estimate - LN_2).abs() < 1e-6);
    }

    #[test]
    fn hausdorff_bivariate_two_terms() {
        let g = ExpSum::new(
            2,
            vec![
                Term::new(vec![0.0, 0.0], 0.0, 0.0),
                Term::new(vec![1.0, 0.0], 0.0, PI),
            ],
        )
        .unwrap();
        let h = sampled_hausdorff(&g, 24, 3).unwrap();
        assert!(h.rz_to_trop < 1e-9);
        assert!(h.trop_to_rz < 1e-9);
    }

    #[test]
    fn hausdorff_bivariate_line_respects_the_bound() {
        let g = tropical_line();
        let h = sampled_hausdorff(&g, 24, 5).unwrap();
        assert!(h.rz_to_trop <= LN_2 + 1e-6);
        assert!(h.trop_to_rz.is_finite());
        assert!(h.root_samples > 0 && h.trop_samples > 0);
    }
}
