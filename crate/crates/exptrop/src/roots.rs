//! Univariate root counting and localization: strip count intervals from
//! frequency gaps, domination radii, per-cluster bounds, and a certified
//! winding-number oracle with recursive root isolation on top of it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::expsum::{evaluate_scaled, log_derivative_1d, minimal_spacing, ExpSum};
use crate::tropical::{clusters_1d, Cluster};
use crate::{Error, Result};

const RESID_TOL: f64 = 0.05;
const AGREE_TOL: f64 = 0.02;
const SPLIT_TOL: f64 = AGREE_TOL / 10.0;
const CLEARANCE_TOL: f64 = 1e-12;
const NEAR_ROOT_TOL: f64 = 1e-6;
const BOUNDARY_SAMPLES: usize = 128;
const JITTER_RETRIES: usize = 8;
const DEFAULT_MAX_DEPTH: usize = 20;
const ROUND_CAP: usize = 2000;
const COUNT_GUARD: usize = 10_000;
const NEWTON_RESID: f64 = 1e-11;
const NEWTON_MAX_ITERS: usize = 60;
const MIN_DIAMETER: f64 = 1e-8;
const SPLIT_FRACTIONS: [f64; 8] = [0.5, 0.53, 0.47, 0.56, 0.44, 0.51, 0.49, 0.55];

/// Axis-aligned rectangle [x1, x2] x [u, v] in the complex plane; x is the
/// real axis, u and v bound the imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub x1: f64,
    pub x2: f64,
    pub u: f64,
    pub v: f64,
}

impl Rectangle {
    pub fn new(x1: f64, x2: f64, u: f64, v: f64) -> Result<Self> {
        if ![x1, x2, u, v].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("rectangle"));
        }
        if x1 > x2 || u > v {
            return Err(Error::InvalidInput(format!(
                "empty rectangle [{x1},{x2}]x[{u},{v}]"
            )));
        }
        Ok(Rectangle { x1, x2, u, v })
    }

    pub fn width(&self) -> f64 {
        self.x2 - self.x1
    }

    pub fn height(&self) -> f64 {
        self.v - self.u
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x1 + self.x2), 0.5 * (self.u + self.v))
    }

    pub fn expand(&self, eta: f64) -> Rectangle {
        Rectangle {
            x1: self.x1 - eta,
            x2: self.x2 + eta,
            u: self.u - eta,
            v: self.v + eta,
        }
    }

    pub fn contains(&self, z: Complex64, margin: f64) -> bool {
        z.re >= self.x1 - margin
            && z.re <= self.x2 + margin
            && z.im >= self.u - margin
            && z.im <= self.v + margin
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.x1, self.u),
            Complex64::new(self.x2, self.u),
            Complex64::new(self.x2, self.v),
            Complex64::new(self.x1, self.v),
        ]
    }
}

/// An interval [center - radius, center + radius] certified to contain the
/// integer root count of a horizontal strip or sub-rectangle.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CountInterval {
    pub center: f64,
    pub radius: f64,
}

impl CountInterval {
    /// Smallest nonnegative integer in the interval.
    pub fn lower(&self) -> usize {
        (self.center - self.radius - 1e-9).ceil().max(0.0) as usize
    }

    /// Largest integer in the interval.
    pub fn upper(&self) -> usize {
        (self.center + self.radius + 1e-9).floor().max(0.0) as usize
    }

    pub fn contains(&self, count: usize) -> bool {
        let k = count as f64;
        (k - self.center).abs() <= self.radius + 1e-9
    }
}

fn int_dist(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// Count interval for the roots of g in the horizontal strip u <= Im z <= v:
/// center (v-u)(a_t - a_1)/2pi, radius t-1 minus the sum over consecutive
/// sorted frequency gaps of the distance from (v-u) gap / 2pi to the nearest
/// integer.
pub fn wv_bound(g: &ExpSum, u: f64, v: f64) -> Result<CountInterval> {
    if u > v || !u.is_finite() || !v.is_finite() {
        return Err(Error::InvalidInput(format!("invalid strip [{u},{v}]")));
    }
    let order = g.sorted_by_freq()?;
    let freqs: Vec<f64> = order.iter().map(|&j| g.freq1(j)).collect();
    let h = (v - u) / (2.0 * std::f64::consts::PI);
    let center = h * (freqs[freqs.len() - 1] - freqs[0]);
    let radius = (g.t() - 1) as f64
        - freqs.windows(2).map(|w| int_dist(h * (w[1] - w[0]))).sum::<f64>();
    Ok(CountInterval { center, radius })
}

/// Radius log(n+1)/delta_ell beyond which the term at sorted position ell
/// exceeds n times the magnitude of the lower-frequency partial sum. `ell`
/// is a 0-based position in ascending frequency order, so the prefix it
/// dominates has ell terms.
pub fn domination_radius(g: &ExpSum, ell: usize, n: u32) -> Result<f64> {
    if g.n() != 1 {
        return Err(Error::NotUnivariate("domination_radius"));
    }
    if n == 0 {
        return Err(Error::InvalidInput("domination factor must be positive".into()));
    }
    let spacing = minimal_spacing(g)?;
    let delta_ell = spacing.delta_prefix(ell + 1).ok_or_else(|| {
        Error::InvalidInput(format!(
            "domination index must be in 1..{}, got {ell}",
            g.t()
        ))
    })?;
    Ok(((n + 1) as f64).ln() / delta_ell)
}

/// Per-cluster count intervals for a horizontal strip. Each component of the
/// tropical point set gets center (v-u) span / 2pi and radius budget + 1;
/// the shared budget is the strip-count radius, and the components jointly
/// satisfy sum |count_C - center_C| <= budget + #components.
#[derive(Debug, Clone, Serialize)]
pub struct StripCounts {
    pub total: CountInterval,
    pub per_cluster: Vec<(Cluster, CountInterval)>,
    pub budget: f64,
}

pub fn strip_count_bounds(g: &ExpSum, u: f64, v: f64) -> Result<StripCounts> {
    let total = wv_bound(g, u, v)?;
    let budget = total.radius;
    let h = (v - u) / (2.0 * std::f64::consts::PI);
    let per_cluster = clusters_1d(g)?
        .components
        .into_iter()
        .map(|c| {
            let interval = CountInterval {
                center: h * c.span,
                radius: budget + 1.0,
            };
            (c, interval)
        })
        .collect();
    Ok(StripCounts {
        total,
        per_cluster,
        budget,
    })
}

const GL15_X: [f64; 8] = [
    0.0,
    0.2011940939974345,
    0.3941513470775634,
    0.5709721726085388,
    0.7244177313601700,
    0.8482065834104272,
    0.9372733924007059,
    0.9879925180204854,
];
const GL15_W: [f64; 8] = [
    0.2025782419255613,
    0.1984314853271116,
    0.1861610000155622,
    0.1662692058169939,
    0.1395706779261543,
    0.1071592204671719,
    0.0703660474881081,
    0.0307532419961173,
];

/// g'/g together with |S| from the max-factored form g = e^m S, so the
/// quadrature can watch for near-roots on the contour.
fn log_deriv_clearance(g: &ExpSum, z: Complex64) -> (Complex64, f64) {
    let mut m = f64::NEG_INFINITY;
    for term in g.terms() {
        m = m.max(term.a[0] * z.re + term.b_re);
    }
    let mut num = Complex64::default();
    let mut den = Complex64::default();
    for term in g.terms() {
        let v = (term.a[0] * z + term.b() - m).exp();
        num += term.a[0] * v;
        den += v;
    }
    (num / den, den.norm())
}

fn gl15(g: &ExpSum, z0: Complex64, z1: Complex64, min_s: &mut f64) -> Complex64 {
    let mid = 0.5 * (z0 + z1);
    let half = 0.5 * (z1 - z0);
    let mut acc = Complex64::default();
    for k in 0..8 {
        let (f, s) = log_deriv_clearance(g, mid + GL15_X[k] * half);
        *min_s = min_s.min(s);
        acc += GL15_W[k] * f;
        if k > 0 {
            let (f, s) = log_deriv_clearance(g, mid - GL15_X[k] * half);
            *min_s = min_s.min(s);
            acc += GL15_W[k] * f;
        }
    }
    acc * half
}

struct Panel {
    z0: Complex64,
    z1: Complex64,
    depth: usize,
    refined: Complex64,
    disc: f64,
}

fn make_panel(g: &ExpSum, z0: Complex64, z1: Complex64, depth: usize, min_s: &mut f64) -> Panel {
    let whole = gl15(g, z0, z1, min_s);
    let mid = 0.5 * (z0 + z1);
    let refined = gl15(g, z0, mid, min_s) + gl15(g, mid, z1, min_s);
    Panel {
        z0,
        z1,
        depth,
        refined,
        disc: (whole - refined).norm() / (2.0 * std::f64::consts::PI),
    }
}

enum ContourOutcome {
    Count {
        count: usize,
        panels: usize,
        refinements: usize,
        residual: f64,
    },
    NearSingular,
    NoConverge,
}

fn contour_count(g: &ExpSum, rect: &Rectangle, max_depth: usize) -> ContourOutcome {
    let corners = rect.corners();
    let mut min_s = f64::INFINITY;
    let mut panels = Vec::with_capacity(16);
    for e in 0..4 {
        let (z0, z1) = (corners[e], corners[(e + 1) % 4]);
        for k in 0..4 {
            let a = z0 + (k as f64 / 4.0) * (z1 - z0);
            let b = z0 + ((k + 1) as f64 / 4.0) * (z1 - z0);
            panels.push(make_panel(g, a, b, 0, &mut min_s));
        }
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut prev: Option<Complex64> = None;
    for round in 0..ROUND_CAP {
        if min_s < NEAR_ROOT_TOL {
            return ContourOutcome::NearSingular;
        }
        let w = panels.iter().map(|p| p.refined).sum::<Complex64>() / two_pi_i;
        let k = w.re.round();
        if let Some(pw) = prev {
            if (w - k).norm() < RESID_TOL && (w - pw).norm() <= AGREE_TOL {
                if k < -0.5 {
                    return ContourOutcome::NoConverge;
                }
                return ContourOutcome::Count {
                    count: k as usize,
                    panels: panels.len(),
                    refinements: round,
                    residual: (w - k).norm(),
                };
            }
        }
        prev = Some(w);
        let mut split = vec![false; panels.len()];
        let mut any = false;
        for (i, p) in panels.iter().enumerate() {
            if p.disc > SPLIT_TOL {
                split[i] = true;
                any = true;
            }
        }
        if !any {
            let worst = (0..panels.len())
                .max_by(|&a, &b| panels[a].disc.total_cmp(&panels[b].disc))
                .unwrap();
            split[worst] = true;
        }
        if panels
            .iter()
            .zip(&split)
            .any(|(p, &s)| s && p.depth >= max_depth)
        {
            return ContourOutcome::NoConverge;
        }
        let mut next = Vec::with_capacity(panels.len() + 8);
        for (p, s) in panels.into_iter().zip(split) {
            if s {
                let mid = 0.5 * (p.z0 + p.z1);
                next.push(make_panel(g, p.z0, mid, p.depth + 1, &mut min_s));
                next.push(make_panel(g, mid, p.z1, p.depth + 1, &mut min_s));
            } else {
                next.push(p);
            }
        }
        panels = next;
    }
    ContourOutcome::NoConverge
}

fn boundary_clearance(g: &ExpSum, rect: &Rectangle) -> f64 {
    let corners = rect.corners();
    let mut min_s = f64::INFINITY;
    for e in 0..4 {
        let (z0, z1) = (corners[e], corners[(e + 1) % 4]);
        for k in 0..=BOUNDARY_SAMPLES {
            let z = z0 + (k as f64 / BOUNDARY_SAMPLES as f64) * (z1 - z0);
            min_s = min_s.min(evaluate_scaled(g, &[z]).1.norm());
        }
    }
    min_s
}

fn max_depth_from_env() -> usize {
    std::env::var("EXPTROP_MAX_DEPTH")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_DEPTH)
}

/// Result of a winding-number count: the integer, the rectangle the contour
/// actually ran on (expanded when jitter was needed to clear a boundary
/// root), and quadrature effort counters.
#[derive(Debug, Clone, Serialize)]
pub struct WindingReport {
    pub count: usize,
    pub rect: Rectangle,
    pub requested: Rectangle,
    pub jitter: f64,
    pub panels: usize,
    pub refinements: usize,
    pub residual: f64,
}

/// Root count of g in rect with multiplicity, via the argument principle:
/// adaptive composite Gauss-Legendre panels on the boundary, refined until
/// the estimate sits within 0.05 of an integer and successive refinements
/// agree to 0.02. Boundary roots are cleared by expanding the rectangle
/// outward in small deterministic steps; the report records the rectangle
/// actually counted.
pub fn winding_count_detailed(g: &ExpSum, rect: &Rectangle) -> Result<WindingReport> {
    if g.n() != 1 {
        return Err(Error::NotUnivariate("winding_count"));
    }
    let delta = minimal_spacing(g)?.delta;
    let max_depth = max_depth_from_env();
    let mut worst_clearance = f64::INFINITY;
    let mut saw_near_root = false;
    for k in 0..=JITTER_RETRIES {
        let eta = k as f64 * 0.1 / (JITTER_RETRIES as f64 * delta);
        let trial = rect.expand(eta);
        let clearance = boundary_clearance(g, &trial);
        worst_clearance = worst_clearance.min(clearance);
        if clearance < CLEARANCE_TOL {
            saw_near_root = true;
            continue;
        }
        match contour_count(g, &trial, max_depth) {
            ContourOutcome::Count {
                count,
                panels,
                refinements,
                residual,
            } => {
                return Ok(WindingReport {
                    count,
                    rect: trial,
                    requested: *rect,
                    jitter: eta,
                    panels,
                    refinements,
                    residual,
                })
            }
            ContourOutcome::NearSingular => {
                saw_near_root = true;
                continue;
            }
            ContourOutcome::NoConverge => {
                return Err(Error::QuadratureFailure(format!(
                    "no convergence within depth {max_depth} on [{},{}]x[{},{}]",
                    trial.x1, trial.x2, trial.u, trial.v
                )))
            }
        }
    }
    if saw_near_root {
        Err(Error::RootOnBoundary(worst_clearance))
    } else {
        Err(Error::QuadratureFailure("jitter retries exhausted".into()))
    }
}

pub fn winding_count(g: &ExpSum, rect: &Rectangle) -> Result<usize> {
    Ok(winding_count_detailed(g, rect)?.count)
}

/// An isolated root: position, multiplicity, and whether the polish step had
/// to fall back to the box midpoint.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Root {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub coarse: bool,
}

impl Root {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Newton iteration from the box center, with the step scaled by the target
/// multiplicity; after the residual first clears the threshold one more step
/// is taken and the lowest-residual iterate kept.
fn newton_polish(g: &ExpSum, rect: &Rectangle, mult: usize) -> Option<Root> {
    let inflate = 0.5 * rect.diameter();
    let mut z = rect.center();
    let mut best = (f64::INFINITY, z);
    let mut extra_step_done = false;
    for _ in 0..NEWTON_MAX_ITERS {
        let (_, s) = evaluate_scaled(g, &[z]);
        let sn = s.norm();
        if sn < best.0 {
            best = (sn, z);
        }
        if sn < NEWTON_RESID {
            if extra_step_done {
                break;
            }
            extra_step_done = true;
        }
        let ld = log_derivative_1d(g, z);
        if !ld.re.is_finite() || !ld.im.is_finite() || ld.norm() < 1e-300 {
            break;
        }
        z -= Complex64::new(mult as f64, 0.0) / ld;
        if !rect.contains(z, inflate) {
            return None;
        }
    }
    let margin = 1e-6 * (1.0 + rect.diameter());
    if best.0 < NEWTON_RESID && rect.contains(best.1, margin) {
        Some(Root {
            re: best.1.re,
            im: best.1.im,
            multiplicity: mult,
            coarse: false,
        })
    } else {
        None
    }
}

fn cluster_root(g: &ExpSum, rect: &Rectangle, count: usize) -> Root {
    newton_polish(g, rect, count).unwrap_or_else(|| {
        let c = rect.center();
        Root {
            re: c.re,
            im: c.im,
            multiplicity: count,
            coarse: true,
        }
    })
}

fn subdivide(
    g: &ExpSum,
    rect: &Rectangle,
    count: usize,
    out: &mut Vec<Root>,
    depth: usize,
) -> Result<()> {
    if count == 0 {
        return Ok(());
    }
    if count == 1 {
        if let Some(root) = newton_polish(g, rect, 1) {
            out.push(root);
            return Ok(());
        }
    }
    if rect.diameter() <= MIN_DIAMETER || depth >= 64 {
        out.push(cluster_root(g, rect, count));
        return Ok(());
    }
    'fractions: for &f in &SPLIT_FRACTIONS {
        let xs = rect.x1 + f * rect.width();
        let ys = rect.u + f * rect.height();
        let children = [
            Rectangle { x1: rect.x1, x2: xs, u: rect.u, v: ys },
            Rectangle { x1: xs, x2: rect.x2, u: rect.u, v: ys },
            Rectangle { x1: rect.x1, x2: xs, u: ys, v: rect.v },
            Rectangle { x1: xs, x2: rect.x2, u: ys, v: rect.v },
        ];
        let mut counts = [0usize; 4];
        for (slot, child) in counts.iter_mut().zip(&children) {
            match winding_count_detailed(g, child) {
                // a jittered child overlaps its siblings, so the split line
                // is too close to a root; try the next fraction
                Ok(rep) if rep.jitter == 0.0 => *slot = rep.count,
                Ok(_) | Err(Error::RootOnBoundary(_)) => continue 'fractions,
                Err(e) => return Err(e),
            }
        }
        if counts.iter().sum::<usize>() != count {
            continue;
        }
        for (child, &child_count) in children.iter().zip(&counts) {
            subdivide(g, child, child_count, out, depth + 1)?;
        }
        return Ok(());
    }
    out.push(cluster_root(g, rect, count));
    Ok(())
}

/// All roots of g in rect, each with its multiplicity: recursive
/// quadrisection guided by winding counts, Newton polish for separated
/// roots, multiplicity by cluster count where boxes stop splitting. The
/// multiplicities sum to the winding count of the whole rectangle.
pub fn isolate_roots(g: &ExpSum, rect: &Rectangle) -> Result<Vec<Root>> {
    let top = winding_count_detailed(g, rect)?;
    if top.count > COUNT_GUARD {
        return Err(Error::CountGuard(top.count));
    }
    let mut out = Vec::new();
    subdivide(g, &top.rect, top.count, &mut out, 0)?;
    out.sort_by(|a, b| (a.im, a.re).partial_cmp(&(b.im, b.re)).unwrap());
    debug_assert_eq!(
        out.iter().map(|r| r.multiplicity).sum::<usize>(),
        top.count
    );
    Ok(out)
}
