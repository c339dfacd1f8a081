//! The tropical variety Trop(g): in one variable a finite point set with
//! cluster structure and root-location strips, in n variables cells of the
//! induced polyhedral complex, vertex enumeration, and point-to-variety
//! distances. All nD structure goes through linear programming; no nD hull
//! is ever built.

use serde::Serialize;

use crate::archnewt::{lift, lower_hull_1d};
use crate::expsum::{minimal_spacing, ExpSum};
use crate::linalg;
use crate::lp::{self, LinearSystem};
use crate::{Error, Result};

/// A univariate tropical point: a lower-hull slope with the incident
/// left/right hull vertex term indices.
#[derive(Debug, Clone, Serialize)]
pub struct TropPoint1D {
    pub w: f64,
    pub left_index: usize,
    pub right_index: usize,
}

/// All tropical points of a univariate sum, strictly increasing.
#[derive(Debug, Clone, Serialize)]
pub struct Trop1D {
    pub points: Vec<TropPoint1D>,
}

impl Trop1D {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.w).collect()
    }

    pub fn min(&self) -> f64 {
        self.points.first().map(|p| p.w).unwrap()
    }

    pub fn max(&self) -> f64 {
        self.points.last().map(|p| p.w).unwrap()
    }
}

/// Tropical points = slopes of the lower hull, with incident vertices.
pub fn trop_points_1d(g: &ExpSum) -> Result<Trop1D> {
    let hull = lower_hull_1d(&lift(g))?;
    Ok(Trop1D {
        points: hull
            .edges
            .iter()
            .map(|e| TropPoint1D {
                w: e.slope,
                left_index: e.left_index,
                right_index: e.right_index,
            })
            .collect(),
    })
}

/// A maximal run of tropical points whose open (log 3)/delta neighborhoods
/// overlap. `i` and `j` are the extreme incident hull vertex indices, and
/// `span` = a_j - a_i is the frequency span the cluster accounts for.
#[derive(Debug, Clone, Serialize)]
pub struct Cluster {
    pub w_min: f64,
    pub w_max: f64,
    pub count: usize,
    pub i: usize,
    pub j: usize,
    pub span: f64,
}

/// Cluster decomposition of the univariate tropical point set.
#[derive(Debug, Clone, Serialize)]
pub struct Clusters1D {
    pub epsilon: f64,
    pub components: Vec<Cluster>,
}

impl Clusters1D {
    /// Largest component cardinality s, the constant entering the
    /// (2s-1) log3/delta root-proximity bound.
    pub fn max_cardinality(&self) -> usize {
        self.components.iter().map(|c| c.count).max().unwrap_or(0)
    }

    /// Index of the component whose closed epsilon-neighborhood contains x,
    /// if any.
    pub fn component_of(&self, x: f64) -> Option<usize> {
        self.components
            .iter()
            .position(|c| x >= c.w_min - self.epsilon && x <= c.w_max + self.epsilon)
    }
}

/// Merge consecutive tropical points closer than 2 log3/delta.
pub fn clusters_1d(g: &ExpSum) -> Result<Clusters1D> {
    let trop = trop_points_1d(g)?;
    let delta = minimal_spacing(g)?.delta;
    let epsilon = 3.0f64.ln() / delta;
    let mut components = Vec::new();
    let pts = &trop.points;
    let mut start = 0;
    for k in 0..pts.len() {
        if k + 1 < pts.len() && pts[k + 1].w - pts[k].w < 2.0 * epsilon {
            continue;
        }
        let run = &pts[start..=k];
        let (i, j) = (run[0].left_index, run[run.len() - 1].right_index);
        components.push(Cluster {
            w_min: run[0].w,
            w_max: run[run.len() - 1].w,
            count: run.len(),
            i,
            j,
            span: g.freq1(j) - g.freq1(i),
        });
        start = k + 1;
    }
    Ok(Clusters1D {
        epsilon,
        components,
    })
}

/// Open interval (min Trop - log2/delta, max Trop + log2/delta) containing
/// every root's real part.
pub fn root_interval(g: &ExpSum) -> Result<(f64, f64)> {
    let trop = trop_points_1d(g)?;
    let delta = minimal_spacing(g)?.delta;
    let pad = std::f64::consts::LN_2 / delta;
    Ok((trop.min() - pad, trop.max() + pad))
}

/// Closed vertical strips [w1 + log3/delta, w2 - log3/delta] between
/// consecutive tropical points at least 2 log3/delta apart; they contain no
/// roots.
pub fn root_free_strips(g: &ExpSum) -> Result<Vec<(f64, f64)>> {
    let trop = trop_points_1d(g)?;
    let delta = minimal_spacing(g)?.delta;
    let pad = 3.0f64.ln() / delta;
    Ok(trop
        .points
        .windows(2)
        .filter(|w| w[1].w - w[0].w >= 2.0 * pad)
        .map(|w| (w[0].w + pad, w[1].w - pad))
        .collect())
}

/// One closed half-space normal . x <= offset.
#[derive(Debug, Clone, Serialize)]
pub struct HalfSpace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// A cell of the polyhedral complex induced by Trop(g): the face of the
/// variety containing the query point when >= 2 terms attain the maximum
/// there, otherwise the closure of the complement component around it.
#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    pub halfspaces: Vec<HalfSpace>,
    pub active_set: Vec<usize>,
    pub dim: usize,
}

impl Cell {
    pub fn system(&self) -> LinearSystem {
        LinearSystem {
            m: self.halfspaces.iter().map(|h| h.normal.clone()).collect(),
            c: self.halfspaces.iter().map(|h| h.offset).collect(),
        }
    }

    /// Number of distinct bounding hyperplanes (an equality pair counts
    /// once); this is what stays below t(t-1)/2.
    pub fn hyperplane_count(&self) -> usize {
        let mut seen: Vec<(Vec<f64>, f64)> = Vec::new();
        for h in &self.halfspaces {
            let nn = linalg::norm(&h.normal);
            let mut key: Vec<f64> = h.normal.iter().map(|x| x / nn).collect();
            let mut off = h.offset / nn;
            if key.iter().find(|x| x.abs() > 1e-12).is_some_and(|x| *x < 0.0) {
                key = key.iter().map(|x| -x).collect();
                off = -off;
            }
            let dup = seen.iter().any(|(k, o)| {
                (o - off).abs() <= 1e-9
                    && k.iter().zip(&key).all(|(a, b)| (a - b).abs() <= 1e-9)
            });
            if !dup {
                seen.push((key, off));
            }
        }
        seen.len()
    }
}

/// Relative tolerance for "the maximum is attained at least twice".
pub fn active_tolerance(values: &[f64]) -> f64 {
    1e-9 * (1.0 + values.iter().map(|v| v.abs()).fold(0.0, f64::max))
}

/// Terms attaining max_j (a_j . w + beta_j) at w, up to the active tolerance.
pub fn active_terms(g: &ExpSum, w: &[f64]) -> Vec<usize> {
    let values: Vec<f64> = (0..g.t())
        .map(|j| linalg::dot(g.freq(j), w) + g.beta(j))
        .collect();
    let vmax = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tau = active_tolerance(&values);
    (0..g.t()).filter(|&j| values[j] >= vmax - tau).collect()
}

/// The cell containing w, as an irredundant half-space description: active
/// terms tie pairwise (equality pairs) and dominate every inactive term.
pub fn cell_query(g: &ExpSum, w: &[f64]) -> Result<Cell> {
    let n = g.n();
    if w.len() != n {
        return Err(Error::InvalidInput(format!("cell_query: point must have length {n}")));
    }
    if !w.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite("cell_query point"));
    }
    let active = active_terms(g, w);
    let j0 = active[0];
    let mut m: Vec<Vec<f64>> = Vec::new();
    let mut c: Vec<f64> = Vec::new();
    for &j in &active[1..] {
        let normal = linalg::sub(g.freq(j), g.freq(j0));
        let offset = g.beta(j0) - g.beta(j);
        m.push(normal.clone());
        c.push(offset);
        m.push(linalg::scale(&normal, -1.0));
        c.push(-offset);
    }
    for j in 0..g.t() {
        if active.contains(&j) {
            continue;
        }
        for &k in &active {
            m.push(linalg::sub(g.freq(j), g.freq(k)));
            c.push(g.beta(k) - g.beta(j));
        }
    }
    let reduced = lp::remove_redundant(&LinearSystem::new(m, c)?)?;
    let eq_normals: Vec<Vec<f64>> = active[1..]
        .iter()
        .map(|&j| linalg::sub(g.freq(j), g.freq(j0)))
        .collect();
    Ok(Cell {
        halfspaces: reduced
            .m
            .into_iter()
            .zip(reduced.c)
            .map(|(normal, offset)| HalfSpace { normal, offset })
            .collect(),
        active_set: active,
        dim: n - linalg::rank(&eq_normals),
    })
}

/// Vertices of Trop(g): points where n+1 affinely independent terms tie at
/// the maximum. Supported for n <= 4.
pub fn trop_vertices(g: &ExpSum) -> Result<Vec<Vec<f64>>> {
    use itertools::Itertools;
    let n = g.n();
    if n > 4 {
        return Err(Error::InvalidInput(format!(
            "vertex enumeration supports dimension <= 4, got {n}"
        )));
    }
    if g.t() < n + 1 {
        return Ok(Vec::new());
    }
    let mut found: Vec<Vec<f64>> = Vec::new();
    for subset in (0..g.t()).combinations(n + 1) {
        let j0 = subset[0];
        let rows: Vec<Vec<f64>> = subset[1..]
            .iter()
            .map(|&j| linalg::sub(g.freq(j), g.freq(j0)))
            .collect();
        let rhs: Vec<f64> = subset[1..]
            .iter()
            .map(|&j| g.beta(j0) - g.beta(j))
            .collect();
        let Some(x) = linalg::solve(&rows, &rhs) else {
            continue;
        };
        let values: Vec<f64> = (0..g.t())
            .map(|j| linalg::dot(g.freq(j), &x) + g.beta(j))
            .collect();
        let vmax = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if values[j0] >= vmax - active_tolerance(&values) {
            found.push(x);
        }
    }
    Ok(lp::dedup_points(found))
}

/// Distance from w to Trop(g). Exact for n <= 3 (and always when w lies on
/// the variety); for n > 3 a deterministic lower bound via facet-hyperplane
/// distances, flagged approximate.
#[derive(Debug, Clone, Serialize)]
pub struct TropDistance {
    pub distance: f64,
    pub exact: bool,
}

pub fn distance_to_trop(g: &ExpSum, w: &[f64]) -> Result<TropDistance> {
    let n = g.n();
    let cell = cell_query(g, w)?;
    if cell.active_set.len() >= 2 {
        return Ok(TropDistance {
            distance: 0.0,
            exact: true,
        });
    }
    if n == 1 {
        let trop = trop_points_1d(g)?;
        let d = trop
            .values()
            .iter()
            .map(|p| (p - w[0]).abs())
            .fold(f64::INFINITY, f64::min);
        return Ok(TropDistance {
            distance: d,
            exact: true,
        });
    }
    let sys = cell.system();
    if n > 3 {
        let d = sys
            .m
            .iter()
            .zip(&sys.c)
            .map(|(row, &ci)| (ci - linalg::dot(row, w)) / linalg::norm(row))
            .fold(f64::INFINITY, f64::min);
        return Ok(TropDistance {
            distance: d.max(0.0),
            exact: false,
        });
    }
    // project onto every face affine hull (row subsets of size 1..=n), keep
    // feasible feet
    use itertools::Itertools;
    let mut best = f64::INFINITY;
    for size in 1..=n.min(sys.nrows()) {
        for subset in (0..sys.nrows()).combinations(size) {
            if let Some(foot) = project_onto_rows(&sys, &subset, w) {
                let slackscale = 1.0 + linalg::norm(&foot);
                if sys.min_slack(&foot) >= -1e-7 * slackscale {
                    best = best.min(linalg::norm(&linalg::sub(&foot, w)));
                }
            }
        }
    }
    Ok(TropDistance {
        distance: best,
        exact: true,
    })
}

/// Orthogonal projection of w onto {x : m_i x = c_i, i in subset}, via the
/// normal equations; None when the rows are dependent.
fn project_onto_rows(sys: &LinearSystem, subset: &[usize], w: &[f64]) -> Option<Vec<f64>> {
    let k = subset.len();
    let mut gram = vec![vec![0.0; k]; k];
    let mut rhs = vec![0.0; k];
    for (p, &i) in subset.iter().enumerate() {
        for (q, &j) in subset.iter().enumerate() {
            gram[p][q] = linalg::dot(&sys.m[i], &sys.m[j]);
        }
        rhs[p] = sys.c[i] - linalg::dot(&sys.m[i], w);
    }
    let lambda = linalg::solve(&gram, &rhs)?;
    let mut foot = w.to_vec();
    for (p, &i) in subset.iter().enumerate() {
        foot = linalg::add_scaled(&foot, &sys.m[i], lambda[p]);
    }
    Some(foot)
}

/// One maximal piece of the bivariate tropical 1-skeleton carried by the
/// tie line of a term pair, clipped to a bounding box.
#[derive(Debug, Clone, Serialize)]
pub struct SkeletonSegment {
    pub pair: (usize, usize),
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl SkeletonSegment {
    pub fn endpoints(&self) -> ([f64; 2], [f64; 2]) {
        ([self.x1, self.y1], [self.x2, self.y2])
    }

    pub fn len(&self) -> f64 {
        ((self.x2 - self.x1).powi(2) + (self.y2 - self.y1).powi(2)).sqrt()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0.0
    }
}

/// The 1-skeleton of a bivariate Trop(g) inside [xr] x [yr]: for every term
/// pair, the part of its tie line where the pair attains the maximum.
pub fn skeleton_2d(
    g: &ExpSum,
    xr: (f64, f64),
    yr: (f64, f64),
) -> Result<Vec<SkeletonSegment>> {
    if g.n() != 2 {
        return Err(Error::InvalidInput(format!(
            "skeleton_2d expects a bivariate sum, got n = {}",
            g.n()
        )));
    }
    let mut out = Vec::new();
    for p in 0..g.t() {
        for q in p + 1..g.t() {
            let normal = linalg::sub(g.freq(p), g.freq(q));
            let rhs = g.beta(q) - g.beta(p);
            let nn = linalg::dot(&normal, &normal);
            let x0 = linalg::scale(&normal, rhs / nn);
            let dir = [-normal[1], normal[0]];
            let dn = linalg::norm(&dir);
            let dir = [dir[0] / dn, dir[1] / dn];

            let mut lo = f64::NEG_INFINITY;
            let mut hi = f64::INFINITY;
            for j in 0..g.t() {
                if j == p || j == q {
                    continue;
                }
                // (a_j - a_p) . (x0 + s dir) + beta_j - beta_p <= 0
                let d = linalg::sub(g.freq(j), g.freq(p));
                let coef = d[0] * dir[0] + d[1] * dir[1];
                let cons = linalg::dot(&d, &x0) + g.beta(j) - g.beta(p);
                if coef.abs() <= 1e-12 {
                    if cons > 1e-9 {
                        lo = f64::INFINITY;
                        break;
                    }
                } else if coef > 0.0 {
                    hi = hi.min(-cons / coef);
                } else {
                    lo = lo.max(-cons / coef);
                }
            }
            for axis in 0..2 {
                let (amin, amax) = if axis == 0 { xr } else { yr };
                let (x0a, dira) = (x0[axis], dir[axis]);
                if dira.abs() <= 1e-15 {
                    if x0a < amin || x0a > amax {
                        lo = f64::INFINITY;
                        break;
                    }
                } else {
                    let (s1, s2) = ((amin - x0a) / dira, (amax - x0a) / dira);
                    lo = lo.max(s1.min(s2));
                    hi = hi.min(s1.max(s2));
                }
            }
            if lo < hi && (hi - lo) > 1e-12 {
                out.push(SkeletonSegment {
                    pair: (p, q),
                    x1: x0[0] + lo * dir[0],
                    y1: x0[1] + lo * dir[1],
                    x2: x0[0] + hi * dir[0],
                    y2: x0[1] + hi * dir[1],
                });
            }
        }
    }
    Ok(out)
}
