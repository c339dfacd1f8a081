//! Dense linear programming over systems Mx <= c with free variables:
//! two-phase tableau simplex with Bland's rule, redundancy removal by
//! per-row subproblems, and vertex enumeration for small dimension.
//!
//! Sizes here are tiny by LP standards (N up to a few hundred rows, n <= 4),
//! so everything is a plain dense tableau and clarity wins over sparsity.

use itertools::Itertools;

use crate::linalg;
use crate::{Error, Result};

/// Feasibility tolerance shared by solve, redundancy tests and vertex checks.
pub const FEAS_TOL: f64 = 1e-8;

const PIVOT_TOL: f64 = 1e-11;

/// The system Mx <= c, rows m_i.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub m: Vec<Vec<f64>>,
    pub c: Vec<f64>,
}

impl LinearSystem {
    pub fn new(m: Vec<Vec<f64>>, c: Vec<f64>) -> Result<Self> {
        if m.is_empty() || m.len() != c.len() {
            return Err(Error::InvalidInput(
                "linear system needs N >= 1 rows with matching right-hand sides".into(),
            ));
        }
        let dim = m[0].len();
        if dim == 0 || m.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput("ragged or empty constraint rows".into()));
        }
        if m.iter().flatten().any(|x| !x.is_finite()) || c.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("linear system"));
        }
        Ok(LinearSystem { m, c })
    }

    pub fn nrows(&self) -> usize {
        self.m.len()
    }

    pub fn dim(&self) -> usize {
        self.m[0].len()
    }

    /// Membership with the shared feasibility tolerance.
    pub fn contains(&self, x: &[f64]) -> bool {
        self.m
            .iter()
            .zip(&self.c)
            .all(|(row, &ci)| linalg::dot(row, x) <= ci + FEAS_TOL)
    }

    /// Signed slack c_i - m_i . x of the tightest constraint at x.
    pub fn min_slack(&self, x: &[f64]) -> f64 {
        self.m
            .iter()
            .zip(&self.c)
            .map(|(row, &ci)| ci - linalg::dot(row, x))
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal { optimum: f64, argmax: Vec<f64> },
    Unbounded,
    Infeasible,
}

/// Maximize objective . x over Mx <= c.
pub fn solve(sys: &LinearSystem, objective: &[f64]) -> Result<LpOutcome> {
    if objective.len() != sys.dim() {
        return Err(Error::InvalidInput(format!(
            "objective must have length {}",
            sys.dim()
        )));
    }
    simplex(sys, objective, None)
}

/// Drop every constraint whose removal leaves the feasible region unchanged:
/// row i goes iff max m_i . x over the remaining rows stays <= c_i + tol.
/// Opposing rows forming an equality pair are kept or dropped together.
pub fn remove_redundant(sys: &LinearSystem) -> Result<LinearSystem> {
    match simplex(sys, &vec![0.0; sys.dim()], None)? {
        LpOutcome::Infeasible => return Err(Error::Infeasible),
        _ => {}
    }
    let partner = equality_partners(sys);
    let n_rows = sys.nrows();
    let mut kept = vec![true; n_rows];
    let mut decided = vec![false; n_rows];

    for i in 0..n_rows {
        if decided[i] {
            continue;
        }
        let unit: Vec<usize> = match partner[i] {
            Some(j) if kept[j] && !decided[j] => vec![i, j],
            _ => vec![i],
        };
        for &r in &unit {
            decided[r] = true;
        }
        let rest: Vec<usize> = (0..n_rows)
            .filter(|r| kept[*r] && !unit.contains(r))
            .collect();
        if rest.is_empty() {
            continue;
        }
        let sub = LinearSystem {
            m: rest.iter().map(|&r| sys.m[r].clone()).collect(),
            c: rest.iter().map(|&r| sys.c[r]).collect(),
        };
        let redundant = unit.iter().all(|&r| {
            match simplex(&sub, &sys.m[r], Some(sys.c[r] + FEAS_TOL)) {
                Ok(LpOutcome::Optimal { optimum, .. }) => optimum <= sys.c[r] + FEAS_TOL,
                _ => false,
            }
        });
        if redundant {
            for &r in &unit {
                kept[r] = false;
            }
        }
    }

    let rows: Vec<usize> = (0..n_rows).filter(|&r| kept[r]).collect();
    LinearSystem::new(
        rows.iter().map(|&r| sys.m[r].clone()).collect(),
        rows.iter().map(|&r| sys.c[r]).collect(),
    )
}

/// A basic feasible solution and the rows active there.
#[derive(Debug, Clone)]
pub struct Vertex {
    pub point: Vec<f64>,
    pub active: Vec<usize>,
}

/// All vertices of the feasible region, by solving every n-subset of rows
/// with an invertible submatrix and keeping the feasible solutions.
pub fn enumerate_vertices(sys: &LinearSystem) -> Result<Vec<Vertex>> {
    let n = sys.dim();
    if n > 4 {
        return Err(Error::InvalidInput(format!(
            "vertex enumeration supports dimension <= 4, got {n}"
        )));
    }
    let mut points: Vec<Vec<f64>> = Vec::new();
    for subset in (0..sys.nrows()).combinations(n) {
        let a: Vec<Vec<f64>> = subset.iter().map(|&i| sys.m[i].clone()).collect();
        let b: Vec<f64> = subset.iter().map(|&i| sys.c[i]).collect();
        let Some(x) = linalg::solve(&a, &b) else {
            continue;
        };
        if !sys.contains(&x) {
            continue;
        }
        points.push(x);
    }
    let points = dedup_points(points);
    Ok(points
        .into_iter()
        .map(|point| {
            let active = (0..sys.nrows())
                .filter(|&i| {
                    let v = linalg::dot(&sys.m[i], &point);
                    (v - sys.c[i]).abs() <= FEAS_TOL * (1.0 + sys.c[i].abs() + v.abs())
                })
                .collect();
            Vertex { point, active }
        })
        .collect())
}

/// Merge points within 1e-8 (1 + |x|), keeping the lexicographically
/// smallest representative of each group.
pub(crate) fn dedup_points(mut points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    points.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    let mut out: Vec<Vec<f64>> = Vec::new();
    'next: for p in points {
        for q in &out {
            let d = linalg::norm(&linalg::sub(&p, q));
            let scale = 1.0 + linalg::norm(q);
            if d <= 1e-8 * scale {
                continue 'next;
            }
        }
        out.push(p);
    }
    out
}

fn equality_partners(sys: &LinearSystem) -> Vec<Option<usize>> {
    let n_rows = sys.nrows();
    let mut partner = vec![None; n_rows];
    for i in 0..n_rows {
        if partner[i].is_some() {
            continue;
        }
        let scale = 1.0
            + sys.m[i].iter().map(|x| x.abs()).fold(0.0, f64::max)
            + sys.c[i].abs();
        for j in i + 1..n_rows {
            if partner[j].is_some() {
                continue;
            }
            let opposite = sys.m[i]
                .iter()
                .zip(&sys.m[j])
                .all(|(a, b)| (a + b).abs() <= 1e-9 * scale)
                && (sys.c[i] + sys.c[j]).abs() <= 1e-9 * scale;
            if opposite {
                partner[i] = Some(j);
                partner[j] = Some(i);
                break;
            }
        }
    }
    partner
}

/// Two-phase tableau simplex, Bland's rule, free variables split as
/// x = x+ - x-. `stop_above`: return early once the running objective
/// exceeds this value (the redundancy test only needs a yes/no).
fn simplex(sys: &LinearSystem, objective: &[f64], stop_above: Option<f64>) -> Result<LpOutcome> {
    let n = sys.dim();
    let n_rows = sys.nrows();
    let n_struct = 2 * n + n_rows;

    // columns: x+ (n) | x- (n) | slack (N) | artificial (as needed) | rhs
    let mut need_art: Vec<usize> = Vec::new();
    for (i, &ci) in sys.c.iter().enumerate() {
        if ci < 0.0 {
            need_art.push(i);
        }
    }
    let n_art = need_art.len();
    let width = n_struct + n_art + 1;
    let mut tab: Vec<Vec<f64>> = Vec::with_capacity(n_rows);
    let mut basis: Vec<usize> = Vec::with_capacity(n_rows);
    let mut next_art = n_struct;
    for i in 0..n_rows {
        let mut row = vec![0.0; width];
        let neg = sys.c[i] < 0.0;
        let sgn = if neg { -1.0 } else { 1.0 };
        for k in 0..n {
            row[k] = sgn * sys.m[i][k];
            row[n + k] = -sgn * sys.m[i][k];
        }
        row[2 * n + i] = sgn;
        row[width - 1] = sgn * sys.c[i];
        if neg {
            row[next_art] = 1.0;
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(2 * n + i);
        }
        tab.push(row);
    }

    if n_art > 0 {
        // phase 1: maximize -(sum of artificials)
        let mut cost = vec![0.0; width - 1];
        for a in n_struct..n_struct + n_art {
            cost[a] = -1.0;
        }
        let value = run_phase(&mut tab, &mut basis, &cost, None)?;
        let value = match value {
            PhaseEnd::Optimal(v) => v,
            PhaseEnd::Unbounded => return Err(Error::IllConditioned),
        };
        if value < -FEAS_TOL {
            return Ok(LpOutcome::Infeasible);
        }
        drive_out_artificials(&mut tab, &mut basis, n_struct)?;
        for row in tab.iter_mut() {
            row.drain(n_struct..width - 1);
        }
    }

    // phase 2
    let mut cost = vec![0.0; n_struct];
    for k in 0..n {
        cost[k] = objective[k];
        cost[n + k] = -objective[k];
    }
    match run_phase(&mut tab, &mut basis, &cost, stop_above)? {
        PhaseEnd::Unbounded => Ok(LpOutcome::Unbounded),
        PhaseEnd::Optimal(optimum) => {
            let mut x = vec![0.0; n];
            for (i, &b) in basis.iter().enumerate() {
                let v = tab[i].last().copied().unwrap();
                if b < n {
                    x[b] += v;
                } else if b < 2 * n {
                    x[b - n] -= v;
                }
            }
            Ok(LpOutcome::Optimal { optimum, argmax: x })
        }
    }
}

enum PhaseEnd {
    Optimal(f64),
    Unbounded,
}

fn run_phase(
    tab: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &[f64],
    stop_above: Option<f64>,
) -> Result<PhaseEnd> {
    let n_rows = tab.len();
    let width = tab[0].len();
    let ncols = cost.len();

    // objective row: z_j - c_j, and current value
    let mut obj = vec![0.0; width];
    for j in 0..ncols {
        obj[j] = -cost[j];
    }
    for i in 0..n_rows {
        let cb = cost[basis[i]];
        if cb != 0.0 {
            for j in 0..width {
                obj[j] += cb * tab[i][j];
            }
        }
    }

    let max_iters = 1000 + 50 * (n_rows + ncols);
    for _ in 0..max_iters {
        if let Some(cut) = stop_above {
            if obj[width - 1] > cut {
                return Ok(PhaseEnd::Optimal(obj[width - 1]));
            }
        }
        // Bland: lowest-index improving column
        let entering = (0..ncols).find(|&j| obj[j] < -1e-9);
        let Some(e) = entering else {
            return Ok(PhaseEnd::Optimal(obj[width - 1]));
        };
        // ratio test; ties resolved by smallest basis variable (Bland)
        let mut best: Option<(f64, usize)> = None;
        for i in 0..n_rows {
            if tab[i][e] > PIVOT_TOL {
                let ratio = tab[i][width - 1] / tab[i][e];
                best = match best {
                    None => Some((ratio, i)),
                    Some((r, bi)) => {
                        if ratio < r - 1e-12 * (1.0 + r.abs())
                            || ((ratio - r).abs() <= 1e-12 * (1.0 + r.abs())
                                && basis[i] < basis[bi])
                        {
                            Some((ratio, i))
                        } else {
                            Some((r, bi))
                        }
                    }
                };
            }
        }
        let Some((_, leave)) = best else {
            return Ok(PhaseEnd::Unbounded);
        };
        pivot(tab, &mut obj[..], leave, e);
        basis[leave] = e;
    }
    Err(Error::IllConditioned)
}

fn pivot(tab: &mut [Vec<f64>], obj: &mut [f64], leave: usize, enter: usize) {
    let width = tab[0].len();
    let p = tab[leave][enter];
    for j in 0..width {
        tab[leave][j] /= p;
    }
    tab[leave][enter] = 1.0;
    for i in 0..tab.len() {
        if i != leave {
            let f = tab[i][enter];
            if f != 0.0 {
                for j in 0..width {
                    tab[i][j] -= f * tab[leave][j];
                }
                tab[i][enter] = 0.0;
            }
        }
    }
    let f = obj[enter];
    if f != 0.0 {
        for j in 0..width {
            obj[j] -= f * tab[leave][j];
        }
        obj[enter] = 0.0;
    }
}

fn drive_out_artificials(
    tab: &mut Vec<Vec<f64>>,
    basis: &mut Vec<usize>,
    n_struct: usize,
) -> Result<()> {
    let mut i = 0;
    while i < tab.len() {
        if basis[i] >= n_struct {
            let width = tab[0].len();
            let col = (0..n_struct).find(|&j| tab[i][j].abs() > PIVOT_TOL);
            match col {
                Some(e) => {
                    let mut dummy = vec![0.0; width];
                    pivot(tab, &mut dummy, i, e);
                    basis[i] = e;
                }
                None => {
                    // all-zero structural row: redundant constraint, drop it
                    tab.remove(i);
                    basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(m: &[&[f64]], c: &[f64]) -> LinearSystem {
        LinearSystem::new(m.iter().map(|r| r.to_vec()).collect(), c.to_vec()).unwrap()
    }

    fn optimum(out: &LpOutcome) -> f64 {
        match out {
            LpOutcome::Optimal { optimum, .. } => *optimum,
            other => panic!("expected optimal, got {other:?}"),
        }
    }

    #[test]
    fn bounded_segment() {
        let s = sys(&[&[1.0], &[-1.0]], &[1.0, 0.0]);
        let out = solve(&s, &[1.0]).unwrap();
        assert!((optimum(&out) - 1.0).abs() < 1e-9);
        if let LpOutcome::Optimal { argmax, .. } = out {
            assert!((argmax[0] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn unbounded_below() {
        let s = sys(&[&[1.0]], &[1.0]);
        assert!(matches!(solve(&s, &[-1.0]).unwrap(), LpOutcome::Unbounded));
    }

    #[test]
    fn infeasible_pair() {
        let s = sys(&[&[1.0], &[-1.0]], &[0.0, -1.0]);
        assert!(matches!(solve(&s, &[1.0]).unwrap(), LpOutcome::Infeasible));
    }

    #[test]
    fn phase_one_negative_rhs() {
        // {x >= 1, x <= 3}
        let s = sys(&[&[-1.0], &[1.0]], &[-1.0, 3.0]);
        let out = solve(&s, &[1.0]).unwrap();
        assert!((optimum(&out) - 3.0).abs() < 1e-9);
        let out = solve(&s, &[-1.0]).unwrap();
        assert!((optimum(&out) + 1.0).abs() < 1e-9);
    }

    #[test]
    fn optimal_point_is_feasible() {
        let s = sys(
            &[&[1.0, 1.0], &[-1.0, 2.0], &[0.0, -1.0], &[-1.0, 0.0]],
            &[2.0, 3.0, 0.0, 0.5],
        );
        for obj in [[1.0, 0.3], [-0.5, 1.0], [0.0, -1.0]] {
            if let LpOutcome::Optimal { argmax, .. } = solve(&s, &obj).unwrap() {
                assert!(s.min_slack(&argmax) >= -FEAS_TOL);
            } else {
                panic!("expected optimum");
            }
        }
    }

    #[test]
    fn duplicate_row_dropped() {
        let square = sys(
            &[&[1.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0], &[0.0, -1.0], &[0.0, 1.0]],
            &[1.0, 0.0, 1.0, 0.0, 1.0],
        );
        let r = remove_redundant(&square).unwrap();
        assert_eq!(r.nrows(), 4);
    }

    #[test]
    fn loose_cap_dropped() {
        let s = sys(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]], &[1.0, 1.0, 3.0]);
        let r = remove_redundant(&s).unwrap();
        assert_eq!(r.nrows(), 2);
        assert!(r.m.iter().all(|row| row != &vec![1.0, 1.0]));
    }

    #[test]
    fn irredundant_triangle_unchanged() {
        let t = sys(&[&[-1.0, 0.0], &[0.0, -1.0], &[1.0, 1.0]], &[0.0, 0.0, 1.0]);
        let r = remove_redundant(&t).unwrap();
        assert_eq!(r.nrows(), 3);
    }

    #[test]
    fn redundancy_removal_idempotent() {
        let s = sys(
            &[&[1.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0], &[0.0, -1.0], &[1.0, 1.0], &[0.5, 0.5]],
            &[1.0, 0.0, 1.0, 0.0, 5.0, 4.0],
        );
        let r1 = remove_redundant(&s).unwrap();
        let r2 = remove_redundant(&r1).unwrap();
        assert_eq!(r1.nrows(), r2.nrows());
        assert_eq!(r1.m, r2.m);
    }

    #[test]
    fn equality_pair_kept_together() {
        // x1 = 1 as a pair, plus a loose cap that must go
        let s = sys(&[&[1.0], &[-1.0], &[1.0]], &[1.0, -1.0, 5.0]);
        let r = remove_redundant(&s).unwrap();
        assert_eq!(r.nrows(), 2);
        assert_eq!(r.c, vec![1.0, -1.0]);
    }

    #[test]
    fn square_vertices() {
        let square = sys(
            &[&[1.0, 0.0], &[-1.0, 0.0], &[0.0, 1.0], &[0.0, -1.0]],
            &[1.0, 0.0, 1.0, 0.0],
        );
        let v = enumerate_vertices(&square).unwrap();
        assert_eq!(v.len(), 4);
        for vert in &v {
            assert_eq!(vert.active.len(), 2);
        }
    }

    #[test]
    fn halfplane_has_no_vertices() {
        let s = sys(&[&[1.0, 0.0]], &[1.0]);
        assert!(enumerate_vertices(&s).unwrap().is_empty());
    }

    #[test]
    fn triangle_vertices() {
        let t = sys(&[&[-1.0, 0.0], &[0.0, -1.0], &[1.0, 1.0]], &[0.0, 0.0, 1.0]);
        let mut v: Vec<Vec<f64>> = enumerate_vertices(&t).unwrap().into_iter().map(|x| x.point).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(v.len(), 3);
        assert!(linalg::norm(&linalg::sub(&v[0], &[0.0, 0.0])) < 1e-9);
        assert!(linalg::norm(&linalg::sub(&v[1], &[0.0, 1.0])) < 1e-9);
        assert!(linalg::norm(&linalg::sub(&v[2], &[1.0, 0.0])) < 1e-9);
    }

    #[test]
    fn row_permutation_leaves_optimum() {
        let s = sys(
            &[&[2.0, 1.0], &[1.0, 3.0], &[-1.0, 0.0], &[0.0, -1.0]],
            &[4.0, 6.0, 0.0, 0.0],
        );
        let p = sys(
            &[&[0.0, -1.0], &[1.0, 3.0], &[2.0, 1.0], &[-1.0, 0.0]],
            &[0.0, 6.0, 4.0, 0.0],
        );
        let a = optimum(&solve(&s, &[1.0, 1.0]).unwrap());
        let b = optimum(&solve(&p, &[1.0, 1.0]).unwrap());
        assert!((a - b).abs() < 1e-8);
    }
}
