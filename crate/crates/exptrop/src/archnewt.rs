//! Lifted point set (a_j, -Re b_j) and, for univariate sums, its lower
//! convex hull. The slopes of the lower edges are exactly the tropical
//! points, so everything downstream in one variable starts here.

use serde::Serialize;

use crate::expsum::ExpSum;
use crate::{Error, Result};

/// The lifted points (a_j, h_j) with h_j = -Re(b_j), in term order.
#[derive(Debug, Clone, Serialize)]
pub struct LiftedPoints {
    pub n: usize,
    pub points: Vec<(Vec<f64>, f64)>,
}

pub fn lift(g: &ExpSum) -> LiftedPoints {
    LiftedPoints {
        n: g.n(),
        points: g
            .terms()
            .iter()
            .map(|t| (t.a.clone(), -t.b_re))
            .collect(),
    }
}

/// One lower edge between the lifted points of two terms.
#[derive(Debug, Clone, Serialize)]
pub struct Edge {
    pub slope: f64,
    pub left_index: usize,
    pub right_index: usize,
}

/// Lower convex chain of a univariate lifted point set. `vertex_indices`
/// are term indices in increasing frequency order; collinear interior
/// points are not vertices but are recorded per edge in `on_edge`.
#[derive(Debug, Clone, Serialize)]
pub struct LowerHull1D {
    pub vertex_indices: Vec<usize>,
    pub edges: Vec<Edge>,
    pub on_edge: Vec<Vec<usize>>,
}

impl LowerHull1D {
    pub fn slopes(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.slope).collect()
    }

    fn edge_of_slope(&self, w: f64) -> Result<&Edge> {
        let tol = 1e-9 * (1.0 + w.abs());
        self.edges
            .iter()
            .find(|e| (e.slope - w).abs() <= tol)
            .ok_or(Error::SlopeNotFound(w))
    }
}

/// Lower convex chain by a monotone scan over frequency-sorted points.
/// Collinearity uses a cross-product test with threshold 1e-9 scaled by the
/// coordinate spreads involved.
pub fn lower_hull_1d(p: &LiftedPoints) -> Result<LowerHull1D> {
    if p.n != 1 {
        return Err(Error::NotUnivariate("lower_hull_1d"));
    }
    let x = |j: usize| p.points[j].0[0];
    let h = |j: usize| p.points[j].1;

    let mut order: Vec<usize> = (0..p.points.len()).collect();
    order.sort_by(|&i, &j| x(i).total_cmp(&x(j)));

    let mut chain: Vec<usize> = Vec::new();
    for &j in &order {
        while chain.len() >= 2 {
            let a = chain[chain.len() - 2];
            let b = chain[chain.len() - 1];
            let (dx1, dy1) = (x(b) - x(a), h(b) - h(a));
            let (dx2, dy2) = (x(j) - x(a), h(j) - h(a));
            let cross = dx1 * dy2 - dy1 * dx2;
            let tol = 1e-9 * (1.0 + dx2.abs() * (dy1.abs() + dy2.abs()));
            if cross <= tol {
                chain.pop();
            } else {
                break;
            }
        }
        chain.push(j);
    }

    let mut edges = Vec::with_capacity(chain.len().saturating_sub(1));
    let mut on_edge = Vec::with_capacity(edges.capacity());
    for pair in chain.windows(2) {
        let (l, r) = (pair[0], pair[1]);
        let slope = (h(r) - h(l)) / (x(r) - x(l));
        let line_tol = 1e-9 * (1.0 + h(l).abs() + h(r).abs() + slope.abs() * (x(r) - x(l)));
        let mid: Vec<usize> = order
            .iter()
            .copied()
            .filter(|&j| {
                j != l && j != r && x(j) > x(l) && x(j) < x(r) && {
                    let above = h(j) - (h(l) + slope * (x(j) - x(l)));
                    above.abs() <= line_tol
                }
            })
            .collect();
        edges.push(Edge {
            slope,
            left_index: l,
            right_index: r,
        });
        on_edge.push(mid);
    }
    debug_assert!(edges.windows(2).all(|w| w[0].slope < w[1].slope));
    Ok(LowerHull1D {
        vertex_indices: chain,
        edges,
        on_edge,
    })
}

/// Term index of the right endpoint of the lower edge with slope w.
pub fn right_vertex_index(h: &LowerHull1D, w: f64) -> Result<usize> {
    Ok(h.edge_of_slope(w)?.right_index)
}

/// Term index of the left endpoint of the lower edge with slope w.
pub fn left_vertex_index(h: &LowerHull1D, w: f64) -> Result<usize> {
    Ok(h.edge_of_slope(w)?.left_index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsum::{ExpSum, Term};

    fn euler() -> ExpSum {
        // e^z + 1, term order (1, 0)
        ExpSum::univariate(&[(1.0, 0.0, 0.0), (0.0, 0.0, 0.0)]).unwrap()
    }

    fn euler_squared() -> ExpSum {
        // (e^z + 1)^2 expanded: e^{2z} + 2 e^z + 1, term order (0, 1, 2)
        ExpSum::univariate(&[(0.0, 0.0, 0.0), (1.0, 2.0f64.ln(), 0.0), (2.0, 0.0, 0.0)]).unwrap()
    }

    #[test]
    fn lift_keeps_input_order_and_negates_heights() {
        let p = lift(&euler());
        assert_eq!(p.points, vec![(vec![1.0], 0.0), (vec![0.0], 0.0)]);

        let p = lift(&euler_squared());
        assert_eq!(p.points[1], (vec![1.0], -2.0f64.ln()));

        let line = ExpSum::new(
            2,
            vec![
                Term::new(vec![0.0, 0.0], 0.0, 0.0),
                Term::new(vec![1.0, 0.0], 0.0, std::f64::consts::PI),
                Term::new(vec![0.0, 1.0], 0.0, std::f64::consts::PI),
            ],
        )
        .unwrap();
        assert!(lift(&line).points.iter().all(|(_, h)| *h == 0.0));
    }

    #[test]
    fn flat_triple_collapses_to_one_edge() {
        let g = ExpSum::univariate(&[(0.0, 0.0, 0.0), (1.0, 0.0, 0.0), (5.0, 0.0, 0.0)]).unwrap();
        let hull = lower_hull_1d(&lift(&g)).unwrap();
        assert_eq!(hull.vertex_indices, vec![0, 2]);
        assert_eq!(hull.edges.len(), 1);
        assert_eq!(hull.edges[0].slope, 0.0);
        assert_eq!(hull.on_edge[0], vec![1]);
    }

    #[test]
    fn euler_squared_has_symmetric_slopes() {
        let hull = lower_hull_1d(&lift(&euler_squared())).unwrap();
        let slopes = hull.slopes();
        assert_eq!(slopes.len(), 2);
        assert!((slopes[0] + 2.0f64.ln()).abs() < 1e-12);
        assert!((slopes[1] - 2.0f64.ln()).abs() < 1e-12);
        assert!(hull.on_edge.iter().all(|m| m.is_empty()));
    }

    #[test]
    fn two_points_one_edge() {
        let hull = lower_hull_1d(&lift(&euler())).unwrap();
        assert_eq!(hull.edges.len(), 1);
        assert_eq!(hull.edges[0].slope, 0.0);
        // sorted by frequency: term 1 (freq 0) then term 0 (freq 1)
        assert_eq!(hull.vertex_indices, vec![1, 0]);
    }

    #[test]
    fn vertex_lookup_by_slope() {
        let hull = lower_hull_1d(&lift(&euler_squared())).unwrap();
        assert_eq!(right_vertex_index(&hull, -(2.0f64.ln())).unwrap(), 1);
        assert_eq!(left_vertex_index(&hull, -(2.0f64.ln())).unwrap(), 0);
        assert_eq!(right_vertex_index(&hull, 2.0f64.ln()).unwrap(), 2);

        let hull = lower_hull_1d(&lift(&euler())).unwrap();
        assert_eq!(right_vertex_index(&hull, 0.0).unwrap(), 0);
        assert!(matches!(
            right_vertex_index(&hull, 0.5),
            Err(Error::SlopeNotFound(_))
        ));
    }

    #[test]
    fn rejects_multivariate_input() {
        let line = ExpSum::new(
            2,
            vec![Term::unit(vec![0.0, 0.0]), Term::unit(vec![1.0, 0.0])],
        )
        .unwrap();
        assert!(matches!(
            lower_hull_1d(&lift(&line)),
            Err(Error::NotUnivariate(_))
        ));
    }

    #[test]
    fn every_point_on_or_above_chain() {
        // valley shape with one point well above
        let g = ExpSum::univariate(&[
            (0.0, 0.0, 0.0),
            (1.0, 3.0, 0.0),
            (2.0, -5.0, 0.0),
            (3.0, 4.0, 0.0),
        ])
        .unwrap();
        let hull = lower_hull_1d(&lift(&g)).unwrap();
        assert_eq!(hull.vertex_indices, vec![0, 1, 3]);
        // term 2 lifted to height 5 sits above both edges
        let p = lift(&g);
        for e in &hull.edges {
            let (xl, hl) = (p.points[e.left_index].0[0], p.points[e.left_index].1);
            for (a, h) in &p.points {
                if a[0] >= xl && a[0] <= p.points[e.right_index].0[0] {
                    assert!(h - (hl + e.slope * (a[0] - xl)) >= -1e-9);
                }
            }
        }
    }

    #[test]
    fn shear_shifts_slopes() {
        let g = euler_squared();
        let c = 0.7;
        let sheared = ExpSum::univariate(&[
            (0.0, 0.0 + c * 0.0 + 0.3, 0.0),
            (1.0, 2.0f64.ln() + c * 1.0 + 0.3, 0.0),
            (2.0, 0.0 + c * 2.0 + 0.3, 0.0),
        ])
        .unwrap();
        let s0 = lower_hull_1d(&lift(&g)).unwrap().slopes();
        let s1 = lower_hull_1d(&lift(&sheared)).unwrap().slopes();
        for (a, b) in s0.iter().zip(&s1) {
            assert!((b - (a - c)).abs() < 1e-12);
        }
    }
}
