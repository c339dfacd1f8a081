//! A bivariate tropical curve: vertices, the 1-skeleton as segments, and the
//! polyhedral cell that contains a query point.

use exptrop::expsum::Term;
use exptrop::tropical::{cell_query, skeleton_2d, trop_vertices};
use exptrop::ExpSum;
use std::f64::consts::TAU;

fn main() -> exptrop::Result<()> {
    // Seven terms with binomial coefficients, frequencies on the unit circle.
    let binom = [1.0f64, 7.0, 21.0, 35.0, 35.0, 21.0, 7.0];
    let g = ExpSum::new(
        2,
        (0..7)
            .map(|j| {
                let phi = TAU * j as f64 / 7.0;
                Term::new(vec![phi.cos(), phi.sin()], binom[j].ln(), 0.0)
            })
            .collect(),
    )?;

    let vertices = trop_vertices(&g)?;
    println!("{} vertices:", vertices.len());
    for v in &vertices {
        println!("  ({:.6}, {:.6})", v[0], v[1]);
    }

    let segments = skeleton_2d(&g, (-6.0, 9.0), (-6.0, 6.0))?;
    println!("{} skeleton segments in the box, longest:", segments.len());
    let longest = segments
        .iter()
        .max_by(|a, b| a.len().total_cmp(&b.len()))
        .unwrap();
    let (p, q) = longest.endpoints();
    println!(
        "  ({:.3}, {:.3}) -- ({:.3}, {:.3}) between terms {:?}",
        p[0], p[1], q[0], q[1], longest.pair
    );

    let cell = cell_query(&g, &[2.0, 0.0])?;
    println!(
        "cell at (2, 0): dimension {}, active terms {:?}, {} half-space(s)",
        cell.dim,
        cell.active_set,
        cell.halfspaces.len()
    );
    Ok(())
}
