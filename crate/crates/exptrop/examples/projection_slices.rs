//! Reduce a multivariate sum to univariate slices: draw a random direction
//! that keeps the frequencies well separated, then restrict the sum to a
//! line and read off the one-dimensional tropical data.

use exptrop::expsum::{minimal_spacing, slice_to_line, Term};
use exptrop::metric::sample_projection;
use exptrop::tropical::trop_points_1d;
use exptrop::ExpSum;
use std::f64::consts::TAU;

fn main() -> exptrop::Result<()> {
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
    let delta = minimal_spacing(&g)?.delta;
    println!("spacing {delta:.6}");

    for seed in 0..3u64 {
        let p = sample_projection(&g, seed)?;
        println!(
            "seed {seed}: theta = ({:.6}, {:.6})  projected spacing {:.6} >= {:.6}  after {} draw(s)",
            p.theta[0], p.theta[1], p.spacing, p.threshold, p.draws
        );
        let slice = slice_to_line(&g, &[0.0, 0.0], &p.theta)?;
        let points = trop_points_1d(&slice)?;
        println!(
            "  slice through the origin: {} terms, tropical points {:?}",
            slice.t(),
            points
                .values()
                .iter()
                .map(|w| (w * 1e4).round() / 1e4)
                .collect::<Vec<_>>()
        );
    }
    Ok(())
}
