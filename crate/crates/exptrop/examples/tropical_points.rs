//! Tropical points of a univariate exponential sum and the strip structure
//! they induce: where roots can live, where they cannot, and how the points
//! group into clusters.

use exptrop::expsum::minimal_spacing;
use exptrop::tropical::{clusters_1d, root_free_strips, root_interval, trop_points_1d};
use exptrop::ExpSum;

fn main() -> exptrop::Result<()> {
    // g(z) = 1 + e^z + 3 e^{5z}: slopes of the lower hull of the lifted
    // frequency points.
    let g = ExpSum::univariate(&[
        (0.0, 0.0, 0.0),
        (1.0, 0.0, 0.0),
        (5.0, 3f64.ln(), 0.0),
    ])?;
    let delta = minimal_spacing(&g)?.delta;
    println!("t = {}, delta = {delta}", g.t());

    let points = trop_points_1d(&g)?;
    println!("tropical points: {:?}", points.values());

    let (lo, hi) = root_interval(&g)?;
    println!("all roots have Re z in ({lo:.6}, {hi:.6})");

    for (a, b) in root_free_strips(&g)? {
        println!("no roots with Re z in [{a:.6}, {b:.6}]");
    }

    let clusters = clusters_1d(&g)?;
    println!(
        "{} cluster(s) at neighborhood radius {:.6}:",
        clusters.components.len(),
        clusters.epsilon
    );
    for c in &clusters.components {
        println!(
            "  [{:.6}, {:.6}]  {} point(s), frequency span {}",
            c.w_min, c.w_max, c.count, c.span
        );
    }
    Ok(())
}
