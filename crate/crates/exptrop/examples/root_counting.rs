//! Counting roots without finding them: the argument-principle oracle on a
//! rectangle, and a-priori interval bounds for a whole horizontal strip.

use exptrop::roots::{strip_count_bounds, winding_count_detailed, wv_bound};
use exptrop::{ExpSum, Rectangle};
use std::f64::consts::TAU;

fn main() -> exptrop::Result<()> {
    // g(z) = 1 + e^z + e^{5z}, three strips high.
    let g = ExpSum::univariate(&[
        (0.0, 0.0, 0.0),
        (1.0, 0.0, 0.0),
        (5.0, 0.0, 0.0),
    ])?;
    let (u, v) = (0.0, 3.0 * TAU);

    let interval = wv_bound(&g, u, v)?;
    println!(
        "strip Im z in [{u}, {v:.4}]: count in [{}, {}] (center {:.3}, slack {:.3})",
        interval.lower(),
        interval.upper(),
        interval.center,
        interval.radius
    );

    let counts = strip_count_bounds(&g, u, v)?;
    for (cluster, iv) in &counts.per_cluster {
        println!(
            "  over cluster [{:.3}, {:.3}]: [{}, {}]",
            cluster.w_min,
            cluster.w_max,
            iv.lower(),
            iv.upper()
        );
    }

    let rect = Rectangle::new(-0.7, 0.7, 0.0, 3.0 * TAU)?;
    let report = winding_count_detailed(&g, &rect)?;
    println!(
        "oracle on [{}, {}] x [{}, {:.4}]: exactly {} root(s)",
        rect.x1, rect.x2, rect.u, rect.v, report.count
    );
    println!(
        "  {} quadrature panels, {} refinement round(s), residual {:.2e}",
        report.panels, report.refinements, report.residual
    );
    Ok(())
}
