//! Isolate every root in a rectangle by recursive bisection of the winding
//! count, then compare the real parts against the tropical prediction.

use exptrop::expsum::minimal_spacing;
use exptrop::roots::isolate_roots;
use exptrop::tropical::{root_interval, trop_points_1d};
use exptrop::{ExpSum, Rectangle};
use std::f64::consts::TAU;

fn main() -> exptrop::Result<()> {
    // g(z) = 1 + e^z + e^{5z}: all three lifted points lie on one line, so
    // there is a single tropical point carrying five roots per period.
    let g = ExpSum::univariate(&[
        (0.0, 0.0, 0.0),
        (1.0, 0.0, 0.0),
        (5.0, 0.0, 0.0),
    ])?;
    let (lo, hi) = root_interval(&g)?;
    let rect = Rectangle::new(lo, hi, 0.0, TAU)?;
    let roots = isolate_roots(&g, &rect)?;

    let tvals = trop_points_1d(&g)?.values();
    let delta = minimal_spacing(&g)?.delta;
    println!("tropical points {tvals:?}, distance cap {:.6}", 3f64.ln() / delta);
    println!("{} root(s) in one period:", roots.len());
    for r in &roots {
        let d = tvals
            .iter()
            .map(|w| (r.re - w).abs())
            .fold(f64::INFINITY, f64::min);
        println!(
            "  {:.9} + {:.9}i  mult {}  dist to Trop {:.6}{}",
            r.re,
            r.im,
            r.multiplicity,
            d,
            if r.coarse { "  (cluster box center)" } else { "" }
        );
    }
    Ok(())
}
