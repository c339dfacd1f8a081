//! Project a point onto the tropical set: the explicit nearest-point
//! construction works in any dimension and certifies its answer by landing
//! where the maximum is attained twice.

use exptrop::expsum::Term;
use exptrop::metric::{bounds, nearest_trop_point};
use exptrop::tropical::active_terms;
use exptrop::ExpSum;

fn main() -> exptrop::Result<()> {
    let g = ExpSum::new(
        3,
        vec![
            Term::new(vec![0.0, 0.0, 0.0], 0.0, 0.0),
            Term::new(vec![1.0, 0.0, 0.0], 0.0, 0.0),
            Term::new(vec![0.0, 1.0, 0.0], -1.0, 0.0),
            Term::new(vec![0.0, 0.0, 1.0], 0.5, 0.0),
            Term::new(vec![1.0, 1.0, 1.0], 0.0, 0.0),
        ],
    )?;

    for rho in [[-2.0, -2.0, -2.0], [1.5, 0.3, -0.7], [4.0, 4.0, 4.0]] {
        let (point, dist) = nearest_trop_point(&g, &rho)?;
        let active = active_terms(&g, &point);
        println!(
            "{rho:?} -> ({:.6}, {:.6}, {:.6})  distance {dist:.6}  ties {active:?}",
            point[0], point[1], point[2]
        );
    }

    let report = bounds(&g)?;
    println!(
        "every root projects within {:.6} (refined) or {:.6} (coarse) of the tropical set",
        report.bound_1a, report.bound_1b
    );
    Ok(())
}
