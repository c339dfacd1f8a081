//! How far can the zero set sit from its tropical shadow? Sampled two-sided
//! Hausdorff estimates on the extremal family that attains the lower bound.

use exptrop::metric::{bounds, sampled_hausdorff, witness_family};

fn main() -> exptrop::Result<()> {
    for t in [3usize, 4, 5] {
        let g = witness_family(t, 1, 1.0)?;
        let est = sampled_hausdorff(&g, 16, 7)?;
        let rep = bounds(&g)?;
        println!("t = {t}:");
        println!(
            "  roots -> tropical {:.9}   tropical -> roots {:.9}",
            est.rz_to_trop, est.trop_to_rz
        );
        println!(
            "  estimate {:.9}  certified lower {:.9}  family floor {:.9}",
            est.delta_estimate,
            est.delta_lower,
            rep.lower_witness.unwrap()
        );
    }
    Ok(())
}
