//! Number variance Σλ(1−λ) of disks and squares and its √n growth.
//!
//!     cargo run --release --example number_variance

use egl::counting::{bulk_variance_prediction, number_variance, number_variance_quadrature, overlap_spectrum, Region};
use egl::ensemble::EnsembleParams;

fn main() -> egl::Result<()> {
    for region in [Region::disk(0.4), Region::Square { half_side: 0.3 }] {
        println!("{region:?}");
        for n in [64, 128, 256, 512] {
            let s = overlap_spectrum(&EnsembleParams::new(n, 0.0)?, &region)?;
            let v = number_variance(&s);
            let pred = bulk_variance_prediction(n, 0.0, &region);
            println!("  n = {n:>3}  E N = {:>8.3}  Var N = {v:.6}  sqrt-n law {pred:.6}  ratio {:.4}", s.expected_count(), v / pred);
        }
    }
    // the overlap-spectrum path against the double integral of |K|^2
    let p = EnsembleParams::new(32, 0.5)?;
    let r = Region::Band { tau: 0.5, n: 32, s: -1.0 };
    let (a, b) = (number_variance(&overlap_spectrum(&p, &r)?), number_variance_quadrature(&p, &r)?);
    println!("band S = -1, n = 32, tau = 0.5: spectrum {a:.12}, double quadrature {b:.12}");
    Ok(())
}
