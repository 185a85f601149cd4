//! Saddle points of the contour phase function and the uniform kernel
//! bound.
//!
//!     cargo run --release --example saddles

use egl::asymptotics::*;
use egl::kernel::kernel_elliptic;
use egl::C64;

fn main() -> egl::Result<()> {
    let tau = 0.4;
    let (z, w) = (C64::new(0.7, 0.3), C64::new(-0.2, 0.5));
    let set = saddle_points(tau, z, w)?;
    println!("case {:?}", set.case);
    for (tag, s) in &set.values {
        println!("  {tag:?}: s = {s:.6}, F'(s) = {:.1e}, F''(s) = {:.6}", f_derivative(tau, z, w, *s)?.norm(), f_second_derivative(tau, z, w, *tag)?);
    }
    for (tag, f) in f_at_saddles(tau, z, w)? {
        println!("  F({tag:?}) = {f:.6}");
    }
    let n = 32;
    let b = kernel_upper_bound(n, tau, z, w)?;
    let k = kernel_elliptic(n, tau, z, w)?.norm();
    println!("n = {n}: |K| = {k:.4e}, bulk {:.4e}, deviation bound {:.4e}, holds: {}", b.bulk, b.deviation, b.holds_for(k));
    Ok(())
}
