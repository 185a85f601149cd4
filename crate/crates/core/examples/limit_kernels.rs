//! Local limits of the kernel: the bulk Ginibre kernel, the erfc edge kernel
//! and the collapsing edge at weak non-Hermiticity.
//!
//!     cargo run --release --example limit_kernels

use egl::asymptotics::{bulk_limit_kernel, edge_limit_kernel, weak_edge_erfc_kernel, WEAK_EDGE_WINDOW};
use egl::ensemble::edge_point_and_normal;
use egl::kernel::{kernel_elliptic, kernel_ginibre};
use egl::C64;

fn main() -> egl::Result<()> {
    let (u, v) = (C64::new(0.3, -0.2), C64::new(-0.1, 0.4));
    for n in [256usize, 1024, 4096] {
        let s = (n as f64).sqrt();
        let bulk = kernel_ginibre(n, C64::new(0.2, 0.1) + u / s, C64::new(0.2, 0.1) + v / s) / n as f64;
        let edge = kernel_ginibre(n, C64::new(1.0, 0.0) + u / s, C64::new(1.0, 0.0) + v / s) / n as f64;
        println!("n = {n:>4}: |bulk| {:.6} (limit {:.6}), |edge| {:.6} (limit {:.6})",
            bulk.norm(), bulk_limit_kernel(u, v).norm(), edge.norm(), edge_limit_kernel(u, v)?.norm());
    }
    let n = 1024;
    let tau = 1.0 - 1.0 / (n as f64).sqrt();
    let (z, _) = edge_point_and_normal(0.8, tau);
    let w = z + C64::new(0.002, -0.001);
    let approx = weak_edge_erfc_kernel(n, tau, z, w, WEAK_EDGE_WINDOW)?;
    println!("weak edge, n = {n}: |K| = {:.6}, erfc form {approx:.6}", kernel_elliptic(n, tau, z, w)?.norm());
    Ok(())
}
