//! Weak non-Hermiticity τ = 1 − κn^{−α} with mesoscopic statistics
//! f(n^γ z): regimes, limits and exact finite-n values.
//!
//!     cargo run --release --example phase_diagram

use egl::smoothstats::{phase_diagram, TestFunction};

fn main() -> egl::Result<()> {
    let grid = [0.2, 0.5, 0.8];
    let cells = phase_diagram(256, 1.0, &grid, &grid, &TestFunction::bump(1.0))?;
    println!("{:>5} {:>5} {:<11} {:>9} {:>9} {:>7}", "alpha", "gamma", "regime", "exact", "limit", "gap");
    for c in cells {
        println!("{:>5} {:>5} {:<11} {:>9.5} {:>9.5} {:>7.3}", c.alpha, c.gamma, c.regime, c.exact, c.predicted, c.relative_gap);
    }
    Ok(())
}
