//! Integrates the asymptotic root density over the traced region.
//!
//!     cargo run --example density -- 0.3333333333 200

use ghp::region::Region;
use std::time::Instant;

fn main() -> ghp::Result<()> {
    let mut args = std::env::args().skip(1);
    let nu: f64 = args.next().map_or(1.0 / 3.0, |s| s.parse().expect("nu"));
    let grid: usize = args.next().map_or(200, |s| s.parse().expect("grid"));
    let t = Instant::now();
    let region = Region::new(nu, 200)?;
    let g = region.density_grid(grid);
    let inside = g.values.iter().flatten().filter(|v| **v > 0.0).count();
    let peak = g.values.iter().flatten().copied().fold(0.0, f64::max);
    println!("grid {grid}x{grid}: {inside} interior cells, peak {peak:.4}");
    println!("integral = {:.6}  ({:.2?})", g.integral(), t.elapsed());
    Ok(())
}
