//! Certified roots of H_{m,n} and their scaled positions.
//!
//! cargo run --example exact_roots -- 22 16

use ghp::hermite::hermite_generalized;
use ghp::roots::{find_roots_auto, scale_roots};
use std::time::Instant;

fn main() -> ghp::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (m, n) = match args.as_slice() {
        [m, n, ..] => (*m, *n),
        _ => (2, 2),
    };
    let t = Instant::now();
    let h = hermite_generalized(m, n)?;
    let t_exp = t.elapsed();
    let rs = find_roots_auto(&h, None)?;
    println!(
        "H_{{{m},{n}}}: {} roots at {} bits, residual bound {:.3e} (expand {:.2?}, solve {:.2?})",
        rs.roots.len(),
        rs.precision_bits,
        rs.residual_bound,
        t_exp,
        t.elapsed() - t_exp
    );
    let alpha = scale_roots(&rs, m, n);
    let rmax = alpha.iter().map(|a| a.norm()).fold(0.0, f64::max);
    println!("max |alpha| = {rmax:.6}");
    for a in alpha.iter().take(8) {
        println!("  {:+.12} {:+.12}i", a.re, a.im);
    }
    Ok(())
}
