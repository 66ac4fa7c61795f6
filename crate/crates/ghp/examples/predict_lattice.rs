//! Solves the quantization conditions for every index pair and prints the
//! predicted roots nearest the origin.
//!
//!     cargo run --example predict_lattice -- 22 16 0.9

use ghp::lattice::{build_lattice, linear_alpha, LatticeConfig};

fn main() -> ghp::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let m: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(22);
    let n: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(16);
    let sigma: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.9);

    let cfg = LatticeConfig::new(m, n, sigma);
    let lat = build_lattice(&cfg)?;
    println!(
        "m = {m}, n = {n}, nu = {:.4}, E = {}: {} points, completion {:.3}",
        cfg.nu(),
        cfg.e(),
        lat.entries.len(),
        lat.completion_ratio()
    );
    println!("{:>4} {:>4} {:>24} {:>24} {:>10}", "j", "k", "alpha", "linear", "residual");
    for (&(j, k), e) in lat.entries.iter().filter(|((j, k), _)| j.abs() <= 3 && k.abs() <= 3) {
        let lin = linear_alpha(&cfg, j, k)?;
        println!(
            "{j:>4} {k:>4} {:>11.7} {:>+11.7}i {:>11.7} {:>+11.7}i {:>10.1e}",
            e.alpha.re, e.alpha.im, lin.re, lin.im, e.residual
        );
    }
    for ((j, k), why) in &lat.failures {
        println!("unsolved ({j}, {k}): {why}");
    }
    Ok(())
}
