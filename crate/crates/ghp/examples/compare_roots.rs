//! Matches the predicted lattice against the exact scaled roots.
//!
//!     cargo run --example compare_roots -- 22 16 0.8

use ghp::compare::run_size;
use std::time::Instant;

fn main() -> ghp::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let m: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(22);
    let n: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(16);
    let sigma: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.8);

    let t = Instant::now();
    let (lat, truth, rep) = run_size(m, n, sigma)?;
    println!("H_{{{m},{n}}}: {} roots, {} lattice points, E = {}", truth.len(), lat.entries.len(), rep.e);
    println!("matched {} (ratio {:.4}), unmatched roots {}", rep.pairs.len(), rep.match_ratio(), rep.unmatched_true);
    println!("bulk error in alpha: max {:.3e}, mean {:.3e}", rep.max_bulk_error, rep.mean_bulk_error);
    println!("bulk error in a:     max {:.3e}, mean {:.3e}", rep.max_bulk_error_unscaled, rep.mean_bulk_error_unscaled);
    let worst = rep.pairs.iter().filter(|p| p.bulk).max_by(|a, b| a.distance.total_cmp(&b.distance));
    if let Some(p) = worst {
        println!("worst bulk pair (j, k) = ({}, {})", p.j, p.k);
    }
    println!("{:.2?}", t.elapsed());
    Ok(())
}
