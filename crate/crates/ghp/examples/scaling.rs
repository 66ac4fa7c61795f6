//! Fits the decay exponent of the bulk error over a family of sizes.
//!
//!     cargo run --example scaling -- 0.7 11:8 22:16 33:24

use ghp::compare::scaling_report;

fn main() -> ghp::Result<()> {
    let mut args = std::env::args().skip(1);
    let sigma: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0.7);
    let mut sizes: Vec<(usize, usize)> = args
        .filter_map(|s| {
            let (m, n) = s.split_once(':')?;
            Some((m.parse().ok()?, n.parse().ok()?))
        })
        .collect();
    if sizes.is_empty() {
        sizes = vec![(11, 8), (22, 16), (33, 24)];
    }
    let rep = scaling_report(&sizes, sigma)?;
    println!("{:>4} {:>4} {:>4} {:>8} {:>12} {:>12}", "m", "n", "E", "matched", "max err", "mean err");
    for r in &rep.sizes {
        println!(
            "{:>4} {:>4} {:>4} {:>8.4} {:>12.4e} {:>12.4e}",
            r.m, r.n, r.e, r.match_ratio, r.max_bulk_error, r.mean_bulk_error
        );
    }
    println!("fitted exponent: {:.3}", rep.exponent);
    Ok(())
}
