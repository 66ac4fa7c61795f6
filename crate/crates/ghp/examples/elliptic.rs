//! Complete elliptic integrals at complex parameters, with Legendre's relation.
//!
//!     cargo run --example elliptic -- 0.3 0.2

use ghp::elliptic::{complete_e, complete_k, complete_pi, pi_branch_corrected};
use num_complex::Complex64 as C;

fn main() -> ghp::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let m = C::new(args.first().copied().unwrap_or(0.3), args.get(1).copied().unwrap_or(0.2));
    let (k, e) = (complete_k(m)?, complete_e(m)?);
    let (k1, e1) = (complete_k(1.0 - m)?, complete_e(1.0 - m)?);
    println!("K({m}) = {k:.15}");
    println!("E({m}) = {e:.15}");
    println!("E K' + E' K - K K' = {:.15}", e * k1 + e1 * k - k * k1);
    for n in [C::new(0.5, 0.1), C::new(2.0, 0.0), C::new(-1.0, 0.5)] {
        let direct = complete_pi(n, m).map_or("on the cut".to_string(), |v| format!("{v:.15}"));
        println!("Pi({n}, m) = {direct}   continued from above: {:.15}", pi_branch_corrected(n, m)?);
    }
    Ok(())
}
