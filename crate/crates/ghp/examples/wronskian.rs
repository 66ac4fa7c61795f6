//! Expand H_{m,n} exactly and print its size.
//!
//! cargo run --example wronskian -- 22 16

use ghp::hermite::hermite_generalized;
use std::time::Instant;

fn main() -> ghp::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (m, n) = match args.as_slice() {
        [m, n, ..] => (*m, *n),
        _ => (3, 2),
    };
    let t = Instant::now();
    let h = hermite_generalized(m, n)?;
    let bits = h.coeffs().iter().map(|c| c.bits()).max().unwrap_or(0);
    println!("H_{{{m},{n}}}: degree {}, largest coefficient {bits} bits, {:.2?}", h.degree(), t.elapsed());
    if h.degree() <= 12 {
        for (i, c) in h.coeffs().iter().enumerate().rev() {
            if c.bits() > 0 {
                println!("  z^{i}: {c}");
            }
        }
    }
    Ok(())
}
