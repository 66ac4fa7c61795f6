//! Roots of the corner polynomial and the value of β at each corner.
//!
//!     cargo run --example corners -- 0.25

use ghp::region::{corner_beta, corner_polynomial, corner_polynomial_roots, eval_corner_polynomial};

fn main() -> ghp::Result<()> {
    let nu: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1.0 / 3.0);
    println!("C(alpha) coefficients (alpha^0 .. alpha^8): {:?}", corner_polynomial(nu));
    let cs = corner_polynomial_roots(nu)?;
    for (k, u) in cs.u.iter().enumerate() {
        let b = corner_beta(nu, *u);
        println!(
            "u{} = {:+.12} {:+.12}i   beta = {:+.10} {:+.10}i   |C| = {:.1e}",
            k + 1,
            u.re,
            u.im,
            b.re,
            b.im,
            eval_corner_polynomial(nu, *u).norm()
        );
    }
    for (k, v) in cs.v.iter().enumerate() {
        println!("v{} = {:+.12} {:+.12}i", k + 1, v.re, v.im);
    }
    Ok(())
}
