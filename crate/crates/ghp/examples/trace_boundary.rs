//! Traces the four edges of K_a and reports the corner angles.
//!
//!     cargo run --example trace_boundary -- 0.3333333333 200

use ghp::region::trace_boundary;
use std::f64::consts::PI;
use std::time::Instant;

fn main() -> ghp::Result<()> {
    let mut args = std::env::args().skip(1);
    let nu: f64 = args.next().map_or(1.0 / 3.0, |s| s.parse().expect("nu"));
    let points: usize = args.next().map_or(200, |s| s.parse().expect("points"));
    let t = Instant::now();
    let b = trace_boundary(nu, points)?;
    println!("traced {} edges x {points} points in {:.2?}", b.edges.len(), t.elapsed());
    for k in 0..4 {
        let u = b.corners.u[k];
        println!(
            "u{} = {:.12} {:+.12}i   angle = {:.6} (2pi/5 = {:.6})",
            k + 1,
            u.re,
            u.im,
            b.corner_angle(k),
            2.0 * PI / 5.0
        );
    }
    for (k, e) in b.edges.iter().enumerate() {
        let mid = e[e.len() / 2];
        println!("e{} midpoint {:.6} {:+.6}i", k + 1, mid.re, mid.im);
    }
    Ok(())
}
