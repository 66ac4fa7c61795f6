//! Closed-form actions and their Jacobian at one parameter point, checked
//! against contour quadrature.
//!
//!     cargo run --example actions -- 0.25 0.2 0.1

use ghp::actions::{contour_oracle, solve_beta_continued, Cycle, ParameterPoint};
use num_complex::Complex64 as C;
use std::f64::consts::PI;

fn main() -> ghp::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let nu = args.first().copied().unwrap_or(0.25);
    let alpha = C::new(args.get(1).copied().unwrap_or(0.2), args.get(2).copied().unwrap_or(0.1));

    // β on the locus where both actions are purely imaginary
    let bp = solve_beta_continued(nu, alpha, 8)?;
    let p = ParameterPoint::new(nu, alpha, bp.beta);
    println!("nu = {nu}, alpha = {alpha}, beta = {:.12}", bp.beta);
    println!("turning points: {:?}", bp.quartet.lambdas);
    let st = bp.state;
    let o1 = contour_oracle(&p, &bp.quartet, Cycle::Gamma1)? + C::new(0.0, PI * (1.0 - nu) / 2.0);
    let o2 = contour_oracle(&p, &bp.quartet, Cycle::Gamma2)?;
    println!("s1 = {:.15}   quadrature {:.15}", st.s1, o1);
    println!("s2 = {:.15}   quadrature {:.15}", st.s2, o2);
    let (s1, s2) = st.s_values();
    println!("S = ({:.12}, {:.12})", s1.re, s2.re);
    println!("det J = {:.15}  (2 pi i = {:.15}i)", st.det(), 2.0 * PI);
    Ok(())
}
