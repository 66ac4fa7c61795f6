use ghp::actions::{solve_beta_continued, solve_beta_from};
use ghp::region::{density, edge_beta, trace_boundary, BoundaryCurve, Region};
use num_complex::Complex64 as C;
use std::f64::consts::PI;
use std::sync::OnceLock;

const NU: f64 = 1.0 / 3.0;

fn boundary() -> &'static BoundaryCurve {
    static B: OnceLock<BoundaryCurve> = OnceLock::new();
    B.get_or_init(|| trace_boundary(NU, 400).unwrap())
}

fn seg_dist(z: C, a: C, b: C) -> f64 {
    let d = b - a;
    let t = (((z - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
    (z - a - d * t).norm()
}

fn dist_to_polyline(z: C, poly: &[C]) -> f64 {
    let n = poly.len();
    (0..n).map(|i| seg_dist(z, poly[i], poly[(i + 1) % n])).fold(f64::INFINITY, f64::min)
}

fn quartic_disc(nu: f64, a: C, beta: C) -> C {
    // λ⁴ + bλ³ + cλ² + dλ + e
    let (b, c, d, e) = (2.0 * a, a * a - 1.0, -beta, C::from(nu * nu / 4.0));
    256.0 * e * e * e - 192.0 * b * d * e * e - 128.0 * c * c * e * e + 144.0 * c * d * d * e
        - 27.0 * d.powi(4)
        + 144.0 * b * b * c * e * e
        - 6.0 * b * b * d * d * e
        - 80.0 * b * c * c * d * e
        + 18.0 * b * c * d * d * d
        + 16.0 * c.powi(4) * e
        - 4.0 * c.powi(3) * d * d
        - 27.0 * b.powi(4) * e * e
        + 18.0 * b.powi(3) * c * d * e
        - 4.0 * b.powi(3) * d.powi(3)
        - 4.0 * b * b * c.powi(3) * e
        + b * b * c * c * d * d
}

#[test]
fn boundary_closes_at_corners() {
    let b = boundary();
    let u = b.corners.u;
    for k in 0..4 {
        let e = &b.edges[k];
        assert_eq!(e.len(), 400);
        assert!((e[0] - u[(k + 3) % 4]).norm() < 1e-6, "edge {} start", k + 1);
        assert!((e[e.len() - 1] - u[k]).norm() < 1e-6, "edge {} end", k + 1);
    }
}

#[test]
fn boundary_is_symmetric() {
    let poly = boundary().polygon();
    for map in [|z: C| -z, |z: C| z.conj(), |z: C| -z.conj()] {
        let h = poly.iter().map(|z| dist_to_polyline(map(*z), &poly)).fold(0.0, f64::max);
        assert!(h < 1e-6, "{h}");
    }
}

#[test]
fn edges_carry_a_double_turning_point() {
    let b = boundary();
    for e in &b.edges {
        for z in e.iter().skip(7).step_by(40) {
            let beta = edge_beta(NU, *z).unwrap();
            let d0 = quartic_disc(NU, *z, beta).norm();
            let d1 = quartic_disc(NU, *z, beta + 0.05).norm();
            assert!(d0 < 1e-9 * d1, "{z}: {d0} vs {d1}");
        }
    }
}

#[test]
fn interior_points_have_boutroux_beta() {
    let region = Region::new(NU, 200).unwrap();
    let (xs, ys) = (0.6, 0.6);
    for i in 0..6 {
        for j in 0..6 {
            let a = C::new(-xs + 2.0 * xs * (i as f64 + 0.5) / 6.0, -ys + 2.0 * ys * (j as f64 + 0.5) / 6.0);
            if !region.contains(a) {
                continue;
            }
            let bp = solve_beta_continued(NU, a, 16).unwrap();
            let (s1, s2) = bp.state.s_values();
            assert!(s1.im.abs() < 1e-12 && s2.im.abs() < 1e-12);
            assert!(s1.re.abs() < (1.0 - NU) * PI / 2.0 && s2.re.abs() < NU * PI, "{a}");
        }
    }
}

fn s_real(a: C, seed: &ghp::actions::BoutrouxPoint) -> (f64, f64) {
    let bp = solve_beta_from(NU, a, seed.beta, &seed.quartet).unwrap();
    let (s1, s2) = bp.state.s_values();
    (s1.re, s2.re)
}

#[test]
fn density_matches_finite_differences() {
    let h = 1e-5;
    for a in [C::new(0.1, 0.05), C::new(-0.3, 0.2), C::new(0.2, -0.4), C::new(0.45, 0.1)] {
        let bp = solve_beta_continued(NU, a, 8).unwrap();
        let (xp, xm) = (s_real(a + h, &bp), s_real(a - h, &bp));
        let (yp, ym) = (s_real(a + C::new(0.0, h), &bp), s_real(a - C::new(0.0, h), &bp));
        let j = [
            [(xp.0 - xm.0) / (2.0 * h), (yp.0 - ym.0) / (2.0 * h)],
            [(xp.1 - xm.1) / (2.0 * h), (yp.1 - ym.1) / (2.0 * h)],
        ];
        let fd = (j[0][0] * j[1][1] - j[0][1] * j[1][0]).abs() / (2.0 * NU * (1.0 - NU) * PI * PI);
        let phi = density(NU, a).unwrap();
        assert!((phi - fd).abs() < 1e-6 * fd.max(1.0), "{a}: {phi} vs {fd}");
    }
}

#[test]
fn density_is_symmetric_and_positive() {
    for a in [C::new(0.1, 0.05), C::new(-0.3, 0.2), C::new(0.35, -0.25)] {
        let p = density(NU, a).unwrap();
        assert!(p > 0.0);
        for b in [-a, a.conj(), -a.conj()] {
            assert!((density(NU, b).unwrap() - p).abs() < 1e-8, "{a} {b}");
        }
    }
}
