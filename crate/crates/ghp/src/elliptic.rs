//! Complete elliptic integrals for complex parameter via Carlson's
//! symmetric forms.
//!
//! ```text
//!   K(m)    = RF(0, 1-m, 1)
//!   E(m)    = RF(0, 1-m, 1) - m/3 RD(0, 1-m, 1)
//!   Pi(n,m) = RF(0, 1-m, 1) + n/3 RJ(0, 1-m, 1, 1-n)
//! ```

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

type C = Complex64;

const ITER_MAX: usize = 100;

fn c(x: f64) -> C {
    C::new(x, 0.0)
}

/// Carlson's R_F(x, y, z) by duplication.
pub fn carlson_rf(x: C, y: C, z: C) -> Result<C> {
    let zeros = [x, y, z].iter().filter(|v| v.norm() == 0.0).count();
    if zeros >= 2 {
        return Err(Error::DomainError("RF needs at most one zero argument".into()));
    }
    let (mut x, mut y, mut z) = (x, y, z);
    let mut a = (x + y + z) / 3.0;
    let q = (a - x).norm().max((a - y).norm()).max((a - z).norm()) / (3.0 * f64::EPSILON).powf(1.0 / 6.0);
    let mut qn = q;
    for _ in 0..ITER_MAX {
        if qn < a.norm() {
            break;
        }
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let l = sx * sy + sx * sz + sy * sz;
        x = (x + l) * 0.25;
        y = (y + l) * 0.25;
        z = (z + l) * 0.25;
        a = (a + l) * 0.25;
        qn *= 0.25;
    }
    let xx = (a - x) / a;
    let yy = (a - y) / a;
    let zz = -xx - yy;
    let e2 = xx * yy - zz * zz;
    let e3 = xx * yy * zz;
    let s = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0;
    Ok(s / a.sqrt())
}

/// Degenerate R_C(x, y) = R_F(x, y, y).
pub fn carlson_rc(x: C, y: C) -> Result<C> {
    carlson_rf(x, y, y)
}

/// Carlson's R_D(x, y, z) = R_J(x, y, z, z).
pub fn carlson_rd(x: C, y: C, z: C) -> Result<C> {
    carlson_rj(x, y, z, z)
}

/// Carlson's R_J(x, y, z, p) by duplication.
pub fn carlson_rj(x: C, y: C, z: C, p: C) -> Result<C> {
    let zeros = [x, y, z].iter().filter(|v| v.norm() == 0.0).count();
    if zeros >= 2 || p.norm() == 0.0 {
        return Err(Error::DomainError("RJ needs p != 0 and at most one zero among x, y, z".into()));
    }
    let (mut x, mut y, mut z, mut p) = (x, y, z, p);
    let mut a = (x + y + z + p + p) / 5.0;
    let q = [x, y, z, p].iter().map(|v| (a - v).norm()).fold(0.0, f64::max)
        / (0.25 * f64::EPSILON).powf(1.0 / 6.0);
    let mut qn = q;
    let mut sum = C::new(0.0, 0.0);
    let mut f = 1.0;
    for _ in 0..ITER_MAX {
        if qn < a.norm() {
            break;
        }
        let (sx, sy, sz, sp) = (x.sqrt(), y.sqrt(), z.sqrt(), p.sqrt());
        let l = sx * sy + sx * sz + sy * sz;
        let d = (sp + sx) * (sp + sy) * (sp + sz);
        let e = (p - x) * (p - y) * (p - z) / (d * d);
        sum += 6.0 * f / d * carlson_rc(c(1.0), 1.0 + e)?;
        f *= 0.25;
        x = (x + l) * 0.25;
        y = (y + l) * 0.25;
        z = (z + l) * 0.25;
        p = (p + l) * 0.25;
        a = (a + l) * 0.25;
        qn *= 0.25;
    }
    let xx = (a - x) / a;
    let yy = (a - y) / a;
    let zz = (a - z) / a;
    let pp = -(xx + yy + zz) / 2.0;
    let e2 = xx * yy + xx * zz + yy * zz - 3.0 * pp * pp;
    let e3 = xx * yy * zz + 2.0 * e2 * pp + 4.0 * pp * pp * pp;
    let e4 = (2.0 * xx * yy * zz + e2 * pp + 3.0 * pp * pp * pp) * pp;
    let e5 = xx * yy * zz * pp * pp;
    let s = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    Ok(f * s / (a * a.sqrt()) + sum)
}

fn on_cut(m: C) -> bool {
    m.im == 0.0 && m.re >= 1.0
}

pub fn complete_k(m: C) -> Result<C> {
    if on_cut(m) {
        return Err(Error::DomainError(format!("K(m) on its branch cut, m = {m}")));
    }
    carlson_rf(c(0.0), 1.0 - m, c(1.0))
}

pub fn complete_e(m: C) -> Result<C> {
    if on_cut(m) {
        return Err(Error::DomainError(format!("E(m) on its branch cut, m = {m}")));
    }
    if m.norm() == 0.0 {
        return Ok(c(PI / 2.0));
    }
    let y = 1.0 - m;
    Ok(carlson_rf(c(0.0), y, c(1.0))? - m / 3.0 * carlson_rd(c(0.0), y, c(1.0))?)
}

/// Principal branch of Π(n, m); the cut in n is [1, ∞).
pub fn complete_pi(n: C, m: C) -> Result<C> {
    if on_cut(m) {
        return Err(Error::DomainError(format!("Pi(n, m) with m on the cut, m = {m}")));
    }
    if n.norm() == 0.0 {
        return complete_k(m);
    }
    if n.im == 0.0 && n.re >= 1.0 {
        return Err(Error::DomainError(format!("Pi(n, m) with n on the cut, n = {n}")));
    }
    if near_n_cut(n, m) {
        // the principal value in each half plane via the reflection n -> m/n
        let up = pi_upper(n, m)?;
        return Ok(if n.im > 0.0 { up } else { up - pi_jump(n, m) });
    }
    Ok(complete_k(m)? + n / 3.0 * carlson_rj(c(0.0), 1.0 - m, c(1.0), 1.0 - n)?)
}

/// Π(n, m) continued analytically across n ∈ (1, ∞) from the upper half plane:
/// the principal value for Im n > 0, and
/// Π^(p)(n, m) + iπ / sqrt((n - 1)(1 - m/n)) for Im n <= 0.
pub fn pi_branch_corrected(n: C, m: C) -> Result<C> {
    if n.norm() == 0.0 || (n - m).norm() == 0.0 {
        return Err(Error::DomainError("branch correction undefined at n = 0 or n = m".into()));
    }
    if on_cut(m) {
        return Err(Error::DomainError(format!("Pi(n, m) with m on the cut, m = {m}")));
    }
    if near_n_cut(n, m) {
        return pi_upper(n, m);
    }
    let p = complete_pi(n, m)?;
    Ok(if n.im > 0.0 { p } else { p + pi_jump(n, m) })
}

/// Where RJ loses accuracy and the reflection n -> m/n is used instead;
/// the reflected characteristic must itself lie outside the band.
fn near_n_cut(n: C, m: C) -> bool {
    let band = |z: C| z.re > 1.0 && z.im.abs() < 0.5 * z.re;
    band(n) && !band(m / n)
}

fn pi_jump(n: C, m: C) -> C {
    C::new(0.0, PI) / ((n - 1.0) * (1.0 - m / n)).sqrt()
}

/// Upper-half-plane continuation from Π(n) + Π(m/n) = K + (π/2) sqrt(n / ((1-n)(n-m))).
fn pi_upper(n: C, m: C) -> Result<C> {
    let k = complete_k(m)?;
    let refl = if (m / n).norm() == 0.0 { k } else { complete_pi(m / n, m)? };
    let w = n.sqrt() / ((n - 1.0).sqrt() * (n - m).sqrt());
    Ok(k - refl + C::new(0.0, PI / 2.0) * w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn agm(mut a: f64, mut b: f64) -> f64 {
        for _ in 0..40 {
            if (a - b).abs() <= 4.0 * f64::EPSILON * a {
                break;
            }
            let t = 0.5 * (a + b);
            b = (a * b).sqrt();
            a = t;
        }
        a
    }

    /// K and E for real m < 1 by the arithmetic-geometric mean.
    fn agm_ke(m: f64) -> (f64, f64) {
        let (mut a, mut b) = (1.0f64, (1.0 - m).sqrt());
        // E = K (1 - sum 2^{j-1} c_j^2), c_0^2 = m
        let mut sum = m / 2.0;
        let mut pow = 0.5;
        for _ in 0..40 {
            if (a - b).abs() <= 4.0 * f64::EPSILON * a {
                break;
            }
            let an = 0.5 * (a + b);
            let cc = 0.5 * (a - b);
            b = (a * b).sqrt();
            a = an;
            pow *= 2.0;
            sum += pow * cc * cc;
        }
        let k = PI / (2.0 * a);
        (k, k * (1.0 - sum))
    }

    /// Π(n, m) by Gauss-Legendre on the θ-integral, for n away from the cut.
    fn pi_quad(n: C, m: C) -> C {
        let (x, w) = gauss_legendre(64);
        let panels = 32;
        let h = PI / 2.0 / panels as f64;
        let mut acc = C::new(0.0, 0.0);
        for k in 0..panels {
            for (xi, wi) in x.iter().zip(&w) {
                let t = h * (k as f64 + 0.5 * (xi + 1.0));
                let s2 = t.sin().powi(2);
                acc += 0.5 * h * wi / ((1.0 - n * s2) * (1.0 - m * s2).sqrt());
            }
        }
        acc
    }

    fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut x = vec![0.0; n];
        let mut w = vec![0.0; n];
        for i in 0..n {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                x[i] = z;
                w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
                if dz.abs() < 1e-15 {
                    break;
                }
            }
        }
        (x, w)
    }

    #[test]
    fn rf_values() {
        let v = carlson_rf(c(0.0), c(1.0), c(1.0)).unwrap();
        assert!((v - PI / 2.0).norm() < 1e-15);
        let v = carlson_rf(c(2.0), c(3.0), c(4.0)).unwrap();
        // ½∫ dt / sqrt((t+2)(t+3)(t+4)) with t = u^2/(1-u^2)... via quadrature below
        let q = rf_quad(c(2.0), c(3.0), c(4.0));
        assert!((v - q).norm() < 1e-14, "{v} {q}");
        assert!((v.re - 0.58408284).abs() < 1e-8);
        let x = C::new(0.3, -1.2);
        assert!((carlson_rf(x, x, x).unwrap() - 1.0 / x.sqrt()).norm() < 1e-15);
        assert!(carlson_rf(c(0.0), c(0.0), c(1.0)).is_err());
    }

    /// ½ ∫_0^∞ dt / sqrt((t+x)(t+y)(t+z)) with t = s^2 / (1 - s)^2 style map
    fn rf_quad(x: C, y: C, z: C) -> C {
        let (gx, gw) = gauss_legendre(64);
        let panels = 64;
        let mut acc = C::new(0.0, 0.0);
        // t = tan^2(θ), θ in (0, π/2)
        let h = PI / 2.0 / panels as f64;
        for k in 0..panels {
            for (xi, wi) in gx.iter().zip(&gw) {
                let th = h * (k as f64 + 0.5 * (xi + 1.0));
                let t = th.tan().powi(2);
                let dt = 2.0 * th.tan() / th.cos().powi(2);
                acc += 0.5 * h * wi * 0.5 * dt / ((t + x) * (t + y) * (t + z)).sqrt();
            }
        }
        acc
    }

    #[test]
    fn k_e_against_agm() {
        for &m in &[-3.0, -1.0, 0.0, 0.1, 0.5, 0.9, 0.999] {
            let (k, e) = agm_ke(m);
            assert!((complete_k(c(m)).unwrap().re - k).abs() < 1e-14 * k, "K({m})");
            assert!((complete_e(c(m)).unwrap().re - e).abs() < 1e-14 * e, "E({m})");
        }
        assert!((complete_k(c(0.5)).unwrap().re - 1.85407468).abs() < 1e-8);
        assert!((complete_e(c(0.5)).unwrap().re - 1.35064388).abs() < 1e-8);
        // imaginary-modulus transformation K(-1) = K(1/2)/sqrt(2)
        let k1 = complete_k(c(-1.0)).unwrap().re;
        assert!((k1 - agm_ke(0.5).0 / 2f64.sqrt()).abs() < 1e-14);
        assert!((k1 - 1.31102878).abs() < 1e-8);
        assert!((PI / (2.0 * agm(1.0, 0.5f64.sqrt())) - agm_ke(0.5).0).abs() < 1e-14);
        assert!(complete_k(c(1.0)).is_err() && complete_k(c(2.5)).is_err());
    }

    #[test]
    fn legendre_relation() {
        let mut state = 12345u64;
        let mut rnd = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let r = rnd().sqrt() * 0.95;
            let th = 2.0 * PI * rnd();
            let m = C::from_polar(r, th);
            let (k, e) = (complete_k(m).unwrap(), complete_e(m).unwrap());
            let (k1, e1) = (complete_k(1.0 - m).unwrap(), complete_e(1.0 - m).unwrap());
            let l = e * k1 + e1 * k - k * k1;
            assert!((l - PI / 2.0).norm() < 1e-12, "m = {m}: {l}");
        }
    }

    #[test]
    fn rf_homogeneity() {
        let (x, y, z) = (C::new(0.7, 0.2), C::new(1.3, -0.4), C::new(2.1, 0.05));
        for t in [C::new(0.5, 0.3), C::new(2.0, -1.0), C::new(0.1, 0.0)] {
            let lhs = carlson_rf(t * x, t * y, t * z).unwrap();
            let rhs = carlson_rf(x, y, z).unwrap() / t.sqrt();
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn pi_against_quadrature() {
        for (n, m) in [
            (c(0.3), c(0.4)),
            (C::new(0.3, 0.2), C::new(0.4, -0.1)),
            (C::new(-2.0, 1.0), C::new(0.7, 0.2)),
            (C::new(2.3, 0.5), c(0.4)),
            (C::new(2.3, -0.5), C::new(0.4, 0.1)),
            (C::new(5.0, 1.0), c(0.3)),
            (C::new(-0.5, -3.0), C::new(-0.2, 0.3)),
        ] {
            let v = complete_pi(n, m).unwrap();
            let q = pi_quad(n, m);
            assert!((v - q).norm() < 1e-12 * q.norm().max(1.0), "Pi({n},{m}) = {v} vs {q}");
        }
        for m in [c(0.0), c(0.5), C::new(0.2, 0.7)] {
            assert!((complete_pi(c(0.0), m).unwrap() - complete_k(m).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn pi_near_cut_is_consistent() {
        // reflection path vs Carlson path, both well inside their accuracy range
        for (n, m) in [(C::new(2.0, 0.3), c(0.4)), (C::new(1.7, -0.2), C::new(0.5, 0.3))] {
            let a = pi_upper(n, m).unwrap();
            let b = complete_k(m).unwrap() + n / 3.0 * carlson_rj(c(0.0), 1.0 - m, c(1.0), 1.0 - n).unwrap();
            let b = if n.im > 0.0 { b } else { b + pi_jump(n, m) };
            assert!((a - b).norm() < 1e-12, "{a} {b}");
        }
    }

    #[test]
    fn branch_corrected_rules() {
        let m = c(0.3);
        let n = C::new(0.4, 0.6);
        assert_eq!(pi_branch_corrected(n, m).unwrap(), complete_pi(n, m).unwrap());
        // continuity across the real axis at n = 1.5 and n = 3
        for x in [1.5, 3.0] {
            let up = pi_branch_corrected(C::new(x, 1e-8), m).unwrap();
            let on = pi_branch_corrected(c(x), m).unwrap();
            let dn = pi_branch_corrected(C::new(x, -1e-8), m).unwrap();
            assert!((up - on).norm() < 1e-7 && (dn - on).norm() < 1e-7, "{up} {on} {dn}");
        }
        // Cauchy-Riemann by central differences at 1.5 + 0i
        let h = 1e-5;
        let z0 = c(1.5);
        let fx = (pi_branch_corrected(z0 + h, m).unwrap() - pi_branch_corrected(z0 - h, m).unwrap()) / (2.0 * h);
        let fy = (pi_branch_corrected(z0 + C::new(0.0, h), m).unwrap()
            - pi_branch_corrected(z0 - C::new(0.0, h), m).unwrap())
            / (2.0 * h);
        assert!((fy - C::new(0.0, 1.0) * fx).norm() < 1e-8, "{fx} {fy}");
        // away from the band the rule matches the stated formula
        let n = C::new(-2.0, -0.5);
        let want = complete_pi(n, m).unwrap() + pi_jump(n, m);
        assert!((pi_branch_corrected(n, m).unwrap() - want).norm() < 1e-14);
        assert!(pi_branch_corrected(c(0.0), m).is_err());
        assert!(pi_branch_corrected(m, m).is_err());
    }
}
