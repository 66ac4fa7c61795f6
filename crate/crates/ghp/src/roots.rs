//! Multiprecision Aberth–Ehrlich iteration with a residual certificate.
//!
//! Polynomials of definite parity, `P(z) = z^r G(z^2)`, are solved through
//! `G`; the roots of `P` are then `±sqrt(w)` (and `0` when `r = 1`).

use crate::error::{Error, Result};
use crate::hermite::ExactPolynomial;
use astro_float::{BigFloat, RoundingMode, Sign};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

const RM: RoundingMode = RoundingMode::ToEven;
pub const MAX_PRECISION_BITS: usize = 4096;
pub const RESIDUAL_THRESHOLD: f64 = 1e-20;

/// All roots of a polynomial with a residual certificate.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// max |P(z)| / (|lead| max(1,|z|)^deg) over the roots.
    pub residual_bound: f64,
    /// Per-root normalized residuals, aligned with `roots`.
    pub residuals: Vec<f64>,
    pub precision_bits: usize,
}

/// Initial working precision: the certificate needs roughly
/// log2 max|c_i / lead| + 67 bits, plus headroom.
pub fn default_precision(p: &ExactPolynomial) -> usize {
    let c = p.coeffs();
    let lead = log2_abs(p.leading());
    let range = c
        .iter()
        .filter(|x| !x.is_zero())
        .map(|x| log2_abs(x) - lead)
        .fold(0.0, f64::max);
    let bits = range.ceil() as usize + 131;
    bits.div_ceil(64) * 64
}

/// Roots at `precision_bits`, retrying at doubled precision on failure.
pub fn find_roots_auto(p: &ExactPolynomial, precision_bits: Option<usize>) -> Result<RootSet> {
    let mut bits = precision_bits.unwrap_or_else(|| default_precision(p)).max(64);
    loop {
        match find_roots(p, bits) {
            Err(Error::NonConvergence { .. }) if bits < MAX_PRECISION_BITS => {
                bits = (bits * 2).min(MAX_PRECISION_BITS);
            }
            other => return other,
        }
    }
}

/// Roots at a fixed precision. Fails with `NonConvergence` when the
/// iteration stalls or the residual certificate is not met.
pub fn find_roots(p: &ExactPolynomial, precision_bits: usize) -> Result<RootSet> {
    if p.degree() == 0 {
        return Err(Error::InvalidInput("constant polynomial has no roots".into()));
    }
    if precision_bits < 64 {
        return Err(Error::InvalidInput("precision must be at least 64 bits".into()));
    }
    let prec = precision_bits;
    let deg = p.degree();
    let c = p.coeffs();
    // strip a power of z and look for parity
    let low = c.iter().position(|x| !x.is_zero()).unwrap();
    let parity = deg % 2;
    let even_structure = deg - low >= 2 && p.has_parity(parity);

    let mut roots_mp: Vec<MpComplex> = vec![MpComplex::zero(prec); low];
    if even_structure {
        // P = z^low * Q(z^2)
        let g: Vec<BigInt> = c[low..].iter().step_by(2).cloned().collect();
        let w = aberth(&g, prec)?;
        for wi in w {
            let s = wi.sqrt(prec);
            roots_mp.push(s.neg());
            roots_mp.push(s);
        }
    } else {
        roots_mp.extend(aberth(&c[low..], prec)?);
    }

    let coeffs_mp: Vec<BigFloat> = c.iter().map(|x| bigint_to_float(x, prec)).collect();
    let lead = c[deg].clone();
    let lead_abs = bigfloat_to_f64(&bigint_to_float(&lead, 64)).abs();
    let lead_log2 = log2_abs(&lead);
    let mut residuals = Vec::with_capacity(deg);
    for z in &roots_mp {
        let (val, _) = horner(&coeffs_mp, z, prec, false);
        let zf = z.to_c64();
        // |P(z)| / (|lead| max(1,|z|)^deg), in log2 to avoid overflow
        let num = val.log2_abs();
        let den = if lead_abs.is_finite() { lead_abs.log2() } else { lead_log2 }
            + deg as f64 * zf.norm().max(1.0).log2();
        residuals.push((num - den).exp2());
    }
    let residual_bound = residuals.iter().cloned().fold(0.0, f64::max);
    if !(residual_bound < RESIDUAL_THRESHOLD) {
        return Err(Error::NonConvergence { iterations: 0, precision_bits: prec });
    }
    Ok(RootSet {
        roots: roots_mp.iter().map(MpComplex::to_c64).collect(),
        residual_bound,
        residuals,
        precision_bits: prec,
    })
}

/// α = a / sqrt(2m + n).
pub fn scale_roots(rs: &RootSet, m: usize, n: usize) -> Vec<Complex64> {
    let s = ((2 * m + n) as f64).sqrt();
    rs.roots.iter().map(|a| a / s).collect()
}

fn log2_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        bigfloat_to_f64(&bigint_to_float(x, 64)).abs().log2()
    } else {
        let shift = bits - 60;
        let top: BigInt = x >> shift;
        bigfloat_to_f64(&bigint_to_float(&top, 64)).abs().log2() + shift as f64
    }
}

/// Simultaneous Aberth iteration on the polynomial with coefficients `c`
/// (c[0] + c[1] x + ...). Jacobi update: all corrections use the previous sweep.
fn aberth(c: &[BigInt], prec: usize) -> Result<Vec<MpComplex>> {
    let d = c.len() - 1;
    if d == 0 {
        return Ok(vec![]);
    }
    let coeffs: Vec<BigFloat> = c.iter().map(|x| bigint_to_float(x, prec)).collect();
    if d == 1 {
        let r = coeffs[0].div(&coeffs[1], prec, RM).neg();
        return Ok(vec![MpComplex { re: r, im: BigFloat::from_f64(0.0, prec) }]);
    }
    let logs: Vec<f64> = c.iter().map(|x| if x.is_zero() { f64::NEG_INFINITY } else { log2_abs(x) }).collect();
    let radius = 2f64.powf(((logs[0] - logs[d]) / d as f64).max(-60.0).min(60.0));
    let mut z: Vec<MpComplex> = newton_polygon_guesses(&logs)
        .into_iter()
        .map(|g| MpComplex::from_c64(g, prec))
        .collect();
    let mut zf: Vec<Complex64> = z.iter().map(MpComplex::to_c64).collect();
    let mut done = vec![false; d];
    // a root is frozen one sweep after its correction first drops below tol
    let mut met = vec![false; d];
    let tol = 2f64.powi(-(prec as i32) / 2).max(f64::MIN_POSITIVE);
    let cap = 200 + 4 * d;
    let mut corr: Vec<Option<MpComplex>> = vec![None; d];
    let one = MpComplex::from_c64(Complex64::new(1.0, 0.0), prec);
    for _sweep in 0..cap {
        for i in 0..d {
            corr[i] = None;
            if done[i] {
                continue;
            }
            let (p, dp) = horner(&coeffs, &z[i], prec, true);
            let dp = dp.unwrap();
            let mut s = Complex64::zero();
            for j in 0..d {
                if j != i {
                    s += 1.0 / (zf[i] - zf[j]);
                }
            }
            let ratio_f = p.div_to_c64(&dp);
            if !ratio_f.is_finite() || dp.is_zero() {
                corr[i] = Some(MpComplex::from_c64(Complex64::new(radius * 1e-3, radius * 1e-3), prec));
                continue;
            }
            let ratio = p.div(&dp, prec);
            let den = one.sub(&ratio.mul(&MpComplex::from_c64(s, prec), prec), prec);
            corr[i] = Some(if (1.0 - ratio_f * s).norm() > 1e-300 { ratio.div(&den, prec) } else { ratio });
        }
        let mut all = true;
        for i in 0..d {
            let Some(ci) = corr[i].take() else { continue };
            let cf = ci.to_c64();
            z[i] = z[i].sub(&ci, prec);
            zf[i] = z[i].to_c64();
            if cf.norm() <= tol * zf[i].norm().max(1.0) {
                if met[i] {
                    done[i] = true;
                } else {
                    met[i] = true;
                    all = false;
                }
            } else {
                all = false;
            }
        }
        if all {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence { iterations: cap, precision_bits: prec })
}

/// Starting points on concentric circles read off the upper convex hull of
/// (i, log|c_i|); each hull edge from i to k carries k - i points.
fn newton_polygon_guesses(logs: &[f64]) -> Vec<Complex64> {
    let d = logs.len() - 1;
    let pts: Vec<usize> = (0..=d).filter(|&i| logs[i].is_finite()).collect();
    let mut hull: Vec<usize> = Vec::new();
    for &i in &pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b if it lies on or below the chord a -> i
            let cross = (b - a) as f64 * (logs[i] - logs[a]) - (i - a) as f64 * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut out = Vec::with_capacity(d);
    if hull[0] > 0 {
        // zero roots are never passed in; guard anyway
        out.extend(std::iter::repeat(Complex64::new(1e-3, 1e-3)).take(hull[0]));
    }
    for w in hull.windows(2) {
        let (i, k) = (w[0], w[1]);
        let cnt = k - i;
        let r = ((logs[i] - logs[k]) / cnt as f64).exp2();
        for t in 0..cnt {
            let th = 2.0 * std::f64::consts::PI * t as f64 / cnt as f64 + 0.4 + 0.7 * i as f64 / d as f64;
            out.push(Complex64::from_polar(r, th));
        }
    }
    out
}

/// P(z) and optionally P'(z) by Horner's rule.
fn horner(c: &[BigFloat], z: &MpComplex, prec: usize, deriv: bool) -> (MpComplex, Option<MpComplex>) {
    let d = c.len() - 1;
    let mut p = MpComplex { re: c[d].clone(), im: BigFloat::from_f64(0.0, prec) };
    let mut dp = MpComplex::zero(prec);
    for k in (0..d).rev() {
        if deriv {
            dp = dp.mul(z, prec).add(&p, prec);
        }
        p = p.mul(z, prec);
        p.re = p.re.add(&c[k], prec, RM);
    }
    (p, if deriv { Some(dp) } else { None })
}

pub(crate) fn bigint_to_float(x: &BigInt, prec: usize) -> BigFloat {
    let (sign, digits) = x.to_u64_digits();
    if digits.is_empty() {
        return BigFloat::from_f64(0.0, prec);
    }
    let s = if sign == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos };
    let words: Vec<astro_float::Word> = digits.iter().map(|&d| d as astro_float::Word).collect();
    let e = (64 * digits.len()) as i32;
    let mut f = BigFloat::from_words(&words, s, e);
    f.set_precision(prec, RM).expect("precision change");
    f
}

/// (mantissa in [0.5, 1), binary exponent, sign)
fn decompose(x: &BigFloat) -> Option<(f64, i64, f64)> {
    let (m, _, s, e, _) = x.as_raw_parts()?;
    if x.is_zero() || m.is_empty() {
        return None;
    }
    let k = m.len();
    let hi = m[k - 1] as f64;
    let lo = if k >= 2 { m[k - 2] as f64 } else { 0.0 };
    let frac = (hi + lo / 18446744073709551616.0) / 18446744073709551616.0;
    let sg = if s == Sign::Neg { -1.0 } else { 1.0 };
    Some((frac, e as i64, sg))
}

pub(crate) fn bigfloat_to_f64(x: &BigFloat) -> f64 {
    match decompose(x) {
        None => 0.0,
        Some((frac, e, sg)) => sg * frac * pow2(e),
    }
}

fn pow2(e: i64) -> f64 {
    if e > 1100 {
        f64::INFINITY
    } else if e < -1100 {
        0.0
    } else if e >= -1000 {
        2f64.powi(e as i32)
    } else {
        2f64.powi(e as i32 + 100) * 2f64.powi(-100)
    }
}

#[derive(Clone, Debug)]
pub(crate) struct MpComplex {
    re: BigFloat,
    im: BigFloat,
}

impl MpComplex {
    fn zero(prec: usize) -> Self {
        MpComplex { re: BigFloat::from_f64(0.0, prec), im: BigFloat::from_f64(0.0, prec) }
    }

    fn from_c64(z: Complex64, prec: usize) -> Self {
        MpComplex { re: BigFloat::from_f64(z.re, prec), im: BigFloat::from_f64(z.im, prec) }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(bigfloat_to_f64(&self.re), bigfloat_to_f64(&self.im))
    }

    fn add(&self, o: &Self, p: usize) -> Self {
        MpComplex { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM) }
    }

    fn sub(&self, o: &Self, p: usize) -> Self {
        MpComplex { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM) }
    }

    fn neg(&self) -> Self {
        MpComplex { re: self.re.neg(), im: self.im.neg() }
    }

    fn mul(&self, o: &Self, p: usize) -> Self {
        let ac = self.re.mul(&o.re, p, RM);
        let bd = self.im.mul(&o.im, p, RM);
        let ad = self.re.mul(&o.im, p, RM);
        let bc = self.im.mul(&o.re, p, RM);
        MpComplex { re: ac.sub(&bd, p, RM), im: ad.add(&bc, p, RM) }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn div(&self, o: &Self, p: usize) -> Self {
        let den = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let re = self.re.mul(&o.re, p, RM).add(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.im.mul(&o.re, p, RM).sub(&self.re.mul(&o.im, p, RM), p, RM);
        MpComplex { re: re.div(&den, p, RM), im: im.div(&den, p, RM) }
    }

    /// Principal square root.
    fn sqrt(&self, p: usize) -> Self {
        let r = self
            .re
            .mul(&self.re, p, RM)
            .add(&self.im.mul(&self.im, p, RM), p, RM)
            .sqrt(p, RM);
        let half = BigFloat::from_f64(0.5, p);
        let mut a = r.add(&self.re, p, RM).mul(&half, p, RM);
        let mut b = r.sub(&self.re, p, RM).mul(&half, p, RM);
        if a.is_negative() {
            a = BigFloat::from_f64(0.0, p);
        }
        if b.is_negative() {
            b = BigFloat::from_f64(0.0, p);
        }
        let x = a.sqrt(p, RM);
        let mut y = b.sqrt(p, RM);
        if self.im.is_negative() {
            y = y.neg();
        }
        MpComplex { re: x, im: y }
    }

    /// log2 |z| without overflow.
    fn log2_abs(&self) -> f64 {
        let parts = [decompose(&self.re), decompose(&self.im)];
        let emax = parts.iter().flatten().map(|p| p.1).max();
        match emax {
            None => f64::NEG_INFINITY,
            Some(em) => {
                let s: f64 = parts
                    .iter()
                    .flatten()
                    .map(|(f, e, _)| (f * pow2(e - em)).powi(2))
                    .sum();
                0.5 * s.log2() + em as f64
            }
        }
    }

    /// self / o as f64, robust to huge exponents.
    fn div_to_c64(&self, o: &Self) -> Complex64 {
        let scale = |z: &MpComplex, em: i64| {
            let f = |x: &BigFloat| decompose(x).map_or(0.0, |(fr, e, sg)| sg * fr * pow2(e - em));
            Complex64::new(f(&z.re), f(&z.im))
        };
        let ex = |z: &MpComplex| {
            [decompose(&z.re), decompose(&z.im)].iter().flatten().map(|p| p.1).max()
        };
        match (ex(self), ex(o)) {
            (None, _) => Complex64::zero(),
            (Some(_), None) => Complex64::new(f64::INFINITY, 0.0),
            (Some(a), Some(b)) => {
                let q = scale(self, a) / scale(o, b);
                q * pow2(a - b)
            }
        }
    }
}
