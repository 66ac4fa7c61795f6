//! Classical Hermite polynomials and the Wronskian family H_{m,n}.
//!
//! ```text
//!              | H_m        H_{m+1}        ...  H_{m+n-1}          |
//!   H_{m,n} ~  | H_m'       H_{m+1}'       ...  H_{m+n-1}'         |
//!              | ...                                               |
//!              | H_m^(n-1)  H_{m+1}^(n-1)  ...  H_{m+n-1}^(n-1)    |
//! ```
//!
//! The determinant is expanded exactly over Z[z] by fraction-free
//! elimination. Every entry has a definite parity, so polynomials are stored
//! as `z^r G(z^2)` which halves the work.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub const DEFAULT_MAX_DEGREE: usize = 5000;

/// Degree cap, overridable through `GHP_MAX_DEGREE`.
pub fn max_degree() -> usize {
    std::env::var("GHP_MAX_DEGREE")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DEGREE)
}

/// Dense polynomial with arbitrary precision integer coefficients,
/// `coeffs[i]` multiplies `z^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactPolynomial {
    coeffs: Vec<BigInt>,
}

impl ExactPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        ExactPolynomial { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(vec![]);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Content (gcd of the coefficients), always nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn normalized(&self) -> Self {
        let g = self.content();
        if g.is_zero() {
            return self.clone();
        }
        let g = if self.leading().is_negative() { -g } else { g };
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// True if every nonzero coefficient sits at an index of the given parity.
    pub fn has_parity(&self, parity: usize) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % 2 == parity % 2 || c.is_zero())
    }

    /// Coefficients as f64 (saturating to infinity for huge values).
    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// H_k by H_{k+1} = 2z H_k - 2k H_{k-1}.
pub fn hermite_classical(k: usize) -> ExactPolynomial {
    let mut prev = vec![BigInt::one()];
    if k == 0 {
        return ExactPolynomial::new(prev);
    }
    let mut cur = vec![BigInt::zero(), BigInt::from(2)];
    for j in 1..k {
        let mut next = vec![BigInt::zero(); j + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c * 2;
        }
        let two_j = BigInt::from(2 * j);
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c * &two_j;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    ExactPolynomial::new(cur)
}

/// H_{m,n} expanded exactly, content removed, positive leading coefficient.
pub fn hermite_generalized(m: usize, n: usize) -> Result<ExactPolynomial> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput(format!("m and n must be positive, got ({m}, {n})")));
    }
    let degree = m * n;
    let cap = max_degree();
    if degree > cap {
        return Err(Error::DegreeCapExceeded { degree, cap });
    }
    let mut a: Vec<Vec<Parity>> = (0..n)
        .map(|l| {
            (0..n)
                .map(|j| {
                    let mut h = hermite_classical(m + j);
                    for _ in 0..l {
                        h = h.derivative();
                    }
                    Parity::from_poly(&h, m + j - l.min(m + j))
                })
                .collect()
        })
        .collect();
    let det = bareiss(&mut a);
    let p = det.to_poly();
    debug_assert_eq!(p.degree(), degree);
    Ok(p.normalized())
}

/// Naive Laplace expansion of the Wronskian, kept for cross-checking.
pub fn hermite_generalized_cofactor(m: usize, n: usize) -> ExactPolynomial {
    let entries: Vec<Vec<ExactPolynomial>> = (0..n)
        .map(|l| {
            (0..n)
                .map(|j| {
                    let mut h = hermite_classical(m + j);
                    for _ in 0..l {
                        h = h.derivative();
                    }
                    h
                })
                .collect()
        })
        .collect();
    let cols: Vec<usize> = (0..n).collect();
    laplace(&entries, 0, &cols).normalized()
}

fn laplace(a: &[Vec<ExactPolynomial>], row: usize, cols: &[usize]) -> ExactPolynomial {
    if cols.len() == 1 {
        return a[row][cols[0]].clone();
    }
    let mut acc = vec![BigInt::zero()];
    for (idx, &c) in cols.iter().enumerate() {
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = laplace(a, row + 1, &rest);
        let prod = mul_dense(a[row][c].coeffs(), minor.coeffs());
        if idx % 2 == 0 {
            add_into(&mut acc, &prod);
        } else {
            sub_into(&mut acc, &prod);
        }
    }
    ExactPolynomial::new(acc)
}

/// A polynomial `z^shift * G(z^2)`.
#[derive(Clone, Debug)]
struct Parity {
    shift: usize,
    g: Vec<BigInt>,
}

impl Parity {
    fn from_poly(p: &ExactPolynomial, parity: usize) -> Self {
        let shift = parity % 2;
        debug_assert!(p.has_parity(shift));
        let g = p.coeffs().iter().skip(shift).step_by(2).cloned().collect();
        Parity { shift, g: trim(g) }
    }

    fn is_zero(&self) -> bool {
        self.g.iter().all(Zero::is_zero)
    }

    fn mul(&self, other: &Parity) -> Parity {
        let mut g = mul_dense(&self.g, &other.g);
        let mut shift = self.shift + other.shift;
        if shift == 2 {
            g.insert(0, BigInt::zero());
            shift = 0;
        }
        Parity { shift, g }
    }

    fn sub(mut self, other: &Parity) -> Parity {
        if other.is_zero() {
            return self;
        }
        if self.is_zero() {
            let mut o = other.clone();
            o.g.iter_mut().for_each(|c| *c = -&*c);
            return o;
        }
        assert_eq!(self.shift, other.shift, "parity mismatch in elimination");
        sub_into(&mut self.g, &other.g);
        self.g = trim(std::mem::take(&mut self.g));
        self
    }

    /// Exact quotient `self / d`.
    fn div_exact(&self, d: &Parity) -> Parity {
        if self.is_zero() {
            return Parity { shift: 0, g: vec![BigInt::zero()] };
        }
        if self.shift >= d.shift {
            Parity { shift: self.shift - d.shift, g: div_exact_dense(&self.g, &d.g) }
        } else {
            // z^0 A / z^1 B = z (A / w) / B
            debug_assert!(self.g[0].is_zero());
            Parity { shift: 1, g: div_exact_dense(&self.g[1..], &d.g) }
        }
    }

    fn to_poly(&self) -> ExactPolynomial {
        let mut c = vec![BigInt::zero(); 2 * self.g.len() + self.shift];
        for (i, v) in self.g.iter().enumerate() {
            c[2 * i + self.shift] = v.clone();
        }
        ExactPolynomial::new(c)
    }
}

fn bareiss(a: &mut [Vec<Parity>]) -> Parity {
    let n = a.len();
    let mut prev = Parity { shift: 0, g: vec![BigInt::one()] };
    for k in 0..n.saturating_sub(1) {
        assert!(!a[k][k].is_zero(), "vanishing pivot in Wronskian elimination");
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone()
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.len() > 1 && v.last().map_or(false, Zero::is_zero) {
        v.pop();
    }
    if v.is_empty() {
        v.push(BigInt::zero());
    }
    v
}

fn add_into(acc: &mut Vec<BigInt>, b: &[BigInt]) {
    if acc.len() < b.len() {
        acc.resize(b.len(), BigInt::zero());
    }
    for (x, y) in acc.iter_mut().zip(b) {
        *x += y;
    }
}

fn sub_into(acc: &mut Vec<BigInt>, b: &[BigInt]) {
    if acc.len() < b.len() {
        acc.resize(b.len(), BigInt::zero());
    }
    for (x, y) in acc.iter_mut().zip(b) {
        *x -= y;
    }
}

const KARATSUBA_CUTOFF: usize = 24;

fn mul_dense(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    mul_acc(a, b, &mut out);
    out
}

/// out += a * b
fn mul_acc(a: &[BigInt], b: &[BigInt], out: &mut [BigInt]) {
    if a.len() < KARATSUBA_CUTOFF || b.len() < KARATSUBA_CUTOFF {
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        return;
    }
    if a.len() != b.len() {
        // split the longer operand into chunks of the shorter length
        let (long, short) = if a.len() > b.len() { (a, b) } else { (b, a) };
        for (c, chunk) in long.chunks(short.len()).enumerate() {
            let off = c * short.len();
            mul_acc(chunk, short, &mut out[off..off + chunk.len() + short.len() - 1]);
        }
        return;
    }
    let n = a.len();
    let h = n / 2;
    let (a0, a1) = a.split_at(h);
    let (b0, b1) = b.split_at(h);
    let z0 = mul_dense(a0, b0);
    let z2 = mul_dense(a1, b1);
    let mut sa: Vec<BigInt> = a1.to_vec();
    add_into(&mut sa, a0);
    let mut sb: Vec<BigInt> = b1.to_vec();
    add_into(&mut sb, b0);
    let mut z1 = mul_dense(&sa, &sb);
    sub_into(&mut z1, &z0);
    sub_into(&mut z1, &z2);
    for (i, v) in z0.into_iter().enumerate() {
        out[i] += v;
    }
    for (i, v) in z1.into_iter().enumerate() {
        out[i + h] += v;
    }
    for (i, v) in z2.into_iter().enumerate() {
        out[i + 2 * h] += v;
    }
}

/// Quotient of an exact division in Z[w], computed from the top
/// coefficients only.
fn div_exact_dense(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let a = trim(a.to_vec());
    let b = trim(b.to_vec());
    let da = a.len() - 1;
    let db = b.len() - 1;
    if a.len() == 1 && a[0].is_zero() {
        return a;
    }
    assert!(da >= db, "inexact polynomial division");
    let dq = da - db;
    let lead = &b[db];
    let mut q = vec![BigInt::zero(); dq + 1];
    for k in (0..=dq).rev() {
        let mut r = a[k + db].clone();
        let top = dq.min(k + db);
        for j in k + 1..=top {
            let bi = k + db - j;
            if !q[j].is_zero() && !b[bi].is_zero() {
                r -= &q[j] * &b[bi];
            }
        }
        let (qq, rem) = r.div_rem(lead);
        debug_assert!(rem.is_zero(), "inexact polynomial division");
        q[k] = qq;
    }
    q
}
