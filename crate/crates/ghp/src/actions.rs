//! Turning points of λ²V, the action integrals s₁, s₂ and their Jacobian.
//!
//! With the quartet labelled λ₁..λ₄ by continuation from the real quartet at
//! (α, β) = (0, 0), s₁ is the period over a loop around [λ₃, λ₄] and s₂ the
//! period over a loop around [λ₂, λ₃], each reduced to complete elliptic
//! integrals through the substitution that maps the loop's endpoints to the
//! Legendre normal form.

use crate::elliptic::{complete_e, complete_k, complete_pi, pi_branch_corrected};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

type C = Complex64;

const I: C = C::new(0.0, 1.0);

/// Relative separation below which two turning points count as collided.
pub const COLLISION_TOL: f64 = 1e-9;
/// Matched roots must be this many times closer than any competitor.
pub const MATCH_RATIO: f64 = 3.0;
/// Allowed gap between closed form and quadrature before a branch is suspected.
pub const BRANCH_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParameterPoint {
    pub nu: f64,
    pub alpha: C,
    pub beta: C,
}

impl ParameterPoint {
    pub fn new(nu: f64, alpha: C, beta: C) -> Self {
        ParameterPoint { nu, alpha, beta }
    }
}

/// Where a quartet's labels came from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabelPath {
    /// (α, β) of the quartet the labels were matched against.
    pub start: (C, C),
    /// Number of matching steps taken from `start`.
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TurningQuartet {
    pub lambdas: [C; 4],
    pub label_provenance: LabelPath,
}

impl TurningQuartet {
    /// The real quartet at (0, 0): λ₁ < λ₂ < 0 < λ₃ < λ₄.
    pub fn origin(nu: f64) -> Self {
        let r = (1.0 - nu * nu).sqrt();
        let l1 = -((1.0 + r) / 2.0).sqrt();
        let l2 = -((1.0 - r) / 2.0).sqrt();
        TurningQuartet {
            lambdas: [C::from(l1), C::from(l2), C::from(-l2), C::from(-l1)],
            label_provenance: LabelPath { start: (C::from(0.0), C::from(0.0)), steps: 0 },
        }
    }

    /// α recovered from the roots: −(λ₁+λ₂+λ₃+λ₄)/2.
    pub fn alpha(&self) -> C {
        -self.lambdas.iter().sum::<C>() / 2.0
    }

    /// β recovered from the roots: the third elementary symmetric function.
    pub fn beta(&self) -> C {
        let l = &self.lambdas;
        l[0] * l[1] * l[2] + l[0] * l[1] * l[3] + l[0] * l[2] * l[3] + l[1] * l[2] * l[3]
    }

    pub fn product(&self) -> C {
        self.lambdas.iter().product()
    }

    fn min_separation(&self) -> f64 {
        let mut s = f64::INFINITY;
        for i in 0..4 {
            for j in i + 1..4 {
                s = s.min((self.lambdas[i] - self.lambdas[j]).norm());
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ActionState {
    pub s1: C,
    pub s2: C,
    /// ∂(s₁, s₂)/∂(α, β), rows indexed by s.
    pub jacobian: [[C; 2]; 2],
}

impl ActionState {
    /// The map S = (−i s₁, −i s₂).
    pub fn s_values(&self) -> (C, C) {
        (-I * self.s1, -I * self.s2)
    }

    pub fn det(&self) -> C {
        let j = &self.jacobian;
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cycle {
    Gamma1,
    Gamma2,
}

/// Coefficients [c0, c1, c2, c3] of λ⁴ + c3 λ³ + c2 λ² + c1 λ + c0.
fn quartic_coeffs(p: &ParameterPoint) -> [C; 4] {
    [
        C::from(p.nu * p.nu / 4.0),
        -p.beta,
        p.alpha * p.alpha - 1.0,
        2.0 * p.alpha,
    ]
}

fn cbrt(z: C) -> C {
    if z.norm() == 0.0 {
        z
    } else {
        z.powf(1.0 / 3.0)
    }
}

/// Roots of a monic cubic by Cardano, polished by Newton.
fn cubic_roots(a2: C, a1: C, a0: C) -> [C; 3] {
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    let d = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    let sd = d.sqrt();
    let w1 = -q / 2.0 + sd;
    let w2 = -q / 2.0 - sd;
    let u = cbrt(if w1.norm() >= w2.norm() { w1 } else { w2 });
    let omega = C::new(-0.5, 3f64.sqrt() / 2.0);
    let mut out = [C::from(0.0); 3];
    let mut wk = C::from(1.0);
    for r in out.iter_mut() {
        let t = if u.norm() == 0.0 { C::from(0.0) } else { wk * u - p / (3.0 * wk * u) };
        *r = t - a2 / 3.0;
        wk *= omega;
    }
    for r in out.iter_mut() {
        for _ in 0..3 {
            let f = ((*r + a2) * *r + a1) * *r + a0;
            let df = (3.0 * *r + 2.0 * a2) * *r + a1;
            if df.norm() == 0.0 {
                break;
            }
            *r -= f / df;
        }
    }
    out
}

/// Roots of the quartic λ⁴ + 2αλ³ + (α²−1)λ² − βλ + ν²/4 (Ferrari), unordered.
pub fn quartic_roots(p: &ParameterPoint) -> [C; 4] {
    let [e, d, c, b] = quartic_coeffs(p);
    let pp = c - 3.0 * b * b / 8.0;
    let qq = d - b * c / 2.0 + b * b * b / 8.0;
    let rr = e - b * d / 4.0 + b * b * c / 16.0 - 3.0 * b * b * b * b / 256.0;
    let shift = -b / 4.0;
    let scale = 1.0 + pp.norm() + rr.norm().sqrt();
    let ys = if qq.norm() < 1e-14 * scale * scale.sqrt() {
        let disc = (pp * pp - 4.0 * rr).sqrt();
        let w1 = ((-pp + disc) / 2.0).sqrt();
        let w2 = ((-pp - disc) / 2.0).sqrt();
        [w1, -w1, w2, -w2]
    } else {
        // (y² + p/2 + m)² = (s y − q/(2s))² with s² = 2m
        let ms = cubic_roots(pp, (pp * pp - 4.0 * rr) / 4.0, -qq * qq / 8.0);
        let m = ms.iter().copied().fold(C::from(0.0), |a, z| if z.norm() > a.norm() { z } else { a });
        let s = (2.0 * m).sqrt();
        let t = qq / (2.0 * s);
        let r1 = (s * s - 4.0 * (pp / 2.0 + m + t)).sqrt();
        let r2 = (s * s - 4.0 * (pp / 2.0 + m - t)).sqrt();
        [(s + r1) / 2.0, (s - r1) / 2.0, (-s + r2) / 2.0, (-s - r2) / 2.0]
    };
    let mut out = ys.map(|y| y + shift);
    for z in out.iter_mut() {
        for _ in 0..2 {
            let f = (((*z + b) * *z + c) * *z + d) * *z + e;
            let df = ((4.0 * *z + 3.0 * b) * *z + 2.0 * c) * *z + d;
            if df.norm() == 0.0 {
                break;
            }
            let step = f / df;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *z -= step;
        }
    }
    out
}

/// Labels the quartet at `p` by nearest-neighbour matching against `anchor`
/// (default: the real quartet at the origin). No continuation is attempted.
pub fn turning_points(p: &ParameterPoint, anchor: Option<&TurningQuartet>) -> Result<TurningQuartet> {
    let origin = TurningQuartet::origin(p.nu);
    let anchor = anchor.unwrap_or(&origin);
    let roots = quartic_roots(p);
    let scale = roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let q = TurningQuartet { lambdas: roots, label_provenance: anchor.label_provenance };
    let sep = q.min_separation();
    if sep < COLLISION_TOL * scale {
        return Err(Error::TurningPointCollision { separation: sep });
    }
    let mut lambdas = [C::from(0.0); 4];
    let mut used = [false; 4];
    for (i, a) in anchor.lambdas.iter().enumerate() {
        let mut d: Vec<(f64, usize)> = roots.iter().enumerate().map(|(j, r)| ((r - a).norm(), j)).collect();
        d.sort_by(|x, y| x.0.total_cmp(&y.0));
        let (best, j) = d[0];
        let ratio = if best == 0.0 { f64::INFINITY } else { d[1].0 / best };
        if used[j] || ratio < MATCH_RATIO {
            return Err(Error::LabelAmbiguity { margin: ratio });
        }
        used[j] = true;
        lambdas[i] = roots[j];
    }
    Ok(TurningQuartet {
        lambdas,
        label_provenance: LabelPath {
            start: (anchor.alpha(), anchor.beta()),
            steps: anchor.label_provenance.steps + 1,
        },
    })
}

/// Carries the labels of `from` to `p` along the straight segment in (α, β),
/// bisecting wherever the matching is ambiguous.
pub fn track_quartet(p: &ParameterPoint, from: &TurningQuartet) -> Result<TurningQuartet> {
    let a0 = from.alpha();
    let b0 = from.beta();
    let mut cur = *from;
    let mut t = 0.0f64;
    let mut h = 1.0f64;
    while t < 1.0 {
        let tn = (t + h).min(1.0);
        let q = ParameterPoint::new(p.nu, a0 + (p.alpha - a0) * tn, b0 + (p.beta - b0) * tn);
        match turning_points(&q, Some(&cur)) {
            Ok(next) => {
                cur = next;
                t = tn;
                h = (2.0 * h).min(1.0);
            }
            Err(Error::LabelAmbiguity { margin }) => {
                h /= 2.0;
                if h < 1e-6 {
                    return Err(Error::LabelAmbiguity { margin });
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(TurningQuartet {
        lambdas: cur.lambdas,
        label_provenance: LabelPath { start: (a0, b0), steps: cur.label_provenance.steps - from.label_provenance.steps },
    })
}

/// The quartet at `p` with labels continued from the origin along a straight path.
pub fn turning_points_from_origin(p: &ParameterPoint) -> Result<TurningQuartet> {
    track_quartet(p, &TurningQuartet::origin(p.nu))
}

/// The combination of complete integrals that appears in the second moment.
fn v2(a: C, m: C, k: C, e: C, pa: C) -> C {
    (a * e + (m - a) * k + (2.0 * a * m + 2.0 * a - a * a - 3.0 * m) * pa) / (2.0 * (a - 1.0) * (m - a))
}

/// ∫ λ^j dλ / w over the interval [lo, hi] for j = 0, 1, 2 and j = −1, where
/// w² = (λ−lo)(λ−hi)(λ−p)(λ−q), scaled by the common factor g.
fn moments(lo: C, hi: C, p: C, q: C, g: C, upper_pi: bool) -> Result<[C; 4]> {
    let a = (hi - lo) / (hi - p);
    let m = (p - q) * (hi - lo) / ((lo - q) * (hi - p));
    let d = lo - p;
    let k = complete_k(m)?;
    let e = complete_e(m)?;
    let pa = complete_pi(a, m)?;
    let b = a * p / lo;
    let pb = if upper_pi { pi_branch_corrected(b, m)? } else { complete_pi(b, m)? };
    Ok([
        g * k,
        g * (p * k + d * pa),
        g * (p * p * k + 2.0 * p * d * pa + d * d * v2(a, m, k, e, pa)),
        g * (k / p + (p - lo) / (p * lo) * pb),
    ])
}

/// Closed-form actions and Jacobian for a labelled quartet.
pub fn actions(p: &ParameterPoint, tq: &TurningQuartet) -> Result<ActionState> {
    let [l1, l2, l3, l4] = tq.lambdas;
    let g = 2.0 / ((l4 - l2) * (l3 - l1)).sqrt();
    let (al, be, nu) = (p.alpha, p.beta, p.nu);
    let c3 = 2.0 * al;
    let c2 = al * al - 1.0;
    let c1 = -be;
    let c0 = C::from(nu * nu / 4.0);
    let j = moments(l3, l4, l2, l1, g, false)?;
    let l = moments(l2, l3, l1, l4, g, true)?;
    let comb = |v: &[C; 4]| c3 / 4.0 * v[2] + c2 / 2.0 * v[1] + 3.0 * c1 / 4.0 * v[0] + c0 * v[3];
    let s1 = 2.0 * I * comb(&j) + I * PI * (1.0 - nu) / 2.0;
    let s2 = -2.0 * comb(&l) - I * PI * nu;
    let jacobian = [
        [2.0 * I * (j[2] + al * j[1]), -I * j[0]],
        [-2.0 * (l[2] + al * l[1]), l[0]],
    ];
    let out = ActionState { s1, s2, jacobian };
    if ![s1, s2, jacobian[0][0], jacobian[0][1], jacobian[1][0], jacobian[1][1]]
        .iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
    {
        return Err(Error::DomainError("non-finite action".into()));
    }
    Ok(out)
}

/// Closed form checked against the quadrature oracle.
pub fn actions_verified(p: &ParameterPoint, tq: &TurningQuartet) -> Result<ActionState> {
    let st = actions(p, tq)?;
    let o1 = contour_oracle(p, tq, Cycle::Gamma1)? + I * PI * (1.0 - p.nu) / 2.0;
    let o2 = contour_oracle(p, tq, Cycle::Gamma2)?;
    let dev = (st.s1 - o1).norm().max((st.s2 - o2).norm());
    if dev > BRANCH_TOL {
        return Err(Error::BranchSuspect { deviation: dev });
    }
    Ok(st)
}

/// (z − c) sqrt(1 − (h/(z − c))²): cut exactly on the segment [c − h, c + h].
fn seg(z: C, a: C, b: C) -> C {
    let c = (a + b) / 2.0;
    let h = (b - a) / 2.0;
    let w = h / (z - c);
    (z - c) * (1.0 - w * w).sqrt()
}

/// Elliptic radius of `o` in coordinates adapted to the segment centred at `c`.
fn elliptic_radius(o: C, c: C, h: C) -> f64 {
    let w = (o - c) / h;
    // |Re arccosh w| = ln|w + sqrt(w−1) sqrt(w+1)|
    (w + (w - 1.0).sqrt() * (w + 1.0).sqrt()).norm().ln().abs()
}

fn ellipse_period(lo: C, hi: C, rho: f64, lambdas: &[C; 4], n: usize) -> C {
    let c = (lo + hi) / 2.0;
    let h = (hi - lo) / 2.0;
    let (ch, sh) = (rho.cosh(), rho.sinh());
    let mut acc = C::from(0.0);
    let mut prev: Option<C> = None;
    let mut sign = 1.0;
    for i in 0..n {
        let th = -PI / 2.0 + 2.0 * PI * i as f64 / n as f64;
        let (s, co) = th.sin_cos();
        let z = c + h * C::new(ch * co, sh * s);
        let dz = h * C::new(-ch * s, sh * co);
        let mut y = seg(z, lambdas[0], lambdas[1]) * seg(z, lambdas[2], lambdas[3]) * sign;
        if let Some(yp) = prev {
            if (y + yp).norm() < (y - yp).norm() {
                sign = -sign;
                y = -y;
            }
        }
        prev = Some(y);
        acc += y / z * dz;
    }
    acc * (2.0 * PI / n as f64)
}

/// Period of ω = y dλ/λ over γ₁ or γ₂ by the trapezoid rule on an ellipse,
/// with y ~ λ² on the sheet fixed at infinity and its sign continued along
/// the contour. Independent of the closed forms.
pub fn contour_oracle(_p: &ParameterPoint, tq: &TurningQuartet, cycle: Cycle) -> Result<C> {
    let [l1, l2, l3, l4] = tq.lambdas;
    let zero = C::from(0.0);
    let (lo, hi, rho) = match cycle {
        Cycle::Gamma1 => {
            let (c, h) = ((l3 + l4) / 2.0, (l4 - l3) / 2.0);
            let r = [l1, l2, zero].iter().map(|&o| elliptic_radius(o, c, h)).fold(f64::INFINITY, f64::min);
            (l3, l4, 0.5 * r)
        }
        Cycle::Gamma2 => {
            // the loop must enclose the pole at 0 but not λ₁, λ₄
            let (c, h) = ((l2 + l3) / 2.0, (l3 - l2) / 2.0);
            let outer = elliptic_radius(l1, c, h).min(elliptic_radius(l4, c, h));
            let inner = elliptic_radius(zero, c, h);
            if outer - inner < 1e-6 {
                return Err(Error::ContourDegenerate("origin not separable from λ₁, λ₄".into()));
            }
            (l2, l3, 0.5 * (inner + outer))
        }
    };
    if !(rho > 1e-6) {
        return Err(Error::ContourDegenerate(format!("ellipse radius {rho:e}")));
    }
    let mut n = 1024usize;
    let mut prev = ellipse_period(lo, hi, rho, &tq.lambdas, n);
    loop {
        n *= 2;
        let cur = ellipse_period(lo, hi, rho, &tq.lambdas, n);
        if (cur - prev).norm() < 1e-13 * (1.0 + cur.norm()) {
            return Ok(cur);
        }
        if n > 1 << 20 {
            return Err(Error::ContourDegenerate("quadrature did not settle".into()));
        }
        prev = cur;
    }
}

/// A point of the Boutroux locus with its labelled quartet and actions.
#[derive(Clone, Copy, Debug)]
pub struct BoutrouxPoint {
    pub beta: C,
    pub quartet: TurningQuartet,
    pub state: ActionState,
    pub steps: usize,
}

/// Newton on (Re β, Im β) driving (Re s₁, Re s₂) to zero, with labels
/// carried from `anchor`.
pub fn solve_beta_from(nu: f64, alpha: C, beta_guess: C, anchor: &TurningQuartet) -> Result<BoutrouxPoint> {
    let mut beta = beta_guess;
    let p = ParameterPoint::new(nu, alpha, beta);
    let mut tq = track_quartet(&p, anchor)?;
    let mut st = actions(&p, &tq)?;
    let resid = |st: &ActionState| st.s1.re.abs() + st.s2.re.abs();
    let mut r = resid(&st);
    for step in 0..50 {
        if r < 1e-12 {
            return Ok(BoutrouxPoint { beta, quartet: tq, state: st, steps: step });
        }
        // d Re s_i = Re(J_i) dβr − Im(J_i) dβi
        let (a, b) = (st.jacobian[0][1], st.jacobian[1][1]);
        let det = a.re * (-b.im) - (-a.im) * b.re;
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NewtonDiverged { steps: step, residual: r });
        }
        let (f1, f2) = (-st.s1.re, -st.s2.re);
        let dr = (f1 * (-b.im) - (-a.im) * f2) / det;
        let di = (a.re * f2 - b.re * f1) / det;
        let mut dbeta = C::new(dr, di);
        let mut accepted = false;
        for _ in 0..=6 {
            let pn = ParameterPoint::new(nu, alpha, beta + dbeta);
            let trial = track_quartet(&pn, &tq).and_then(|q| actions(&pn, &q).map(|s| (q, s)));
            if let Ok((qn, sn)) = trial {
                let rn = resid(&sn);
                if rn < r {
                    beta += dbeta;
                    tq = qn;
                    st = sn;
                    r = rn;
                    accepted = true;
                    break;
                }
            }
            dbeta /= 2.0;
        }
        if !accepted {
            return Err(Error::NewtonDiverged { steps: step, residual: r });
        }
    }
    if r < 1e-12 {
        return Ok(BoutrouxPoint { beta, quartet: tq, state: st, steps: 50 });
    }
    Err(Error::NewtonDiverged { steps: 50, residual: r })
}

/// β = B(α) on the Boutroux locus, starting Newton from `beta_guess` with
/// labels carried from the origin.
pub fn solve_beta(nu: f64, alpha: C, beta_guess: C) -> Result<C> {
    solve_beta_from(nu, alpha, beta_guess, &TurningQuartet::origin(nu)).map(|b| b.beta)
}

/// B along the ray t·α, t ∈ (0, 1], each stage seeded by the previous one.
pub fn solve_beta_continued(nu: f64, alpha: C, stages: usize) -> Result<BoutrouxPoint> {
    let mut q = TurningQuartet::origin(nu);
    let mut beta = C::from(0.0);
    let mut prev_beta = C::from(0.0);
    let mut out = None;
    for s in 1..=stages.max(1) {
        let t = s as f64 / stages.max(1) as f64;
        let guess = if s == 1 { beta } else { 2.0 * beta - prev_beta };
        let bp = solve_beta_from(nu, alpha * t, guess, &q)?;
        prev_beta = beta;
        beta = bp.beta;
        q = bp.quartet;
        out = Some(bp);
    }
    Ok(out.expect("at least one stage"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::complete_k;

    const NUS: [f64; 3] = [1.0 / 3.0, 0.25, 0.2];

    fn at(nu: f64, a: C, b: C) -> (ParameterPoint, TurningQuartet, ActionState) {
        let p = ParameterPoint::new(nu, a, b);
        let q = turning_points_from_origin(&p).unwrap();
        let s = actions(&p, &q).unwrap();
        (p, q, s)
    }

    #[test]
    fn origin_quartet() {
        let q = TurningQuartet::origin(1.0 / 3.0);
        assert!((q.lambdas[2].re - 0.16910198).abs() < 1e-8);
        assert!((q.lambdas[3].re - 0.98559856).abs() < 1e-8);
        assert!(((q.lambdas[2] * q.lambdas[3]).re - 1.0 / 6.0).abs() < 1e-15);
        let p = ParameterPoint::new(1.0 / 3.0, C::from(0.0), C::from(0.0));
        let t = turning_points(&p, None).unwrap();
        for i in 0..4 {
            assert!((t.lambdas[i] - q.lambdas[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn quartic_vieta_round_trip() {
        let pts = [
            (C::new(0.1, 0.05), C::new(0.02, -0.03)),
            (C::new(0.0, 0.3), C::new(0.0, 0.1)),
            (C::new(-0.4, 0.2), C::new(0.3, 0.01)),
            (C::new(1.5, -0.7), C::new(-2.0, 1.0)),
        ];
        for nu in NUS {
            for (a, b) in pts {
                let p = ParameterPoint::new(nu, a, b);
                let q = turning_points_from_origin(&p).unwrap();
                assert!((q.alpha() - a).norm() < 1e-13);
                assert!((q.beta() - b).norm() < 1e-13);
                assert!((q.product() - nu * nu / 4.0).norm() < 1e-13);
                // e2 = α² − 1
                let l = q.lambdas;
                let e2 = l[0] * l[1] + l[0] * l[2] + l[0] * l[3] + l[1] * l[2] + l[1] * l[3] + l[2] * l[3];
                assert!((e2 - (a * a - 1.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn collision_is_reported() {
        // α = 0, β = 0 with ν → 0 is fine; a double root: λ²(λ+α)² − λ² ... pick
        // (λ−1)²(λ−r)(λ−s) with matching coefficients
        let nu: f64 = 0.3;
        let r = 1.0;
        // λ⁴ + 2αλ³ + (α²−1)λ² − βλ + ν²/4 with a double root at r:
        // choose α and β so that V(r) = V'(r) = 0
        let mut alpha = C::from(-0.5);
        for _ in 0..100 {
            let f = |a: C| {
                let beta = (r * r * r * r + 2.0 * a * r * r * r + (a * a - 1.0) * r * r + nu * nu / 4.0) / r;
                4.0 * r * r * r + 6.0 * a * r * r + 2.0 * (a * a - 1.0) * r - beta
            };
            let h = 1e-7;
            let d = (f(alpha + h) - f(alpha - h)) / (2.0 * h);
            alpha -= f(alpha) / d;
        }
        let beta = (r.powi(4) + 2.0 * alpha * r.powi(3) + (alpha * alpha - 1.0) * r * r + nu * nu / 4.0) / r;
        let p = ParameterPoint::new(nu, alpha, beta);
        let e = turning_points(&p, None).unwrap_err();
        assert!(matches!(e, Error::TurningPointCollision { .. }), "{e:?}");
    }

    #[test]
    fn ambiguity_is_reported() {
        let nu = 1.0 / 3.0;
        let p = ParameterPoint::new(nu, C::new(0.6, 0.4), C::new(0.3, -0.2));
        let e = turning_points(&p, None);
        let tracked = turning_points_from_origin(&p);
        assert!(tracked.is_ok());
        assert!(e.is_err() || e.unwrap().lambdas == tracked.unwrap().lambdas);
    }

    #[test]
    fn origin_actions_vanish() {
        for nu in NUS {
            let (_, _, s) = at(nu, C::from(0.0), C::from(0.0));
            assert!(s.s1.norm() + s.s2.norm() < 1e-12, "{nu} {s:?}");
        }
    }

    #[test]
    fn origin_jacobian_column() {
        let (_, _, s) = at(1.0 / 3.0, C::from(0.0), C::from(0.0));
        let k = complete_k(C::from(0.5)).unwrap().re;
        let want = 3f64.sqrt() * k;
        assert!((want - 3.21135154).abs() < 1e-8);
        assert!((s.jacobian[0][1] - C::new(0.0, -want)).norm() < 1e-12);
        assert!((s.jacobian[1][1] - C::from(want)).norm() < 1e-12);
    }

    #[test]
    fn legendre_determinant() {
        let pts = [
            (C::new(0.05, 0.0), C::new(0.01, 0.0)),
            (C::new(0.1, 0.05), C::new(0.02, -0.03)),
            (C::new(-0.2, 0.1), C::new(0.05, 0.02)),
            (C::new(0.4, 0.3), C::new(-0.1, 0.05)),
        ];
        for nu in NUS {
            for (a, b) in pts {
                let (_, _, s) = at(nu, a, b);
                assert!((s.det() - C::new(0.0, 2.0 * PI)).norm() < 1e-10, "{:?}", s.det());
            }
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let nu = 0.25;
        let (a, b) = (C::new(0.15, 0.07), C::new(0.03, -0.02));
        let (_, q, s) = at(nu, a, b);
        let h = 1e-6;
        let ev = |da: C, db: C| {
            let p = ParameterPoint::new(nu, a + da, b + db);
            let qq = track_quartet(&p, &q).unwrap();
            actions(&p, &qq).unwrap()
        };
        let (pa, ma) = (ev(C::from(h), C::from(0.0)), ev(C::from(-h), C::from(0.0)));
        let (pb, mb) = (ev(C::from(0.0), C::from(h)), ev(C::from(0.0), C::from(-h)));
        let fd = [
            [(pa.s1 - ma.s1) / (2.0 * h), (pb.s1 - mb.s1) / (2.0 * h)],
            [(pa.s2 - ma.s2) / (2.0 * h), (pb.s2 - mb.s2) / (2.0 * h)],
        ];
        for i in 0..2 {
            for j in 0..2 {
                assert!((fd[i][j] - s.jacobian[i][j]).norm() < 1e-7, "{i}{j}");
            }
        }
    }

    #[test]
    fn oracle_at_origin() {
        for nu in NUS {
            let p = ParameterPoint::new(nu, C::from(0.0), C::from(0.0));
            let q = TurningQuartet::origin(nu);
            let g1 = contour_oracle(&p, &q, Cycle::Gamma1).unwrap();
            let g2 = contour_oracle(&p, &q, Cycle::Gamma2).unwrap();
            assert!((g1 + I * PI * (1.0 - nu) / 2.0).norm() < 1e-12, "{g1}");
            assert!(g2.norm() < 1e-12, "{g2}");
        }
    }

    #[test]
    fn closed_form_matches_oracle() {
        let pts = [
            (C::new(0.05, 0.0), C::new(0.01, 0.0)),
            (C::new(0.1, 0.05), C::new(0.02, -0.03)),
            (C::new(0.0, 0.3), C::new(0.0, 0.1)),
            (C::new(-0.2, 0.1), C::new(0.05, 0.02)),
            (C::new(0.4, 0.3), C::new(-0.1, 0.05)),
        ];
        for nu in NUS {
            for (a, b) in pts {
                let (p, q, _) = at(nu, a, b);
                actions_verified(&p, &q).unwrap();
            }
        }
    }

    #[test]
    fn solve_beta_basics() {
        let nu = 1.0 / 3.0;
        assert!(solve_beta(nu, C::from(0.0), C::from(0.0)).unwrap().norm() < 1e-14);
        let b = solve_beta(nu, C::from(0.1), C::from(0.0)).unwrap();
        assert!(b.im.abs() < 1e-12 && b.re.abs() > 0.0);
        let bp = solve_beta_continued(nu, C::new(0.2, 0.15), 4).unwrap();
        let p = ParameterPoint::new(nu, C::new(0.2, 0.15), bp.beta);
        let s = actions_verified(&p, &bp.quartet).unwrap();
        assert!(s.s1.re.abs() + s.s2.re.abs() < 1e-12);
        // S lands in the rectangle
        let (s1, s2) = s.s_values();
        assert!(s1.re.abs() <= (1.0 - nu) * PI / 2.0 && s2.re.abs() <= nu * PI);
    }

    #[test]
    fn symmetry_laws_on_locus() {
        let nu = 0.25;
        for a in [C::new(0.1, 0.2), C::new(-0.3, 0.1), C::new(0.25, -0.05)] {
            let bp = solve_beta_continued(nu, a, 4).unwrap();
            let (s1, s2) = bp.state.s_values();
            let c = solve_beta_continued(nu, a.conj(), 4).unwrap();
            let (c1, c2) = c.state.s_values();
            assert!((c.beta - bp.beta.conj()).norm() < 1e-12);
            assert!((c1 - s1).norm() < 1e-10 && (c2 + s2).norm() < 1e-10);
            let r = solve_beta_continued(nu, -a, 4).unwrap();
            let (r1, r2) = r.state.s_values();
            assert!((r.beta + bp.beta).norm() < 1e-12);
            assert!((r1 + s1).norm() < 1e-10 && (r2 + s2).norm() < 1e-10);
        }
    }
}
