//! The elliptic region K_a: corners from the octic C(α), the branches x(α),
//! y(α) on the plane cut along the diagonals, the harmonic function ψ whose
//! zero set contains ∂K_a, and the root density Φ_ν.

use crate::actions::{solve_beta_from, BoutrouxPoint};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

type C = Complex64;

const AXIS_TOL: f64 = 1e-10;
/// Continued branch values must be this many times closer than the next root.
const SWAP_RATIO: f64 = 3.0;

/// Roots of Σ c_i z^i by Aberth iteration in double precision.
pub(crate) fn poly_roots(c: &[C]) -> Vec<C> {
    let mut c = c.to_vec();
    while c.len() > 1 && c.last().map_or(false, |z| z.norm() == 0.0) {
        c.pop();
    }
    let d = c.len() - 1;
    if d == 0 {
        return vec![];
    }
    let lead = c[d];
    let r = 1.0 + c[..d].iter().map(|z| (z / lead).norm()).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..d)
        .map(|k| C::from_polar(0.5 * r, 2.0 * PI * k as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (mut p, mut dp) = (C::from(0.0), C::from(0.0));
            for a in c.iter().rev() {
                dp = dp * z[i] + p;
                p = p * z[i] + a;
            }
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: C = (0..d).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            z[i] -= w;
            moved = moved.max(w.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-16 {
            break;
        }
    }
    // one Newton polish each
    for zi in z.iter_mut() {
        let (mut p, mut dp) = (C::from(0.0), C::from(0.0));
        for a in c.iter().rev() {
            dp = dp * *zi + p;
            p = p * *zi + a;
        }
        if dp.norm() > 0.0 {
            *zi -= p / dp;
        }
    }
    z
}

/// C(α) = α⁸ − 6(3ν²+1)α⁴ + 8(1−9ν²)α² − 3(9ν⁴+6ν²+1), ascending coefficients.
pub fn corner_polynomial(nu: f64) -> [f64; 9] {
    let n2 = nu * nu;
    [
        -3.0 * (9.0 * n2 * n2 + 6.0 * n2 + 1.0),
        0.0,
        8.0 * (1.0 - 9.0 * n2),
        0.0,
        -6.0 * (3.0 * n2 + 1.0),
        0.0,
        0.0,
        0.0,
        1.0,
    ]
}

pub fn eval_corner_polynomial(nu: f64, a: C) -> C {
    corner_polynomial(nu).iter().rev().fold(C::from(0.0), |acc, &c| acc * a + c)
}

/// f(α) = −(α²(α²−2) + 3ν² + 1)/(6α): β at a triple turning point.
pub fn corner_beta(nu: f64, a: C) -> C {
    -(a * a * (a * a - 2.0) + 3.0 * nu * nu + 1.0) / (6.0 * a)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CornerSet {
    /// u_k in the k-th quadrant.
    pub u: [C; 4],
    /// v_k on the semi-axis i^{k−1} R₊.
    pub v: [C; 4],
}

/// The eight roots of C(α), sorted into the quadrant corners u and axis roots v.
pub fn corner_polynomial_roots(nu: f64) -> Result<CornerSet> {
    if !(nu > 0.0 && nu <= 1.0 / 3.0 + 1e-12) {
        return Err(Error::InvalidInput(format!("nu must lie in (0, 1/3], got {nu}")));
    }
    // C is even: solve the quartic in w = α² and take square roots
    let c = corner_polynomial(nu);
    let wc: Vec<C> = (0..5).map(|i| C::from(c[2 * i])).collect();
    let ws = poly_roots(&wc);
    let mut u = None;
    let mut v1 = None;
    let mut v2 = None;
    for w in ws {
        let scale = w.norm().max(1.0);
        if w.im.abs() < AXIS_TOL * scale {
            if w.re > 0.0 {
                v1 = Some(polish_corner(nu, C::from(w.re.sqrt())));
            } else {
                v2 = Some(polish_corner(nu, C::new(0.0, (-w.re).sqrt())));
            }
        } else if w.im > 0.0 {
            let mut a = w.sqrt();
            if a.re < 0.0 {
                a = -a;
            }
            u = Some(polish_corner(nu, a));
        }
    }
    let (Some(u1), Some(v1), Some(v2)) = (u, v1, v2) else {
        return Err(Error::ClassificationFailure("expected two real, two imaginary and four quadrant roots".into()));
    };
    let u1 = C::new(u1.re.abs(), u1.im.abs());
    if u1.re < AXIS_TOL || u1.im < AXIS_TOL {
        return Err(Error::ClassificationFailure(format!("quadrant root {u1} is on an axis")));
    }
    let v1 = C::from(v1.re.abs());
    let v2 = C::new(0.0, v2.im.abs());
    Ok(CornerSet { u: [u1, -u1.conj(), -u1, u1.conj()], v: [v1, v2, -v1, -v2] })
}

fn polish_corner(nu: f64, mut a: C) -> C {
    let c = corner_polynomial(nu);
    for _ in 0..4 {
        let (mut p, mut dp) = (C::from(0.0), C::from(0.0));
        for &ci in c.iter().rev() {
            dp = dp * a + p;
            p = p * a + ci;
        }
        if dp.norm() == 0.0 {
            break;
        }
        a -= p / dp;
    }
    a
}

/// A point of the (x, y) branch pair on the cut plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchPoint {
    pub alpha: C,
    pub x: C,
    pub y: C,
}

fn x_quartic(nu: f64, a: C) -> [C; 5] {
    [C::from(-nu * nu / 4.0), C::from(0.0), a * a - 1.0, 4.0 * a, C::from(3.0)]
}

fn y_squared(a: C, x: C) -> C {
    a * a + 6.0 * x * a + 6.0 * x * x - 1.0
}

fn segments_cross(p: C, q: C, a: C, b: C) -> bool {
    let cross = |o: C, s: C, t: C| (s - o).re * (t - o).im - (s - o).im * (t - o).re;
    let d1 = cross(a, b, p);
    let d2 = cross(a, b, q);
    let d3 = cross(p, q, a);
    let d4 = cross(p, q, b);
    let tiny = 1e-14 * (b - a).norm() * ((q - p).norm() + (p - a).norm());
    if d1.abs() <= tiny && d2.abs() <= tiny {
        // collinear: crossing means sharing interior points
        let ab = b - a;
        let t = |z: C| ((z - a) * ab.conj()).re / ab.norm_sqr();
        let (t0, t1) = (t(p).min(t(q)), t(p).max(t(q)));
        return t0 < 1.0 - 1e-12 && t1 > 1e-12;
    }
    (d1 > 0.0) != (d2 > 0.0) && (d3 > 0.0) != (d4 > 0.0)
}

/// Distance from z to the open segment (a, b); points beyond either end
/// are never close to it.
fn dist_to_segment(z: C, a: C, b: C) -> f64 {
    let ab = b - a;
    let t = ((z - a) * ab.conj()).re / ab.norm_sqr();
    if !(0.0..1.0).contains(&t) || t == 0.0 {
        return f64::INFINITY;
    }
    (z - (a + ab * t)).norm()
}

/// x(α), y(α) and ψ(α) on the plane cut along [u₁, u₃] ∪ [u₂, u₄].
#[derive(Clone, Debug)]
pub struct Branches {
    pub nu: f64,
    pub corners: CornerSet,
    anchor: BranchPoint,
    radius: f64,
}

impl Branches {
    pub fn new(nu: f64) -> Result<Self> {
        let corners = corner_polynomial_roots(nu)?;
        let a0 = C::from(3.0);
        let xs = poly_roots(&x_quartic(nu, a0));
        let pos: Vec<C> = xs.into_iter().filter(|z| z.im.abs() < 1e-12 && z.re > 0.0).collect();
        if pos.len() != 1 {
            return Err(Error::BranchJump { margin: 0.0 });
        }
        let x = C::from(pos[0].re);
        let y = y_squared(a0, x).sqrt();
        let radius = 3f64.max(2.0 * corners.u[0].norm());
        Ok(Branches { nu, corners, anchor: BranchPoint { alpha: a0, x, y }, radius })
    }

    pub fn anchor(&self) -> BranchPoint {
        self.anchor
    }

    fn cut_distance(&self, a: C) -> f64 {
        let u = &self.corners.u;
        dist_to_segment(a, u[0], u[2]).min(dist_to_segment(a, u[1], u[3]))
    }

    pub fn crosses_cut(&self, p: C, q: C) -> bool {
        let u = &self.corners.u;
        segments_cross(p, q, u[0], u[2]) || segments_cross(p, q, u[1], u[3])
    }

    /// Continues `from` along the straight segment to `to`, which must not
    /// cross a cut.
    pub fn continue_to(&self, from: &BranchPoint, to: C) -> Result<BranchPoint> {
        if self.crosses_cut(from.alpha, to) {
            return Err(Error::CutCrossing);
        }
        let a0 = from.alpha;
        let mut cur = *from;
        let mut t = 0.0f64;
        let mut h = 1.0f64;
        let span = (to - a0).norm().max(1e-300);
        h = h.min(0.05 / span.max(0.05));
        while t < 1.0 {
            let tn = (t + h).min(1.0);
            let a = a0 + (to - a0) * tn;
            match self.step(&cur, a) {
                Ok(next) => {
                    cur = next;
                    t = tn;
                    h *= 2.0;
                }
                Err(_) if h * span > 1e-13 => h /= 2.0,
                Err(e) => return Err(e),
            }
        }
        Ok(cur)
    }

    fn step(&self, cur: &BranchPoint, a: C) -> Result<BranchPoint> {
        let xs = poly_roots(&x_quartic(self.nu, a));
        let mut d: Vec<(f64, C)> = xs.iter().map(|z| ((z - cur.x).norm(), *z)).collect();
        d.sort_by(|p, q| p.0.total_cmp(&q.0));
        if d[0].0 * SWAP_RATIO > d[1].0 {
            return Err(Error::BranchJump { margin: d[1].0 / d[0].0.max(1e-300) });
        }
        let x = d[0].1;
        let y0 = y_squared(a, x).sqrt();
        let (dp, dm) = ((y0 - cur.y).norm(), (y0 + cur.y).norm());
        if dp.min(dm) * SWAP_RATIO > dp.max(dm) {
            return Err(Error::BranchJump { margin: dp.max(dm) / dp.min(dm).max(1e-300) });
        }
        let y = if dp <= dm { y0 } else { -y0 };
        Ok(BranchPoint { alpha: a, x, y })
    }

    /// x and y at α, continued from the anchor α₀ = 3 along the real axis to a
    /// circle outside the cuts, around it to arg α, then radially inward.
    pub fn at(&self, alpha: C) -> Result<BranchPoint> {
        if let Some(u) = self.corners.u.iter().find(|u| (**u - alpha).norm() <= 1e-14 * u.norm()) {
            return self.at_corner(*u);
        }
        if self.cut_distance(alpha) < 1e-8 {
            return Err(Error::CutCrossing);
        }
        let r = self.radius.max(1.5 * alpha.norm());
        let mut cur = self.continue_to(&self.anchor, C::from(r))?;
        let theta = alpha.arg();
        let n = ((theta.abs() / (PI / 32.0)).ceil() as usize).max(1);
        for i in 1..=n {
            let p = C::from_polar(r, theta * i as f64 / n as f64);
            cur = self.continue_to(&cur, p)?;
        }
        self.continue_to(&cur, alpha)
    }

    /// The limit at a corner, where x meets another root of its quartic and
    /// y vanishes.
    fn at_corner(&self, u: C) -> Result<BranchPoint> {
        let near = self.at(u * (1.0 + 1e-6))?;
        let q = x_quartic(self.nu, u);
        // the double root is a simple root of the derivative
        let mut x = near.x;
        for _ in 0..20 {
            let d1 = ((4.0 * q[4] * x + 3.0 * q[3]) * x + 2.0 * q[2]) * x + q[1];
            let d2 = (12.0 * q[4] * x + 6.0 * q[3]) * x + 2.0 * q[2];
            if d2.norm() == 0.0 {
                break;
            }
            x -= d1 / d2;
        }
        Ok(BranchPoint { alpha: u, x, y: C::from(0.0) })
    }

    /// ψ at a continued branch point.
    pub fn psi_at(&self, b: &BranchPoint) -> Result<f64> {
        psi_from(self.nu, b)
    }

    pub fn psi(&self, alpha: C) -> Result<f64> {
        self.psi_at(&self.at(alpha)?)
    }

    /// B_Δ(α) = x(−2 + 4x² + 6xα + 2α²).
    pub fn edge_beta_at(&self, b: &BranchPoint) -> C {
        let (x, a) = (b.x, b.alpha);
        x * (-2.0 + 4.0 * x * x + 6.0 * x * a + 2.0 * a * a)
    }
}

/// α y and the three logarithm arguments p₁, p₂, p₃.
fn log_args(nu: f64, b: &BranchPoint) -> (C, [C; 3]) {
    let (a, x, y) = (b.alpha, b.x, b.y);
    let p1 = 1.0 - 2.0 * x * a - 2.0 * x * x;
    let p2 = 2.0 * x + a + y;
    let p3 = (x * (a * a + 5.0 * x * a + 4.0 * x * x - 1.0) + nu * y / 2.0) / (x * x);
    (a * y, [p1, p2, p3])
}

fn psi_from(nu: f64, b: &BranchPoint) -> Result<f64> {
    let (ay, [p1, p2, p3]) = log_args(nu, b);
    for p in [p1, p2, p3] {
        if !(p.norm() >= 1e-300) {
            return Err(Error::LogSingular);
        }
    }
    Ok(0.5 * (ay.re + 0.5 * (1.0 - nu) * p1.norm().ln() - p2.norm().ln() + nu * p3.norm().ln()))
}

pub fn branch_x(nu: f64, alpha: C) -> Result<C> {
    Ok(Branches::new(nu)?.at(alpha)?.x)
}

pub fn branch_y(nu: f64, alpha: C) -> Result<C> {
    Ok(Branches::new(nu)?.at(alpha)?.y)
}

pub fn psi(nu: f64, alpha: C) -> Result<f64> {
    Branches::new(nu)?.psi(alpha)
}

/// β on ∂K above α: B_Δ(α), or f(α) at a corner.
pub fn edge_beta(nu: f64, alpha: C) -> Result<C> {
    let br = Branches::new(nu)?;
    if let Some(u) = br.corners.u.iter().find(|u| (*u - alpha).norm() < 1e-12) {
        return Ok(corner_beta(nu, *u));
    }
    Ok(br.edge_beta_at(&br.at(alpha)?))
}

#[derive(Clone, Debug)]
pub struct BoundaryCurve {
    /// e₁..e₄; e_k runs from u_{k−1} to u_k (u₀ = u₄).
    pub edges: [Vec<C>; 4],
    pub corners: CornerSet,
    pub nu: f64,
    /// Unit tangents of e_k and e_{k+1} leaving u_k.
    pub tangents: [(C, C); 4],
}

impl BoundaryCurve {
    /// Closed polygon e₁ e₂ e₃ e₄ without repeated corners.
    pub fn polygon(&self) -> Vec<C> {
        let mut out = Vec::new();
        for e in &self.edges {
            out.extend_from_slice(&e[..e.len() - 1]);
        }
        out
    }

    /// Even-odd point-in-polygon test.
    pub fn contains(&self, z: C) -> bool {
        point_in_polygon(&self.polygon(), z)
    }

    /// Internal angle between the two edges at u_k.
    pub fn corner_angle(&self, k: usize) -> f64 {
        let (a, b) = self.tangents[k];
        (b / a).arg().abs()
    }
}

pub fn point_in_polygon(poly: &[C], z: C) -> bool {
    let mut inside = false;
    let n = poly.len();
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (poly[i], poly[j]);
        if (a.im > z.im) != (b.im > z.im) && z.re < (b.re - a.re) * (z.im - a.im) / (b.im - a.im) + a.re {
            inside = !inside;
        }
        j = i;
    }
    inside
}

/// ∇ψ as ψ_x + iψ_y. ψ = Re F with F analytic, so ∇ψ = conj F'; F' comes
/// from a central difference in which the logarithms only see ratios close to 1.
fn grad(br: &Branches, b: &BranchPoint) -> Result<C> {
    let h = 1e-6 * b.alpha.norm().max(1e-2);
    let plus = br.continue_to(b, b.alpha + h)?;
    let minus = br.continue_to(b, b.alpha - h)?;
    let (fp, pp) = log_args(br.nu, &plus);
    let (fm, pm) = log_args(br.nu, &minus);
    let nu = br.nu;
    let df = 0.5
        * (fp - fm + 0.5 * (1.0 - nu) * (pp[0] / pm[0]).ln() - (pp[1] / pm[1]).ln() + nu * (pp[2] / pm[2]).ln());
    Ok((df / (2.0 * h)).conj())
}

/// Newton along the gradient onto ψ = 0.
fn correct(br: &Branches, b: &BranchPoint) -> Result<BranchPoint> {
    let mut cur = *b;
    for _ in 0..30 {
        let v = br.psi_at(&cur)?;
        if v.abs() < 1e-13 {
            return Ok(cur);
        }
        let g = grad(br, &cur)?;
        if g.norm() == 0.0 {
            break;
        }
        let next = cur.alpha - g * (v / g.norm_sqr());
        cur = br.continue_to(&cur, next)?;
    }
    let v = br.psi_at(&cur)?;
    if v.abs() < 1e-11 {
        return Ok(cur);
    }
    Err(Error::TraceLost(format!("corrector stalled at {} with psi = {v:e}", cur.alpha)))
}

/// Zero directions of ψ on a small circle around the corner u, skipping the
/// arc that crosses the cut.
fn corner_directions(br: &Branches, u: C, r: f64) -> Result<Vec<f64>> {
    // the cut leaves u towards the origin
    let cut = (-u).arg();
    let n = 720;
    let start = br.at(u + C::from_polar(r, cut + PI))?;
    let mut prev: Option<(f64, f64, BranchPoint)> = None;
    let mut out = Vec::new();
    // walk from just after the cut, counterclockwise, to just before it
    let mut cur = start;
    let angles: Vec<f64> = (1..n).map(|i| cut + 2.0 * PI * i as f64 / n as f64).collect();
    // bring `cur` to the first angle along the circle's far side
    let walk = |from: &BranchPoint, th: f64| br.continue_to(from, u + C::from_polar(r, th));
    let steps_back = (n / 2) - 1;
    for i in (1..=steps_back).rev() {
        cur = walk(&cur, cut + 2.0 * PI * i as f64 / n as f64)?;
    }
    for th in angles {
        cur = walk(&cur, th)?;
        let v = br.psi_at(&cur)?;
        if let Some((pth, pv, pb)) = prev {
            if (v > 0.0) != (pv > 0.0) {
                // bisect on the arc
                let (mut lo, mut hi, mut lv) = (pth, th, pv);
                let mut lb = pb;
                for _ in 0..50 {
                    let mid = 0.5 * (lo + hi);
                    let mb = br.continue_to(&lb, u + C::from_polar(r, mid))?;
                    let mv = br.psi_at(&mb)?;
                    if (mv > 0.0) == (lv > 0.0) {
                        lo = mid;
                        lv = mv;
                        lb = mb;
                    } else {
                        hi = mid;
                    }
                }
                out.push(0.5 * (lo + hi));
            }
        }
        prev = Some((th, v, cur));
    }
    Ok(out)
}

/// Traces the zero line of ψ leaving `u` in direction `theta` until it
/// reaches another corner (returned) or escapes past `escape`.
fn trace_from(
    br: &Branches,
    u: C,
    theta: f64,
    h: f64,
    escape: f64,
) -> Result<(Vec<BranchPoint>, Option<usize>)> {
    let r0 = 1e-3;
    let mut b = correct(br, &br.at(u + C::from_polar(r0, theta))?)?;
    let mut pts = vec![br.at(u)?, b];
    let mut dir = C::from_polar(1.0, theta);
    for _ in 0..20000 {
        let g = grad(br, &b)?;
        let mut t = C::new(-g.im, g.re);
        if t.norm() == 0.0 {
            return Err(Error::TraceLost("vanishing gradient".into()));
        }
        t /= t.norm();
        if (t * dir.conj()).re < 0.0 {
            t = -t;
        }
        let mut step = h;
        let next = loop {
            let trial = br
                .continue_to(&b, b.alpha + t * step)
                .and_then(|p| correct(br, &p));
            match trial {
                Ok(p) if ((p.alpha - b.alpha).norm() - step).abs() < 0.5 * step => break p,
                _ if step > 1e-6 => step /= 2.0,
                Ok(p) => break p,
                Err(e) => return Err(e),
            }
        };
        dir = (next.alpha - b.alpha) / (next.alpha - b.alpha).norm();
        b = next;
        pts.push(b);
        for (k, uk) in br.corners.u.iter().enumerate() {
            if (*uk - u).norm() > 1e-9 && (b.alpha - uk).norm() < 2.0 * h {
                pts.push(br.at(*uk)?);
                return Ok((pts, Some(k)));
            }
        }
        if b.alpha.norm() > escape {
            return Ok((pts, None));
        }
    }
    Err(Error::TraceLost("no corner reached".into()))
}

/// Arc-length resampling to `n` points with the interior points pulled
/// back onto ψ = 0.
fn resample(br: &Branches, pts: &[BranchPoint], n: usize) -> Result<Vec<C>> {
    let mut s = vec![0.0];
    for w in pts.windows(2) {
        s.push(s.last().unwrap() + (w[1].alpha - w[0].alpha).norm());
    }
    let total = *s.last().unwrap();
    let last = pts.len() - 1;
    let mut out = Vec::with_capacity(n);
    let mut j = 0;
    for i in 0..n {
        if i == 0 || i == n - 1 {
            out.push(if i == 0 { pts[0].alpha } else { pts[last].alpha });
            continue;
        }
        let target = total * i as f64 / (n - 1) as f64;
        while j + 2 < s.len() && s[j + 1] < target {
            j += 1;
        }
        let f = ((target - s[j]) / (s[j + 1] - s[j]).max(1e-300)).clamp(0.0, 1.0);
        let z = pts[j].alpha + (pts[j + 1].alpha - pts[j].alpha) * f;
        // continue from a traced neighbour that is not a corner
        let from = if j == 0 { &pts[1] } else if j + 1 >= last { &pts[last - 1] } else { &pts[j] };
        out.push(correct(br, &br.continue_to(from, z)?)?.alpha);
    }
    Ok(out)
}

/// ∂K_a as four ψ = 0 polylines, each traced from its starting corner.
pub fn trace_boundary(nu: f64, points_per_edge: usize) -> Result<BoundaryCurve> {
    if points_per_edge < 16 {
        return Err(Error::InvalidInput("points_per_edge must be at least 16".into()));
    }
    let br = Branches::new(nu)?;
    let u = br.corners.u;
    let umax = u[0].norm();
    let h = umax / 200.0;
    let mut edges: [Option<Vec<C>>; 4] = Default::default();
    let mut tangents = [(C::from(0.0), C::from(0.0)); 4];
    for k in 0..4 {
        let dirs = corner_directions(&br, u[k], 1e-3)?;
        if dirs.len() != 3 {
            return Err(Error::TraceLost(format!("{} zero directions at u{}", dirs.len(), k + 1)));
        }
        let fine = corner_directions(&br, u[k], 1e-6)?;
        let mut found = Vec::new();
        for &th in &dirs {
            let (pts, end) = trace_from(&br, u[k], th, h, 2.0 * umax)?;
            if let Some(j) = end {
                let tangent = fine
                    .iter()
                    .map(|&f| C::from_polar(1.0, f))
                    .min_by(|a, b| {
                        (a - C::from_polar(1.0, th)).norm().total_cmp(&(b - C::from_polar(1.0, th)).norm())
                    })
                    .unwrap();
                found.push((j, pts, tangent));
            }
        }
        if found.len() != 2 {
            return Err(Error::EdgeMismatch(format!("{} bounded arcs leave u{}", found.len(), k + 1)));
        }
        // e_{k+1} runs from u_k to u_{k+1}; e_k arrives at u_k from u_{k−1}
        let next = (k + 1) % 4;
        let prev = (k + 3) % 4;
        let mut t_in = None;
        let mut t_out = None;
        for (j, pts, t) in found {
            if j == next {
                t_out = Some(t);
                if edges[next].is_none() {
                    edges[next] = Some(resample(&br, &pts, points_per_edge)?);
                }
            } else if j == prev {
                t_in = Some(t);
                if edges[k].is_none() {
                    let mut rev = pts.clone();
                    rev.reverse();
                    edges[k] = Some(resample(&br, &rev, points_per_edge)?);
                }
            } else {
                return Err(Error::EdgeMismatch(format!("arc from u{} ends at u{}", k + 1, j + 1)));
            }
        }
        let (Some(a), Some(b)) = (t_in, t_out) else {
            return Err(Error::EdgeMismatch(format!("u{} lacks an incoming or outgoing edge", k + 1)));
        };
        tangents[k] = (a, b);
    }
    let edges = edges.map(|e| e.expect("every edge traced"));
    Ok(BoundaryCurve { edges, corners: br.corners, nu, tangents })
}

/// The traced region with what is needed to evaluate Φ_ν on it.
#[derive(Clone, Debug)]
pub struct Region {
    pub boundary: BoundaryCurve,
}

impl Region {
    pub fn new(nu: f64, points_per_edge: usize) -> Result<Self> {
        Ok(Region { boundary: trace_boundary(nu, points_per_edge)? })
    }

    pub fn nu(&self) -> f64 {
        self.boundary.nu
    }

    pub fn contains(&self, z: C) -> bool {
        self.boundary.contains(z)
    }

    /// Φ_ν at a point of the Boutroux locus.
    pub fn density_at(&self, bp: &BoutrouxPoint) -> f64 {
        density_from_state(self.nu(), bp)
    }

    /// Φ_ν(α), or 0 outside K_a or where β cannot be found.
    pub fn density(&self, alpha: C) -> f64 {
        if !self.contains(alpha) {
            return 0.0;
        }
        match crate::actions::solve_beta_continued(self.nu(), alpha, 8) {
            Ok(bp) => self.density_at(&bp),
            Err(_) => 0.0,
        }
    }

    /// Φ_ν on a grid×grid lattice of cell centres covering the bounding box of
    /// K_a. Each column is swept outward from the real axis.
    pub fn density_grid(&self, grid: usize) -> DensityGrid {
        let nu = self.nu();
        let poly = self.boundary.polygon();
        let xmax = poly.iter().map(|z| z.re.abs()).fold(0.0, f64::max);
        let ymax = poly.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        let dx = 2.0 * xmax / grid as f64;
        let dy = 2.0 * ymax / grid as f64;
        let mut values = vec![vec![0.0; grid]; grid];
        let xs: Vec<f64> = (0..grid).map(|i| -xmax + (i as f64 + 0.5) * dx).collect();
        let ys: Vec<f64> = (0..grid).map(|i| -ymax + (i as f64 + 0.5) * dy).collect();
        // walk each column outward from the real axis, seeding Newton from
        // the previous cell and falling back to continuation along the ray
        for (i, &x) in xs.iter().enumerate() {
            for rows in [(grid / 2..grid).collect::<Vec<_>>(), (0..grid / 2).rev().collect()] {
                let mut cur: Option<BoutrouxPoint> = None;
                for j in rows {
                    let a = C::new(x, ys[j]);
                    if !self.contains(a) {
                        continue;
                    }
                    let ray = || crate::actions::solve_beta_continued(nu, a, 16);
                    let solved = match &cur {
                        Some(c) => solve_beta_from(nu, a, c.beta, &c.quartet).or_else(|_| ray()),
                        None => ray(),
                    };
                    if let Ok(bp) = solved {
                        values[j][i] = density_from_state(nu, &bp);
                        cur = Some(bp);
                    }
                }
            }
        }
        DensityGrid { xs, ys, dx, dy, values }
    }
}

#[derive(Clone, Debug)]
pub struct DensityGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub dx: f64,
    pub dy: f64,
    /// values[j][i] at xs[i] + i ys[j].
    pub values: Vec<Vec<f64>>,
}

impl DensityGrid {
    pub fn integral(&self) -> f64 {
        self.values.iter().flatten().sum::<f64>() * self.dx * self.dy
    }
}

/// |det ∂(S₁, S₂)/∂(α_R, α_I)| / (2ν(1−ν)π²) along the locus β = B(α).
///
/// Differentiating Re s = 0 gives dβ as a real-linear function of dα, so the
/// Jacobian is exact given the complex Jacobian of the actions.
pub fn density_from_state(nu: f64, bp: &BoutrouxPoint) -> f64 {
    let j = &bp.state.jacobian;
    let (a1, b1, a2, b2) = (j[0][0], j[0][1], j[1][0], j[1][1]);
    let det = b1.re * (-b2.im) - (-b1.im) * b2.re;
    let col = |da: C| {
        let (r1, r2) = (-(a1 * da).re, -(a2 * da).re);
        let u = (r1 * (-b2.im) - (-b1.im) * r2) / det;
        let v = (b1.re * r2 - b2.re * r1) / det;
        let db = C::new(u, v);
        ((a1 * da + b1 * db).im, (a2 * da + b2 * db).im)
    };
    let (c1, c2) = (col(C::from(1.0)), col(C::new(0.0, 1.0)));
    (c1.0 * c2.1 - c2.0 * c1.1).abs() / (2.0 * nu * (1.0 - nu) * PI * PI)
}

/// Φ_ν(α) for a single point; traces the boundary on every call.
pub fn density(nu: f64, alpha: C) -> Result<f64> {
    Ok(Region::new(nu, 64)?.density(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    const NU: f64 = 1.0 / 3.0;

    #[test]
    fn octic_roots() {
        let cs = corner_polynomial_roots(NU).unwrap();
        for z in cs.u.iter().chain(cs.v.iter()) {
            assert!(eval_corner_polynomial(NU, *z).norm() < 1e-12, "{z}");
        }
        assert!(cs.v[0].im == 0.0 && cs.v[0].re > 0.0);
        assert!(cs.v[1].re == 0.0 && cs.v[1].im > 0.0);
        let u1 = cs.u[0];
        assert!(u1.re > 0.0 && u1.im > 0.0);
        // all 8 distinct
        let all: Vec<C> = cs.u.iter().chain(cs.v.iter()).copied().collect();
        for i in 0..8 {
            for j in i + 1..8 {
                assert!((all[i] - all[j]).norm() > 1e-3);
            }
        }
    }

    #[test]
    fn octic_against_companion_free_oracle() {
        // roots of the quartic in w = α² by bisection on the real axis and
        // Descartes: one positive and one negative real w
        let c = corner_polynomial(NU);
        let q = |w: f64| c[8] * w.powi(4) + c[4] * w * w + c[2] * w + c[0];
        let bisect = |mut lo: f64, mut hi: f64| {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if (q(mid) > 0.0) == (q(hi) > 0.0) {
                    hi = mid
                } else {
                    lo = mid
                }
            }
            0.5 * (lo + hi)
        };
        let wp = bisect(0.0, 10.0);
        let wn = bisect(-10.0, 0.0);
        let cs = corner_polynomial_roots(NU).unwrap();
        assert!((cs.v[0].re - wp.sqrt()).abs() < 1e-12);
        assert!((cs.v[1].im - (-wn).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn branches_at_anchor() {
        let br = Branches::new(NU).unwrap();
        let a = br.anchor();
        assert!(a.x.re > 0.0 && a.x.im == 0.0);
        assert!((a.x.re - NU / 6.0).abs() < 0.01);
        assert!(a.y.re > 0.0);
        for z in [C::new(0.5, 0.2), C::new(-0.3, 0.9), C::new(0.1, -1.5), C::new(-2.0, -0.1)] {
            let b = br.at(z).unwrap();
            let r = x_quartic(NU, z).iter().rev().fold(C::from(0.0), |acc, c| acc * b.x + c);
            assert!(r.norm() < 1e-13);
            let mb = br.at(-z).unwrap();
            assert!((mb.x + b.x).norm() < 1e-10 && (mb.y + b.y).norm() < 1e-10);
        }
    }

    #[test]
    fn psi_symmetries_and_growth() {
        let br = Branches::new(NU).unwrap();
        for z in [C::new(0.5, 0.2), C::new(0.3, 0.9), C::new(1.1, 0.4)] {
            let p = br.psi(z).unwrap();
            assert!((br.psi(-z).unwrap() - p).abs() < 1e-10);
            assert!((br.psi(z.conj()).unwrap() - p).abs() < 1e-10);
        }
        let z = C::from_polar(50.0, 0.3);
        let p = br.psi(z).unwrap();
        let lead = 0.5 * (z * z).re;
        assert!(((p - lead) / lead).abs() < 0.15);
    }

    #[test]
    fn psi_vanishes_at_corners() {
        let br = Branches::new(NU).unwrap();
        for u in br.corners.u {
            let p = br.psi(u * 1.000001).unwrap();
            assert!(p.abs() < 1e-6, "{p}");
        }
    }

    #[test]
    fn edge_beta_limits() {
        let br = Branches::new(NU).unwrap();
        for u in br.corners.u {
            let b = br.edge_beta_at(&br.at(u * (1.0 + 1e-10)).unwrap());
            assert!((b - corner_beta(NU, u)).norm() < 1e-4);
            let b = br.edge_beta_at(&br.at(u).unwrap());
            assert!((b - corner_beta(NU, u)).norm() < 1e-10, "{b} {}", corner_beta(NU, u));
        }
    }

    #[test]
    fn point_in_square() {
        let sq = [C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(1.0, 1.0), C::new(0.0, 1.0)];
        assert!(point_in_polygon(&sq, C::new(0.5, 0.5)));
        assert!(!point_in_polygon(&sq, C::new(1.5, 0.5)));
    }
}
