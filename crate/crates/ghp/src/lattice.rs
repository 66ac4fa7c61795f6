//! The predicted root lattice: solutions of S(α, β) = (πj/E, πk/E) over
//! odd-offset index boxes, found by Newton continuation outward from the origin.

use crate::actions::{actions, actions_verified, track_quartet, ActionState, ParameterPoint, TurningQuartet};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

type C = Complex64;

const I: C = C::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeConfig {
    pub m: usize,
    pub n: usize,
    pub sigma: f64,
    pub tol: f64,
}

impl LatticeConfig {
    pub fn new(m: usize, n: usize, sigma: f64) -> Self {
        LatticeConfig { m, n, sigma, tol: 1e-12 }
    }

    pub fn e(&self) -> usize {
        2 * self.m + self.n
    }

    pub fn nu(&self) -> f64 {
        self.n as f64 / self.e() as f64
    }

    /// I_m ∩ [−σ(m−1), σ(m−1)].
    pub fn j_range(&self) -> Vec<i64> {
        index_set(self.m, self.sigma)
    }

    pub fn k_range(&self) -> Vec<i64> {
        index_set(self.n, self.sigma)
    }

    /// The S-value that lattice point (j, k) must hit.
    pub fn target(&self, j: i64, k: i64) -> (f64, f64) {
        let e = self.e() as f64;
        (PI * j as f64 / e, PI * k as f64 / e)
    }
}

/// {−m+1, −m+3, …, m−1} restricted to |j| ≤ σ(m−1).
pub fn index_set(m: usize, sigma: f64) -> Vec<i64> {
    let m = m as i64;
    let bound = sigma * (m - 1) as f64 + 1e-12;
    (0..m).map(|i| -m + 1 + 2 * i).filter(|j| (*j as f64).abs() <= bound).collect()
}

#[derive(Clone, Copy, Debug)]
pub struct LatticeEntry {
    pub alpha: C,
    pub beta: C,
    /// max |S(α, β) − target|.
    pub residual: f64,
    pub quartet: TurningQuartet,
    pub state: ActionState,
}

#[derive(Clone, Debug)]
pub struct RootLattice {
    pub config: LatticeConfig,
    pub entries: BTreeMap<(i64, i64), LatticeEntry>,
    /// Points that could not be solved, with the reason.
    pub failures: Vec<((i64, i64), String)>,
}

impl RootLattice {
    pub fn completion_ratio(&self) -> f64 {
        let total = self.entries.len() + self.failures.len();
        if total == 0 {
            1.0
        } else {
            self.entries.len() as f64 / total as f64
        }
    }

    pub fn alphas(&self) -> Vec<C> {
        self.entries.values().map(|e| e.alpha).collect()
    }
}

fn residual(st: &ActionState, t: (f64, f64)) -> (C, C, f64) {
    let f1 = st.s1 - I * t.0;
    let f2 = st.s2 - I * t.1;
    (f1, f2, f1.norm().max(f2.norm()))
}

/// Solves J d = rhs for the 2×2 complex Jacobian.
fn solve2(j: &[[C; 2]; 2], r: (C, C)) -> Option<(C, C)> {
    let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    if det.norm() == 0.0 {
        return None;
    }
    Some(((r.0 * j[1][1] - j[0][1] * r.1) / det, (j[0][0] * r.1 - j[1][0] * r.0) / det))
}

/// Damped Newton for S(α, β) = target. Labels are carried from `anchor`.
///
/// S is holomorphic, so the 4×4 real Newton system on (Re α, Im α, Re β, Im β)
/// is exactly the 2×2 complex system solved here.
pub fn solve_for_target(
    nu: f64,
    target: (f64, f64),
    seed: (C, C),
    anchor: &TurningQuartet,
    tol: f64,
) -> Result<LatticeEntry> {
    let guard = |e: Error| match e {
        Error::TurningPointCollision { .. } => Error::OutsideK,
        e => e,
    };
    let (mut a, mut b) = seed;
    let p = ParameterPoint::new(nu, a, b);
    let mut q = track_quartet(&p, anchor).map_err(guard)?;
    let mut st = actions(&p, &q).map_err(guard)?;
    let (mut f1, mut f2, mut r) = residual(&st, target);
    for step in 0..50 {
        if r < tol {
            break;
        }
        let (da, db) = solve2(&st.jacobian, (-f1, -f2)).ok_or(Error::NewtonDiverged { steps: step, residual: r })?;
        let mut lam = 1.0;
        let mut accepted = false;
        let mut last_err = None;
        for _ in 0..=6 {
            let pn = ParameterPoint::new(nu, a + lam * da, b + lam * db);
            match track_quartet(&pn, &q).and_then(|qn| actions(&pn, &qn).map(|s| (qn, s))) {
                Ok((qn, sn)) => {
                    let (g1, g2, rn) = residual(&sn, target);
                    if rn < r {
                        a = pn.alpha;
                        b = pn.beta;
                        q = qn;
                        st = sn;
                        (f1, f2, r) = (g1, g2, rn);
                        accepted = true;
                        break;
                    }
                }
                Err(e) => last_err = Some(e),
            }
            lam /= 2.0;
        }
        if !accepted {
            if let Some(e) = last_err {
                return Err(guard(e));
            }
            return Err(Error::NewtonDiverged { steps: step, residual: r });
        }
    }
    if r >= tol {
        return Err(Error::NewtonDiverged { steps: 50, residual: r });
    }
    Ok(LatticeEntry { alpha: a, beta: b, residual: r, quartet: q, state: st })
}

/// One lattice point, seeded by `seed` with labels carried from `anchor`.
pub fn solve_lattice_point(
    cfg: &LatticeConfig,
    j: i64,
    k: i64,
    seed: (C, C),
    anchor: &TurningQuartet,
) -> Result<LatticeEntry> {
    solve_for_target(cfg.nu(), cfg.target(j, k), seed, anchor, cfg.tol)
}

/// The entry at the origin of S, where (α, β) = (0, 0).
fn origin_entry(nu: f64) -> Result<LatticeEntry> {
    let q = TurningQuartet::origin(nu);
    let p = ParameterPoint::new(nu, C::from(0.0), C::from(0.0));
    let st = actions(&p, &q)?;
    Ok(LatticeEntry { alpha: p.alpha, beta: p.beta, residual: residual(&st, (0.0, 0.0)).2, quartet: q, state: st })
}

/// Linearised seed for the point whose target differs from `from` by `dt`.
fn predict(from: &LatticeEntry, dt: (f64, f64)) -> (C, C) {
    let rhs = (I * dt.0, I * dt.1);
    match solve2(&from.state.jacobian, rhs) {
        Some((da, db)) => (from.alpha + da, from.beta + db),
        None => (from.alpha, from.beta),
    }
}

/// Breadth-first continuation over the index box, seeding each point from an
/// already solved neighbour. The points nearest the origin are seeded from
/// (α, β) = (0, 0). Every accepted entry is checked against the quadrature
/// oracle.
pub fn build_lattice(cfg: &LatticeConfig) -> Result<RootLattice> {
    if !(cfg.sigma > 0.0 && cfg.sigma < 1.0) {
        return Err(Error::InvalidInput(format!("sigma must lie in (0, 1), got {}", cfg.sigma)));
    }
    let nu = cfg.nu();
    let js = cfg.j_range();
    let ks = cfg.k_range();
    let origin = origin_entry(nu)?;
    let mut entries = BTreeMap::new();
    let mut failures = Vec::new();
    let mut seen = BTreeMap::new();
    let mut queue = VecDeque::new();

    // innermost indices: |j| and |k| minimal
    let jmin = js.iter().map(|j| j.abs()).min();
    let kmin = ks.iter().map(|k| k.abs()).min();
    let (Some(jmin), Some(kmin)) = (jmin, kmin) else {
        return Ok(RootLattice { config: *cfg, entries, failures });
    };
    for &j in js.iter().filter(|j| j.abs() == jmin) {
        for &k in ks.iter().filter(|k| k.abs() == kmin) {
            seen.insert((j, k), ());
            queue.push_back(((j, k), None::<(i64, i64)>));
        }
    }
    let inside = |j: i64, k: i64| js.contains(&j) && ks.contains(&k);
    while let Some(((j, k), parent)) = queue.pop_front() {
        let from = match parent {
            Some(pk) => match entries.get(&pk) {
                Some(e) => *e,
                None => origin,
            },
            None => origin,
        };
        let (tj, tk) = cfg.target(j, k);
        let (fj, fk) = match parent {
            Some((pj, pk)) => cfg.target(pj, pk),
            None => (0.0, 0.0),
        };
        let seed = predict(&from, (tj - fj, tk - fk));
        let res = solve_lattice_point(cfg, j, k, seed, &from.quartet).and_then(|e| {
            let p = ParameterPoint::new(nu, e.alpha, e.beta);
            actions_verified(&p, &e.quartet).map(|_| e)
        });
        match res {
            Ok(e) => {
                entries.insert((j, k), e);
                for (dj, dk) in [(2, 0), (-2, 0), (0, 2), (0, -2)] {
                    let nb = (j + dj, k + dk);
                    if inside(nb.0, nb.1) && !seen.contains_key(&nb) {
                        // move outward only
                        if nb.0.abs() >= j.abs() && nb.1.abs() >= k.abs() {
                            seen.insert(nb, ());
                            queue.push_back((nb, Some((j, k))));
                        }
                    }
                }
            }
            Err(e) => failures.push(((j, k), e.to_string())),
        }
    }
    // anything unreachable because its parent failed
    for &j in &js {
        for &k in &ks {
            if !seen.contains_key(&(j, k)) {
                failures.push(((j, k), "no solved neighbour to continue from".into()));
            }
        }
    }
    Ok(RootLattice { config: *cfg, entries, failures })
}

/// First-order prediction near the origin:
/// α ≈ (1+ν)^{−1/2} [K(2ν/(1+ν)) j/E + i K((1−ν)/(1+ν)) k/E].
pub fn linear_alpha(cfg: &LatticeConfig, j: i64, k: i64) -> Result<C> {
    use crate::elliptic::complete_k;
    let nu = cfg.nu();
    let e = cfg.e() as f64;
    let k1 = complete_k(C::from(2.0 * nu / (1.0 + nu)))?.re;
    let k2 = complete_k(C::from((1.0 - nu) / (1.0 + nu)))?.re;
    Ok(C::new(k1 * j as f64 / e, k2 * k as f64 / e) / (1.0 + nu).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_sets() {
        assert_eq!(index_set(3, 0.99), vec![0]);
        assert_eq!(index_set(5, 0.5), vec![-2, 0, 2]);
        assert_eq!(index_set(4, 0.5), vec![-1, 1]);
        assert_eq!(index_set(22, 0.9).len(), 18);
        let cfg = LatticeConfig::new(22, 16, 0.9);
        assert_eq!(cfg.e(), 60);
        assert!(cfg.j_range().iter().all(|j| j % 2 != 0));
    }

    #[test]
    fn origin_target_in_zero_steps() {
        let cfg = LatticeConfig::new(3, 3, 0.5);
        let q = TurningQuartet::origin(cfg.nu());
        let e = solve_lattice_point(&cfg, 0, 0, (C::from(0.0), C::from(0.0)), &q).unwrap();
        assert!(e.alpha.norm() == 0.0 && e.beta.norm() == 0.0);
    }

    #[test]
    fn small_lattice_symmetry_and_range() {
        let cfg = LatticeConfig::new(6, 4, 0.9);
        let lat = build_lattice(&cfg).unwrap();
        assert_eq!(lat.completion_ratio(), 1.0);
        let nu = cfg.nu();
        for (&(j, k), e) in &lat.entries {
            let r = lat.entries[&(-j, -k)];
            assert!((r.alpha + e.alpha).norm() < 1e-10 && (r.beta + e.beta).norm() < 1e-10);
            let c = lat.entries[&(j, -k)];
            assert!((c.alpha - e.alpha.conj()).norm() < 1e-10);
            let (s1, s2) = e.state.s_values();
            assert!(s1.re.abs() <= (1.0 - nu) * PI / 2.0 && s2.re.abs() <= nu * PI);
        }
    }

    #[test]
    fn spacing_near_origin() {
        let cfg = LatticeConfig::new(22, 16, 0.9);
        let nu = cfg.nu();
        assert!((nu - 16.0 / 60.0).abs() < 1e-15);
        let q = TurningQuartet::origin(nu);
        let z = (C::from(0.0), C::from(0.0));
        let a = solve_lattice_point(&cfg, 1, 1, z, &q).unwrap();
        let lin = linear_alpha(&cfg, 1, 1).unwrap();
        assert!((a.alpha - lin).norm() < 5.0 / 3600.0, "{} {}", a.alpha, lin);
    }
}
