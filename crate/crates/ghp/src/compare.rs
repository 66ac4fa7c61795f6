//! Matching predicted lattice points against exact scaled roots, and the
//! error-scaling fit across sizes.

use crate::error::{Error, Result};
use crate::hermite::hermite_generalized;
use crate::lattice::{build_lattice, LatticeConfig, RootLattice};
use crate::roots::{find_roots_auto, scale_roots};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeSet;

type C = Complex64;

/// Filter shrink applied to σ when collecting bulk statistics.
pub const BULK_MARGIN: f64 = 0.05;
/// Fraction of pairs on which the two matchings may disagree.
pub const AMBIGUITY_LIMIT: f64 = 0.01;

#[derive(Clone, Debug, Serialize)]
pub struct MatchedPair {
    pub j: i64,
    pub k: i64,
    pub alpha_pred: [f64; 2],
    pub alpha_true: [f64; 2],
    /// |α_pred − α_true|.
    pub distance: f64,
    /// The same distance for the unscaled roots a = E^{1/2} α.
    pub distance_unscaled: f64,
    pub bulk: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatchReport {
    pub e: usize,
    pub pairs: Vec<MatchedPair>,
    pub unmatched_pred: usize,
    pub unmatched_true: usize,
    pub max_bulk_error: f64,
    pub mean_bulk_error: f64,
    pub max_bulk_error_unscaled: f64,
    pub mean_bulk_error_unscaled: f64,
}

impl MatchReport {
    /// Matched predictions over all predictions.
    pub fn match_ratio(&self) -> f64 {
        let total = self.pairs.len() + self.unmatched_pred;
        if total == 0 {
            1.0
        } else {
            self.pairs.len() as f64 / total as f64
        }
    }
}

fn dist2(a: C, b: C) -> f64 {
    (a - b).norm_sqr()
}

/// Greedy matching over all (pred, true) pairs ordered by distance.
fn greedy(pred: &[C], truth: &[C], fixed: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut used_p: BTreeSet<usize> = fixed.iter().map(|p| p.0).collect();
    let mut used_t: BTreeSet<usize> = fixed.iter().map(|p| p.1).collect();
    let mut cand: Vec<(f64, usize, usize)> = Vec::new();
    for (i, p) in pred.iter().enumerate() {
        if used_p.contains(&i) {
            continue;
        }
        for (j, t) in truth.iter().enumerate() {
            if !used_t.contains(&j) {
                cand.push((dist2(*p, *t), i, j));
            }
        }
    }
    cand.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut out = fixed.to_vec();
    for (_, i, j) in cand {
        if !used_p.contains(&i) && !used_t.contains(&j) {
            used_p.insert(i);
            used_t.insert(j);
            out.push((i, j));
        }
    }
    out
}

fn nearest(z: C, set: &[C]) -> Option<usize> {
    (0..set.len()).min_by(|&a, &b| dist2(z, set[a]).total_cmp(&dist2(z, set[b])))
}

/// Mutual nearest neighbours, completed greedily by distance.
fn mutual_then_greedy(pred: &[C], truth: &[C]) -> Vec<(usize, usize)> {
    let mut mutual = Vec::new();
    for (i, p) in pred.iter().enumerate() {
        if let Some(j) = nearest(*p, truth) {
            if nearest(truth[j], pred) == Some(i) {
                mutual.push((i, j));
            }
        }
    }
    greedy(pred, truth, &mutual)
}

/// Distance from each lattice point to its nearest index-neighbour.
fn local_spacing(lat: &RootLattice, keys: &[(i64, i64)]) -> Vec<f64> {
    let fallback = {
        let a: Vec<C> = keys.iter().map(|k| lat.entries[k].alpha).collect();
        let mut m = f64::INFINITY;
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                m = m.min((a[i] - a[j]).norm());
            }
        }
        m
    };
    keys.iter()
        .map(|&(j, k)| {
            let here = lat.entries[&(j, k)].alpha;
            let s = [(2, 0), (-2, 0), (0, 2), (0, -2)]
                .iter()
                .filter_map(|(dj, dk)| lat.entries.get(&(j + dj, k + dk)))
                .map(|e| (e.alpha - here).norm())
                .fold(f64::INFINITY, f64::min);
            if s.is_finite() {
                s
            } else {
                fallback
            }
        })
        .collect()
}

/// Pairs each predicted α_{j,k} with a scaled root.
///
/// A pair is kept when its distance is under a third of the local lattice
/// spacing; statistics use pairs with (j, k) inside the box shrunk to
/// σ − 0.05.
pub fn match_roots(pred: &RootLattice, true_roots: &[C], sigma: f64) -> Result<MatchReport> {
    let cfg = pred.config;
    let e = cfg.e();
    let keys: Vec<(i64, i64)> = pred.entries.keys().copied().collect();
    let alphas: Vec<C> = keys.iter().map(|k| pred.entries[k].alpha).collect();
    let spacing = local_spacing(pred, &keys);

    let primary = mutual_then_greedy(&alphas, true_roots);
    let plain = greedy(&alphas, true_roots, &[]);
    let plain_set: BTreeSet<(usize, usize)> = plain.into_iter().collect();
    let disagree = primary.iter().filter(|p| !plain_set.contains(p)).count();
    if !primary.is_empty() {
        let frac = disagree as f64 / primary.len() as f64;
        if frac > AMBIGUITY_LIMIT {
            return Err(Error::MatchingAmbiguous { fraction: frac });
        }
    }

    let sb = (sigma - BULK_MARGIN).max(0.0);
    let jb = sb * (cfg.m as f64 - 1.0) + 1e-12;
    let kb = sb * (cfg.n as f64 - 1.0) + 1e-12;
    let root_e = (e as f64).sqrt();
    let mut pairs = Vec::new();
    for (i, t) in primary {
        let d = (alphas[i] - true_roots[t]).norm();
        if d >= spacing[i] / 3.0 {
            continue;
        }
        let (j, k) = keys[i];
        pairs.push(MatchedPair {
            j,
            k,
            alpha_pred: [alphas[i].re, alphas[i].im],
            alpha_true: [true_roots[t].re, true_roots[t].im],
            distance: d,
            distance_unscaled: d * root_e,
            bulk: (j as f64).abs() <= jb && (k as f64).abs() <= kb,
        });
    }
    pairs.sort_by_key(|p| (p.j, p.k));
    let bulk: Vec<f64> = pairs.iter().filter(|p| p.bulk).map(|p| p.distance).collect();
    let max = bulk.iter().copied().fold(0.0, f64::max);
    let mean = if bulk.is_empty() { 0.0 } else { bulk.iter().sum::<f64>() / bulk.len() as f64 };
    Ok(MatchReport {
        e,
        unmatched_pred: alphas.len() - pairs.len(),
        unmatched_true: true_roots.len() - pairs.len(),
        pairs,
        max_bulk_error: max,
        mean_bulk_error: mean,
        max_bulk_error_unscaled: max * root_e,
        mean_bulk_error_unscaled: mean * root_e,
    })
}

/// Least-squares slope of log(err) against log(E).
pub fn fit_exponent(es: &[f64], errs: &[f64]) -> Result<f64> {
    let n = es.len();
    if n != errs.len() || n < 2 {
        return Err(Error::FitDegenerate);
    }
    let x: Vec<f64> = es.iter().map(|e| e.ln()).collect();
    let y: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx < 1e-24 || y.iter().any(|v| !v.is_finite()) {
        return Err(Error::FitDegenerate);
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok(sxy / sxx)
}

/// One row of a size sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SizeResult {
    pub m: usize,
    pub n: usize,
    pub e: usize,
    pub completion_ratio: f64,
    pub match_ratio: f64,
    pub max_bulk_error: f64,
    pub mean_bulk_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub sizes: Vec<SizeResult>,
    pub exponent: f64,
}

/// Exact roots, predicted lattice and matching for one size.
pub fn run_size(m: usize, n: usize, sigma: f64) -> Result<(RootLattice, Vec<C>, MatchReport)> {
    let p = hermite_generalized(m, n)?;
    let rs = find_roots_auto(&p, None)?;
    let truth = scale_roots(&rs, m, n);
    let lat = build_lattice(&LatticeConfig::new(m, n, sigma))?;
    let rep = match_roots(&lat, &truth, sigma)?;
    Ok((lat, truth, rep))
}

/// Runs the full pipeline for each size and fits the exponent of the maximal
/// bulk error in α against E.
pub fn scaling_report(sizes: &[(usize, usize)], sigma: f64) -> Result<ScalingReport> {
    if let Some(&(m0, n0)) = sizes.first() {
        if sizes.iter().any(|&(m, n)| m * n0 != n * m0) {
            return Err(Error::InvalidInput("sizes must share one m:n ratio".into()));
        }
    }
    let mut rows = Vec::new();
    for &(m, n) in sizes {
        let (lat, _, rep) = run_size(m, n, sigma)?;
        rows.push(SizeResult {
            m,
            n,
            e: 2 * m + n,
            completion_ratio: lat.completion_ratio(),
            match_ratio: rep.match_ratio(),
            max_bulk_error: rep.max_bulk_error,
            mean_bulk_error: rep.mean_bulk_error,
        });
    }
    let es: Vec<f64> = rows.iter().map(|r| r.e as f64).collect();
    let errs: Vec<f64> = rows.iter().map(|r| r.max_bulk_error).collect();
    let exponent = fit_exponent(&es, &errs)?;
    Ok(ScalingReport { sizes: rows, exponent })
}
