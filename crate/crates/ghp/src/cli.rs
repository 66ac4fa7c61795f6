//! Command-line front end: argument parsing and CSV/JSON emission.

use crate::compare::{fit_exponent, run_size, MatchReport};
use crate::error::{Error, Result};
use crate::hermite::hermite_generalized;
use crate::lattice::{build_lattice, LatticeConfig};
use crate::region::{corner_polynomial_roots, Region};
use crate::roots::{find_roots_auto, scale_roots};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Exact roots of H_{m,n}
    Roots,
    /// Predicted lattice α_{j,k}, β_{j,k}
    Predict,
    /// Match predictions against exact roots
    Compare,
    /// Traced boundary of the elliptic region
    Boundary,
    /// Corners u_k and the remaining roots v_k of the corner polynomial
    Corners,
    /// Asymptotic root density on a grid
    Density,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "ghp", version, about = "Roots of generalized Hermite polynomials and their asymptotics")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true)]
    pub m: Option<usize>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub nu: Option<f64>,
    #[arg(long, global = true, default_value_t = 0.9)]
    pub sigma: f64,
    #[arg(long = "precision-bits", global = true)]
    pub precision_bits: Option<usize>,
    #[arg(long, global = true, default_value_t = 200)]
    pub grid: usize,
    #[arg(long, global = true, default_value_t = 400)]
    pub points: usize,
    /// m:n, repeat for a sweep
    #[arg(long = "size", global = true, value_parser = parse_size)]
    pub sizes: Vec<(usize, usize)>,
    #[arg(long = "out", global = true)]
    pub out_path: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Recorded in outputs; the pipeline itself is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

fn parse_size(s: &str) -> std::result::Result<(usize, usize), String> {
    let (m, n) = s.split_once(':').ok_or_else(|| format!("expected m:n, got {s}"))?;
    let m = m.trim().parse().map_err(|_| format!("bad m in {s}"))?;
    let n = n.trim().parse().map_err(|_| format!("bad n in {s}"))?;
    Ok((m, n))
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Debug)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

/// A header plus rows, written as CSV or as a JSON array of objects.
#[derive(Clone, Debug)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(&self.header)?;
        for r in &self.rows {
            wr.write_record(r.iter().map(|c| match c {
                Cell::Int(i) => i.to_string(),
                Cell::Float(x) => fmt_f64(*x),
                Cell::Text(s) => s.clone(),
            }))?;
        }
        wr.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let mut o = Map::new();
                    for (h, c) in self.header.iter().zip(r) {
                        let v = match c {
                            Cell::Int(i) => json!(i),
                            Cell::Float(x) => json!(x),
                            Cell::Text(s) => json!(s),
                        };
                        o.insert(h.to_string(), v);
                    }
                    Value::Object(o)
                })
                .collect(),
        )
    }
}

pub enum Output {
    Table(Table),
    Json(Value),
}

fn need_mn(cfg: &RunConfig) -> Result<(usize, usize)> {
    if cfg.nu.is_some() {
        return Err(Error::InvalidInput("this command takes --m and --n, not --nu".into()));
    }
    match (cfg.m, cfg.n) {
        (Some(m), Some(n)) if m >= 1 && n >= 1 => Ok((m, n)),
        (Some(_), Some(_)) => Err(Error::InvalidInput("m and n must be positive".into())),
        _ => Err(Error::InvalidInput("--m and --n are required".into())),
    }
}

/// ν from --nu, or from --m/--n; exactly one of the two.
fn need_nu(cfg: &RunConfig) -> Result<f64> {
    let nu = match (cfg.nu, cfg.m, cfg.n) {
        (Some(nu), None, None) => nu,
        (None, Some(m), Some(n)) if m >= 1 && n >= 1 => n as f64 / (2 * m + n) as f64,
        (Some(_), _, _) => return Err(Error::InvalidInput("give either --nu or --m/--n, not both".into())),
        _ => return Err(Error::InvalidInput("--nu (or --m and --n) is required".into())),
    };
    if !(nu > 0.0 && nu < 1.0) {
        return Err(Error::InvalidInput(format!("nu must lie in (0, 1), got {nu}")));
    }
    Ok(nu)
}

pub fn cmd_roots(m: usize, n: usize, precision_bits: Option<usize>) -> Result<Table> {
    let p = hermite_generalized(m, n)?;
    let rs = find_roots_auto(&p, precision_bits)?;
    let alphas = scale_roots(&rs, m, n);
    let mut idx: Vec<usize> = (0..alphas.len()).collect();
    idx.sort_by(|&a, &b| {
        alphas[a].re.total_cmp(&alphas[b].re).then(alphas[a].im.total_cmp(&alphas[b].im))
    });
    let rows = idx
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            vec![
                Cell::Int(i as i64),
                Cell::Float(rs.roots[r].re),
                Cell::Float(rs.roots[r].im),
                Cell::Float(alphas[r].re),
                Cell::Float(alphas[r].im),
                Cell::Float(rs.residuals[r]),
            ]
        })
        .collect();
    Ok(Table { header: vec!["index", "re_a", "im_a", "re_alpha", "im_alpha", "residual"], rows })
}

pub fn cmd_predict(m: usize, n: usize, sigma: f64) -> Result<Table> {
    let lat = build_lattice(&LatticeConfig::new(m, n, sigma))?;
    let rows = lat
        .entries
        .iter()
        .map(|(&(j, k), e)| {
            vec![
                Cell::Int(j),
                Cell::Int(k),
                Cell::Float(e.alpha.re),
                Cell::Float(e.alpha.im),
                Cell::Float(e.beta.re),
                Cell::Float(e.beta.im),
                Cell::Float(e.residual),
            ]
        })
        .collect();
    Ok(Table { header: vec!["j", "k", "re_alpha", "im_alpha", "re_beta", "im_beta", "residual"], rows })
}

fn pairs_table(rep: &MatchReport) -> Table {
    let rows = rep
        .pairs
        .iter()
        .map(|p| {
            vec![
                Cell::Int(p.j),
                Cell::Int(p.k),
                Cell::Float(p.alpha_pred[0]),
                Cell::Float(p.alpha_pred[1]),
                Cell::Float(p.alpha_true[0]),
                Cell::Float(p.alpha_true[1]),
                Cell::Float(p.distance),
                Cell::Int(p.bulk as i64),
            ]
        })
        .collect();
    Table {
        header: vec!["j", "k", "re_pred", "im_pred", "re_true", "im_true", "distance", "bulk"],
        rows,
    }
}

fn summary(rep: &MatchReport, exponent: Option<f64>) -> Value {
    json!({
        "e": rep.e,
        "matched": rep.pairs.len(),
        "match_ratio": rep.match_ratio(),
        "unmatched_pred": rep.unmatched_pred,
        "unmatched_true": rep.unmatched_true,
        "max_bulk_error": rep.max_bulk_error,
        "mean_bulk_error": rep.mean_bulk_error,
        "max_bulk_error_unscaled": rep.max_bulk_error_unscaled,
        "mean_bulk_error_unscaled": rep.mean_bulk_error_unscaled,
        "exponent": exponent,
    })
}

/// One size gives {pairs, summary}; repeated sizes add a fitted exponent
/// and a per-size breakdown.
pub fn cmd_compare(sizes: &[(usize, usize)], sigma: f64, seed: u64) -> Result<(Value, Table)> {
    if let Some(&(m0, n0)) = sizes.first() {
        if sizes.iter().any(|&(m, n)| m * n0 != n * m0) {
            return Err(Error::InvalidInput("sizes must share one m:n ratio".into()));
        }
    }
    let mut runs = Vec::new();
    for &(m, n) in sizes {
        let (_, _, rep) = run_size(m, n, sigma)?;
        runs.push((m, n, rep));
    }
    let (m, n, last) = runs.last().ok_or_else(|| Error::InvalidInput("no size given".into()))?;
    let table = pairs_table(last);
    if runs.len() == 1 {
        let v = json!({
            "m": m, "n": n, "sigma": sigma, "seed": seed,
            "pairs": serde_json::to_value(&last.pairs)?,
            "summary": summary(last, None),
        });
        return Ok((v, table));
    }
    let es: Vec<f64> = runs.iter().map(|r| r.2.e as f64).collect();
    let errs: Vec<f64> = runs.iter().map(|r| r.2.max_bulk_error).collect();
    let exponent = fit_exponent(&es, &errs)?;
    let per_size: Vec<Value> = runs
        .iter()
        .map(|(m, n, r)| json!({ "m": m, "n": n, "summary": summary(r, None) }))
        .collect();
    let v = json!({
        "m": m, "n": n, "sigma": sigma, "seed": seed,
        "pairs": serde_json::to_value(&last.pairs)?,
        "summary": summary(last, Some(exponent)),
        "sizes": per_size,
    });
    Ok((v, table))
}

pub fn cmd_boundary(nu: f64, points: usize) -> Result<Table> {
    if points < 2 {
        return Err(Error::InvalidInput("--points must be at least 2".into()));
    }
    let b = Region::new(nu, points)?.boundary;
    let mut rows = Vec::new();
    for (k, e) in b.edges.iter().enumerate() {
        let last = (e.len() - 1).max(1) as f64;
        for (i, z) in e.iter().enumerate() {
            rows.push(vec![
                Cell::Int(k as i64 + 1),
                Cell::Float(i as f64 / last),
                Cell::Float(z.re),
                Cell::Float(z.im),
            ]);
        }
    }
    Ok(Table { header: vec!["edge", "t", "re_alpha", "im_alpha"], rows })
}

pub fn cmd_corners(nu: f64) -> Result<Table> {
    let c = corner_polynomial_roots(nu)?;
    let mut rows = Vec::new();
    for (name, set) in [("u", &c.u), ("v", &c.v)] {
        for (k, z) in set.iter().enumerate() {
            rows.push(vec![Cell::Text(format!("{name}{}", k + 1)), Cell::Float(z.re), Cell::Float(z.im)]);
        }
    }
    Ok(Table { header: vec!["label", "re", "im"], rows })
}

pub fn cmd_density(nu: f64, grid: usize) -> Result<Table> {
    if grid < 2 {
        return Err(Error::InvalidInput("--grid must be at least 2".into()));
    }
    let g = Region::new(nu, 200)?.density_grid(grid);
    let mut rows = Vec::new();
    for (j, y) in g.ys.iter().enumerate() {
        for (i, x) in g.xs.iter().enumerate() {
            rows.push(vec![Cell::Float(*x), Cell::Float(*y), Cell::Float(g.values[j][i])]);
        }
    }
    Ok(Table { header: vec!["re_alpha", "im_alpha", "phi"], rows })
}

/// Runs one command and returns its output in the requested format.
pub fn execute(cfg: &RunConfig) -> Result<(Output, Format)> {
    let tab = |t: Table| (Output::Table(t), cfg.format.unwrap_or(Format::Csv));
    Ok(match cfg.command {
        Command::Roots => {
            let (m, n) = need_mn(cfg)?;
            tab(cmd_roots(m, n, cfg.precision_bits)?)
        }
        Command::Predict => {
            let (m, n) = need_mn(cfg)?;
            tab(cmd_predict(m, n, cfg.sigma)?)
        }
        Command::Compare => {
            let sizes = if cfg.sizes.is_empty() {
                vec![need_mn(cfg)?]
            } else if cfg.m.is_some() || cfg.n.is_some() {
                return Err(Error::InvalidInput("give either --size or --m/--n, not both".into()));
            } else {
                cfg.sizes.clone()
            };
            let (v, t) = cmd_compare(&sizes, cfg.sigma, cfg.seed)?;
            match cfg.format.unwrap_or(Format::Json) {
                Format::Json => (Output::Json(v), Format::Json),
                Format::Csv => (Output::Table(t), Format::Csv),
            }
        }
        Command::Boundary => tab(cmd_boundary(need_nu(cfg)?, cfg.points)?),
        Command::Corners => tab(cmd_corners(need_nu(cfg)?)?),
        Command::Density => tab(cmd_density(need_nu(cfg)?, cfg.grid)?),
    })
}

pub fn write_output<W: Write>(out: &Output, format: Format, mut w: W) -> Result<()> {
    match (out, format) {
        (Output::Table(t), Format::Csv) => t.write_csv(w),
        (Output::Table(t), Format::Json) => {
            serde_json::to_writer_pretty(&mut w, &t.to_json())?;
            writeln!(w)?;
            Ok(())
        }
        (Output::Json(v), _) => {
            serde_json::to_writer_pretty(&mut w, v)?;
            writeln!(w)?;
            Ok(())
        }
    }
}

/// `{"error", "module", "detail"}` as printed on stderr.
pub fn error_json(e: &Error) -> Value {
    json!({ "error": e.kind(), "module": e.module(), "detail": e.to_string() })
}

/// Full run: parse, execute, write. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let err = Error::InvalidInput(e.to_string().trim().to_string());
            eprintln!("{}", error_json(&err));
            return 2;
        }
    };
    let res = execute(&cfg).and_then(|(out, fmt)| match &cfg.out_path {
        Some(p) => {
            let f = std::io::BufWriter::new(std::fs::File::create(p)?);
            write_output(&out, fmt, f)
        }
        None => write_output(&out, fmt, std::io::stdout().lock()),
    });
    match res {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            1
        }
    }
}
