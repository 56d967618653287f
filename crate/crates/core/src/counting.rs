//! Counting experiments on P^N(Q): the number of points of bounded Weil
//! height, of bounded image height, and of bounded canonical height, with
//! ratio tables probing how the counts scale against each other.
//!
//! Every count is exact.  The image and canonical counts rest on the height
//! transform bounds: d·h(x) ≤ h(f(x)) + c_low confines preimages of a
//! height ball, and |h − ĥ| ≤ C/(d−1) confines points of small canonical
//! height, so enumerating one slightly larger Weil ball is exhaustive in
//! both cases.

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::heights::{
    canonical_height, canonical_height_with, comparison_constant, enumerate_points,
    enumeration_size, log_height, HeightEstimate,
};
use crate::morphism::ProjMorphism;

/// Slack added to inclusive height cutoffs so that boundary points whose
/// logarithm lands a few ulps high are not dropped.
const BOUNDARY_SLACK: f64 = 1e-12;

/// Radius of the integer coordinate ball containing all points of
/// logarithmic height ≤ bound (saturating; the budget check rejects
/// oversized balls before enumeration).
fn ball_radius(log_bound: f64) -> u64 {
    (log_bound.exp() * (1.0 + BOUNDARY_SLACK)).floor().max(1.0) as u64
}

fn check_budget(dim: usize, radius: u64, budget: u128) -> Result<()> {
    let required = enumeration_size(dim, radius);
    if required > budget {
        return Err(Error::BudgetExceeded { required, allowed: budget });
    }
    Ok(())
}

/// M(c): the number of points of P^dim(Q) with Weil height ≤ c.
pub fn count_m(dim: usize, c: f64, budget: u128) -> Result<u64> {
    if c < 0.0 {
        return Ok(0);
    }
    let radius = ball_radius(c);
    check_budget(dim, radius, budget)?;
    let count = enumerate_points(dim, radius)
        .par_iter()
        .filter(|x| log_height(x) <= c + BOUNDARY_SLACK)
        .count();
    Ok(count as u64)
}

/// N(f, c): the number of x in P^N(Q) with h(f(x)) ≤ c.  Exhaustive because
/// d·h(x) ≤ h(f(x)) + c_low bounds the height of any point mapping into
/// the ball.
pub fn count_n(f: &ProjMorphism, c: f64, budget: u128) -> Result<u64> {
    if c < 0.0 {
        return Ok(0);
    }
    let cc = comparison_constant(f)?;
    let radius = ball_radius((c + cc.c_low) / f.degree() as f64);
    check_budget(f.dim(), radius, budget)?;
    let count = enumerate_points(f.dim(), radius)
        .par_iter()
        .filter(|x| {
            let image = f.apply(x).expect("dimensions match by construction");
            log_height(&image) <= c + BOUNDARY_SLACK
        })
        .count();
    Ok(count as u64)
}

/// Exact-phase ceiling for the first, cheap canonical-height attempt per
/// enumerated point; see `fast_height`.
const FAST_EXACT_BITS: u64 = 1 << 14;

/// Canonical height with a small exact-phase budget, retried at the default
/// budget only when the cheap estimate's error bound misses the tolerance.
/// Counting sweeps mostly hit preperiodic points (instant) and wandering
/// points whose drift terms vanish, so the cheap pass usually suffices.
fn fast_height(f: &ProjMorphism, x: &crate::projective::ProjPointQ, tol: f64) -> Result<HeightEstimate> {
    let est = canonical_height_with(f, x, tol, FAST_EXACT_BITS)?;
    if est.error_bound <= tol {
        return Ok(est);
    }
    canonical_height(f, x, tol)
}

/// R_f(c): the number of x in P^N(Q) with canonical height ≤ c, measured at
/// tolerance `tol` (a point counts when its height estimate is ≤ c + tol).
/// Exhaustive because ĥ ≥ h − C/(d−1).
pub fn count_r(f: &ProjMorphism, c: f64, tol: f64, budget: u128) -> Result<u64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if c < 0.0 {
        return Ok(0);
    }
    let cc = comparison_constant(f)?;
    let radius = ball_radius(c + cc.value / (f.degree() as f64 - 1.0) + tol);
    check_budget(f.dim(), radius, budget)?;
    let points = enumerate_points(f.dim(), radius);
    let count = points
        .par_iter()
        .map(|x| fast_height(f, x, tol).map(|h| h.value <= c + tol))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&inside| inside)
        .count();
    Ok(count as u64)
}

/// One row of a ratio table.  `None` counts mean the enumeration for that
/// cell exceeded the budget; ratios are present only when both logs are
/// defined and the denominator is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct CountRow {
    pub c: f64,
    pub m: Option<u64>,
    pub n: Option<u64>,
    pub r: Option<u64>,
    /// log M(c) / log N(f, c).
    pub ratio_mn: Option<f64>,
    /// log R_f(c) / log M(c).
    pub ratio_rm: Option<f64>,
}

/// Counts and log-ratios per cutoff, with enough metadata to reproduce the
/// run: a hash of the morphism, the canonical-height tolerance, and when
/// the table was generated.
#[derive(Clone, Debug, PartialEq)]
pub struct CountTable {
    pub morphism_hash: String,
    pub tolerance: f64,
    pub timestamp: String,
    pub rows: Vec<CountRow>,
}

/// Hex SHA-256 of the morphism's canonical serialization.
pub fn morphism_hash(f: &ProjMorphism) -> String {
    let wire = serde_json::to_string(f).expect("morphism serialization is infallible");
    let digest = Sha256::digest(wire.as_bytes());
    digest.iter().map(|b| format!("{:02x}", b)).collect()
}

fn log_ratio(num: Option<u64>, den: Option<u64>) -> Option<f64> {
    let (n, d) = (num?, den?);
    if n == 0 || d <= 1 {
        return None;
    }
    Some((n as f64).ln() / (d as f64).ln())
}

/// Assemble M, N and R counts for each cutoff.  A budget overrun marks the
/// affected cell `None` and the row stays; any other error aborts.
pub fn ratio_table(
    f: &ProjMorphism,
    c_values: &[f64],
    tol: f64,
    budget: u128,
) -> Result<CountTable> {
    let mut rows = Vec::with_capacity(c_values.len());
    for &c in c_values {
        let m = allow_budget(count_m(f.dim(), c, budget))?;
        let n = allow_budget(count_n(f, c, budget))?;
        let r = allow_budget(count_r(f, c, tol, budget))?;
        rows.push(CountRow {
            c,
            m,
            n,
            r,
            ratio_mn: log_ratio(m, n),
            ratio_rm: log_ratio(r, m),
        });
    }
    Ok(CountTable {
        morphism_hash: morphism_hash(f),
        tolerance: tol,
        timestamp: now_stamp(),
        rows,
    })
}

fn allow_budget(outcome: Result<u64>) -> Result<Option<u64>> {
    match outcome {
        Ok(v) => Ok(Some(v)),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn now_stamp() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("unix:{}", secs)
}

fn fmt_real(v: f64) -> String {
    format!("{:.11e}", v)
}

fn fmt_opt_count(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn fmt_opt_real(v: Option<f64>) -> String {
    v.map(fmt_real).unwrap_or_default()
}

/// Fixed-column CSV with one metadata comment line.  All reals carry 12
/// significant digits.
pub fn emit_csv(table: &CountTable) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# morphism={},tolerance={},timestamp={}\n",
        table.morphism_hash,
        fmt_real(table.tolerance),
        table.timestamp
    ));
    out.push_str("c,count_m,count_n,count_r,ratio_mn,ratio_rm\n");
    for row in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_real(row.c),
            fmt_opt_count(row.m),
            fmt_opt_count(row.n),
            fmt_opt_count(row.r),
            fmt_opt_real(row.ratio_mn),
            fmt_opt_real(row.ratio_rm),
        ));
    }
    out
}

fn parse_real(s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::InvalidInput(format!("bad real value {:?}", s)))
}

fn parse_opt_count(s: &str) -> Result<Option<u64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse::<u64>()
        .map(Some)
        .map_err(|_| Error::InvalidInput(format!("bad count value {:?}", s)))
}

fn parse_opt_real(s: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    parse_real(s).map(Some)
}

/// Inverse of `emit_csv`.
pub fn parse_csv(text: &str) -> Result<CountTable> {
    let mut lines = text.lines();
    let meta = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty count table".into()))?;
    let meta = meta
        .strip_prefix("# ")
        .ok_or_else(|| Error::InvalidInput("missing metadata line".into()))?;
    let mut morphism_hash = None;
    let mut tolerance = None;
    let mut timestamp = None;
    for item in meta.split(',') {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("bad metadata item {:?}", item)))?;
        match key {
            "morphism" => morphism_hash = Some(value.to_string()),
            "tolerance" => tolerance = Some(parse_real(value)?),
            "timestamp" => timestamp = Some(value.to_string()),
            other => {
                return Err(Error::InvalidInput(format!("unknown metadata key {:?}", other)))
            }
        }
    }
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("missing header line".into()))?;
    if header != "c,count_m,count_n,count_r,ratio_mn,ratio_rm" {
        return Err(Error::InvalidInput(format!("unexpected header {:?}", header)));
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::InvalidInput(format!(
                "expected 6 fields, got {} in {:?}",
                fields.len(),
                line
            )));
        }
        rows.push(CountRow {
            c: parse_real(fields[0])?,
            m: parse_opt_count(fields[1])?,
            n: parse_opt_count(fields[2])?,
            r: parse_opt_count(fields[3])?,
            ratio_mn: parse_opt_real(fields[4])?,
            ratio_rm: parse_opt_real(fields[5])?,
        });
    }
    Ok(CountTable {
        morphism_hash: morphism_hash
            .ok_or_else(|| Error::InvalidInput("metadata missing morphism hash".into()))?,
        tolerance: tolerance
            .ok_or_else(|| Error::InvalidInput("metadata missing tolerance".into()))?,
        timestamp: timestamp
            .ok_or_else(|| Error::InvalidInput("metadata missing timestamp".into()))?,
        rows,
    })
}
