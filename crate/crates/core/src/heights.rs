//! Weil and canonical heights with explicit error bounds.
//!
//! The Weil height of a rational projective point is log max|c_i| over its
//! canonical coprime integer coordinates (natural log throughout).  For a
//! validated degree-d morphism the height transforms as
//!
//!   d*h(x) - c_low  <=  h(f(x))  <=  d*h(x) + c_up
//!
//! where c_up = max_i log(T_i * B_i) over the coordinate forms (T_i terms,
//! largest absolute coefficient B_i), and c_low comes from the certified
//! identities sum_j g_ij f_j = R_i * x_i^E: writing W_i for the total
//! coefficient mass of row i and L = lcm_i |R_i|, any common divisor of the
//! evaluated forms at coprime coordinates divides L, giving
//! c_low = max_i (log W_i - log R_i) + log L.
//!
//! The canonical height is lim h(f^n x)/d^n; the comparison constant
//! C = max(c_up, c_low) gives the tail bound |h(f^n x)/d^n - hhat(x)| <=
//! C/((d-1) d^n).  The computation iterates exactly (with early exit to an
//! exact zero when the orbit revisits a point) until the coordinates exceed
//! a bit budget, then switches to log-scaled floating point on unreduced
//! iterates.  Skipping the gcd reductions in the float phase costs at most
//! log L / ((d-1) d^(n0)) with n0 the number of exact steps, and the
//! floating-point rounding itself is absorbed by a generously padded slack
//! term; both enter the reported error bound.

use crate::error::{Error, Result};
use crate::macaulay::{elimination_identities, sufficient_degree, FormIdentity};
use crate::morphism::{ProjMorphism, ValidityCertificate};
use crate::projective::ProjPointQ;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::HashSet;

/// Natural log of a positive big integer, accurate to a relative error of a
/// few units in the last place (top 53 bits plus an exact power of two).
pub fn log_biguint(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "log of zero");
    let bits = n.bits();
    if bits <= 53 {
        return (n.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 53;
    let top = (n >> shift).to_u64().unwrap() as f64;
    top.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// log max|c_i| over the canonical coordinates: the Weil height.
pub fn log_height(x: &ProjPointQ) -> f64 {
    log_biguint(&x.max_abs())
}

/// Number of raw candidate tuples the bounded enumeration walks, before the
/// coprimality filter: the budget measure for search routines.  Saturates.
pub fn enumeration_size(dim: usize, bound: u64) -> u128 {
    let h = bound as u128;
    let width = match h.checked_mul(2).and_then(|v| v.checked_add(1)) {
        Some(w) => w,
        None => return u128::MAX,
    };
    let mut total: u128 = 0;
    for lead in 0..=dim {
        let rest = (dim - lead) as u32;
        let Some(block) = width.checked_pow(rest).and_then(|v| v.checked_mul(h)) else {
            return u128::MAX;
        };
        let Some(t) = total.checked_add(block) else {
            return u128::MAX;
        };
        total = t;
    }
    total.saturating_add(1) // the final basis point (0:...:0:1)
}

/// All points of P^dim(Q) whose canonical coordinates are bounded by
/// `bound` in absolute value, i.e. all points of Weil height <= log(bound).
/// Grouped by the index of the leading nonzero coordinate; within a group
/// the trailing coordinates run in odometer order.
pub fn enumerate_points(dim: usize, bound: u64) -> Vec<ProjPointQ> {
    assert!(bound >= 1, "height bound below 1 admits no points");
    assert!(bound <= (1 << 31), "coordinate bound out of supported range");
    let h = bound as i64;
    let mut out = Vec::new();
    for lead in 0..=dim {
        let rest = dim - lead;
        let mut coords = vec![0i64; dim + 1];
        for first in 1..=h {
            coords[lead] = first;
            if rest == 0 {
                if first == 1 {
                    out.push(point_from_i64(&coords));
                }
                continue;
            }
            let mut tail = vec![-h; rest];
            loop {
                for (k, v) in tail.iter().enumerate() {
                    coords[lead + 1 + k] = *v;
                }
                let mut g = first as u64;
                for v in &tail {
                    g = num_integer::gcd(g, v.unsigned_abs());
                }
                if g == 1 {
                    out.push(point_from_i64(&coords));
                }
                if !advance(&mut tail, -h, h) {
                    break;
                }
            }
        }
    }
    out
}

/// Step a little-endian-last odometer over [lo, hi]^k; false on wraparound.
fn advance(digits: &mut [i64], lo: i64, hi: i64) -> bool {
    for k in (0..digits.len()).rev() {
        if digits[k] < hi {
            digits[k] += 1;
            return true;
        }
        digits[k] = lo;
    }
    false
}

fn point_from_i64(coords: &[i64]) -> ProjPointQ {
    ProjPointQ::from_i64(coords).expect("enumerated coordinates are canonical")
}

/// The height-comparison data of a validated morphism: the one-step bounds,
/// their maximum C, and the certified identities behind the lower bound.
#[derive(Debug, Clone)]
pub struct ComparisonConstant {
    pub c_up: f64,
    pub c_low: f64,
    /// C = max(c_up, c_low), the two-sided comparison constant.
    pub value: f64,
    /// lcm of the identity scales: bounds the gcd dropped by skipping
    /// coordinate reduction.
    pub lcm_scale: BigInt,
    pub log_lcm: f64,
    pub witness_degree: u32,
    pub identities: Vec<FormIdentity>,
}

/// Compute the comparison constant from the coordinate forms and the
/// certified elimination identities.
pub fn comparison_constant(f: &ProjMorphism) -> Result<ComparisonConstant> {
    let n_vars = f.dim() + 1;
    let d = f.degree();

    let mut c_up = 0f64;
    for form in f.forms() {
        let t = form.terms().count();
        let b = form.max_abs_coeff();
        let bound = BigUint::from(t as u64) * b.magnitude();
        c_up = c_up.max(log_biguint(&bound));
    }

    let witness_degree = match f.certificate() {
        ValidityCertificate::Resultant { .. } => sufficient_degree(n_vars, d),
        ValidityCertificate::MacaulayRank(cert) => cert.witness_degree,
    };
    let identities = elimination_identities(f.forms(), witness_degree)?;

    let mut lcm_scale = BigInt::one();
    let mut worst_row = 0f64;
    for id in &identities {
        let w: BigInt = id
            .multipliers
            .iter()
            .map(|g| g.l1_norm())
            .sum();
        // W_i >= R_i always (evaluate the identity at the standard basis
        // point), so the row term is nonnegative.
        let row = log_biguint(w.magnitude()) - log_biguint(id.scale.magnitude());
        worst_row = worst_row.max(row);
        lcm_scale = lcm_scale.lcm(&id.scale);
    }
    let log_lcm = if lcm_scale.is_one() {
        0.0
    } else {
        log_biguint(lcm_scale.magnitude())
    };
    let c_low = (worst_row + log_lcm).max(0.0);

    Ok(ComparisonConstant {
        c_up,
        c_low,
        value: c_up.max(c_low),
        lcm_scale,
        log_lcm,
        witness_degree,
        identities,
    })
}

/// A canonical-height value with a rigorous error bound:
/// |value - hhat(x)| <= error_bound.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct HeightEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub iterations: u32,
}

/// Default ceiling on the bit length of exact iterates before the
/// computation switches to log-scaled floating point.
pub const DEFAULT_EXACT_BITS: u64 = 1_000_000;

/// Canonical height of a rational point, targeting |value - hhat| <= tol.
/// The reported error bound is authoritative: it can exceed tol only when
/// the float phase starts early (coordinate blow-up) on a map whose
/// identity scales are not all 1.
pub fn canonical_height(f: &ProjMorphism, x: &ProjPointQ, tol: f64) -> Result<HeightEstimate> {
    canonical_height_with(f, x, tol, DEFAULT_EXACT_BITS)
}

/// As `canonical_height`, with an explicit exact-phase bit budget.
pub fn canonical_height_with(
    f: &ProjMorphism,
    x: &ProjPointQ,
    tol: f64,
    max_exact_bits: u64,
) -> Result<HeightEstimate> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if x.dim() != f.dim() {
        return Err(Error::DimensionMismatch(format!(
            "point in P^{} fed to a map of P^{}",
            x.dim(),
            f.dim()
        )));
    }
    let cc = comparison_constant(f)?;
    let d = f.degree() as f64;
    let eps = f64::EPSILON;

    // Tail target: C / ((d-1) d^n) <= tol/2.
    let n_total: u32 = if cc.value <= 0.0 {
        0
    } else {
        let need = (2.0 * cc.value / ((d - 1.0) * tol)).ln() / d.ln();
        need.ceil().max(0.0) as u32
    };

    // Exact phase.  Starting from coprime coordinates, the gcd of the
    // evaluated forms divides L = lcm of the identity scales, so stripping
    // the primes of L keeps the coordinates exactly coprime at linear cost
    // per step (a full gcd of megabit iterates would be quadratic).  An
    // orbit that revisits a point is preperiodic: exact height zero.
    let lcm_primes: Vec<(BigInt, u32)> =
        crate::factor::factorize(cc.lcm_scale.magnitude())
            .into_iter()
            .map(|(p, e)| (BigInt::from(p), e))
            .collect();
    let mut coords: Vec<BigInt> = x.coords().to_vec();
    let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
    let mut n0: u32 = 0;
    while n0 < n_total {
        let max = max_abs_coords(&coords);
        if max.bits() > max_exact_bits {
            break;
        }
        // A revisit can only happen while the orbit stays small; capping
        // the memo keeps wandering orbits from hoarding huge keys.
        if max.bits() <= 4096 && !seen.insert(sign_normalized(&coords)) {
            return Ok(HeightEstimate {
                value: 0.0,
                error_bound: 0.0,
                iterations: n0,
            });
        }
        coords = f.forms().iter().map(|h| h.eval(&coords)).collect();
        strip_lcm_primes(&mut coords, &lcm_primes);
        debug_assert!(!coords.iter().all(|c| c.is_zero()));
        n0 += 1;
    }

    let tail = if n_total == 0 {
        0.0
    } else {
        cc.value / ((d - 1.0) * d.powi(n_total as i32))
    };

    if n0 == n_total {
        let value = log_biguint(&max_abs_coords(&coords)) / d.powi(n_total as i32);
        let slack = 8.0 * eps * (1.0 + value.abs()) * (1.0 + n_total as f64);
        return Ok(HeightEstimate {
            value,
            error_bound: tail + slack,
            iterations: n_total,
        });
    }

    // Float phase on unreduced, max-normalized coordinates.
    let max = max_abs_coords(&coords);
    let mut yf: Vec<f64> = coords.iter().map(|c| ratio_to_f64(c, &max)).collect();
    let mut s = log_biguint(&max);
    let t_max = f.forms().iter().map(|h| h.terms().count()).max().unwrap() as f64;
    let b_max = f
        .forms()
        .iter()
        .map(|h| h.max_abs_coeff())
        .max()
        .unwrap()
        .to_f64()
        .unwrap_or(f64::MAX);
    // Per-step log-domain rounding slack: a generous multiple of machine
    // epsilon scaled by the conditioning floor exp(c_low - log L) from the
    // identity lower bound on max|F| over the unit cube.
    let per_step = 64.0
        * eps
        * (1.0 + t_max * b_max * (d + 2.0) * (cc.c_low - cc.log_lcm).exp());
    for _ in n0..n_total {
        let z: Vec<f64> = f.forms().iter().map(|h| h.eval_f64(&yf)).collect();
        let m = z.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if !(m > 0.0) || !m.is_finite() {
            return Err(Error::InvalidInput(
                "floating-point degeneration in the height iteration".into(),
            ));
        }
        s = d * s + m.ln();
        yf = z.iter().map(|v| v / m).collect();
    }
    let value = s / d.powi(n_total as i32);
    let dn0 = d.powi(n0 as i32);
    let drift = cc.log_lcm / ((d - 1.0) * dn0);
    let float_err = per_step / ((d - 1.0) * dn0)
        + 8.0 * eps * (1.0 + value.abs()) * (1.0 + n_total as f64);
    Ok(HeightEstimate {
        value,
        error_bound: tail + drift + float_err,
        iterations: n_total,
    })
}

fn max_abs_coords(coords: &[BigInt]) -> BigUint {
    coords
        .iter()
        .map(|c| c.magnitude().clone())
        .max()
        .expect("nonempty coordinates")
}

fn sign_normalized(coords: &[BigInt]) -> Vec<BigInt> {
    match coords.iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative() => coords.iter().map(|v| -v).collect(),
        _ => coords.to_vec(),
    }
}

/// Divide out of all coordinates the largest common power of each listed
/// prime (capped by its exponent); exactly removes the gcd whenever the
/// gcd is known to divide the listed prime powers.
fn strip_lcm_primes(coords: &mut [BigInt], primes: &[(BigInt, u32)]) {
    for (p, cap) in primes {
        let mut e = *cap;
        for c in coords.iter() {
            if c.is_zero() {
                continue;
            }
            let mut v = 0u32;
            let mut t = c.clone();
            while v < e {
                let (q, r) = t.div_rem(p);
                if !r.is_zero() {
                    break;
                }
                t = q;
                v += 1;
            }
            e = e.min(v);
            if e == 0 {
                break;
            }
        }
        if e > 0 {
            let pe = p.pow(e);
            for c in coords.iter_mut() {
                *c = &*c / &pe;
            }
        }
    }
}

/// c / max as f64, from the top 53 bits of each; |c| <= max required.
fn ratio_to_f64(c: &BigInt, max: &BigUint) -> f64 {
    let bits = max.bits();
    if bits <= 53 {
        return c.to_f64().unwrap_or(0.0) / max.to_f64().unwrap_or(1.0);
    }
    let shift = (bits - 53) as usize;
    let num = (c >> shift).to_f64().unwrap_or(0.0);
    let den = (max >> shift).to_f64().unwrap_or(1.0);
    num / den
}
