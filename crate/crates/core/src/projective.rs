//! Projective points over Q (exact, canonically normalized) and over finite
//! fields F_{p^r} (residue-polynomial representation).
//!
//! Canonical form over Q: coprime integer coordinates with the first nonzero
//! coordinate positive.  Equality of canonical points is literal coordinate
//! equality, which makes hashing and ordering safe.
//!
//! Canonical form over F_q: the first nonzero coordinate equals 1.

use crate::error::{Error, Result};
use crate::fp_poly::{self, Poly};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// A point of P^N(Q) in canonical integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPointQ {
    coords: Vec<BigInt>,
}

impl ProjPointQ {
    /// Normalize integer coordinates: divide by the gcd and flip the sign so
    /// the first nonzero coordinate is positive.  Errors if all are zero.
    pub fn from_integers(coords: Vec<BigInt>) -> Result<Self> {
        if coords.is_empty() || coords.iter().all(|c| c.is_zero()) {
            return Err(Error::NotAProjectivePoint);
        }
        let mut g = BigInt::zero();
        for c in &coords {
            g = g.gcd(c);
        }
        let mut coords: Vec<BigInt> = coords.into_iter().map(|c| c / &g).collect();
        let first = coords.iter().find(|c| !c.is_zero()).unwrap();
        if first.is_negative() {
            for c in &mut coords {
                *c = -std::mem::take(c);
            }
        }
        Ok(ProjPointQ { coords })
    }

    /// Normalize rational coordinates by clearing denominators first.
    pub fn from_rationals(coords: &[BigRational]) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::NotAProjectivePoint);
        }
        let mut lcm = BigInt::one();
        for c in coords {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = coords
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        Self::from_integers(ints)
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::from_integers(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Ambient dimension N (the point has N + 1 coordinates).
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Largest absolute value among the coordinates (always >= 1).
    pub fn max_abs(&self) -> BigUint {
        self.coords
            .iter()
            .map(|c| c.magnitude().clone())
            .max()
            .expect("nonempty")
    }

    /// For points of P^1: (numerator, denominator) of the affine value with
    /// nonnegative denominator, the point at infinity mapping to (1, 0).
    /// Used for the documented output ordering of preimage sets.
    pub fn affine_key(&self) -> (BigInt, BigInt) {
        assert_eq!(self.dim(), 1, "affine_key is for P^1 points");
        let (a, b) = (&self.coords[0], &self.coords[1]);
        if b.is_negative() {
            (-a.clone(), -b.clone())
        } else {
            (a.clone(), b.clone())
        }
    }
}

impl fmt::Display for ProjPointQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(" : "))
    }
}

impl Serialize for ProjPointQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        strings.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPointQ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        let ints: std::result::Result<Vec<BigInt>, _> = strings
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| D::Error::custom(format!("bad integer {s:?}: {e}"))))
            .collect();
        ProjPointQ::from_integers(ints?).map_err(D::Error::custom)
    }
}

/// Hard caps keeping index arithmetic in u64 and products in u128.
const MAX_P: u64 = (1 << 31) - 1;
const MAX_ORDER: u64 = 1 << 62;

/// The finite field F_{p^r}, presented as F_p[t] / (modulus), with the
/// modulus monic irreducible of degree r (coefficients low-to-high).
/// For r = 1 the modulus is t itself and elements are plain residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteField {
    p: u64,
    r: u32,
    modulus: Vec<u64>,
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = 37u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FiniteField {
    /// Build F_{p^r} with the first irreducible monic modulus in the
    /// deterministic search order (lower coefficients counted as base-p
    /// digits, constant term most significant).  For p = 3, r = 2 this
    /// yields t^2 + 1.
    pub fn new(p: u64, r: u32) -> Result<Self> {
        Self::check_size(p, r)?;
        if r == 1 {
            return Ok(FiniteField { p, r, modulus: vec![0, 1] });
        }
        let total = (p as u128).pow(r);
        for code in 0..total {
            // Low coefficients (c_0 .. c_{r-1}) counted with c_0 as the most
            // significant base-p digit, so e.g. over F_3 with r = 2 the order
            // is t^2, t^2+t, t^2+2t, t^2+1, ... and t^2+1 is found first.
            let mut m: Poly = vec![0; r as usize + 1];
            m[r as usize] = 1;
            let mut c = code;
            for i in (0..r as usize).rev() {
                m[i] = (c % p as u128) as u64;
                c /= p as u128;
            }
            if fp_poly::is_irreducible(&m, p) {
                return Ok(FiniteField { p, r, modulus: m });
            }
        }
        unreachable!("irreducible polynomials of every degree exist over F_p")
    }

    /// Build F_{p^r} with an explicitly given monic irreducible modulus
    /// (coefficients low-to-high, length r + 1).
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        let r = (modulus.len() - 1) as u32;
        Self::check_size(p, r)?;
        let modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        if modulus.last() != Some(&1) {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if !fp_poly::is_irreducible(&modulus, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        Ok(FiniteField { p, r, modulus })
    }

    fn check_size(p: u64, r: u32) -> Result<()> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > MAX_P {
            return Err(Error::InvalidField(format!("p = {p} exceeds the size cap")));
        }
        if r == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let order = (p as u128).checked_pow(r);
        match order {
            Some(o) if o <= MAX_ORDER as u128 => Ok(()),
            _ => Err(Error::InvalidField(format!("p^r too large (p = {p}, r = {r})"))),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Field order q = p^r.
    pub fn order(&self) -> u64 {
        (self.p as u128).pow(self.r) as u64
    }

    pub fn zero(&self) -> FqElem {
        FqElem { coeffs: Vec::new() }
    }

    pub fn one(&self) -> FqElem {
        FqElem { coeffs: vec![1] }
    }

    /// Element from residue-polynomial coefficients (low-to-high); reduced
    /// modulo p and the modulus.
    pub fn elem(&self, coeffs: &[u64]) -> FqElem {
        let reduced: Poly = coeffs.iter().map(|&c| c % self.p).collect();
        FqElem { coeffs: fp_poly::rem_monic(&fp_poly::trim(reduced), &self.modulus, self.p) }
    }

    /// Element of the prime subfield from a signed integer.
    pub fn elem_from_int(&self, c: i64) -> FqElem {
        let residue = c.rem_euclid(self.p as i64) as u64;
        FqElem { coeffs: fp_poly::trim(vec![residue]) }
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem { coeffs: fp_poly::add(&a.coeffs, &b.coeffs, self.p) }
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem { coeffs: fp_poly::sub(&a.coeffs, &b.coeffs, self.p) }
    }

    pub fn neg(&self, a: &FqElem) -> FqElem {
        FqElem { coeffs: fp_poly::sub(&[], &a.coeffs, self.p) }
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        FqElem { coeffs: fp_poly::mul_mod(&a.coeffs, &b.coeffs, &self.modulus, self.p) }
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if a.is_zero() {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        Ok(FqElem { coeffs: fp_poly::inv_mod(&a.coeffs, &self.modulus, self.p) })
    }

    pub fn pow(&self, a: &FqElem, e: u64) -> FqElem {
        if e == 0 {
            return self.one();
        }
        FqElem { coeffs: fp_poly::pow_mod(&a.coeffs, e, &self.modulus, self.p) }
    }

    /// Bijection F_q -> [0, q): coefficients read as base-p digits.
    pub fn elem_index(&self, a: &FqElem) -> u64 {
        let mut idx: u64 = 0;
        for i in (0..self.r as usize).rev() {
            let c = a.coeffs.get(i).copied().unwrap_or(0);
            idx = idx * self.p + c;
        }
        idx
    }

    /// Inverse of `elem_index`.
    pub fn elem_from_index(&self, mut idx: u64) -> FqElem {
        let mut coeffs = vec![0u64; self.r as usize];
        for c in coeffs.iter_mut() {
            *c = idx % self.p;
            idx /= self.p;
        }
        FqElem { coeffs: fp_poly::trim(coeffs) }
    }

    /// Reduce an arbitrary-precision integer into the prime subfield.
    pub fn reduce_int(&self, c: &BigInt) -> FqElem {
        let p = BigInt::from(self.p);
        let residue = c.mod_floor(&p).to_u64().expect("residue fits");
        FqElem { coeffs: fp_poly::trim(vec![residue]) }
    }

    pub fn format_elem(&self, a: &FqElem) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        if self.r == 1 {
            return a.coeffs[0].to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (i, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let part = match i {
                0 => c.to_string(),
                1 if c == 1 => "t".to_string(),
                1 => format!("{c}t"),
                _ if c == 1 => format!("t^{i}"),
                _ => format!("{c}t^{i}"),
            };
            parts.push(part);
        }
        parts.join("+")
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.r == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.r)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FieldWire {
    p: u64,
    r: u32,
    modulus: Vec<u64>,
}

impl Serialize for FiniteField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldWire { p: self.p, r: self.r, modulus: self.modulus.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = FieldWire::deserialize(d)?;
        let field = FiniteField::with_modulus(w.p, w.modulus).map_err(D::Error::custom)?;
        if field.r != w.r {
            return Err(D::Error::custom(format!(
                "declared r = {} does not match modulus degree {}",
                w.r, field.r
            )));
        }
        Ok(field)
    }
}

/// An element of F_{p^r}: residue polynomial, low-to-high, trailing zeros
/// trimmed (so equality is plain vector equality).  All arithmetic goes
/// through the owning `FiniteField`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    coeffs: Vec<u64>,
}

impl FqElem {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }
}

/// A point of P^N(F_q) with the first nonzero coordinate scaled to 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjPointF {
    field: FiniteField,
    coords: Vec<FqElem>,
}

impl ProjPointF {
    /// Normalize: scale so the first nonzero coordinate becomes 1.
    pub fn new(field: FiniteField, coords: Vec<FqElem>) -> Result<Self> {
        if coords.is_empty() || coords.iter().all(|c| c.is_zero()) {
            return Err(Error::NotAProjectivePoint);
        }
        let lead = coords.iter().find(|c| !c.is_zero()).unwrap();
        let coords = if lead.is_one() {
            coords
        } else {
            let inv = field.inv(lead)?;
            coords.iter().map(|c| field.mul(c, &inv)).collect()
        };
        Ok(ProjPointF { field, coords })
    }

    /// Build from prime-subfield residues given as signed integers.
    pub fn from_ints(field: FiniteField, coords: &[i64]) -> Result<Self> {
        let elems: Vec<FqElem> = coords.iter().map(|&c| field.elem_from_int(c)).collect();
        Self::new(field, elems)
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coords(&self) -> &[FqElem] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }
}

impl fmt::Display for ProjPointF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| self.field.format_elem(c)).collect();
        write!(f, "({})", parts.join(" : "))
    }
}

#[derive(Serialize, Deserialize)]
struct PointFWire {
    field: FiniteField,
    coords: Vec<Vec<u64>>,
}

impl Serialize for ProjPointF {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointFWire {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c.coeffs.clone()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjPointF {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = PointFWire::deserialize(d)?;
        let elems: Vec<FqElem> = w.coords.iter().map(|c| w.field.elem(c)).collect();
        ProjPointF::new(w.field, elems).map_err(D::Error::custom)
    }
}

/// The q^m-power Frobenius applied coordinatewise, where q must be a power
/// of the characteristic of the point's field.  The base q belongs to the
/// dynamical context (a system defined over F_p uses q = p regardless of
/// which extension the point lives in), which is why it is an explicit
/// argument rather than being inferred from the point.
pub fn frobenius(u: &ProjPointF, q: u64, m: u32) -> ProjPointF {
    let p = u.field.p();
    let mut s = 0u32;
    let mut qq = q;
    while qq > 1 && qq % p == 0 {
        qq /= p;
        s += 1;
    }
    assert!(qq == 1 && s >= 1, "frobenius base {q} is not a positive power of the characteristic {p}");
    if m == 0 {
        return u.clone();
    }
    let order = u.field.order();
    // x^(q^m) = x^e with e = q^m mod (order - 1), adjusted to order - 1 when
    // the reduction hits 0, and 0^e = 0 untouched.
    let e = if order == 2 {
        1
    } else {
        let modulus = (order - 1) as u128;
        let mut acc: u128 = 1;
        let mut base = (q as u128) % modulus;
        let mut exp = m;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % modulus;
            }
            base = base * base % modulus;
            exp >>= 1;
        }
        if acc == 0 {
            (order - 1) as u64
        } else {
            acc as u64
        }
    };
    let coords: Vec<FqElem> = u.coords.iter().map(|c| u.field.pow(c, e)).collect();
    ProjPointF::new(u.field.clone(), coords).expect("frobenius preserves nonvanishing")
}

/// Reduce a canonical Q-point modulo a prime, landing in P^N(F_p).
/// Well defined on projective classes because the canonical representative
/// has coprime coordinates, so not all of them vanish modulo p.
pub fn reduce_mod_p(x: &ProjPointQ, p: u64) -> Result<ProjPointF> {
    let field = FiniteField::new(p, 1)?;
    let coords: Vec<FqElem> = x.coords().iter().map(|c| field.reduce_int(c)).collect();
    ProjPointF::new(field, coords)
}
