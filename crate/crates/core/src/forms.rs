//! Homogeneous forms with arbitrary-precision integer coefficients.
//!
//! A form is a map from exponent vectors (summing to the degree) to nonzero
//! coefficients, kept in a `BTreeMap` so iteration order, serialization, and
//! equality are all canonical.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousForm {
    n_vars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl HomogeneousForm {
    /// Build a form from (exponent vector, coefficient) pairs.  Zero
    /// coefficients are dropped; duplicate exponent vectors are summed.
    pub fn new<I>(n_vars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        if n_vars == 0 {
            return Err(Error::DimensionMismatch("a form needs at least one variable".into()));
        }
        let mut map: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (exps, coeff) in terms {
            if exps.len() != n_vars {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector {exps:?} has length {} but the form has {n_vars} variables",
                    exps.len()
                )));
            }
            let total: u64 = exps.iter().map(|&e| e as u64).sum();
            if total != degree as u64 {
                return Err(Error::DegreeMismatch(format!(
                    "exponents {exps:?} sum to {total}, expected {degree}"
                )));
            }
            let entry = map.entry(exps).or_insert_with(BigInt::zero);
            *entry += coeff;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(HomogeneousForm { n_vars, degree, terms: map })
    }

    /// The zero form (no terms) of the given signature.
    pub fn zero(n_vars: usize, degree: u32) -> Self {
        HomogeneousForm { n_vars, degree, terms: BTreeMap::new() }
    }

    /// Single monomial `coeff * x^exps`.
    pub fn monomial(exps: Vec<u32>, coeff: BigInt) -> Self {
        let n_vars = exps.len();
        let degree: u32 = exps.iter().sum();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        HomogeneousForm { n_vars, degree, terms }
    }

    /// Convenience for tests and binary forms: machine-integer terms.
    pub fn from_terms_i64(n_vars: usize, degree: u32, terms: &[(&[u32], i64)]) -> Result<Self> {
        Self::new(
            n_vars,
            degree,
            terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        )
    }

    /// Binary form of the given degree from univariate coefficients
    /// (low-to-high): sum of c_k X^k Z^(d-k).
    pub fn from_univariate(coeffs: &[BigInt], degree: u32) -> Result<Self> {
        if coeffs.len() > degree as usize + 1 {
            return Err(Error::DegreeMismatch(format!(
                "{} coefficients exceed degree {degree}",
                coeffs.len()
            )));
        }
        Self::new(
            2,
            degree,
            coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| {
                (vec![k as u32, degree - k as u32], c.clone())
            }),
        )
    }

    /// Univariate coefficients (low-to-high in the first variable) of a
    /// binary form: the inverse of `from_univariate`.
    pub fn to_univariate(&self) -> Vec<BigInt> {
        assert_eq!(self.n_vars, 2, "to_univariate is for binary forms");
        let mut out = vec![BigInt::zero(); self.degree as usize + 1];
        for (exps, c) in &self.terms {
            out[exps[0] as usize] = c.clone();
        }
        out
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Largest |coefficient|; zero form gives 0.
    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(BigInt::zero)
    }

    /// Sum of |coefficients|.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Gcd of |coefficients|; zero form gives 0.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        g
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_signature(other)?;
        Self::new(
            self.n_vars,
            self.degree,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        HomogeneousForm {
            n_vars: self.n_vars,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.n_vars, self.degree);
        }
        HomogeneousForm {
            n_vars: self.n_vars,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    /// Exact division of every coefficient; panics if not exact (internal
    /// use on content divisors).
    pub fn divide_exact(&self, c: &BigInt) -> Self {
        assert!(!c.is_zero());
        HomogeneousForm {
            n_vars: self.n_vars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, k)| {
                    let (q, r) = k.div_rem(c);
                    assert!(r.is_zero(), "non-exact division in divide_exact");
                    (e.clone(), q)
                })
                .collect(),
        }
    }

    /// Product of two forms in the same variables (degrees add).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n_vars != other.n_vars {
            return Err(Error::DimensionMismatch("multiplying forms in different variable sets".into()));
        }
        let degree = self.degree + other.degree;
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = terms.entry(exps).or_insert_with(BigInt::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(HomogeneousForm { n_vars: self.n_vars, degree, terms })
    }

    /// Multiply by a single monomial (cheap path for matrix assembly).
    pub fn mul_monomial(&self, exps: &[u32]) -> Self {
        HomogeneousForm {
            n_vars: self.n_vars,
            degree: self.degree + exps.iter().sum::<u32>(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(exps).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Substitute `subs[i]` for variable i.  All substituted forms must share
    /// a variable set and a common degree e; the result has degree d * e.
    pub fn compose(&self, subs: &[HomogeneousForm]) -> Result<Self> {
        if subs.len() != self.n_vars {
            return Err(Error::DimensionMismatch(format!(
                "{} substitution forms for {} variables",
                subs.len(),
                self.n_vars
            )));
        }
        let inner_vars = subs[0].n_vars;
        let inner_deg = subs[0].degree;
        for s in subs {
            if s.n_vars != inner_vars || s.degree != inner_deg {
                return Err(Error::DegreeMismatch(
                    "substitution forms must share variables and degree".into(),
                ));
            }
        }
        let mut acc = Self::zero(inner_vars, self.degree * inner_deg);
        for (exps, c) in &self.terms {
            let mut prod = Self::monomial(vec![0; inner_vars], BigInt::one());
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    prod = prod.mul(&subs[i])?;
                }
            }
            acc = acc.add(&prod.scale(c))?;
        }
        Ok(acc)
    }

    /// Exact evaluation at integer coordinates.
    pub fn eval(&self, coords: &[BigInt]) -> BigInt {
        assert_eq!(coords.len(), self.n_vars, "coordinate count mismatch");
        let mut acc = BigInt::zero();
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (x, &e) in coords.iter().zip(exps) {
                if e > 0 {
                    term *= x.pow(e);
                }
            }
            acc += term;
        }
        acc
    }

    /// Evaluation in double precision (used only by the guarded float phase
    /// of canonical-height computation, never for exact decisions).
    pub fn eval_f64(&self, coords: &[f64]) -> f64 {
        let mut acc = 0.0f64;
        for (exps, c) in &self.terms {
            let mut term = bigint_to_f64(c);
            for (x, &e) in coords.iter().zip(exps) {
                term *= x.powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    fn check_signature(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars || self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "({} vars, degree {}) vs ({} vars, degree {})",
                self.n_vars, self.degree, other.n_vars, other.degree
            )));
        }
        Ok(())
    }
}

/// Lossy conversion suitable for the float height phase (coefficients there
/// are small; the conversion is exact in every use in this crate).
pub fn bigint_to_f64(c: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().expect("finite conversion")
}

/// All exponent vectors of the given degree in `n_vars` variables, in
/// descending lexicographic order (so e.g. X^2, XZ, Z^2).  The order is the
/// canonical row/column order for every matrix built in this crate.
pub fn monomials(n_vars: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n_vars];
    fill(&mut out, &mut current, 0, degree);
    fn fill(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
        if pos + 1 == current.len() {
            current[pos] = remaining;
            out.push(current.clone());
            return;
        }
        for e in (0..=remaining).rev() {
            current[pos] = e;
            fill(out, current, pos + 1, remaining - e);
        }
    }
    out
}

/// Number of monomials of the given degree: C(degree + n_vars - 1, n_vars - 1).
pub fn monomial_count(n_vars: usize, degree: u32) -> usize {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..(n_vars - 1) as u128 {
        num *= degree as u128 + i + 1;
        den *= i + 1;
    }
    (num / den) as usize
}

fn var_names(n_vars: usize) -> Vec<String> {
    match n_vars {
        2 => vec!["X".into(), "Z".into()],
        3 => vec!["X".into(), "Y".into(), "Z".into()],
        _ => (0..n_vars).map(|i| format!("X{i}")).collect(),
    }
}

impl fmt::Display for HomogeneousForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = var_names(self.n_vars);
        let mut first = true;
        // Descending lex order reads naturally (leading term first).
        for (exps, c) in self.terms.iter().rev() {
            let mut mono = String::new();
            for (name, &e) in names.iter().zip(exps) {
                match e {
                    0 => {}
                    1 => mono.push_str(name),
                    _ => mono.push_str(&format!("{name}^{e}")),
                }
            }
            let abs = c.abs();
            let lead = if mono.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                mono
            } else {
                format!("{abs}{mono}")
            };
            if first {
                if c.is_negative() {
                    write!(f, "-{lead}")?;
                } else {
                    write!(f, "{lead}")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - {lead}")?;
            } else {
                write!(f, " + {lead}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    exps: Vec<u32>,
    coeff: String,
}

impl Serialize for HomogeneousForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // Descending lex order of exponent vectors: leading term first.
        let wire: Vec<TermWire> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| TermWire { exps: e.clone(), coeff: c.to_string() })
            .collect();
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomogeneousForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = Vec::<TermWire>::deserialize(d)?;
        if wire.is_empty() {
            return Err(D::Error::custom("a serialized form needs at least one term"));
        }
        let n_vars = wire[0].exps.len();
        let degree: u32 = wire[0].exps.iter().sum();
        let terms: std::result::Result<Vec<(Vec<u32>, BigInt)>, D::Error> = wire
            .into_iter()
            .map(|t| {
                let c: BigInt = t
                    .coeff
                    .parse()
                    .map_err(|e| D::Error::custom(format!("bad coefficient {:?}: {e}", t.coeff)))?;
                Ok((t.exps, c))
            })
            .collect();
        HomogeneousForm::new(n_vars, degree, terms?).map_err(D::Error::custom)
    }
}
