//! Self-maps of projective space over Q given by tuples of homogeneous
//! forms, validated by an exact certificate that the forms have no common
//! projective zero.
//!
//! On the line the certificate is the Sylvester resultant, which vanishes
//! exactly when the map degenerates, so invalidity is provable (with a
//! rational witness when one exists).  In higher dimension the certificate
//! is full row rank of the elimination matrix at a small working degree;
//! failure to certify up to the retry cap is reported as `NoCertificate`,
//! which deliberately does not claim the map is invalid.
//!
//! The certificate integer (resultant or pivot minor) also controls
//! reduction: at primes not dividing it, the reduced forms stay a valid
//! self-map over the finite field.

use crate::error::{Error, Result};
use crate::factor::primes_up_to;
use crate::forms::HomogeneousForm;
use crate::macaulay::{full_rank_certificate, sufficient_degree, RankCertificate};
use crate::projective::{FiniteField, FqElem, ProjPointF, ProjPointQ};
use crate::resultant::resultant;
use crate::roots::rational_projective_roots;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// Proof that the coordinate forms share no projective zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidityCertificate {
    /// Dimension 1: the Sylvester resultant, nonzero.
    Resultant { value: BigInt },
    /// Dimension >= 2: full row rank of the elimination matrix.
    MacaulayRank(RankCertificate),
}

impl ValidityCertificate {
    /// The certifying integer: reductions mod p remain valid whenever p
    /// does not divide it.
    pub fn value(&self) -> &BigInt {
        match self {
            ValidityCertificate::Resultant { value } => value,
            ValidityCertificate::MacaulayRank(cert) => &cert.pivot_minor,
        }
    }
}

/// A degree-d morphism f: P^N -> P^N over Q, d >= 2, stored with
/// content-and-sign-normalized coordinate forms and a validity certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjMorphism {
    forms: Vec<HomogeneousForm>,
    degree: u32,
    certificate: ValidityCertificate,
}

impl ProjMorphism {
    /// Validate a tuple of forms as a morphism.  Checks shape (N+1 forms in
    /// N+1 variables, equal degrees, degree at least 2), normalizes the
    /// common integer scalar, and certifies the empty base locus.
    pub fn new(forms: Vec<HomogeneousForm>) -> Result<Self> {
        if forms.len() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "a self-map of P^N needs at least 2 coordinate forms, got {}",
                forms.len()
            )));
        }
        let n = forms.len();
        for (i, f) in forms.iter().enumerate() {
            if f.n_vars() != n {
                return Err(Error::DimensionMismatch(format!(
                    "form {} uses {} variables but the tuple has {} coordinates",
                    i,
                    f.n_vars(),
                    n
                )));
            }
        }
        let degree = forms[0].degree();
        for (i, f) in forms.iter().enumerate() {
            if f.degree() != degree {
                return Err(Error::DegreeMismatch(format!(
                    "form {} has degree {} but form 0 has degree {}",
                    i,
                    f.degree(),
                    degree
                )));
            }
        }
        if degree < 2 {
            return Err(Error::DegreeTooSmall);
        }

        let forms = normalize_scalar(forms);

        let certificate = if n == 2 {
            let value = resultant(&forms[0], &forms[1]);
            if value.is_zero() {
                return Err(Error::CommonZero {
                    witness: common_rational_zero(&forms[0], &forms[1]),
                });
            }
            ValidityCertificate::Resultant { value }
        } else {
            let base = sufficient_degree(n, degree);
            let cap = base + 2;
            let mut found = None;
            for working in base..=cap {
                if let Some(cert) = full_rank_certificate(&forms, working) {
                    found = Some(cert);
                    break;
                }
            }
            match found {
                Some(cert) => ValidityCertificate::MacaulayRank(cert),
                None => return Err(Error::NoCertificate { max_degree: cap }),
            }
        };

        Ok(ProjMorphism {
            forms,
            degree,
            certificate,
        })
    }

    /// Dimension N of the source and target projective space.
    pub fn dim(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn forms(&self) -> &[HomogeneousForm] {
        &self.forms
    }

    pub fn certificate(&self) -> &ValidityCertificate {
        &self.certificate
    }

    /// Apply to a rational point; the image is in canonical coordinates.
    pub fn apply(&self, x: &ProjPointQ) -> Result<ProjPointQ> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point in P^{} fed to a map of P^{}",
                x.dim(),
                self.dim()
            )));
        }
        let coords: Vec<BigInt> = self.forms.iter().map(|f| f.eval(x.coords())).collect();
        ProjPointQ::from_integers(coords)
    }

    /// n-fold application, reducing to canonical coordinates at every step.
    pub fn iterate(&self, x: &ProjPointQ, n: u32) -> Result<ProjPointQ> {
        let mut y = x.clone();
        for _ in 0..n {
            y = self.apply(&y)?;
        }
        Ok(y)
    }

    /// Apply the reduction of the map to a point over a finite field.
    /// A zero image means the reduced forms degenerate at this point, which
    /// can only happen at primes dividing the certificate value.
    pub fn apply_f(&self, u: &ProjPointF) -> Result<ProjPointF> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "point in P^{} fed to a map of P^{}",
                u.dim(),
                self.dim()
            )));
        }
        let field = u.field();
        let coords: Vec<FqElem> = self
            .forms
            .iter()
            .map(|f| eval_form_fq(f, field, u.coords()))
            .collect();
        if coords.iter().all(|c| c.is_zero()) {
            return Err(Error::BadReduction { p: field.p() });
        }
        ProjPointF::new(field.clone(), coords)
    }

    /// Primes p <= bound at which the map has good reduction, i.e. p does
    /// not divide the certificate value.
    pub fn good_primes(&self, bound: u64) -> Vec<u64> {
        let value = self.certificate.value().magnitude().clone();
        primes_up_to(bound)
            .into_iter()
            .filter(|&p| !(&value % num_bigint::BigUint::from(p)).is_zero())
            .collect()
    }

    /// The composite self-map x -> self(inner(x)), revalidated.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.dim() != inner.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose maps of P^{} and P^{}",
                self.dim(),
                inner.dim()
            )));
        }
        let forms: Result<Vec<HomogeneousForm>> = self
            .forms
            .iter()
            .map(|f| f.compose(inner.forms()))
            .collect();
        ProjMorphism::new(forms?)
    }
}

/// Evaluate a form at a tuple of finite-field elements.
pub(crate) fn eval_form_fq(f: &HomogeneousForm, field: &FiniteField, coords: &[FqElem]) -> FqElem {
    let mut acc = field.zero();
    for (exps, coeff) in f.terms() {
        let mut term = field.reduce_int(coeff);
        if term.is_zero() {
            continue;
        }
        for (x, &e) in coords.iter().zip(exps.iter()) {
            if e > 0 {
                term = field.mul(&term, &field.pow(x, e as u64));
            }
        }
        acc = field.add(&acc, &term);
    }
    acc
}

/// Divide out the joint integer content and fix the sign so the leading
/// coefficient of the first nonzero form is positive.
fn normalize_scalar(forms: Vec<HomogeneousForm>) -> Vec<HomogeneousForm> {
    let mut content = BigInt::zero();
    for f in &forms {
        if !f.is_zero() {
            content = content.gcd(&f.content());
        }
    }
    let mut forms = if content > BigInt::one() {
        forms.iter().map(|f| f.divide_exact(&content)).collect()
    } else {
        forms
    };
    let leading_sign = forms
        .iter()
        .find(|f| !f.is_zero())
        .and_then(|f| f.terms().last().map(|(_, c)| c.is_negative()));
    if leading_sign == Some(true) {
        forms = forms.iter().map(|f| f.neg()).collect();
    }
    forms
}

/// A rational point where both binary forms vanish, if one exists.
fn common_rational_zero(
    f: &HomogeneousForm,
    g: &HomogeneousForm,
) -> Option<ProjPointQ> {
    if f.is_zero() && g.is_zero() {
        return ProjPointQ::from_i64(&[1, 0]).ok();
    }
    if f.is_zero() {
        return rational_projective_roots(g).into_iter().next();
    }
    if g.is_zero() {
        return rational_projective_roots(f).into_iter().next();
    }
    let of_g: std::collections::BTreeSet<ProjPointQ> =
        rational_projective_roots(g).into_iter().collect();
    rational_projective_roots(f)
        .into_iter()
        .find(|p| of_g.contains(p))
}

impl fmt::Display for ProjMorphism {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.forms.iter().map(|f| f.to_string()).collect();
        write!(out, "({})", parts.join(" : "))
    }
}

#[derive(Serialize, Deserialize)]
struct MorphismWire {
    dim: usize,
    degree: u32,
    forms: Vec<HomogeneousForm>,
}

impl Serialize for ProjMorphism {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MorphismWire {
            dim: self.dim(),
            degree: self.degree,
            forms: self.forms.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjMorphism {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = MorphismWire::deserialize(d)?;
        if wire.forms.len() != wire.dim + 1 {
            return Err(D::Error::custom(format!(
                "dim {} needs {} forms, got {}",
                wire.dim,
                wire.dim + 1,
                wire.forms.len()
            )));
        }
        let m = ProjMorphism::new(wire.forms)
            .map_err(|e| D::Error::custom(format!("invalid morphism: {e}")))?;
        if m.degree() != wire.degree {
            return Err(D::Error::custom(format!(
                "declared degree {} but forms have degree {}",
                wire.degree,
                m.degree()
            )));
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(terms: &[(&[u32], i64)], n: usize, degree: u32) -> HomogeneousForm {
        HomogeneousForm::from_terms_i64(n, degree, terms).unwrap()
    }

    pub(crate) fn squaring() -> ProjMorphism {
        ProjMorphism::new(vec![
            form(&[(&[2, 0], 1)], 2, 2),
            form(&[(&[0, 2], 1)], 2, 2),
        ])
        .unwrap()
    }

    pub(crate) fn square_minus_one() -> ProjMorphism {
        ProjMorphism::new(vec![
            form(&[(&[2, 0], 1), (&[0, 2], -1)], 2, 2),
            form(&[(&[0, 2], 1)], 2, 2),
        ])
        .unwrap()
    }

    fn pt(coords: &[i64]) -> ProjPointQ {
        ProjPointQ::from_i64(coords).unwrap()
    }

    #[test]
    fn squaring_map_validates_with_unit_resultant() {
        let f = squaring();
        assert_eq!(f.dim(), 1);
        assert_eq!(f.degree(), 2);
        assert_eq!(
            f.certificate(),
            &ValidityCertificate::Resultant { value: BigInt::one() }
        );
    }

    #[test]
    fn good_primes_drop_divisors_of_the_certificate() {
        assert_eq!(squaring().good_primes(10), vec![2, 3, 5, 7]);
        let g = ProjMorphism::new(vec![
            form(&[(&[2, 0], 2), (&[0, 2], 1)], 2, 2),
            form(&[(&[0, 2], 1)], 2, 2),
        ])
        .unwrap();
        assert_eq!(g.certificate().value(), &BigInt::from(4));
        assert_eq!(g.good_primes(10), vec![3, 5, 7]);
    }

    #[test]
    fn degenerate_pair_reports_a_rational_witness() {
        let err = ProjMorphism::new(vec![
            form(&[(&[1, 1], 1)], 2, 2),
            form(&[(&[0, 2], 1)], 2, 2),
        ])
        .unwrap_err();
        match err {
            Error::CommonZero { witness } => assert_eq!(witness, Some(pt(&[1, 0]))),
            other => panic!("expected CommonZero, got {other:?}"),
        }
    }

    #[test]
    fn shared_irrational_zero_has_no_witness() {
        // X^2-2Z^2 and its double share only the irrational zeros +-sqrt(2).
        let err = ProjMorphism::new(vec![
            form(&[(&[2, 0], 1), (&[0, 2], -2)], 2, 2),
            form(&[(&[2, 0], 2), (&[0, 2], -4)], 2, 2),
        ])
        .unwrap_err();
        match err {
            Error::CommonZero { witness } => assert_eq!(witness, None),
            other => panic!("expected CommonZero, got {other:?}"),
        }
    }

    #[test]
    fn shape_errors_are_reported() {
        assert!(matches!(
            ProjMorphism::new(vec![form(&[(&[2, 0], 1)], 2, 2)]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            ProjMorphism::new(vec![
                form(&[(&[2, 0], 1)], 2, 2),
                form(&[(&[0, 3], 1)], 2, 3),
            ]),
            Err(Error::DegreeMismatch(_))
        ));
        assert!(matches!(
            ProjMorphism::new(vec![
                form(&[(&[1, 0], 1)], 2, 1),
                form(&[(&[0, 1], 1)], 2, 1),
            ]),
            Err(Error::DegreeTooSmall)
        ));
    }

    #[test]
    fn common_scalar_is_normalized_away() {
        let doubled = ProjMorphism::new(vec![
            form(&[(&[2, 0], 2)], 2, 2),
            form(&[(&[0, 2], 2)], 2, 2),
        ])
        .unwrap();
        assert_eq!(doubled, squaring());
        let negated = ProjMorphism::new(vec![
            form(&[(&[2, 0], -1)], 2, 2),
            form(&[(&[0, 2], -1)], 2, 2),
        ])
        .unwrap();
        assert_eq!(negated, squaring());
    }

    #[test]
    fn apply_reduces_to_canonical_coordinates() {
        let f = squaring();
        assert_eq!(f.apply(&pt(&[2, 3])).unwrap(), pt(&[4, 9]));
        assert_eq!(f.apply(&pt(&[2, 2])).unwrap(), pt(&[1, 1]));
        let g = square_minus_one();
        // (2:3) -> (4-9 : 9) = (-5:9), canonically (5:-9).
        assert_eq!(g.apply(&pt(&[2, 3])).unwrap(), pt(&[-5, 9]));
        assert_eq!(g.apply(&pt(&[0, 1])).unwrap(), pt(&[-1, 1]));
    }

    #[test]
    fn iterate_composes_application() {
        let f = squaring();
        assert_eq!(f.iterate(&pt(&[2, 1]), 0).unwrap(), pt(&[2, 1]));
        assert_eq!(f.iterate(&pt(&[2, 1]), 3).unwrap(), pt(&[256, 1]));
    }

    #[test]
    fn dimension_mismatch_on_apply() {
        let f = squaring();
        let p2 = ProjPointQ::from_i64(&[1, 0, 0]).unwrap();
        assert!(matches!(
            f.apply(&p2),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn finite_field_application_matches_reduction() {
        let g = square_minus_one();
        let x = pt(&[2, 3]);
        let fx = g.apply(&x).unwrap(); // (-5:9) ~ (0:1) mod 5... check: -5 = 0, 9 = 4 -> (0:4) ~ (0:1)
        let lhs = crate::projective::reduce_mod_p(&fx, 5).unwrap();
        let rhs = g
            .apply_f(&crate::projective::reduce_mod_p(&x, 5).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn composition_multiplies_degrees() {
        let f = squaring();
        let f2 = f.compose(&f).unwrap();
        assert_eq!(f2.degree(), 4);
        assert_eq!(
            f2.forms()[0],
            form(&[(&[4, 0], 1)], 2, 4)
        );
        assert_eq!(
            f2.forms()[1],
            form(&[(&[0, 4], 1)], 2, 4)
        );
    }

    #[test]
    fn plane_squaring_certifies_by_rank() {
        let f = ProjMorphism::new(vec![
            form(&[(&[2, 0, 0], 1)], 3, 2),
            form(&[(&[0, 2, 0], 1)], 3, 2),
            form(&[(&[0, 0, 2], 1)], 3, 2),
        ])
        .unwrap();
        match f.certificate() {
            ValidityCertificate::MacaulayRank(cert) => {
                assert_eq!(cert.witness_degree, 4);
                assert_eq!(cert.rank, 15);
                assert!(cert.pivot_minor.abs().is_one());
            }
            other => panic!("expected rank certificate, got {other:?}"),
        }
        assert_eq!(f.good_primes(6), vec![2, 3, 5]);
    }

    #[test]
    fn plane_map_with_base_point_fails_to_certify() {
        // (X^2, XY, Z^2) all vanish at (0:1:0).
        let err = ProjMorphism::new(vec![
            form(&[(&[2, 0, 0], 1)], 3, 2),
            form(&[(&[1, 1, 0], 1)], 3, 2),
            form(&[(&[0, 0, 2], 1)], 3, 2),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::NoCertificate { max_degree: 6 }));
    }

    #[test]
    fn wire_format_is_stable() {
        let f = squaring();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(
            s,
            r#"{"dim":1,"degree":2,"forms":[[{"exps":[2,0],"coeff":"1"}],[{"exps":[0,2],"coeff":"1"}]]}"#
        );
        let back: ProjMorphism = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn deserialization_revalidates() {
        // Degenerate forms are rejected even if the shape fields look fine.
        let bad = r#"{"dim":1,"degree":2,"forms":[[{"exps":[1,1],"coeff":"1"}],[{"exps":[0,2],"coeff":"1"}]]}"#;
        assert!(serde_json::from_str::<ProjMorphism>(bad).is_err());
        // Declared degree must match the forms.
        let mismatched = r#"{"dim":1,"degree":3,"forms":[[{"exps":[2,0],"coeff":"1"}],[{"exps":[0,2],"coeff":"1"}]]}"#;
        assert!(serde_json::from_str::<ProjMorphism>(mismatched).is_err());
        // Non-primitive input normalizes to the canonical representative.
        let doubled = r#"{"dim":1,"degree":2,"forms":[[{"exps":[2,0],"coeff":"2"}],[{"exps":[0,2],"coeff":"2"}]]}"#;
        let m: ProjMorphism = serde_json::from_str(doubled).unwrap();
        assert_eq!(m, squaring());
    }

    #[test]
    fn display_reads_like_a_map() {
        assert_eq!(square_minus_one().to_string(), "(X^2 - Z^2 : Z^2)");
    }
}
