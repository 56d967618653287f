//! Rational projective roots of binary forms, via divisor enumeration of the
//! leading and trailing coefficients of the primitive part.
//!
//! Every candidate is verified by exact evaluation, so the factorization
//! backend only influences completeness of the candidate list, never
//! correctness of an accepted root; and the divisor lists themselves are
//! complete because `factor::factorize` is exact.

use crate::factor::divisors;
use crate::forms::HomogeneousForm;
use crate::projective::ProjPointQ;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

/// All points of P^1(Q) where the (nonzero) binary form vanishes, each once,
/// sorted by (denominator, numerator) of the affine value with the point at
/// infinity first.  Multiplicities are not reported.
pub fn rational_projective_roots(f: &HomogeneousForm) -> Vec<ProjPointQ> {
    assert_eq!(f.n_vars(), 2, "roots of a binary form");
    assert!(!f.is_zero(), "roots of the zero form are everything");
    let coeffs = f.to_univariate(); // c_k = coefficient of X^k Z^(d-k)
    let d = f.degree() as usize;
    let mut found: BTreeSet<ProjPointQ> = BTreeSet::new();

    // Root at infinity (1 : 0) iff the X^d coefficient vanishes.
    if coeffs[d].is_zero() {
        found.insert(ProjPointQ::from_i64(&[1, 0]).unwrap());
    }
    // Root at zero (0 : 1) iff the Z^d coefficient vanishes.
    if coeffs[0].is_zero() {
        found.insert(ProjPointQ::from_i64(&[0, 1]).unwrap());
    }

    let lo = coeffs.iter().position(|c| !c.is_zero());
    let hi = coeffs.iter().rposition(|c| !c.is_zero());
    if let (Some(lo), Some(hi)) = (lo, hi) {
        if hi > lo {
            // Nonzero affine roots u/v of the stripped polynomial:
            // u divides the trailing coefficient, v the leading one.
            let trailing = coeffs[lo].abs().to_biguint().unwrap();
            let leading = coeffs[hi].abs().to_biguint().unwrap();
            let numerators = divisors(&trailing);
            let denominators = divisors(&leading);
            for u in &numerators {
                let u = BigInt::from(u.clone());
                for v in &denominators {
                    let v = BigInt::from(v.clone());
                    if !num_traits::One::is_one(&num_integer::Integer::gcd(&u, &v)) {
                        continue;
                    }
                    for sign in [1i64, -1] {
                        let vv = &v * BigInt::from(sign);
                        if f.eval(&[u.clone(), vv.clone()]).is_zero() {
                            found.insert(ProjPointQ::from_integers(vec![u.clone(), vv]).unwrap());
                        }
                    }
                }
            }
        }
    }

    let mut out: Vec<ProjPointQ> = found.into_iter().collect();
    out.sort_by_key(|p| {
        let (num, den) = p.affine_key();
        (den, num)
    });
    out
}
