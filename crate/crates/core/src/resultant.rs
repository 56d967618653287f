//! Resultants of binary forms via the Sylvester matrix.
//!
//! For forms F = sum a_k X^k Z^(dA-k) and G = sum b_k X^k Z^(dB-k) the
//! Sylvester matrix is the (dA+dB) x (dA+dB) matrix whose first dB rows hold
//! the coefficients of F (leading coefficient first, shifted right one step
//! per row) and whose remaining dA rows hold the coefficients of G likewise.
//! Its determinant is the resultant: zero exactly when F and G share a
//! projective zero over the algebraic closure.

use crate::forms::HomogeneousForm;
use crate::linalg::{self, IntMatrix};
use num_bigint::BigInt;
use num_traits::Zero;

/// The Sylvester matrix of two binary forms in the classical arrangement.
pub fn sylvester_matrix(f: &HomogeneousForm, g: &HomogeneousForm) -> IntMatrix {
    assert_eq!(f.n_vars(), 2, "sylvester matrix needs binary forms");
    assert_eq!(g.n_vars(), 2, "sylvester matrix needs binary forms");
    let da = f.degree() as usize;
    let db = g.degree() as usize;
    let n = da + db;
    // Coefficients leading-first: desc[i] is the X^(d-i) Z^i coefficient.
    let desc = |h: &HomogeneousForm| -> Vec<BigInt> {
        let mut c = h.to_univariate();
        c.reverse();
        c
    };
    let fa = desc(f);
    let fb = desc(g);
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for j in 0..db {
        for (t, c) in fa.iter().enumerate() {
            m[j][j + t] = c.clone();
        }
    }
    for j in 0..da {
        for (t, c) in fb.iter().enumerate() {
            m[db + j][j + t] = c.clone();
        }
    }
    m
}

/// The resultant of two binary forms.  Zero iff they share a common
/// projective zero (over the algebraic closure); for a degree-d self-map of
/// the projective line this is exactly the validity obstruction.
pub fn resultant(f: &HomogeneousForm, g: &HomogeneousForm) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    linalg::det(&sylvester_matrix(f, g))
}
