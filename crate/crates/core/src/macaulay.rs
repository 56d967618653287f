//! Elimination certificates for tuples of homogeneous forms.
//!
//! For forms f_0..f_k of common degree d in n variables and a working degree
//! D >= d, the elimination matrix has one row per degree-D monomial and one
//! column per pair (i, m) with m a monomial of degree D-d; the column holds
//! the coefficients of m*f_i.  Full row rank proves that every degree-D
//! monomial, scaled by a fixed nonzero integer, lies in the ideal generated
//! by the forms — in particular the forms have no common projective zero
//! over any field where the certifying minor stays nonzero.
//!
//! The same elimination, with the transform recorded, yields explicit
//! identities sum_i g_i f_i = delta * x_j^D with integer multiplier forms;
//! these drive the height comparison bounds.  For two binary forms the
//! construction at D = 2d-1 is square and its determinant is (up to sign)
//! the Sylvester resultant.

use crate::error::{Error, Result};
use crate::forms::{monomials, HomogeneousForm};
use crate::linalg::{Echelon, IntMatrix};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::HashMap;

/// Witness that the elimination matrix at `witness_degree` has full row
/// rank, with a nonzero minor certifying it (reductions mod p stay full
/// rank whenever p does not divide the minor).
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct RankCertificate {
    pub witness_degree: u32,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    #[serde(with = "crate::wire::bigint")]
    pub pivot_minor: BigInt,
}

/// An exact identity sum_i multipliers[i] * f_i = scale * x^target
/// with scale a positive integer.
#[derive(Debug, Clone)]
pub struct FormIdentity {
    pub multipliers: Vec<HomogeneousForm>,
    pub scale: BigInt,
    pub target: Vec<u32>,
}

/// The smallest working degree at which full row rank is guaranteed for
/// every tuple of degree-d forms without common projective zeros:
/// n_vars*(d-1) + 1.
pub fn sufficient_degree(n_vars: usize, degree: u32) -> u32 {
    (n_vars as u32) * degree.saturating_sub(1) + 1
}

/// The elimination matrix together with its row monomials (degree `working`)
/// and column labels (form index, shift monomial of degree `working` - d).
pub fn elimination_matrix(
    forms: &[HomogeneousForm],
    working: u32,
) -> (IntMatrix, Vec<Vec<u32>>, Vec<(usize, Vec<u32>)>) {
    assert!(!forms.is_empty());
    let n_vars = forms[0].n_vars();
    let degree = forms[0].degree();
    for f in forms {
        assert_eq!(f.n_vars(), n_vars, "mixed variable counts");
        assert_eq!(f.degree(), degree, "mixed degrees");
    }
    assert!(working >= degree, "working degree below form degree");

    let row_monos = monomials(n_vars, working);
    let row_index: HashMap<&[u32], usize> = row_monos
        .iter()
        .enumerate()
        .map(|(i, m)| (m.as_slice(), i))
        .collect();
    let shifts = monomials(n_vars, working - degree);
    let mut cols: Vec<(usize, Vec<u32>)> = Vec::with_capacity(forms.len() * shifts.len());
    for i in 0..forms.len() {
        for s in &shifts {
            cols.push((i, s.clone()));
        }
    }

    let mut m = vec![vec![BigInt::zero(); cols.len()]; row_monos.len()];
    for (c, (i, shift)) in cols.iter().enumerate() {
        for (exps, coeff) in forms[*i].terms() {
            let total: Vec<u32> = exps.iter().zip(shift.iter()).map(|(a, b)| a + b).collect();
            let r = row_index[total.as_slice()];
            m[r][c] = coeff.clone();
        }
    }
    (m, row_monos, cols)
}

/// Try to certify full row rank at the given working degree.
pub fn full_rank_certificate(forms: &[HomogeneousForm], working: u32) -> Option<RankCertificate> {
    let (m, row_monos, cols) = elimination_matrix(forms, working);
    let ech = Echelon::reduce(&m);
    if ech.rank() == row_monos.len() {
        Some(RankCertificate {
            witness_degree: working,
            rank: ech.rank(),
            rows: row_monos.len(),
            cols: cols.len(),
            pivot_minor: ech.pivot_minor(),
        })
    } else {
        None
    }
}

/// Explicit identities sum_i g_i f_i = scale * x_j^working, one per
/// variable, extracted from a single elimination pass.  Fails with
/// `NoCertificate` when the matrix is rank deficient at this degree.
pub fn elimination_identities(
    forms: &[HomogeneousForm],
    working: u32,
) -> Result<Vec<FormIdentity>> {
    let (m, row_monos, cols) = elimination_matrix(forms, working);
    let n_vars = forms[0].n_vars();
    let ech = Echelon::reduce(&m);
    let mut out = Vec::with_capacity(n_vars);
    for j in 0..n_vars {
        let mut target = vec![0u32; n_vars];
        target[j] = working;
        let row = row_monos
            .iter()
            .position(|mono| *mono == target)
            .expect("pure power is a degree-D monomial");
        let mut rhs = vec![BigInt::zero(); row_monos.len()];
        rhs[row] = BigInt::from(1);
        let (g, scale) = ech
            .solve_scaled(&rhs)
            .ok_or(Error::NoCertificate { max_degree: working })?;

        let shift_degree = working - forms[0].degree();
        let mut multipliers = vec![HomogeneousForm::zero(n_vars, shift_degree); forms.len()];
        for (c, (i, shift)) in cols.iter().enumerate() {
            if !g[c].is_zero() {
                let term = HomogeneousForm::monomial(shift.clone(), g[c].clone());
                multipliers[*i] = multipliers[*i].add(&term).expect("matching shapes");
            }
        }
        let (multipliers, scale) = if scale.is_negative() {
            (
                multipliers.iter().map(|h| h.neg()).collect::<Vec<_>>(),
                -scale,
            )
        } else {
            (multipliers, scale)
        };
        // Reduce to primitive form: the raw scale is a determinant of the
        // pivot block, often sharing a factor with every multiplier.
        let mut common = scale.clone();
        for h in &multipliers {
            if !h.is_zero() {
                common = num_integer::Integer::gcd(&common, &h.content());
            }
        }
        let (multipliers, scale) = if common > BigInt::from(1) {
            (
                multipliers
                    .iter()
                    .map(|h| h.divide_exact(&common))
                    .collect::<Vec<_>>(),
                &scale / &common,
            )
        } else {
            (multipliers, scale)
        };

        // Re-derive the combination symbolically; any disagreement means a
        // solver bug, not bad input, so it is a hard error.
        let mut combo = HomogeneousForm::zero(n_vars, working);
        for (gi, fi) in multipliers.iter().zip(forms.iter()) {
            combo = combo.add(&gi.mul(fi)?)?;
        }
        let want = HomogeneousForm::monomial(target.clone(), scale.clone());
        if combo != want {
            return Err(Error::OracleMismatch(format!(
                "elimination identity for x_{j}^{working} failed symbolic re-check"
            )));
        }
        out.push(FormIdentity {
            multipliers,
            scale,
            target,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::monomial_count;

    fn form(terms: &[(&[u32], i64)], n: usize, degree: u32) -> HomogeneousForm {
        HomogeneousForm::from_terms_i64(n, degree, terms).unwrap()
    }

    #[test]
    fn matrix_shape_matches_monomial_counts() {
        let f = form(&[(&[2, 0], 1)], 2, 2);
        let g = form(&[(&[0, 2], 1)], 2, 2);
        let (m, rows, cols) = elimination_matrix(&[f, g], 3);
        assert_eq!(rows.len(), monomial_count(2, 3));
        assert_eq!(rows.len(), 4);
        assert_eq!(cols.len(), 2 * monomial_count(2, 1));
        assert_eq!(m.len(), 4);
        assert_eq!(m[0].len(), 4);
    }

    #[test]
    fn sufficient_degree_formula() {
        assert_eq!(sufficient_degree(2, 2), 3); // binary quadratics: 2d-1
        assert_eq!(sufficient_degree(2, 3), 5);
        assert_eq!(sufficient_degree(3, 2), 4);
        assert_eq!(sufficient_degree(3, 4), 10);
    }

    #[test]
    fn squaring_map_certifies_with_unit_minor() {
        let f = form(&[(&[2, 0], 1)], 2, 2);
        let g = form(&[(&[0, 2], 1)], 2, 2);
        let cert = full_rank_certificate(&[f, g], 3).unwrap();
        assert_eq!(cert.rank, 4);
        assert_eq!(cert.rows, 4);
        use num_traits::One;
        assert!(cert.pivot_minor.abs().is_one());
    }

    #[test]
    fn common_zero_blocks_the_certificate() {
        // XZ and Z^2 share the zero (1:0).
        let f = form(&[(&[1, 1], 1)], 2, 2);
        let g = form(&[(&[0, 2], 1)], 2, 2);
        assert!(full_rank_certificate(&[f.clone(), g.clone()], 3).is_none());
        assert!(matches!(
            elimination_identities(&[f, g], 3),
            Err(Error::NoCertificate { max_degree: 3 })
        ));
    }

    #[test]
    fn squaring_identities_are_the_obvious_ones() {
        let f = form(&[(&[2, 0], 1)], 2, 2);
        let g = form(&[(&[0, 2], 1)], 2, 2);
        let ids = elimination_identities(&[f, g], 3).unwrap();
        assert_eq!(ids.len(), 2);
        // X * X^2 = X^3
        assert_eq!(ids[0].scale, BigInt::from(1));
        assert_eq!(ids[0].target, vec![3, 0]);
        assert_eq!(ids[0].multipliers[0], form(&[(&[1, 0], 1)], 2, 1));
        assert!(ids[0].multipliers[1].is_zero());
        // Z * Z^2 = Z^3
        assert_eq!(ids[1].scale, BigInt::from(1));
        assert_eq!(ids[1].target, vec![0, 3]);
        assert!(ids[1].multipliers[0].is_zero());
        assert_eq!(ids[1].multipliers[1], form(&[(&[0, 1], 1)], 2, 1));
    }

    #[test]
    fn square_minus_one_identity_matches_hand_computation() {
        // X*(X^2 - Z^2) + X*Z^2 = X^3, and the system is square so the
        // solution is unique.
        let f = form(&[(&[2, 0], 1), (&[0, 2], -1)], 2, 2);
        let g = form(&[(&[0, 2], 1)], 2, 2);
        let ids = elimination_identities(&[f, g], 3).unwrap();
        assert_eq!(ids[0].scale, BigInt::from(1));
        assert_eq!(ids[0].multipliers[0], form(&[(&[1, 0], 1)], 2, 1));
        assert_eq!(ids[0].multipliers[1], form(&[(&[1, 0], 1)], 2, 1));
    }

    #[test]
    fn three_variable_squares_certify_at_degree_four() {
        let f = form(&[(&[2, 0, 0], 1)], 3, 2);
        let g = form(&[(&[0, 2, 0], 1)], 3, 2);
        let h = form(&[(&[0, 0, 2], 1)], 3, 2);
        let forms = [f, g, h];
        let cert = full_rank_certificate(&forms, 4).unwrap();
        assert_eq!(cert.rows, 15);
        assert_eq!(cert.cols, 18);
        let ids = elimination_identities(&forms, 4).unwrap();
        for (j, id) in ids.iter().enumerate() {
            let mut target = vec![0u32; 3];
            target[j] = 4;
            assert_eq!(id.target, target);
            assert!(id.scale > BigInt::zero());
        }
    }

    #[test]
    fn doubled_coefficient_scales_the_identity() {
        // 2X^2 + Z^2 and Z^2: the X^3 identity needs scale 2:
        // X*(2X^2+Z^2) - X*Z^2 = 2X^3, and the primitive reduction strips
        // the shared factor the raw pivot determinant would carry.
        let f = form(&[(&[2, 0], 2), (&[0, 2], 1)], 2, 2);
        let g = form(&[(&[0, 2], 1)], 2, 2);
        let ids = elimination_identities(&[f, g], 3).unwrap();
        assert_eq!(ids[0].scale, BigInt::from(2));
        assert_eq!(ids[0].multipliers[0], form(&[(&[1, 0], 1)], 2, 1));
        assert_eq!(ids[0].multipliers[1], form(&[(&[1, 0], -1)], 2, 1));
        // Z-side stays unit: Z*Z^2 = Z^3.
        assert_eq!(ids[1].scale, BigInt::from(1));
    }
}
