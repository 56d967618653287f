//! Fraction-free Gaussian elimination (Bareiss) over arbitrary-precision
//! integers: exact determinants, ranks, and scaled linear solves.
//!
//! The elimination keeps every intermediate entry an integer (each is a
//! minor of the input matrix, by Sylvester's determinant identity), so there
//! is no rounding anywhere.  `Echelon` additionally tracks the row-transform
//! matrix, which turns one O(n^3) elimination into O(n^2) solves for many
//! right-hand sides.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Result of fraction-free elimination with full pivoting (row swaps plus
/// column swaps restricted to the coefficient block).
pub struct Echelon {
    rows: usize,
    cols: usize,
    /// Eliminated coefficient block, in the permuted frame.
    u: IntMatrix,
    /// Row transform: t * a * p = u, where p is the column permutation.
    t: IntMatrix,
    /// Position -> original column index.
    col_perm: Vec<usize>,
    rank: usize,
    /// Sign of the combined row/column permutation.
    sign: i8,
}

impl Echelon {
    pub fn reduce(a: &IntMatrix) -> Echelon {
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let mut u = a.clone();
        let mut t: IntMatrix = (0..rows)
            .map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let mut col_perm: Vec<usize> = (0..cols).collect();
        let mut sign: i8 = 1;
        let mut prev = BigInt::one();
        let mut rank = 0;
        for step in 0..rows.min(cols) {
            // Deterministic pivot scan: leftmost column with a nonzero entry
            // at or below the current step, earliest such row.
            let mut pivot: Option<(usize, usize)> = None;
            'scan: for j in step..cols {
                for i in step..rows {
                    if !u[i][j].is_zero() {
                        pivot = Some((i, j));
                        break 'scan;
                    }
                }
            }
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => break,
            };
            if pi != step {
                u.swap(pi, step);
                t.swap(pi, step);
                sign = -sign;
            }
            if pj != step {
                for row in u.iter_mut() {
                    row.swap(pj, step);
                }
                col_perm.swap(pj, step);
                sign = -sign;
            }
            let pivot_val = u[step][step].clone();
            for i in (step + 1)..rows {
                let factor = std::mem::replace(&mut u[i][step], BigInt::zero());
                for j in (step + 1)..cols {
                    let num = &pivot_val * &u[i][j] - &factor * &u[step][j];
                    u[i][j] = exact_div(num, &prev);
                }
                for j in 0..rows {
                    let num = &pivot_val * &t[i][j] - &factor * &t[step][j];
                    t[i][j] = exact_div(num, &prev);
                }
            }
            prev = pivot_val;
            rank += 1;
        }
        Echelon { rows, cols, u, t, col_perm, rank, sign }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The last pivot: up to sign, the determinant of the maximal nonsingular
    /// submatrix selected by the pivoting (rank x rank).  Zero matrix -> 1
    /// never occurs in this crate's call sites (rank >= 1 is always checked).
    pub fn pivot_minor(&self) -> BigInt {
        if self.rank == 0 {
            BigInt::zero()
        } else {
            self.u[self.rank - 1][self.rank - 1].clone()
        }
    }

    /// Determinant of a square input; zero when rank-deficient.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rank < self.rows {
            return BigInt::zero();
        }
        let m = self.pivot_minor();
        if self.sign < 0 {
            -m
        } else {
            m
        }
    }

    /// For a full-row-rank matrix a, return (g, delta) with a * g = delta * b
    /// and delta the pivot minor (nonzero).  The solution is supported on the
    /// pivot columns and is integral by Cramer's rule.
    pub fn solve_scaled(&self, b: &[BigInt]) -> Option<(Vec<BigInt>, BigInt)> {
        if self.rank != self.rows {
            return None;
        }
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let delta = self.pivot_minor();
        // Transformed right-hand side c = t * b.
        let c: Vec<BigInt> = self
            .t
            .iter()
            .map(|row| row.iter().zip(b).map(|(t, bj)| t * bj).sum())
            .collect();
        // Back-substitute u_sq * x = delta * c over the pivot columns.
        let n = self.rank;
        let mut x = vec![BigRational::zero(); n];
        for k in (0..n).rev() {
            let mut acc = BigRational::from(&delta * &c[k]);
            for j in (k + 1)..n {
                acc -= BigRational::from(self.u[k][j].clone()) * &x[j];
            }
            x[k] = acc / BigRational::from(self.u[k][k].clone());
        }
        let mut g = vec![BigInt::zero(); self.cols];
        for (k, xi) in x.into_iter().enumerate() {
            if !xi.denom().is_one() {
                // Cannot happen (Cramer integrality); guard anyway.
                return None;
            }
            g[self.col_perm[k]] = xi.numer().clone();
        }
        Some((g, delta))
    }
}

fn exact_div(num: BigInt, den: &BigInt) -> BigInt {
    debug_assert!(!den.is_zero());
    let (q, r) = num_integer::Integer::div_rem(&num, den);
    debug_assert!(r.is_zero(), "fraction-free elimination produced a fraction");
    q
}

/// Determinant via Bareiss elimination.
pub fn det(a: &IntMatrix) -> BigInt {
    Echelon::reduce(a).det()
}

/// Rank via Bareiss elimination.
pub fn rank(a: &IntMatrix) -> usize {
    Echelon::reduce(a).rank()
}

pub fn from_i64(rows: &[&[i64]]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cofactor expansion along the first row: the independent oracle.
    fn naive_det(a: &IntMatrix) -> BigInt {
        let n = a.len();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return a[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if a[0][j].is_zero() {
                continue;
            }
            let minor: IntMatrix = a[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, c)| c.clone())
                        .collect()
                })
                .collect();
            let term = &a[0][j] * naive_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn determinants_match_cofactor_oracle() {
        let cases: Vec<IntMatrix> = vec![
            from_i64(&[&[5]]),
            from_i64(&[&[1, 2], &[3, 4]]),
            from_i64(&[&[2, 0, 1], &[-1, 3, 2], &[4, 1, -2]]),
            from_i64(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[1, 0, 0, 0], &[0, 0, 0, 1]]),
            from_i64(&[&[3, 1, 4, 1], &[5, 9, 2, 6], &[5, 3, 5, 8], &[9, 7, 9, 3]]),
            from_i64(&[&[0, 0], &[0, 0]]),
        ];
        for a in &cases {
            assert_eq!(det(a), naive_det(a), "matrix {a:?}");
        }
    }

    #[test]
    fn determinants_match_oracle_on_pseudorandom_matrices() {
        // Small deterministic LCG so the test needs no external RNG.
        let mut state: u64 = 0x9e3779b97f4a7c15;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) as i64 % 19) - 9
        };
        for n in 1..=5usize {
            for _ in 0..20 {
                let a: IntMatrix = (0..n)
                    .map(|_| (0..n).map(|_| BigInt::from(next())).collect())
                    .collect();
                assert_eq!(det(&a), naive_det(&a));
            }
        }
    }

    #[test]
    fn rank_detects_dependent_rows() {
        let a = from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(rank(&a), 2);
        let b = from_i64(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(rank(&b), 2);
    }

    #[test]
    fn solve_scaled_produces_exact_identities() {
        // Full row rank, more columns than rows.
        let a = from_i64(&[&[2, 1, 0, 3], &[0, 1, 4, 1], &[1, 0, 2, 2]]);
        let e = Echelon::reduce(&a);
        assert_eq!(e.rank(), 3);
        for b in [
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(5), BigInt::from(-2)],
            vec![BigInt::from(7), BigInt::from(7), BigInt::from(7)],
        ] {
            let (g, delta) = e.solve_scaled(&b).unwrap();
            assert!(!delta.is_zero());
            for (i, row) in a.iter().enumerate() {
                let lhs: BigInt = row.iter().zip(&g).map(|(c, gj)| c * gj).sum();
                assert_eq!(lhs, &delta * &b[i], "row {i}");
            }
        }
    }

    #[test]
    fn solve_scaled_refuses_rank_deficient_systems() {
        let a = from_i64(&[&[1, 2], &[2, 4]]);
        let e = Echelon::reduce(&a);
        assert!(e.solve_scaled(&[BigInt::one(), BigInt::zero()]).is_none());
    }

    #[test]
    fn permutation_sign_is_tracked() {
        // A permutation matrix with negative sign.
        let a = from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(det(&a), BigInt::from(-1));
    }
}
