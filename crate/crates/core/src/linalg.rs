//! Exact row reduction over Q and Q(τ).

use num_traits::{One, Zero};

use crate::golden::{GoldenNumber, Rational};

/// The handful of field operations row reduction needs.
pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Only called on nonzero values.
    fn inv(&self) -> Self;
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl Field for GoldenNumber {
    fn zero() -> Self {
        GoldenNumber::zero()
    }
    fn one() -> Self {
        GoldenNumber::one()
    }
    fn is_zero(&self) -> bool {
        GoldenNumber::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Self {
        GoldenNumber::inv(self).expect("pivot is nonzero")
    }
}

/// Reduces `rows` in place to reduced row echelon form and returns the
/// pivot columns. Only the first `pivot_cols` columns are eligible as
/// pivots, so an augmented block to their right is carried along.
/// First-nonzero pivoting; arithmetic is exact.
pub fn rref<F: Field>(rows: &mut [Vec<F>], pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.sub(&factor.mul(p));
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right nullspace `{x : A·x = 0}` of a matrix with `cols`
/// columns, one vector per free column.
pub fn nullspace<F: Field>(matrix: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut rows = matrix.to_vec();
    let pivots = rref(&mut rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![F::zero(); cols];
            v[f] = F::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = F::zero().sub(&rows[r][f]);
            }
            v
        })
        .collect()
}

pub fn rank<F: Field>(matrix: &[Vec<F>], cols: usize) -> usize {
    let mut rows = matrix.to_vec();
    rref(&mut rows, cols).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(BigInt::from(n))
    }

    #[test]
    fn rank_and_nullspace_over_q() {
        let m = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(1), q(0), q(1)],
        ];
        assert_eq!(rank(&m, 3), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let dot = row.iter().zip(&ns[0]).fold(q(0), |acc, (a, b)| acc + a * b);
            assert!(Zero::is_zero(&dot));
        }
    }

    #[test]
    fn nullspace_over_golden_field() {
        // [[τ, −1], [1, 1 − τ]] has kernel spanned by (1, τ).
        let t = GoldenNumber::tau();
        let m = vec![
            vec![t.clone(), GoldenNumber::from(-1)],
            vec![GoldenNumber::one(), &GoldenNumber::one() - &t],
        ];
        let ns = nullspace(&m, 2);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert_eq!(&v[1] * &v[0].inv().unwrap(), t);
    }

    #[test]
    fn full_rank_has_trivial_kernel() {
        let m = vec![vec![q(1), q(1)], vec![q(0), q(1)]];
        assert!(nullspace(&m, 2).is_empty());
    }
}
