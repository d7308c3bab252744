//! Characteristic polynomials of integer matrices.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::IntPolynomial;
use crate::matrix::IntegerMatrix;

/// `det(xI - M)` by the Faddeev–LeVerrier recurrence; every division is exact over ℤ.
pub fn char_poly(m: &IntegerMatrix) -> IntPolynomial {
    let n = m.size();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = IntegerMatrix::zeros(n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = m.mul(&mk);
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        mk = next;
        let t = m.mul(&mk).trace();
        coeffs[n - k] = -t / BigInt::from(k);
    }
    IntPolynomial::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(rows: &[Vec<i64>]) -> IntPolynomial {
        char_poly(&IntegerMatrix::from_rows(rows))
    }

    #[test]
    fn small_matrices() {
        assert_eq!(cp(&[vec![1, 1], vec![1, 0]]), IntPolynomial::from_i64(&[-1, -1, 1]));
        assert_eq!(cp(&[vec![6, 3], vec![6, 3]]), IntPolynomial::from_i64(&[0, -9, 1]));
        assert_eq!(cp(&[vec![9, 6], vec![6, 3]]), IntPolynomial::from_i64(&[-9, -12, 1]));
        assert_eq!(
            cp(&[vec![1, 1, 1], vec![1, 0, 0], vec![0, 1, 0]]),
            IntPolynomial::from_i64(&[-1, -1, -1, 1])
        );
    }

    #[test]
    fn agrees_with_cofactor_expansion() {
        let m = vec![vec![2, -1, 0, 3], vec![1, 4, 2, 0], vec![0, 5, -2, 1], vec![7, 0, 1, 1]];
        let p = cp(&m);
        // p(t) = det(tI - M) checked at several integer points
        for t in -3i64..=3 {
            let rows: Vec<Vec<i64>> = (0..4)
                .map(|i| (0..4).map(|j| if i == j { t - m[i][j] } else { -m[i][j] }).collect())
                .collect();
            assert_eq!(p.eval_int(&BigInt::from(t)), BigInt::from(det(&rows)));
        }
    }

    fn det(m: &[Vec<i64>]) -> i64 {
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det(&minor)
            })
            .sum()
    }
}
