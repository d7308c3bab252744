//! Gaussian elimination over an exact field with deterministic pivoting.

use super::field::FieldOps;

pub type Matrix<E> = Vec<Vec<E>>;

/// Reduced row echelon form in place; returns pivot columns.
///
/// The pivot in each column is the first row (from the current one down) with a nonzero entry.
pub fn rref<F: FieldOps>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, p);
        let inv_lead = m[r][c].clone();
        for j in c..cols {
            m[r][j] = f.div(&m[r][j], &inv_lead);
        }
        for i in 0..rows {
            if i != r && !f.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in c..cols {
                    let t = f.mul(&factor, &m[r][j]);
                    m[i][j] = f.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: FieldOps>(f: &F, m: &Matrix<F::Elem>) -> usize {
    let mut work = m.clone();
    rref(f, &mut work).len()
}

/// Kernel basis: one vector per free column, with that free variable set to 1 and the others to 0.
pub fn kernel<F: FieldOps>(f: &F, m: &Matrix<F::Elem>, cols: usize) -> Vec<Vec<F::Elem>> {
    let mut work = m.clone();
    let pivots = rref(f, &mut work);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![f.zero(); cols];
        v[free] = f.one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(&work[row][free]);
        }
        basis.push(v);
    }
    basis
}

/// A solution of `m·x = b` with free variables set to 0, if the system is consistent.
pub fn solve<F: FieldOps>(f: &F, m: &Matrix<F::Elem>, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix<F::Elem> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(f, &mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![f.zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols].clone();
    }
    Some(x)
}

pub fn mat_vec<F: FieldOps>(f: &F, m: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{NumberField, Rationals};
    use crate::algebra::poly::IntPolynomial;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn fibonacci_eigenvector() {
        let k = NumberField::new(IntPolynomial::from_i64(&[-1, -1, 1])).unwrap();
        let l = k.lambda();
        let m = vec![
            vec![k.one().sub(&l), k.one()],
            vec![k.one(), l.neg()],
        ];
        let ker = kernel(&k, &m, 2);
        assert_eq!(ker, vec![vec![l.clone(), k.one()]]);
        assert!(mat_vec(&k, &m, &ker[0]).iter().all(|e| e.is_zero()));
    }

    #[test]
    fn trivial_kernels() {
        let id = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
        assert!(kernel(&Rationals, &id, 2).is_empty());
        let zero = vec![vec![q(0), q(0)], vec![q(0), q(0)]];
        assert_eq!(kernel(&Rationals, &zero, 2).len(), 2);
        assert_eq!(rank(&Rationals, &zero), 0);
    }

    #[test]
    fn solving() {
        let m = vec![vec![q(1), q(1)], vec![q(1), q(-1)], vec![q(2), q(0)]];
        let x = solve(&Rationals, &m, &[q(3), q(1), q(4)]).unwrap();
        assert_eq!(x, vec![q(2), q(1)]);
        assert!(solve(&Rationals, &m, &[q(3), q(1), q(5)]).is_none());
    }
}
