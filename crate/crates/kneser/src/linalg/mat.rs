//! Dense matrix helpers: exact kernels by Gaussian elimination over any
//! [`Scalar`] field, and arbitrary-precision integer matrix arithmetic used
//! when evaluating polynomials at a Hecke operator.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::scalar::Scalar;

/// Basis of the right kernel {v : Av = 0}, computed by reduced row echelon
/// form. Each basis vector has a 1 in its free column and zeros in the free
/// columns of the other vectors, so the result is deterministic.
pub fn kernel<T: Scalar>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    let rows = a.len();
    let cols = if rows == 0 { return Vec::new() } else { a[0].len() };
    let mut m: Vec<Vec<T>> = a.to_vec();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        // find pivot
        let zero = T::zero();
        let Some(pr) = (r..rows).find(|&i| m[i][c] != zero) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].inv();
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows {
            if i != r && m[i][c] != zero {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let s = f.mul(&m[r][k]);
                    m[i][k] = m[i][k].sub(&s);
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for &fc in &free_cols {
        let mut v = vec![T::zero(); cols];
        v[fc] = T::one();
        for (ri, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = T::zero().sub(&m[ri][fc]);
        }
        basis.push(v);
    }
    basis
}

/// i64 matrix product with i128 accumulation, checked back into i64.
pub fn int_mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let inner = b.len();
    let m = if inner == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let acc: i128 = (0..inner).map(|k| a[i][k] as i128 * b[k][j] as i128).sum();
                    i64::try_from(acc).expect("matrix product overflows i64")
                })
                .collect()
        })
        .collect()
}

pub fn int_to_big(a: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn big_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn big_mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let inner = b.len();
    let m = if inner == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..inner).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec_big(a: &[Vec<BigInt>], v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v.iter()).map(|(x, y)| x * y).sum())
        .collect()
}

/// p(T) for an integer matrix T and integer polynomial p (ascending), by
/// Horner's rule.
pub fn big_poly_eval(p: &[BigInt], t: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    let n = t.len();
    let tb = int_to_big(t);
    let mut acc = vec![vec![BigInt::zero(); n]; n];
    for c in p.iter().rev() {
        acc = big_mat_mul(&acc, &tb);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    acc
}

pub fn transpose<T: Clone>(a: &[Vec<T>]) -> Vec<Vec<T>> {
    if a.is_empty() {
        return Vec::new();
    }
    let cols = a[0].len();
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}
