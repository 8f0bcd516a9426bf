//! Characteristic polynomials of integer matrices, computed modulo a batch
//! of 31-bit primes via Hessenberg reduction and recombined by CRT. Exact
//! for any i64 matrix: the prime batch is sized from a Hadamard-style bound
//! on the coefficients.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Monic characteristic polynomial det(xI − A), ascending coefficients,
/// length n+1.
pub fn char_poly(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "char_poly needs a square matrix");
    if n == 0 {
        return vec![BigInt::one()];
    }
    let max_abs = a
        .iter()
        .flatten()
        .map(|&x| x.unsigned_abs())
        .max()
        .unwrap_or(0)
        .max(1);
    // |c_k| ≤ C(n,k)·(√n·max)ⁿ ≤ 2ⁿ·(n·max)ⁿ; bits with headroom:
    let bits_needed = (n as f64) * (1.0 + ((n as f64) * (max_abs as f64 + 1.0)).log2()) + 16.0;
    let primes = prime_batch((bits_needed / 30.0).ceil() as usize + 1);

    // CRT accumulation per coefficient
    let mut modulus = BigInt::one();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for &p in &primes {
        let cp = char_poly_mod(a, p);
        if modulus.is_one() {
            for (c, v) in coeffs.iter_mut().zip(cp.iter()) {
                *c = BigInt::from(*v);
            }
            modulus = BigInt::from(p);
            continue;
        }
        // combine: find x ≡ coeffs (mod modulus), x ≡ cp (mod p)
        let m_mod_p = (&modulus % BigInt::from(p)).to_u64_digits().1;
        let m_mod_p = if m_mod_p.is_empty() { 0 } else { m_mod_p[0] };
        let m_inv = mod_inv(m_mod_p % p, p);
        for (c, &v) in coeffs.iter_mut().zip(cp.iter()) {
            let c_mod_p = {
                let r = (&*c % BigInt::from(p) + BigInt::from(p)) % BigInt::from(p);
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            };
            let diff = (v + p - c_mod_p % p) % p;
            let t = mul_mod(diff, m_inv, p);
            *c += &modulus * BigInt::from(t);
        }
        modulus *= BigInt::from(p);
    }
    // symmetric range
    let half = &modulus >> 1;
    for c in coeffs.iter_mut() {
        if &*c > &half {
            *c -= &modulus;
        }
    }
    debug_assert!(coeffs[n].is_one(), "characteristic polynomial not monic");
    coeffs
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    // p < 2^31, so the product fits in u64
    a % p * (b % p) % p
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

fn mod_inv(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// The first `count` primes just below 2^31, descending.
fn prime_batch(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut candidate = (1u64 << 31) - 1;
    while out.len() < count {
        if crate::numbers::primes::is_prime(candidate) {
            out.push(candidate);
        }
        candidate -= 2;
    }
    out
}

/// char poly mod p by Hessenberg reduction (similarity transforms only).
fn char_poly_mod(a: &[Vec<i64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a
        .iter()
        .map(|row| row.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    // reduce to upper Hessenberg form
    for j in 0..n.saturating_sub(2) {
        // pivot in column j below row j
        let pivot = (j + 1..n).find(|&i| h[i][j] != 0);
        let Some(pi) = pivot else { continue };
        if pi != j + 1 {
            h.swap(pi, j + 1);
            for row in h.iter_mut() {
                row.swap(pi, j + 1);
            }
        }
        let inv = mod_inv(h[j + 1][j], p);
        for i in j + 2..n {
            let factor = mul_mod(h[i][j], inv, p);
            if factor == 0 {
                continue;
            }
            // row_i -= factor · row_{j+1}
            for k in 0..n {
                let sub = mul_mod(factor, h[j + 1][k], p);
                h[i][k] = (h[i][k] + p - sub) % p;
            }
            // col_{j+1} += factor · col_i
            for row in h.iter_mut() {
                let add = mul_mod(factor, row[i], p);
                row[j + 1] = (row[j + 1] + add) % p;
            }
        }
    }
    // char polys of leading principal minors of the Hessenberg matrix
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        // p_m = (x − h[m−1][m−1])·p_{m−1} − Σ_i h[m−1−i][m−1]·(Π subdiag)·p_{m−1−i}
        let prev = &polys[m - 1];
        let mut pm = vec![0u64; m + 1];
        for (k, &c) in prev.iter().enumerate() {
            pm[k + 1] = (pm[k + 1] + c) % p;
            let sub = mul_mod(h[m - 1][m - 1], c, p);
            pm[k] = (pm[k] + p - sub) % p;
        }
        let mut subdiag = 1u64;
        for i in 1..m {
            subdiag = mul_mod(subdiag, h[m - i][m - i - 1], p);
            if subdiag == 0 {
                break;
            }
            let factor = mul_mod(h[m - 1 - i][m - 1], subdiag, p);
            if factor == 0 {
                continue;
            }
            for (k, &c) in polys[m - 1 - i].iter().enumerate() {
                let sub = mul_mod(factor, c, p);
                pm[k] = (pm[k] + p - sub) % p;
            }
        }
        polys.push(pm);
    }
    polys.pop().expect("n >= 1")
}

/// Direct cofactor-expansion characteristic polynomial for cross-checks.
#[cfg(test)]
fn char_poly_naive(a: &[Vec<i64>]) -> Vec<BigInt> {
    use super::poly::poly_trim;
    // det(xI − A) by recursive expansion over polynomials
    let n = a.len();
    let entries: Vec<Vec<Vec<BigInt>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = vec![BigInt::from(-a[i][j])];
                    if i == j {
                        p.push(BigInt::one());
                    }
                    poly_trim(p)
                })
                .collect()
        })
        .collect();
    fn det(rows: &[usize], cols: &[usize], e: &Vec<Vec<Vec<BigInt>>>) -> Vec<BigInt> {
        use super::poly::poly_mul;
        if rows.is_empty() {
            return vec![BigInt::one()];
        }
        let r = rows[0];
        let rest: Vec<usize> = rows[1..].to_vec();
        let mut acc: Vec<BigInt> = Vec::new();
        for (idx, &c) in cols.iter().enumerate() {
            let minor_cols: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != idx)
                .map(|(_, &v)| v)
                .collect();
            let term = poly_mul(&e[r][c], &det(&rest, &minor_cols, e));
            let signed: Vec<BigInt> = if idx % 2 == 0 {
                term
            } else {
                term.into_iter().map(|x| -x).collect()
            };
            // acc += signed
            let len = acc.len().max(signed.len());
            acc.resize(len, BigInt::zero());
            for (k, v) in signed.into_iter().enumerate() {
                acc[k] += v;
            }
        }
        poly_trim(acc)
    }
    let idx: Vec<usize> = (0..n).collect();
    det(&idx, &idx, &entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_matrices_match_naive_expansion() {
        let cases: Vec<Vec<Vec<i64>>> = vec![
            vec![vec![2, 1], vec![1, 2]],
            vec![vec![0, -7], vec![3, 5]],
            vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]],
            vec![
                vec![3650, 1875, 0, 2],
                vec![3150, 2375, -9, 0],
                vec![1, 0, -4, 17],
                vec![0, 11, 2, -6],
            ],
        ];
        for a in cases {
            assert_eq!(char_poly(&a), char_poly_naive(&a), "matrix {a:?}");
        }
    }

    #[test]
    fn known_spectra() {
        // [[2,1],[1,2]] has char poly (x−1)(x−3) = x² − 4x + 3
        assert_eq!(
            char_poly(&[vec![2, 1], vec![1, 2]]),
            vec![BigInt::from(3), BigInt::from(-4), BigInt::one()]
        );
        // nilpotent Jordan block: xⁿ
        let nil = vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]];
        assert_eq!(
            char_poly(&nil),
            vec![BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::one()]
        );
    }

    #[test]
    fn large_entries_need_several_primes() {
        // companion-style matrix with huge constant: coefficients exceed
        // any single 31-bit modulus
        let big = 8_390_655i64;
        let a = vec![
            vec![big, 1, 0],
            vec![1, -big, 7],
            vec![0, 7, 123_456],
        ];
        assert_eq!(char_poly(&a), char_poly_naive(&a));
    }

    #[test]
    fn genus_matrix_row_sums_show_up_as_eigenvalues() {
        // a matrix with constant row sums has that sum as an eigenvalue:
        // char poly is divisible by (x − 5525)
        let t = vec![vec![3650, 1875], vec![3150, 2375]];
        let cp = char_poly(&t);
        let at = super::super::poly::poly_eval_big(&cp, &BigInt::from(5525));
        assert!(at.is_zero());
        // the other eigenvalue is 500: trace 6025 − 5525
        let other = super::super::poly::poly_eval_big(&cp, &BigInt::from(500));
        assert!(other.is_zero());
    }
}
