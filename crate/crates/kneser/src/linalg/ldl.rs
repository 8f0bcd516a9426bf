//! Exact LDLᵀ decomposition of symmetric positive-definite Gram matrices
//! over ℚ. This feeds short-vector enumeration (Fincke–Pohst) and doubles
//! as a positive-definiteness certificate.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// G = L·diag(d)·Lᵀ with L unit lower triangular and every dᵢ > 0.
#[derive(Debug, Clone)]
pub struct Ldl {
    pub l: Vec<Vec<BigRational>>,
    pub d: Vec<BigRational>,
}

impl Ldl {
    /// det(G) = Π dᵢ.
    pub fn determinant(&self) -> BigRational {
        let mut acc = BigRational::from_integer(BigInt::one());
        for d in &self.d {
            acc *= d;
        }
        acc
    }

    /// Multiply the factors back together (used in tests and sanity checks).
    pub fn reconstruct(&self) -> Vec<Vec<BigRational>> {
        let n = self.d.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..=i.min(j))
                            .map(|k| &self.l[i][k] * &self.l[j][k] * &self.d[k])
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Exact LDLᵀ of a symmetric matrix. Fails with
/// [`crate::Error::NotPositiveDefinite`] as soon as a pivot is ≤ 0, and
/// with [`crate::Error::NotSquare`] on shape mismatch.
pub fn ldl_decompose(g: &[Vec<BigRational>]) -> crate::Result<Ldl> {
    let n = g.len();
    if g.iter().any(|row| row.len() != n) {
        return Err(crate::Error::NotSquare {
            rows: n,
            cols: g.iter().map(|r| r.len()).max().unwrap_or(0),
        });
    }
    debug_assert!(
        (0..n).all(|i| (0..n).all(|j| g[i][j] == g[j][i])),
        "ldl_decompose expects a symmetric matrix"
    );
    let mut l = vec![vec![BigRational::from_integer(BigInt::zero()); n]; n];
    let mut d = vec![BigRational::from_integer(BigInt::zero()); n];
    for j in 0..n {
        let mut dj = g[j][j].clone();
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        if !dj.is_positive() {
            return Err(crate::Error::NotPositiveDefinite);
        }
        d[j] = dj;
        l[j][j] = BigRational::from_integer(BigInt::one());
        for i in j + 1..n {
            let mut x = g[i][j].clone();
            for k in 0..j {
                x -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = x / &d[j];
        }
    }
    Ok(Ldl { l, d })
}

/// Convenience wrapper for integer Gram matrices.
pub fn ldl_from_int(g: &[Vec<i64>]) -> crate::Result<Ldl> {
    let gq: Vec<Vec<BigRational>> = g
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    ldl_decompose(&gq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e8_gram() -> Vec<Vec<i64>> {
        // simply-laced diagram: chain 1–3–4–5–6–7–8 with 2 attached to 4
        let adj = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
        let mut g = vec![vec![0i64; 8]; 8];
        for i in 0..8 {
            g[i][i] = 2;
        }
        for (a, b) in adj {
            g[a][b] = -1;
            g[b][a] = -1;
        }
        g
    }

    #[test]
    fn e8_is_positive_definite_and_unimodular() {
        let ldl = ldl_from_int(&e8_gram()).unwrap();
        assert!(ldl.d.iter().all(|d| d.is_positive()));
        assert_eq!(
            ldl.determinant(),
            BigRational::from_integer(BigInt::one())
        );
        // round trip
        let back = ldl.reconstruct();
        for (i, row) in e8_gram().iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(back[i][j], BigRational::from_integer(BigInt::from(x)));
            }
        }
    }

    #[test]
    fn indefinite_matrix_is_rejected() {
        // hyperbolic plane
        let g = vec![vec![0i64, 1], vec![1, 0]];
        assert!(matches!(
            ldl_from_int(&g),
            Err(crate::Error::NotPositiveDefinite)
        ));
        // negative definite
        let g = vec![vec![-2i64, 0], vec![0, -2]];
        assert!(matches!(
            ldl_from_int(&g),
            Err(crate::Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let g = vec![
            vec![BigRational::from_integer(BigInt::one()); 3],
            vec![BigRational::from_integer(BigInt::one()); 2],
        ];
        assert!(matches!(
            ldl_decompose(&g),
            Err(crate::Error::NotSquare { .. })
        ));
    }
}
