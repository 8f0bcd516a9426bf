//! Exact short-vector enumeration.
//!
//! Fincke–Pohst on the exact LDLᵀ decomposition: with
//! Q(x) = Σₖ dₖ(xₖ + cₖ)² and cₖ = Σ_{j>k} L[j][k]·xⱼ, coordinates are
//! fixed from the highest index down, and at each level the admissible
//! integer range is found by walking outward from the integer nearest to
//! −cₖ with the exact rational predicate dₖ(t + cₖ)² ≤ R. No floating
//! point anywhere, so counts are exact by construction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::Result;

/// All x ≠ 0 with xᵀ·gram·x ≤ bound, up to sign: one representative per
/// ±pair, keyed by norm. The canonical representative has its
/// highest-index nonzero coordinate positive, so the full count at each
/// norm is exactly twice the listed length.
pub fn short_vectors(
    gram: &[Vec<i64>],
    bound: i64,
) -> Result<BTreeMap<i64, Vec<Vec<i64>>>> {
    let ldl = crate::linalg::ldl_from_int(gram)?;
    let n = gram.len();
    if n == 0 || bound <= 0 {
        return Ok(BTreeMap::new());
    }
    let mut s = Searcher {
        gram,
        l: ldl.l,
        d: ldl.d,
        x: vec![0i64; n],
        out: BTreeMap::new(),
    };
    s.descend(n - 1, BigRational::from_integer(BigInt::from(bound)), true);
    Ok(s.out)
}

struct Searcher<'a> {
    gram: &'a [Vec<i64>],
    l: Vec<Vec<BigRational>>,
    d: Vec<BigRational>,
    x: Vec<i64>,
    out: BTreeMap<i64, Vec<Vec<i64>>>,
}

impl Searcher<'_> {
    /// cₖ from the already-chosen coordinates above level k.
    fn offset(&self, k: usize) -> BigRational {
        let mut c = BigRational::from_integer(BigInt::from(0));
        for j in k + 1..self.x.len() {
            if self.x[j] != 0 {
                c += &self.l[j][k] * BigRational::from_integer(BigInt::from(self.x[j]));
            }
        }
        c
    }

    fn descend(&mut self, k: usize, r: BigRational, all_zero: bool) {
        let c = self.offset(k);
        let contrib = |t: i64| -> BigRational {
            let tc = BigRational::from_integer(BigInt::from(t)) + &c;
            &self.d[k] * (&tc * &tc)
        };
        // The admissible t form an interval around −c. If the integer
        // nearest to −c (clamped to 0 in the canonical-half branch, where
        // only t ≥ 0 is admissible) already fails, no admissible integer
        // exists at all: every other candidate is at least as far from −c.
        let mut center = nearest_integer(&(-&c));
        if all_zero && center < 0 {
            center = 0;
        }
        let c0 = contrib(center);
        if c0 > r {
            return;
        }
        let floor_t = if all_zero { 0 } else { i64::MIN };
        let mut row: Vec<(i64, BigRational)> = Vec::new();
        let mut t = center - 1;
        while t >= floor_t {
            let ct = contrib(t);
            if ct > r {
                break;
            }
            row.push((t, ct));
            t -= 1;
        }
        row.reverse();
        row.push((center, c0));
        let mut t = center + 1;
        loop {
            let ct = contrib(t);
            if ct > r {
                break;
            }
            row.push((t, ct));
            t += 1;
        }
        for (t, ct) in row {
            self.x[k] = t;
            let still_zero = all_zero && t == 0;
            if k == 0 {
                if !still_zero {
                    self.record();
                }
            } else {
                self.descend(k - 1, &r - &ct, still_zero);
            }
        }
        self.x[k] = 0;
    }

    fn record(&mut self) {
        let n = self.x.len();
        let mut norm: i128 = 0;
        for i in 0..n {
            for j in 0..n {
                norm += self.gram[i][j] as i128 * self.x[i] as i128 * self.x[j] as i128;
            }
        }
        let norm = i64::try_from(norm).expect("vector norm exceeds i64");
        self.out.entry(norm).or_default().push(self.x.clone());
    }
}

fn nearest_integer(q: &BigRational) -> i64 {
    i64::try_from(q.round().to_integer()).expect("enumeration coordinate exceeds i64")
}
