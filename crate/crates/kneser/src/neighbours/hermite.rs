//! Hermite normal form over O.
//!
//! Every ring of integers used here (ℤ and the m ∈ {2, 3, 5, −3} orders)
//! is norm-Euclidean for the nearest-integer quotient: rounding both
//! coordinates of a/b leaves a remainder of norm at most 3/4 in the worst
//! case. That gives gcd chains, hence row reduction to upper-triangular
//! form without ever leaving exact arithmetic.

use crate::numbers::{FieldElem, OElem, QuadField};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

/// Rounds both coordinates to the nearest integer of O.
pub(super) fn nearest_o(e: &FieldElem) -> OElem {
    let round = |r: &num_rational::BigRational| -> i64 {
        r.round().to_integer().to_i64().expect("rounded coordinate fits i64")
    };
    OElem::new(round(&e.x), round(&e.y))
}

/// a = q·b + r with |N(r)| < |N(b)|.
pub(super) fn euclid_div(f: &QuadField, a: &FieldElem, b: &FieldElem) -> (OElem, FieldElem) {
    let q = nearest_o(&a.div(b));
    let r = a.sub(&f.elem_from_o(q).mul(b));
    debug_assert!(
        r.norm().abs() < b.norm().abs(),
        "division must shrink the norm"
    );
    (q, r)
}

/// |O / (e)| for a nonzero e of O: the absolute norm, except over ℚ where
/// it is |e| itself.
pub(super) fn ideal_index(f: &QuadField, e: &FieldElem) -> BigInt {
    let n = if f.is_rational() { e.x.clone() } else { e.norm() };
    debug_assert!(n.is_integer());
    n.abs().to_integer()
}

/// Row Hermite normal form of a spanning set: returns an n×n
/// upper-triangular basis of the O-module generated by the rows. Fails if
/// the rows do not span a full-rank module.
pub(super) fn o_hnf(f: &QuadField, rows: Vec<Vec<FieldElem>>) -> Result<Vec<Vec<FieldElem>>> {
    let n = rows.first().map_or(0, Vec::len);
    let mut m = rows;
    let mut top = 0usize;
    for col in 0..n {
        loop {
            // the pivot candidate of least norm keeps quotients small
            let mut pivot: Option<(usize, BigInt)> = None;
            for (r, row) in m.iter().enumerate().skip(top) {
                if row[col].is_zero() {
                    continue;
                }
                let size = ideal_index(f, &row[col]);
                if pivot.as_ref().map_or(true, |(_, s)| size < *s) {
                    pivot = Some((r, size));
                }
            }
            let Some((piv, _)) = pivot else {
                return Err(Error::Lattice("rows do not span a full-rank module".into()));
            };
            m.swap(top, piv);
            let mut done = true;
            for r in top + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let (q, _) = euclid_div(f, &m[r][col], &m[top][col]);
                let qf = f.elem_from_o(q);
                for c in col..n {
                    let t = m[top][c].mul(&qf);
                    m[r][c] = m[r][c].sub(&t);
                }
                if !m[r][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        // size-reduce the entries above the pivot
        for r in 0..top {
            let (q, _) = euclid_div(f, &m[r][col], &m[top][col]);
            let qf = f.elem_from_o(q);
            for c in col..n {
                let t = m[top][c].mul(&qf);
                m[r][c] = m[r][c].sub(&t);
            }
        }
        top += 1;
    }
    for row in m.iter().skip(n) {
        if row.iter().any(|e| !e.is_zero()) {
            return Err(Error::Lattice("spanning set exceeds the ambient rank".into()));
        }
    }
    m.truncate(n);
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn euclidean_division_shrinks_norms() {
        let f = QuadField::new(5).unwrap();
        let a = f.elem_from_o(OElem::new(7, 3));
        let b = f.elem_from_o(OElem::new(2, -1));
        let (q, r) = euclid_div(&f, &a, &b);
        let back = f.elem_from_o(q).mul(&b).add(&r);
        assert_eq!(back, a);
        assert!(r.norm().abs() < b.norm().abs());
    }

    #[test]
    fn euclidean_division_eisenstein() {
        let f = QuadField::new(-3).unwrap();
        let a = f.elem_from_o(OElem::new(5, 4));
        let b = f.elem_from_o(OElem::new(1, 2));
        let (q, r) = euclid_div(&f, &a, &b);
        assert_eq!(f.elem_from_o(q).mul(&b).add(&r), a);
        assert!(r.norm().abs() < b.norm().abs());
    }

    #[test]
    fn division_shrinks_norms_across_all_rings() {
        // deterministic pseudo-random (a, b) pairs in every supported ring
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 41) as i64 - 20
        };
        for m in [1i64, 2, 3, 5, -3] {
            let f = if m == 1 {
                QuadField::RATIONAL
            } else {
                QuadField::new(m).unwrap()
            };
            let mut checked = 0;
            while checked < 50 {
                let a = OElem::new(next(), if m == 1 { 0 } else { next() });
                let b = OElem::new(next(), if m == 1 { 0 } else { next() });
                if b.is_zero() {
                    continue;
                }
                let (q, r) = euclid_div(&f, &f.elem_from_o(a), &f.elem_from_o(b));
                let back = f.elem_from_o(q).mul(&f.elem_from_o(b)).add(&r);
                assert_eq!(back, f.elem_from_o(a));
                assert!(
                    r.norm().abs() < f.elem_from_o(b).norm().abs(),
                    "m={m}, a={a:?}, b={b:?}"
                );
                checked += 1;
            }
        }
    }

    #[test]
    fn rational_hnf_of_an_index_two_module() {
        let e = |x: i64| QuadField::RATIONAL.elem_from_o(OElem::new(x, 0));
        let rows = vec![vec![e(2), e(0)], vec![e(1), e(1)], vec![e(0), e(2)]];
        let h = o_hnf(&QuadField::RATIONAL, rows).unwrap();
        assert!(h[1][0].is_zero());
        let det = h[0][0].mul(&h[1][1]);
        assert_eq!(ideal_index(&QuadField::RATIONAL, &det), BigInt::from(2));
    }

    #[test]
    fn hnf_detects_rank_deficiency() {
        let e = |x: i64| QuadField::RATIONAL.elem_from_o(OElem::new(x, 0));
        let rows = vec![vec![e(1), e(2)], vec![e(2), e(4)]];
        assert!(o_hnf(&QuadField::RATIONAL, rows).is_err());
    }

    #[test]
    fn quadratic_hnf_recovers_unimodular_span() {
        // the last row is the sum of the first three, so the span is the
        // full module exactly when the 3×3 part is unimodular
        let f = QuadField::new(2).unwrap();
        let e = |u: i64, v: i64| f.elem_from_o(OElem::new(u, v));
        let rows = vec![
            vec![e(1, 0), e(0, 0), e(3, -2)],
            vec![e(0, 1), e(1, 0), e(0, 0)],
            vec![e(0, 0), e(0, 0), e(1, 0)],
            vec![e(1, 1), e(1, 0), e(4, -2)],
        ];
        let h = o_hnf(&f, rows).unwrap();
        for r in 0..3 {
            for c in 0..r {
                assert!(h[r][c].is_zero());
            }
        }
        let det = h[0][0].mul(&h[1][1]).mul(&h[2][2]);
        let idx = ideal_index(&f, &det);
        assert!(idx.is_one(), "index was {idx}");
    }
}
