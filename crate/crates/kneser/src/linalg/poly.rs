//! Integer polynomial utilities. A polynomial is a coefficient vector in
//! ascending degree order with a nonzero leading coefficient (except the
//! zero polynomial, which is the empty vector).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn poly_trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Degree, with the convention that constants (and the zero polynomial)
/// have degree 0.
pub fn poly_degree(p: &[BigInt]) -> usize {
    p.len().saturating_sub(1)
}

pub fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    poly_trim(out)
}

pub fn poly_derivative(p: &[BigInt]) -> Vec<BigInt> {
    if p.len() <= 1 {
        return Vec::new();
    }
    poly_trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

pub fn poly_eval_big(p: &[BigInt], x: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn poly_eval_rational(p: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

/// Exact division: returns q with a = q·b, or None if b does not divide a.
/// Works over ℚ internally, so b need not be monic.
pub fn poly_divide_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
    if b.is_empty() {
        return None;
    }
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let mut rem: Vec<BigRational> = a
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let lead = BigRational::from_integer(b.last().unwrap().clone());
    let qlen = a.len() - b.len() + 1;
    let mut q = vec![BigRational::zero(); qlen];
    for k in (0..qlen).rev() {
        let coeff = &rem[k + b.len() - 1] / &lead;
        if !coeff.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                let sub = &coeff * BigRational::from_integer(bj.clone());
                rem[k + j] -= sub;
            }
        }
        q[k] = coeff;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    let mut out = Vec::with_capacity(qlen);
    for c in q {
        if !c.is_integer() {
            return None;
        }
        out.push(c.to_integer());
    }
    Some(poly_trim(out))
}

fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = gcd_big(&g, c);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        BigInt::one()
    } else {
        g
    }
}

fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

fn primitive_part(p: Vec<BigInt>) -> Vec<BigInt> {
    let c = content(&p);
    if c.is_one() {
        return p;
    }
    p.into_iter().map(|x| x / &c).collect()
}

/// Pseudo-remainder of a by b (both nonzero, deg a ≥ deg b).
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<BigInt> = a.to_vec();
    let d = b.len() - 1;
    let lead = b.last().unwrap().clone();
    while r.len() > d {
        let k = r.len() - 1 - d;
        let c = r.last().unwrap().clone();
        for x in r.iter_mut() {
            *x *= &lead;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        r = poly_trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// gcd over ℚ, returned primitive over ℤ with positive leading coefficient.
/// Primitive PRS keeps coefficient growth in check at these degrees.
pub fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut a = primitive_part(poly_trim(a.to_vec()));
    let mut b = primitive_part(poly_trim(b.to_vec()));
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = primitive_part(pseudo_rem(&a, &b));
        a = b;
        b = r;
    }
    if a.last().is_some_and(|c| c.is_negative()) {
        for c in a.iter_mut() {
            *c = -c.clone();
        }
    }
    a
}

/// The squarefree part f / gcd(f, f′), primitive over ℤ. For a monic input
/// this is again monic and has the same distinct roots, each simple.
pub fn squarefree_part(p: &[BigInt]) -> Vec<BigInt> {
    let g = poly_gcd(p, &poly_derivative(p));
    if g.len() <= 1 {
        return primitive_part(poly_trim(p.to_vec()));
    }
    poly_divide_exact(p, &g).expect("gcd divides")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(cs: &[i64]) -> Vec<BigInt> {
        poly_trim(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn multiplication_and_division_round_trip() {
        let a = poly(&[432, -66, 1]); // x² − 66x + 432
        let b = poly(&[-8, 1]); // x − 8
        let prod = poly_mul(&a, &b);
        assert_eq!(poly_divide_exact(&prod, &a), Some(b.clone()));
        assert_eq!(poly_divide_exact(&prod, &b), Some(a.clone()));
        assert_eq!(poly_divide_exact(&prod, &poly(&[1, 1])), None);
    }

    #[test]
    fn evaluation() {
        // p(33) for p = x² − 66x + 432: 1089 − 2178 + 432 = −657
        let p = poly(&[432, -66, 1]);
        assert_eq!(poly_eval_big(&p, &BigInt::from(33)), BigInt::from(-657));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(
            poly_eval_rational(&poly(&[0, 2]), &half),
            BigRational::from_integer(BigInt::one())
        );
    }

    #[test]
    fn gcd_and_squarefree() {
        // f = (x−2)²(x+5): squarefree part (x−2)(x+5) = x²+3x−10
        let f = poly_mul(&poly_mul(&poly(&[-2, 1]), &poly(&[-2, 1])), &poly(&[5, 1]));
        assert_eq!(squarefree_part(&f), poly(&[-10, 3, 1]));
        // coprime polynomials have trivial gcd
        assert_eq!(poly_gcd(&poly(&[1, 0, 1]), &poly(&[-1, 1])), poly(&[1]));
        // shared factor is recovered up to sign
        let g = poly_gcd(
            &poly_mul(&poly(&[7, -3, 1]), &poly(&[4, 1])),
            &poly_mul(&poly(&[7, -3, 1]), &poly(&[-9, 2])),
        );
        assert_eq!(g, poly(&[7, -3, 1]));
    }

    #[test]
    fn the_quartic_blocks_are_squarefree() {
        for q in [poly(&[1728, 0, -132, 0, 1]), poly(&[62208, 0, -960, 0, 1])] {
            assert_eq!(squarefree_part(&q), q);
        }
    }
}
