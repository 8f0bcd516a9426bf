//! Field scalars for exact elimination.
//!
//! Eigenvalues of Hecke matrices are totally real algebraic numbers; the
//! ones with explicit eigenvectors in this crate live in ℚ or in a real
//! quadratic extension ℚ(√D) whose D (e.g. 809, 73) is unrelated to the
//! base fields of the lattices. [`QuadExt`] represents a + b√D exactly for
//! any such D; the [`Scalar`] trait lets one Gaussian elimination serve both.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// What elimination needs from a field element.
pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// An element a + b√d of a real quadratic extension of ℚ.
///
/// `d` is a positive nonsquare. The value 0 is a *rational sentinel*: scalars
/// produced by `Scalar::zero`/`one` carry d = 0 and unify with any extension
/// on first contact, so generic code need not thread the discriminant
/// through. Mixing two different nonzero d values is a bug and panics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExt {
    pub d: i64,
    pub a: BigRational,
    pub b: BigRational,
}

impl QuadExt {
    pub fn new(d: i64, a: BigRational, b: BigRational) -> Self {
        debug_assert!(d >= 0 && d != 1);
        let q = QuadExt { d, a, b };
        q.normalized()
    }

    pub fn from_rational(a: BigRational) -> Self {
        QuadExt {
            d: 0,
            a,
            b: <BigRational as Zero>::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// a + b√d with integer parts.
    pub fn surd(d: i64, a: i64, b: i64) -> Self {
        QuadExt::new(
            d,
            BigRational::from_integer(BigInt::from(a)),
            BigRational::from_integer(BigInt::from(b)),
        )
    }

    fn normalized(mut self) -> Self {
        if self.b.is_zero() {
            self.d = 0;
        }
        self
    }

    fn unify(&self, other: &Self) -> i64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) => {
                assert_eq!(d1, d2, "mixed quadratic extensions: √{d1} vs √{d2}");
                d1
            }
        }
    }

    pub fn conj(&self) -> Self {
        QuadExt {
            d: self.d,
            a: self.a.clone(),
            b: -self.b.clone(),
        }
        .normalized()
    }

    /// The rational part if the element is rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    /// Exact sign under the embedding √d ↦ +√d.
    pub fn sign(&self) -> i8 {
        let sa = rat_sign(&self.a);
        let sb = rat_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == sb || sa == 0 {
            return sb;
        }
        // opposite signs: compare a² with d·b²
        let a2 = &self.a * &self.a;
        let db2 = BigRational::from_integer(BigInt::from(self.d)) * &self.b * &self.b;
        match a2.cmp(&db2) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0, // impossible for nonsquare d, kept total
        }
    }
}

fn rat_sign(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl Scalar for QuadExt {
    fn zero() -> Self {
        QuadExt::from_rational(<BigRational as Zero>::zero())
    }
    fn one() -> Self {
        QuadExt::from_rational(<BigRational as One>::one())
    }
    fn add(&self, other: &Self) -> Self {
        let d = self.unify(other);
        QuadExt {
            d,
            a: &self.a + &other.a,
            b: &self.b + &other.b,
        }
        .normalized()
    }
    fn sub(&self, other: &Self) -> Self {
        let d = self.unify(other);
        QuadExt {
            d,
            a: &self.a - &other.a,
            b: &self.b - &other.b,
        }
        .normalized()
    }
    fn mul(&self, other: &Self) -> Self {
        let d = self.unify(other);
        let dd = BigRational::from_integer(BigInt::from(d));
        QuadExt {
            d,
            a: &self.a * &other.a + &dd * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
        }
        .normalized()
    }
    fn inv(&self) -> Self {
        // 1/(a+b√d) = (a−b√d)/(a²−db²)
        assert!(
            !(self.a.is_zero() && self.b.is_zero()),
            "inverse of zero"
        );
        let dd = BigRational::from_integer(BigInt::from(self.d));
        let n = &self.a * &self.a - dd * &self.b * &self.b;
        assert!(!n.is_zero(), "√{} is rational?", self.d);
        QuadExt {
            d: self.d,
            a: &self.a / &n,
            b: -(&self.b / &n),
        }
        .normalized()
    }
}
