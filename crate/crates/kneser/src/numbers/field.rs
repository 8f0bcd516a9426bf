//! Quadratic fields ℚ(√m) for m ∈ {2, 3, 5, −3}, their rings of integers,
//! and exact element arithmetic.
//!
//! Two element types are provided. [`OElem`] is a pair of `i64` coordinates
//! over the integral basis {1, ω} and is the hot-path type used by lattice
//! and neighbour code. [`FieldElem`] carries arbitrary-precision rational
//! coordinates (plus the field it lives in) and is used wherever denominators
//! appear: kernels, eigenvectors, serialization.
//!
//! Here ω = (1+√m)/2 when m ≡ 1 (mod 4) and ω = √m otherwise, so that
//! {1, ω} is always a ℤ-basis of the ring of integers. The degenerate value
//! m = 1 is accepted internally and denotes ℚ itself (ω = 0); it lets the
//! lattice layer treat ℤ-lattices and O-lattices uniformly. It is not part
//! of the public quadratic-field whitelist.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::{Error, Result};

/// A supported base field: ℚ(√m) for m ∈ {2, 3, 5, −3}, or ℚ itself
/// (`QuadField::RATIONAL`, m = 1).
///
/// The struct is a lightweight context object; element types do not store it
/// (except [`FieldElem`], which records `m` for serialization), so arithmetic
/// entry points take the field as an explicit argument or are methods on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadField {
    m: i64,
}

impl QuadField {
    /// The rational field ℚ, as the degenerate member of the family.
    ///
    /// All quadratic-specific operations (conjugation, embeddings, units)
    /// degenerate to the obvious rational behaviour.
    pub const RATIONAL: QuadField = QuadField { m: 1 };

    /// Constructs ℚ(√m). Only m ∈ {2, 3, 5, −3} are supported.
    pub fn new(m: i64) -> Result<Self> {
        match m {
            2 | 3 | 5 | -3 => Ok(QuadField { m }),
            _ => Err(Error::UnsupportedField(m)),
        }
    }

    /// The squarefree part m (1 for ℚ).
    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn is_rational(&self) -> bool {
        self.m == 1
    }

    /// True for the real fields (and for ℚ).
    pub fn is_real(&self) -> bool {
        self.m > 0
    }

    pub fn is_imaginary(&self) -> bool {
        self.m < 0
    }

    fn one_mod_four(&self) -> bool {
        self.m.rem_euclid(4) == 1
    }

    /// Field discriminant: m if m ≡ 1 (mod 4), else 4m. Returns 1 for ℚ.
    pub fn discriminant(&self) -> i64 {
        if self.one_mod_four() {
            self.m
        } else {
            4 * self.m
        }
    }

    /// Coefficients (c, d) with ω² = c + dω.
    ///
    /// For m ≡ 1 (mod 4): ω = (1+√m)/2 and (c, d) = ((m−1)/4, 1).
    /// Otherwise ω = √m and (c, d) = (m, 0). For ℚ, ω = 0 and (c, d) = (0, 0).
    pub fn omega_relation(&self) -> (i64, i64) {
        if self.m == 1 {
            (0, 0)
        } else if self.one_mod_four() {
            ((self.m - 1) / 4, 1)
        } else {
            (self.m, 0)
        }
    }

    /// Tr(ω): 1 if m ≡ 1 (mod 4), else 0.
    pub fn trace_omega(&self) -> i64 {
        if self.m != 1 && self.one_mod_four() {
            1
        } else {
            0
        }
    }

    // ------------------------------------------------------------------
    // OElem arithmetic
    // ------------------------------------------------------------------

    pub fn mul(&self, a: OElem, b: OElem) -> OElem {
        let (c, d) = self.omega_relation();
        let (au, av, bu, bv) = (a.u as i128, a.v as i128, b.u as i128, b.v as i128);
        let vv = av * bv;
        let u = au * bu + (c as i128) * vv;
        let v = au * bv + av * bu + (d as i128) * vv;
        OElem {
            u: i64::try_from(u).expect("OElem multiplication overflow"),
            v: i64::try_from(v).expect("OElem multiplication overflow"),
        }
    }

    /// Galois conjugate (complex conjugate for m < 0). Identity on ℚ.
    pub fn conj(&self, a: OElem) -> OElem {
        if self.m == 1 {
            return a;
        }
        if self.one_mod_four() {
            // conj(ω) = 1 − ω
            OElem {
                u: a.u + a.v,
                v: -a.v,
            }
        } else {
            OElem { u: a.u, v: -a.v }
        }
    }

    pub fn trace(&self, a: OElem) -> i64 {
        2 * a.u + self.trace_omega() * a.v
    }

    pub fn norm(&self, a: OElem) -> i128 {
        let (u, v) = (a.u as i128, a.v as i128);
        if self.m == 1 {
            return u * u;
        }
        if self.one_mod_four() {
            // Nm(u + vω) = u² + uv − v²(m−1)/4
            u * u + u * v - v * v * ((self.m as i128 - 1) / 4)
        } else {
            u * u - (self.m as i128) * v * v
        }
    }

    /// Scales by an integer.
    pub fn scale(&self, k: i64, a: OElem) -> OElem {
        OElem {
            u: k.checked_mul(a.u).expect("OElem scale overflow"),
            v: k.checked_mul(a.v).expect("OElem scale overflow"),
        }
    }

    pub fn pow(&self, a: OElem, n: u32) -> OElem {
        let mut acc = OElem::ONE;
        for _ in 0..n {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// Exact sign of the real embedding σ_place(a), where place 0 sends
    /// √m ↦ +√m and place 1 sends √m ↦ −√m. Real fields only.
    pub fn sign_at(&self, a: OElem, place: usize) -> i8 {
        assert!(self.is_real(), "sign_at needs a real field");
        if self.m == 1 {
            return a.u.signum() as i8;
        }
        // Write 2^s · σ(a) = U + V√m with integer U, V (scaling by 2 > 0
        // does not change the sign).
        let (u, v) = if self.one_mod_four() {
            ((2 * a.u + a.v) as i128, a.v as i128)
        } else {
            (a.u as i128, a.v as i128)
        };
        let v = if place == 1 { -v } else { v };
        sign_u_plus_v_sqrt(u, v, self.m)
    }

    /// True if every real embedding of `a` is strictly positive.
    /// For imaginary fields this means `a ≠ 0`; for ℚ it means `a > 0`.
    pub fn is_totally_positive(&self, a: OElem) -> bool {
        if self.is_imaginary() {
            return !a.is_zero();
        }
        if self.m == 1 {
            return a.u > 0;
        }
        self.sign_at(a, 0) > 0 && self.sign_at(a, 1) > 0
    }

    /// Compares σ_place(a) with σ_place(b) exactly.
    pub fn cmp_at(&self, a: OElem, b: OElem, place: usize) -> std::cmp::Ordering {
        let d = a - b;
        match self.sign_at(d, place) {
            x if x < 0 => std::cmp::Ordering::Less,
            0 => std::cmp::Ordering::Equal,
            _ => std::cmp::Ordering::Greater,
        }
    }

    // ------------------------------------------------------------------
    // Units
    // ------------------------------------------------------------------

    /// Fundamental unit for the real quadratic fields:
    /// 1+√2, 2+√3, and τ = (1+√5)/2 respectively.
    pub fn fundamental_unit(&self) -> OElem {
        match self.m {
            2 => OElem::new(1, 1),
            3 => OElem::new(2, 1),
            5 => OElem::new(0, 1),
            _ => panic!("fundamental_unit: not a real quadratic field"),
        }
    }

    /// Generator of the totally positive units modulo squares of units:
    /// 3+2√2, 2+√3, τ². Equals ε² when Nm(ε) = −1, and ε itself for m = 3.
    pub fn totally_positive_fundamental_unit(&self) -> OElem {
        match self.m {
            2 => OElem::new(3, 2),
            3 => OElem::new(2, 1),
            5 => OElem::new(1, 1),
            _ => panic!("totally_positive_fundamental_unit: not a real quadratic field"),
        }
    }

    /// Order of the unit group's torsion: 6 for ℚ(√−3), 2 otherwise.
    pub fn roots_of_unity_order(&self) -> u32 {
        if self.m == -3 {
            6
        } else {
            2
        }
    }

    /// Inverse of a unit (an element of norm ±1).
    pub fn unit_inverse(&self, e: OElem) -> OElem {
        let n = self.norm(e);
        let c = self.conj(e);
        match n {
            1 => c,
            -1 => -c,
            _ => panic!("unit_inverse called on a non-unit"),
        }
    }

    /// Totally positive generator of the different ideal, when one exists:
    /// (5+√5)/2 for ℚ(√5) and 4−2√2 for ℚ(√2). For ℚ(√3) the different
    /// is (2√3), every unit has norm +1, and Nm(2√3) < 0, so no totally
    /// positive generator exists and an error is returned.
    pub fn different_totally_positive(&self) -> Result<OElem> {
        match self.m {
            5 => Ok(OElem::new(2, 1)),
            2 => Ok(OElem::new(4, -2)),
            3 => Err(Error::NoTotallyPositiveGenerator(
                "the different (2√3) of Q(√3) has norm -12 and all units have norm +1".into(),
            )),
            _ => Err(Error::NoTotallyPositiveGenerator(format!(
                "different_totally_positive is not defined for m = {}",
                self.m
            ))),
        }
    }

    // ------------------------------------------------------------------
    // FieldElem arithmetic (rational coordinates)
    // ------------------------------------------------------------------

    pub fn elem_from_o(&self, a: OElem) -> FieldElem {
        FieldElem {
            m: self.m,
            x: BigRational::from_integer(BigInt::from(a.u)),
            y: BigRational::from_integer(BigInt::from(a.v)),
        }
    }

    pub fn elem_zero(&self) -> FieldElem {
        FieldElem {
            m: self.m,
            x: BigRational::zero(),
            y: BigRational::zero(),
        }
    }

    pub fn elem_one(&self) -> FieldElem {
        FieldElem {
            m: self.m,
            x: BigRational::one(),
            y: BigRational::zero(),
        }
    }
}

/// Exact sign of U + V·√m for m > 1 squarefree (so √m is irrational).
fn sign_u_plus_v_sqrt(u: i128, v: i128, m: i64) -> i8 {
    debug_assert!(m > 1);
    if u == 0 && v == 0 {
        return 0;
    }
    if u >= 0 && v >= 0 {
        return 1;
    }
    if u <= 0 && v <= 0 {
        return -1;
    }
    let u2 = u.checked_mul(u).expect("embedding sign overflow");
    let mv2 = (m as i128)
        .checked_mul(v.checked_mul(v).expect("embedding sign overflow"))
        .expect("embedding sign overflow");
    if u > 0 {
        // v < 0: positive iff u² > m v²
        if u2 > mv2 {
            1
        } else {
            -1
        }
    } else {
        // u < 0, v > 0: positive iff m v² > u²
        if mv2 > u2 {
            1
        } else {
            -1
        }
    }
}

/// An algebraic integer u + vω with machine-integer coordinates.
///
/// Addition, subtraction and negation are basis operations and are provided
/// as operator impls; anything that depends on m (multiplication, norms,
/// conjugation, embeddings) lives on [`QuadField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OElem {
    pub u: i64,
    pub v: i64,
}

impl OElem {
    pub const ZERO: OElem = OElem { u: 0, v: 0 };
    pub const ONE: OElem = OElem { u: 1, v: 0 };
    pub const OMEGA: OElem = OElem { u: 0, v: 1 };

    pub const fn new(u: i64, v: i64) -> Self {
        OElem { u, v }
    }

    pub const fn from_int(n: i64) -> Self {
        OElem { u: n, v: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0 && self.v == 0
    }

    /// True if this element is a rational integer (v = 0).
    pub fn is_rational(&self) -> bool {
        self.v == 0
    }
}

impl std::ops::Add for OElem {
    type Output = OElem;
    fn add(self, rhs: OElem) -> OElem {
        OElem {
            u: self.u.checked_add(rhs.u).expect("OElem add overflow"),
            v: self.v.checked_add(rhs.v).expect("OElem add overflow"),
        }
    }
}

impl std::ops::Sub for OElem {
    type Output = OElem;
    fn sub(self, rhs: OElem) -> OElem {
        OElem {
            u: self.u.checked_sub(rhs.u).expect("OElem sub overflow"),
            v: self.v.checked_sub(rhs.v).expect("OElem sub overflow"),
        }
    }
}

impl std::ops::Neg for OElem {
    type Output = OElem;
    fn neg(self) -> OElem {
        OElem {
            u: -self.u,
            v: -self.v,
        }
    }
}

/// Pretty-prints in surd form: `4+√3`, `(5+√5)/2`, `-1+2√-3`, plain integers
/// as integers. Needs the field only through m, carried by the caller.
pub struct OElemDisplay<'a> {
    pub elem: OElem,
    pub field: &'a QuadField,
}

impl fmt::Display for OElemDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.field.m();
        let e = self.elem;
        if m == 1 || e.v == 0 {
            return write!(f, "{}", e.u);
        }
        // Convert to (A + B√m)/den with den ∈ {1, 2}.
        let (a, b, den) = if self.field.one_mod_four() {
            if e.v % 2 == 0 {
                (e.u + e.v / 2, e.v / 2, 1)
            } else {
                (2 * e.u + e.v, e.v, 2)
            }
        } else {
            (e.u, e.v, 1)
        };
        let surd = |f: &mut fmt::Formatter<'_>, b: i64| -> fmt::Result {
            match b {
                1 => write!(f, "√{}", m),
                -1 => write!(f, "-√{}", m),
                _ => write!(f, "{}√{}", b, m),
            }
        };
        if den == 2 {
            write!(f, "(")?;
        }
        if a != 0 {
            write!(f, "{}", a)?;
            if b > 0 {
                write!(f, "+")?;
            }
        }
        surd(f, b)?;
        if den == 2 {
            write!(f, ")/2")?;
        }
        Ok(())
    }
}

/// A field element x + yω with exact rational coordinates, tagged with the
/// squarefree part m of its field so that values are self-describing when
/// serialized.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    m: i64,
    pub x: BigRational,
    pub y: BigRational,
}

impl FieldElem {
    pub fn new(field: QuadField, x: BigRational, y: BigRational) -> Self {
        FieldElem { m: field.m(), x, y }
    }

    pub fn from_rational(field: QuadField, x: BigRational) -> Self {
        FieldElem {
            m: field.m(),
            x,
            y: BigRational::zero(),
        }
    }

    pub fn field(&self) -> QuadField {
        QuadField { m: self.m }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    fn assert_same(&self, other: &FieldElem) {
        assert_eq!(self.m, other.m, "mixed-field arithmetic");
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        self.assert_same(other);
        FieldElem {
            m: self.m,
            x: &self.x + &other.x,
            y: &self.y + &other.y,
        }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.assert_same(other);
        FieldElem {
            m: self.m,
            x: &self.x - &other.x,
            y: &self.y - &other.y,
        }
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem {
            m: self.m,
            x: -self.x.clone(),
            y: -self.y.clone(),
        }
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        self.assert_same(other);
        let (c, d) = self.field().omega_relation();
        let c = BigRational::from_integer(BigInt::from(c));
        let d = BigRational::from_integer(BigInt::from(d));
        let yy = &self.y * &other.y;
        FieldElem {
            m: self.m,
            x: &self.x * &other.x + &c * &yy,
            y: &self.x * &other.y + &self.y * &other.x + &d * &yy,
        }
    }

    pub fn conj(&self) -> FieldElem {
        let f = self.field();
        if f.is_rational() {
            return self.clone();
        }
        if f.one_mod_four() {
            FieldElem {
                m: self.m,
                x: &self.x + &self.y,
                y: -self.y.clone(),
            }
        } else {
            FieldElem {
                m: self.m,
                x: self.x.clone(),
                y: -self.y.clone(),
            }
        }
    }

    pub fn trace(&self) -> BigRational {
        let t = BigRational::from_integer(BigInt::from(self.field().trace_omega()));
        &self.x + &self.x + t * &self.y
    }

    pub fn norm(&self) -> BigRational {
        self.mul(&self.conj()).x
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> FieldElem {
        assert!(!self.is_zero(), "division by zero");
        let c = self.conj();
        let n = self.norm();
        FieldElem {
            m: self.m,
            x: &c.x / &n,
            y: &c.y / &n,
        }
    }

    pub fn div(&self, other: &FieldElem) -> FieldElem {
        self.mul(&other.inv())
    }

    /// True if both coordinates over {1, ω} are integers with `i64` range.
    pub fn to_o_elem(&self) -> Option<OElem> {
        if !self.x.is_integer() || !self.y.is_integer() {
            return None;
        }
        let u = i64::try_from(self.x.to_integer()).ok()?;
        let v = i64::try_from(self.y.to_integer()).ok()?;
        Some(OElem { u, v })
    }

    /// Exact sign at a real embedding (0: √m ↦ +√m, 1: √m ↦ −√m).
    pub fn sign_at(&self, place: usize) -> i8 {
        let f = self.field();
        assert!(f.is_real(), "sign_at needs a real field");
        if f.is_rational() {
            let s = self.x.numer().sign();
            return match s {
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => 0,
                num_bigint::Sign::Plus => 1,
            };
        }
        // Clear denominators: sign(x + yω) = sign(N·x + N·yω) for N > 0.
        let nden = self.x.denom() * self.y.denom();
        let xi = (&self.x * BigRational::from_integer(nden.clone())).to_integer();
        let yi = (&self.y * BigRational::from_integer(nden)).to_integer();
        // 2(x + yω) = (2x + y t) + y√m with t = Tr ω ∈ {0, 1}.
        let (u, v) = if f.one_mod_four() {
            (&xi + &xi + &yi, yi)
        } else {
            (&xi + &xi, &yi + &yi)
        };
        let v = if place == 1 { -v } else { v };
        sign_big_u_plus_v_sqrt(&u, &v, f.m())
    }

    pub fn is_totally_positive(&self) -> bool {
        let f = self.field();
        if f.is_imaginary() {
            return !self.is_zero();
        }
        if f.is_rational() {
            return self.sign_at(0) > 0;
        }
        self.sign_at(0) > 0 && self.sign_at(1) > 0
    }
}

fn sign_big_u_plus_v_sqrt(u: &BigInt, v: &BigInt, m: i64) -> i8 {
    if u.is_zero() && v.is_zero() {
        return 0;
    }
    if !u.is_negative() && !v.is_negative() {
        return 1;
    }
    if !u.is_positive() && !v.is_positive() {
        return -1;
    }
    let u2 = u * u;
    let mv2 = BigInt::from(m) * v * v;
    if u.is_positive() {
        if u2 > mv2 {
            1
        } else {
            -1
        }
    } else if mv2 > u2 {
        1
    } else {
        -1
    }
}

// ----------------------------------------------------------------------
// Serialization: {"m": 5, "x": "num/den", "y": "num/den"}
// ----------------------------------------------------------------------

pub(crate) fn rational_to_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn rational_from_string(s: &str) -> std::result::Result<BigRational, String> {
    let parse_int = |t: &str| -> std::result::Result<BigInt, String> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| format!("bad integer {t:?}: {e}"))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(BigRational::new(parse_int(n)?, den))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FieldElemWire {
    m: i64,
    x: String,
    y: String,
}

impl Serialize for FieldElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldElemWire {
            m: self.m,
            x: rational_to_string(&self.x),
            y: rational_to_string(&self.y),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = FieldElemWire::deserialize(d)?;
        let x = rational_from_string(&w.x).map_err(serde::de::Error::custom)?;
        let y = rational_from_string(&w.y).map_err(serde::de::Error::custom)?;
        Ok(FieldElem { m: w.m, x, y })
    }
}
