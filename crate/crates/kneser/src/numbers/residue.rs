//! Residue fields O/𝔭 with exact table-driven arithmetic.
//!
//! The neighbour machinery works projectively over O/𝔭 for q = p^f up to a
//! few dozen elements, so a dense representation is ideal: an element is an
//! index in 0..q, encoded as a + p·b for the residue a + bθ (θ the image of
//! ω when f = 2; b = 0 when f = 1). Inverses are precomputed; everything
//! else is a few machine words of modular arithmetic.

use super::field::OElem;
use super::primes::{PrimeIdeal, Splitting};
use crate::{Error, Result};

/// A residue field O/𝔭, with elements indexed by 0..q.
#[derive(Debug, Clone)]
pub struct ResidueField {
    pub p: u64,
    pub q: u64,
    /// residue degree: 1 or 2
    pub deg: u32,
    /// image of ω when deg = 1 (0 for the rational field)
    t: u64,
    /// θ² = c + dθ when deg = 2
    c: u64,
    d: u64,
    inv: Vec<u16>,
}

impl ResidueField {
    pub fn new(ideal: &PrimeIdeal) -> Result<Self> {
        let p = ideal.p;
        let q = ideal.q();
        if q > 4096 {
            return Err(Error::BadPrime(format!(
                "residue field of size {q} exceeds the dense-table limit"
            )));
        }
        let field = ideal.field;
        let mut rf = match ideal.splitting() {
            Splitting::Inert if !field.is_rational() => {
                let (c, d) = field.omega_relation();
                ResidueField {
                    p,
                    q,
                    deg: 2,
                    t: 0,
                    c: c.rem_euclid(p as i64) as u64,
                    d: d.rem_euclid(p as i64) as u64,
                    inv: Vec::new(),
                }
            }
            _ if field.is_rational() => ResidueField {
                p,
                q,
                deg: 1,
                t: 0,
                c: 0,
                d: 0,
                inv: Vec::new(),
            },
            _ => {
                // deg = 1: ω ↦ t = −x/y mod p from the generator x + yω.
                // y is invertible mod p: otherwise p | x too and p² | Nm.
                let g = ideal.generator;
                let y = g.v.rem_euclid(p as i64) as u64;
                debug_assert!(y != 0, "split/ramified generator with y ≡ 0 mod p");
                let yinv = mod_inverse(y, p);
                let t = (p - g.u.rem_euclid(p as i64) as u64) % p * yinv % p;
                // sanity: t must satisfy ω's quadratic relation mod p
                let (c, d) = field.omega_relation();
                debug_assert_eq!(
                    (t * t) % p,
                    ((c.rem_euclid(p as i64) as u64) + (d.rem_euclid(p as i64) as u64) * t) % p
                );
                ResidueField {
                    p,
                    q,
                    deg: 1,
                    t,
                    c: 0,
                    d: 0,
                    inv: Vec::new(),
                }
            }
        };
        rf.inv = rf.build_inverse_table();
        Ok(rf)
    }

    fn build_inverse_table(&self) -> Vec<u16> {
        let mut inv = vec![0u16; self.q as usize];
        for a in 1..self.q {
            if inv[a as usize] != 0 {
                continue;
            }
            for b in 1..self.q {
                if self.mul(a as u16, b as u16) == 1 {
                    inv[a as usize] = b as u16;
                    inv[b as usize] = a as u16;
                    break;
                }
            }
        }
        inv
    }

    #[inline]
    fn split(&self, x: u16) -> (u64, u64) {
        let x = x as u64;
        (x % self.p, x / self.p)
    }

    #[inline]
    fn join(&self, a: u64, b: u64) -> u16 {
        (a + self.p * b) as u16
    }

    pub fn add(&self, x: u16, y: u16) -> u16 {
        let (a, b) = self.split(x);
        let (c, d) = self.split(y);
        self.join((a + c) % self.p, (b + d) % self.p)
    }

    pub fn neg(&self, x: u16) -> u16 {
        let (a, b) = self.split(x);
        self.join((self.p - a) % self.p, (self.p - b) % self.p)
    }

    pub fn sub(&self, x: u16, y: u16) -> u16 {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: u16, y: u16) -> u16 {
        let (a, b) = self.split(x);
        let (c, d) = self.split(y);
        if self.deg == 1 {
            return self.join(a * c % self.p, 0);
        }
        // (a + bθ)(c + dθ) with θ² = c₀ + d₀θ
        let bd = b * d;
        let re = (a * c + self.c * bd) % self.p;
        let im = (a * d + b * c + self.d * bd) % self.p;
        self.join(re, im)
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, x: u16) -> u16 {
        assert!(x != 0, "inverse of zero in residue field");
        self.inv[x as usize]
    }

    pub fn div(&self, x: u16, y: u16) -> u16 {
        self.mul(x, self.inv(y))
    }

    /// Frobenius x ↦ x^p, the nontrivial automorphism when deg = 2.
    pub fn frobenius(&self, x: u16) -> u16 {
        let mut acc = 1u16;
        for _ in 0..self.p {
            acc = self.mul(acc, x);
        }
        acc
    }

    /// Scalar multiplication by a prime-field element (an index < p).
    pub fn scalar_mul(&self, s: u64, x: u16) -> u16 {
        let (a, b) = self.split(x);
        self.join(a * s % self.p, b * s % self.p)
    }

    /// The image of an integral element under O → O/𝔭.
    pub fn reduce(&self, x: OElem) -> u16 {
        let u = x.u.rem_euclid(self.p as i64) as u64;
        let v = x.v.rem_euclid(self.p as i64) as u64;
        if self.deg == 1 {
            self.join((u + v * self.t) % self.p, 0)
        } else {
            self.join(u, v)
        }
    }

    /// A distinguished preimage of an index under `reduce`, with
    /// coordinates in [0, p).
    pub fn lift(&self, x: u16) -> OElem {
        let (a, b) = self.split(x);
        if self.deg == 1 {
            // reduce(a + 0ω) = a regardless of t
            OElem::new(a as i64, 0)
        } else {
            OElem::new(a as i64, b as i64)
        }
    }

    /// Trace to the prime field: x + x^p for deg 2, identity for deg 1.
    /// Returned as an index < p.
    pub fn trace_to_prime(&self, x: u16) -> u64 {
        if self.deg == 1 {
            let (a, _) = self.split(x);
            a
        } else {
            let (a, _) = self.split(self.add(x, self.frobenius(x)));
            a
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> + '_ {
        0..self.q as u16
    }

    pub fn is_zero(&self, x: u16) -> bool {
        x == 0
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p is prime and a ≢ 0
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}
