//! Projective geometry over O/𝔭: packed point codes, reduction of rational
//! Gram data, and the isotropic-point scans that drive neighbour steps.
//!
//! A projective point is stored as one u64, ⌈log₂ q⌉ bits per coordinate
//! with coordinate 0 least significant, always scaled so the first nonzero
//! coordinate is 1. Millions of lines then fit in a flat sorted vector and
//! membership is a binary search.

use crate::numbers::{FieldElem, OElem, ResidueField};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Bits per packed coordinate for a residue field of size q.
pub(super) fn code_bits(q: u64) -> u32 {
    u64::BITS - (q - 1).leading_zeros()
}

/// Reduces a field element with 𝔭-integral coordinates: both rational
/// coordinates must have denominator prime to p.
pub(super) fn reduce_elem(rf: &ResidueField, e: &FieldElem) -> Result<u16> {
    let p = BigInt::from(rf.p);
    let red = |r: &num_rational::BigRational| -> Result<i64> {
        let den = ((r.denom() % &p + &p) % &p).to_i64().unwrap();
        if den == 0 {
            return Err(Error::BadPrime(format!(
                "denominator {} is not prime to {}",
                r.denom(),
                rf.p
            )));
        }
        let num = ((r.numer() % &p + &p) % &p).to_i64().unwrap();
        let mut dinv = 1i64;
        for y in 1..rf.p as i64 {
            if (den * y) % rf.p as i64 == 1 {
                dinv = y;
                break;
            }
        }
        Ok((num * dinv).rem_euclid(rf.p as i64))
    };
    let (x, y) = (red(&e.x)?, red(&e.y)?);
    Ok(rf.reduce(OElem::new(x, y)))
}

pub(super) fn encode(bits: u32, x: &[u16]) -> u64 {
    debug_assert!(bits * x.len() as u32 <= 64);
    let mut c = 0u64;
    for (k, &v) in x.iter().enumerate() {
        c |= (v as u64) << (bits * k as u32);
    }
    c
}

pub(super) fn decode(bits: u32, code: u64, n: usize) -> Vec<u16> {
    let mask = (1u64 << bits) - 1;
    (0..n)
        .map(|k| ((code >> (bits * k as u32)) & mask) as u16)
        .collect()
}

/// Scales so the first nonzero coordinate is 1, then packs.
pub(super) fn normalize_encode(rf: &ResidueField, bits: u32, y: &mut [u16]) -> u64 {
    let lead = y.iter().position(|&v| v != 0).expect("cannot normalize zero");
    let s = rf.inv(y[lead]);
    for v in y.iter_mut() {
        *v = rf.mul(s, *v);
    }
    encode(bits, y)
}

/// Image of a projective point under a matrix over O/𝔭 (y_i = Σ_j a[i][j]·x_j),
/// renormalized. Matrix entries are residue indices.
pub(super) fn act_on_code(
    rf: &ResidueField,
    bits: u32,
    a: &[Vec<u16>],
    code: u64,
    n: usize,
) -> u64 {
    let x = decode(bits, code, n);
    let mut y = vec![0u16; n];
    for (j, &xj) in x.iter().enumerate() {
        if xj == 0 {
            continue;
        }
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = rf.add(*yi, rf.mul(a[i][j], xj));
        }
    }
    normalize_encode(rf, bits, &mut y)
}

fn check_width(rf: &ResidueField, n: usize) -> Result<u32> {
    let bits = code_bits(rf.q);
    if bits * n as u32 > 64 {
        return Err(Error::Lattice(
            "rank × residue-field width exceeds the 64-bit point packing".into(),
        ));
    }
    Ok(bits)
}

/// All projective points with q(x) = Σ qdiag_i x_i² + Σ_{i<j} off[i][j] x_i x_j
/// equal to zero: one canonical representative per line, packed, sorted.
///
/// No point-count formula is assumed anywhere — anisotropic and minus-type
/// forms simply yield shorter (possibly empty) lists.
pub(super) fn isotropic_points(
    rf: &ResidueField,
    qdiag: &[u16],
    off: &[Vec<u16>],
) -> Result<Vec<u64>> {
    let n = qdiag.len();
    let bits = check_width(rf, n)?;
    let mut out = Vec::new();
    let mut x = vec![0u16; n];
    for lead in 0..n {
        for v in x.iter_mut() {
            *v = 0;
        }
        x[lead] = 1;
        descend(rf, bits, qdiag, off, &mut x, lead + 1, qdiag[lead], &mut out);
    }
    out.sort_unstable();
    Ok(out)
}

fn descend(
    rf: &ResidueField,
    bits: u32,
    qdiag: &[u16],
    off: &[Vec<u16>],
    x: &mut Vec<u16>,
    k: usize,
    val: u16,
    out: &mut Vec<u64>,
) {
    let n = qdiag.len();
    if k == n {
        if val == 0 {
            out.push(encode(bits, x));
        }
        return;
    }
    // S_k = Σ_{j<k} x_j·off[j][k] is fixed across all choices of x_k, so
    // each node below costs O(1) beyond this accumulation.
    let mut s = 0u16;
    for j in 0..k {
        if x[j] != 0 {
            s = rf.add(s, rf.mul(x[j], off[j][k]));
        }
    }
    for v in 0..rf.q as u16 {
        x[k] = v;
        let contrib = rf.add(rf.mul(qdiag[k], rf.mul(v, v)), rf.mul(v, s));
        descend(rf, bits, qdiag, off, x, k + 1, rf.add(val, contrib), out);
    }
    x[k] = 0;
}

/// Hermitian analogue over a degree-2 residue field: projective points with
/// Σ_{i,j} x_i·x̄_j·hbar[i][j] = 0, where conjugation is the Frobenius.
pub(super) fn isotropic_points_hermitian(
    rf: &ResidueField,
    hbar: &[Vec<u16>],
) -> Result<Vec<u64>> {
    let n = hbar.len();
    let bits = check_width(rf, n)?;
    let mut out = Vec::new();
    let mut x = vec![0u16; n];
    for lead in 0..n {
        for v in x.iter_mut() {
            *v = 0;
        }
        x[lead] = 1;
        descend_hermitian(rf, bits, hbar, &mut x, lead + 1, hbar[lead][lead], &mut out);
    }
    out.sort_unstable();
    Ok(out)
}

fn descend_hermitian(
    rf: &ResidueField,
    bits: u32,
    hbar: &[Vec<u16>],
    x: &mut Vec<u16>,
    k: usize,
    val: u16,
    out: &mut Vec<u64>,
) {
    let n = hbar.len();
    if k == n {
        if val == 0 {
            out.push(encode(bits, x));
        }
        return;
    }
    // the new terms at level k are x_k x̄_k h_kk plus u + ū for
    // u = x_k·Σ_{j<k} x̄_j·h_kj
    let mut s = 0u16;
    for j in 0..k {
        if x[j] != 0 {
            s = rf.add(s, rf.mul(rf.frobenius(x[j]), hbar[k][j]));
        }
    }
    for v in 0..rf.q as u16 {
        x[k] = v;
        let nm = rf.mul(v, rf.frobenius(v));
        let u = rf.mul(v, s);
        let contrib = rf.add(rf.mul(nm, hbar[k][k]), rf.add(u, rf.frobenius(u)));
        descend_hermitian(rf, bits, hbar, x, k + 1, rf.add(val, contrib), out);
    }
    x[k] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbers::{factor_rational_prime, QuadField};

    fn rf_over(m: i64, p: u64) -> ResidueField {
        let field = if m == 1 {
            QuadField::RATIONAL
        } else {
            QuadField::new(m).unwrap()
        };
        let ideal = &factor_rational_prime(field, p).unwrap()[0];
        ResidueField::new(ideal).unwrap()
    }

    #[test]
    fn field_elements_reduce_with_denominators() {
        let rf = rf_over(1, 3);
        let half = QuadField::RATIONAL
            .elem_from_o(OElem::ONE)
            .div(&QuadField::RATIONAL.elem_from_o(OElem::new(2, 0)));
        assert_eq!(reduce_elem(&rf, &half).unwrap(), 2); // 1/2 ≡ 2 (mod 3)
        let third = QuadField::RATIONAL
            .elem_from_o(OElem::ONE)
            .div(&QuadField::RATIONAL.elem_from_o(OElem::new(3, 0)));
        assert!(reduce_elem(&rf, &third).is_err());
        // ω/2 over Q(√5) mod (√5): ω ≡ 3, 2⁻¹ ≡ 3, so ω/2 ≡ 9 ≡ 4
        let f5 = QuadField::new(5).unwrap();
        let rf5 = rf_over(5, 5);
        let whalf = f5
            .elem_from_o(OElem::OMEGA)
            .div(&f5.elem_from_o(OElem::new(2, 0)));
        assert_eq!(reduce_elem(&rf5, &whalf).unwrap(), 4);
    }

    #[test]
    fn codes_round_trip() {
        let bits = code_bits(25);
        assert_eq!(bits, 5);
        let x = vec![7u16, 0, 24, 1];
        assert_eq!(decode(bits, encode(bits, &x), 4), x);
        assert_eq!(code_bits(2), 1);
        assert_eq!(code_bits(4), 2);
        assert_eq!(code_bits(5), 3);
        assert_eq!(code_bits(13), 4);
    }

    #[test]
    fn hyperbolic_toy_has_nine_isotropic_points() {
        // q(x) = x₁x₂ + x₃x₄ over F₂ in four variables: brute force over
        // the 15 nonzero vectors is the authority, and gives 9.
        let rf = rf_over(1, 2);
        let qdiag = vec![0u16; 4];
        let mut off = vec![vec![0u16; 4]; 4];
        off[0][1] = 1;
        off[2][3] = 1;
        let pts = isotropic_points(&rf, &qdiag, &off).unwrap();
        let mut brute = 0;
        for m in 1u64..16 {
            let x: Vec<u64> = (0..4).map(|k| (m >> k) & 1).collect();
            if (x[0] * x[1] + x[2] * x[3]) % 2 == 0 {
                brute += 1;
            }
        }
        assert_eq!(brute, 9);
        assert_eq!(pts.len(), 9);
    }

    #[test]
    fn anisotropic_plane_has_no_isotropic_points() {
        // x² + xy + y² is irreducible mod 2
        let rf = rf_over(1, 2);
        let qdiag = vec![1u16, 1];
        let off = vec![vec![0u16, 1], vec![0u16, 0]];
        let pts = isotropic_points(&rf, &qdiag, &off).unwrap();
        assert!(pts.is_empty());
    }

    #[test]
    fn sum_of_two_squares_mod_five() {
        let rf = rf_over(1, 5);
        let qdiag = vec![1u16, 1];
        let off = vec![vec![0u16; 2]; 2];
        let pts = isotropic_points(&rf, &qdiag, &off).unwrap();
        // −1 = 4 is square mod 5: exactly the lines through (1, ±2)
        assert_eq!(pts.len(), 2);
        for code in pts {
            let x = decode(code_bits(5), code, 2);
            assert_eq!(x[0], 1);
            assert!(x[1] == 2 || x[1] == 3);
        }
    }

    #[test]
    fn action_permutes_and_normalizes() {
        let rf = rf_over(1, 3);
        let bits = code_bits(3);
        // swap coordinates, scale one by 2: still a projective bijection
        let a = vec![vec![0u16, 2], vec![1, 0]];
        let codes = [
            encode(bits, &[1, 0]),
            encode(bits, &[1, 1]),
            encode(bits, &[1, 2]),
            encode(bits, &[0, 1]),
        ];
        let mut images: Vec<u64> = codes
            .iter()
            .map(|&c| act_on_code(&rf, bits, &a, c, 2))
            .collect();
        images.sort_unstable();
        images.dedup();
        assert_eq!(images.len(), 4);
        for c in images {
            let x = decode(bits, c, 2);
            assert_eq!(*x.iter().find(|&&v| v != 0).unwrap(), 1);
        }
    }

    #[test]
    fn hermitian_norm_form_is_anisotropic() {
        // h(x, x) = x·x̄ over F₄ vanishes only at zero; the zero form is
        // isotropic everywhere (the single projective point).
        let rf = rf_over(-3, 2);
        assert!(isotropic_points_hermitian(&rf, &[vec![1u16]])
            .unwrap()
            .is_empty());
        assert_eq!(
            isotropic_points_hermitian(&rf, &[vec![0u16]]).unwrap().len(),
            1
        );
    }

    #[test]
    fn hermitian_plane_matches_brute_force() {
        // h(x, y) = x₁ȳ₂ + x₂ȳ₁ on F₄²; brute force over nonzero vectors,
        // projectivized, is the authority.
        let rf = rf_over(-3, 2);
        let bits = code_bits(4);
        let hbar = vec![vec![0u16, 1], vec![1, 0]];
        let pts = isotropic_points_hermitian(&rf, &hbar).unwrap();
        let mut brute = Vec::new();
        for a in 0..4u16 {
            for b in 0..4u16 {
                if a == 0 && b == 0 {
                    continue;
                }
                let u = rf.mul(a, rf.frobenius(b));
                if rf.add(u, rf.frobenius(u)) == 0 {
                    let mut y = vec![a, b];
                    let c = normalize_encode(&rf, bits, &mut y);
                    if !brute.contains(&c) {
                        brute.push(c);
                    }
                }
            }
        }
        brute.sort_unstable();
        assert_eq!(pts, brute);
        assert_eq!(pts.len(), 3);
    }
}
