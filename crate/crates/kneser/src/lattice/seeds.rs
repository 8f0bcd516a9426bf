//! The seed catalogue: the even unimodular lattices every genus walk
//! starts from.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::numbers::{FieldElem, OElem, QuadField};
use crate::{Error, Result};

use super::{FormKind, OLattice};

/// Names accepted by [`seed`].
pub fn seed_names() -> &'static [&'static str] {
    &[
        "e8",
        "icosian4",
        "sqrt3_rank2",
        "e8_tensor_2",
        "e8_tensor_3",
        "e8_tensor_5",
        "eisenstein_e8_hermitian",
    ]
}

/// Looks up a catalogued lattice by name.
pub fn seed(name: &str) -> Result<OLattice> {
    match name {
        "e8" => e8(),
        "icosian4" => icosian4(),
        "sqrt3_rank2" => sqrt3_rank2(),
        "e8_tensor_2" => e8_tensor(QuadField::new(2)?),
        "e8_tensor_3" => e8_tensor(QuadField::new(3)?),
        "e8_tensor_5" => e8_tensor(QuadField::new(5)?),
        "eisenstein_e8_hermitian" => eisenstein_e8_hermitian(),
        other => Err(Error::Lattice(format!(
            "unknown seed {other:?}; known: {}",
            seed_names().join(", ")
        ))),
    }
}

/// The E8 root lattice over ℤ (Gram = Cartan matrix).
pub fn e8() -> Result<OLattice> {
    e8_tensor(QuadField::RATIONAL)
}

/// E8 ⊗ O_E: the E8 Gram read over the ring of integers of a real field.
pub fn e8_tensor(field: QuadField) -> Result<OLattice> {
    // Simply-laced diagram: chain 0-2-3-4-5-6-7 with 1 attached to 3.
    let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    let mut gram = vec![vec![0i64; 8]; 8];
    for i in 0..8 {
        gram[i][i] = 2;
    }
    for (a, b) in edges {
        gram[a][b] = -1;
        gram[b][a] = -1;
    }
    let gram = gram
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| field.elem_from_o(OElem::from_int(v)))
                .collect()
        })
        .collect();
    OLattice::new(field, FormKind::Symmetric, gram)
}

/// The icosian lattice: rank 4 over ℚ(√5), even and unimodular, with
/// τ = (1+√5)/2. Its trace form is the E8 lattice.
pub fn icosian4() -> Result<OLattice> {
    let f = QuadField::new(5)?;
    let o = |u: i64, v: i64| f.elem_from_o(OElem::new(u, v));
    // τ = ω, τ⁻¹ = τ − 1
    let gram = vec![
        vec![o(2, 0), o(0, 0), o(0, 1), o(1, -1)],
        vec![o(0, 0), o(2, 0), o(-1, 1), o(0, 1)],
        vec![o(0, 1), o(-1, 1), o(2, 0), o(0, 0)],
        vec![o(1, -1), o(0, 1), o(0, 0), o(2, 0)],
    ];
    OLattice::new(f, FormKind::Symmetric, gram)
}

/// The rank-2 lattice over ℚ(√3) with Gram [[2, √3], [√3, 2]].
pub fn sqrt3_rank2() -> Result<OLattice> {
    let f = QuadField::new(3)?;
    let o = |u: i64, v: i64| f.elem_from_o(OElem::new(u, v));
    let gram = vec![vec![o(2, 0), o(0, 1)], vec![o(0, 1), o(2, 0)]];
    OLattice::new(f, FormKind::Symmetric, gram)
}

/// A rank-4 Hermitian lattice over the Eisenstein integers (ℚ(√−3)) whose
/// trace form is even and unimodular of rank 8 — hence isometric to E8.
///
/// Construction: with θ = √−3 and O/θO ≅ F₃, take the self-dual tetracode
/// C ⊂ F₃⁴ spanned by (1,1,1,0) and (0,1,−1,1), let M ⊂ O⁴ be its preimage
/// and L = θ⁻¹M with the standard form h(x, y) = Σ xₖ·conj(yₖ). Self-duality
/// of C makes h(x, x) ∈ ℤ on L and puts the off-diagonal Gram entries in
/// θ⁻¹O, which is exactly what the trace form needs to be integral.
pub fn eisenstein_e8_hermitian() -> Result<OLattice> {
    let f = QuadField::new(-3)?;
    // θ/3 = −1/3 + (2/3)ω since θ = 2ω − 1
    let third = |num: i64| BigRational::new(BigInt::from(num), BigInt::from(3));
    let theta3 = FieldElem::new(f, third(-1), third(2));
    let m_theta3 = theta3.neg();
    let one = f.elem_one();
    let zero = f.elem_zero();
    let gram = vec![
        vec![one.clone(), zero.clone(), m_theta3.clone(), m_theta3.clone()],
        vec![zero.clone(), one.clone(), m_theta3.clone(), theta3.clone()],
        vec![theta3.clone(), theta3.clone(), one.clone(), zero.clone()],
        vec![theta3.clone(), m_theta3, zero, one],
    ];
    OLattice::new(f, FormKind::Hermitian, gram)
}
