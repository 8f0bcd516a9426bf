//! Lattices over ℤ and over the rings of integers O_E, carrying symmetric
//! bilinear or Hermitian forms, together with their integer trace forms.
//!
//! An [`OLattice`] is a free O_E-module with a Gram matrix; its
//! [`TraceLattice`] is the underlying ℤ-module of rank 2N with the pair of
//! integer forms
//!
//! * T1(x, y) = Tr(α·⟨x, y⟩)
//! * T2(x, y) = Tr(α·ω·⟨x, y⟩)
//!
//! where α is 1/δ for a totally positive generator δ of the different when
//! one exists (m = 2, 5), and 1 otherwise (ℚ, m = 3, m = −3; for m = 3 the
//! different has no totally positive generator, so T1 is even but not
//! unimodular there — harmless, since only isometry invariants are read off
//! it). A ℤ-linear map preserves the pair (T1, T2) iff it is an O_E-linear
//! isometry of the source lattice: preserving all Tr(α·ω^s⟨x, y⟩) pins down
//! ⟨gx, gy⟩ = ⟨x, y⟩ because the trace pairing is nondegenerate, and
//! preservation of T2 then forces g(ωx) = ω·g(x). This reduces O_E-isometry
//! questions to two-form ℤ-isometry questions.
//!
//! The ℤ-basis of the trace lattice interleaves the O_E-basis as
//! e₀, ωe₀, e₁, ωe₁, …, so direct sums stay visibly block diagonal.

mod enumerate;
mod seeds;

pub use enumerate::short_vectors;
pub use seeds::{seed, seed_names};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::numbers::field::{rational_from_string, rational_to_string};
use crate::numbers::{FieldElem, OElem, QuadField};
use crate::{Error, Result};

/// Which kind of form the Gram matrix represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormKind {
    /// O_E-bilinear, G = Gᵀ; field real or rational.
    Symmetric,
    /// Linear in the first argument, conjugate-linear in the second,
    /// G = conj(G)ᵀ; field imaginary quadratic.
    Hermitian,
}

/// A totally positive definite lattice over O_E (or ℤ), immutable after
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OLattice {
    field: QuadField,
    kind: FormKind,
    gram: Vec<Vec<FieldElem>>,
}

impl OLattice {
    /// Validates shape, field consistency, (conjugate-)symmetry, and total
    /// positive definiteness (via an exact LDLᵀ of the trace form — see the
    /// module docs for why that certificate is complete).
    pub fn new(field: QuadField, kind: FormKind, gram: Vec<Vec<FieldElem>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: gram.iter().map(|r| r.len()).max().unwrap_or(0),
            });
        }
        for row in &gram {
            for e in row {
                if e.field() != field {
                    return Err(Error::Lattice(
                        "Gram entry from a different field".into(),
                    ));
                }
            }
        }
        match kind {
            FormKind::Symmetric => {
                if field.is_imaginary() {
                    return Err(Error::Lattice(
                        "symmetric bilinear forms need a real field".into(),
                    ));
                }
                for i in 0..n {
                    for j in 0..i {
                        if gram[i][j] != gram[j][i] {
                            return Err(Error::Lattice(format!(
                                "Gram not symmetric at ({i},{j})"
                            )));
                        }
                    }
                }
            }
            FormKind::Hermitian => {
                if !field.is_imaginary() {
                    return Err(Error::Lattice(
                        "Hermitian forms need an imaginary quadratic field".into(),
                    ));
                }
                for i in 0..n {
                    for j in 0..=i {
                        if gram[i][j] != gram[j][i].conj() {
                            return Err(Error::Lattice(format!(
                                "Gram not conjugate-symmetric at ({i},{j})"
                            )));
                        }
                    }
                }
            }
        }
        let lat = OLattice { field, kind, gram };
        if n > 0 {
            let t = lat.trace_form()?;
            crate::linalg::ldl_from_int(&t.t1)?; // NotPositiveDefinite on failure
        }
        Ok(lat)
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    /// O_E-rank.
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<FieldElem>] {
        &self.gram
    }

    /// The trace-form scaling α: 1/δ for m ∈ {2, 5}, otherwise 1.
    pub fn alpha(&self) -> FieldElem {
        alpha_for(self.field)
    }

    /// All ⟨x, x⟩ lie in 2·O_E. For the Hermitian kind this is evenness of
    /// the trace diagonal, i.e. ⟨x, x⟩ ∈ ℤ.
    pub fn is_even(&self) -> bool {
        let two = FieldElem::from_rational(
            self.field,
            BigRational::from_integer(BigInt::from(2)),
        );
        match self.kind {
            FormKind::Symmetric => self
                .gram
                .iter()
                .enumerate()
                .all(|(i, row)| row[i].div(&two).to_o_elem().is_some()),
            FormKind::Hermitian => self
                .gram
                .iter()
                .enumerate()
                .all(|(i, row)| row[i].y.is_zero() && row[i].x.is_integer()),
        }
    }

    /// Self-duality. For the symmetric kind: det(Gram) is a unit of O_E.
    /// For the Hermitian kind the form takes values in the inverse
    /// different (only ⟨x, x⟩ lands in ℤ), so the Gram determinant is
    /// never an algebraic integer; the meaningful statement is that the
    /// underlying rank-2N ℤ-lattice is self-dual, i.e. det T1 = 1.
    pub fn is_unimodular(&self) -> bool {
        match self.kind {
            FormKind::Symmetric => match self.determinant().to_o_elem() {
                Some(o) => self.field.norm(o).unsigned_abs() == 1,
                None => false,
            },
            FormKind::Hermitian => {
                let Ok(t) = self.trace_form() else { return false };
                let Ok(ldl) = crate::linalg::ldl_from_int(&t.t1) else {
                    return false;
                };
                ldl.determinant() == BigRational::one()
            }
        }
    }

    /// Exact determinant of the Gram matrix by Gaussian elimination.
    pub fn determinant(&self) -> FieldElem {
        field_det(self.field, &self.gram)
    }

    /// Gram matrix of the dual basis: G⁻¹. The dual Gram is O_E-integral
    /// iff the lattice is unimodular.
    pub fn dual_gram(&self) -> Result<Vec<Vec<FieldElem>>> {
        field_inverse(self.field, &self.gram)
            .ok_or_else(|| Error::Lattice("singular Gram matrix".into()))
    }

    /// Orthogonal direct sum of `copies` copies.
    pub fn direct_sum(&self, copies: usize) -> OLattice {
        let n = self.rank();
        let zero = self.field.elem_zero();
        let total = n * copies;
        let mut gram = vec![vec![zero; total]; total];
        for c in 0..copies {
            for i in 0..n {
                for j in 0..n {
                    gram[c * n + i][c * n + j] = self.gram[i][j].clone();
                }
            }
        }
        OLattice {
            field: self.field,
            kind: self.kind,
            gram,
        }
    }

    /// Orthogonal direct sum with another lattice over the same ring,
    /// carrying the same form kind.
    pub fn direct_sum_with(&self, other: &OLattice) -> Result<OLattice> {
        if self.field != other.field || self.kind != other.kind {
            return Err(Error::Lattice(
                "direct sum requires matching field and form kind".into(),
            ));
        }
        let (n, m) = (self.rank(), other.rank());
        let zero = self.field.elem_zero();
        let mut gram = vec![vec![zero; n + m]; n + m];
        for i in 0..n {
            for j in 0..n {
                gram[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..m {
            for j in 0..m {
                gram[n + i][n + j] = other.gram[i][j].clone();
            }
        }
        Ok(OLattice {
            field: self.field,
            kind: self.kind,
            gram,
        })
    }

    /// The integer trace form(s). Errors if an entry fails to be integral,
    /// which signals a Gram outside the conventions above.
    pub fn trace_form(&self) -> Result<TraceLattice> {
        let n = self.rank();
        let f = self.field;
        if f.is_rational() {
            let mut t1 = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in 0..n {
                    t1[i][j] = rational_entry_to_i64(&self.gram[i][j].x)?;
                }
            }
            return Ok(TraceLattice {
                field: f,
                o_rank: n,
                t1,
                t2: None,
            });
        }
        let alpha = alpha_for(f);
        let omega = f.elem_from_o(OElem::OMEGA);
        let rank = 2 * n;
        let mut t1 = vec![vec![0i64; rank]; rank];
        let mut t2 = vec![vec![0i64; rank]; rank];
        for i in 0..n {
            for s in 0..2usize {
                for j in 0..n {
                    for t in 0..2usize {
                        // basis vectors ω^s e_i and ω^t e_j
                        let mut factor = alpha.clone();
                        if s == 1 {
                            factor = factor.mul(&omega);
                        }
                        let other = if t == 1 {
                            match self.kind {
                                FormKind::Symmetric => omega.clone(),
                                FormKind::Hermitian => omega.conj(),
                            }
                        } else {
                            f.elem_one()
                        };
                        let base = factor.mul(&other).mul(&self.gram[i][j]);
                        let tr1 = base.trace();
                        let tr2 = base.mul(&omega).trace();
                        t1[2 * i + s][2 * j + t] = rational_entry_to_i64(&tr1)?;
                        t2[2 * i + s][2 * j + t] = rational_entry_to_i64(&tr2)?;
                    }
                }
            }
        }
        Ok(TraceLattice {
            field: f,
            o_rank: n,
            t1,
            t2: Some(t2),
        })
    }

    /// ⟨x, x⟩ for x given in trace-lattice ℤ-coordinates.
    pub fn evaluate(&self, zcoords: &[i64]) -> FieldElem {
        let f = self.field;
        let n = self.rank();
        let coords: Vec<FieldElem> = if f.is_rational() {
            zcoords
                .iter()
                .map(|&a| FieldElem::from_rational(f, BigRational::from_integer(BigInt::from(a))))
                .collect()
        } else {
            (0..n)
                .map(|i| f.elem_from_o(OElem::new(zcoords[2 * i], zcoords[2 * i + 1])))
                .collect()
        };
        let mut acc = f.elem_zero();
        for i in 0..n {
            for j in 0..n {
                let cj = match self.kind {
                    FormKind::Symmetric => coords[j].clone(),
                    FormKind::Hermitian => coords[j].conj(),
                };
                acc = acc.add(&coords[i].mul(&cj).mul(&self.gram[i][j]));
            }
        }
        acc
    }

    /// Representation numbers: for each target ν (totally positive or 0),
    /// the number of x ∈ L with ⟨x, x⟩ = ν, by exact enumeration of the
    /// trace lattice up to Tr(α·ν).
    pub fn representation_numbers(
        &self,
        targets: &[FieldElem],
    ) -> Result<Vec<(FieldElem, u64)>> {
        let alpha = self.alpha();
        let mut keyed: Vec<(FieldElem, i64)> = Vec::with_capacity(targets.len());
        let mut bound = 0i64;
        for t in targets {
            if t.is_zero() {
                keyed.push((t.clone(), 0));
                continue;
            }
            if !t.is_totally_positive() {
                return Err(Error::Lattice(format!(
                    "representation target {:?} is not totally positive",
                    t
                )));
            }
            // T1-norm of any x with ⟨x,x⟩ = t: for rational lattices T1 is
            // the Gram itself, otherwise T1(x,x) = Tr(α·⟨x,x⟩).
            let tr = if self.field.is_rational() {
                t.x.clone()
            } else {
                t.mul(&alpha).trace()
            };
            if !tr.is_integer() {
                // not a value of the form on this lattice
                keyed.push((t.clone(), -1));
                continue;
            }
            let b = rational_entry_to_i64(&tr)?;
            bound = bound.max(b);
            keyed.push((t.clone(), b));
        }
        let trace = self.trace_form()?;
        let shorts = enumerate::short_vectors(&trace.t1, bound)?;
        let mut out = Vec::with_capacity(targets.len());
        for (t, b) in keyed {
            if t.is_zero() {
                out.push((t, 1));
                continue;
            }
            if b < 0 {
                out.push((t, 0));
                continue;
            }
            let mut count = 0u64;
            if let Some(reps) = shorts.get(&b) {
                for x in reps {
                    if self.evaluate(x) == t {
                        count += 2; // x and −x
                    }
                }
            }
            out.push((t, count));
        }
        Ok(out)
    }
}

/// The underlying ℤ-lattice of an [`OLattice`] with its integer form pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLattice {
    field: QuadField,
    /// O_E-rank of the source (ℤ-rank is `t1.len()`).
    pub o_rank: usize,
    pub t1: Vec<Vec<i64>>,
    /// Absent for rational lattices.
    pub t2: Option<Vec<Vec<i64>>>,
}

impl TraceLattice {
    /// Wraps a plain integer Gram as a rational trace lattice (T2 absent).
    /// This is how ℤ-lattices that never saw a quadratic field — Niemeier
    /// representatives, root lattices — enter the isometry machinery.
    pub fn rational(t1: Vec<Vec<i64>>) -> TraceLattice {
        TraceLattice {
            field: QuadField::RATIONAL,
            o_rank: t1.len(),
            t1,
            t2: None,
        }
    }

    /// The same ℤ-lattice carrying only T1, deliberately forgetting the
    /// O_E-structure — for questions like "is this trace form E8?".
    pub fn t1_only(&self) -> TraceLattice {
        TraceLattice::rational(self.t1.clone())
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.t1.len()
    }

    /// O_E-coordinates of a trace-lattice vector.
    pub fn o_coords(&self, x: &[i64]) -> Vec<OElem> {
        if self.field.is_rational() {
            x.iter().map(|&a| OElem::from_int(a)).collect()
        } else {
            (0..self.o_rank)
                .map(|i| OElem::new(x[2 * i], x[2 * i + 1]))
                .collect()
        }
    }

    /// The integer Gram of (x, y) ↦ Tr(w·α·⟨x, y⟩) for w = a + bω: equals
    /// a·T1 + b·T2. Positive definite whenever w is totally positive; this
    /// is what weighted short-vector enumeration runs on.
    pub fn weighted_gram(&self, w: OElem) -> Result<Vec<Vec<i64>>> {
        let t2 = self
            .t2
            .as_ref()
            .ok_or_else(|| Error::Lattice("rational lattice has no T2".into()))?;
        let n = self.rank();
        let mut out = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                out[i][j] = w
                    .u
                    .checked_mul(self.t1[i][j])
                    .and_then(|a| w.v.checked_mul(t2[i][j]).and_then(|b| a.checked_add(b)))
                    .ok_or_else(|| Error::Lattice("weighted Gram overflow".into()))?;
            }
        }
        Ok(out)
    }

    /// Canonical-half short vectors of T1 (see [`short_vectors`]); the full
    /// count at each norm is twice the listed length.
    pub fn short_vectors(&self, bound: i64) -> Result<BTreeMap<i64, Vec<Vec<i64>>>> {
        enumerate::short_vectors(&self.t1, bound)
    }
}

/// α = 1/δ for a totally positive different generator δ when one exists.
fn alpha_for(f: QuadField) -> FieldElem {
    match f.different_totally_positive() {
        Ok(delta) => f.elem_from_o(delta).inv(),
        Err(_) => f.elem_one(),
    }
}

fn rational_entry_to_i64(r: &BigRational) -> Result<i64> {
    if !r.is_integer() {
        return Err(Error::Lattice(format!("non-integral trace entry {r}")));
    }
    i64::try_from(r.to_integer())
        .map_err(|_| Error::Lattice("trace entry exceeds i64".into()))
}

// ----------------------------------------------------------------------
// Exact elimination over a fixed field
// ----------------------------------------------------------------------

fn field_det(f: QuadField, a: &[Vec<FieldElem>]) -> FieldElem {
    let n = a.len();
    let mut m: Vec<Vec<FieldElem>> = a.to_vec();
    let mut det = f.elem_one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return f.elem_zero();
        };
        if p != c {
            m.swap(p, c);
            det = det.neg();
        }
        det = det.mul(&m[c][c]);
        let inv = m[c][c].inv();
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let factor = m[r][c].mul(&inv);
            for k in c..n {
                let s = factor.mul(&m[c][k]);
                m[r][k] = m[r][k].sub(&s);
            }
        }
    }
    det
}

fn field_inverse(f: QuadField, a: &[Vec<FieldElem>]) -> Option<Vec<Vec<FieldElem>>> {
    let n = a.len();
    let mut m: Vec<Vec<FieldElem>> = a.to_vec();
    let mut inv: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { f.elem_one() } else { f.elem_zero() })
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(p, c);
        inv.swap(p, c);
        let piv = m[c][c].inv();
        for k in 0..n {
            m[c][k] = m[c][k].mul(&piv);
            inv[c][k] = inv[c][k].mul(&piv);
        }
        for r in 0..n {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let factor = m[r][c].clone();
            for k in 0..n {
                let s = factor.mul(&m[c][k]);
                m[r][k] = m[r][k].sub(&s);
                let s = factor.mul(&inv[c][k]);
                inv[r][k] = inv[r][k].sub(&s);
            }
        }
    }
    Some(inv)
}

// ----------------------------------------------------------------------
// JSON schema: {"field_m": int|null, "form_kind": "sym"|"herm",
//               "gram": [[{"x": "num/den", "y": "num/den"}, ...], ...]}
// ----------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct EntryWire {
    x: String,
    y: String,
}

#[derive(Serialize, Deserialize)]
struct LatticeWire {
    field_m: Option<i64>,
    form_kind: String,
    gram: Vec<Vec<EntryWire>>,
}

impl Serialize for OLattice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LatticeWire {
            field_m: if self.field.is_rational() {
                None
            } else {
                Some(self.field.m())
            },
            form_kind: match self.kind {
                FormKind::Symmetric => "sym".into(),
                FormKind::Hermitian => "herm".into(),
            },
            gram: self
                .gram
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|e| EntryWire {
                            x: rational_to_string(&e.x),
                            y: rational_to_string(&e.y),
                        })
                        .collect()
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OLattice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as DeError;
        let w = LatticeWire::deserialize(d)?;
        let field = match w.field_m {
            None => QuadField::RATIONAL,
            Some(m) => QuadField::new(m).map_err(DeError::custom)?,
        };
        let kind = match w.form_kind.as_str() {
            "sym" => FormKind::Symmetric,
            "herm" => FormKind::Hermitian,
            other => return Err(DeError::custom(format!("unknown form_kind {other:?}"))),
        };
        let gram = w
            .gram
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| {
                        let x = rational_from_string(&e.x).map_err(DeError::custom)?;
                        let y = rational_from_string(&e.y).map_err(DeError::custom)?;
                        Ok(FieldElem::new(field, x, y))
                    })
                    .collect::<std::result::Result<Vec<_>, D::Error>>()
            })
            .collect::<std::result::Result<Vec<_>, D::Error>>()?;
        OLattice::new(field, kind, gram).map_err(DeError::custom)
    }
}
