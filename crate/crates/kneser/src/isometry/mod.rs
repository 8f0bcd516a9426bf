//! Isometry tests and automorphism group orders for trace lattices.
//!
//! Everything here works on the integer form pair (T1, T2) of a
//! [`TraceLattice`]: a ℤ-linear map preserving the pair is exactly an
//! O_E-linear isometry of the source lattice, so these searches answer the
//! O_E-level classification questions. Rational lattices carry T1 alone
//! and get the plain one-form treatment.
//!
//! Orders count O_E-linear isometries only — no Galois-semilinear maps.

mod search;

use num_bigint::BigInt;

use crate::lattice::TraceLattice;
use crate::linalg::{int_mat_mul, transpose};
use crate::numbers::OElem;
use crate::{Error, Result};

/// Tuning for the backtracking searches.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Abort with [`Error::NodeLimit`] after this many candidate checks.
    pub node_limit: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            node_limit: 500_000_000,
        }
    }
}

/// A cheap isometry invariant: equal fingerprints are necessary (never
/// sufficient) for two trace lattices to be isometric. The ordering is
/// arbitrary but deterministic, so genus tables can be sorted by it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub det_t1: BigInt,
    /// Count of vectors of T1-norm 2, both signs.
    pub roots: u64,
    /// Count at T1-norm 4 — populated only for ℤ-rank ≤ 16, where that
    /// shell stays small; at rank 24 it can run to millions of vectors
    /// (and collisions there are settled by the full isometry test anyway).
    pub norm4: Option<u64>,
    /// Histogram of T1(v, w) over ordered pairs v ≠ w of norm-2 vectors.
    pub profile: Vec<(i64, u64)>,
}

/// Computes the invariant tuple of a trace lattice.
pub fn fingerprint(t: &TraceLattice) -> Result<Fingerprint> {
    let ldl = crate::linalg::ldl_from_int(&t.t1)?;
    let det = ldl.determinant();
    debug_assert!(det.is_integer());
    let deep = t.rank() <= 16;
    let shells = t.short_vectors(if deep { 4 } else { 2 })?;
    let count = |norm: i64| shells.get(&norm).map_or(0, |reps| 2 * reps.len() as u64);
    let mut norm2: Vec<Vec<i64>> = Vec::new();
    if let Some(reps) = shells.get(&2) {
        for v in reps {
            norm2.push(v.iter().map(|&x| -x).collect());
            norm2.push(v.clone());
        }
    }
    let products: Vec<Vec<i64>> = norm2
        .iter()
        .map(|v| t.t1.iter().map(|row| dot(row, v)).collect())
        .collect();
    let mut histogram = std::collections::BTreeMap::new();
    for (i, v) in norm2.iter().enumerate() {
        for (j, p) in products.iter().enumerate() {
            if i != j {
                *histogram.entry(dot(v, p)).or_insert(0u64) += 1;
            }
        }
    }
    Ok(Fingerprint {
        det_t1: det.to_integer(),
        roots: count(2),
        norm4: deep.then(|| count(4)),
        profile: histogram.into_iter().collect(),
    })
}

/// Up to `count` distinct non-identity automorphisms of the trace lattice,
/// found by seeded randomized searches (deterministic for fixed inputs).
/// They need not generate the full group.
pub fn automorphism_generators(
    t: &TraceLattice,
    count: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<Vec<Vec<Vec<i64>>>> {
    let gens = search::Engine::new(t, t, opts.node_limit)?.sample_automorphisms(count, seed)?;
    debug_assert!(gens.iter().all(|w| verify_witness(t, t, w)));
    Ok(gens)
}

/// Reads a form-pair-preserving ℤ-matrix on the interleaved basis back as
/// a matrix over the ring (entry (i,j) from the 2×2 block's first column).
/// Rational lattices pass through unchanged.
pub fn witness_to_o_matrix(t: &TraceLattice, w: &[Vec<i64>]) -> Vec<Vec<OElem>> {
    if t.t2.is_none() {
        return w
            .iter()
            .map(|row| row.iter().map(|&x| OElem::new(x, 0)).collect())
            .collect();
    }
    let n = t.o_rank;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| OElem::new(w[2 * i][2 * j], w[2 * i + 1][2 * j]))
                .collect()
        })
        .collect()
}

fn dot(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Order of the group of ℤ-isometries preserving every form the lattice
/// carries, by a stabilizer chain over backtracking searches.
pub fn automorphism_order(t: &TraceLattice) -> Result<u128> {
    automorphism_order_with(t, &SearchOptions::default())
}

pub fn automorphism_order_with(t: &TraceLattice, opts: &SearchOptions) -> Result<u128> {
    search::Engine::new(t, t, opts.node_limit)?.group_order()
}

/// Searches for a ℤ-map carrying the form pair of `a` to that of `b`.
/// Returns a witness matrix W (columns are images of a's basis) with
/// Wᵀ·T1_b·W = T1_a and likewise for T2, verified exactly before return.
pub fn are_isometric(a: &TraceLattice, b: &TraceLattice) -> Result<Option<Vec<Vec<i64>>>> {
    are_isometric_with(a, b, &SearchOptions::default())
}

pub fn are_isometric_with(
    a: &TraceLattice,
    b: &TraceLattice,
    opts: &SearchOptions,
) -> Result<Option<Vec<Vec<i64>>>> {
    if a.rank() != b.rank() {
        return Err(Error::Dimension(format!(
            "isometry test between ranks {} and {}",
            a.rank(),
            b.rank()
        )));
    }
    if a.t2.is_some() != b.t2.is_some()
        || (a.t2.is_some() && a.field() != b.field())
    {
        return Err(Error::Dimension(
            "isometry test between different scalar structures".into(),
        ));
    }
    if a.t1 == b.t1 && a.t2 == b.t2 {
        let n = a.rank();
        let id: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        return Ok(Some(id));
    }
    if fingerprint(a)? != fingerprint(b)? {
        return Ok(None);
    }
    let witness = search::Engine::new(a, b, opts.node_limit)?.find_isometry()?;
    if let Some(w) = &witness {
        if !verify_witness(a, b, w) {
            return Err(Error::Verify(
                "backtracking produced a map that fails exact verification".into(),
            ));
        }
    }
    Ok(witness)
}

/// Exact check that W carries the forms of `a` to those of `b`:
/// Wᵀ·T1_b·W = T1_a, and Wᵀ·T2_b·W = T2_a when present.
pub fn verify_witness(a: &TraceLattice, b: &TraceLattice, w: &[Vec<i64>]) -> bool {
    let wt = transpose(w);
    let check =
        |fa: &[Vec<i64>], fb: &[Vec<i64>]| int_mat_mul(&int_mat_mul(&wt, fb), w) == fa;
    if !check(&a.t1, &b.t1) {
        return false;
    }
    match (&a.t2, &b.t2) {
        (None, None) => true,
        (Some(t2a), Some(t2b)) => check(t2a, t2b),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{seed, FormKind, OLattice};
    use crate::numbers::{OElem, QuadField};

    #[test]
    fn rank_one_even_lattice_has_order_two() {
        let t = TraceLattice::rational(vec![vec![2]]);
        assert_eq!(automorphism_order(&t).unwrap(), 2);
    }

    #[test]
    fn square_gram_automorphisms_are_signed_permutations() {
        let t = TraceLattice::rational(vec![vec![2, 0], vec![0, 2]]);
        let order = automorphism_order(&t).unwrap();
        assert_eq!(order, 8);
        // direct-sum lower bound: 8 ≥ 2 · 2
        assert!(order >= 4);
    }

    #[test]
    fn e8_automorphism_order() {
        let t = seed("e8").unwrap().trace_form().unwrap();
        assert_eq!(automorphism_order(&t).unwrap(), 696_729_600);
    }

    #[test]
    fn icosian_automorphism_order_is_the_h4_order() {
        // O_E-linear isometries of the icosian lattice = the H4 reflection
        // group (symmetries of the 600-cell), order 14400 — a much smaller
        // group than the 696729600 ℤ-isometries of its trace form.
        let t = seed("icosian4").unwrap().trace_form().unwrap();
        assert_eq!(automorphism_order(&t).unwrap(), 14_400);
    }

    #[test]
    fn eisenstein_automorphism_order() {
        // Unitary automorphisms of the Eisenstein structure on E8: the
        // complex reflection group ℤ₆ × Sp₄(3) of order 155520.
        let t = seed("eisenstein_e8_hermitian")
            .unwrap()
            .trace_form()
            .unwrap();
        assert_eq!(automorphism_order(&t).unwrap(), 155_520);
    }

    #[test]
    fn icosian_and_eisenstein_trace_forms_are_e8() {
        let e8 = seed("e8").unwrap().trace_form().unwrap();
        for name in ["icosian4", "eisenstein_e8_hermitian"] {
            let t = seed(name).unwrap().trace_form().unwrap().t1_only();
            let w = are_isometric(&t, &e8).unwrap();
            let w = w.unwrap_or_else(|| panic!("{name} trace form not E8"));
            assert!(verify_witness(&t, &e8, &w));
        }
    }

    #[test]
    fn same_object_gives_identity_witness() {
        let t = seed("icosian4").unwrap().trace_form().unwrap();
        let w = are_isometric(&t, &t).unwrap().unwrap();
        for (i, row) in w.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                assert_eq!(x, i64::from(i == j));
            }
        }
    }

    #[test]
    fn e8_is_not_the_cubic_lattice() {
        let e8 = seed("e8").unwrap().trace_form().unwrap();
        let cubic = TraceLattice::rational(
            (0..8)
                .map(|i| (0..8).map(|j| i64::from(i == j)).collect())
                .collect(),
        );
        assert!(are_isometric(&e8, &cubic).unwrap().is_none());
        assert!(are_isometric(&cubic, &e8).unwrap().is_none());
        assert_ne!(fingerprint(&e8).unwrap(), fingerprint(&cubic).unwrap());
    }

    #[test]
    fn rebased_icosian_is_isometric_with_exact_witness() {
        let l = seed("icosian4").unwrap();
        let f = QuadField::new(5).unwrap();
        let fe = |u: i64, v: i64| f.elem_from_o(OElem::new(u, v));
        // U = elementary ops: row0 += ω·row2, swap rows 1,3, row3 → −row3
        let n = 4;
        let mut u = vec![vec![fe(0, 0); n]; n];
        for i in 0..n {
            u[i][i] = fe(1, 0);
        }
        for k in 0..n {
            let add = fe(0, 1).mul(&u[2][k].clone());
            u[0][k] = u[0][k].add(&add);
        }
        u.swap(1, 3);
        for k in 0..n {
            u[3][k] = u[3][k].neg();
        }
        let g = l.gram();
        let mut ug = vec![vec![fe(0, 0); n]; n];
        for r in 0..n {
            for c in 0..n {
                for k in 0..n {
                    ug[r][c] = ug[r][c].add(&u[r][k].mul(&g[k][c]));
                }
            }
        }
        let mut gram = vec![vec![fe(0, 0); n]; n];
        for r in 0..n {
            for c in 0..n {
                for k in 0..n {
                    gram[r][c] = gram[r][c].add(&ug[r][k].mul(&u[c][k]));
                }
            }
        }
        let rebased = OLattice::new(f, FormKind::Symmetric, gram).unwrap();
        let ta = l.trace_form().unwrap();
        let tb = rebased.trace_form().unwrap();
        let w = are_isometric(&ta, &tb).unwrap().expect("must be isometric");
        assert!(verify_witness(&ta, &tb, &w));
        assert_eq!(
            automorphism_order(&ta).unwrap(),
            automorphism_order(&tb).unwrap()
        );
    }

    #[test]
    fn node_limit_guard_fires() {
        let t = seed("e8").unwrap().trace_form().unwrap();
        let tiny = SearchOptions { node_limit: 50 };
        assert!(matches!(
            automorphism_order_with(&t, &tiny),
            Err(Error::NodeLimit(50))
        ));
    }

    #[test]
    fn fingerprint_is_deterministic() {
        let t = seed("e8").unwrap().trace_form().unwrap();
        assert_eq!(fingerprint(&t).unwrap(), fingerprint(&t).unwrap());
        let fp = fingerprint(&t).unwrap();
        assert_eq!(fp.det_t1, BigInt::from(1));
        assert_eq!(fp.roots, 240);
        assert_eq!(fp.norm4, Some(2160));
    }

    #[test]
    fn sampled_generators_are_automorphisms() {
        let t = seed("icosian4").unwrap().trace_form().unwrap();
        let gens = automorphism_generators(&t, 8, 7, &SearchOptions::default()).unwrap();
        assert!(!gens.is_empty());
        for w in &gens {
            assert!(verify_witness(&t, &t, w));
        }
        // deterministic for a fixed seed
        let again = automorphism_generators(&t, 8, 7, &SearchOptions::default()).unwrap();
        assert_eq!(gens, again);
        // ring-level matrices commute with multiplication by ω by
        // construction; spot-check one block reading
        let a = witness_to_o_matrix(&t, &gens[0]);
        assert_eq!(a.len(), 4);
        assert_eq!(a[0].len(), 4);
    }
}
