//! Gram-space basis reduction.
//!
//! Neighbour constructions hand back triangular bases whose Gram entries
//! grow by roughly a factor of Nm(𝔭) per step; iterating a genus walk on
//! unreduced Grams would blow coordinates up exponentially. This module
//! runs a Lagrange-style pair reduction directly on the Gram matrix — no
//! coordinates needed — with the vector "length" measured by the trace of
//! the (totally positive) diagonal entry.
//!
//! The moves are unimodular over O: permutations, v_j ← v_j − q·v_i for
//! q ∈ O near the Gram quotient, and for real quadratic fields a rescale
//! v_i ← ε·v_i by the fundamental unit, each accepted only when it
//! strictly shrinks a diagonal trace. Strict decrease over a discrete set
//! of positive rationals forces termination; a sweep cap is belt and
//! braces.
//!
//! Pair moves alone can stall: a Gram such as [[2,−1],[−1,4+2√3]] over
//! ℚ(√3) has unit determinant but no single elementary move improving a
//! diagonal, even though the module contains much shorter vectors on a
//! skew combination. [`strong_reduce`] escapes such local minima by
//! enumerating genuinely short vectors of the trace form, rebasing the
//! module on O-independent ones (certified unimodular through the HNF
//! index), and polishing again — the variant every walk-facing caller
//! uses.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::hermite::{ideal_index, nearest_o, o_hnf};
use crate::lattice::{FormKind, OLattice, TraceLattice};
use crate::numbers::{FieldElem, OElem, QuadField};
use crate::Result;

/// Trace of a diagonal entry: the size functional driving every accept.
fn size(e: &FieldElem) -> BigRational {
    e.trace()
}

/// v_j ← v_j − q·v_i on the Gram: row j, then column j (conjugated for
/// Hermitian forms).
fn elementary(g: &mut [Vec<FieldElem>], kind: FormKind, j: usize, i: usize, q: OElem, f: QuadField) {
    let qf = f.elem_from_o(q);
    let n = g.len();
    for k in 0..n {
        let t = g[i][k].mul(&qf);
        g[j][k] = g[j][k].sub(&t);
    }
    let qc = match kind {
        FormKind::Symmetric => qf,
        FormKind::Hermitian => qf.conj(),
    };
    for k in 0..n {
        let t = g[k][i].mul(&qc);
        g[k][j] = g[k][j].sub(&t);
    }
}

/// v_i ← u·v_i for a unit u (real fields; the diagonal picks up u²).
fn rescale(g: &mut [Vec<FieldElem>], i: usize, u: OElem, f: QuadField) {
    let uf = f.elem_from_o(u);
    let n = g.len();
    for k in 0..n {
        g[i][k] = g[i][k].mul(&uf);
    }
    for k in 0..n {
        g[k][i] = g[k][i].mul(&uf);
    }
}

/// Simultaneous row/column permutation sorting the diagonal by size.
fn sort_by_size(g: &mut Vec<Vec<FieldElem>>) -> bool {
    let n = g.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| size(&g[a][a]).cmp(&size(&g[b][b])).then(a.cmp(&b)));
    if order.iter().enumerate().all(|(pos, &idx)| pos == idx) {
        return false;
    }
    let old = g.clone();
    for a in 0..n {
        for b in 0..n {
            g[a][b] = old[order[a]][order[b]].clone();
        }
    }
    true
}

/// Predicted diagonal entry of v_j − q·v_i.
fn predicted(
    g: &[Vec<FieldElem>],
    kind: FormKind,
    j: usize,
    i: usize,
    q: OElem,
    f: QuadField,
) -> FieldElem {
    let qf = f.elem_from_o(q);
    let qc = match kind {
        FormKind::Symmetric => qf.clone(),
        FormKind::Hermitian => qf.conj(),
    };
    // g_jj − q·g_ij − q̄·g_ji + q·q̄·g_ii
    g[j][j]
        .sub(&qf.mul(&g[i][j]))
        .sub(&qc.mul(&g[j][i]))
        .add(&qf.mul(&qc).mul(&g[i][i]))
}

/// Reduces a Gram matrix in place and returns it, sorted by diagonal size.
/// The output describes the same lattice in a new O-basis.
pub(super) fn reduce_gram(
    f: QuadField,
    kind: FormKind,
    mut g: Vec<Vec<FieldElem>>,
) -> Vec<Vec<FieldElem>> {
    let n = g.len();
    if n < 1 {
        return g;
    }
    let offsets: &[(i64, i64)] = if f.is_rational() {
        &[(0, 0), (1, 0), (-1, 0)]
    } else {
        &[
            (0, 0),
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (-1, -1),
            (1, -1),
            (-1, 1),
        ]
    };
    let unit_moves: Vec<OElem> = if f.is_real() && !f.is_rational() {
        let eps = f.fundamental_unit();
        vec![eps, f.unit_inverse(eps)]
    } else {
        Vec::new()
    };
    for _sweep in 0..64 {
        let mut changed = sort_by_size(&mut g);
        for i in 0..n {
            for j in i + 1..n {
                let current = size(&g[j][j]);
                let mu = g[j][i].div(&g[i][i]);
                let q0 = nearest_o(&mu);
                let mut best: Option<(BigRational, OElem)> = None;
                for &(du, dv) in offsets {
                    let q = q0 + OElem::new(du, dv);
                    if q.is_zero() {
                        continue;
                    }
                    let s = size(&predicted(&g, kind, j, i, q, f));
                    if s < current && best.as_ref().map_or(true, |(b, _)| s < *b) {
                        best = Some((s, q));
                    }
                }
                if let Some((_, q)) = best {
                    elementary(&mut g, kind, j, i, q, f);
                    changed = true;
                }
            }
        }
        for i in 0..n {
            // unit rescale: diagonal trace can drop when the two real
            // embeddings of g_ii are far apart
            loop {
                let current = size(&g[i][i]);
                let better = unit_moves.iter().copied().find(|&u| {
                    let u2 = f.mul(u, u);
                    size(&f.elem_from_o(u2).mul(&g[i][i])) < current
                });
                match better {
                    Some(u) => {
                        rescale(&mut g, i, u, f);
                        changed = true;
                    }
                    None => break,
                }
            }
        }
        if !changed {
            break;
        }
    }
    sort_by_size(&mut g);
    g
}

/// Diagonal entries of integral Grams have integer trace.
fn int_trace(e: &FieldElem) -> i64 {
    e.trace().to_integer().to_i64().unwrap_or(i64::MAX)
}

/// B·G·B̂ᵀ for a square O-matrix B over the same field, conjugating the
/// right factor for Hermitian forms. Two rectangular passes with zero
/// skips keep this at O(n³) exact products.
pub(super) fn congruence(
    f: QuadField,
    kind: FormKind,
    g: &[Vec<FieldElem>],
    b: &[Vec<FieldElem>],
) -> Vec<Vec<FieldElem>> {
    let n = b.len();
    let herm = kind == FormKind::Hermitian;
    let mut c = vec![vec![f.elem_zero(); n]; n];
    for i in 0..n {
        for (j, bij) in b[i].iter().enumerate() {
            if bij.is_zero() {
                continue;
            }
            for k in 0..n {
                if !g[j][k].is_zero() {
                    c[i][k] = c[i][k].add(&bij.mul(&g[j][k]));
                }
            }
        }
    }
    let mut out = vec![vec![f.elem_zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            let mut s = f.elem_zero();
            for j in 0..n {
                if c[i][j].is_zero() || b[k][j].is_zero() {
                    continue;
                }
                let bkj = if herm { b[k][j].conj() } else { b[k][j].clone() };
                s = s.add(&c[i][j].mul(&bkj));
            }
            out[i][k] = s;
        }
    }
    out
}

/// Determinant and inverse over the field by Gauss–Jordan elimination on
/// the augmented matrix. None when singular.
fn field_det_inv(
    f: QuadField,
    m: &[Vec<FieldElem>],
) -> Option<(FieldElem, Vec<Vec<FieldElem>>)> {
    let n = m.len();
    let mut a: Vec<Vec<FieldElem>> = m.to_vec();
    let mut inv: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { f.elem_one() } else { f.elem_zero() })
                .collect()
        })
        .collect();
    let mut det = f.elem_one();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        if p != c {
            a.swap(c, p);
            inv.swap(c, p);
            det = det.neg();
        }
        let piv = a[c][c].clone();
        det = det.mul(&piv);
        for k in 0..n {
            a[c][k] = a[c][k].div(&piv);
            inv[c][k] = inv[c][k].div(&piv);
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let q = a[r][c].clone();
            for k in 0..n {
                let t = q.mul(&a[c][k]);
                a[r][k] = a[r][k].sub(&t);
                let t = q.mul(&inv[c][k]);
                inv[r][k] = inv[r][k].sub(&t);
            }
        }
    }
    Some((det, inv))
}

/// Drives the index of a square short-vector set down to 1 by swapping
/// rows for other scan vectors. Writing a candidate w in field coordinates
/// of the current set, u = w·S⁻¹, replacing row i multiplies the index by
/// |Nm(u_i)| — any fractional coordinate is a strict improvement. Each
/// pass takes the best swap over the whole scan; the index is a positive
/// integer, so this terminates. None when no swap makes progress.
fn exchange_to_unimodular(
    f: QuadField,
    scan_rows: &[Vec<FieldElem>],
    mut s: Vec<Vec<FieldElem>>,
) -> Option<Vec<Vec<FieldElem>>> {
    let n = s.len();
    let one = BigRational::one();
    for _ in 0..32 {
        let (det, inv) = field_det_inv(f, &s)?;
        if det.norm().abs() == one {
            return Some(s);
        }
        // best (|Nm u_i|, scan position, slot) over all candidate swaps
        let mut best: Option<(BigRational, usize, usize)> = None;
        for (wi, w) in scan_rows.iter().enumerate() {
            for i in 0..n {
                let mut ui = f.elem_zero();
                for (k, wk) in w.iter().enumerate() {
                    ui = ui.add(&wk.mul(&inv[k][i]));
                }
                if ui.is_zero() {
                    continue;
                }
                let nm = ui.norm().abs();
                if nm >= one {
                    continue;
                }
                if best
                    .as_ref()
                    .map_or(true, |(b, _, _)| nm < *b)
                {
                    best = Some((nm, wi, i));
                }
            }
        }
        let (_, wi, i) = best?;
        s[i] = scan_rows[wi].clone();
    }
    None
}

/// A new O-basis built from short trace-form vectors, certified
/// unimodular, or None when norm ≤ `bound` does not reach one.
///
/// Vectors are scanned in ascending shells and the first n that stay
/// field-independent (over O in its fraction field that is exactly O-rank
/// independence) are collected. When they span O^n outright they are the
/// answer verbatim, keeping their form norms intact; the shortest vectors
/// of a lattice can also sit inside a proper finite-index submodule, in
/// which case [`exchange_to_unimodular`] swaps rows for slightly longer
/// scan vectors until the span is everything. Should even that stall, the
/// HNF of a growing scan prefix is the last resort: its index against O^n
/// can only shrink as rows join, and the triangular basis is returned
/// once the prefix generates the whole module — HNF rows are
/// combinations, so longer, but they escape traps the short sets cannot.
fn unimodular_short_basis(
    f: QuadField,
    t: &TraceLattice,
    bound: i64,
    n: usize,
) -> Result<Option<Vec<Vec<FieldElem>>>> {
    let shells = t.short_vectors(bound)?;
    let scan: Vec<&Vec<i64>> = shells.values().flatten().take(100_000).collect();
    let as_row = |zv: &[i64]| -> Vec<FieldElem> {
        t.o_coords(zv)
            .into_iter()
            .map(|o| f.elem_from_o(o))
            .collect()
    };
    // greedy echelon over the field marks where rank n is first reached
    let mut echelon: Vec<(usize, Vec<FieldElem>)> = Vec::new();
    let mut chosen: Vec<Vec<FieldElem>> = Vec::new();
    let mut cut = None;
    for (at, zv) in scan.iter().enumerate() {
        let row = as_row(zv);
        let mut work = row.clone();
        for (pc, er) in &echelon {
            if work[*pc].is_zero() {
                continue;
            }
            let q = work[*pc].div(&er[*pc]);
            for k in 0..n {
                let d = q.mul(&er[k]);
                work[k] = work[k].sub(&d);
            }
        }
        let Some(pc) = (0..n).find(|&k| !work[k].is_zero()) else {
            continue;
        };
        echelon.push((pc, work));
        chosen.push(row);
        if chosen.len() == n {
            cut = Some(at + 1);
            break;
        }
    }
    let Some(cut) = cut else { return Ok(None) };
    let swap_pool: Vec<Vec<FieldElem>> = scan.iter().take(256).map(|zv| as_row(zv)).collect();
    if let Some(s) = exchange_to_unimodular(f, &swap_pool, chosen) {
        return Ok(Some(s));
    }
    let mut take = cut;
    loop {
        let rows: Vec<Vec<FieldElem>> = scan[..take].iter().map(|zv| as_row(zv)).collect();
        let h = o_hnf(&f, rows)?;
        let mut index = BigInt::one();
        for (i, row) in h.iter().enumerate() {
            index *= ideal_index(&f, &row[i]);
        }
        if index == BigInt::one() {
            return Ok(Some(h));
        }
        if take == scan.len() {
            return Ok(None);
        }
        take = (take + 4 * n).min(scan.len());
    }
}

/// Pair reduction plus a vector-insertion rescue. After the cheap sweeps,
/// any stubbornly long diagonal triggers rounds of: enumerate short
/// trace-form vectors under an escalating bound, rebase the module on a
/// unimodular basis extracted from them, and keep the congruent Gram when
/// its diagonal profile (longest entry, then total) strictly shrinks.
/// Lexicographic decrease over positive integers terminates; every
/// intermediate transform is certified in GL_n(O), so the output presents
/// the same O-lattice throughout.
pub(super) fn strong_reduce(
    f: QuadField,
    kind: FormKind,
    g: Vec<Vec<FieldElem>>,
) -> Result<Vec<Vec<FieldElem>>> {
    let mut g = reduce_gram(f, kind, g);
    let n = g.len();
    if n == 0 {
        return Ok(g);
    }
    // shortest possible diagonal: 2 (symmetric, diagonal in 2O and totally
    // positive) or 1 (Hermitian, rational diagonal)
    let min_diag = match kind {
        FormKind::Symmetric => OElem::from_int(2),
        FormKind::Hermitian => OElem::ONE,
    };
    let floor = int_trace(&f.elem_from_o(min_diag));
    for _round in 0..12 {
        let maxdiag = (0..n).map(|i| int_trace(&g[i][i])).max().unwrap_or(0);
        let sumdiag: i64 = (0..n).map(|i| int_trace(&g[i][i])).sum();
        if maxdiag <= floor {
            break;
        }
        let t = OLattice::new(f, kind, g.clone())?.trace_form()?;
        // Escalate the enumeration bound gently. The basis vectors
        // themselves have trace norms at most maxdiag, so the search
        // cannot need more than that; the 32 cap keeps shell sizes sane
        // on bad rounds rather than re-creating the blowup being fixed.
        let cap = maxdiag.min(32);
        let mut improved = false;
        let mut bound = 2i64;
        loop {
            if let Some(b) = unimodular_short_basis(f, &t, bound, n)? {
                let candidate = reduce_gram(f, kind, congruence(f, kind, &g, &b));
                let cmax = (0..n).map(|i| int_trace(&candidate[i][i])).max().unwrap_or(0);
                let csum: i64 = (0..n).map(|i| int_trace(&candidate[i][i])).sum();
                if cmax < maxdiag || (cmax == maxdiag && csum < sumdiag) {
                    g = candidate;
                    improved = true;
                    break;
                }
            }
            if bound >= cap {
                break;
            }
            bound = (bound * 2).min(cap);
        }
        if !improved {
            break;
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{seed, OLattice};
    use num_traits::Zero;

    /// U·G·U^† for an O-matrix U given as (u, v) pairs.
    fn rebase(
        f: QuadField,
        kind: FormKind,
        g: &[Vec<FieldElem>],
        u: &[Vec<(i64, i64)>],
    ) -> Vec<Vec<FieldElem>> {
        let n = g.len();
        let uf: Vec<Vec<FieldElem>> = u
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&(a, b)| f.elem_from_o(OElem::new(a, b)))
                    .collect()
            })
            .collect();
        let mut out = vec![vec![f.elem_zero(); n]; n];
        for r in 0..n {
            for c in 0..n {
                let mut acc = f.elem_zero();
                for a in 0..n {
                    for b in 0..n {
                        let right = match kind {
                            FormKind::Symmetric => uf[c][b].clone(),
                            FormKind::Hermitian => uf[c][b].conj(),
                        };
                        acc = acc.add(&uf[r][a].mul(&g[a][b]).mul(&right));
                    }
                }
                out[r][c] = acc;
            }
        }
        out
    }

    fn diag_sizes(g: &[Vec<FieldElem>]) -> Vec<BigRational> {
        (0..g.len()).map(|i| g[i][i].trace()).collect()
    }

    #[test]
    fn e8_cartan_gram_is_already_reduced() {
        let l = seed("e8").unwrap();
        let before = l.gram().to_vec();
        let after = reduce_gram(l.field(), l.kind(), before.clone());
        assert_eq!(before, after);
    }

    #[test]
    fn rebased_icosian_comes_back_short() {
        let l = seed("icosian4").unwrap();
        let f = l.field();
        // a few elementary moves with unit and ω coefficients
        let u = vec![
            vec![(1, 0), (2, 1), (0, 0), (0, 0)],
            vec![(0, 0), (1, 0), (0, 0), (0, 0)],
            vec![(0, 1), (0, 0), (1, 0), (3, -1)],
            vec![(0, 0), (0, 0), (0, 0), (1, 0)],
        ];
        let messy = rebase(f, l.kind(), l.gram(), &u);
        assert!(diag_sizes(&messy).iter().any(|s| *s > BigRational::from_integer(4.into())));
        let red = reduce_gram(f, l.kind(), messy);
        let four = BigRational::from_integer(4.into());
        assert_eq!(diag_sizes(&red), vec![four.clone(), four.clone(), four.clone(), four]);
        // same lattice: the reduced Gram is an isometric O-lattice
        let as_lattice = OLattice::new(f, l.kind(), red).unwrap();
        let w = crate::isometry::are_isometric(
            &as_lattice.trace_form().unwrap(),
            &l.trace_form().unwrap(),
        )
        .unwrap();
        assert!(w.is_some());
    }

    #[test]
    fn rebased_hermitian_seed_comes_back_short() {
        let l = seed("eisenstein_e8_hermitian").unwrap();
        let f = l.field();
        let u = vec![
            vec![(1, 0), (0, 0), (1, 1), (0, 0)],
            vec![(0, 1), (1, 0), (0, 0), (-2, 0)],
            vec![(0, 0), (0, 0), (1, 0), (0, 0)],
            vec![(0, 0), (0, 0), (0, 1), (1, 0)],
        ];
        let messy = rebase(f, l.kind(), l.gram(), &u);
        let red = reduce_gram(f, l.kind(), messy);
        let two = BigRational::from_integer(2.into());
        assert_eq!(diag_sizes(&red), vec![two.clone(), two.clone(), two.clone(), two]);
        let as_lattice = OLattice::new(f, l.kind(), red).unwrap();
        let w = crate::isometry::are_isometric(
            &as_lattice.trace_form().unwrap(),
            &l.trace_form().unwrap(),
        )
        .unwrap();
        assert!(w.is_some());
    }

    #[test]
    fn inert_five_neighbours_reduce_to_short_diagonals() {
        // Pair sweeps alone leave most neighbours at the inert prime 5 of
        // ℚ(√3) with diagonal traces in the dozens (worst observed: 128),
        // which downstream isometry tests cannot afford to enumerate. The
        // insertion pass caps them at 8.
        let l = seed("sqrt3_rank2").unwrap().direct_sum(2);
        let p5 = crate::numbers::factor_rational_prime(l.field(), 5)
            .unwrap()
            .remove(0);
        let lines = crate::neighbours::isotropic_lines(&l, &p5).unwrap();
        assert_eq!(lines.len(), 676);
        let eight = BigRational::from_integer(8.into());
        for line in lines {
            let nb = crate::neighbours::kneser_neighbour(&l, &p5, line).unwrap();
            let worst = diag_sizes(nb.gram()).into_iter().max().unwrap();
            assert!(worst <= eight, "line {line}: diagonal trace {worst}");
        }
    }

    #[test]
    fn unit_rescale_balances_embeddings() {
        // 2ω² over ℚ(√5) has trace 6; the associate 2 has trace 4
        let f = QuadField::new(5).unwrap();
        let w2 = f.mul(OElem::OMEGA, OElem::OMEGA);
        let g = vec![vec![f.elem_from_o(f.scale(2, w2))]];
        let red = reduce_gram(f, FormKind::Symmetric, g);
        assert_eq!(red[0][0], f.elem_from_o(OElem::new(2, 0)));
        assert!(red[0][0].sub(&f.elem_from_o(OElem::new(2, 0))).is_zero());
    }
}
