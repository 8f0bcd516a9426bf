//! The backtracking core: form-preserving maps between trace lattices,
//! built by assigning images to basis vectors one at a time among the
//! short vectors of the target, pruning on exact inner products against
//! every form carried.
//!
//! For lattices over a quadratic field the map must commute with the
//! integer matrix Ω of multiplication by ω (preserving T2 = Tr(αω⟨x,y⟩)
//! forces this), so only the even-index basis vectors are assigned by
//! search; each odd image is derived as Ω·(previous image) and then
//! checked like any other. This halves the depth and builds O_E-linearity
//! into the search space instead of filtering for it afterwards.

use std::collections::BTreeMap;

use crate::lattice::TraceLattice;
use crate::{Error, Result};

pub(super) struct Engine<'a> {
    t1a: &'a [Vec<i64>],
    t2a: Option<&'a [Vec<i64>]>,
    /// Multiplication by ω on the target lattice, when both carry one.
    omega: Option<Vec<Vec<i64>>>,
    /// Basis indices of the source assigned by search (all of them in the
    /// rational case, the even ones otherwise).
    base: Vec<usize>,
    /// Short vectors of the target, both signs.
    vecs: Vec<Vec<i64>>,
    /// T1_b·v and T2_b·v for each short vector.
    p1: Vec<Vec<i64>>,
    p2: Vec<Vec<i64>>,
    /// T1_b-norm → indices into `vecs`.
    shells: BTreeMap<i64, Vec<usize>>,
    t1b: &'a [Vec<i64>],
    t2b: Option<&'a [Vec<i64>]>,
    stack: Vec<Img>,
    nodes: u64,
    limit: u64,
}

struct Img {
    a_idx: usize,
    v: Vec<i64>,
    /// T2_b·v (empty when there is no second form; T1 products are
    /// symmetric, so only each *incoming* candidate's T1 column is needed)
    c2: Vec<i64>,
}

fn dot(x: &[i64], y: &[i64]) -> i64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// splitmix64 finalizer: cheap deterministic pseudo-randomness for
/// candidate-order rotation.
fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn matvec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Integer matrix of multiplication by ω on the interleaved ℤ-basis
/// e₀, ωe₀, e₁, ωe₁, … — block diagonal with [[0, c], [1, d]] per
/// O_E-basis vector, where ω² = c + dω.
pub(super) fn omega_matrix(t: &TraceLattice) -> Vec<Vec<i64>> {
    let (c, d) = t.field().omega_relation();
    let n = t.rank();
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..t.o_rank {
        m[2 * i + 1][2 * i] = 1;
        m[2 * i][2 * i + 1] = c;
        m[2 * i + 1][2 * i + 1] = d;
    }
    m
}

impl<'a> Engine<'a> {
    /// Prepares a search for maps from `a` into `b` (the same object for
    /// automorphisms). Callers guarantee the two carry the same structure:
    /// equal rank, same field, T2 present on both sides or neither.
    pub(super) fn new(a: &'a TraceLattice, b: &'a TraceLattice, limit: u64) -> Result<Engine<'a>> {
        let n = a.rank();
        let bound = (0..n).map(|i| a.t1[i][i]).max().unwrap_or(0);
        let mut vecs = Vec::new();
        for reps in crate::lattice::short_vectors(&b.t1, bound)?.into_values() {
            for v in reps {
                let neg = v.iter().map(|x| -x).collect();
                vecs.push(v);
                vecs.push(neg);
            }
        }
        let p1: Vec<Vec<i64>> = vecs.iter().map(|v| matvec(&b.t1, v)).collect();
        let p2: Vec<Vec<i64>> = match &b.t2 {
            Some(t2) => vecs.iter().map(|v| matvec(t2, v)).collect(),
            None => vecs.iter().map(|_| Vec::new()).collect(),
        };
        let mut shells: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (k, v) in vecs.iter().enumerate() {
            shells.entry(dot(v, &p1[k])).or_default().push(k);
        }
        let omega = a.t2.as_ref().map(|_| omega_matrix(b));
        let base = if omega.is_some() {
            (0..n).step_by(2).collect()
        } else {
            (0..n).collect()
        };
        Ok(Engine {
            t1a: &a.t1,
            t2a: a.t2.as_deref(),
            omega,
            base,
            vecs,
            p1,
            p2,
            shells,
            t1b: &b.t1,
            t2b: b.t2.as_deref(),
            stack: Vec::new(),
            nodes: 0,
            limit,
        })
    }

    /// Exact product checks of a candidate image `v` for source index `i`
    /// against itself and everything on the stack.
    fn admissible(&mut self, i: usize, v: &[i64], c1: &[i64], c2: &[i64]) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.limit {
            return Err(Error::NodeLimit(self.limit));
        }
        if dot(v, c1) != self.t1a[i][i] {
            return Ok(false);
        }
        if let Some(t2a) = self.t2a {
            if dot(v, c2) != t2a[i][i] {
                return Ok(false);
            }
        }
        for img in &self.stack {
            if dot(&img.v, c1) != self.t1a[img.a_idx][i] {
                return Ok(false);
            }
            if let Some(t2a) = self.t2a {
                // T2(v, img) and T2(img, v): the form need not be symmetric
                if dot(v, &img.c2) != t2a[i][img.a_idx] {
                    return Ok(false);
                }
                if dot(&img.v, c2) != t2a[img.a_idx][i] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Tries vecs[k] as the image of source index i, deriving and checking
    /// the companion ω-image when applicable. On success the stack grows by
    /// one entry (rational) or two (quadratic field).
    fn try_candidate(&mut self, i: usize, k: usize) -> Result<bool> {
        let v = self.vecs[k].clone();
        let c1 = self.p1[k].clone();
        let c2 = self.p2[k].clone();
        if !self.admissible(i, &v, &c1, &c2)? {
            return Ok(false);
        }
        self.stack.push(Img { a_idx: i, v, c2 });
        if let Some(omega) = &self.omega {
            let d = matvec(omega, &self.stack.last().unwrap().v);
            let d1 = matvec(self.t1b, &d);
            let d2 = match self.t2b {
                Some(t2b) => matvec(t2b, &d),
                None => Vec::new(),
            };
            if !self.admissible(i + 1, &d, &d1, &d2)? {
                self.stack.pop();
                return Ok(false);
            }
            self.stack.push(Img { a_idx: i + 1, v: d, c2: d2 });
        }
        Ok(true)
    }

    fn pop_level(&mut self) {
        self.stack.pop();
        if self.omega.is_some() {
            self.stack.pop();
        }
    }

    /// Depth-first completion from base position `pos`; on success the
    /// stack holds a full assignment and is left intact.
    fn complete(&mut self, pos: usize) -> Result<bool> {
        if pos == self.base.len() {
            return Ok(true);
        }
        let i = self.base[pos];
        let candidates = self
            .shells
            .get(&self.t1a[i][i])
            .cloned()
            .unwrap_or_default();
        for k in candidates {
            if self.try_candidate(i, k)? {
                if self.complete(pos + 1)? {
                    return Ok(true);
                }
                self.pop_level();
            }
        }
        Ok(false)
    }

    /// First full form-preserving map, as a matrix whose column j is the
    /// image of source basis vector j.
    pub(super) fn find_isometry(&mut self) -> Result<Option<Vec<Vec<i64>>>> {
        self.stack.clear();
        if !self.complete(0)? {
            return Ok(None);
        }
        Ok(Some(self.stack_to_matrix()))
    }

    /// Collects the current (complete) stack as a matrix whose column j is
    /// the image of source basis vector j.
    fn stack_to_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.t1a.len();
        let mut w = vec![vec![0i64; n]; n];
        for img in &self.stack {
            for r in 0..n {
                w[r][img.a_idx] = img.v[r];
            }
        }
        w
    }

    /// Like `complete`, but each level walks its candidate list starting
    /// from a pseudo-random offset derived from `rng`, so repeated runs
    /// reach different leaves of the search tree.
    fn complete_rotated(&mut self, pos: usize, rng: u64) -> Result<bool> {
        if pos == self.base.len() {
            return Ok(true);
        }
        let i = self.base[pos];
        let candidates = self
            .shells
            .get(&self.t1a[i][i])
            .cloned()
            .unwrap_or_default();
        if candidates.is_empty() {
            return Ok(false);
        }
        let rot = splitmix(rng.wrapping_add(pos as u64)) as usize % candidates.len();
        for t in 0..candidates.len() {
            let k = candidates[(t + rot) % candidates.len()];
            if self.try_candidate(i, k)? {
                if self.complete_rotated(pos + 1, splitmix(rng))? {
                    return Ok(true);
                }
                self.pop_level();
            }
        }
        Ok(false)
    }

    /// Up to `count` distinct non-identity automorphisms, found by
    /// independent randomized depth-first completions. Deterministic for a
    /// fixed seed; may return fewer for small groups. Much cheaper than a
    /// stabilizer chain — the elements need not generate the full group,
    /// which is fine for uses (like orbit splitting) where any subgroup
    /// gives a sound, merely finer, partition.
    pub(super) fn sample_automorphisms(
        &mut self,
        count: usize,
        seed: u64,
    ) -> Result<Vec<Vec<Vec<i64>>>> {
        let mut out: Vec<Vec<Vec<i64>>> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for attempt in 0..count as u64 {
            self.stack.clear();
            if !self.complete_rotated(0, splitmix(seed ^ (attempt.wrapping_mul(0x9e37))))? {
                break;
            }
            let w = self.stack_to_matrix();
            let identity = w
                .iter()
                .enumerate()
                .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)));
            if !identity && seen.insert(w.clone()) {
                out.push(w);
            }
        }
        Ok(out)
    }

    /// Order of the automorphism group by a stabilizer chain over the base:
    /// the level-`pos` factor is the number of admissible images of base
    /// vector `pos` that extend to a full automorphism, with all earlier
    /// base vectors pinned to themselves.
    pub(super) fn group_order(&mut self) -> Result<u128> {
        let mut total: u128 = 1;
        for pos in 0..self.base.len() {
            self.stack.clear();
            for q in 0..pos {
                let i = self.base[q];
                let e: Vec<i64> = (0..self.t1a.len())
                    .map(|r| i64::from(r == i))
                    .collect();
                let c1 = matvec(self.t1b, &e);
                let c2 = match self.t2b {
                    Some(t2b) => matvec(t2b, &e),
                    None => Vec::new(),
                };
                let ok = self.admissible(i, &e, &c1, &c2)?;
                debug_assert!(ok, "identity prefix rejected at base index {i}");
                self.stack.push(Img { a_idx: i, v: e, c2 });
                if let Some(omega) = &self.omega {
                    let d = matvec(omega, &self.stack.last().unwrap().v);
                    let d1 = matvec(self.t1b, &d);
                    let d2 = match self.t2b {
                        Some(t2b) => matvec(t2b, &d),
                        None => Vec::new(),
                    };
                    let ok = self.admissible(i + 1, &d, &d1, &d2)?;
                    debug_assert!(ok, "identity ω-companion rejected at {}", i + 1);
                    self.stack.push(Img { a_idx: i + 1, v: d, c2: d2 });
                }
            }
            let prefix_len = self.stack.len();
            let i = self.base[pos];
            let candidates = self
                .shells
                .get(&self.t1a[i][i])
                .cloned()
                .unwrap_or_default();
            let mut orbit: u128 = 0;
            for k in candidates {
                if self.try_candidate(i, k)? {
                    if self.complete(pos + 1)? {
                        orbit += 1;
                    }
                    self.stack.truncate(prefix_len);
                }
            }
            debug_assert!(orbit >= 1, "identity not found in its own orbit");
            total *= orbit;
        }
        Ok(total)
    }
}
