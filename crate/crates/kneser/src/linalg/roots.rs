//! Verified spectrum extraction. Floating-point eigenvalue hints (cyclic
//! Jacobi) are refined by dyadic Newton iteration against the exact
//! squarefree part of a characteristic polynomial, then every claimed
//! factor — integer root, irreducible quadratic, or larger block — is
//! certified by exact polynomial division. Multiplicities come from
//! repeated division, never from the hints.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{
    poly_degree, poly_derivative, poly_divide_exact, poly_eval_rational, poly_mul,
    squarefree_part,
};

/// One certified factor of a characteristic polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpectralPiece {
    /// (x − value)^multiplicity
    Rational { value: BigInt, multiplicity: usize },
    /// (x² − s·x + p)^multiplicity, irreducible over ℚ
    Quadratic { s: BigInt, p: BigInt, multiplicity: usize },
    /// an unsplit factor of degree ≥ 3 (ascending monic coefficients)
    Block { poly: Vec<BigInt>, multiplicity: usize },
}

impl SpectralPiece {
    pub fn degree(&self) -> usize {
        match self {
            SpectralPiece::Rational { multiplicity, .. } => *multiplicity,
            SpectralPiece::Quadratic { multiplicity, .. } => 2 * multiplicity,
            SpectralPiece::Block { poly, multiplicity } => poly_degree(poly) * multiplicity,
        }
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
/// Used only to seed the exact extraction; nothing downstream trusts these
/// digits.
pub fn jacobi_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let scale: f64 = m
        .iter()
        .flatten()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(1.0);
    for _sweep in 0..120 {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p][q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let (app, aqq) = (m[p][p], m[q][q]);
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let (akp, akq) = (m[k][p], m[k][q]);
                    m[k][p] = c * akp - s * akq;
                    m[p][k] = m[k][p];
                    m[k][q] = s * akp + c * akq;
                    m[q][k] = m[k][q];
                }
                m[p][p] = app - t * apq;
                m[q][q] = aqq + t * apq;
                m[p][q] = 0.0;
                m[q][p] = 0.0;
            }
        }
    }
    let mut diag: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    diag.sort_by(|a, b| a.partial_cmp(b).expect("NaN eigenvalue"));
    diag
}

const REFINE_BITS: u32 = 192;

fn round_rational(x: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    (x + half).floor().to_integer()
}

fn near_integer(x: &BigRational, tol_den: u64) -> Option<BigInt> {
    let n = round_rational(x);
    let d = (x - BigRational::from_integer(n.clone())).abs();
    if d < BigRational::new(BigInt::one(), BigInt::from(tol_den)) {
        Some(n)
    } else {
        None
    }
}

/// Newton iteration on a dyadic grid of 2^REFINE_BITS against the exact
/// polynomial g. Best effort: a bad hint returns an inaccurate value, which
/// simply fails the later exact-division checks.
fn refine_root(g: &[BigInt], gp: &[BigInt], x0: f64) -> Option<BigRational> {
    if !x0.is_finite() {
        return None;
    }
    let mut x = BigRational::from_float(x0)?;
    let grid = BigInt::one() << REFINE_BITS;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for _ in 0..14 {
        let fx = poly_eval_rational(g, &x);
        if fx.is_zero() {
            return Some(x);
        }
        let dfx = poly_eval_rational(gp, &x);
        if dfx.is_zero() {
            return None;
        }
        let next = &x - fx / dfx;
        let snapped = BigRational::new(
            (next * BigRational::from_integer(grid.clone()) + &half)
                .floor()
                .to_integer(),
            grid.clone(),
        );
        if snapped == x {
            return Some(x);
        }
        x = snapped;
    }
    Some(x)
}

fn is_perfect_square(d: &BigInt) -> bool {
    if d.is_negative() {
        return false;
    }
    let r = d.sqrt();
    &(&r * &r) == d
}

/// Strip every occurrence of `factor` from `poly`, returning the
/// multiplicity and the deflated polynomial.
fn strip_factor(poly: &mut Vec<BigInt>, factor: &[BigInt]) -> usize {
    let mut mult = 0;
    while let Some(q) = poly_divide_exact(poly, factor) {
        *poly = q;
        mult += 1;
    }
    mult
}

/// Decompose a monic integer characteristic polynomial into certified
/// pieces, guided by floating-point eigenvalue hints. The product of the
/// returned pieces always equals the input exactly: anything that cannot
/// be certified as a rational root or irreducible quadratic is kept whole
/// as a [`SpectralPiece::Block`].
pub fn extract_spectrum(cp: &[BigInt], hints: &[f64]) -> Vec<SpectralPiece> {
    let mut remaining = cp.to_vec();
    let deg = poly_degree(&remaining);
    if deg == 0 {
        return Vec::new();
    }
    let sf = squarefree_part(&remaining);
    let sfp = poly_derivative(&sf);
    let refined: Vec<Option<BigRational>> =
        hints.iter().map(|&h| refine_root(&sf, &sfp, h)).collect();
    let mut used = vec![false; refined.len()];
    let mut rationals: Vec<(BigInt, usize)> = Vec::new();
    let mut quadratics: Vec<(BigInt, BigInt, usize)> = Vec::new();
    let mut blocks: Vec<(Vec<BigInt>, usize)> = Vec::new();

    let close = |r: &BigRational, target: &BigRational| -> bool {
        (r - target).abs() < BigRational::new(BigInt::one(), BigInt::from(1_000_000u64))
    };

    // pass 1: integer roots
    let mut int_candidates: Vec<BigInt> = Vec::new();
    for r in refined.iter().flatten() {
        if let Some(n) = near_integer(r, 1_000_000) {
            if !int_candidates.contains(&n) {
                int_candidates.push(n);
            }
        }
    }
    int_candidates.sort();
    for c in int_candidates {
        let lin = vec![-c.clone(), BigInt::one()];
        let mult = strip_factor(&mut remaining, &lin);
        if mult == 0 {
            continue;
        }
        let target = BigRational::from_integer(c.clone());
        for (i, r) in refined.iter().enumerate() {
            if let Some(r) = r {
                if !used[i] && close(r, &target) {
                    used[i] = true;
                }
            }
        }
        rationals.push((c, mult));
    }

    // pass 2: irreducible quadratics from pairs of leftover hints
    'outer: loop {
        let avail: Vec<usize> = (0..refined.len())
            .filter(|&i| !used[i] && refined[i].is_some())
            .collect();
        for (ai, &i) in avail.iter().enumerate() {
            for &j in &avail[ai + 1..] {
                let (ri, rj) = (
                    refined[i].as_ref().expect("filtered"),
                    refined[j].as_ref().expect("filtered"),
                );
                let sum = ri + rj;
                let prod = ri * rj;
                let (Some(s), Some(p)) =
                    (near_integer(&sum, 1_000), near_integer(&prod, 1_000))
                else {
                    continue;
                };
                let disc = &s * &s - BigInt::from(4) * &p;
                if is_perfect_square(&disc) {
                    continue; // reducible: integer roots are pass 1's job
                }
                let quad = vec![p.clone(), -s.clone(), BigInt::one()];
                let mult = strip_factor(&mut remaining, &quad);
                if mult == 0 {
                    continue;
                }
                // mark every leftover hint near either root of the quadratic
                for (k, r) in refined.iter().enumerate() {
                    if used[k] {
                        continue;
                    }
                    if let Some(r) = r {
                        let val = poly_eval_rational(&quad, r).abs();
                        if val < BigRational::new(BigInt::one(), BigInt::from(1_000u64)) {
                            used[k] = true;
                        }
                    }
                }
                quadratics.push((s, p, mult));
                continue 'outer;
            }
        }
        break;
    }

    // pass 3: split the residual along subsets of the leftover hints
    'split: while poly_degree(&remaining) > 0 {
        let avail: Vec<usize> = (0..refined.len())
            .filter(|&i| !used[i] && refined[i].is_some())
            .collect();
        let rdeg = poly_degree(&remaining);
        for size in 3..rdeg.min(avail.len() + 1) {
            for subset in combinations(&avail, size) {
                let mut cand = vec![BigRational::from_integer(BigInt::one())];
                for &i in &subset {
                    let root = refined[i].as_ref().expect("filtered");
                    // multiply by (x − root)
                    let mut next = vec![BigRational::from_integer(BigInt::zero()); cand.len() + 1];
                    for (k, c) in cand.iter().enumerate() {
                        next[k + 1] += c;
                        next[k] -= c * root;
                    }
                    cand = next;
                }
                let mut int_cand: Vec<BigInt> = Vec::with_capacity(cand.len());
                let mut ok = true;
                for c in &cand {
                    match near_integer(c, 10_000) {
                        Some(n) => int_cand.push(n),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if !ok {
                    continue;
                }
                let mult = strip_factor(&mut remaining, &int_cand);
                if mult == 0 {
                    continue;
                }
                for &i in &subset {
                    used[i] = true;
                }
                blocks.push((int_cand, mult));
                continue 'split;
            }
        }
        break;
    }

    // whatever is left stays whole (detecting a clean power first)
    let rdeg = poly_degree(&remaining);
    if rdeg > 0 {
        let base = squarefree_part(&remaining);
        let bdeg = poly_degree(&base);
        if bdeg > 0 && bdeg < rdeg && rdeg % bdeg == 0 {
            let mut probe = remaining.clone();
            let mult = strip_factor(&mut probe, &base);
            if mult * bdeg == rdeg && poly_degree(&probe) == 0 {
                blocks.push((base, mult));
            } else {
                blocks.push((remaining.clone(), 1));
            }
        } else {
            blocks.push((remaining.clone(), 1));
        }
    }

    rationals.sort_by(|a, b| a.0.cmp(&b.0));
    quadratics.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    blocks.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));

    let mut pieces: Vec<SpectralPiece> = Vec::new();
    pieces.extend(
        rationals
            .into_iter()
            .map(|(value, multiplicity)| SpectralPiece::Rational { value, multiplicity }),
    );
    pieces.extend(
        quadratics
            .into_iter()
            .map(|(s, p, multiplicity)| SpectralPiece::Quadratic { s, p, multiplicity }),
    );
    pieces.extend(
        blocks
            .into_iter()
            .map(|(poly, multiplicity)| SpectralPiece::Block { poly, multiplicity }),
    );
    debug_assert_eq!(
        pieces.iter().map(|p| p.degree()).sum::<usize>(),
        deg,
        "spectral pieces must tile the characteristic polynomial"
    );
    pieces
}

/// All `size`-element subsets of `items`, in lexicographic index order.
fn combinations(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = items.len();
    if size > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.iter().map(|&k| items[k]).collect());
        // advance
        let mut i = size;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
        }
        idx[i] += 1;
        for k in i + 1..size {
            idx[k] = idx[k - 1] + 1;
        }
    }
}

/// Reconstruct the product of pieces (for cross-checks).
pub fn pieces_product(pieces: &[SpectralPiece]) -> Vec<BigInt> {
    let mut acc = vec![BigInt::one()];
    for piece in pieces {
        let (factor, mult) = match piece {
            SpectralPiece::Rational { value, multiplicity } => {
                (vec![-value.clone(), BigInt::one()], *multiplicity)
            }
            SpectralPiece::Quadratic { s, p, multiplicity } => (
                vec![p.clone(), -s.clone(), BigInt::one()],
                *multiplicity,
            ),
            SpectralPiece::Block { poly, multiplicity } => (poly.clone(), *multiplicity),
        };
        for _ in 0..mult {
            acc = poly_mul(&acc, &factor);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn jacobi_matches_closed_form() {
        let eig = jacobi_eigenvalues(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert!((eig[0] - 1.0).abs() < 1e-10);
        assert!((eig[1] - 3.0).abs() < 1e-10);
        // 3x3 with known spectrum {0, 3, 3}: all-ones plus 2I minus ... use
        // the all-ones matrix J: eigenvalues {3, 0, 0}
        let j = vec![vec![1.0; 3]; 3];
        let eig = jacobi_eigenvalues(&j);
        assert!(eig[0].abs() < 1e-10 && eig[1].abs() < 1e-10);
        assert!((eig[2] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn integer_roots_with_multiplicity() {
        // (x−2)²(x+5) = x³ + x² − 16x + 20
        let cp = vec![bi(20), bi(-16), bi(1), bi(1)];
        let pieces = extract_spectrum(&cp, &[2.0000001, 1.9999999, -5.0]);
        assert_eq!(
            pieces,
            vec![
                SpectralPiece::Rational { value: bi(-5), multiplicity: 1 },
                SpectralPiece::Rational { value: bi(2), multiplicity: 2 },
            ]
        );
    }

    #[test]
    fn quadratic_extraction() {
        // x² − 66x + 432 has roots 33 ± 3√73
        let cp = vec![bi(432), bi(-66), bi(1)];
        let r = 73f64.sqrt();
        let pieces = extract_spectrum(&cp, &[33.0 - 3.0 * r, 33.0 + 3.0 * r]);
        assert_eq!(
            pieces,
            vec![SpectralPiece::Quadratic { s: bi(66), p: bi(432), multiplicity: 1 }]
        );
    }

    #[test]
    fn two_quadratics_from_a_quartic() {
        // (x²−3x+1)(x²−5x+2) = x⁴ − 8x³ + 18x² − 11x + 2
        let cp = vec![bi(2), bi(-11), bi(18), bi(-8), bi(1)];
        let hints = vec![
            (3.0 - 5f64.sqrt()) / 2.0,
            (3.0 + 5f64.sqrt()) / 2.0,
            (5.0 - 17f64.sqrt()) / 2.0,
            (5.0 + 17f64.sqrt()) / 2.0,
        ];
        let pieces = extract_spectrum(&cp, &hints);
        assert_eq!(
            pieces,
            vec![
                SpectralPiece::Quadratic { s: bi(3), p: bi(1), multiplicity: 1 },
                SpectralPiece::Quadratic { s: bi(5), p: bi(2), multiplicity: 1 },
            ]
        );
    }

    #[test]
    fn quartic_block_stays_whole() {
        // x⁴ − 132x² + 1728: roots ±√(66 ± 6√73), degree 4 over ℚ
        let cp = vec![bi(1728), bi(0), bi(-132), bi(0), bi(1)];
        let inner = 6.0 * 73f64.sqrt();
        let hints = vec![
            -(66.0 + inner).sqrt(),
            -(66.0 - inner).sqrt(),
            (66.0 - inner).sqrt(),
            (66.0 + inner).sqrt(),
        ];
        let pieces = extract_spectrum(&cp, &hints);
        assert_eq!(pieces, vec![SpectralPiece::Block { poly: cp, multiplicity: 1 }]);
    }

    #[test]
    fn mixed_spectrum_end_to_end() {
        use super::super::poly::poly_mul;
        // (x − 45900)² · (x² − 66x + 432) · (x⁴ − 960x² + 62208)
        let lin = vec![bi(-45900), bi(1)];
        let quad = vec![bi(432), bi(-66), bi(1)];
        let quart = vec![bi(62208), bi(0), bi(-960), bi(0), bi(1)];
        let cp = poly_mul(
            &poly_mul(&poly_mul(&lin, &lin), &quad),
            &quart,
        );
        let r73 = 73f64.sqrt();
        let inner = 48.0 * r73;
        let hints = vec![
            45900.0,
            45900.0,
            33.0 - 3.0 * r73,
            33.0 + 3.0 * r73,
            -(480.0 + inner).sqrt(),
            -(480.0 - inner).sqrt(),
            (480.0 - inner).sqrt(),
            (480.0 + inner).sqrt(),
        ];
        let pieces = extract_spectrum(&cp, &hints);
        assert_eq!(
            pieces,
            vec![
                SpectralPiece::Rational { value: bi(45900), multiplicity: 2 },
                SpectralPiece::Quadratic { s: bi(66), p: bi(432), multiplicity: 1 },
                SpectralPiece::Block { poly: quart, multiplicity: 1 },
            ]
        );
        assert_eq!(pieces_product(&pieces), cp);
    }

    #[test]
    fn power_of_irreducible_block_detected() {
        use super::super::poly::poly_mul;
        // (x⁴ − 132x² + 1728)² with no usable hints: squarefree detection
        let quart = vec![bi(1728), bi(0), bi(-132), bi(0), bi(1)];
        let cp = poly_mul(&quart, &quart);
        let pieces = extract_spectrum(&cp, &[]);
        assert_eq!(pieces, vec![SpectralPiece::Block { poly: quart, multiplicity: 2 }]);
    }
}
