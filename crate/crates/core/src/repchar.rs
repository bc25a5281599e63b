//! Numerical engine for irreducible characters and representations of a
//! small table algebra, independent of any wedge structure.
//!
//! Everything is done in the weighted basis `b_i ↦ sqrt(w_i)·b_i` with
//! `w_i = λ[i][i*][0]`. There the left- and right-regular matrices of `x*`
//! are the adjoints of those of `x`, so self-adjoint elements act by
//! Hermitian matrices and can be diagonalised with a Hermitian solver.
//!
//! * Wedderburn components are found by splitting the regular module with
//!   random self-adjoint central elements until every central basis element
//!   acts by a scalar on each piece.
//! * Inside a component of dimension `n²`, right multiplication commutes
//!   with the left action, so an eigenspace of a generic self-adjoint right
//!   multiplier restricted to the component is a minimal left ideal.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::TableAlgebra;
use crate::closed::ClosedSubset;
use crate::error::{Error, Result};
use crate::homquot::quotient;

type C = Complex64;

/// Tolerance used when comparing computed character values.
pub const CHAR_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct EngineConfig {
    pub seed: u64,
    /// Relative gap below which eigenvalues are treated as equal.
    pub cluster_tol: f64,
    pub max_reseeds: usize,
    /// Largest rank accepted by [`irr_representations`].
    pub rep_cap: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            cluster_tol: 1e-6,
            max_reseeds: 8,
            rep_cap: 32,
        }
    }
}

impl EngineConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }
}

/// An irreducible character: values on the basis, degree `χ(1)` and, once
/// computed, the standard multiplicity `ζ_χ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Character {
    pub values: Vec<C>,
    pub degree: usize,
    pub multiplicity: Option<f64>,
}

impl Character {
    pub fn new(values: Vec<C>) -> Self {
        let degree = values[0].re.round().max(0.0) as usize;
        Self {
            values,
            degree,
            multiplicity: None,
        }
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| C::new(x, 0.0)).collect())
    }

    /// Whether this is the degree map of `a`.
    pub fn is_degree_character(&self, a: &TableAlgebra) -> bool {
        self.values
            .iter()
            .zip(a.degrees())
            .all(|(v, &d)| (v - C::new(d, 0.0)).norm() <= CHAR_TOL * d.max(1.0))
    }

    /// Largest entrywise distance to another value vector.
    pub fn distance(&self, other: &[C]) -> f64 {
        self.values
            .iter()
            .zip(other)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).norm()))
    }
}

/// A matrix representation: one `n×n` matrix per basis element.
#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub dimension: usize,
    pub matrices: Vec<DMatrix<C>>,
}

impl Representation {
    /// Traces of the matrices.
    pub fn character(&self) -> Vec<C> {
        self.matrices.iter().map(|m| m.trace()).collect()
    }

    /// Checks `M_0 = I` and `M_i M_j = Σ_k λ[i][j][k] M_k`; returns the first
    /// failing pair.
    pub fn check(&self, a: &TableAlgebra, tol: f64) -> std::result::Result<(), (usize, usize)> {
        let n = self.dimension;
        let d = a.rank();
        if self.matrices.len() != d {
            return Err((0, 0));
        }
        if (&self.matrices[0] - DMatrix::<C>::identity(n, n)).norm() > tol {
            return Err((0, 0));
        }
        let scale = self
            .matrices
            .iter()
            .fold(1.0f64, |m, x| m.max(x.norm()));
        for i in 0..d {
            for j in 0..d {
                let lhs = &self.matrices[i] * &self.matrices[j];
                let mut rhs = DMatrix::<C>::zeros(n, n);
                for (k, &l) in a.product(i, j).iter().enumerate() {
                    if l != 0.0 {
                        rhs += &self.matrices[k] * C::new(l, 0.0);
                    }
                }
                if (lhs - rhs).norm() > tol * scale * scale {
                    return Err((i, j));
                }
            }
        }
        Ok(())
    }
}

fn to_complex(m: &DMatrix<f64>) -> DMatrix<C> {
    m.map(|x| C::new(x, 0.0))
}

/// Left-regular representation `(L_i)[k][j] = λ[i][j][k]`.
pub fn regular_representation(a: &TableAlgebra) -> Representation {
    Representation {
        dimension: a.rank(),
        matrices: (0..a.rank()).map(|i| to_complex(&a.left_matrix(i))).collect(),
    }
}

/// Basis of the center `{z : z b_i = b_i z ∀i}`, as the null space of the
/// stacked commutator system.
pub fn center_basis(a: &TableAlgebra) -> Vec<DVector<f64>> {
    let d = a.rank();
    let m = DMatrix::from_fn(d * d, d, |row, j| {
        let (i, k) = (row / d, row % d);
        a.lambda(j, i, k) - a.lambda(i, j, k)
    });
    null_space(&m, 1e-8)
}

fn null_space(m: &DMatrix<f64>, rel: f64) -> Vec<DVector<f64>> {
    let d = m.ncols();
    if m.iter().all(|&x| x == 0.0) {
        return (0..d).map(|i| DVector::from_fn(d, |k, _| if k == i { 1.0 } else { 0.0 })).collect();
    }
    let gram = m.transpose() * m;
    let eig = SymmetricEigen::new(gram);
    let smax = eig.eigenvalues.amax().max(1.0);
    eig.eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &s)| s.max(0.0).sqrt() <= rel * smax.sqrt())
        .map(|(r, _)| eig.eigenvectors.column(r).into_owned())
        .collect()
}

/// Weighted-basis helpers shared by the character and representation paths.
struct Weighted {
    left: Vec<DMatrix<C>>,
    right: Vec<DMatrix<C>>,
    star: Vec<usize>,
}

impl Weighted {
    fn new(a: &TableAlgebra) -> Self {
        let d = a.rank();
        let sq: Vec<f64> = (0..d).map(|i| a.lambda(i, a.star(i), 0).sqrt()).collect();
        let conj = |m: DMatrix<f64>| DMatrix::from_fn(d, d, |k, j| C::new(sq[k] * m[(k, j)] / sq[j], 0.0));
        Self {
            left: (0..d).map(|i| conj(a.left_matrix(i))).collect(),
            right: (0..d).map(|i| conj(a.right_matrix(i))).collect(),
            star: a.star_map().to_vec(),
        }
    }

    fn combine(ops: &[DMatrix<C>], x: &[C]) -> DMatrix<C> {
        let n = ops[0].nrows();
        let mut out = DMatrix::<C>::zeros(n, n);
        for (op, &c) in ops.iter().zip(x) {
            if c != C::new(0.0, 0.0) {
                out += op * c;
            }
        }
        out
    }

    /// Coefficients of `x + x*` for `x = Σ c_j v_j`.
    fn self_adjoint(&self, vectors: &[Vec<f64>], coeffs: &[C]) -> Vec<C> {
        let d = self.star.len();
        let mut out = vec![C::new(0.0, 0.0); d];
        for (v, &c) in vectors.iter().zip(coeffs) {
            for i in 0..d {
                if v[i] != 0.0 {
                    out[i] += c * v[i];
                    out[self.star[i]] += c.conj() * v[i];
                }
            }
        }
        out
    }
}

fn random_coeffs(rng: &mut ChaCha8Rng, n: usize) -> Vec<C> {
    (0..n)
        .map(|_| C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

/// Splits the column space of `v` by eigenspaces of the Hermitian
/// compression `v† op v`. Returns the pieces (orthonormal column bases).
fn split_by(v: &DMatrix<C>, op: &DMatrix<C>, cluster_tol: f64) -> Vec<DMatrix<C>> {
    let g = v.adjoint() * op * v;
    let g = (&g + g.adjoint()) * C::new(0.5, 0.0);
    let eig = SymmetricEigen::new(g);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for &idx in &order {
        let ev = eig.eigenvalues[idx];
        if clusters.is_empty() || ev - last > cluster_tol * scale {
            clusters.push(vec![idx]);
        } else {
            clusters.last_mut().unwrap().push(idx);
        }
        last = ev;
    }
    clusters
        .into_iter()
        .map(|cols| {
            let w = DMatrix::from_fn(eig.eigenvectors.nrows(), cols.len(), |r, c| {
                eig.eigenvectors[(r, cols[c])]
            });
            v * w
        })
        .collect()
}

fn acts_by_scalar(v: &DMatrix<C>, op: &DMatrix<C>, tol: f64) -> bool {
    let m = v.ncols() as f64;
    let compressed = v.adjoint() * op * v;
    let alpha = compressed.trace() / C::new(m, 0.0);
    let resid = (op * v - v * alpha).norm();
    resid <= tol * op.norm().max(1.0)
}

/// Orthonormal bases of the Wedderburn components inside the weighted
/// regular module.
fn wedderburn_components(
    a: &TableAlgebra,
    w: &Weighted,
    cfg: &EngineConfig,
) -> Result<Vec<DMatrix<C>>> {
    let d = a.rank();
    let center: Vec<Vec<f64>> = center_basis(a).into_iter().map(|v| v.iter().copied().collect()).collect();
    let central_ops: Vec<DMatrix<C>> = center
        .iter()
        .map(|z| {
            let x: Vec<C> = z.iter().map(|&r| C::new(r, 0.0)).collect();
            Weighted::combine(&w.left, &x)
        })
        .collect();
    let scalar_tol = cfg.cluster_tol;

    'attempt: for attempt in 0..=cfg.max_reseeds {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(attempt as u64)));
        let mut done: Vec<DMatrix<C>> = Vec::new();
        let mut work = vec![DMatrix::<C>::identity(d, d)];
        let mut stalls = 0;
        while let Some(v) = work.pop() {
            if central_ops.iter().all(|z| acts_by_scalar(&v, z, scalar_tol)) {
                done.push(v);
                continue;
            }
            let coeffs = random_coeffs(&mut rng, center.len());
            let x = w.self_adjoint(&center, &coeffs);
            let op = Weighted::combine(&w.left, &x);
            let pieces = split_by(&v, &op, cfg.cluster_tol);
            if pieces.len() == 1 {
                stalls += 1;
                if stalls > 4 * d {
                    continue 'attempt;
                }
            }
            work.extend(pieces);
        }
        if done.len() != center.len() {
            continue 'attempt;
        }
        if done.iter().any(|v| {
            let n = (v.ncols() as f64).sqrt().round() as usize;
            n * n != v.ncols()
        }) {
            if attempt == cfg.max_reseeds {
                let bad = done.iter().find(|v| {
                    let n = (v.ncols() as f64).sqrt().round() as usize;
                    n * n != v.ncols()
                });
                return Err(Error::NonIntegerDegree(bad.map_or(0.0, |v| (v.ncols() as f64).sqrt())));
            }
            continue 'attempt;
        }
        return Ok(done);
    }
    Err(Error::SplitFailure(cfg.max_reseeds + 1))
}

fn cmp_values(x: &[C], y: &[C]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    for (a, b) in x.iter().zip(y) {
        for (p, q) in [(a.re, b.re), (a.im, b.im)] {
            if (p - q).abs() > CHAR_TOL * p.abs().max(q.abs()).max(1.0) {
                return p.partial_cmp(&q).unwrap_or(Ordering::Equal);
            }
        }
    }
    Ordering::Equal
}

/// Sorts characters canonically: the degree character first, then by
/// degree and lexicographically by (real, imaginary) parts of the values.
pub fn sort_characters(a: &TableAlgebra, chars: &mut [Character]) {
    chars.sort_by(|x, y| {
        let dx = !x.is_degree_character(a);
        let dy = !y.is_degree_character(a);
        dx.cmp(&dy)
            .then(x.degree.cmp(&y.degree))
            .then_with(|| cmp_values(&x.values, &y.values))
    });
}

/// All irreducible characters, canonically ordered.
pub fn irr_characters(a: &TableAlgebra, seed: u64) -> Result<Vec<Character>> {
    irr_characters_with(a, &EngineConfig::with_seed(seed))
}

pub fn irr_characters_with(a: &TableAlgebra, cfg: &EngineConfig) -> Result<Vec<Character>> {
    let w = Weighted::new(a);
    let blocks = wedderburn_components(a, &w, cfg)?;
    let mut chars: Vec<Character> = blocks
        .iter()
        .map(|v| {
            let n = (v.ncols() as f64).sqrt().round();
            let values = w
                .left
                .iter()
                .map(|h| (v.adjoint() * h * v).trace() / C::new(n, 0.0))
                .collect();
            let mut c = Character::new(values);
            c.degree = n as usize;
            c
        })
        .collect();
    let total: usize = chars.iter().map(|c| c.degree * c.degree).sum();
    if total != a.rank() {
        return Err(Error::CompletenessFailure {
            got: total as f64,
            expected: a.rank(),
        });
    }
    sort_characters(a, &mut chars);
    Ok(chars)
}

/// Solves `Σ_χ ζ_χ χ(b_i) = δ_{i0}·o(B)` and attaches `ζ_χ`.
pub fn standard_multiplicities(a: &TableAlgebra, chars: &[Character]) -> Result<Vec<Character>> {
    let d = a.rank();
    let c = chars.len();
    let total: usize = chars.iter().map(|x| x.degree * x.degree).sum();
    if total != d {
        return Err(Error::CompletenessFailure {
            got: total as f64,
            expected: d,
        });
    }
    let x = DMatrix::from_fn(d, c, |i, j| chars[j].values[i]);
    let mut rhs = DVector::<C>::zeros(d);
    rhs[0] = C::new(a.order(), 0.0);
    // Characters are linearly independent, so the normal equations are
    // nonsingular.
    let xh = x.adjoint();
    let zeta = (&xh * &x)
        .lu()
        .solve(&(&xh * &rhs))
        .ok_or(Error::ResidualTooLarge(f64::INFINITY))?;
    let resid = (&x * &zeta - &rhs).norm();
    if resid > 1e-8 * a.order().max(1.0) {
        return Err(Error::ResidualTooLarge(resid));
    }
    let mut out = chars.to_vec();
    for (n, ch) in out.iter_mut().enumerate() {
        let z = zeta[n];
        if z.norm() < 1e-9 {
            return Err(Error::ZeroMultiplicity(n));
        }
        if z.im.abs() > 1e-7 * z.norm().max(1.0) {
            return Err(Error::ResidualTooLarge(z.im.abs()));
        }
        ch.multiplicity = Some(z.re);
    }
    Ok(out)
}

/// `ker_B χ = {b : χ(b) = |b|·χ(1)}`.
pub fn char_kernel(a: &TableAlgebra, chi: &Character) -> Result<ClosedSubset> {
    let one = chi.values[0];
    let idx: Vec<usize> = (0..a.rank())
        .filter(|&i| {
            let want = one * a.degree(i);
            (chi.values[i] - want).norm() <= CHAR_TOL * want.norm().max(1.0)
        })
        .collect();
    ClosedSubset::new(a, &idx)
}

/// `Irr(B//N) = {χ : N ⊆ ker χ}`, cross-checked against the number of
/// characters of the quotient (its center dimension).
pub fn irr_of_quotient(
    a: &TableAlgebra,
    n: &ClosedSubset,
    chars: &[Character],
) -> Result<Vec<Character>> {
    if !crate::closed::is_normal(a, n) {
        return Err(Error::NotNormal(n.indices().to_vec()));
    }
    let mut out = Vec::new();
    for chi in chars {
        if n.is_subset_of(&char_kernel(a, chi)?) {
            out.push(chi.clone());
        }
    }
    let q = quotient(a, n)?;
    let expected = center_basis(&q.algebra).len();
    if expected != out.len() {
        return Err(Error::CountMismatch {
            expected,
            got: out.len(),
        });
    }
    Ok(out)
}

/// `[χ, φ] = o(B)⁻¹ Σ_i χ(b_i)·conj(φ(b_i)) / λ[i][i*][0]` on a standard
/// algebra.
pub fn inner_product(a: &TableAlgebra, chi: &[C], phi: &[C]) -> Result<C> {
    if !a.is_standard() {
        return Err(Error::NotStandard);
    }
    let s: C = (0..a.rank())
        .map(|i| chi[i] * phi[i].conj() / a.lambda(i, a.star(i), 0))
        .sum();
    Ok(s / a.order())
}

/// Irreducible matrix representations, in the same order as
/// [`irr_characters_with`] returns the characters.
pub fn irr_representations(a: &TableAlgebra, cfg: &EngineConfig) -> Result<Vec<Representation>> {
    if a.rank() > cfg.rep_cap {
        return Err(Error::RankCapExceeded {
            rank: a.rank(),
            cap: cfg.rep_cap,
        });
    }
    let w = Weighted::new(a);
    let blocks = wedderburn_components(a, &w, cfg)?;
    let d = a.rank();
    let basis: Vec<Vec<f64>> = (0..d)
        .map(|i| (0..d).map(|k| if k == i { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xD1B5_4A32_D192_ED03);
    let mut reps = Vec::with_capacity(blocks.len());
    for v in blocks {
        let n = (v.ncols() as f64).sqrt().round() as usize;
        let u = minimal_left_ideal(&w, &basis, v, n, cfg, &mut rng)?;
        let matrices: Vec<DMatrix<C>> = w.left.iter().map(|h| u.adjoint() * h * &u).collect();
        let rep = Representation {
            dimension: n,
            matrices,
        };
        if rep.check(a, 1e-7).is_err() {
            return Err(Error::SplitFailure(cfg.max_reseeds + 1));
        }
        reps.push(rep);
    }
    // Order to match the canonical character order.
    let mut chars: Vec<(Character, Representation)> = reps
        .into_iter()
        .map(|r| {
            let c = Character {
                values: r.character(),
                degree: r.dimension,
                multiplicity: None,
            };
            (c, r)
        })
        .collect();
    chars.sort_by(|(x, _), (y, _)| {
        let dx = !x.is_degree_character(a);
        let dy = !y.is_degree_character(a);
        dx.cmp(&dy)
            .then(x.degree.cmp(&y.degree))
            .then_with(|| cmp_values(&x.values, &y.values))
    });
    Ok(chars.into_iter().map(|(_, r)| r).collect())
}

fn minimal_left_ideal(
    w: &Weighted,
    basis: &[Vec<f64>],
    v: DMatrix<C>,
    n: usize,
    cfg: &EngineConfig,
    rng: &mut ChaCha8Rng,
) -> Result<DMatrix<C>> {
    let mut cur = v;
    let mut tries = 0;
    while cur.ncols() > n {
        tries += 1;
        if tries > 16 * (cfg.max_reseeds + 1) {
            return Err(Error::SplitFailure(tries));
        }
        let coeffs = random_coeffs(rng, basis.len());
        let y = w.self_adjoint(basis, &coeffs);
        let op = Weighted::combine(&w.right, &y);
        let pieces = split_by(&cur, &op, cfg.cluster_tol);
        // Every piece is a multiple of n; keep the smallest.
        if let Some(p) = pieces
            .into_iter()
            .filter(|p| p.ncols() % n == 0)
            .min_by_key(|p| p.ncols())
        {
            cur = p;
        }
    }
    Ok(cur)
}
