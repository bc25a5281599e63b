//! Table algebra isomorphisms given by a basis bijection and a positive
//! rescaling.
//!
//! An isomorphism preserves the degree map, so the rescaling attached to a
//! bijection `π` is forced: `ψ(b_i) = (|b_i| / |b'_{π(i)}|)·b'_{π(i)}`.

use crate::algebra::TableAlgebra;

/// Why a candidate bijection fails to be an isomorphism.
#[derive(Debug, Clone, PartialEq)]
pub enum IsoMismatch {
    Rank(usize, usize),
    NotBijection,
    Star(usize),
    Constant { i: usize, j: usize, k: usize, lhs: f64, rhs: f64 },
}

impl std::fmt::Display for IsoMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            IsoMismatch::Rank(a, b) => write!(f, "rank {a} vs {b}"),
            IsoMismatch::NotBijection => write!(f, "map is not a bijection fixing the identity"),
            IsoMismatch::Star(i) => write!(f, "involution not preserved at {i}"),
            IsoMismatch::Constant { i, j, k, lhs, rhs } => {
                write!(f, "constant ({i},{j},{k}): {lhs} vs {rhs}")
            }
        }
    }
}

/// Scaling factors `s_i = |b_i| / |b'_{π(i)}|` attached to `perm`.
pub fn induced_scaling(a: &TableAlgebra, b: &TableAlgebra, perm: &[usize]) -> Vec<f64> {
    perm.iter()
        .enumerate()
        .map(|(i, &p)| a.degree(i) / b.degree(p))
        .collect()
}

/// Checks that `b_i ↦ s_i b'_{perm[i]}` is a table algebra isomorphism,
/// i.e. `λ[i][j][k]·s_k = s_i·s_j·λ'[π i][π j][π k]` within `tol`.
pub fn check_isomorphism(
    a: &TableAlgebra,
    b: &TableAlgebra,
    perm: &[usize],
    tol: f64,
) -> Result<(), IsoMismatch> {
    let d = a.rank();
    if d != b.rank() || perm.len() != d {
        return Err(IsoMismatch::Rank(d, b.rank()));
    }
    let mut seen = vec![false; d];
    for &p in perm {
        if p >= d || seen[p] {
            return Err(IsoMismatch::NotBijection);
        }
        seen[p] = true;
    }
    if perm[0] != 0 {
        return Err(IsoMismatch::NotBijection);
    }
    for i in 0..d {
        if perm[a.star(i)] != b.star(perm[i]) {
            return Err(IsoMismatch::Star(i));
        }
    }
    let s = induced_scaling(a, b, perm);
    let scale = a.constants().max_entry().max(b.constants().max_entry()).max(1.0);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let lhs = a.lambda(i, j, k) * s[k];
                let rhs = s[i] * s[j] * b.lambda(perm[i], perm[j], perm[k]);
                if (lhs - rhs).abs() > tol * scale * lhs.abs().max(rhs.abs()).max(1.0) {
                    return Err(IsoMismatch::Constant { i, j, k, lhs, rhs });
                }
            }
        }
    }
    Ok(())
}

/// Searches for a basis bijection realising an isomorphism `a ≅ b`.
///
/// Backtracking over positions; a candidate is pruned as soon as any
/// structure constant among already-assigned indices disagrees. Intended for
/// the small ranks handled elsewhere in the crate.
pub fn find_isomorphism(a: &TableAlgebra, b: &TableAlgebra) -> Option<Vec<usize>> {
    let d = a.rank();
    if d != b.rank() {
        return None;
    }
    let tol = a.tol().max(b.tol()) * 100.0;
    let mut perm = vec![usize::MAX; d];
    let mut used = vec![false; d];
    perm[0] = 0;
    used[0] = true;
    if extend(a, b, &mut perm, &mut used, 1, tol) {
        Some(perm)
    } else {
        None
    }
}

fn consistent(a: &TableAlgebra, b: &TableAlgebra, perm: &[usize], upto: usize, tol: f64) -> bool {
    let s = |i: usize| a.degree(i) / b.degree(perm[i]);
    let n = upto + 1;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i != upto && j != upto && k != upto {
                    continue;
                }
                let lhs = a.lambda(i, j, k) * s(k);
                let rhs = s(i) * s(j) * b.lambda(perm[i], perm[j], perm[k]);
                if (lhs - rhs).abs() > tol * lhs.abs().max(rhs.abs()).max(1.0) {
                    return false;
                }
            }
        }
    }
    true
}

fn extend(
    a: &TableAlgebra,
    b: &TableAlgebra,
    perm: &mut [usize],
    used: &mut [bool],
    pos: usize,
    tol: f64,
) -> bool {
    let d = a.rank();
    if pos == d {
        return check_isomorphism(a, b, perm, tol).is_ok();
    }
    for cand in 1..d {
        if used[cand] {
            continue;
        }
        // Star images must be consistent with whatever is already placed.
        let sa = a.star(pos);
        if sa < pos && perm[sa] != b.star(cand) {
            continue;
        }
        if sa == pos && b.star(cand) != cand {
            continue;
        }
        if sa != pos && b.star(cand) == cand {
            continue;
        }
        perm[pos] = cand;
        used[cand] = true;
        if consistent(a, b, perm, pos, tol) && extend(a, b, perm, used, pos + 1, tol) {
            return true;
        }
        used[cand] = false;
        perm[pos] = usize::MAX;
    }
    false
}
