//! Closed subsets, complex products, normality and stabilizers.

use std::collections::BTreeSet;

use crate::algebra::{build_algebra, StructureConstants, TableAlgebra};
use crate::error::{Error, Result};

pub const DEFAULT_CLOSED_SUBSET_CAP: usize = 16;

/// A closed subset `N` of the basis: star-stable, contains the identity and
/// satisfies `N*N ⊆ N`. Indices are kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClosedSubset {
    indices: Vec<usize>,
}

impl ClosedSubset {
    /// Validates `indices` as a closed subset of `a`.
    pub fn new(a: &TableAlgebra, indices: &[usize]) -> Result<Self> {
        let set: BTreeSet<usize> = indices.iter().copied().collect();
        let v: Vec<usize> = set.into_iter().collect();
        if v.first() != Some(&0) || v.iter().any(|&i| i >= a.rank()) {
            return Err(Error::NotClosed(v));
        }
        if !is_closed(a, &v) {
            return Err(Error::NotClosed(v));
        }
        Ok(Self { indices: v })
    }

    /// `{1}`.
    pub fn trivial() -> Self {
        Self { indices: vec![0] }
    }

    /// The whole basis.
    pub fn full(a: &TableAlgebra) -> Self {
        Self {
            indices: (0..a.rank()).collect(),
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.indices == [0]
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset_of(&self, other: &ClosedSubset) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    /// `o(N)`.
    pub fn order(&self, a: &TableAlgebra) -> f64 {
        a.order_of(&self.indices)
    }

    /// `N⁺ = Σ_{b∈N} b` in basis coordinates.
    pub fn plus(&self, a: &TableAlgebra) -> Vec<f64> {
        let mut v = vec![0.0; a.rank()];
        for &i in &self.indices {
            v[i] = 1.0;
        }
        v
    }
}

fn is_closed(a: &TableAlgebra, s: &[usize]) -> bool {
    let star: Vec<usize> = s.iter().map(|&i| a.star(i)).collect();
    complex_product(a, &star, s).iter().all(|k| s.contains(k))
}

/// `ST = ∪_{i∈S, j∈T} Supp(b_i b_j)`, sorted.
pub fn complex_product(a: &TableAlgebra, s: &[usize], t: &[usize]) -> Vec<usize> {
    let eps = a.support_threshold();
    let mut out = BTreeSet::new();
    for &i in s {
        for &j in t {
            for (k, &x) in a.product(i, j).iter().enumerate() {
                if x > eps {
                    out.insert(k);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Least closed subset containing `seed`.
pub fn closure(a: &TableAlgebra, seed: &[usize]) -> ClosedSubset {
    let mut set: BTreeSet<usize> = seed.iter().copied().collect();
    set.insert(0);
    let stars: Vec<usize> = set.iter().map(|&i| a.star(i)).collect();
    set.extend(stars);
    loop {
        let cur: Vec<usize> = set.iter().copied().collect();
        let before = set.len();
        set.extend(complex_product(a, &cur, &cur));
        if set.len() == before {
            return ClosedSubset { indices: cur };
        }
    }
}

/// Every closed subset, sorted by size (then lexicographically).
///
/// Generated by closing singletons and then closing pairwise unions until
/// nothing new appears.
pub fn all_closed_subsets(a: &TableAlgebra, cap: usize) -> Result<Vec<ClosedSubset>> {
    if a.rank() > cap {
        return Err(Error::RankCapExceeded {
            rank: a.rank(),
            cap,
        });
    }
    let mut found: BTreeSet<ClosedSubset> = (0..a.rank()).map(|i| closure(a, &[i])).collect();
    loop {
        let current: Vec<ClosedSubset> = found.iter().cloned().collect();
        let before = found.len();
        for (n, x) in current.iter().enumerate() {
            for y in &current[n + 1..] {
                let union: Vec<usize> = x.indices.iter().chain(&y.indices).copied().collect();
                found.insert(closure(a, &union));
            }
        }
        if found.len() == before {
            break;
        }
    }
    let mut out: Vec<ClosedSubset> = found.into_iter().collect();
    out.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.indices.cmp(&y.indices)));
    Ok(out)
}

/// `bN = Nb` for every basis element `b`.
pub fn is_normal(a: &TableAlgebra, n: &ClosedSubset) -> bool {
    (0..a.rank()).all(|i| complex_product(a, &[i], &n.indices) == complex_product(a, &n.indices, &[i]))
}

/// Whether `x b = |x| b = b x` holds as vectors.
pub fn stabilizes(a: &TableAlgebra, x: usize, b: usize) -> bool {
    let eps = a.support_threshold();
    let dx = a.degree(x);
    let check = |v: &[f64]| {
        v.iter().enumerate().all(|(k, &c)| {
            let want = if k == b { dx } else { 0.0 };
            (c - want).abs() <= eps * dx.max(1.0)
        })
    };
    check(a.product(x, b)) && check(a.product(b, x))
}

/// `St_H(U) = {x ∈ H : xb = |x|b = bx for all b ∈ U}`.
pub fn stabilizer(a: &TableAlgebra, h: &ClosedSubset, u: &[usize]) -> Result<ClosedSubset> {
    let idx: Vec<usize> = h
        .indices
        .iter()
        .copied()
        .filter(|&x| u.iter().all(|&b| stabilizes(a, x, b)))
        .collect();
    ClosedSubset::new(a, &idx)
}

/// The table algebra `(ℂN, N)` spanned by a closed subset, with the map from
/// its basis positions to indices of `a`.
pub fn subalgebra(a: &TableAlgebra, n: &ClosedSubset) -> Result<(TableAlgebra, Vec<usize>)> {
    let idx = n.indices().to_vec();
    let m = idx.len();
    let pos = |g: usize| idx.binary_search(&g).ok();
    let mut t = StructureConstants::zeros(m);
    for (p, &i) in idx.iter().enumerate() {
        for (q, &j) in idx.iter().enumerate() {
            for (k, &x) in a.product(i, j).iter().enumerate() {
                if x != 0.0 {
                    let r = pos(k).ok_or_else(|| Error::NotClosed(idx.clone()))?;
                    t.set(p, q, r, x);
                }
            }
        }
    }
    let labels = idx.iter().map(|&i| a.label(i).to_string()).collect();
    let star = idx.iter().map(|&i| pos(a.star(i)).unwrap()).collect();
    let sub = build_algebra(m, labels, t, star, a.tol())?;
    Ok((sub, idx))
}
