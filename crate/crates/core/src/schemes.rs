//! Association schemes given by relation matrices.
//!
//! Relation 0 is always the diagonal. Closed subsets of relations are taken
//! in the adjacency algebra, so the same [`ClosedSubset`] type is used on
//! both levels.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::{build_algebra, StructureConstants, TableAlgebra, DEFAULT_TOL};
use crate::closed::{is_normal, ClosedSubset};
use crate::error::{Error, Result};
use crate::homquot::{double_cosets, AlgebraHom, HomImage};
use crate::iso::check_isomorphism;
use crate::repchar::irr_characters;
use crate::wedge::{verify_main2, wedge_product, Main2Report, WedgeProduct};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    n: usize,
    r: usize,
    relmat: Vec<usize>,
    pairing: Vec<usize>,
    valencies: Vec<usize>,
    /// Intersection numbers, flat `(g·r + h)·r + k`.
    counts: Vec<usize>,
}

fn axiom(reason: impl Into<String>, witness: Vec<usize>) -> Error {
    Error::SchemeAxiom {
        reason: reason.into(),
        witness,
    }
}

impl Scheme {
    /// Validates a relation matrix by exhaustive counting.
    pub fn from_relations(rows: Vec<Vec<usize>>) -> Result<Scheme> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Shape("scheme has no points".into()));
        }
        if let Some(x) = rows.iter().position(|row| row.len() != n) {
            return Err(Error::Shape(format!("row {x} has length {} instead of {n}", rows[x].len())));
        }
        let relmat: Vec<usize> = rows.into_iter().flatten().collect();
        let r = relmat.iter().max().copied().unwrap_or(0) + 1;
        let rel = |x: usize, y: usize| relmat[x * n + y];

        for x in 0..n {
            for y in 0..n {
                if (rel(x, y) == 0) != (x == y) {
                    return Err(axiom("relation 0 must be exactly the diagonal", vec![x, y]));
                }
            }
        }
        let mut pairing = vec![usize::MAX; r];
        let mut seen = vec![false; r];
        for x in 0..n {
            for y in 0..n {
                let g = rel(x, y);
                let gs = rel(y, x);
                seen[g] = true;
                if pairing[g] == usize::MAX {
                    pairing[g] = gs;
                } else if pairing[g] != gs {
                    return Err(axiom("transposed relation is not a single relation", vec![g, x, y]));
                }
            }
        }
        if let Some(g) = seen.iter().position(|s| !s) {
            return Err(axiom("relation index is never used", vec![g]));
        }

        let mut valencies = vec![0usize; r];
        for y in 0..n {
            valencies[rel(0, y)] += 1;
        }
        for x in 1..n {
            let mut v = vec![0usize; r];
            for y in 0..n {
                v[rel(x, y)] += 1;
            }
            if let Some(g) = (0..r).find(|&g| v[g] != valencies[g]) {
                return Err(axiom("valency is not constant", vec![g, 0, x]));
            }
        }

        // Per-row count vectors, then agreement for pairs with equal relation.
        let per_row: Vec<Vec<(usize, Vec<usize>)>> = (0..n)
            .into_par_iter()
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let mut c = vec![0usize; r * r];
                        for z in 0..n {
                            c[rel(x, z) * r + rel(z, y)] += 1;
                        }
                        (rel(x, y), c)
                    })
                    .collect()
            })
            .collect();
        let mut first: Vec<Option<(usize, usize)>> = vec![None; r];
        let mut counts = vec![0usize; r * r * r];
        for (x, row) in per_row.iter().enumerate() {
            for (y, (k, c)) in row.iter().enumerate() {
                match first[*k] {
                    None => {
                        first[*k] = Some((x, y));
                        for gh in 0..r * r {
                            counts[gh * r + k] = c[gh];
                        }
                    }
                    Some((x0, y0)) => {
                        let c0 = &per_row[x0][y0].1;
                        if let Some(gh) = (0..r * r).find(|&gh| c0[gh] != c[gh]) {
                            return Err(axiom(
                                "intersection number is not constant",
                                vec![gh / r, gh % r, *k, x, y],
                            ));
                        }
                    }
                }
            }
        }
        Ok(Scheme {
            n,
            r,
            relmat,
            pairing,
            valencies,
            counts,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of relations.
    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn rel(&self, x: usize, y: usize) -> usize {
        self.relmat[x * self.n + y]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.relmat.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    pub fn pairing(&self, g: usize) -> usize {
        self.pairing[g]
    }

    pub fn valency(&self, g: usize) -> usize {
        self.valencies[g]
    }

    pub fn valencies(&self) -> &[usize] {
        &self.valencies
    }

    /// `λ_ghk = #{z : (x,z) ∈ g, (z,y) ∈ h}` for any `(x,y) ∈ k`.
    pub fn intersection(&self, g: usize, h: usize, k: usize) -> usize {
        self.counts[(g * self.r + h) * self.r + k]
    }

    /// The adjacency algebra, standard with degrees equal to valencies.
    pub fn to_algebra(&self) -> Result<TableAlgebra> {
        let r = self.r;
        let data: Vec<f64> = self.counts.iter().map(|&c| c as f64).collect();
        let lambda = StructureConstants::from_flat(r, data)?;
        let labels = (0..r).map(|g| format!("R{g}")).collect();
        build_algebra(r, labels, lambda, self.pairing.clone(), DEFAULT_TOL)
    }

    /// `xH = {y : (x,y) ∈ h for some h ∈ H}`, sorted.
    pub fn block(&self, h: &ClosedSubset, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| h.contains(self.rel(x, y))).collect()
    }

    /// The trivial scheme on a single point.
    pub fn point() -> Scheme {
        Scheme::from_relations(vec![vec![0]]).expect("one-point scheme is valid")
    }
}

fn closed_in(s: &Scheme, h: &[usize]) -> Result<(TableAlgebra, ClosedSubset)> {
    let a = s.to_algebra()?;
    let c = ClosedSubset::new(&a, h)?;
    Ok((a, c))
}

/// Parses a `.scm` document.
pub fn load_scheme(text: &str) -> Result<Scheme> {
    crate::io::parse_scm(text)
}

/// A point map and relation map between schemes.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeEpimorphism {
    pub source: Arc<Scheme>,
    pub target: Arc<Scheme>,
    pub point_map: Vec<usize>,
    pub rel_map: Vec<usize>,
}

impl SchemeEpimorphism {
    /// Relations sent to the diagonal.
    pub fn kernel(&self) -> Vec<usize> {
        (0..self.source.rank()).filter(|&g| self.rel_map[g] == 0).collect()
    }

    /// Checks surjectivity, incidence, closedness of the kernel and that the
    /// fibers of the point map are exactly the blocks `xK`.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let (s, t) = (&self.source, &self.target);
        if self.point_map.len() != s.n() || self.rel_map.len() != s.rank() {
            return Err("map lengths do not match the source".into());
        }
        let mut hit = vec![false; t.n()];
        for &p in &self.point_map {
            if p >= t.n() {
                return Err(format!("point image {p} out of range"));
            }
            hit[p] = true;
        }
        if hit.iter().any(|h| !h) {
            return Err("point map is not surjective".into());
        }
        let mut hit = vec![false; t.rank()];
        for &g in &self.rel_map {
            if g >= t.rank() {
                return Err(format!("relation image {g} out of range"));
            }
            hit[g] = true;
        }
        if hit.iter().any(|h| !h) {
            return Err("relation map is not surjective".into());
        }
        for x in 0..s.n() {
            for y in 0..s.n() {
                let g = s.rel(x, y);
                if t.rel(self.point_map[x], self.point_map[y]) != self.rel_map[g] {
                    return Err(format!("incidence fails at points ({x}, {y}) in relation {g}"));
                }
            }
        }
        let a = s.to_algebra().map_err(|e| e.to_string())?;
        let k = ClosedSubset::new(&a, &self.kernel()).map_err(|e| e.to_string())?;
        for x in 0..s.n() {
            let fiber: Vec<usize> = (0..s.n())
                .filter(|&y| self.point_map[y] == self.point_map[x])
                .collect();
            if fiber != s.block(&k, x) {
                return Err(format!("fiber of point {x} is not its kernel block"));
            }
        }
        Ok(())
    }

    /// Whether the kernel is normal in the source adjacency algebra.
    pub fn is_normal(&self) -> Result<bool> {
        let (a, k) = closed_in(&self.source, &self.kernel())?;
        Ok(is_normal(&a, &k))
    }
}

/// The quotient scheme on the blocks `xH`, ordered by smallest point, with
/// relations indexed like the double cosets `HgH` in [`double_cosets`].
pub fn scheme_quotient(s: &Arc<Scheme>, h: &[usize]) -> Result<(Scheme, SchemeEpimorphism)> {
    let (a, h) = closed_in(s, h)?;
    let n = s.n();
    let mut point_map = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if point_map[x] != usize::MAX {
            continue;
        }
        let blk = s.block(&h, x);
        for &y in &blk {
            if point_map[y] != usize::MAX || s.block(&h, y) != blk {
                return Err(Error::PartitionInconsistent(x, y));
            }
            point_map[y] = reps.len();
        }
        reps.push(x);
    }
    let part = double_cosets(&a, &h);
    let rows: Vec<Vec<usize>> = reps
        .iter()
        .map(|&x| reps.iter().map(|&y| part.block_of[s.rel(x, y)]).collect())
        .collect();
    for x in 0..n {
        for y in 0..n {
            if rows[point_map[x]][point_map[y]] != part.block_of[s.rel(x, y)] {
                return Err(Error::PartitionInconsistent(x, y));
            }
        }
    }
    let q = Scheme::from_relations(rows)?;
    let epi = SchemeEpimorphism {
        source: s.clone(),
        target: Arc::new(q.clone()),
        point_map,
        rel_map: part.block_of.clone(),
    };
    debug_assert!(epi.validate().is_ok());
    Ok((q, epi))
}

/// The scheme induced on `xH`. Points are `xH` in increasing order and the
/// relation `h_{xH}` gets the position of `h` in sorted `H`.
pub fn subscheme(s: &Scheme, h: &[usize], x: usize) -> Result<Scheme> {
    let (_, h) = closed_in(s, h)?;
    if x >= s.n() {
        return Err(Error::Shape(format!("point {x} out of range")));
    }
    let pts = s.block(&h, x);
    let pos: BTreeMap<usize, usize> = h.indices().iter().enumerate().map(|(i, &g)| (g, i)).collect();
    let rows = pts
        .iter()
        .map(|&p| pts.iter().map(|&q| pos[&s.rel(p, q)]).collect())
        .collect();
    Scheme::from_relations(rows)
}

/// One fiber `(Y_i, ψ_i)` of a scheme wedge. `psi.target` is the subscheme
/// on the `i`-th block of `X//D`, as produced by [`subscheme`] at the
/// block's smallest point.
#[derive(Debug, Clone)]
pub struct Fiber {
    pub scheme: Arc<Scheme>,
    pub psi: SchemeEpimorphism,
}

#[derive(Debug, Clone)]
pub struct SchemeWedge {
    pub scheme: Scheme,
    /// First point of each fiber in the glued point set.
    pub offsets: Vec<usize>,
    /// The matching table algebra wedge product.
    pub algebra_wedge: WedgeProduct,
}

fn is_algebraic_iso(a: &Scheme, b: &Scheme, phi: &[usize]) -> bool {
    let r = a.rank();
    if b.rank() != r || phi.len() != r || phi[0] != 0 {
        return false;
    }
    let mut seen = vec![false; r];
    for &p in phi {
        if p >= r || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    (0..r).all(|g| {
        (0..r).all(|h| (0..r).all(|k| a.intersection(g, h, k) == b.intersection(phi[g], phi[h], phi[k])))
    })
}

/// Glues fibers `Y_i` over the blocks of `X//D`.
///
/// Relations of the result: `b̃` for `b ∈ B_1` (indices `0..|B_1|`), then
/// `ḡ` for `g ∈ G \ D` in increasing order. Points are the fibers' points
/// concatenated in block order.
pub fn scheme_wedge(
    base: &Scheme,
    d: &[usize],
    fibers: &[Fiber],
    iso: &[Vec<usize>],
) -> Result<SchemeWedge> {
    let (base_alg, d) = closed_in(base, d)?;
    let mut block_of = vec![usize::MAX; base.n()];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for x in 0..base.n() {
        if block_of[x] == usize::MAX {
            let blk = base.block(&d, x);
            for &y in &blk {
                block_of[y] = blocks.len();
            }
            blocks.push(blk);
        }
    }
    let m = blocks.len();
    if fibers.len() != m || iso.len() != m {
        return Err(Error::CompatibilityFailure(format!(
            "{m} blocks but {} fibers and {} isomorphisms",
            fibers.len(),
            iso.len()
        )));
    }
    let y1 = &fibers[0].scheme;
    for (i, f) in fibers.iter().enumerate() {
        let expected = subscheme(base, d.indices(), blocks[i][0])?;
        if *f.psi.target != expected || *f.psi.source != *f.scheme {
            return Err(Error::NotNormalEpimorphism(i, "epimorphism does not map the fiber onto its block".into()));
        }
        f.psi.validate().map_err(|e| Error::NotNormalEpimorphism(i, e))?;
        if !f.psi.is_normal()? {
            return Err(Error::NotNormalEpimorphism(i, "kernel is not normal".into()));
        }
        if !is_algebraic_iso(y1, &f.scheme, &iso[i]) {
            return Err(Error::CompatibilityFailure(format!("φ_{i} is not an algebraic isomorphism")));
        }
        for b in 0..y1.rank() {
            if f.psi.rel_map[iso[i][b]] != fibers[0].psi.rel_map[b] {
                return Err(Error::CompatibilityFailure(format!(
                    "ψ_{i}φ_{i} and ψ_1 differ on relation {b}"
                )));
            }
        }
    }

    let nb1 = y1.rank();
    let outside: Vec<usize> = (0..base.rank()).filter(|&g| !d.contains(g)).collect();
    let mut outside_index = vec![usize::MAX; base.rank()];
    for (p, &g) in outside.iter().enumerate() {
        outside_index[g] = nb1 + p;
    }
    let inverse_iso: Vec<Vec<usize>> = iso
        .iter()
        .map(|phi| {
            let mut inv = vec![0; phi.len()];
            for (b, &p) in phi.iter().enumerate() {
                inv[p] = b;
            }
            inv
        })
        .collect();
    let mut offsets = Vec::with_capacity(m);
    let mut owner = Vec::new();
    for (i, f) in fibers.iter().enumerate() {
        offsets.push(owner.len());
        owner.extend((0..f.scheme.n()).map(|y| (i, y)));
    }
    let total = owner.len();
    let rows: Vec<Vec<usize>> = owner
        .iter()
        .map(|&(i, u)| {
            owner
                .iter()
                .map(|&(j, v)| {
                    if i == j {
                        inverse_iso[i][fibers[i].scheme.rel(u, v)]
                    } else {
                        let x = blocks[i][fibers[i].psi.point_map[u]];
                        let y = blocks[j][fibers[j].psi.point_map[v]];
                        outside_index[base.rel(x, y)]
                    }
                })
                .collect()
        })
        .collect();
    debug_assert_eq!(rows.len(), total);
    let scheme = Scheme::from_relations(rows).map_err(|e| Error::ResultNotScheme(e.to_string()))?;
    if scheme.rank() != nb1 + base.rank() - d.len() {
        return Err(Error::ResultNotScheme(format!(
            "{} relations instead of {}",
            scheme.rank(),
            nb1 + base.rank() - d.len()
        )));
    }

    // Algebra bridge: φ(b) = (n_b / n_{ψ_1(b)})·d.
    let c = Arc::new(y1.to_algebra()?);
    let base_alg = Arc::new(base_alg);
    let images = (0..nb1)
        .map(|b| {
            let dd = d.indices()[fibers[0].psi.rel_map[b]];
            HomImage {
                target: dd,
                scalar: y1.valency(b) as f64 / base.valency(dd) as f64,
            }
        })
        .collect();
    let phi = AlgebraHom::new(c, base_alg, images)?;
    let w = wedge_product(&phi).map_err(|e| Error::BridgeMismatch(e.to_string()))?;
    let alg = scheme.to_algebra()?;
    let ident: Vec<usize> = (0..alg.rank()).collect();
    check_isomorphism(&alg, &w.algebra, &ident, 1e-9).map_err(|e| Error::BridgeMismatch(e.to_string()))?;
    Ok(SchemeWedge {
        scheme,
        offsets,
        algebra_wedge: w,
    })
}

/// Searches for a point bijection `a → b`. With `rel_fixed`, relations must
/// map by it; otherwise a consistent relation bijection is built on the way.
/// Returns `(point map, relation map)`.
pub fn find_scheme_isomorphism(
    a: &Scheme,
    b: &Scheme,
    rel_fixed: Option<&[usize]>,
) -> Option<(Vec<usize>, Vec<usize>)> {
    if a.n() != b.n() || a.rank() != b.rank() || a.valencies().len() != b.valencies().len() {
        return None;
    }
    let r = a.rank();
    let mut rel = vec![usize::MAX; r];
    let mut rel_inv = vec![usize::MAX; r];
    if let Some(f) = rel_fixed {
        if f.len() != r {
            return None;
        }
        for (g, &h) in f.iter().enumerate() {
            rel[g] = h;
            rel_inv[h] = g;
        }
    }
    let mut pts = vec![usize::MAX; a.n()];
    let mut used = vec![false; a.n()];
    if extend_points(a, b, &mut pts, &mut used, &mut rel, &mut rel_inv, 0) {
        Some((pts, rel))
    } else {
        None
    }
}

fn extend_points(
    a: &Scheme,
    b: &Scheme,
    pts: &mut [usize],
    used: &mut [bool],
    rel: &mut [usize],
    rel_inv: &mut [usize],
    x: usize,
) -> bool {
    if x == a.n() {
        return true;
    }
    for cand in 0..b.n() {
        if used[cand] {
            continue;
        }
        let mut added = Vec::new();
        let mut ok = true;
        'pairs: for y in 0..=x {
            let py = if y == x { cand } else { pts[y] };
            for (g, h) in [(a.rel(x, y), b.rel(cand, py)), (a.rel(y, x), b.rel(py, cand))] {
                if rel[g] == usize::MAX && rel_inv[h] == usize::MAX && a.valency(g) == b.valency(h) {
                    rel[g] = h;
                    rel_inv[h] = g;
                    added.push(g);
                } else if rel[g] != h {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            pts[x] = cand;
            used[cand] = true;
            if extend_points(a, b, pts, used, rel, rel_inv, x + 1) {
                return true;
            }
            used[cand] = false;
            pts[x] = usize::MAX;
        }
        for g in added {
            rel_inv[rel[g]] = usize::MAX;
            rel[g] = usize::MAX;
        }
    }
    false
}

/// The wedge with every fiber a copy of `y1`, glued along `Y₁//K`.
///
/// Requires `Y₁//K` to be isomorphic to the subschemes on the blocks of
/// `X//D`, with identical relation positions between blocks.
pub fn uniform_scheme_wedge(base: &Scheme, d: &[usize], y1: &Scheme, k: &[usize]) -> Result<SchemeWedge> {
    let y1 = Arc::new(y1.clone());
    let (q, pi) = scheme_quotient(&y1, k)?;
    let (_, dc) = closed_in(base, d)?;
    let mut firsts = Vec::new();
    let mut covered = vec![false; base.n()];
    for x in 0..base.n() {
        if !covered[x] {
            for y in base.block(&dc, x) {
                covered[y] = true;
            }
            firsts.push(x);
        }
    }
    let x1 = Arc::new(subscheme(base, d, firsts[0])?);
    let (sigma, rho) = find_scheme_isomorphism(&q, &x1, None)
        .ok_or_else(|| Error::CompatibilityFailure("Y₁//K is not isomorphic to the first block".into()))?;
    let rel_map: Vec<usize> = pi.rel_map.iter().map(|&g| rho[g]).collect();
    let point_map: Vec<usize> = pi.point_map.iter().map(|&p| sigma[p]).collect();
    let ident_rel: Vec<usize> = (0..x1.rank()).collect();
    let mut fibers = Vec::with_capacity(firsts.len());
    for &x in &firsts {
        let xi = Arc::new(subscheme(base, d, x)?);
        let (tau, _) = find_scheme_isomorphism(&x1, &xi, Some(&ident_rel))
            .ok_or_else(|| Error::CompatibilityFailure(format!("block of point {x} is not a copy of the first")))?;
        fibers.push(Fiber {
            scheme: y1.clone(),
            psi: SchemeEpimorphism {
                source: y1.clone(),
                target: xi,
                point_map: point_map.iter().map(|&p| tau[p]).collect(),
                rel_map: rel_map.clone(),
            },
        });
    }
    let iso = vec![(0..y1.rank()).collect::<Vec<_>>(); firsts.len()];
    scheme_wedge(base, d, &fibers, &iso)
}

/// The four wedge conditions on the adjacency algebra, plus the
/// adjacency-matrix form of condition (i).
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeWedgeReport {
    pub main2: Main2Report,
    /// `A(s)A(k) = n_k A(s) = A(k)A(s)` for all `k ∈ K`, `s ∉ B`.
    pub adjacency_condition: bool,
    pub trivial_k: bool,
    /// `n_K`, `n_B` and `n_S = |Y|`.
    pub n_k: usize,
    pub n_b: usize,
    pub n_s: usize,
}

pub fn verify_scheme_wedge_chars(s: &Scheme, k: &[usize], b: &[usize], seed: u64) -> Result<SchemeWedgeReport> {
    let a = s.to_algebra()?;
    let kc = ClosedSubset::new(&a, k)?;
    let bc = ClosedSubset::new(&a, b)?;
    let irr = irr_characters(&a, seed)?;
    let main2 = verify_main2(&a, &kc, &bc, &irr, seed)?;
    let n = s.n();
    let mut adjacency_condition = true;
    'outer: for &kk in kc.indices() {
        for g in (0..s.rank()).filter(|g| !bc.contains(*g)) {
            for x in 0..n {
                for y in 0..n {
                    let want = if s.rel(x, y) == g { s.valency(kk) } else { 0 };
                    let left = (0..n).filter(|&z| s.rel(x, z) == g && s.rel(z, y) == kk).count();
                    let right = (0..n).filter(|&z| s.rel(x, z) == kk && s.rel(z, y) == g).count();
                    if left != want || right != want {
                        adjacency_condition = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    Ok(SchemeWedgeReport {
        main2,
        adjacency_condition,
        trivial_k: kc.is_trivial(),
        n_k: kc.indices().iter().map(|&g| s.valency(g)).sum(),
        n_b: bc.indices().iter().map(|&g| s.valency(g)).sum(),
        n_s: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::groups;
    use crate::iso::find_isomorphism;

    pub(crate) fn two_point() -> Scheme {
        Scheme::from_relations(vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    pub(crate) fn k22_scheme() -> Scheme {
        Scheme::from_relations(vec![
            vec![0, 1, 2, 2],
            vec![1, 0, 2, 2],
            vec![2, 2, 0, 1],
            vec![2, 2, 1, 0],
        ])
        .unwrap()
    }

    #[test]
    fn load_examples() {
        let s = two_point();
        assert_eq!((s.n(), s.rank()), (2, 2));
        assert_eq!(s.valencies(), &[1, 1]);
        assert_eq!(k22_scheme().valencies(), &[1, 1, 2]);
    }

    #[test]
    fn pairing_failure() {
        let e = Scheme::from_relations(vec![vec![0, 1, 2], vec![1, 0, 2], vec![1, 2, 0]]).unwrap_err();
        assert!(matches!(e, Error::SchemeAxiom { .. }));
    }

    #[test]
    fn regularity_failure() {
        // Path on 3 vertices: edge/non-edge is not a scheme.
        let e = Scheme::from_relations(vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]]).unwrap_err();
        assert!(matches!(e, Error::SchemeAxiom { .. }));
    }

    #[test]
    fn adjacency_algebras() {
        assert_eq!(k22_scheme().to_algebra().unwrap().constants(), corpus::k22().constants());
        assert_eq!(two_point().to_algebra().unwrap().constants(), corpus::cyclic(2).constants());
        let z4 = Scheme::from_relations(groups::thin_scheme_relations(&[groups::cycle(4)])).unwrap();
        assert!(find_isomorphism(&z4.to_algebra().unwrap(), &corpus::cyclic(4)).is_some());
    }

    #[test]
    fn quotient_examples() {
        let s = Arc::new(k22_scheme());
        let (q, epi) = scheme_quotient(&s, &[0, 1]).unwrap();
        assert_eq!(q, two_point());
        assert_eq!(epi.point_map, vec![0, 0, 1, 1]);
        assert_eq!(epi.kernel(), vec![0, 1]);
        let (q, _) = scheme_quotient(&s, &[0]).unwrap();
        assert_eq!(q, *s);
        let (q, _) = scheme_quotient(&s, &[0, 1, 2]).unwrap();
        assert_eq!(q, Scheme::point());
    }

    #[test]
    fn subscheme_examples() {
        let s = k22_scheme();
        assert_eq!(subscheme(&s, &[0], 2).unwrap(), Scheme::point());
        assert_eq!(subscheme(&s, &[0, 1], 0).unwrap(), two_point());
        assert_eq!(subscheme(&s, &[0, 1, 2], 3).unwrap(), s);
    }

    #[test]
    fn uniform_wedge_gives_k22() {
        let w = uniform_scheme_wedge(&two_point(), &[0], &two_point(), &[0, 1]).unwrap();
        assert_eq!(w.scheme, k22_scheme());
    }

    #[test]
    fn wedge_with_point_fibers_is_base() {
        let base = k22_scheme();
        let w = uniform_scheme_wedge(&base, &[0], &Scheme::point(), &[0]).unwrap();
        assert_eq!(w.scheme, base);
    }

    #[test]
    fn wedge_over_point_is_fiber() {
        let y = k22_scheme();
        let w = uniform_scheme_wedge(&Scheme::point(), &[0], &y, &[0, 1, 2]).unwrap();
        assert_eq!(w.scheme, y);
    }

    #[test]
    fn incompatible_fibers_rejected() {
        let base = two_point();
        let y = Arc::new(two_point());
        let x = Arc::new(Scheme::point());
        let psi = SchemeEpimorphism {
            source: y.clone(),
            target: x,
            point_map: vec![0, 0],
            rel_map: vec![0, 0],
        };
        let f = Fiber { scheme: y, psi };
        // Only one fiber for two blocks.
        assert!(matches!(
            scheme_wedge(&base, &[0], &[f], &[vec![0, 1]]),
            Err(Error::CompatibilityFailure(_))
        ));
    }

    #[test]
    fn scheme_char_conditions() {
        let r = verify_scheme_wedge_chars(&k22_scheme(), &[0, 1], &[0, 1], 0).unwrap();
        assert!(r.main2.all_true() && r.adjacency_condition);
        assert_eq!((r.n_k, r.n_b, r.n_s), (2, 2, 4));
        let m = &r.main2.restrictions[0];
        assert!((m.zeta_chi - 2.0).abs() < 1e-8);
        assert!((m.zeta_chi - (r.n_s as f64 / r.n_b as f64) * m.zeta_psi.unwrap()).abs() < 1e-8);

        let z4 = Scheme::from_relations(groups::thin_scheme_relations(&[groups::cycle(4)])).unwrap();
        let a = z4.to_algebra().unwrap();
        let g2: Vec<usize> = (0..4).filter(|&g| a.product(g, g)[0] > 0.5).collect();
        let r = verify_scheme_wedge_chars(&z4, &g2, &g2, 0).unwrap();
        assert!(r.main2.all_false() && !r.adjacency_condition);

        let r = verify_scheme_wedge_chars(&k22_scheme(), &[0], &[0, 1], 0).unwrap();
        assert!(r.trivial_k);
    }
}
