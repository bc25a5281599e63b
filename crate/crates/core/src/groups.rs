//! Finite permutation groups as a source of table algebras: group algebras,
//! class algebras and thin (Cayley) schemes.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::algebra::{build_algebra, StructureConstants, TableAlgebra, DEFAULT_TOL};
use crate::error::Result;

pub type Perm = Vec<usize>;

/// `(p * q)(x) = p(q(x))`.
pub fn compose(p: &[usize], q: &[usize]) -> Perm {
    q.iter().map(|&x| p[x]).collect()
}

pub fn inverse(p: &[usize]) -> Perm {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// All elements of the group generated by `gens`, identity first, in
/// breadth-first order.
pub fn generate(gens: &[Perm]) -> Vec<Perm> {
    let n = gens.first().map_or(0, |g| g.len());
    let id: Perm = (0..n).collect();
    let mut seen: HashMap<Perm, usize> = HashMap::new();
    let mut elems = vec![id.clone()];
    seen.insert(id.clone(), 0);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = compose(g, &x);
            if !seen.contains_key(&y) {
                seen.insert(y.clone(), elems.len());
                elems.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    elems
}

/// Conjugacy classes as lists of element indices, identity class first,
/// then ordered by the smallest member.
pub fn conjugacy_classes(elems: &[Perm]) -> Vec<Vec<usize>> {
    let index: HashMap<&Perm, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut class_of = vec![usize::MAX; elems.len()];
    let mut classes = Vec::new();
    for i in 0..elems.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let mut members = Vec::new();
        for g in elems {
            let c = compose(&compose(g, &elems[i]), &inverse(g));
            let j = index[&c];
            if class_of[j] == usize::MAX {
                class_of[j] = classes.len();
                members.push(j);
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    classes
}

/// The class algebra `Z(ℂG)` on class sums.
pub fn class_algebra(gens: &[Perm]) -> Result<TableAlgebra> {
    let elems = generate(gens);
    let classes = conjugacy_classes(&elems);
    let index: HashMap<&Perm, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut class_of = vec![0; elems.len()];
    for (c, members) in classes.iter().enumerate() {
        for &m in members {
            class_of[m] = c;
        }
    }
    let r = classes.len();
    let mut t = StructureConstants::zeros(r);
    for k in 0..r {
        // Count (x, y) ∈ C_i × C_j with xy = z for a fixed z ∈ C_k.
        let z = &elems[classes[k][0]];
        let mut counts: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for x in elems.iter() {
            let y = compose(&inverse(x), z);
            let key = (class_of[index[x]], class_of[index[&y]]);
            *counts.entry(key).or_default() += 1.0;
        }
        for ((i, j), v) in counts {
            t.set(i, j, k, v);
        }
    }
    let star = (0..r)
        .map(|c| class_of[index[&inverse(&elems[classes[c][0]])]])
        .collect();
    let labels = (0..r).map(|c| format!("C{c}")).collect();
    build_algebra(r, labels, t, star, DEFAULT_TOL)
}

/// Group algebra of `ℤ/n` on the basis `1, g, ..., g^{n-1}`.
pub fn cyclic_group_algebra(n: usize) -> TableAlgebra {
    let mut t = StructureConstants::zeros(n);
    for i in 0..n {
        for j in 0..n {
            t.set(i, j, (i + j) % n, 1.0);
        }
    }
    let labels = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "g".to_string(),
            _ => format!("g{i}"),
        })
        .collect();
    let star = (0..n).map(|i| (n - i) % n).collect();
    build_algebra(n, labels, t, star, DEFAULT_TOL).expect("cyclic group algebra is valid")
}

/// Relation matrix of the thin scheme of a group acting on itself:
/// `(x, y)` lies in relation `x⁻¹y`.
pub fn thin_scheme_relations(gens: &[Perm]) -> Vec<Vec<usize>> {
    let elems = generate(gens);
    let index: HashMap<&Perm, usize> = elems.iter().enumerate().map(|(i, p)| (p, i)).collect();
    elems
        .iter()
        .map(|x| {
            let xi = inverse(x);
            elems.iter().map(|y| index[&compose(&xi, y)]).collect()
        })
        .collect()
}

pub fn cycle(n: usize) -> Perm {
    (0..n).map(|i| (i + 1) % n).collect()
}

pub fn transposition(n: usize, a: usize, b: usize) -> Perm {
    let mut p: Perm = (0..n).collect();
    p.swap(a, b);
    p
}
