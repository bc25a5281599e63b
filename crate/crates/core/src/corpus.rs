//! Small named algebras used throughout the tests, the CLI data files and
//! the documentation.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{build_algebra, StructureConstants, TableAlgebra, DEFAULT_TOL};
use crate::closed::{all_closed_subsets, DEFAULT_CLOSED_SUBSET_CAP};
use crate::error::Result;
use crate::groups;
use crate::homquot::AlgebraHom;
use crate::wedge::{collapse_hom, wedge_product};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Group algebra of `ℤ/n`.
pub fn cyclic(n: usize) -> TableAlgebra {
    groups::cyclic_group_algebra(n)
}

/// Class algebra of `S3` on `{1, t, c}`: `t` the transposition class sum,
/// `c` the 3-cycle class sum.
///
/// `t² = 3·1 + 3c`, `tc = ct = 2t`, `c² = 2·1 + c`.
pub fn s3_class() -> TableAlgebra {
    let mut l = StructureConstants::with_identity(3);
    l.set(1, 1, 0, 3.0);
    l.set(1, 1, 2, 3.0);
    l.set(1, 2, 1, 2.0);
    l.set(2, 1, 1, 2.0);
    l.set(2, 2, 0, 2.0);
    l.set(2, 2, 2, 1.0);
    build_algebra(3, labels(&["1", "t", "c"]), l, vec![0, 1, 2], DEFAULT_TOL)
        .expect("S3 class algebra is valid")
}

/// Class algebra of the dihedral group of order 8.
pub fn d4_class() -> TableAlgebra {
    let gens = vec![groups::cycle(4), vec![0, 3, 2, 1]];
    groups::class_algebra(&gens).expect("D4 class algebra is valid")
}

/// Adjacency algebra of the complete bipartite scheme `K_{2,2}` on
/// `{1, d, b}`: `d² = 1`, `db = bd = b`, `b² = 2·1 + 2d`.
pub fn k22() -> TableAlgebra {
    let mut l = StructureConstants::with_identity(3);
    l.set(1, 1, 0, 1.0);
    l.set(1, 2, 2, 1.0);
    l.set(2, 1, 2, 1.0);
    l.set(2, 2, 0, 2.0);
    l.set(2, 2, 1, 2.0);
    build_algebra(3, labels(&["1", "d", "b"]), l, vec![0, 1, 2], DEFAULT_TOL)
        .expect("K22 algebra is valid")
}

/// Rank-1 algebra `ℂ`.
pub fn trivial() -> TableAlgebra {
    build_algebra(
        1,
        labels(&["1"]),
        StructureConstants::with_identity(1),
        vec![0],
        DEFAULT_TOL,
    )
    .expect("rank-1 algebra is valid")
}

/// The base corpus: `ℤ/2, ℤ/3, ℤ/4, ℤ/6`, the `S3` and `D4` class algebras
/// and `K_{2,2}`, with names.
pub fn base_corpus() -> Vec<(&'static str, TableAlgebra)> {
    vec![
        ("z2", cyclic(2)),
        ("z3", cyclic(3)),
        ("z4", cyclic(4)),
        ("z6", cyclic(6)),
        ("s3class", s3_class()),
        ("d4class", d4_class()),
        ("k22", k22()),
    ]
}

/// A homomorphism suitable as wedge input, with a description of how it
/// was built.
#[derive(Debug, Clone)]
pub struct WedgeInput {
    pub description: String,
    pub phi: AlgebraHom,
}

/// Draws a wedge input from the base corpus, deterministically in `seed`.
///
/// The target `(A, B)` and a closed `N ≤ B` are drawn first; the source is
/// then one of: `(ℂN, N)` by inclusion; any corpus algebra mapped
/// trivially; or a wreath product `E ≀ M` collapsed onto a closed
/// `M ≤ N` and included.
pub fn random_wedge_input(seed: u64) -> Result<WedgeInput> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let corpus = base_corpus();
    let small: Vec<(&str, TableAlgebra)> = corpus
        .iter()
        .filter(|(_, a)| a.rank() <= 4)
        .cloned()
        .collect();
    let (a_name, a) = corpus.choose(&mut rng).expect("corpus is nonempty");
    let a = Arc::new(a.clone());
    let closed = all_closed_subsets(&a, DEFAULT_CLOSED_SUBSET_CAP)?;
    let n = closed.choose(&mut rng).expect("closed subsets exist").clone();
    let inc = AlgebraHom::inclusion(a.clone(), &n)?;
    let f = inc.source.clone();
    let (description, phi) = match rng.random_range(0..3) {
        0 => (format!("{a_name}: inclusion of {:?}", n.indices()), inc),
        1 => {
            let (c_name, c) = corpus.choose(&mut rng).expect("corpus is nonempty");
            (
                format!("{a_name}: trivial from {c_name}"),
                AlgebraHom::trivial(Arc::new(c.clone()), a.clone()),
            )
        }
        _ => {
            let (e_name, e) = small.choose(&mut rng).expect("small corpus is nonempty");
            let inner_closed = all_closed_subsets(&f, DEFAULT_CLOSED_SUBSET_CAP)?;
            let m = inner_closed.choose(&mut rng).expect("closed subsets exist").clone();
            let inc_m = AlgebraHom::inclusion(f.clone(), &m)?;
            let w = wedge_product(&AlgebraHom::trivial(Arc::new(e.clone()), inc_m.source.clone()))?;
            let phi = collapse_hom(&w).then(&inc_m)?.then(&inc)?;
            (
                format!("{a_name}: {e_name} wreath {:?} collapsed into {:?}", m.indices(), n.indices()),
                phi,
            )
        }
    };
    Ok(WedgeInput { description, phi })
}
