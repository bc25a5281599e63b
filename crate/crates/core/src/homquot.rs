//! Double cosets, quotient table algebras, table algebra homomorphisms and
//! their kernels.

use std::sync::Arc;

use crate::algebra::{build_algebra, StructureConstants, TableAlgebra};
use crate::closed::{complex_product, is_normal, subalgebra, ClosedSubset};
use crate::error::{Error, Result};
use crate::iso::check_isomorphism;

/// Partition of the basis into double cosets `NbN`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleCosetPartition {
    pub n: ClosedSubset,
    /// Blocks ordered by representative; block 0 is `N` itself.
    pub blocks: Vec<Vec<usize>>,
    /// Smallest index of each block.
    pub representatives: Vec<usize>,
    /// Block index of every basis element.
    pub block_of: Vec<usize>,
}

impl DoubleCosetPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// `NbN` as a sorted index set.
pub fn double_coset(a: &TableAlgebra, n: &ClosedSubset, b: usize) -> Vec<usize> {
    let nb = complex_product(a, n.indices(), &[b]);
    complex_product(a, &nb, n.indices())
}

pub fn double_cosets(a: &TableAlgebra, n: &ClosedSubset) -> DoubleCosetPartition {
    let d = a.rank();
    let mut block_of = vec![usize::MAX; d];
    let mut blocks = Vec::new();
    let mut reps = Vec::new();
    for b in 0..d {
        if block_of[b] != usize::MAX {
            continue;
        }
        let block = double_coset(a, n, b);
        for &x in &block {
            block_of[x] = blocks.len();
        }
        reps.push(b);
        blocks.push(block);
    }
    DoubleCosetPartition {
        n: n.clone(),
        blocks,
        representatives: reps,
        block_of,
    }
}

/// The quotient `(A//N, B//N)` and the block map `b ↦ index of b//N`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: TableAlgebra,
    pub projection: Vec<usize>,
    pub partition: DoubleCosetPartition,
}

/// Quotient table algebra modulo a closed subset (normality not required).
///
/// The constants are `γ_ijk = o(N)⁻¹ Σ_{r∈Nb_iN, s∈Nb_jN} λ_rst`; the value is
/// evaluated for every `t` in the `k`-th double coset, checked for
/// agreement, and averaged.
pub fn quotient(a: &TableAlgebra, n: &ClosedSubset) -> Result<Quotient> {
    let part = double_cosets(a, n);
    let q = part.len();
    let on = n.order(a);
    let eps = a.tol() * a.constants().max_entry().max(1.0);
    let mut gamma = StructureConstants::zeros(q);
    for i in 0..q {
        for j in 0..q {
            // Σ_{r,s} λ_rs· as a full vector over t.
            let mut acc = vec![0.0; a.rank()];
            for &r in &part.blocks[i] {
                for &s in &part.blocks[j] {
                    for (t, &x) in a.product(r, s).iter().enumerate() {
                        acc[t] += x;
                    }
                }
            }
            for k in 0..q {
                let vals: Vec<f64> = part.blocks[k].iter().map(|&t| acc[t] / on).collect();
                let first = vals[0];
                for &v in &vals[1..] {
                    if (v - first).abs() > eps * first.abs().max(1.0) * 10.0 {
                        return Err(Error::GammaInconsistent {
                            i,
                            j,
                            k,
                            a: first,
                            b: v,
                        });
                    }
                }
                gamma.set(i, j, k, vals.iter().sum::<f64>() / vals.len() as f64);
            }
        }
    }
    let labels = part
        .representatives
        .iter()
        .map(|&r| a.label(r).to_string())
        .collect();
    let star = part
        .representatives
        .iter()
        .map(|&r| part.block_of[a.star(r)])
        .collect();
    let algebra = build_algebra(q, labels, gamma, star, a.tol())?;
    Ok(Quotient {
        algebra,
        projection: part.block_of.clone(),
        partition: part,
    })
}

/// Image of one basis element under a table algebra homomorphism:
/// `φ(b_i) = scalar · b_target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomImage {
    pub target: usize,
    pub scalar: f64,
}

/// A table algebra homomorphism stored positionally.
#[derive(Debug, Clone)]
pub struct AlgebraHom {
    pub source: Arc<TableAlgebra>,
    pub target: Arc<TableAlgebra>,
    pub images: Vec<HomImage>,
}

/// Outcome of [`validate_hom`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomCheck {
    pub ok: bool,
    pub witness: Option<(usize, usize)>,
}

impl AlgebraHom {
    pub fn new(
        source: Arc<TableAlgebra>,
        target: Arc<TableAlgebra>,
        images: Vec<HomImage>,
    ) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::Shape(format!(
                "{} images for source rank {}",
                images.len(),
                source.rank()
            )));
        }
        if let Some(im) = images
            .iter()
            .find(|im| im.target >= target.rank() || !(im.scalar > 0.0))
        {
            return Err(Error::Shape(format!("invalid image {im:?}")));
        }
        Ok(Self {
            source,
            target,
            images,
        })
    }

    /// `φ(b) = b` on the same algebra.
    pub fn identity(a: Arc<TableAlgebra>) -> Self {
        let images = (0..a.rank())
            .map(|i| HomImage {
                target: i,
                scalar: 1.0,
            })
            .collect();
        Self {
            source: a.clone(),
            target: a,
            images,
        }
    }

    /// `φ(b) = |b|·1`.
    pub fn trivial(source: Arc<TableAlgebra>, target: Arc<TableAlgebra>) -> Self {
        let images = source
            .degrees()
            .iter()
            .map(|&d| HomImage {
                target: 0,
                scalar: d,
            })
            .collect();
        Self {
            source,
            target,
            images,
        }
    }

    /// Inclusion of `(ℂN, N)` into `a`, together with the subalgebra.
    pub fn inclusion(a: Arc<TableAlgebra>, n: &ClosedSubset) -> Result<Self> {
        let (sub, map) = subalgebra(&a, n)?;
        let images = map
            .iter()
            .map(|&t| HomImage {
                target: t,
                scalar: 1.0,
            })
            .collect();
        Ok(Self {
            source: Arc::new(sub),
            target: a,
            images,
        })
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AlgebraHom) -> Result<AlgebraHom> {
        if self.target.rank() != other.source.rank() {
            return Err(Error::Shape("homomorphisms do not compose".into()));
        }
        let images = self
            .images
            .iter()
            .map(|im| {
                let next = other.images[im.target];
                HomImage {
                    target: next.target,
                    scalar: im.scalar * next.scalar,
                }
            })
            .collect();
        Ok(AlgebraHom {
            source: self.source.clone(),
            target: other.target.clone(),
            images,
        })
    }

    /// Distinct target indices, sorted.
    pub fn image_support(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.images.iter().map(|im| im.target).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `φ(x)` for `x` in source coordinates.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.target.rank()];
        for (i, im) in self.images.iter().enumerate() {
            out[im.target] += x[i] * im.scalar;
        }
        out
    }
}

/// Checks identity, multiplicativity and `*`-compatibility within the
/// source tolerance.
pub fn validate_hom(phi: &AlgebraHom) -> HomCheck {
    let src = &phi.source;
    let tgt = &phi.target;
    let d = src.rank();
    let fail = |i, j| HomCheck {
        ok: false,
        witness: Some((i, j)),
    };
    let id = phi.images[0];
    if id.target != 0 || (id.scalar - 1.0).abs() > src.tol() {
        return fail(0, 0);
    }
    for i in 0..d {
        let si = src.star(i);
        let (a, b) = (phi.images[i], phi.images[si]);
        if b.target != tgt.star(a.target) || (a.scalar - b.scalar).abs() > src.tol() * a.scalar.max(1.0) {
            return fail(i, si);
        }
    }
    let eps = src.tol().max(tgt.tol())
        * src.constants().max_entry().max(tgt.constants().max_entry()).max(1.0);
    for i in 0..d {
        for j in 0..d {
            let (a, b) = (phi.images[i], phi.images[j]);
            let lhs: Vec<f64> = tgt
                .product(a.target, b.target)
                .iter()
                .map(|x| x * a.scalar * b.scalar)
                .collect();
            let rhs = phi.apply(src.product(i, j));
            let scale = lhs.iter().fold(1.0f64, |m, x| m.max(x.abs()));
            if lhs.iter().zip(&rhs).any(|(x, y)| (x - y).abs() > eps * scale) {
                return fail(i, j);
            }
        }
    }
    HomCheck {
        ok: true,
        witness: None,
    }
}

/// `ker_B φ = {b : φ(b) ∈ ℝ⁺·1}`, which must be a normal closed subset.
pub fn hom_kernel(phi: &AlgebraHom) -> Result<ClosedSubset> {
    let idx: Vec<usize> = phi
        .images
        .iter()
        .enumerate()
        .filter(|(_, im)| im.target == 0)
        .map(|(i, _)| i)
        .collect();
    let k = ClosedSubset::new(&phi.source, &idx).map_err(|_| Error::KernelNotNormal(idx.clone()))?;
    if !is_normal(&phi.source, &k) {
        return Err(Error::KernelNotNormal(idx));
    }
    Ok(k)
}

/// The canonical epimorphism `π(b) = (|b| / |b//N|)·(b//N)` for normal `N`.
pub fn canonical_epi(a: &Arc<TableAlgebra>, n: &ClosedSubset) -> Result<AlgebraHom> {
    if !is_normal(a, n) {
        return Err(Error::NotNormal(n.indices().to_vec()));
    }
    let q = quotient(a, n)?;
    let images = (0..a.rank())
        .map(|i| {
            let t = q.projection[i];
            HomImage {
                target: t,
                scalar: a.degree(i) / q.algebra.degree(t),
            }
        })
        .collect();
    Ok(AlgebraHom {
        source: a.clone(),
        target: Arc::new(q.algebra),
        images,
    })
}

/// `B//ker φ ≅ φ(B)`: builds the quotient by the kernel and checks the
/// induced block-to-image bijection against the target constants.
pub fn first_isomorphism_check(phi: &AlgebraHom) -> bool {
    let Ok(k) = hom_kernel(phi) else {
        return false;
    };
    let Ok(q) = quotient(&phi.source, &k) else {
        return false;
    };
    let support = phi.image_support();
    let Ok(image) = ClosedSubset::new(&phi.target, &support) else {
        return false;
    };
    let Ok((img_alg, img_map)) = subalgebra(&phi.target, &image) else {
        return false;
    };
    if img_alg.rank() != q.algebra.rank() {
        return false;
    }
    // Block r of the quotient goes to the image of its representative; all
    // block members must agree.
    let mut perm = vec![usize::MAX; q.algebra.rank()];
    for (i, im) in phi.images.iter().enumerate() {
        let block = q.projection[i];
        let pos = img_map.binary_search(&im.target).unwrap();
        if perm[block] == usize::MAX {
            perm[block] = pos;
        } else if perm[block] != pos {
            return false;
        }
    }
    check_isomorphism(&q.algebra, &img_alg, &perm, phi.source.tol() * 10.0).is_ok()
}
