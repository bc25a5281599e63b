//! The table algebra type: construction, axiom validation, the degree map
//! and rescaling.
//!
//! Basis index 0 is always the identity. Structure constants are stored as a
//! dense `d×d×d` tensor, `λ[i][j][k]` being the coefficient of `b_k` in
//! `b_i b_j`.

use std::collections::HashSet;

use nalgebra::DMatrix;

use crate::error::{Axiom, Error, Result};

pub const DEFAULT_TOL: f64 = 1e-9;

const POWER_ITER_CAP: usize = 200_000;

/// Dense `d×d×d` structure-constant tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    rank: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(rank: usize) -> Self {
        Self {
            rank,
            data: vec![0.0; rank * rank * rank],
        }
    }

    /// Wraps a flat tensor laid out as `((i * d) + j) * d + k`.
    pub fn from_flat(rank: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rank * rank * rank {
            return Err(Error::Shape(format!(
                "tensor has {} entries, rank {rank} needs {}",
                data.len(),
                rank * rank * rank
            )));
        }
        Ok(Self { rank, data })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.rank + j) * self.rank + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.idx(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let n = self.idx(i, j, k);
        self.data[n] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let n = self.idx(i, j, k);
        self.data[n] += v;
    }

    /// Coefficient vector of `b_i b_j`.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> &[f64] {
        let start = self.idx(i, j, 0);
        &self.data[start..start + self.rank]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn max_entry(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    /// Identity-element table of the given rank with all other products zero.
    /// Only useful as a starting point for filling in products.
    pub fn with_identity(rank: usize) -> Self {
        let mut t = Self::zeros(rank);
        for j in 0..rank {
            t.set(0, j, j, 1.0);
            t.set(j, 0, j, 1.0);
        }
        t
    }
}

/// A validated table algebra `(A, B)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TableAlgebra {
    labels: Vec<String>,
    lambda: StructureConstants,
    star: Vec<usize>,
    degrees: Vec<f64>,
    tol: f64,
}

/// Builds and validates a table algebra.
///
/// Entries slightly below zero (within the tolerance) are clamped to zero
/// before validation.
pub fn build_algebra(
    rank: usize,
    labels: Vec<String>,
    lambda: StructureConstants,
    star: Vec<usize>,
    tol: f64,
) -> Result<TableAlgebra> {
    if rank == 0 {
        return Err(Error::Shape("rank must be positive".into()));
    }
    if lambda.rank() != rank {
        return Err(Error::Shape(format!(
            "tensor rank {} differs from declared rank {rank}",
            lambda.rank()
        )));
    }
    if labels.len() != rank {
        return Err(Error::Shape(format!(
            "{} labels for rank {rank}",
            labels.len()
        )));
    }
    let distinct: HashSet<&String> = labels.iter().collect();
    if distinct.len() != rank {
        return Err(Error::Shape("labels are not distinct".into()));
    }
    check_star(&star, rank)?;

    let mut lambda = lambda;
    let scale = lambda.max_entry().max(1.0);
    let eps = tol * scale;
    for i in 0..rank {
        for j in 0..rank {
            for k in 0..rank {
                let v = lambda.get(i, j, k);
                if !v.is_finite() || v <= -eps {
                    return Err(Error::NegativeConstant { i, j, k, value: v });
                }
                if v < 0.0 {
                    lambda.set(i, j, k, 0.0);
                }
            }
        }
    }

    check_identity(&lambda, eps)?;
    check_identity_coefficient(&lambda, &star, eps)?;
    check_anti_automorphism(&lambda, &star, eps)?;
    check_associativity(&lambda, tol * scale * scale)?;

    let degrees = degree_map(&lambda, tol)?;
    for i in 0..rank {
        let di = degrees[i];
        if (di - degrees[star[i]]).abs() > tol * di.max(1.0) {
            return Err(Error::AxiomViolation {
                axiom: Axiom::DegreeMap,
                witness: vec![i, star[i]],
            });
        }
    }

    Ok(TableAlgebra {
        labels,
        lambda,
        star,
        degrees,
        tol,
    })
}

fn check_star(star: &[usize], rank: usize) -> Result<()> {
    if star.len() != rank {
        return Err(Error::Shape(format!(
            "star has {} entries for rank {rank}",
            star.len()
        )));
    }
    if star[0] != 0 {
        return Err(Error::AxiomViolation {
            axiom: Axiom::StarInvolution,
            witness: vec![0],
        });
    }
    for (i, &s) in star.iter().enumerate() {
        if s >= rank || star[s] != i {
            return Err(Error::AxiomViolation {
                axiom: Axiom::StarInvolution,
                witness: vec![i],
            });
        }
    }
    Ok(())
}

fn check_identity(lambda: &StructureConstants, eps: f64) -> Result<()> {
    let d = lambda.rank();
    for j in 0..d {
        for k in 0..d {
            let want = if j == k { 1.0 } else { 0.0 };
            if (lambda.get(0, j, k) - want).abs() > eps || (lambda.get(j, 0, k) - want).abs() > eps
            {
                return Err(Error::AxiomViolation {
                    axiom: Axiom::Identity,
                    witness: vec![j, k],
                });
            }
        }
    }
    Ok(())
}

fn check_identity_coefficient(lambda: &StructureConstants, star: &[usize], eps: f64) -> Result<()> {
    let d = lambda.rank();
    for i in 0..d {
        for j in 0..d {
            let v = lambda.get(i, j, 0);
            let bad = if j == star[i] { v <= eps } else { v > eps };
            if bad {
                return Err(Error::AxiomViolation {
                    axiom: Axiom::IdentityCoefficient,
                    witness: vec![i, j],
                });
            }
        }
    }
    Ok(())
}

fn check_anti_automorphism(lambda: &StructureConstants, star: &[usize], eps: f64) -> Result<()> {
    let d = lambda.rank();
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if (lambda.get(i, j, k) - lambda.get(star[j], star[i], star[k])).abs() > eps {
                    return Err(Error::AxiomViolation {
                        axiom: Axiom::AntiAutomorphism,
                        witness: vec![i, j, k],
                    });
                }
            }
        }
    }
    Ok(())
}

fn check_associativity(lambda: &StructureConstants, eps: f64) -> Result<()> {
    let d = lambda.rank();
    // (b_i b_j) b_k versus b_i (b_j b_k), coefficient of b_m.
    for i in 0..d {
        for j in 0..d {
            let ij = lambda.product(i, j);
            for k in 0..d {
                let jk = lambda.product(j, k);
                for m in 0..d {
                    let mut lhs = 0.0;
                    let mut rhs = 0.0;
                    for t in 0..d {
                        lhs += ij[t] * lambda.get(t, k, m);
                        rhs += jk[t] * lambda.get(i, t, m);
                    }
                    if (lhs - rhs).abs() > eps * lhs.abs().max(1.0) {
                        return Err(Error::AxiomViolation {
                            axiom: Axiom::Associativity,
                            witness: vec![i, j, k, m],
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Computes the degree map of an algebra given by its structure constants.
///
/// The degree vector is the positive left eigenvector shared by all
/// left-regular matrices. It is obtained as the Perron vector of
/// `I + Σ_i L_{b_i}` (entrywise positive for table algebras), normalised so
/// that the identity has degree 1; each degree is then read off as the
/// Rayleigh quotient of `L_{b_i}` on that vector.
pub fn degree_map(lambda: &StructureConstants, tol: f64) -> Result<Vec<f64>> {
    let d = lambda.rank();
    // m[k][j] = δ_kj + Σ_i λ[i][j][k]; iterate v ← v·m.
    let mut m = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            for (k, &x) in lambda.product(i, j).iter().enumerate() {
                m[k * d + j] += x;
            }
        }
    }
    for k in 0..d {
        m[k * d + k] += 1.0;
    }
    let mut v = vec![1.0 / (d as f64).sqrt(); d];
    let mut w = vec![0.0; d];
    for _ in 0..POWER_ITER_CAP {
        for j in 0..d {
            w[j] = (0..d).map(|k| v[k] * m[k * d + j]).sum();
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NoPositiveCharacter);
        }
        let mut delta = 0.0f64;
        for j in 0..d {
            let x = w[j] / norm;
            delta = delta.max((x - v[j]).abs());
            v[j] = x;
        }
        if delta < 1e-16 {
            break;
        }
    }
    if v.iter().any(|&x| x <= tol * v[0].abs()) || v[0] <= 0.0 {
        return Err(Error::NoPositiveCharacter);
    }
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let mut raw = vec![0.0; d];
    for (i, r) in raw.iter_mut().enumerate() {
        let mut num = 0.0;
        for j in 0..d {
            for (k, &x) in lambda.product(i, j).iter().enumerate() {
                num += v[k] * x * v[j];
            }
        }
        *r = num / vv;
    }
    // Normalise so |1| = 1 (raw[0] is the Rayleigh quotient of the identity).
    let degrees: Vec<f64> = raw.iter().map(|x| x / raw[0]).collect();
    // The vector must actually be a common eigenvector: v L_i = |b_i| v.
    let vn: Vec<f64> = v.iter().map(|x| x / v[0]).collect();
    for i in 0..d {
        if degrees[i] <= 0.0 {
            return Err(Error::NoPositiveCharacter);
        }
        for j in 0..d {
            let lhs: f64 = lambda
                .product(i, j)
                .iter()
                .enumerate()
                .map(|(k, &x)| vn[k] * x)
                .sum();
            let rhs = degrees[i] * vn[j];
            if (lhs - rhs).abs() > tol * rhs.abs().max(1.0) * 10.0 {
                return Err(Error::NoPositiveCharacter);
            }
        }
    }
    Ok(degrees)
}

impl TableAlgebra {
    pub fn rank(&self) -> usize {
        self.star.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn constants(&self) -> &StructureConstants {
        &self.lambda
    }

    #[inline]
    pub fn lambda(&self, i: usize, j: usize, k: usize) -> f64 {
        self.lambda.get(i, j, k)
    }

    #[inline]
    pub fn product(&self, i: usize, j: usize) -> &[f64] {
        self.lambda.product(i, j)
    }

    #[inline]
    pub fn star(&self, i: usize) -> usize {
        self.star[i]
    }

    pub fn star_map(&self) -> &[usize] {
        &self.star
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    #[inline]
    pub fn degree(&self, i: usize) -> f64 {
        self.degrees[i]
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Sum of all degrees, `o(B)`.
    pub fn order(&self) -> f64 {
        self.degrees.iter().sum()
    }

    /// `o(S) = Σ_{b∈S} |b|`.
    pub fn order_of(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&i| self.degrees[i]).sum()
    }

    /// Absolute threshold above which a coefficient counts as support.
    pub fn support_threshold(&self) -> f64 {
        self.tol * self.lambda.max_entry().max(1.0)
    }

    /// Indices with coefficient above the support threshold.
    pub fn support(&self, v: &[f64]) -> Vec<usize> {
        let eps = self.support_threshold();
        v.iter()
            .enumerate()
            .filter(|(_, x)| x.abs() > eps)
            .map(|(i, _)| i)
            .collect()
    }

    /// Product of two elements given in basis coordinates.
    pub fn multiply(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let d = self.rank();
        let mut out = vec![0.0; d];
        for i in 0..d {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                let c = x[i] * y[j];
                if c == 0.0 {
                    continue;
                }
                for (o, &l) in out.iter_mut().zip(self.product(i, j)) {
                    *o += c * l;
                }
            }
        }
        out
    }

    /// Left multiplication by `b_i` as a matrix: `(L_i)[k][j] = λ[i][j][k]`.
    pub fn left_matrix(&self, i: usize) -> DMatrix<f64> {
        let d = self.rank();
        DMatrix::from_fn(d, d, |k, j| self.lambda(i, j, k))
    }

    /// Right multiplication by `b_i`: `(R_i)[k][j] = λ[j][i][k]`.
    pub fn right_matrix(&self, i: usize) -> DMatrix<f64> {
        let d = self.rank();
        DMatrix::from_fn(d, d, |k, j| self.lambda(j, i, k))
    }

    /// Whether `|b| = λ[b][b*][1]` for every basis element.
    pub fn is_standard(&self) -> bool {
        (0..self.rank()).all(|i| {
            let l = self.lambda(i, self.star[i], 0);
            (l - self.degrees[i]).abs() <= self.tol * self.degrees[i].max(1.0) * 10.0
        })
    }

    pub fn is_commutative(&self) -> bool {
        let eps = self.support_threshold();
        let d = self.rank();
        (0..d).all(|i| {
            (0..d).all(|j| {
                self.product(i, j)
                    .iter()
                    .zip(self.product(j, i))
                    .all(|(a, b)| (a - b).abs() <= eps)
            })
        })
    }

    /// Returns a copy with a different tolerance, revalidated.
    pub fn with_tol(&self, tol: f64) -> Result<TableAlgebra> {
        build_algebra(
            self.rank(),
            self.labels.clone(),
            self.lambda.clone(),
            self.star.clone(),
            tol,
        )
    }

    /// Applies a positive basis rescaling `b_i ↦ s_i b_i` and revalidates.
    pub fn rescale(&self, scaling: &[f64]) -> Result<TableAlgebra> {
        let d = self.rank();
        if scaling.len() != d || scaling[0] != 1.0 {
            return Err(Error::Shape("scaling must have length rank and s[0] = 1".into()));
        }
        for i in 0..d {
            if scaling[i] <= 0.0 || (scaling[i] - scaling[self.star[i]]).abs() > self.tol {
                return Err(Error::Shape(format!("invalid scaling at index {i}")));
            }
        }
        let mut out = StructureConstants::zeros(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let v = self.lambda(i, j, k);
                    if v != 0.0 {
                        out.set(i, j, k, scaling[i] * scaling[j] / scaling[k] * v);
                    }
                }
            }
        }
        build_algebra(d, self.labels.clone(), out, self.star.clone(), self.tol)
    }
}

/// Rescales to the standard form, returning the algebra and the scaling
/// `s_i = |b_i| / λ[i][i*][0]`.
pub fn rescale_to_standard(a: &TableAlgebra) -> Result<(TableAlgebra, Vec<f64>)> {
    let scaling: Vec<f64> = (0..a.rank())
        .map(|i| a.degree(i) / a.lambda(i, a.star(i), 0))
        .collect();
    let mut scaling = scaling;
    scaling[0] = 1.0;
    // Enforce exact *-symmetry of the scaling against rounding.
    for i in 0..a.rank() {
        let j = a.star(i);
        if j > i {
            let s = 0.5 * (scaling[i] + scaling[j]);
            scaling[i] = s;
            scaling[j] = s;
        }
    }
    let out = a.rescale(&scaling)?;
    Ok((out, scaling))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn z2_raw(v: f64) -> StructureConstants {
        let mut t = StructureConstants::with_identity(2);
        t.set(1, 1, 0, v);
        t
    }

    #[test]
    fn z2_is_valid_with_unit_degrees() {
        let a = build_algebra(2, vec!["1".into(), "b".into()], z2_raw(1.0), vec![0, 1], DEFAULT_TOL)
            .unwrap();
        assert_eq!(a.rank(), 2);
        assert!((a.degree(1) - 1.0).abs() < 1e-12);
        assert!(a.is_standard());
    }

    #[test]
    fn negative_constant_is_rejected() {
        let err = build_algebra(2, vec!["1".into(), "b".into()], z2_raw(-1.0), vec![0, 1], DEFAULT_TOL)
            .unwrap_err();
        assert!(matches!(err, Error::NegativeConstant { i: 1, j: 1, k: 0, .. }));
    }

    #[test]
    fn tiny_negative_is_clamped() {
        let mut t = z2_raw(1.0);
        t.set(1, 1, 1, -1e-12);
        let a = build_algebra(2, vec!["1".into(), "b".into()], t, vec![0, 1], DEFAULT_TOL).unwrap();
        assert_eq!(a.lambda(1, 1, 1), 0.0);
    }

    #[test]
    fn s3_class_algebra_degrees() {
        let a = corpus::s3_class();
        let want = [1.0, 3.0, 2.0];
        for (x, y) in a.degrees().iter().zip(want) {
            assert!((x - y).abs() < 1e-10, "{:?}", a.degrees());
        }
    }

    #[test]
    fn scaled_basis_degree_doubles() {
        // {1, 2b} with (2b)^2 = 4·1
        let a = build_algebra(2, vec!["1".into(), "B".into()], z2_raw(4.0), vec![0, 1], DEFAULT_TOL)
            .unwrap();
        assert!((a.degree(1) - 2.0).abs() < 1e-10);
        assert!(!a.is_standard());
        let (s, scaling) = rescale_to_standard(&a).unwrap();
        assert!((scaling[1] - 0.5).abs() < 1e-12);
        assert!((s.lambda(1, 1, 0) - 1.0).abs() < 1e-12);
        assert!(s.is_standard());
    }

    #[test]
    fn z3_scaled_by_three_rescales_back() {
        let z3 = corpus::cyclic(3);
        let scaled = z3.rescale(&[1.0, 3.0, 3.0]).unwrap();
        let (_, scaling) = rescale_to_standard(&scaled).unwrap();
        assert!((scaling[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!((scaling[2] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn standard_s3_has_identity_scaling() {
        let (_, s) = rescale_to_standard(&corpus::s3_class()).unwrap();
        assert!(s.iter().all(|x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn broken_associativity_reports_witness() {
        // b^2 = 1 + b is fine (degree golden ratio); b^2 = 1 + b with b·1 broken is not.
        let mut t = z2_raw(1.0);
        t.set(1, 1, 1, 1.0);
        assert!(build_algebra(2, vec!["1".into(), "b".into()], t.clone(), vec![0, 1], DEFAULT_TOL).is_ok());
        let mut t3 = StructureConstants::with_identity(3);
        t3.set(1, 1, 0, 1.0);
        t3.set(2, 2, 0, 1.0);
        t3.set(1, 2, 1, 1.0);
        t3.set(2, 1, 1, 1.0);
        let err = build_algebra(
            3,
            vec!["1".into(), "x".into(), "y".into()],
            t3,
            vec![0, 1, 2],
            DEFAULT_TOL,
        )
        .unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { .. }), "{err:?}");
    }

    #[test]
    fn bad_star_is_rejected() {
        let err = build_algebra(2, vec!["1".into(), "b".into()], z2_raw(1.0), vec![1, 0], DEFAULT_TOL)
            .unwrap_err();
        assert!(matches!(err, Error::AxiomViolation { axiom: Axiom::StarInvolution, .. }));
    }
}
