use std::fmt;

use thiserror::Error;

/// Which table-algebra axiom or derived invariant a witness refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    /// `*` is not an involution of the basis fixing the identity.
    StarInvolution,
    /// Index 0 does not act as the identity.
    Identity,
    /// `λ[i][j][0]` nonzero for `j != i*`, or `λ[i][i*][0]` not positive.
    IdentityCoefficient,
    /// `λ[i][j][k] != λ[j*][i*][k*]`.
    AntiAutomorphism,
    Associativity,
    /// The degree vector is not multiplicative or not `*`-invariant.
    DegreeMap,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::StarInvolution => "star-involution",
            Axiom::Identity => "identity",
            Axiom::IdentityCoefficient => "identity-coefficient",
            Axiom::AntiAutomorphism => "anti-automorphism",
            Axiom::Associativity => "associativity",
            Axiom::DegreeMap => "degree-map",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Shape(String),
    #[error("axiom {axiom} violated at {witness:?}")]
    AxiomViolation { axiom: Axiom, witness: Vec<usize> },
    #[error("negative structure constant λ[{i}][{j}][{k}] = {value}")]
    NegativeConstant {
        i: usize,
        j: usize,
        k: usize,
        value: f64,
    },
    #[error("no strictly positive degree vector found")]
    NoPositiveCharacter,
    #[error("rank {rank} exceeds cap {cap}")]
    RankCapExceeded { rank: usize, cap: usize },
    #[error("index set {0:?} is not a closed subset")]
    NotClosed(Vec<usize>),
    #[error("closed subset {0:?} is not normal")]
    NotNormal(Vec<usize>),
    #[error("quotient constant γ[{i}][{j}][{k}] depends on the coset element: {a} vs {b}")]
    GammaInconsistent {
        i: usize,
        j: usize,
        k: usize,
        a: f64,
        b: f64,
    },
    #[error("homomorphism kernel {0:?} is not a normal closed subset")]
    KernelNotNormal(Vec<usize>),
    #[error("invalid homomorphism: witness ({0}, {1})")]
    InvalidHom(usize, usize),
    #[error("image support {0:?} is not closed in the target")]
    ImageNotClosed(Vec<usize>),
    #[error("identification of image element {h} disagrees between preimages {d1} and {d2}")]
    IdentificationInconsistent { h: usize, d1: usize, d2: usize },
    #[error("reconstruction for K={k:?}, D={d:?} does not match: {reason}")]
    ReconstructionMismatch {
        k: Vec<usize>,
        d: Vec<usize>,
        reason: String,
    },
    #[error("representation kernel contains K; it does not lift from the D-factor")]
    KernelContainsK,
    #[error("sum of squared degrees {got} differs from rank {expected}")]
    CompletenessFailure { got: f64, expected: usize },
    #[error("could not separate Wedderburn components after {0} attempts")]
    SplitFailure(usize),
    #[error("component dimension {0} is not a perfect square")]
    NonIntegerDegree(f64),
    #[error("multiplicity system residual {0:e} too large")]
    ResidualTooLarge(f64),
    #[error("character {0} has zero multiplicity")]
    ZeroMultiplicity(usize),
    #[error("expected {expected} characters, found {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("algebra is not standard")]
    NotStandard,
    #[error("format error on line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("scheme axiom violated: {reason} (witness {witness:?})")]
    SchemeAxiom { reason: String, witness: Vec<usize> },
    #[error("blocks xH do not partition the points (witness points {0}, {1})")]
    PartitionInconsistent(usize, usize),
    #[error("fiber compatibility fails: {0}")]
    CompatibilityFailure(String),
    #[error("scheme epimorphism {0} is not normal or not valid: {1}")]
    NotNormalEpimorphism(usize, String),
    #[error("glued relations do not form a scheme: {0}")]
    ResultNotScheme(String),
    #[error("scheme algebra does not match the algebra-level construction: {0}")]
    BridgeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
