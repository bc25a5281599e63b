//! Table algebras, association schemes, wedge products and their
//! irreducible characters.
//!
//! Structure constants are stored densely as `λ[i][j][k]`, the coefficient
//! of `b_k` in `b_i b_j`, with basis index 0 the identity. Everything is
//! floating point with explicit tolerances.

pub mod algebra;
pub mod closed;
pub mod corpus;
pub mod error;
pub mod groups;
pub mod homquot;
pub mod io;
pub mod iso;
pub mod repchar;
pub mod schemes;
pub mod wedge;

pub use algebra::{build_algebra, rescale_to_standard, StructureConstants, TableAlgebra, DEFAULT_TOL};
pub use closed::ClosedSubset;
pub use error::{Error, Result};
pub use homquot::{AlgebraHom, HomImage, Quotient};
pub use repchar::{Character, EngineConfig, Representation};
pub use schemes::{Scheme, SchemeEpimorphism};
pub use wedge::{Main2Report, WedgeProduct};
