//! Exact computer algebra for unitarily invariant curvature measures.
//!
//! The crate realizes, in exact rational-pi arithmetic, the commutative
//! algebra of dual invariant curvature measures on complex space forms:
//! the graded quotient rings of invariant valuations, the module structure
//! of curvature measures over valuations, local and global kinematic
//! formula coefficients for any `n`, the embedding of curved-space
//! valuations, and angularity criteria.
//!
//! Modules:
//! - [`scalar`]: Laurent polynomials in the symbol pi over arbitrary-precision rationals.
//! - [`poly`]: weighted-graded polynomials in `t`, `s`, `v` and the generating series.
//! - [`linalg`]: exact row reduction and solving over scalars.
//! - [`ring`]: the two quotient rings per `n`, normal forms, the Poincare pairing.
//! - [`curv`]: the Delta/N basis, the module action, the l/n-maps, globalization.
//! - [`dual`]: the dual algebra, generator tables, presentations, kinematic tensors.
//! - [`spaceform`]: lambda-dependent structures on complex space forms.
//! - [`angular`]: angularity of dual curvature measures and invariant valuations.
//! - [`text`]: the canonical text grammar for scalars and polynomials.
//! - [`serialize`]: JSON/CSV/LaTeX emitters for elements and tensors.

pub mod angular;
pub mod curv;
pub mod dual;
pub mod linalg;
pub mod poly;
pub mod ring;
pub mod scalar;
pub mod serialize;
pub mod spaceform;
pub mod text;

pub use curv::{CurvElement, CurvLabel};
pub use dual::{DualElement, Presentation};
pub use poly::Poly;
pub use ring::{Algebra, TildeValElement, ValElement};
pub use scalar::{Rational, Scalar};

/// Errors surfaced by fallible operations.
///
/// Internal linear systems carry a "must not occur" contract: a
/// [`Error::Singular`] from one of them indicates an inconsistency in the
/// multiplication tables, not bad user input.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("inexact scalar division")]
    InexactDivision,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("singular linear system in {0}")]
    Singular(&'static str),
    #[error("no N generators for n = 1")]
    NoNGenerators,
    #[error("annihilator of the angular span is trivial for n = 1")]
    AngularTrivial,
    #[error("{0}")]
    Domain(String),
}
