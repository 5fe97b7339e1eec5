//! ℚ-linear algebra over edge lengths.
//!
//! Exact mode handles lengths of the form r·√d (all lengths of polyhedra with
//! rational coordinates have this form); square roots of distinct squarefree
//! integers are ℚ-independent, so the radicands give a basis of the span
//! directly. Heuristic mode looks for integer relations among decimals by
//! lattice reduction and can only report "none up to height H".

mod exact;
mod factor;
mod lattice;
mod relation;

use thiserror::Error;

pub(crate) use exact::serialize_big_ints;
pub use exact::{
    annihilates, clear_denominators, is_q_independent, normalize_sqrt, parse_rational, q_basis, ExactLength,
    IndependenceVerdict, SpanBasis,
};
pub use factor::{is_prime, squarefree_decompose, TRIAL_DIVISION_LIMIT};
pub use lattice::lll_reduce;
pub use relation::{find_integer_relation, DecimalValue, RelationOptions, EXACT_DIGITS, MAX_RELATION_DIM};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LengthError {
    #[error("squared length must be positive")]
    NonPositive,
    #[error("{0} is beyond the factorization budget")]
    FactorizationTooLarge(String),
    #[error("no integer relation with coefficients up to {0}")]
    NoneUpToHeight(u64),
    #[error("relation search needs 2..=64 values, got {0}")]
    RelationDimension(usize),
}
