//! Exact sparse polynomials over the rationals, matrix term orderings, substitution,
//! Buchberger's algorithm and exact weight feasibility.

mod groebner;
mod lp;
mod order;
mod parse;
mod poly;
mod span;
mod subst;
mod term;
mod vars;

pub use groebner::{groebner_basis, groebner_basis_with, normal_form, GbOptions};
pub use lp::{lp_realizable, ordering_from_weights};
pub use order::OrderingMatrix;
pub use parse::parse_polynomial;
pub use poly::{format_rational, Polynomial};
pub use span::{in_truncated_ideal, terms_up_to, LinearSpan};
pub use subst::{coherentize, substitute, SubstitutionMap};
pub use term::{degrevlex_cmp, Term};
pub use vars::VarTable;

use thiserror::Error;

/// Exact rational coefficients.
pub type Q = num_rational::BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(n.into())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("zero polynomial has no leading term")]
    ZeroPolynomial,
    #[error("not a term ordering: {0}")]
    NotATermOrdering(String),
    #[error("duplicate variable name {0}")]
    DuplicateVariable(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not Z-separating under the given weights: {0}")]
    NotSeparating(String),
    #[error("Gröbner basis budget exhausted after {steps} reduction steps")]
    BudgetExhausted { steps: u64 },
}

/// `⟨f⟩ ⊆ ⟨g⟩` and `⟨g⟩ ⊆ ⟨f⟩`, decided by reducing each side against a Gröbner basis of
/// the other.
pub fn ideals_equal(order: &OrderingMatrix, f: &[Polynomial], g: &[Polynomial], opts: &GbOptions) -> Result<bool, PolyError> {
    let gf = groebner_basis_with(order, f, opts)?;
    let gg = groebner_basis_with(order, g, opts)?;
    Ok(f.iter().all(|p| normal_form(order, p, &gg).is_zero()) && g.iter().all(|p| normal_form(order, p, &gf).is_zero()))
}
