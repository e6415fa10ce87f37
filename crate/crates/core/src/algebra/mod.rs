//! Exact symbolic arithmetic over ℚ: Laurent polynomials in named variables,
//! rational functions with factored denominators, substitution,
//! differentiation, residues and univariate division.

mod factor;
mod parse;
mod poly;
mod ratfunc;
mod unipoly;
mod var;

use thiserror::Error;

pub use num_rational::BigRational as Rational;
pub use poly::{LaurentPoly, Monomial};
pub use ratfunc::{Assignment, RationalFunction};
pub use unipoly::UniPoly;
pub use var::Var;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("pole: denominator vanishes ({0})")]
    Pole(String),
    #[error("substitution makes the denominator identically zero")]
    ZeroDenominator,
    #[error("variable {0} has no assigned value")]
    Unassigned(String),
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
    #[error("residue point must not involve the variable {0}")]
    InvalidPoint(String),
    #[error("not a polynomial in {0}")]
    NotPolynomial(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Shorthand for a point assignment.
pub fn assign<I: IntoIterator<Item = (Var, Rational)>>(it: I) -> Assignment {
    it.into_iter().collect()
}
