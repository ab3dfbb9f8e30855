//! Exact polynomial arithmetic over the rationals, weighted gradings and the
//! Gröbner-basis machinery built on top of them.

pub mod error;
pub mod fraction;
pub mod groebner;
pub mod ideal;
pub mod linear_span;
pub mod matrix;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod vars;

pub use error::{AlgebraError, Result};
pub use fraction::Fraction;
pub use groebner::GbLimits;
pub use ideal::Ideal;
pub use linear_span::LinearSpan;
pub use matrix::PolyMatrix;
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_fraction, parse_poly};
pub use poly::{Degree, Poly};
pub use vars::VarTable;

pub type Rational = num_rational::BigRational;

/// Shorthand for an integer-valued [`Rational`].
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
