//! Exact arithmetic: rationals, sparse polynomials, linear forms and
//! normalized rational functions in `s1..sq`.

pub mod linear;
pub mod poly;
pub mod polyk;
pub mod ratfun;
pub mod rational;

pub use linear::LinearForm;
pub use poly::{poly_arith, var_names, Monomial, MultiPoly, PolyOp};
pub use polyk::PolyInK;
pub use ratfun::{sum_of_simple_terms, sum_of_simple_terms_with, Coefficient, RationalFunctionNF, SimpleTerm};
pub use rational::Rational;
