//! Coefficient ring: exact rationals, truncated Laurent series, and the
//! polynomial types used for characteristic polynomials and rational functions.

pub mod poly;
pub mod rational;
pub mod series;

pub use poly::{BiPoly, RationalFunction, RationalFunctionRecord, UniPoly};
pub use rational::{factorial, factorial_rat, format_rational, int, parse_rational, rat, Rational};
pub use series::{Exponents, Grading, LaurentPoly, MultiSeries, SeriesRecord, Substitution, Var, Window};
