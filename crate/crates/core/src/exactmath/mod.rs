//! Exact arithmetic: ground fields, places, polynomials, rational functions,
//! truncated series and the expression parser.

mod field;
mod parse;
mod place;
mod poly;
mod ratfunc;
mod series;

pub use field::{is_prime, legendre, sqrt_mod, FieldElem, GroundField, Residue, Scalar};
pub use parse::parse_ratfunc;
pub use place::{
    gauss_valuation, int_valuation, poly_valuation, rational_valuation, reduce_elem, reduce_poly,
    reduce_ratfunc, valuation, PlaceId, PlaceKind, Valuation,
};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use series::{series_expand, TruncSeries};
