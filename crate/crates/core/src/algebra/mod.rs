//! Laurent polynomials in `L`, polynomials in `T`, and rational functions
//! with denominators `∏ (1 - L^-a T^b)`.

mod laurent;
mod motrat;
mod poly;

pub use laurent::LaurentL;
pub use motrat::{ClearedForm, DenomFactor, LTermDoc, MotRat, MotRatDoc, RatFnQ, TCoeffDoc};
pub use poly::PolyT;
