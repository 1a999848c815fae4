//! Exact scalars, the fixed symbol table and sparse polynomials.

mod poly;
mod scalar;
mod symbol;

pub use poly::{Exponents, Poly};
pub use scalar::{parse_rational, rational_compact, rational_fraction, Scalar};
pub(crate) use scalar::is_rational_square;
pub use symbol::{Symbol, SYMBOL_COUNT};
