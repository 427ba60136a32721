pub mod cyclotomic;
pub mod field;
pub mod laurent;
pub mod poly;
pub mod quotient;

pub use cyclotomic::GaussSqrt2;
pub use field::{CoefficientField, Field, PrimeField, Rat, Rationals};
pub use laurent::{IntLaurent, LaurentPolynomial};
pub use poly::{smith_over_poly_ring, InvariantFactors, Poly, PolyRing};
pub use quotient::{reduce_mod2_t4, QuotientClass};
