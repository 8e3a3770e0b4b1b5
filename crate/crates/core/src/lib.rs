//! M-angulations of a polygon, their flip poset, the m-Dyck vectors and
//! polynomials attached to them, and exhaustive checks of their structure.
//!
//! Arithmetic layers ([`poly`], [`series`], [`linalg`], [`qsym`]) are generic
//! over the coefficient type; the aliases below fix the exact types used
//! throughout.

pub mod bijection;
pub mod dissection;
pub mod divisibility;
pub mod dyck;
pub mod error;
pub mod guard;
pub mod interval;
pub mod linalg;
pub mod poly;
pub mod poset;
pub mod qsym;
pub mod scalar;
pub mod series;
pub mod verify;

pub use bijection::{phi, psi};
pub use dissection::{chords_cross, enumerate_dissections, glue_g, Chord, Dissection, Region};
pub use dyck::{enumerate_dyck, MVector};
pub use error::{Error, Result};
pub use guard::Guard;
pub use interval::{interval_decompose, interval_structure, ForestPoset, Interval};
pub use poly::{poly_for_dissection, BinomialFactor, FactoredPoly, Monomial, SparsePoly, Variable};
pub use poset::{FlipPoset, PosetFamily};
pub use series::{fuss_catalan, rank_polynomial, Series, ZPoly};
pub use verify::{run_suite, Suite, VerificationReport};

/// Arbitrary-precision integers.
pub type Integer = num_bigint::BigInt;
/// Exact rationals.
pub type Rational = num_rational::BigRational;
/// Polynomials in the `mn` variables with integer coefficients.
pub type IntPoly = SparsePoly<Integer>;
/// Power series in `x` with rational coefficients.
pub type RationalSeries = Series<Rational>;
/// Power series in `x` whose coefficients are polynomials in `z`.
pub type RankSeries = Series<ZPoly<Rational>>;
