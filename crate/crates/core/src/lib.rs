//! Skew polynomials `K[T, φ]` over `K = k((u))`, `k = F_{p^m}`, with
//! `φ(Σ aₙuⁿ) = Σ σ(aₙ)u^{bn}` and the commutation rule `T·a = φ(a)·T`.
//!
//! The crate covers exact arithmetic, Newton polygons with abscissae `b^i`,
//! slope reductions into the finite skew ring `k[S; σ^ℓ]`, lifting of right
//! factors, irreducibility, factorization and similarity of irreducibles.

pub mod base_skew;
pub mod error;
pub mod factor;
pub mod field;
pub mod linalg;
pub mod newton;
pub mod series;
pub mod similarity;
pub mod skew;
pub mod text;

pub use base_skew::BaseSkewPoly;
pub use error::{Error, Result};
pub use factor::{
    classical_form, factor, hensel_lift_right_factor, is_irreducible, Factorization, LiftResult,
};
pub use field::{FFElem, FieldCtx};
pub use series::{LaurentSeries, Rational, Valuation};
pub use skew::{SkewMatrix, SkewPoly};
