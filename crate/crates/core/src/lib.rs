//! Polynomial Pell and almost-Pell equations `A² − D·B² = F` over ℚ and
//! ℚ(t).
//!
//! Two independent engines are provided: continued fractions of `√D`
//! ([`cfrac`]) and principality testing on the Jacobian of `Y² = D(X)`
//! ([`jacobian`]), connected by the translations in [`bridge`]. The
//! [`scanner`] runs both over specialisations of a parameter family.

pub mod algebra;
pub mod bridge;
pub mod cfrac;
pub mod curve;
pub mod error;
pub mod jacobian;
pub mod scanner;

pub use algebra::{Embed, Field, LaurentSeries, ModMap, QuadExt, RatFunc, Rational, UniPoly};
pub use error::{PellError, Result};
