//! Shared fixtures for the benchmarks.

use hyperpell::{RatFunc, Rational, UniPoly};

pub fn sextic() -> UniPoly<Rational> {
    UniPoly::from_i64s(&[0, 1, 0, 0, 0, 0, 1])
}

pub fn octic() -> UniPoly<Rational> {
    UniPoly::from_i64s(&[0, -1, 0, 0, -1, 0, 0, 0, 1])
}

/// `4X + 1`
pub fn octic_target() -> UniPoly<Rational> {
    UniPoly::from_i64s(&[1, 4])
}

/// `X⁶ + X + t`
pub fn sextic_family() -> UniPoly<RatFunc> {
    sextic().embed::<RatFunc>().add_ref(&UniPoly::constant(RatFunc::t()))
}
