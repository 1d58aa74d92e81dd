//! Exact coefficient tower.
//!
//! Everything in the crate is generic over [`Field`]. Three instances exist:
//! the rationals ([`Rational`]), rational functions in one parameter `t`
//! ([`RatFunc`]) and quadratic extensions of either ([`QuadExt`]).
//! [`UniPoly`] and [`LaurentSeries`] are built on top of any of them.

pub mod linalg;
pub mod modp;
pub mod poly;
pub mod quadext;
pub mod ratfunc;
pub mod rational;
pub mod series;

use std::fmt;

pub use modp::ModMap;
pub use poly::UniPoly;
pub use quadext::QuadExt;
pub use ratfunc::RatFunc;
pub use rational::Rational;
pub use series::LaurentSeries;

/// An exact, characteristic-zero field with decidable equality.
///
/// Arithmetic is by reference so big coefficients are not cloned on every
/// operation. The std operator traits are deliberately not part of the bound;
/// generic code calls these methods directly.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }

    fn from_rational(q: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(n.into()))
    }

    /// The element as a rational number, when it is one.
    fn to_rational(&self) -> Option<Rational>;

    /// Canonical square root inside this field, if one exists.
    fn sqrt(&self) -> Option<Self>;

    /// True when `self` is the preferred representative of `±self`.
    /// Zero counts as canonical.
    fn is_canonical_sign(&self) -> bool;

    /// True when the printed form needs no parentheses as a coefficient.
    fn is_atomic(&self) -> bool;

    /// Roots of `p` lying in this field (without multiplicity). May be
    /// incomplete for fields without a full root finder; see the instances.
    fn roots(p: &UniPoly<Self>) -> Vec<Self>;

    /// Image under the reduction homomorphism described by `m`, or `None` if
    /// the element is not integral at the chosen prime/point.
    fn reduce(&self, m: &ModMap) -> Option<u64>;

    /// Number of quadratic extensions stacked on the prime field or ℚ(t).
    fn extension_depth() -> usize {
        0
    }

    /// Cheap sufficient test that `p` is squarefree. `true` is a proof;
    /// `false` only means the exact gcd has to decide.
    fn quick_squarefree(_p: &UniPoly<Self>) -> bool {
        false
    }

    /// Coefficients of the product of two nonzero polynomials (ascending).
    /// Instances may clear denominators first.
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        let mut out = vec![Self::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = out[i + j].add(&x.mul(y));
                }
            }
        }
        out
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `±self` normalised to the canonical sign.
    fn canonical(&self) -> Self {
        if self.is_canonical_sign() {
            self.clone()
        } else {
            self.neg()
        }
    }
}

/// Fields into which a smaller field `F` embeds.
pub trait Embed<F: Field>: Field {
    fn embed(x: &F) -> Self;
}

impl<F: Field> Embed<F> for F {
    fn embed(x: &F) -> Self {
        x.clone()
    }
}
