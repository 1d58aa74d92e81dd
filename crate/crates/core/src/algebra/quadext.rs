//! Quadratic extensions `F(√δ)` of a base field.
//!
//! The extension is carried on the elements: `delta` is `None` for elements
//! of the base field and `Some(δ)` otherwise. Mixing two different `δ` in
//! one operation is a logic error and panics. Only one level is supported;
//! callers that would need `F(√δ₁)(√δ₂)` report
//! [`PellError::NestedExtension`](crate::PellError::NestedExtension).

use std::fmt;
use std::sync::Arc;

use super::modp::{self, ModMap};
use super::{Embed, Field, Rational, UniPoly};

/// `a + b√δ`. Invariant: `b = 0` iff `delta` is `None`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadExt<F> {
    a: F,
    b: F,
    delta: Option<Arc<F>>,
}

impl<F: Field> QuadExt<F> {
    fn make(a: F, b: F, delta: Option<Arc<F>>) -> Self {
        if b.is_zero() {
            QuadExt { a, b, delta: None }
        } else {
            QuadExt {
                a,
                b,
                delta: Some(delta.expect("irrational part without δ")),
            }
        }
    }

    pub fn base(a: F) -> Self {
        QuadExt {
            a,
            b: F::zero(),
            delta: None,
        }
    }

    /// `a + b√δ`; `None` if `δ` is a square in `F` (then there is no
    /// extension to build).
    pub fn new(a: F, b: F, delta: &F) -> Option<Self> {
        if delta.sqrt().is_some() {
            return None;
        }
        Some(Self::make(a, b, Some(Arc::new(delta.clone()))))
    }

    /// `√δ` itself.
    pub fn sqrt_of(delta: &F) -> Option<Self> {
        Self::new(F::zero(), F::one(), delta)
    }

    pub fn rational_part(&self) -> &F {
        &self.a
    }

    pub fn irrational_part(&self) -> &F {
        &self.b
    }

    pub fn delta(&self) -> Option<&F> {
        self.delta.as_deref()
    }

    pub fn is_base(&self) -> bool {
        self.delta.is_none()
    }

    pub fn to_base(&self) -> Option<F> {
        self.is_base().then(|| self.a.clone())
    }

    pub fn conj(&self) -> Self {
        Self::make(self.a.clone(), self.b.neg(), self.delta.clone())
    }

    /// `a² − δb²`
    pub fn norm(&self) -> F {
        match &self.delta {
            None => self.a.mul(&self.a),
            Some(d) => self.a.mul(&self.a).sub(&d.mul(&self.b.mul(&self.b))),
        }
    }

    fn joint_delta(&self, rhs: &Self) -> Option<Arc<F>> {
        match (&self.delta, &rhs.delta) {
            (Some(x), Some(y)) => {
                assert!(
                    Arc::ptr_eq(x, y) || x == y,
                    "mixing quadratic extensions sqrt({x}) and sqrt({y})"
                );
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    /// Applies the conjugation to every coefficient.
    pub fn conj_poly(p: &UniPoly<Self>) -> UniPoly<Self> {
        p.map(|c| c.conj())
    }
}

impl<F: Field> Embed<F> for QuadExt<F> {
    fn embed(x: &F) -> Self {
        Self::base(x.clone())
    }
}

impl<F: Field> Field for QuadExt<F> {
    fn zero() -> Self {
        Self::base(F::zero())
    }
    fn one() -> Self {
        Self::base(F::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn is_one(&self) -> bool {
        self.b.is_zero() && self.a.is_one()
    }
    fn add(&self, rhs: &Self) -> Self {
        Self::make(self.a.add(&rhs.a), self.b.add(&rhs.b), self.joint_delta(rhs))
    }
    fn sub(&self, rhs: &Self) -> Self {
        Self::make(self.a.sub(&rhs.a), self.b.sub(&rhs.b), self.joint_delta(rhs))
    }
    fn mul(&self, rhs: &Self) -> Self {
        let delta = self.joint_delta(rhs);
        let Some(d) = &delta else {
            return Self::base(self.a.mul(&rhs.a));
        };
        let a = self.a.mul(&rhs.a).add(&d.mul(&self.b.mul(&rhs.b)));
        let b = self.a.mul(&rhs.b).add(&self.b.mul(&rhs.a));
        Self::make(a, b, delta)
    }
    fn neg(&self) -> Self {
        Self::make(self.a.neg(), self.b.neg(), self.delta.clone())
    }
    fn inv(&self) -> Option<Self> {
        let n_inv = self.norm().inv()?;
        Some(Self::make(
            self.a.mul(&n_inv),
            self.b.neg().mul(&n_inv),
            self.delta.clone(),
        ))
    }
    fn from_rational(q: &Rational) -> Self {
        Self::base(F::from_rational(q))
    }
    fn to_rational(&self) -> Option<Rational> {
        self.to_base()?.to_rational()
    }
    fn sqrt(&self) -> Option<Self> {
        let Some(d) = &self.delta else {
            // Without a δ in sight only base-field roots can be found.
            return self.a.sqrt().map(Self::base);
        };
        let two_inv = F::from_i64(2).inv().expect("char 0");
        // (u + v√δ)² = u² + δv² + 2uv√δ, and b ≠ 0 forces u ≠ 0
        let n = self.norm().sqrt()?;
        for cand in [self.a.add(&n), self.a.sub(&n)] {
            let u2 = cand.mul(&two_inv);
            if let Some(u) = u2.sqrt() {
                if u.is_zero() {
                    continue;
                }
                let v = self.b.mul(&u.add(&u).inv().expect("nonzero"));
                let r = Self::make(u, v, Some(d.clone()));
                return Some(r.canonical());
            }
        }
        None
    }
    fn is_canonical_sign(&self) -> bool {
        if !self.a.is_zero() {
            self.a.is_canonical_sign()
        } else {
            self.b.is_canonical_sign()
        }
    }
    fn is_atomic(&self) -> bool {
        if self.b.is_zero() {
            self.a.is_atomic()
        } else {
            false
        }
    }
    fn roots(p: &UniPoly<Self>) -> Vec<Self> {
        if p.coeffs().iter().all(|c| c.is_base()) {
            let base = p.map(|c| c.a.clone());
            return F::roots(&base).into_iter().map(Self::base).collect();
        }
        if p.degree() == Some(1) {
            let m = p.monic();
            return vec![m.coeff(0).neg()];
        }
        vec![]
    }
    fn extension_depth() -> usize {
        F::extension_depth() + 1
    }
    fn reduce(&self, m: &ModMap) -> Option<u64> {
        let a = self.a.reduce(m)?;
        let Some(d) = &self.delta else {
            return Some(a);
        };
        let r = modp::sqrt(d.reduce(m)?, m.p)?;
        let b = self.b.reduce(m)?;
        Some(modp::add(a, modp::mul(r, b, m.p), m.p))
    }
}

impl<F: Field> fmt::Display for QuadExt<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = &self.delta else {
            return write!(f, "{}", self.a);
        };
        let root = if d.is_atomic() && d.is_canonical_sign() {
            format!("sqrt({d})")
        } else {
            format!("sqrt(({d}))")
        };
        let b_term = if self.b.is_one() {
            root
        } else if self.b.is_atomic() {
            format!("{}*{root}", self.b)
        } else {
            format!("({})*{root}", self.b)
        };
        if self.a.is_zero() {
            f.write_str(&b_term)
        } else if self.b.is_atomic() && !self.b.is_canonical_sign() {
            write!(f, "{}{}", self.a, b_term)
        } else {
            write!(f, "{}+{}", self.a, b_term)
        }
    }
}
