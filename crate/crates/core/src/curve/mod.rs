//! The nonsingular model of `Y² = D(X)`, `deg D = 2d`, with its two points
//! at infinity.
//!
//! Branch convention: `s` is the canonical series root of `D` (leading
//! coefficient the canonical square root). `∞⁺` is the place where `Y`
//! expands as `−s` and `∞⁻` the place where `Y = s`. For monic `D` this is
//! the labelling in which `X^d ± Y` vanishes at `∞^±`. Flipping it would
//! negate every relation coefficient `l` and change no verdict.

mod divisor;

use std::fmt;
use std::sync::{Arc, RwLock};

pub use divisor::{Block, Divisor};

use crate::algebra::series::{default_precision, sqrt_series};
use crate::algebra::{Embed, Field, LaurentSeries, QuadExt, UniPoly};
use crate::cfrac::validate_d;
use crate::error::{PellError, Result};

#[derive(Debug)]
pub struct HyperCurve<F> {
    d: UniPoly<F>,
    half: usize,
    /// `√D`, extended on demand.
    s: RwLock<Arc<LaurentSeries<F>>>,
}

impl<F: Field> Clone for HyperCurve<F> {
    fn clone(&self) -> Self {
        HyperCurve {
            d: self.d.clone(),
            half: self.half,
            s: RwLock::new(self.s.read().expect("poisoned").clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint<F> {
    Finite { x: F, y: F },
    InfPlus,
    InfMinus,
}

/// The points above one `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fiber<F: Field> {
    /// `D(x) = 0`.
    Ramified(CurvePoint<F>),
    /// `(x, y)` and `(x, −y)` with `y` canonical in the base field.
    Split(CurvePoint<F>, CurvePoint<F>),
    /// `(x, ±√D(x))` over the quadratic extension.
    Conjugate(CurvePoint<QuadExt<F>>, CurvePoint<QuadExt<F>>),
}

impl<F: Field> HyperCurve<F> {
    pub fn new(d: UniPoly<F>) -> Result<Self> {
        let half = validate_d(&d, 4)?;
        let top = half as i64;
        let s = sqrt_series(&d, default_precision(top, 2 * top))?;
        Ok(HyperCurve {
            d,
            half,
            s: RwLock::new(Arc::new(s)),
        })
    }

    pub fn d(&self) -> &UniPoly<F> {
        &self.d
    }

    /// `d = deg D / 2`.
    pub fn half_degree(&self) -> usize {
        self.half
    }

    pub fn genus(&self) -> usize {
        self.half - 1
    }

    /// `√D` known at least down to `X^precision`, re-expanded from `D`
    /// when the cached series is too short.
    pub fn series(&self, precision: i64) -> Arc<LaurentSeries<F>> {
        {
            let cached = self.s.read().expect("poisoned");
            if cached.precision() <= precision {
                return cached.clone();
            }
        }
        let mut cached = self.s.write().expect("poisoned");
        if cached.precision() > precision {
            // grow geometrically so repeated requests stay cheap
            let top = self.half as i64;
            let want = precision.min(top - 2 * (top - cached.precision()));
            *cached = Arc::new(sqrt_series(&self.d, want).expect("validated at construction"));
        }
        cached.clone()
    }

    /// The same curve over an extension field. `D` stays squarefree with a
    /// square leading coefficient, so it is not re-validated.
    pub fn base_change<G: Embed<F>>(&self) -> HyperCurve<G> {
        let d: UniPoly<G> = self.d.embed();
        let top = self.half as i64;
        let s = sqrt_series(&d, default_precision(top, 2 * top)).expect("leading coefficient stays a square");
        HyperCurve {
            d,
            half: self.half,
            s: RwLock::new(Arc::new(s)),
        }
    }

    pub fn contains(&self, p: &CurvePoint<F>) -> bool {
        match p {
            CurvePoint::Finite { x, y } => y.mul(y) == self.d.eval(x),
            _ => true,
        }
    }

    pub fn is_weierstrass(&self, p: &CurvePoint<F>) -> bool {
        matches!(p, CurvePoint::Finite { y, .. } if y.is_zero())
    }

    pub fn points_above(&self, x: &F) -> Result<Fiber<F>> {
        let dx = self.d.eval(x);
        if dx.is_zero() {
            return Ok(Fiber::Ramified(CurvePoint::Finite {
                x: x.clone(),
                y: F::zero(),
            }));
        }
        if let Some(y) = dx.sqrt() {
            let plus = CurvePoint::Finite {
                x: x.clone(),
                y: y.clone(),
            };
            return Ok(Fiber::Split(plus.clone(), involution(&plus)));
        }
        if F::extension_depth() > 0 {
            return Err(PellError::NestedExtension);
        }
        let y = QuadExt::sqrt_of(&dx).expect("D(x) is not a square");
        let plus = CurvePoint::Finite {
            x: QuadExt::base(x.clone()),
            y,
        };
        Ok(Fiber::Conjugate(plus.clone(), involution(&plus)))
    }

    /// `1·P` as a divisor; `P` must have coordinates in the base field.
    pub fn point_divisor(&self, p: &CurvePoint<F>) -> Divisor<F> {
        match p {
            CurvePoint::InfPlus => Divisor::at_infinity(1, 0),
            CurvePoint::InfMinus => Divisor::at_infinity(0, 1),
            CurvePoint::Finite { x, y } => {
                debug_assert!(self.contains(p), "point not on the curve");
                let w = UniPoly::linear_root(x);
                let block = if y.is_zero() {
                    Block::Ramified { w, c: 1 }
                } else {
                    Block::Split {
                        w,
                        v: UniPoly::constant(y.clone()),
                        plus: 1,
                        minus: 0,
                    }
                };
                Divisor::from_blocks(0, 0, vec![block])
            }
        }
    }

    /// `div(X − x)`.
    pub fn divisor_of_x_minus(&self, x: &F) -> Divisor<F> {
        Divisor::of_polynomial(&UniPoly::linear_root(x), &self.d)
    }

    /// Orders of `R + YS` at `∞⁺` and `∞⁻` for coprime `R, S`, not both zero.
    ///
    /// `ord_{∞±} = −deg(R ∓ sS)` and the two add up to `−deg(R² − DS²)`.
    /// Leading terms can cancel on at most one side, so the norm degree gives
    /// that side without a series expansion.
    fn orders_at_infinity(&self, r: &UniPoly<F>, s_poly: &UniPoly<F>, norm_deg: i64) -> (i64, i64) {
        if s_poly.is_zero() {
            let m = r.deg_i64();
            return (-m, -m);
        }
        let dr = r.deg_i64();
        let ds = s_poly.deg_i64() + self.half as i64;
        let m = dr.max(ds);
        if dr != ds {
            return (-m, -m);
        }
        let lead = self.series(0).coeff(self.half as i64).expect("leading term").mul(&s_poly.lc());
        if r.lc() == lead {
            // R − sS cancels at the top
            (m - norm_deg, -m)
        } else if r.lc() == lead.neg() {
            (-m, m - norm_deg)
        } else {
            (-m, -m)
        }
    }

    /// Orders at `∞⁺` and `∞⁻` read off the series `R ∓ sS`, looking at
    /// most `budget` exponents below the top. An independent check of
    /// [`Self::divisor_of_function`]; `None` means "beyond the budget".
    pub fn orders_at_infinity_by_series(
        &self,
        r: &UniPoly<F>,
        s_poly: &UniPoly<F>,
        budget: i64,
    ) -> (Option<i64>, Option<i64>) {
        let top = r.deg_i64().max(s_poly.deg_i64() + self.half as i64);
        let low = top - budget;
        let ser = self.series(low - s_poly.deg_i64().max(0));
        let (mut at_plus, mut at_minus) = (None, None);
        for k in (low..=top).rev() {
            let rk = if k >= 0 { r.coeff(k as usize) } else { F::zero() };
            let sk = series_times_poly_coeff(&ser, s_poly, k);
            if at_plus.is_none() && !rk.sub(&sk).is_zero() {
                at_plus = Some(-k);
            }
            if at_minus.is_none() && !rk.add(&sk).is_zero() {
                at_minus = Some(-k);
            }
        }
        (at_plus, at_minus)
    }

    /// Divisor of `(R + YS) / ∏ hⱼ^{kⱼ}`.
    ///
    /// With `g = gcd(R, S)` the function is `g·(R' + YS')`. For coprime
    /// `R', S'` and `N = R'² − DS'²`:
    ///
    /// * at a root `x` of `N` with `D(x) ≠ 0` only the branch
    ///   `y = −R'(x)/S'(x)` vanishes, to the multiplicity of `x` in `N`;
    /// * at a Weierstrass point the order is 1 if `R'(x) = 0` and 0
    ///   otherwise, by the parity rule with uniformiser `Y`;
    /// * the orders at infinity come from `deg(R' ∓ sS')`.
    pub fn divisor_of_function(
        &self,
        r: &UniPoly<F>,
        s: &UniPoly<F>,
        denominators: &[(UniPoly<F>, u32)],
    ) -> Result<Divisor<F>> {
        if r.is_zero() && s.is_zero() {
            return Err(PellError::ZeroFunction);
        }
        let g = r.gcd(s);
        let r1 = r.exact_div(&g).expect("gcd divides");
        let s1 = s.exact_div(&g).expect("gcd divides");
        let mut div = Divisor::of_polynomial(&g, &self.d);

        let norm = r1.square().sub_ref(&self.d.mul_ref(&s1.square()));
        let mut blocks = Vec::new();
        for (n, i) in norm.squarefree_decomposition() {
            let w = n.exact_div(&n.gcd(&self.d)).expect("gcd divides");
            if w.is_constant() {
                continue;
            }
            let s_inv = s1.inv_mod(&w).expect("S' is a unit at non-Weierstrass zeros of N");
            let v = r1.neg_ref().mul_ref(&s_inv).rem(&w).expect("nonzero");
            blocks.push(Block::Split {
                w: w.monic(),
                v,
                plus: i as i64,
                minus: 0,
            });
        }
        let weier = r1.gcd(&self.d);
        if !weier.is_constant() {
            blocks.push(Block::Ramified { w: weier, c: 1 });
        }
        let (ip, im) = self.orders_at_infinity(&r1, &s1, norm.deg_i64());
        div = div.add(&Divisor::from_blocks(ip, im, blocks));

        for (h, k) in denominators {
            if h.is_zero() {
                return Err(PellError::DivisionByZeroPoly);
            }
            div = div.sub(&Divisor::of_polynomial(h, &self.d).scale(*k as i64));
        }
        if div.degree() != 0 {
            return Err(PellError::InternalVerificationFailure(format!(
                "divisor of a function has degree {}",
                div.degree()
            )));
        }
        Ok(div)
    }
}

/// Coefficient of `X^k` in `s·p`; `s` must be known down to `k − deg p`.
pub(crate) fn series_times_poly_coeff<F: Field>(s: &LaurentSeries<F>, p: &UniPoly<F>, k: i64) -> F {
    let mut acc = F::zero();
    for (j, pj) in p.coeffs().iter().enumerate() {
        if pj.is_zero() {
            continue;
        }
        let c = s.coeff(k - j as i64).expect("series precision too low");
        if !c.is_zero() {
            acc = acc.add(&pj.mul(&c));
        }
    }
    acc
}

pub fn involution<F: Field>(p: &CurvePoint<F>) -> CurvePoint<F> {
    match p {
        CurvePoint::InfPlus => CurvePoint::InfMinus,
        CurvePoint::InfMinus => CurvePoint::InfPlus,
        CurvePoint::Finite { x, y } => CurvePoint::Finite {
            x: x.clone(),
            y: y.neg(),
        },
    }
}

impl<F: Field> fmt::Display for CurvePoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::InfPlus => f.write_str("inf+"),
            CurvePoint::InfMinus => f.write_str("inf-"),
            CurvePoint::Finite { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl<F: Field> fmt::Display for HyperCurve<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y^2 = {}", self.d)
    }
}

#[cfg(test)]
mod tests;
