//! Rational functions in the parameter `t` over the rationals.

use std::fmt;

use num_traits::Signed;

use super::modp::{self, ModMap};
use super::rational::gcd_q;
use super::{Embed, Field, Rational, UniPoly};

/// `num(t) / den(t)` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: UniPoly<Rational>,
    den: UniPoly<Rational>,
}

impl RatFunc {
    pub fn new(num: UniPoly<Rational>, den: UniPoly<Rational>) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::reduced(num, den))
    }

    fn reduced(num: UniPoly<Rational>, den: UniPoly<Rational>) -> Self {
        if num.is_zero() {
            return RatFunc {
                num,
                den: UniPoly::one(),
            };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
            }
        };
        Self::from_coprime(num, den)
    }

    /// `num / den` when the two are already coprime.
    fn from_coprime(num: UniPoly<Rational>, den: UniPoly<Rational>) -> Self {
        let lc_inv = den.lc().inv().expect("nonzero denominator");
        if lc_inv.is_one() {
            RatFunc { num, den }
        } else {
            RatFunc {
                num: num.scale(&lc_inv),
                den: den.scale(&lc_inv),
            }
        }
    }

    pub fn from_poly(num: UniPoly<Rational>) -> Self {
        RatFunc {
            num,
            den: UniPoly::one(),
        }
    }

    /// The parameter `t` itself.
    pub fn t() -> Self {
        Self::from_poly(UniPoly::x())
    }

    pub fn numer(&self) -> &UniPoly<Rational> {
        &self.num
    }

    pub fn denom(&self) -> &UniPoly<Rational> {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    /// Value at `t = t0`, or `None` if the denominator vanishes there.
    pub fn eval_at(&self, t0: &Rational) -> Option<Rational> {
        let d = self.den.eval(t0);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(t0) / d)
    }
}

impl Embed<Rational> for RatFunc {
    fn embed(x: &Rational) -> Self {
        Self::from_poly(UniPoly::constant(x.clone()))
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        Self::from_poly(UniPoly::zero())
    }
    fn one() -> Self {
        Self::from_poly(UniPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }
    fn add(&self, rhs: &Self) -> Self {
        // Henrici: with g = gcd(b, d), gcd(a·d/g + c·b/g, b·d/g) divides g.
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(&self.num + &rhs.num);
        }
        let g = gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &self.num * &rhs.den + &rhs.num * &self.den;
            return Self::from_coprime(num, &self.den * &rhs.den);
        }
        let b = self.den.exact_div(&g).unwrap();
        let d = rhs.den.exact_div(&g).unwrap();
        let num = &self.num * &d + &rhs.num * &b;
        if num.is_zero() {
            return Self::zero();
        }
        let h = gcd(&num, &g);
        let den = &b * &rhs.den;
        if h.is_one() {
            Self::from_coprime(num, den)
        } else {
            Self::from_coprime(num.exact_div(&h).unwrap(), den.exact_div(&h).unwrap())
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Self::from_poly(&self.num * &rhs.num);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.exact_div(&g1).unwrap();
        let d = rhs.den.exact_div(&g1).unwrap();
        let c = rhs.num.exact_div(&g2).unwrap();
        let b = self.den.exact_div(&g2).unwrap();
        Self::from_coprime(&a * &c, &b * &d)
    }
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        // numerators over a common denominator, one reduction per output
        let (la, na) = common_denominator(a);
        let (lb, nb) = common_denominator(b);
        let den = &la * &lb;
        let mut out = vec![UniPoly::zero(); a.len() + b.len() - 1];
        for (i, x) in na.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in nb.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = &out[i + j] + &(x * y);
                }
            }
        }
        out.into_iter().map(|n| Self::reduced(n, den.clone())).collect()
    }
    fn neg(&self) -> Self {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::from_coprime(self.den.clone(), self.num.clone()))
    }
    fn from_rational(q: &Rational) -> Self {
        Self::embed(q)
    }
    fn to_rational(&self) -> Option<Rational> {
        self.is_constant().then(|| self.num.coeff(0))
    }
    fn sqrt(&self) -> Option<Self> {
        let n = self.num.perfect_sqrt()?;
        let d = self.den.perfect_sqrt()?;
        Some(Self::reduced(n, d))
    }
    fn is_canonical_sign(&self) -> bool {
        !self.num.lc().is_negative()
    }
    fn is_atomic(&self) -> bool {
        self.den.is_one() && self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1
    }
    fn roots(p: &UniPoly<Self>) -> Vec<Self> {
        // Only roots that are constants, plus the root of a linear factor.
        // A full root finder would need factorisation over Q[t].
        let Some(deg) = p.degree() else {
            return vec![];
        };
        if deg == 0 {
            return vec![];
        }
        let monic = p.monic();
        if monic.coeffs().iter().all(|c| c.is_constant()) {
            let pq = monic.map(|c| c.to_rational().unwrap());
            return pq.roots_in_field().iter().map(Self::embed).collect();
        }
        if deg == 1 {
            return vec![monic.coeff(0).neg()];
        }
        vec![]
    }
    fn quick_squarefree(p: &UniPoly<Self>) -> bool {
        // A specialisation of full degree that is squarefree shows the
        // discriminant is a nonzero rational function.
        let Some(deg) = p.degree() else {
            return false;
        };
        for t0 in [3i64, -5, 7, 11, -13] {
            let t0 = Rational::from_integer(t0.into());
            let Some(coeffs) = p.coeffs().iter().map(|c| c.eval_at(&t0)).collect::<Option<Vec<_>>>() else {
                continue;
            };
            let sp = UniPoly::from_coeffs(coeffs);
            if sp.degree() == Some(deg) && sp.is_squarefree().unwrap_or(false) {
                return true;
            }
        }
        false
    }
    fn reduce(&self, m: &ModMap) -> Option<u64> {
        let eval = |poly: &UniPoly<Rational>| -> Option<u64> {
            poly.coeffs().iter().rev().try_fold(0u64, |acc, c| {
                Some(modp::add(modp::mul(acc, m.tau, m.p), c.reduce(m)?, m.p))
            })
        };
        let n = eval(&self.num)?;
        let d = eval(&self.den)?;
        Some(modp::mul(n, modp::inv(d, m.p)?, m.p))
    }
}

/// `(L, [L·c])` with `L` the monic lcm of the denominators.
fn common_denominator(cs: &[RatFunc]) -> (UniPoly<Rational>, Vec<UniPoly<Rational>>) {
    let mut l = UniPoly::one();
    for c in cs {
        if !c.den.is_one() {
            let g = gcd(&l, &c.den);
            l = &l * &c.den.exact_div(&g).unwrap();
        }
    }
    let nums = cs
        .iter()
        .map(|c| if c.den.is_one() { &c.num * &l } else { &c.num * &l.exact_div(&c.den).unwrap() })
        .collect();
    (l, nums)
}

/// Monic gcd in ℚ[t], skipping the exact computation when a reduction
/// mod p already shows the inputs coprime.
fn gcd(a: &UniPoly<Rational>, b: &UniPoly<Rational>) -> UniPoly<Rational> {
    if a.is_constant() || b.is_constant() {
        return if a.is_zero() { b.monic() } else if b.is_zero() { a.monic() } else { UniPoly::one() };
    }
    if coprime_mod_p(a, b) {
        return UniPoly::one();
    }
    gcd_q(a, b)
}

/// Sufficient test for coprimality: reduction mod p keeps both degrees and
/// the gcd there is constant.
fn coprime_mod_p(a: &UniPoly<Rational>, b: &UniPoly<Rational>) -> bool {
    let m = ModMap::default();
    let red = |q: &UniPoly<Rational>| -> Option<Vec<u64>> {
        let v = q.coeffs().iter().map(|c| c.reduce(&m)).collect::<Option<Vec<_>>>()?;
        (v.last().is_some_and(|&c| c != 0)).then_some(v)
    };
    match (red(a), red(b)) {
        (Some(x), Some(y)) => modp::gcd_degree(&x, &y, m.p) == 0,
        _ => false,
    }
}

impl UniPoly<Rational> {
    /// Rational roots (rational root test).
    pub fn roots_in_field(&self) -> Vec<Rational> {
        super::rational::rational_roots(self)
    }
}

/// The polynomial of degree `< points.len()` through `points` (Newton
/// divided differences). The abscissae must be distinct.
pub fn interpolate(points: &[(Rational, Rational)]) -> UniPoly<Rational> {
    let n = points.len();
    let mut c: Vec<Rational> = points.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            c[i] = (&c[i] - &c[i - 1]) / (&points[i].0 - &points[i - j].0);
        }
    }
    let mut acc = UniPoly::zero();
    for i in (0..n).rev() {
        acc = acc.mul_ref(&UniPoly::linear_root(&points[i].0)).add_ref(&UniPoly::constant(c[i].clone()));
    }
    acc
}

/// `disc_X(p)` for `p ∈ ℚ(t)[X]`, by specialising `t` and interpolating.
///
/// After clearing a common denominator `L`, the coefficients lie in `ℚ[t]`
/// with degree at most `k`, and the discriminant is a form of degree
/// `2n − 2` in them, so `(2n − 2)k + 1` values at points where the leading
/// coefficient survives determine it. Much faster than a remainder sequence
/// over ℚ(t).
pub fn discriminant_in_x(p: &UniPoly<RatFunc>) -> RatFunc {
    let Some(n) = p.degree().filter(|&n| n >= 1) else {
        return RatFunc::zero();
    };
    let l = p
        .coeffs()
        .iter()
        .fold(UniPoly::<Rational>::one(), |acc, c| {
            let g = acc.gcd(c.denom());
            acc.mul_ref(&c.denom().exact_div(&g).expect("gcd divides"))
        });
    let cleared: Vec<UniPoly<Rational>> = p
        .coeffs()
        .iter()
        .map(|c| c.numer().mul_ref(&l.exact_div(c.denom()).expect("lcm")))
        .collect();
    let k = cleared.iter().map(|c| c.degree().unwrap_or(0)).max().unwrap_or(0);
    let needed = (2 * n - 2) * k + 1;
    let lc = cleared.last().expect("nonzero").clone();
    let mut points = Vec::with_capacity(needed);
    let mut t0: i64 = 0;
    while points.len() < needed {
        let x = Rational::from_integer(t0.into());
        t0 = if t0 > 0 { -t0 } else { 1 - t0 };
        if lc.eval(&x).is_zero() {
            continue;
        }
        let spec = UniPoly::from_coeffs(cleared.iter().map(|c| c.eval(&x)).collect());
        points.push((x, spec.discriminant()));
    }
    let disc = RatFunc::from_poly(interpolate(&points));
    let scale = RatFunc::from_poly(l).pow((2 * n - 2) as u32);
    disc.div(&scale).expect("nonzero denominator")
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            f.write_str(&self.num.fmt_var("t"))
        } else {
            write!(f, "({})/({})", self.num.fmt_var("t"), self.den.fmt_var("t"))
        }
    }
}
