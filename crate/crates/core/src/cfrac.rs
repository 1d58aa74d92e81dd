//! Continued fraction of `√D` in `K((1/X))`.
//!
//! Complete quotients are carried exactly as `(Pₙ + √D)/Qₙ` with polynomial
//! `Pₙ, Qₙ`:
//!
//! ```text
//! P₀ = 0, Q₀ = 1, aₙ = (Pₙ + a₀) div Qₙ,
//! Pₙ₊₁ = aₙQₙ − Pₙ,  Qₙ₊₁ = (D − Pₙ₊₁²)/Qₙ
//! ```
//!
//! with `a₀ = ⌊√D⌋`. The division defining `Qₙ₊₁` is exact and the only
//! series computation is `a₀`. Convergents satisfy
//! `pₙ² − D qₙ² = (−1)ⁿ⁺¹ Qₙ₊₁`.
//!
//! # Non-identical solvability
//!
//! [`prove_not_identically_solvable`] certifies that `A² − D_t B² = F` has no
//! solution with `B ≠ 0` over the algebraic closure of ℚ(t), for
//! `D_t ∈ ℚ[t][X]` of odd degree `k` in `t` and `F ∈ ℚ[X]` with
//! `deg F ≤ d − 1`. The argument:
//!
//! 1. A solution `(A, B)` makes `A/B` a convergent `pₙ/qₙ`, so
//!    `A = Λpₙ`, `B = Λqₙ` and `pₙ² − D qₙ² = F/Λ²`. The right side lies in
//!    ℚ(t)[X] and its roots are roots of `F`, so it equals `c(t)·G(X)` with
//!    `G ∈ ℚ[X]` monic.
//! 2. Clearing denominators gives `A'² − D B'² = h(t)·G(X)` with
//!    `A', B' ∈ ℚ[t][X]`, `B' ≠ 0`, the pair of content 1 and
//!    `h ∈ ℚ[t] \ {0}`.
//! 3. If `h` is constant, compare degrees in `t`: `deg_t A'²` is even,
//!    `deg_t D B'² = k + 2 deg_t B'` is odd, so the left side has
//!    `t`-degree at least `k ≥ 1`. Contradiction.
//! 4. Otherwise let `t₀` be a root of `h`. Then `A'(t₀)² = D_{t₀} B'(t₀)²`.
//!    If `D_{t₀}` is not a square, `B'(t₀) = A'(t₀) = 0`, so the minimal
//!    polynomial of `t₀` divides the content of `(A', B')`. Contradiction.
//!
//! Step 4 needs `D_{t₀}` to be a non-square for every algebraic `t₀`. With
//! a constant square leading coefficient, `⌊√D_t⌋ = a₀(t, X)` has
//! coefficients in ℚ[t] and specialises to `⌊√D_{t₀}⌋`, so `D_{t₀}` is a
//! square exactly when every coefficient of `D_t − a₀²` vanishes at `t₀`.
//! The certificate is that these coefficients have constant gcd.

use crate::algebra::series::sqrt_series;
use crate::algebra::{Field, RatFunc, Rational, UniPoly};
use crate::error::{PellError, Result};

/// Default step budget over ℚ.
pub const DEFAULT_MAX_STEPS_Q: usize = 64;
/// Default step budget over ℚ(t), where coefficients grow quickly.
pub const DEFAULT_MAX_STEPS_QT: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFracStep<F> {
    /// Partial quotient `aₙ`.
    pub a: UniPoly<F>,
    /// `Pₙ`
    pub p_state: UniPoly<F>,
    /// `Qₙ`
    pub q_state: UniPoly<F>,
    /// Convergent `(pₙ, qₙ)`.
    pub p: UniPoly<F>,
    pub q: UniPoly<F>,
    /// `pₙ² − D qₙ² = (−1)ⁿ⁺¹ Qₙ₊₁`
    pub norm: UniPoly<F>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFracExpansion<F> {
    pub d: UniPoly<F>,
    pub steps: Vec<CFracStep<F>>,
}

/// Checks the shape of `D` and returns `d = deg D / 2`.
///
/// `min_degree` is 2 for the bare expansion and 4 wherever the curve
/// `Y² = D` must have positive genus.
pub fn validate_d<F: Field>(d: &UniPoly<F>, min_degree: usize) -> Result<usize> {
    let deg = d.degree().ok_or(PellError::ZeroPolynomial)?;
    if deg % 2 == 1 {
        return Err(PellError::OddDegree(deg));
    }
    if deg < min_degree {
        return Err(PellError::DegreeTooSmall {
            found: deg,
            min: min_degree,
        });
    }
    if d.lc().sqrt().is_none() {
        return Err(PellError::LeadingCoefficientNotASquare);
    }
    if !d.is_squarefree()? {
        return Err(PellError::NotSquarefree);
    }
    Ok(deg / 2)
}

/// The recursion on `(Pₙ, Qₙ / lc(Qₙ))`. `Pₙ₊₁` and the monic part of
/// `Qₙ₊₁` do not depend on `lc(Qₙ)`, whose height grows much faster than
/// theirs over ℚ; the scalars are only multiplied out on request.
pub struct MonicCFrac<F> {
    d: UniPoly<F>,
    a0: UniPoly<F>,
    p_state: UniPoly<F>,
    q_monic: UniPoly<F>,
    /// `lc((D − Pₖ₊₁²) / monic(Qₖ))`; then `lc(Qₖ₊₁) = w_lcs[k] / lc(Qₖ)`.
    w_lcs: Vec<F>,
}

/// `aₙ = a_monic / lc(Qₙ)` and `pₙ² − D qₙ² = (−1)ⁿ⁺¹ lc(Qₙ₊₁) · norm_monic`.
#[derive(Clone, Debug)]
pub struct MonicStep<F> {
    pub a_monic: UniPoly<F>,
    pub norm_monic: UniPoly<F>,
}

impl<F: Field> MonicCFrac<F> {
    pub fn new(d: &UniPoly<F>) -> Result<Self> {
        validate_d(d, 2)?;
        let a0 = sqrt_series(d, 0)?.polynomial_part();
        Ok(MonicCFrac {
            d: d.clone(),
            a0,
            p_state: UniPoly::zero(),
            q_monic: UniPoly::one(),
            w_lcs: Vec::new(),
        })
    }

    /// Steps taken so far.
    pub fn len(&self) -> usize {
        self.w_lcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.w_lcs.is_empty()
    }

    pub fn step(&mut self) -> MonicStep<F> {
        let (a_monic, _) = self
            .p_state
            .add_ref(&self.a0)
            .div_rem(&self.q_monic)
            .expect("Qₙ is never zero for non-square D");
        let next_p_state = a_monic.mul_ref(&self.q_monic).sub_ref(&self.p_state);
        let w = self
            .d
            .sub_ref(&next_p_state.square())
            .exact_div(&self.q_monic)
            .expect("Qₙ divides D − Pₙ₊₁²");
        self.w_lcs.push(w.lc());
        self.p_state = next_p_state;
        self.q_monic = w.monic();
        MonicStep {
            a_monic,
            norm_monic: self.q_monic.clone(),
        }
    }

    /// `lc(Q₀), …, lc(Qₙ)` for the `n` steps taken.
    pub fn q_leading_coefficients(&self) -> Vec<F> {
        let mut out = vec![F::one()];
        for w in &self.w_lcs {
            let prev = out.last().expect("nonempty");
            out.push(w.div(prev).expect("nonzero leading coefficient"));
        }
        out
    }

    /// `(−1)ⁿ⁺¹ lc(Qₙ₊₁)` for the last step taken.
    pub fn last_norm_scale(&self) -> F {
        let lcs = self.q_leading_coefficients();
        let c = lcs.last().expect("nonempty").clone();
        if self.w_lcs.len() % 2 == 1 {
            c.neg()
        } else {
            c
        }
    }

    /// The partial quotients `a₀, …, aₙ` of the steps in `steps`, which must
    /// be all steps taken so far.
    pub fn partial_quotients(&self, steps: &[MonicStep<F>]) -> Vec<UniPoly<F>> {
        let lcs = self.q_leading_coefficients();
        steps
            .iter()
            .zip(&lcs)
            .map(|(s, lc)| s.a_monic.scale(&lc.inv().expect("nonzero leading coefficient")))
            .collect()
    }
}

/// Lazy expansion; yields `CFracStep`s for `n = 0, 1, 2, …`.
pub struct CFracIter<F> {
    inner: MonicCFrac<F>,
    q_lc: F,
    p_prev: (UniPoly<F>, UniPoly<F>),
    p_prev2: (UniPoly<F>, UniPoly<F>),
}

impl<F: Field> CFracIter<F> {
    pub fn new(d: &UniPoly<F>) -> Result<Self> {
        Ok(CFracIter {
            inner: MonicCFrac::new(d)?,
            q_lc: F::one(),
            p_prev: (UniPoly::one(), UniPoly::zero()),
            p_prev2: (UniPoly::zero(), UniPoly::one()),
        })
    }

    /// `⌊√D⌋`
    pub fn a0(&self) -> &UniPoly<F> {
        &self.inner.a0
    }
}

impl<F: Field> Iterator for CFracIter<F> {
    type Item = CFracStep<F>;

    fn next(&mut self) -> Option<CFracStep<F>> {
        let p_state = self.inner.p_state.clone();
        let q_state = self.inner.q_monic.scale(&self.q_lc);
        let n = self.inner.len();
        let step = self.inner.step();
        let q_lc_inv = self.q_lc.inv().expect("nonzero leading coefficient");
        let a = step.a_monic.scale(&q_lc_inv);
        self.q_lc = self.inner.w_lcs[n].mul(&q_lc_inv);
        let norm_scale = if n.is_multiple_of(2) { self.q_lc.neg() } else { self.q_lc.clone() };
        let p = a.mul_ref(&self.p_prev.0).add_ref(&self.p_prev2.0);
        let q = a.mul_ref(&self.p_prev.1).add_ref(&self.p_prev2.1);
        self.p_prev2 = std::mem::replace(&mut self.p_prev, (p.clone(), q.clone()));
        Some(CFracStep {
            a,
            p_state,
            q_state,
            p,
            q,
            norm: step.norm_monic.scale(&norm_scale),
        })
    }
}

/// `(pₙ, qₙ)` from the partial quotients `a₀, …, aₙ`.
pub fn convergent<F: Field>(partial_quotients: &[UniPoly<F>]) -> (UniPoly<F>, UniPoly<F>) {
    let mut prev = (UniPoly::one(), UniPoly::zero());
    let mut prev2 = (UniPoly::zero(), UniPoly::one());
    for a in partial_quotients {
        let next = (a.mul_ref(&prev.0).add_ref(&prev2.0), a.mul_ref(&prev.1).add_ref(&prev2.1));
        prev2 = std::mem::replace(&mut prev, next);
    }
    prev
}

/// The first `max_steps` steps of the expansion of `√D`.
pub fn expand<F: Field>(d: &UniPoly<F>, max_steps: usize) -> Result<CFracExpansion<F>> {
    let it = CFracIter::new(d)?;
    Ok(CFracExpansion {
        d: d.clone(),
        steps: it.take(max_steps).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PellReport<F> {
    /// `A² − D B² = 1`, found from convergent number `step`.
    Pellian {
        a: UniPoly<F>,
        b: UniPoly<F>,
        step: usize,
    },
    NotPellianWithin(usize),
}

fn canonical_pair<F: Field>(a: UniPoly<F>, b: UniPoly<F>) -> (UniPoly<F>, UniPoly<F>) {
    if a.lc().is_canonical_sign() {
        (a, b)
    } else {
        (a.neg_ref(), b.neg_ref())
    }
}

/// Searches the first `max_steps` convergents for a unit. A constant norm
/// `c ≠ 1` is turned into norm 1 by squaring: `(p + q√D)²/c`.
pub fn solve_pell<F: Field>(d: &UniPoly<F>, max_steps: usize) -> Result<PellReport<F>> {
    let mut it = MonicCFrac::new(d)?;
    let mut steps = Vec::new();
    for n in 0..max_steps {
        let step = it.step();
        let hit = step.norm_monic.is_constant();
        steps.push(step);
        if !hit {
            continue;
        }
        let c = it.last_norm_scale();
        let (p, q) = convergent(&it.partial_quotients(&steps));
        let (a, b) = if c.is_one() {
            (p, q)
        } else {
            let c_inv = c.inv().expect("norm of a convergent is nonzero");
            let a = p.square().add_ref(&d.mul_ref(&q.square()));
            let b = p.mul_ref(&q).scale(&F::from_i64(2));
            (a.scale(&c_inv), b.scale(&c_inv))
        };
        let (a, b) = canonical_pair(a, b);
        return Ok(PellReport::Pellian { a, b, step: n });
    }
    Ok(PellReport::NotPellianWithin(max_steps))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlmostPellReport<F> {
    /// `A² − D B² = F`.
    Exact {
        a: UniPoly<F>,
        b: UniPoly<F>,
        step: usize,
    },
    /// `A² − D B² = c·F` with `c` not a square in the field.
    UpToConstant {
        a: UniPoly<F>,
        b: UniPoly<F>,
        c: F,
        step: usize,
    },
    NotWithin(usize),
}

/// Convergent criterion for `A² − D B² = F`, `deg F ≤ d − 1`.
///
/// Every solution is `Λ·(pₙ, qₙ)` for a convergent and a polynomial `Λ`, so
/// the search accepts convergents whose norm `Nₙ` divides `F` with
/// `F/Nₙ = c·Λ²`. The witness `√c·(Λpₙ, Λqₙ)` is exact when `√c` exists in
/// the field.
pub fn solve_almost_pell<F: Field>(
    d: &UniPoly<F>,
    f: &UniPoly<F>,
    max_steps: usize,
) -> Result<AlmostPellReport<F>> {
    let half = validate_d(d, 4)?;
    let deg_f = f.degree().ok_or(PellError::ZeroPolynomial)?;
    if deg_f > half - 1 {
        return Err(PellError::DegreeTooLarge {
            deg_f,
            bound: half - 1,
        });
    }
    let mut it = MonicCFrac::new(d)?;
    let mut steps = Vec::new();
    for n in 0..max_steps {
        let step = it.step();
        let g_monic = f.exact_div(&step.norm_monic).map(|g| g.monic());
        steps.push(step);
        let Some(g_monic) = g_monic else {
            continue;
        };
        let Some(lambda) = g_monic.perfect_sqrt() else {
            continue;
        };
        // F / Nₙ = lc(F) / norm_scale · Λ²
        let c = f.lc().div(&it.last_norm_scale()).expect("nonzero norm");
        let (p, q) = convergent(&it.partial_quotients(&steps));
        let a = p.mul_ref(&lambda);
        let b = q.mul_ref(&lambda);
        // a² − D b² = Nₙ Λ² = F / c
        return Ok(match c.sqrt() {
            Some(r) => {
                let (a, b) = canonical_pair(a.scale(&r), b.scale(&r));
                AlmostPellReport::Exact { a, b, step: n }
            }
            None => {
                let (a, b) = canonical_pair(a, b);
                AlmostPellReport::UpToConstant {
                    a,
                    b,
                    c: c.inv().expect("nonzero"),
                    step: n,
                }
            }
        });
    }
    Ok(AlmostPellReport::NotWithin(max_steps))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonSolvability {
    /// No solution with `B ≠ 0` over the algebraic closure of ℚ(t).
    Proven {
        t_degree: usize,
    },
    Inconclusive(String),
}

/// See the module documentation for the argument.
pub fn prove_not_identically_solvable(
    d_t: &UniPoly<RatFunc>,
    f: &UniPoly<Rational>,
) -> NonSolvability {
    let fail = |s: &str| NonSolvability::Inconclusive(s.to_string());
    if !d_t.coeffs().iter().all(|c| c.is_polynomial()) {
        return fail("D_t is not polynomial in t");
    }
    let Some(deg) = d_t.degree() else {
        return fail("D_t is zero");
    };
    if deg % 2 == 1 || deg < 4 {
        return fail("deg_X D_t must be even and at least 4");
    }
    let half = deg / 2;
    let t_degree = d_t
        .coeffs()
        .iter()
        .filter_map(|c| c.numer().degree())
        .max()
        .unwrap_or(0);
    if t_degree % 2 == 0 {
        return fail("deg_t D_t is even");
    }
    match d_t.lc().to_rational() {
        Some(lc) if Field::sqrt(&lc).is_some() => {}
        _ => return fail("leading X-coefficient is not a constant square"),
    }
    if !d_t.is_squarefree().unwrap_or(false) {
        return fail("D_t is not squarefree");
    }
    match f.degree() {
        None => return fail("F is zero"),
        Some(df) if df > half - 1 => return fail("deg F exceeds d - 1"),
        _ => {}
    }
    let Ok(s) = sqrt_series(d_t, 0) else {
        return fail("cannot expand sqrt(D_t)");
    };
    let rest = d_t.sub_ref(&s.polynomial_part().square());
    let g = rest
        .coeffs()
        .iter()
        .fold(UniPoly::<Rational>::zero(), |acc, c| acc.gcd(c.numer()));
    if g.is_zero() {
        return fail("D_t is a square");
    }
    if !g.is_constant() {
        return fail("D_t0 is a square for some algebraic t0");
    }
    NonSolvability::Proven { t_degree }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = UniPoly<Rational>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn pt(coeffs: Vec<RatFunc>) -> UniPoly<RatFunc> {
        UniPoly::from_coeffs(coeffs)
    }

    fn tpoly(cs: &[i64]) -> RatFunc {
        RatFunc::from_poly(P::from_i64s(cs))
    }

    #[test]
    fn x_squared_minus_one() {
        let d = P::from_i64s(&[-1, 0, 1]);
        let e = expand(&d, 3).unwrap();
        assert_eq!(e.steps[0].a, P::x());
        assert!(e.steps.iter().skip(1).all(|s| s.q_state.is_constant()));
        assert_eq!(
            solve_pell(&d, 5).unwrap(),
            PellReport::Pellian {
                a: P::x(),
                b: P::one(),
                step: 0
            }
        );
    }

    #[test]
    fn x6_plus_x_partial_quotients() {
        let d = P::from_i64s(&[0, 1, 0, 0, 0, 0, 1]);
        let e = expand(&d, 3).unwrap();
        assert_eq!(e.steps[0].a, P::monomial(q(1, 1), 3));
        assert_eq!(e.steps[1].q_state, P::x());
        assert_eq!(e.steps[1].a, P::monomial(q(2, 1), 2));
        assert_eq!(e.steps[2].q_state, P::one());
        let PellReport::Pellian { a, b, step } = solve_pell(&d, 10).unwrap() else {
            panic!("X^6+X is Pellian");
        };
        assert_eq!(step, 1);
        assert_eq!(a, P::from_i64s(&[1, 0, 0, 0, 0, 2]));
        assert_eq!(b, P::from_i64s(&[0, 0, 2]));
    }

    #[test]
    fn almost_pell_degree_eight() {
        // X(X^7 - X^3 - 1), F = 4X + 1
        let d = P::from_i64s(&[0, -1, 0, 0, -1, 0, 0, 0, 1]);
        let f = P::from_i64s(&[1, 4]);
        let AlmostPellReport::Exact { a, b, step } = solve_almost_pell(&d, &f, 12).unwrap() else {
            panic!("expected an exact witness");
        };
        assert_eq!(step, 0);
        assert_eq!(a, P::from_i64s(&[-1, 0, 0, 0, 2]));
        assert_eq!(b, P::from_i64s(&[2]));
        assert_eq!(a.square().sub_ref(&d.mul_ref(&b.square())), f);
    }

    #[test]
    fn almost_pell_gates() {
        let d2 = P::from_i64s(&[-1, 0, 1]);
        assert_eq!(
            solve_almost_pell(&d2, &P::one(), 4),
            Err(PellError::DegreeTooSmall { found: 2, min: 4 })
        );
        let t = RatFunc::t();
        let d = pt(vec![t, tpoly(&[1]), tpoly(&[0]), tpoly(&[0]), tpoly(&[0]), tpoly(&[0]), tpoly(&[1])]);
        let f = pt(vec![tpoly(&[0]), tpoly(&[-1]), tpoly(&[0]), tpoly(&[0]), tpoly(&[0]), tpoly(&[0]), tpoly(&[-1])]);
        assert_eq!(
            solve_almost_pell(&d, &f, 4),
            Err(PellError::DegreeTooLarge { deg_f: 6, bound: 2 })
        );
        assert_eq!(
            solve_pell(&P::from_i64s(&[1, -2, 1]), 4),
            Err(PellError::NotSquarefree)
        );
    }

    #[test]
    fn almost_pell_non_square_constant() {
        // (2X^5+1)^2 - (X^6+X)(2X^2)^2 = 1, so F = 3 is reached only up to 1/3.
        let d = P::from_i64s(&[0, 1, 0, 0, 0, 0, 1]);
        let f = P::from_i64s(&[3]);
        let AlmostPellReport::UpToConstant { a, b, c, .. } = solve_almost_pell(&d, &f, 10).unwrap() else {
            panic!("expected a witness up to a constant");
        };
        assert_eq!(c, q(1, 3));
        assert_eq!(a.square().sub_ref(&d.mul_ref(&b.square())), f.scale(&c));
    }

    #[test]
    fn non_identical_solvability_examples() {
        let t = RatFunc::t();
        let z = || tpoly(&[0]);
        // X^6 + X + t, F = 1
        let d1 = pt(vec![t.clone(), tpoly(&[1]), z(), z(), z(), z(), tpoly(&[1])]);
        assert_eq!(
            prove_not_identically_solvable(&d1, &P::one()),
            NonSolvability::Proven { t_degree: 1 }
        );
        // (X - t)(X^7 - X^3 - 1)
        let x_minus_t = pt(vec![t.neg(), tpoly(&[1])]);
        let g = P::from_i64s(&[-1, 0, 0, -1, 0, 0, 0, 1]).embed::<RatFunc>();
        let d2 = x_minus_t.mul_ref(&g);
        assert_eq!(
            prove_not_identically_solvable(&d2, &P::from_i64s(&[1, 4])),
            NonSolvability::Proven { t_degree: 1 }
        );
        // X^4 + t^2 X + 1
        let d3 = pt(vec![tpoly(&[1]), tpoly(&[0, 0, 1]), z(), z(), tpoly(&[1])]);
        assert!(matches!(
            prove_not_identically_solvable(&d3, &P::one()),
            NonSolvability::Inconclusive(_)
        ));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        #[test]
        fn monic_recursion_matches_expansion(
            low in proptest::collection::vec(-3i64..=3, 4..=6),
        ) {
            let mut cs = low.clone();
            cs.resize(if low.len() == 4 { 4 } else { 6 }, 0);
            cs.push(1);
            let d = P::from_i64s(&cs);
            proptest::prop_assume!(validate_d(&d, 2).is_ok());
            let full: Vec<_> = CFracIter::new(&d).unwrap().take(8).collect();
            let mut m = MonicCFrac::new(&d).unwrap();
            let mut steps = Vec::new();
            for s in &full {
                steps.push(m.step());
                let norm = steps.last().unwrap().norm_monic.scale(&m.last_norm_scale());
                proptest::prop_assert_eq!(&norm, &s.norm);
                proptest::prop_assert_eq!(s.p.square().sub_ref(&d.mul_ref(&s.q.square())), norm);
            }
            let a: Vec<_> = full.iter().map(|s| s.a.clone()).collect();
            proptest::prop_assert_eq!(m.partial_quotients(&steps), a);
        }
    }
}
