//! Specialising one-parameter families `A² − D_t B² = F_t` at rational
//! `t₀` of bounded height and searching each fiber for solutions.
//!
//! Every verdict is a semi-decision: solutions are certified by
//! multiplying out, refutations only say "nothing within the budget".

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

use crate::algebra::ratfunc::discriminant_in_x;
use crate::algebra::{Field, QuadExt, RatFunc, Rational, UniPoly};
use crate::bridge::{reduce_common_roots, solve_almost_pell_via_jacobian, FactoredTarget, JacobianReport, Witness};
use crate::cfrac::{prove_not_identically_solvable, solve_almost_pell, validate_d, AlmostPellReport, NonSolvability};
use crate::curve::HyperCurve;
use crate::error::{PellError, Result};

/// All `a/b` in lowest terms with `max(|a|, |b|) ≤ bound`, ordered by
/// height, then numerator, then denominator.
pub fn rationals_of_height_up_to(bound: u64) -> Vec<Rational> {
    let t = bound as i64;
    let mut out: Vec<(i64, i64, i64)> = Vec::new();
    for b in 1..=t {
        for a in -t..=t {
            if a.gcd(&b) == 1 {
                out.push((a.abs().max(b), a, b));
            }
        }
    }
    out.sort_unstable();
    out.into_iter()
        .map(|(_, a, b)| Rational::new(BigInt::from(a), BigInt::from(b)))
        .collect()
}

/// `A² − D_t B² = F_t` over ℚ(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub d: UniPoly<RatFunc>,
    pub f: UniPoly<RatFunc>,
    /// `disc_X(D_t)`
    pub discriminant: RatFunc,
}

impl Family {
    pub fn new(d: UniPoly<RatFunc>, f: UniPoly<RatFunc>) -> Result<Self> {
        validate_d(&d, 4)?;
        if f.is_zero() {
            return Err(PellError::ZeroPolynomial);
        }
        let discriminant = discriminant_in_x(&d);
        Ok(Family { d, f, discriminant })
    }

    pub fn x_degree(&self) -> usize {
        self.d.degree().expect("validated")
    }

    /// `F` as a polynomial over ℚ when it does not involve `t`.
    pub fn constant_target(&self) -> Option<UniPoly<Rational>> {
        self.f
            .coeffs()
            .iter()
            .map(|c| c.is_constant().then(|| c.numer().coeff(0)))
            .collect::<Option<Vec<_>>>()
            .map(UniPoly::from_coeffs)
    }

    /// The finitely many rational `t₀` where [`specialize`] can report
    /// [`Degeneracy`]: roots of the discriminant numerator, of the leading
    /// coefficient numerator and of every coefficient denominator.
    pub fn degenerate_parameters(&self) -> Vec<Rational> {
        let mut polys = vec![self.discriminant.numer().clone(), self.d.lc().numer().clone()];
        polys.extend(self.d.coeffs().iter().chain(self.f.coeffs()).map(|c| c.denom().clone()));
        let mut out: Vec<Rational> = polys.iter().flat_map(Rational::roots).collect();
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Degeneracy {
    DenominatorVanishes,
    DegreeDrops,
    NotSquarefree,
    LeadingCoefficientNotASquare,
    ZeroTarget,
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Degeneracy::DenominatorVanishes => "a coefficient denominator vanishes",
            Degeneracy::DegreeDrops => "the X-degree of D drops",
            Degeneracy::NotSquarefree => "D is not squarefree",
            Degeneracy::LeadingCoefficientNotASquare => "the leading coefficient of D is not a square",
            Degeneracy::ZeroTarget => "F vanishes identically",
        })
    }
}

fn eval_poly(p: &UniPoly<RatFunc>, t0: &Rational) -> Option<UniPoly<Rational>> {
    p.coeffs()
        .iter()
        .map(|c| c.eval_at(t0))
        .collect::<Option<Vec<_>>>()
        .map(UniPoly::from_coeffs)
}

/// `(D_{t₀}, F_{t₀})`.
pub fn specialize(
    family: &Family,
    t0: &Rational,
) -> std::result::Result<(UniPoly<Rational>, UniPoly<Rational>), Degeneracy> {
    let d0 = eval_poly(&family.d, t0).ok_or(Degeneracy::DenominatorVanishes)?;
    let f0 = eval_poly(&family.f, t0).ok_or(Degeneracy::DenominatorVanishes)?;
    if d0.degree() != Some(family.x_degree()) {
        return Err(Degeneracy::DegreeDrops);
    }
    if f0.is_zero() {
        return Err(Degeneracy::ZeroTarget);
    }
    match validate_d(&d0, 4) {
        Ok(_) => Ok((d0, f0)),
        Err(PellError::LeadingCoefficientNotASquare) => Err(Degeneracy::LeadingCoefficientNotASquare),
        Err(_) => Err(Degeneracy::NotSquarefree),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    Cfrac,
    Jacobian,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Cfrac => "cfrac",
            Engine::Jacobian => "jacobian",
        })
    }
}

/// `A² − D₀B² = c·F₀`, with `A, B` over ℚ or a quadratic extension of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanWitness {
    pub a: UniPoly<QuadExt<Rational>>,
    pub b: UniPoly<QuadExt<Rational>>,
    pub c: QuadExt<Rational>,
}

impl ScanWitness {
    fn from_base(a: UniPoly<Rational>, b: UniPoly<Rational>, c: Rational) -> Self {
        ScanWitness {
            a: a.embed(),
            b: b.embed(),
            c: QuadExt::base(c),
        }
    }

    pub fn verify(&self, d0: &UniPoly<Rational>, f0: &UniPoly<Rational>) -> bool {
        let d: UniPoly<QuadExt<Rational>> = d0.embed();
        let f: UniPoly<QuadExt<Rational>> = f0.embed();
        !self.b.is_zero() && self.a.square().sub_ref(&d.mul_ref(&self.b.square())) == f.scale(&self.c)
    }

    /// `c = 1`: a solution of the specialised equation itself.
    pub fn is_exact(&self) -> bool {
        self.c.is_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScanStatus {
    Solvable { engine: Engine, witness: ScanWitness },
    /// Engines that ran and found nothing.
    NotWithinBudget { engines: Vec<Engine> },
    Degenerate(Degeneracy),
    /// An engine gave up on this fiber (budget or unsupported input).
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanEntry {
    pub t0: Rational,
    pub d0: Option<UniPoly<Rational>>,
    pub f0: Option<UniPoly<Rational>>,
    pub status: ScanStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScanBudgets {
    pub max_steps: usize,
    /// `None` uses `2d + 10`.
    pub l_bound: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanReport {
    /// Outcome of the generic non-solvability certificate when `F` is
    /// constant in `t`.
    pub generic: Option<NonSolvability>,
    pub entries: Vec<ScanEntry>,
}

impl ScanReport {
    pub fn solvable(&self) -> impl Iterator<Item = &ScanEntry> {
        self.entries
            .iter()
            .filter(|e| matches!(e.status, ScanStatus::Solvable { .. }))
    }
}

/// Runs both engines on one specialised equation: the convergent criterion
/// whenever `deg F₀ ≤ d − 1`, then the Jacobian search if `F₀` splits.
pub fn solve_fiber(d0: &UniPoly<Rational>, f0: &UniPoly<Rational>, budgets: ScanBudgets) -> ScanStatus {
    let mut ran = Vec::new();
    let mut notes = Vec::new();
    match solve_almost_pell(d0, f0, budgets.max_steps) {
        Ok(AlmostPellReport::Exact { a, b, .. }) => {
            return solved(Engine::Cfrac, ScanWitness::from_base(a, b, Rational::one()), d0, f0)
        }
        Ok(AlmostPellReport::UpToConstant { a, b, c, .. }) => {
            return solved(Engine::Cfrac, ScanWitness::from_base(a, b, c), d0, f0)
        }
        Ok(AlmostPellReport::NotWithin(_)) => ran.push(Engine::Cfrac),
        Err(e) => notes.push(format!("cfrac: {e}")),
    }
    match jacobian_fiber(d0, f0, budgets.l_bound) {
        Ok(Some(w)) => return solved(Engine::Jacobian, w, d0, f0),
        Ok(None) => ran.push(Engine::Jacobian),
        Err(e) => notes.push(format!("jacobian: {e}")),
    }
    if ran.is_empty() {
        ScanStatus::Skipped(notes.join("; "))
    } else {
        ScanStatus::NotWithinBudget { engines: ran }
    }
}

fn solved(engine: Engine, witness: ScanWitness, d0: &UniPoly<Rational>, f0: &UniPoly<Rational>) -> ScanStatus {
    if witness.verify(d0, f0) {
        ScanStatus::Solvable { engine, witness }
    } else {
        ScanStatus::Skipped(format!("{engine}: witness failed verification"))
    }
}

fn jacobian_fiber(d0: &UniPoly<Rational>, f0: &UniPoly<Rational>, l_bound: Option<i64>) -> Result<Option<ScanWitness>> {
    let curve = HyperCurve::new(d0.clone())?;
    let (reduced, removed) = reduce_common_roots(d0, f0);
    let target = FactoredTarget::new(&reduced, d0)?;
    let l_bound = l_bound.unwrap_or_else(|| crate::bridge::default_l_bound(curve.half_degree()));
    let JacobianReport::Solved { witness, .. } = solve_almost_pell_via_jacobian(&curve, &target, l_bound)? else {
        return Ok(None);
    };
    // undo the reduction: multiply by the removed square roots
    let lift = removed.iter().fold(UniPoly::one(), |acc, (w, k)| acc.mul_ref(&w.pow(*k)));
    let lift_q: UniPoly<QuadExt<Rational>> = lift.embed();
    let beta_f = QuadExt::base(target.beta.clone());
    Ok(Some(match witness {
        Witness::Base(w) => ScanWitness::from_base(
            w.a.mul_ref(&lift),
            w.b.mul_ref(&lift),
            w.beta.clone() / target.beta.clone(),
        ),
        Witness::Extended(w) => ScanWitness {
            a: w.a.mul_ref(&lift_q),
            b: w.b.mul_ref(&lift_q),
            c: w.beta.div(&beta_f).expect("nonzero"),
        },
    }))
}

/// Specialises the family at every `t₀` of height at most `height_bound`
/// and runs [`solve_fiber`] on each. Entries come back in height order
/// regardless of which worker finished first.
pub fn scan(family: &Family, height_bound: u64, budgets: ScanBudgets) -> ScanReport {
    let generic = family
        .constant_target()
        .map(|f| prove_not_identically_solvable(&family.d, &f));
    let entries = rationals_of_height_up_to(height_bound)
        .into_par_iter()
        .map(|t0| match specialize(family, &t0) {
            Err(reason) => ScanEntry {
                t0,
                d0: None,
                f0: None,
                status: ScanStatus::Degenerate(reason),
            },
            Ok((d0, f0)) => {
                let status = solve_fiber(&d0, &f0, budgets);
                ScanEntry {
                    t0,
                    d0: Some(d0),
                    f0: Some(f0),
                    status,
                }
            }
        })
        .collect();
    ScanReport { generic, entries }
}

/// `X₁⁴ + X₁² + t₀X₁`
pub fn transformed_d(t0: &Rational) -> UniPoly<Rational> {
    UniPoly::from_coeffs(vec![
        Rational::zero(),
        t0.clone(),
        Rational::one(),
        Rational::zero(),
        Rational::one(),
    ])
}

/// `X¹² + X⁴ + t₀`
pub fn pulled_back_d(t0: &Rational) -> UniPoly<Rational> {
    let mut cs = vec![Rational::zero(); 13];
    cs[0] = t0.clone();
    cs[4] = Rational::one();
    cs[12] = Rational::one();
    UniPoly::from_coeffs(cs)
}

/// Pulls a solution of `A₁² − (X₁⁴ + X₁² + t₀X₁)B₁² = X₁ − 1` back along
/// `(X, Y) ↦ (X⁴, X²Y)` to `A² − (X¹² + X⁴ + t₀)B² = X⁴ − 1`.
pub fn beta_pullback(
    a1: &UniPoly<Rational>,
    b1: &UniPoly<Rational>,
    t0: &Rational,
) -> Result<(UniPoly<Rational>, UniPoly<Rational>)> {
    let f1 = UniPoly::from_i64s(&[-1, 1]);
    if b1.is_zero() || a1.square().sub_ref(&transformed_d(t0).mul_ref(&b1.square())) != f1 {
        return Err(PellError::NotASolution);
    }
    let x4 = UniPoly::monomial(Rational::one(), 4);
    let a = a1.compose(&x4);
    let b = b1.compose(&x4).mul_xk(2);
    if a.square().sub_ref(&pulled_back_d(t0).mul_ref(&b.square())) != UniPoly::from_i64s(&[-1, 0, 0, 0, 1]) {
        return Err(PellError::InternalVerificationFailure("pullback identity failed".into()));
    }
    Ok((a, b))
}

/// The pullback identity for indeterminate `(A₁, B₁)`: substituting
/// `X₁ = X⁴` is a ring map, so it suffices that it sends `D̃_t` to
/// `X⁴·(X¹² + X⁴ + t)` and `X₁ − 1` to `X⁴ − 1`. Checked over ℚ(t).
pub fn beta_pullback_identity_holds() -> bool {
    let t = RatFunc::t();
    let one = RatFunc::one();
    let zero = RatFunc::zero();
    let d_tilde = UniPoly::from_coeffs(vec![zero.clone(), t.clone(), one.clone(), zero.clone(), one.clone()]);
    let mut cs = vec![zero.clone(); 13];
    cs[0] = t;
    cs[4] = one.clone();
    cs[12] = one.clone();
    let d12 = UniPoly::from_coeffs(cs);
    let x4 = UniPoly::monomial(one.clone(), 4);
    let f1 = UniPoly::from_coeffs(vec![one.neg(), one.clone()]);
    d_tilde.compose(&x4) == d12.mul_xk(4)
        && f1.compose(&x4) == UniPoly::from_coeffs(vec![one.neg(), zero.clone(), zero.clone(), zero, one])
}
