//! Almost-Pell solutions versus relations in the Jacobian.
//!
//! Write `F = β ∏ (X − αᵢ)^{aᵢ}` with `D(αᵢ) ≠ 0` for `i < h` and
//! `D(αᵢ) = 0` for `i ≥ h`, and put
//!
//! ```text
//! Pᵢ = [αᵢ⁺ − ∞⁻],   Q = [∞⁺ − ∞⁻],
//! ```
//!
//! where `αᵢ⁺ = (αᵢ, √D(αᵢ))` with the canonical root, or the Weierstrass
//! point `(αᵢ, 0)`. A solution `(A, B)`, `B ≠ 0`, gives the relation
//! `Σ gᵢPᵢ + lQ = 0` with `gᵢ = bᵢ⁺ − bᵢ⁻` (orders of `A + YB` at `αᵢ^±`),
//! `|gᵢ| ≤ aᵢ`, `gᵢ ≡ aᵢ (mod 2)`. Conversely a relation with `eᵢ` odd or
//! zero at the Weierstrass roots gives `A² − DB² = β' ∏ (X − αᵢ)^{|eᵢ|}`.
//!
//! When some `D(αᵢ)` is not a square the points `αᵢ^±` are defined over
//! `F(√δ)`. All such `D(αᵢ)` must share one square class `δ`; the search
//! then runs over [`QuadExt`] and the witness is brought back to `F` when a
//! constant multiple of it has coefficients there.

use rayon::prelude::*;

use crate::algebra::{Embed, Field, QuadExt, UniPoly};
use crate::curve::{CurvePoint, Divisor, HyperCurve};
use crate::error::{PellError, Result};
use crate::jacobian::{is_principal, Principality};

/// `F = β ∏ (X − αᵢ)^{aᵢ}`, non-Weierstrass roots first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredTarget<F> {
    pub beta: F,
    pub factors: Vec<(F, u32)>,
    /// Number of leading factors with `D(αᵢ) ≠ 0`.
    pub split_rank: usize,
}

impl<F: Field> FactoredTarget<F> {
    /// Splits `f` over `F` and orders the roots against `d`.
    pub fn new(f: &UniPoly<F>, d: &UniPoly<F>) -> Result<Self> {
        if f.is_zero() {
            return Err(PellError::ZeroPolynomial);
        }
        let mut rest = f.clone();
        let mut factors = Vec::new();
        for alpha in F::roots(f) {
            let lin = UniPoly::linear_root(&alpha);
            let mut k = 0;
            while let Some(q) = rest.exact_div(&lin) {
                rest = q;
                k += 1;
            }
            factors.push((alpha, k));
        }
        if !rest.is_constant() {
            return Err(PellError::NonSplitTarget);
        }
        Ok(Self::from_factors(rest.lc(), factors, d))
    }

    /// Orders the factors (stably) so the Weierstrass roots come last and
    /// drops exponent-0 entries.
    pub fn from_factors(beta: F, factors: Vec<(F, u32)>, d: &UniPoly<F>) -> Self {
        let (mut split, weier): (Vec<_>, Vec<_>) = factors
            .into_iter()
            .filter(|(_, a)| *a > 0)
            .partition(|(x, _)| !d.eval(x).is_zero());
        let split_rank = split.len();
        split.extend(weier);
        FactoredTarget {
            beta,
            factors: split,
            split_rank,
        }
    }

    pub fn roots(&self) -> Vec<F> {
        self.factors.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.factors.iter().map(|(_, a)| *a).collect()
    }

    pub fn to_poly(&self) -> UniPoly<F> {
        product(&self.roots(), &self.exponents()).scale(&self.beta)
    }

    pub fn embed<G: Embed<F>>(&self) -> FactoredTarget<G> {
        FactoredTarget {
            beta: G::embed(&self.beta),
            factors: self.factors.iter().map(|(x, a)| (G::embed(x), *a)).collect(),
            split_rank: self.split_rank,
        }
    }
}

fn product<F: Field>(roots: &[F], exps: &[u32]) -> UniPoly<F> {
    roots
        .iter()
        .zip(exps)
        .fold(UniPoly::one(), |acc, (x, &e)| acc.mul_ref(&UniPoly::linear_root(x).pow(e)))
}

/// Removes `(X − α)²` from `f` while a root `α` of `d` has multiplicity at
/// least 2 in `f`. `A² − DB² = F` and `A'² − DB'² = F/(X − α)²` are solvable
/// together (`A = (X − α)A'`, and conversely `X − α` divides both `A` and
/// `B`). Returns the reduced `f` and the removed factors `(w, k)`, meaning
/// `w^{2k}` was divided out.
pub fn reduce_common_roots<F: Field>(d: &UniPoly<F>, f: &UniPoly<F>) -> (UniPoly<F>, Vec<(UniPoly<F>, u32)>) {
    let mut f = f.clone();
    let mut removed: Vec<(UniPoly<F>, u32)> = Vec::new();
    loop {
        let w = d.gcd(&f);
        if w.is_constant() {
            break;
        }
        let twice = w.gcd(&f.exact_div(&w).expect("gcd divides"));
        if twice.is_constant() {
            break;
        }
        f = f.exact_div(&twice.square()).expect("square divides");
        match removed.iter_mut().find(|(p, _)| *p == twice) {
            Some((_, k)) => *k += 1,
            None => removed.push((twice, 1)),
        }
    }
    (f, removed)
}

/// Coefficients of `Σ gᵢPᵢ + lQ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RelationVector {
    pub g: Vec<i64>,
    pub l: i64,
}

impl RelationVector {
    pub fn is_zero(&self) -> bool {
        self.l == 0 && self.g.iter().all(|&x| x == 0)
    }

    pub fn neg(&self) -> Self {
        RelationVector {
            g: self.g.iter().map(|x| -x).collect(),
            l: -self.l,
        }
    }
}

/// `A² − D·B² = β ∏ (X − rootᵢ)^{exponentᵢ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionWitness<F> {
    pub a: UniPoly<F>,
    pub b: UniPoly<F>,
    pub beta: F,
    pub roots: Vec<F>,
    pub exponents: Vec<u32>,
}

impl<F: Field> SolutionWitness<F> {
    pub fn rhs(&self) -> UniPoly<F> {
        product(&self.roots, &self.exponents).scale(&self.beta)
    }

    /// Checks the identity by multiplying out.
    pub fn verify(&self, d: &UniPoly<F>) -> bool {
        !self.b.is_zero() && self.a.square().sub_ref(&d.mul_ref(&self.b.square())) == self.rhs()
    }

    fn scale(&self, c: &F) -> Self {
        SolutionWitness {
            a: self.a.scale(c),
            b: self.b.scale(c),
            beta: self.beta.mul(&c.mul(c)),
            ..self.clone()
        }
    }
}

impl<F: Field> SolutionWitness<QuadExt<F>> {
    /// A multiple of the witness with coefficients in the base field.
    pub fn descend(&self) -> Option<SolutionWitness<F>> {
        let lead = self.b.lc();
        let w = self.scale(&lead.inv()?);
        let down = |p: &UniPoly<QuadExt<F>>| -> Option<UniPoly<F>> {
            p.coeffs().iter().map(QuadExt::to_base).collect::<Option<Vec<F>>>().map(UniPoly::from_coeffs)
        };
        Some(SolutionWitness {
            a: down(&w.a)?,
            b: down(&w.b)?,
            beta: w.beta.to_base()?,
            roots: w.roots.iter().map(QuadExt::to_base).collect::<Option<_>>()?,
            exponents: w.exponents,
        })
    }
}

/// The points `Pᵢ` and `Q` on a curve over the field where they live.
#[derive(Clone, Debug)]
pub struct PellPointsSetup<F: Field> {
    pub curve: HyperCurve<F>,
    pub target: FactoredTarget<F>,
    /// `αᵢ⁺`
    pub plus_points: Vec<CurvePoint<F>>,
    pub points: Vec<Divisor<F>>,
    pub q: Divisor<F>,
}

/// Builds `Pᵢ` and `Q` when every `αᵢ^±` is defined over `F`.
pub fn build_points<F: Field>(curve: &HyperCurve<F>, target: &FactoredTarget<F>) -> Result<PellPointsSetup<F>> {
    let mut plus_points = Vec::new();
    for (alpha, _) in &target.factors {
        let dx = curve.d().eval(alpha);
        let y = dx.sqrt().ok_or_else(|| {
            PellError::UnsupportedSupport(format!("D({alpha}) = {dx} is not a square in the base field"))
        })?;
        plus_points.push(CurvePoint::Finite { x: alpha.clone(), y });
    }
    Ok(setup_from_points(curve.clone(), target.clone(), plus_points))
}

fn setup_from_points<F: Field>(
    curve: HyperCurve<F>,
    target: FactoredTarget<F>,
    plus_points: Vec<CurvePoint<F>>,
) -> PellPointsSetup<F> {
    let inf_minus = Divisor::at_infinity(0, 1);
    let points = plus_points
        .iter()
        .map(|p| curve.point_divisor(p).sub(&inf_minus))
        .collect();
    PellPointsSetup {
        curve,
        target,
        plus_points,
        points,
        q: Divisor::at_infinity(1, -1),
    }
}

/// `δ` such that all `αᵢ^±` are defined over `F(√δ)`, or `None` if they
/// are defined over `F`.
pub fn extension_needed<F: Field>(curve: &HyperCurve<F>, target: &FactoredTarget<F>) -> Result<Option<F>> {
    let mut delta: Option<F> = None;
    for (alpha, _) in &target.factors {
        let dx = curve.d().eval(alpha);
        if dx.sqrt().is_some() {
            continue;
        }
        match &delta {
            None => delta = Some(dx),
            Some(d0) => {
                if dx.div(d0).expect("nonzero").sqrt().is_none() {
                    return Err(PellError::NestedExtension);
                }
            }
        }
    }
    if delta.is_some() && F::extension_depth() > 0 {
        return Err(PellError::NestedExtension);
    }
    Ok(delta)
}

/// Builds `Pᵢ` and `Q` over `F(√δ)`, with `δ` from [`extension_needed`].
pub fn build_points_extended<F: Field>(
    curve: &HyperCurve<F>,
    target: &FactoredTarget<F>,
    delta: &F,
) -> Result<PellPointsSetup<QuadExt<F>>> {
    let root = QuadExt::sqrt_of(delta).ok_or(PellError::InternalVerificationFailure(format!("{delta} is a square")))?;
    let mut plus_points = Vec::new();
    for (alpha, _) in &target.factors {
        let dx = curve.d().eval(alpha);
        let y = match dx.sqrt() {
            Some(y) => QuadExt::base(y),
            None => {
                let c = dx.div(delta).and_then(|r| r.sqrt()).ok_or(PellError::NestedExtension)?;
                root.mul(&QuadExt::base(c))
            }
        };
        plus_points.push(CurvePoint::Finite { x: QuadExt::base(alpha.clone()), y });
    }
    Ok(setup_from_points(curve.base_change(), target.embed(), plus_points))
}

impl<F: Field> PellPointsSetup<F> {
    pub fn divisor_of(&self, rel: &RelationVector) -> Divisor<F> {
        assert_eq!(rel.g.len(), self.points.len(), "one coefficient per point");
        self.points
            .iter()
            .zip(&rel.g)
            .filter(|(_, &g)| g != 0)
            .fold(self.q.scale(rel.l), |acc, (p, &g)| acc.add(&p.scale(g)))
    }

    /// `[αᵢ⁺ − ∞⁻] = −[αᵢ⁻ − ∞⁺]`, i.e. `αᵢ⁺ + αᵢ⁻ − ∞⁺ − ∞⁻` is principal.
    pub fn check_conjugation_identities(&self) -> Result<bool> {
        for (p, (alpha, _)) in self.plus_points.iter().zip(&self.target.factors) {
            let lhs = self.curve.point_divisor(p).sub(&Divisor::at_infinity(0, 1));
            let conj = self.curve.point_divisor(&crate::curve::involution(p)).sub(&Divisor::at_infinity(1, 0));
            let sum = lhs.add(&conj);
            if sum != self.curve.divisor_of_x_minus(alpha) || !is_principal(&self.curve, &sum)?.is_principal() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The relation attached to a solution of `A² − DB² = F`.
    pub fn solution_to_relation(&self, a: &UniPoly<F>, b: &UniPoly<F>) -> Result<RelationVector> {
        if b.is_zero() {
            return Err(PellError::TrivialSolution);
        }
        let f = self.target.to_poly();
        if a.square().sub_ref(&self.curve.d().mul_ref(&b.square())) != f {
            return Err(PellError::NotASolution);
        }
        let div = self.curve.divisor_of_function(a, b, &[])?;
        let mut g = Vec::with_capacity(self.points.len());
        let mut l = div.inf_plus;
        for (i, (p, (_, ai))) in self.plus_points.iter().zip(&self.target.factors).enumerate() {
            let bp = div.coefficient_at(p);
            if i < self.target.split_rank {
                let bm = div.coefficient_at(&crate::curve::involution(p));
                if bp + bm != *ai as i64 {
                    return Err(PellError::InternalVerificationFailure(format!(
                        "orders {bp} + {bm} at the points above a root of multiplicity {ai}"
                    )));
                }
                g.push(bp - bm);
                l += bm;
            } else {
                if bp != *ai as i64 {
                    return Err(PellError::InternalVerificationFailure(format!(
                        "order {bp} at a Weierstrass root of multiplicity {ai}"
                    )));
                }
                g.push(bp);
            }
        }
        let rel = RelationVector { g, l };
        if rel.is_zero() || !is_principal(&self.curve, &self.divisor_of(&rel))?.is_principal() {
            return Err(PellError::InternalVerificationFailure(format!(
                "solution gave the non-relation {rel:?}"
            )));
        }
        Ok(rel)
    }

    /// A solution of `A² − DB² = β' ∏ (X − αᵢ)^{|eᵢ|}` from a relation.
    pub fn relation_to_solution(&self, rel: &RelationVector) -> Result<SolutionWitness<F>> {
        if rel.is_zero() {
            return Err(PellError::NotARelation);
        }
        for &e in &rel.g[self.target.split_rank..] {
            if e % 2 == 0 && e != 0 {
                return Err(PellError::ParityViolation);
            }
        }
        let Principality::Principal(cert) = is_principal(&self.curve, &self.divisor_of(rel))? else {
            return Err(PellError::NotARelation);
        };
        let roots = self.target.roots();
        let neg: Vec<u32> = rel.g.iter().map(|&e| if e < 0 { (-e) as u32 } else { 0 }).collect();
        let num = product(&roots, &neg);
        let den = cert
            .denominators
            .iter()
            .fold(UniPoly::one(), |acc, (h, k)| acc.mul_ref(&h.pow(*k)));
        let (a, b) = match (
            cert.r.mul_ref(&num).exact_div(&den),
            cert.s.mul_ref(&num).exact_div(&den),
        ) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(PellError::InternalVerificationFailure(
                    "f⁺ has a finite pole".into(),
                ))
            }
        };
        if b.is_zero() {
            return Err(PellError::TrivialSolution);
        }
        let exponents: Vec<u32> = rel.g.iter().map(|e| e.unsigned_abs() as u32).collect();
        let norm = a.square().sub_ref(&self.curve.d().mul_ref(&b.square()));
        let base = product(&roots, &exponents);
        let beta = norm
            .exact_div(&base)
            .filter(UniPoly::is_constant)
            .map(|c| c.lc())
            .ok_or_else(|| PellError::InternalVerificationFailure(format!("norm {norm} is not β·{base}")))?;
        let w = SolutionWitness {
            a,
            b,
            beta,
            roots,
            exponents,
        };
        debug_assert!(w.verify(self.curve.d()));
        Ok(w)
    }

    /// Admissible relation vectors for the exponents of the target, ordered
    /// by `|l|`, then `l`, then lexicographically. Of `r` and `−r` only the
    /// one with positive first nonzero entry appears.
    fn candidates(&self, l_bound: i64) -> Vec<Vec<RelationVector>> {
        let mut gs: Vec<Vec<i64>> = vec![vec![]];
        for (i, (_, a)) in self.target.factors.iter().enumerate() {
            let a = *a as i64;
            let choices: Vec<i64> = if i < self.target.split_rank {
                (-a..=a).filter(|g| (g - a) % 2 == 0).collect()
            } else {
                vec![-1, 1]
            };
            gs = gs
                .into_iter()
                .flat_map(|v| {
                    choices.iter().map(move |&c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        (0..=l_bound)
            .map(|abs_l| {
                let ls = if abs_l == 0 { vec![0] } else { vec![abs_l, -abs_l] };
                ls.into_iter()
                    .flat_map(|l| gs.iter().map(move |g| RelationVector { g: g.clone(), l }))
                    .filter(|r| {
                        let first = r.g.iter().copied().chain([r.l]).find(|&x| x != 0);
                        first.is_some_and(|x| x > 0)
                    })
                    .collect()
            })
            .collect()
    }

    /// First admissible relation with `|l| ≤ l_bound`, in the order of
    /// [`Self::candidates`].
    pub fn find_relation(&self, l_bound: i64) -> Result<Option<RelationVector>> {
        for level in self.candidates(l_bound) {
            let hits = level
                .into_par_iter()
                .map(|r| Ok((is_principal(&self.curve, &self.divisor_of(&r))?.is_principal(), r)))
                .collect::<Result<Vec<_>>>()?;
            if let Some((_, r)) = hits.into_iter().find(|(ok, _)| *ok) {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    /// Multiplies a witness by `∏ (X − αᵢ)^{(aᵢ − |eᵢ|)/2}` so its right
    /// side has the exponents of the target.
    fn pad(&self, w: SolutionWitness<F>) -> SolutionWitness<F> {
        let extra: Vec<u32> = self
            .target
            .exponents()
            .iter()
            .zip(&w.exponents)
            .map(|(a, e)| (a - e) / 2)
            .collect();
        let p = product(&w.roots, &extra);
        SolutionWitness {
            a: w.a.mul_ref(&p),
            b: w.b.mul_ref(&p),
            exponents: self.target.exponents(),
            ..w
        }
    }
}

/// Rescales a witness to the target constant when `β_F/β'` is a square.
fn match_constant<F: Field>(w: SolutionWitness<F>, beta: &F) -> SolutionWitness<F> {
    match beta.div(&w.beta).and_then(|r| r.sqrt()) {
        Some(c) => w.scale(&c),
        None => w,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness<F: Field> {
    Base(SolutionWitness<F>),
    /// Defined only over `F(√δ)`.
    Extended(SolutionWitness<QuadExt<F>>),
}

impl<F: Field> Witness<F> {
    /// `β` equals the target constant, so `(A, B)` solves `A² − DB² = F`.
    pub fn is_exact(&self, target: &FactoredTarget<F>) -> bool {
        match self {
            Witness::Base(w) => w.beta == target.beta,
            Witness::Extended(w) => w.beta == QuadExt::base(target.beta.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JacobianReport<F: Field> {
    Solved { witness: Witness<F>, relation: RelationVector },
    NotWithin(i64),
}

impl<F: Field> JacobianReport<F> {
    pub fn is_solved(&self) -> bool {
        matches!(self, JacobianReport::Solved { .. })
    }
}

/// Searches for an admissible relation with `|l| ≤ l_bound` and turns the
/// first one into a witness for `F` (up to a constant when `β_F/β'` is not
/// a square). The target must already be reduced.
pub fn solve_almost_pell_via_jacobian<F: Field>(
    curve: &HyperCurve<F>,
    target: &FactoredTarget<F>,
    l_bound: i64,
) -> Result<JacobianReport<F>> {
    let f = target.to_poly();
    if reduce_common_roots(curve.d(), &f).0 != f {
        return Err(PellError::UnsupportedSupport(
            "target shares a repeated root with D; reduce it first".into(),
        ));
    }
    match extension_needed(curve, target)? {
        None => {
            let setup = build_points(curve, target)?;
            let Some(relation) = setup.find_relation(l_bound)? else {
                return Ok(JacobianReport::NotWithin(l_bound));
            };
            let w = setup.pad(setup.relation_to_solution(&relation)?);
            let w = match_constant(w, &target.beta);
            Ok(JacobianReport::Solved {
                witness: Witness::Base(w),
                relation,
            })
        }
        Some(delta) => {
            let setup = build_points_extended(curve, target, &delta)?;
            let Some(relation) = setup.find_relation(l_bound)? else {
                return Ok(JacobianReport::NotWithin(l_bound));
            };
            let w = setup.pad(setup.relation_to_solution(&relation)?);
            let witness = match w.descend() {
                Some(down) => Witness::Base(match_constant(down, &target.beta)),
                None => Witness::Extended(match_constant(w, &QuadExt::base(target.beta.clone()))),
            };
            Ok(JacobianReport::Solved { witness, relation })
        }
    }
}

/// Default `|l|` budget for a curve with `deg D = 2d`.
pub fn default_l_bound(d: usize) -> i64 {
    2 * d as i64 + 10
}

/// Exponent vectors `(a₁, …, a_m)`, `0 ≤ aᵢ ≤ bounds[i]`, for which
/// `A² − DB² = ∏ (X − αᵢ)^{aᵢ}` has a solution found within `l_bound`.
/// Vectors are listed in lexicographic order.
pub fn solvable_exponents<F: Field>(
    curve: &HyperCurve<F>,
    roots: &[F],
    bounds: &[u32],
    l_bound: i64,
    cap: u64,
) -> Result<Vec<Vec<u32>>> {
    assert_eq!(roots.len(), bounds.len(), "one bound per root");
    for (i, x) in roots.iter().enumerate() {
        if roots[..i].contains(x) {
            return Err(PellError::UnsupportedSupport(format!("repeated root {x}")));
        }
    }
    let volume = bounds.iter().try_fold(1u64, |acc, &b| acc.checked_mul(b as u64 + 1));
    if volume.is_none_or(|v| v > cap) {
        return Err(PellError::BudgetExceeded(format!("exponent box has more than {cap} vectors")));
    }
    let mut boxes: Vec<Vec<u32>> = vec![vec![]];
    for &b in bounds {
        boxes = boxes
            .into_iter()
            .flat_map(|v| {
                (0..=b).map(move |a| {
                    let mut w = v.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for exps in boxes {
        let f = product(roots, &exps);
        let (reduced, _) = reduce_common_roots(curve.d(), &f);
        let target = FactoredTarget::new(&reduced, curve.d())?;
        if solve_almost_pell_via_jacobian(curve, &target, l_bound)?.is_solved() {
            out.push(exps);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
