//! Principality of degree-zero divisors by exact linear algebra.
//!
//! For `Δ` of degree 0 the negative finite part is cleared with a
//! polynomial `h`, leaving `Δ' = Δ + div(h) = E − a∞⁺ − b∞⁻` with `E`
//! effective. A function with divisor `Δ'` is regular on the affine part,
//! hence `f = R + YS`, and
//!
//! * `ord_{∞⁺} f ≥ −a` and `ord_{∞⁻} f ≥ −b` give `deg R ≤ M`,
//!   `deg S ≤ M − d` for `M = max(a, b)`, and kill the coefficients of
//!   `X^k`, `k > a` (resp. `k > b`), in `R − sS` (resp. `R + sS`);
//! * `ord ≥ E` is a congruence on `R` and `S` for every block of `E`.
//!
//! Any nonzero `f` with `div f ≥ Δ'` has `div f = Δ'` because both have
//! degree 0, so the solution space has dimension at most 1 and `Δ` is
//! principal iff the kernel is nonzero. Every certificate is re-checked
//! with [`HyperCurve::divisor_of_function`].

use rayon::prelude::*;

use crate::algebra::linalg::{full_column_rank_mod_p, kernel};
use crate::algebra::{Field, UniPoly};
use crate::curve::{Block, Divisor, HyperCurve};
use crate::error::{PellError, Result};

/// Default cap on the number of vectors in a relation search box.
pub const DEFAULT_BOX_CAP: u64 = 250_000;

/// `div((R + YS) / ∏ hⱼ^{kⱼ}) = divisor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalityCertificate<F> {
    pub r: UniPoly<F>,
    pub s: UniPoly<F>,
    pub denominators: Vec<(UniPoly<F>, u32)>,
    pub divisor: Divisor<F>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Principality<F> {
    Principal(PrincipalityCertificate<F>),
    NotPrincipal,
}

impl<F> Principality<F> {
    pub fn is_principal(&self) -> bool {
        matches!(self, Principality::Principal(_))
    }
}

/// `Y` with `Y² ≡ D` modulo `w^e` and `Y ≡ v mod w`, by Newton iteration.
fn lift_branch<F: Field>(v: &UniPoly<F>, d: &UniPoly<F>, w: &UniPoly<F>, e: u32) -> UniPoly<F> {
    let mut y = v.clone();
    let mut prec = 1;
    while prec < e {
        prec = (2 * prec).min(e);
        let m = w.pow(prec);
        let err = y.square().sub_ref(d).rem(&m).expect("nonzero");
        let inv = y.scale(&F::from_i64(2)).inv_mod(&m).expect("branch is a unit mod w");
        y = y.sub_ref(&err.mul_ref(&inv)).rem(&m).expect("nonzero");
    }
    y
}

/// Rows stating `Σ uᵢ·colᵢ ≡ 0 (mod m)`, where column `i` of the unknowns
/// listed in `cols` is the polynomial `cols[i]`.
fn congruence_rows<F: Field>(
    rows: &mut Vec<Vec<F>>,
    ncols: usize,
    m: &UniPoly<F>,
    cols: &[(usize, UniPoly<F>)],
) {
    let dm = m.degree().expect("nonzero modulus");
    let reduced: Vec<(usize, UniPoly<F>)> = cols
        .iter()
        .map(|(i, p)| (*i, p.rem(m).expect("nonzero")))
        .collect();
    for k in 0..dm {
        let mut row = vec![F::zero(); ncols];
        for (i, p) in &reduced {
            row[*i] = p.coeff(k);
        }
        if row.iter().any(|x| !x.is_zero()) {
            rows.push(row);
        }
    }
}

fn monomials<F: Field>(offset: usize, count: usize, times: &UniPoly<F>) -> Vec<(usize, UniPoly<F>)> {
    (0..count).map(|i| (offset + i, times.mul_xk(i))).collect()
}

/// Decides whether `delta` is principal and returns a verified witness.
pub fn is_principal<F: Field>(curve: &HyperCurve<F>, delta: &Divisor<F>) -> Result<Principality<F>> {
    if delta.degree() != 0 {
        return Err(PellError::NotDegreeZero(delta.degree()));
    }
    let d = curve.d();
    let half = curve.half_degree() as i64;

    let mut denominators: Vec<(UniPoly<F>, u32)> = Vec::new();
    let mut cleared = delta.clone();
    for b in delta.blocks() {
        let m = match b {
            Block::Ramified { c, .. } if *c < 0 => (1 - c) / 2,
            Block::Split { minus, .. } if *minus < 0 => -minus,
            Block::Symmetric { c, .. } if *c < 0 => -c,
            _ => 0,
        };
        if m > 0 {
            let w = b.w().clone();
            cleared = cleared.add(&Divisor::of_polynomial(&w, d).scale(m));
            denominators.push((w, m as u32));
        }
    }

    let a = -cleared.inf_plus;
    let b = -cleared.inf_minus;
    let big_m = a.max(b);
    let nr = (big_m + 1) as usize;
    let ns = (big_m - half + 1).max(0) as usize;
    let ncols = nr + ns;
    let one = UniPoly::one();
    let mut rows: Vec<Vec<F>> = Vec::new();

    let low = a.min(b) + 1 - (ns as i64 - 1).max(0);
    let ser = curve.series(low.min(0));
    for (bound, sign) in [(a, F::one().neg()), (b, F::one())] {
        for k in (bound + 1)..=big_m {
            let mut row = vec![F::zero(); ncols];
            if k >= 0 {
                row[k as usize] = F::one();
            }
            for j in 0..ns {
                let c = ser.coeff(k - j as i64).expect("series precision");
                row[nr + j] = sign.mul(&c);
            }
            rows.push(row);
        }
    }

    for blk in cleared.blocks() {
        match blk {
            Block::Ramified { w, c } => {
                let (er, es) = (((c + 1) / 2) as u32, (c / 2) as u32);
                if er > 0 {
                    congruence_rows(&mut rows, ncols, &w.pow(er), &monomials(0, nr, &one));
                }
                if es > 0 && ns > 0 {
                    congruence_rows(&mut rows, ncols, &w.pow(es), &monomials(nr, ns, &one));
                }
            }
            Block::Symmetric { w, c } => {
                let m = w.pow(*c as u32);
                congruence_rows(&mut rows, ncols, &m, &monomials(0, nr, &one));
                if ns > 0 {
                    congruence_rows(&mut rows, ncols, &m, &monomials(nr, ns, &one));
                }
            }
            Block::Split { w, v, plus, minus } => {
                let y = lift_branch(v, d, w, *plus as u32);
                for (e, branch) in [(*plus, y.clone()), (*minus, y.neg_ref())] {
                    if e <= 0 {
                        continue;
                    }
                    let m = w.pow(e as u32);
                    let mut cols = monomials(0, nr, &one);
                    cols.extend(monomials(nr, ns, &branch));
                    congruence_rows(&mut rows, ncols, &m, &cols);
                }
            }
        }
    }

    if full_column_rank_mod_p(&rows, ncols) {
        return Ok(Principality::NotPrincipal);
    }
    let mut basis = kernel(&rows, ncols);
    match basis.len() {
        0 => return Ok(Principality::NotPrincipal),
        1 => {}
        k => {
            return Err(PellError::InternalVerificationFailure(format!(
                "function space of dimension {k} for a degree-zero divisor"
            )))
        }
    }
    let x = basis.pop().expect("one vector");
    let r = UniPoly::from_coeffs(x[..nr].to_vec());
    let s = UniPoly::from_coeffs(x[nr..].to_vec());
    let lead = if r.is_zero() { s.lc() } else { r.lc() };
    let lead_inv = lead.inv().expect("nonzero kernel vector");
    let (r, s) = (r.scale(&lead_inv), s.scale(&lead_inv));

    let got = curve.divisor_of_function(&r, &s, &denominators)?;
    if got != *delta {
        return Err(PellError::InternalVerificationFailure(format!(
            "certificate has divisor {got}, expected {delta}"
        )));
    }
    Ok(Principality::Principal(PrincipalityCertificate {
        r,
        s,
        denominators,
        divisor: got,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassOrder<F> {
    Order {
        order: u64,
        certificate: PrincipalityCertificate<F>,
    },
    NotTorsionWithin(u64),
}

/// Least `k ≤ max_order` with `kΔ` principal.
pub fn order_of_class<F: Field>(curve: &HyperCurve<F>, delta: &Divisor<F>, max_order: u64) -> Result<ClassOrder<F>> {
    if delta.degree() != 0 {
        return Err(PellError::NotDegreeZero(delta.degree()));
    }
    for k in 1..=max_order {
        if let Principality::Principal(certificate) = is_principal(curve, &delta.scale(k as i64))? {
            return Ok(ClassOrder::Order { order: k, certificate });
        }
    }
    Ok(ClassOrder::NotTorsionWithin(max_order))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationLattice {
    /// Hermite normal form basis, one row per generator.
    pub generators: Vec<Vec<i64>>,
    /// `|xᵢ| ≤ bounds[i]`.
    pub bounds: Vec<i64>,
}

fn combination<F: Field>(classes: &[Divisor<F>], coeffs: &[i64]) -> Divisor<F> {
    classes
        .iter()
        .zip(coeffs)
        .filter(|(_, &c)| c != 0)
        .fold(Divisor::zero(), |acc, (cl, &c)| acc.add(&cl.scale(c)))
}

/// Integer vectors in the box whose first nonzero entry is positive.
pub(crate) fn half_box(bounds: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &b in bounds {
        let mut next = Vec::with_capacity(out.len() * (2 * b as usize + 1));
        for v in &out {
            for x in -b..=b {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out.retain(|v| v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0));
    out
}

/// All relations `Σ xᵢ classesᵢ ~ 0` with `|xᵢ| ≤ bounds[i]`, returned as an
/// HNF basis of the lattice they span. Relations beyond the box are not
/// seen; the result is a statement about the box only.
pub fn relation_lattice<F: Field>(
    curve: &HyperCurve<F>,
    classes: &[Divisor<F>],
    bounds: &[i64],
    cap: u64,
) -> Result<RelationLattice> {
    assert_eq!(classes.len(), bounds.len(), "one bound per class");
    for c in classes {
        if c.degree() != 0 {
            return Err(PellError::NotDegreeZero(c.degree()));
        }
    }
    let volume = bounds
        .iter()
        .try_fold(1u64, |acc, &b| acc.checked_mul(2 * b.max(0) as u64 + 1));
    match volume {
        Some(v) if v <= cap => {}
        _ => {
            return Err(PellError::BudgetExceeded(format!(
                "search box has more than {cap} vectors"
            )))
        }
    }
    let candidates = half_box(bounds);
    let found: Vec<Vec<i64>> = candidates
        .into_par_iter()
        .map(|v| is_principal(curve, &combination(classes, &v)).map(|p| (v, p.is_principal())))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter_map(|(v, ok)| ok.then_some(v))
        .collect();
    let generators = hermite_normal_form(found);
    for g in &generators {
        if !is_principal(curve, &combination(classes, g))?.is_principal() {
            return Err(PellError::InternalVerificationFailure(format!(
                "lattice generator {g:?} is not a relation"
            )));
        }
    }
    Ok(RelationLattice {
        generators,
        bounds: bounds.to_vec(),
    })
}

/// Row Hermite normal form of the lattice spanned by `rows`: upper
/// echelon, positive pivots, entries above each pivot reduced into
/// `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    let Some(n) = rows.first().map(Vec::len) else {
        return vec![];
    };
    let mut m: Vec<Vec<i128>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(i128::from).collect())
        .collect();
    let mut out: Vec<Vec<i128>> = Vec::new();
    for col in 0..n {
        // Euclid on the column among the remaining rows
        loop {
            let mut nz: Vec<usize> = (0..m.len()).filter(|&i| m[i][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by_key(|&i| m[i][col].abs());
            let p = nz[0];
            let pivot_row = m[p].clone();
            for &i in &nz[1..] {
                let qt = m[i][col].div_euclid(pivot_row[col]);
                for j in col..n {
                    m[i][j] -= qt * pivot_row[j];
                }
            }
        }
        if let Some(p) = (0..m.len()).find(|&i| m[i][col] != 0) {
            let mut row = m.swap_remove(p);
            if row[col] < 0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(row);
        }
        m.retain(|r| r.iter().any(|&x| x != 0));
    }
    // reduce above pivots
    for i in 0..out.len() {
        let pc = out[i].iter().position(|&x| x != 0).expect("nonzero row");
        let piv = out[i][pc];
        for k in 0..i {
            let qt = out[k][pc].div_euclid(piv);
            if qt != 0 {
                let src = out[i].clone();
                for j in pc..n {
                    out[k][j] -= qt * src[j];
                }
            }
        }
    }
    out.into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("HNF entry fits in i64")).collect())
        .collect()
}

#[cfg(test)]
mod tests;
