//! Truncated Laurent series in descending powers of `X` (expansions at
//! infinity).

use std::fmt;

use super::{Field, UniPoly};
use crate::error::{PellError, Result};

/// `sum_{k = precision}^{top} c_k X^k`, with every coefficient below
/// `precision` unknown.
///
/// The stored top coefficient is nonzero unless the series is zero to the
/// retained precision, in which case `coeffs` is empty.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentSeries<F> {
    top: i64,
    coeffs: Vec<F>,
    precision: i64,
}

/// Default lowest exponent for a series with the given top degree when the
/// caller needs coefficients for a degree budget.
pub fn default_precision(top: i64, budget: i64) -> i64 {
    top - (2 * budget + 8)
}

impl<F: Field> LaurentSeries<F> {
    fn normalized(top: i64, mut coeffs: Vec<F>, precision: i64) -> Self {
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        coeffs.drain(..lead_zeros);
        let top = top - lead_zeros as i64;
        // drop anything below the precision
        let keep = (top - precision + 1).max(0) as usize;
        coeffs.truncate(keep);
        if coeffs.is_empty() {
            return LaurentSeries {
                top: precision - 1,
                coeffs,
                precision,
            };
        }
        LaurentSeries {
            top,
            coeffs,
            precision,
        }
    }

    pub fn zero(precision: i64) -> Self {
        Self::normalized(precision - 1, vec![], precision)
    }

    /// `X^k` terms from a polynomial, retained down to `precision`.
    pub fn from_poly(p: &UniPoly<F>, precision: i64) -> Self {
        let Some(deg) = p.degree() else {
            return Self::zero(precision);
        };
        let top = deg as i64;
        let coeffs = (precision..=top)
            .rev()
            .map(|k| if k >= 0 { p.coeff(k as usize) } else { F::zero() })
            .collect();
        Self::normalized(top, coeffs, precision)
    }

    /// Builds a series from descending coefficients starting at `top`.
    pub fn from_descending(top: i64, coeffs: Vec<F>) -> Self {
        let precision = top - coeffs.len() as i64 + 1;
        Self::normalized(top, coeffs, precision)
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Exponent of the leading nonzero term, `None` if zero to precision.
    pub fn top_degree(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.top)
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `X^k`; `None` below the precision.
    pub fn coeff(&self, k: i64) -> Option<F> {
        if k < self.precision {
            return None;
        }
        if k > self.top {
            return Some(F::zero());
        }
        Some(self.coeffs[(self.top - k) as usize].clone())
    }

    fn relative_precision(&self) -> i64 {
        self.top - self.precision
    }

    pub fn truncate(&self, precision: i64) -> Self {
        assert!(precision >= self.precision, "cannot gain precision by truncation");
        Self::normalized(self.top, self.coeffs.clone(), precision)
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            top: self.top,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            precision: self.precision,
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::normalized(
            self.top,
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
            self.precision,
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let precision = self.precision.max(rhs.precision);
        let top = self.top.max(rhs.top);
        if top < precision {
            return Self::zero(precision);
        }
        let coeffs = (precision..=top)
            .rev()
            .map(|k| {
                let a = self.coeff(k).unwrap_or_else(F::zero);
                let b = rhs.coeff(k).unwrap_or_else(F::zero);
                a.add(&b)
            })
            .collect();
        Self::normalized(top, coeffs, precision)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            // zero to precision; the product is known down to the weaker bound
            let p = if self.coeffs.is_empty() {
                self.precision + rhs.top.max(rhs.precision)
            } else {
                rhs.precision + self.top.max(self.precision)
            };
            return Self::zero(p);
        }
        let rel = self.relative_precision().min(rhs.relative_precision());
        let top = self.top + rhs.top;
        let n = (rel + 1) as usize;
        let mut out = vec![F::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n - i) {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::normalized(top, out, top - rel)
    }

    /// Multiplicative inverse; `None` when the series is zero to precision.
    pub fn inverse(&self) -> Option<Self> {
        let lead_inv = self.coeffs.first()?.inv()?;
        let rel = self.relative_precision();
        let n = (rel + 1) as usize;
        let mut out: Vec<F> = Vec::with_capacity(n);
        out.push(lead_inv.clone());
        for k in 1..n {
            let mut acc = F::zero();
            for j in 1..=k {
                if let Some(a) = self.coeffs.get(j) {
                    acc = acc.add(&a.mul(&out[k - j]));
                }
            }
            out.push(acc.neg().mul(&lead_inv));
        }
        let top = -self.top;
        Some(Self::normalized(top, out, top - rel))
    }

    /// Terms with nonnegative exponent. Panics if some of them are unknown.
    pub fn polynomial_part(&self) -> UniPoly<F> {
        assert!(
            self.precision <= 0 || self.coeffs.is_empty() && self.top < 0,
            "series precision {} too coarse for its polynomial part",
            self.precision
        );
        if self.top < 0 {
            return UniPoly::zero();
        }
        let coeffs = (0..=self.top).map(|k| self.coeff(k).unwrap()).collect();
        UniPoly::from_coeffs(coeffs)
    }

    /// Descending coefficients from the top.
    pub fn descending(&self) -> &[F] {
        &self.coeffs
    }
}

impl<F: Field> fmt::Display for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = self.top - i as i64;
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c.is_atomic() {
                write!(f, "{c}*X^{k}")?;
            } else {
                write!(f, "({c})*X^{k}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(X^{})", self.precision - 1)
    }
}

/// Square root of `d` as a series at infinity, with every coefficient of
/// exponent `>= precision` computed exactly.
///
/// `d` must have even degree and a leading coefficient that is a square in
/// the field; the result has leading coefficient equal to its canonical
/// square root.
pub fn sqrt_series<F: Field>(d: &UniPoly<F>, precision: i64) -> Result<LaurentSeries<F>> {
    let deg = d.degree().ok_or(PellError::ZeroPolynomial)?;
    if deg % 2 == 1 {
        return Err(PellError::OddDegree(deg));
    }
    let half = (deg / 2) as i64;
    let s0 = d.lc().sqrt().ok_or(PellError::LeadingCoefficientNotASquare)?;
    let two_s0_inv = s0.add(&s0).inv().expect("char 0");
    let n = (half - precision + 1).max(1) as usize;
    let mut s: Vec<F> = Vec::with_capacity(n);
    s.push(s0);
    for k in 1..n {
        // coefficient of X^(2d - k) in s^2 must equal that of D
        let target = if k <= deg { d.coeff(deg - k) } else { F::zero() };
        let mut acc = F::zero();
        for i in 1..k {
            acc = acc.add(&s[i].mul(&s[k - i]));
        }
        s.push(target.sub(&acc).mul(&two_s0_inv));
    }
    Ok(LaurentSeries::normalized(half, s, half - n as i64 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    type P = UniPoly<Rational>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn sqrt_of_squares_terminates() {
        let s = sqrt_series(&P::from_i64s(&[0, 0, 1]), -10).unwrap();
        assert_eq!(s.polynomial_part(), P::x());
        assert!(s.sub(&LaurentSeries::from_poly(&P::x(), -10)).is_zero_to_precision());

        let s = sqrt_series(&P::from_i64s(&[1, 2, 1]), -10).unwrap();
        assert_eq!(s.polynomial_part(), P::from_i64s(&[1, 1]));
        assert_eq!(s.coeff(-5), Some(q(0, 1)));
    }

    #[test]
    fn sqrt_of_x6_plus_x() {
        // X^3 + 1/2 X^-2 - 1/8 X^-7 + ...
        let s = sqrt_series(&P::from_i64s(&[0, 1, 0, 0, 0, 0, 1]), -12).unwrap();
        assert_eq!(s.top_degree(), Some(3));
        assert_eq!(s.coeff(3), Some(q(1, 1)));
        assert_eq!(s.coeff(-2), Some(q(1, 2)));
        assert_eq!(s.coeff(-7), Some(q(-1, 8)));
        for k in [2, 1, 0, -1, -3, -4, -5, -6, -8] {
            assert_eq!(s.coeff(k), Some(q(0, 1)), "exponent {k}");
        }
        assert_eq!(s.polynomial_part(), P::monomial(q(1, 1), 3));
    }

    #[test]
    fn sqrt_errors() {
        assert_eq!(
            sqrt_series(&P::from_i64s(&[0, 1, 0, 1]), 0),
            Err(PellError::OddDegree(3))
        );
        assert_eq!(
            sqrt_series(&P::from_i64s(&[1, 0, 2]), 0),
            Err(PellError::LeadingCoefficientNotASquare)
        );
    }

    #[test]
    fn polynomial_part_examples() {
        let s = LaurentSeries::from_descending(3, vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1), q(0, 1), q(1, 2)]);
        assert_eq!(s.polynomial_part(), P::monomial(q(1, 1), 3));
        let s = LaurentSeries::from_descending(-1, vec![q(1, 1), q(0, 1)]);
        assert!(s.polynomial_part().is_zero());
    }

    #[test]
    fn inverse_times_self_is_one() {
        let s = sqrt_series(&P::from_i64s(&[3, -1, 2, 0, 1]), -20).unwrap();
        let prod = s.mul(&s.inverse().unwrap());
        assert_eq!(prod.coeff(0), Some(q(1, 1)));
        for k in prod.precision()..0 {
            assert_eq!(prod.coeff(k), Some(q(0, 1)));
        }
    }
}
