use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modp::{self, ModMap};
use super::{Field, UniPoly};

/// Arbitrary-precision rational number in lowest terms with positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// `max(|a|, |b|)` for `a/b` in lowest terms.
pub fn height(q: &Rational) -> BigInt {
    let n = q.numer().abs();
    let d = q.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn sqrt(&self) -> Option<Self> {
        let n = int_sqrt_exact(self.numer())?;
        let d = int_sqrt_exact(self.denom())?;
        Some(Rational::new(n, d))
    }
    fn is_canonical_sign(&self) -> bool {
        !self.is_negative()
    }
    fn is_atomic(&self) -> bool {
        true
    }
    fn roots(p: &UniPoly<Self>) -> Vec<Self> {
        rational_roots(p)
    }
    fn poly_mul(a: &[Self], b: &[Self]) -> Vec<Self> {
        // integer products over a common denominator, one reduction per output
        let (la, xa) = clear_denominators(a);
        let (lb, xb) = clear_denominators(b);
        let den = la * lb;
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in xa.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in xb.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        out.into_iter().map(|c| Rational::new(c, den.clone())).collect()
    }
    fn reduce(&self, m: &ModMap) -> Option<u64> {
        let n = modp::reduce_int(self.numer(), m.p);
        let d = modp::reduce_int(self.denom(), m.p);
        let di = modp::inv(d, m.p)?;
        Some(modp::mul(n, di, m.p))
    }
}

/// `(L, [L·c])` with `L` the lcm of the denominators.
fn clear_denominators(cs: &[Rational]) -> (BigInt, Vec<BigInt>) {
    let l = cs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = cs.iter().map(|c| c.numer() * (&l / c.denom())).collect();
    (l, ints)
}

/// Clears denominators and content, returning integer coefficients
/// (ascending) of a primitive integer multiple of `p`.
pub fn primitive_integer_coeffs(p: &UniPoly<Rational>) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &content).collect()
}

fn primitive_part(v: Vec<BigInt>) -> Vec<BigInt> {
    let content = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if content.is_zero() || content.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &content).collect()
}

/// Whether `h` divides `x` in ℤ[t] (ascending coefficients, `h ≠ 0`).
fn divides_over_z(h: &[BigInt], x: &[BigInt]) -> bool {
    let mut r = x.to_vec();
    while r.last().is_some_and(Zero::is_zero) {
        r.pop();
    }
    let lh = h.last().expect("nonzero divisor");
    while r.len() >= h.len() {
        let (q, rem) = r.last().expect("nonempty").div_rem(lh);
        if !rem.is_zero() {
            return false;
        }
        let shift = r.len() - h.len();
        for (i, c) in h.iter().enumerate() {
            r[shift + i] -= &q * c;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r.is_empty()
}

/// Monic gcd over ℚ by the dense modular algorithm: gcds modulo large
/// primes are lifted by CRT until the image stops changing and divides both
/// inputs. `gcd(0, 0) = 0`.
pub fn gcd_q(a: &UniPoly<Rational>, b: &UniPoly<Rational>) -> UniPoly<Rational> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let (x, y) = (primitive_integer_coeffs(a), primitive_integer_coeffs(b));
    let lc_x = x.last().expect("nonzero").clone();
    let lc_y = y.last().expect("nonzero").clone();
    let ell = lc_x.gcd(&lc_y);
    // CRT state: coefficients of ell·gcd mod `modulus`
    let mut modulus = BigInt::one();
    let mut image: Vec<BigInt> = Vec::new();
    let mut degree = usize::MAX;
    let mut last: Option<Vec<BigInt>> = None;
    for p in modp::large_primes() {
        if modp::reduce_int(&lc_x, p) == 0 || modp::reduce_int(&lc_y, p) == 0 {
            continue;
        }
        let red = |v: &[BigInt]| v.iter().map(|c| modp::reduce_int(c, p)).collect::<Vec<_>>();
        let g = modp::poly_gcd(&red(&x), &red(&y), p);
        let deg = g.len() - 1;
        if deg == 0 {
            return UniPoly::one();
        }
        if deg > degree {
            continue;
        }
        let l = modp::reduce_int(&ell, p);
        let g: Vec<u64> = g.iter().map(|&c| modp::mul(c, l, p)).collect();
        if deg < degree {
            degree = deg;
            modulus = BigInt::from(p);
            image = g.into_iter().map(BigInt::from).collect();
            last = None;
            continue;
        }
        let m_inv = modp::inv(modp::reduce_int(&modulus, p), p).expect("distinct primes");
        for (c, &gp) in image.iter_mut().zip(&g) {
            let delta = modp::mul(modp::sub(gp, modp::reduce_int(c, p), p), m_inv, p);
            *c += &modulus * BigInt::from(delta);
        }
        modulus *= BigInt::from(p);
        let half = &modulus >> 1;
        let symmetric: Vec<BigInt> = image
            .iter()
            .map(|c| if *c > half { c - &modulus } else { c.clone() })
            .collect();
        if last.as_ref() == Some(&symmetric) {
            let h = primitive_part(symmetric.clone());
            if divides_over_z(&h, &x) && divides_over_z(&h, &y) {
                return UniPoly::from_coeffs(h.into_iter().map(Rational::from_integer).collect()).monic();
            }
        }
        last = Some(symmetric);
    }
    unreachable!("the prime sequence is infinite")
}

/// Positive divisors of `n` by trial division. Returns `None` when `n` is too
/// large to factor this way.
fn positive_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Some(vec![]);
    }
    let small = n.to_u64()?;
    if small > 1u64 << 40 {
        return None;
    }
    let mut primes: Vec<(u64, u32)> = Vec::new();
    let mut rest = small;
    let mut f = 2u64;
    while f * f <= rest {
        if rest % f == 0 {
            let mut e = 0;
            while rest % f == 0 {
                rest /= f;
                e += 1;
            }
            primes.push((f, e));
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        primes.push((rest, 1));
    }
    let mut divs = vec![1u64];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = 1u64;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= p;
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    Some(divs.into_iter().map(BigInt::from).collect())
}

/// All rational roots of `p` by the rational root test.
///
/// Coefficients whose integer form exceeds 2^40 are not factored; in that
/// case only the root `0` (if present) is reported.
pub fn rational_roots(p: &UniPoly<Rational>) -> Vec<Rational> {
    if p.degree().unwrap_or(0) == 0 {
        return vec![];
    }
    let mut roots = Vec::new();
    let mut q = p.clone();
    while Zero::is_zero(&q.coeff(0)) && !q.is_zero() {
        if roots.is_empty() {
            roots.push(<Rational as Zero>::zero());
        }
        q = q.shift_down(1);
    }
    if q.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let ints = primitive_integer_coeffs(&q);
    let a0 = ints.first().cloned().unwrap_or_default();
    let an = ints.last().cloned().unwrap_or_default();
    let (Some(num_divs), Some(den_divs)) = (positive_divisors(&a0), positive_divisors(&an)) else {
        return roots;
    };
    let mut found: Vec<Rational> = Vec::new();
    for n in &num_divs {
        for d in &den_divs {
            if !n.gcd(d).is_one() {
                continue;
            }
            for s in [Sign::Plus, Sign::Minus] {
                let cand = Rational::new(BigInt::from_biguint(s, n.magnitude().clone()), d.clone());
                if !found.contains(&cand) && Zero::is_zero(&q.eval(&cand)) {
                    found.push(cand);
                }
            }
        }
    }
    found.sort();
    roots.extend(found);
    roots
}
