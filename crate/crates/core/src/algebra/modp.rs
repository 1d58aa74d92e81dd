//! Reduction to a prime field, used as a sound rank pre-filter.
//!
//! A ring homomorphism from the p-integral part of the working field onto
//! `F_p` can only lower the rank of a matrix. If the reduced matrix already
//! has full column rank, so does the original, and its kernel is trivial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

/// The Mersenne prime 2^61 - 1.
pub const DEFAULT_PRIME: u64 = (1u64 << 61) - 1;

/// Parameters of a reduction homomorphism: the prime and the image of the
/// transcendental `t` when rational functions are involved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModMap {
    pub p: u64,
    pub tau: u64,
}

impl Default for ModMap {
    fn default() -> Self {
        ModMap {
            p: DEFAULT_PRIME,
            tau: 0x1d3c_9a47_5be1_0f29 % DEFAULT_PRIME,
        }
    }
}

impl ModMap {
    /// A few independent reductions to try in turn when one of them is not
    /// defined on some input (a denominator or a `√δ` that does not reduce).
    pub fn candidates() -> [ModMap; 3] {
        let d = ModMap::default();
        [
            d,
            ModMap {
                p: 2_305_843_009_213_693_921,
                tau: 0x0bad_5eed_1234_5679,
            },
            ModMap {
                p: 2_305_843_009_213_693_907,
                tau: 0x1357_9bdf_2468_ace1,
            },
        ]
    }
}

pub fn reduce_int(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

pub fn add(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + p as u128 - b as u128) % p as u128) as u64
}

pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, b, p);
        }
        b = mul(b, b, p);
        e >>= 1;
    }
    acc
}

pub fn inv(a: u64, p: u64) -> Option<u64> {
    (!a.is_multiple_of(p)).then(|| pow(a, p - 2, p))
}

/// Tonelli-Shanks. Returns the smaller of the two roots so the choice is
/// deterministic.
pub fn sqrt(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow(z, q, p);
    let mut t = pow(a, q, p);
    let mut r = pow(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul(tt, tt, p);
            i += 1;
        }
        let b = pow(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul(b, b, p);
        t = mul(t, c, p);
        r = mul(r, b, p);
    }
    Some(r.min(p - r))
}

/// Rank of a dense matrix over `F_p`.
pub fn rank(mut rows: Vec<Vec<u64>>, ncols: usize, p: u64) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let pinv = inv(rows[rank][col], p).expect("nonzero pivot");
        for r in (rank + 1)..rows.len() {
            if rows[r][col] == 0 {
                continue;
            }
            let f = mul(rows[r][col], pinv, p);
            for c in col..ncols {
                let v = mul(f, rows[rank][c], p);
                rows[r][c] = sub(rows[r][c], v, p);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic `gcd(a, b)` over `F_p`, coefficients ascending; empty for
/// `gcd(0, 0)`.
pub fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let binv = inv(*b.last().expect("nonempty"), p).expect("nonzero leading coefficient");
        while a.len() >= b.len() {
            let f = mul(*a.last().expect("nonempty"), binv, p);
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[shift + i] = sub(a[shift + i], mul(f, *c, p), p);
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lc) = a.last() {
        let li = inv(lc, p).expect("nonzero");
        for c in a.iter_mut() {
            *c = mul(*c, li, p);
        }
    }
    a
}

/// Degree of `gcd(a, b)` over `F_p`. Both inputs must be nonzero.
pub fn gcd_degree(a: &[u64], b: &[u64], p: u64) -> usize {
    poly_gcd(a, b, p).len().saturating_sub(1)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'bases: for &a in &BASES {
        let mut x = pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primes below 2^62 in decreasing order.
pub fn large_primes() -> impl Iterator<Item = u64> {
    let mut n = 1u64 << 62;
    std::iter::from_fn(move || {
        loop {
            n -= 1;
            if is_prime(n) {
                return Some(n);
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tonelli_shanks_roundtrip() {
        let p = DEFAULT_PRIME;
        for a in [2u64, 3, 5, 66, 123_456_789] {
            if let Some(r) = sqrt(a, p) {
                assert_eq!(mul(r, r, p), a);
            }
        }
        // 4 is a square everywhere
        assert_eq!(sqrt(4, p), Some(2));
        let small = 13;
        assert_eq!(sqrt(10, small).map(|r| mul(r, r, small)), Some(10));
        assert_eq!(sqrt(5, small), None);
    }

    #[test]
    fn rank_small() {
        let p = 7;
        assert_eq!(rank(vec![vec![1, 2], vec![2, 4]], 2, p), 1);
        assert_eq!(rank(vec![vec![1, 2], vec![2, 5]], 2, p), 2);
        assert_eq!(rank(vec![vec![0, 0]], 2, p), 0);
    }

    #[test]
    fn gcd_degree_small() {
        let p = 101;
        // (x+1)(x+2) and (x+1)(x+3)
        assert_eq!(gcd_degree(&[2, 3, 1], &[3, 4, 1], p), 1);
        assert_eq!(gcd_degree(&[2, 3, 1], &[5, 1], p), 0);
        assert_eq!(gcd_degree(&[2, 3, 1], &[2, 3, 1], p), 2);
        assert_eq!(gcd_degree(&[7], &[1, 1], p), 0);
        assert_eq!(poly_gcd(&[2, 3, 1], &[3, 4, 1], p), vec![1, 1]);
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(DEFAULT_PRIME));
        assert!(!is_prime(DEFAULT_PRIME - 2));
        let ps: Vec<u64> = large_primes().take(3).collect();
        assert!(ps.windows(2).all(|w| w[0] > w[1]) && ps.iter().all(|&p| is_prime(p)));
    }
}
