//! Exact kernels by fraction-free (Bareiss) elimination.

use super::modp::{self, ModMap};
use super::Field;

/// Brings `m` to row echelon form in place with Bareiss' update
/// `m[i][j] <- (piv * m[i][j] - m[i][c] * m[r][j]) / prev_piv`.
///
/// Returns the pivot columns. Rows below the rank are zero afterwards.
pub fn bareiss_echelon<F: Field>(m: &mut [Vec<F>], ncols: usize) -> Vec<usize> {
    let nrows = m.len();
    let mut prev = F::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let prev_inv = prev.inv().expect("pivot is nonzero");
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = &pivot_row[c];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            if factor.is_zero() {
                if !prev.is_one() || !piv.is_one() {
                    for x in row.iter_mut().skip(c + 1) {
                        *x = piv.mul(x).mul(&prev_inv);
                    }
                }
                continue;
            }
            for j in (c + 1)..ncols {
                let v = piv.mul(&row[j]).sub(&factor.mul(&pivot_row[j]));
                row[j] = v.mul(&prev_inv);
            }
            row[c] = F::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// A basis of `{x : m x = 0}`. Each basis vector has a 1 in its own free
/// column and 0 in the other free columns.
pub fn kernel<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut m: Vec<Vec<F>> = rows.to_vec();
    let pivots = bareiss_echelon(&mut m, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![F::zero(); ncols];
            x[f] = F::one();
            for (k, &pc) in pivots.iter().enumerate().rev() {
                let mut acc = F::zero();
                for j in (pc + 1)..ncols {
                    if !x[j].is_zero() && !m[k][j].is_zero() {
                        acc = acc.add(&m[k][j].mul(&x[j]));
                    }
                }
                x[pc] = acc.neg().div(&m[k][pc]).expect("pivot is nonzero");
            }
            x
        })
        .collect()
}

/// True when some reduction map shows that `rows` has full column rank,
/// which proves the exact kernel is trivial. `false` means "unknown".
pub fn full_column_rank_mod_p<F: Field>(rows: &[Vec<F>], ncols: usize) -> bool {
    if rows.len() < ncols {
        return false;
    }
    for map in ModMap::candidates() {
        if let Some(reduced) = reduce_matrix(rows, &map) {
            return modp::rank(reduced, ncols, map.p) == ncols;
        }
    }
    false
}

fn reduce_matrix<F: Field>(rows: &[Vec<F>], map: &ModMap) -> Option<Vec<Vec<u64>>> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.reduce(map)).collect::<Option<Vec<u64>>>())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{RatFunc, Rational, UniPoly};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    fn apply<F: Field>(m: &[Vec<F>], x: &[F]) -> Vec<F> {
        m.iter()
            .map(|r| r.iter().zip(x).fold(F::zero(), |acc, (a, b)| acc.add(&a.mul(b))))
            .collect()
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let k = kernel(&m, 3);
        assert_eq!(k.len(), 1);
        assert!(apply(&m, &k[0]).iter().all(|x| x.is_zero()));
        assert!(!full_column_rank_mod_p(&m, 3));
    }

    #[test]
    fn full_rank_has_empty_kernel() {
        let m = mat(&[&[2, 1], &[1, 3], &[0, 5]]);
        assert!(kernel(&m, 2).is_empty());
        assert!(full_column_rank_mod_p(&m, 2));
    }

    #[test]
    fn kernel_with_skipped_columns() {
        let m = mat(&[&[0, 1, 1, 0], &[0, 2, 2, 1]]);
        let k = kernel(&m, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(apply(&m, v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn kernel_over_rational_functions() {
        let t = RatFunc::t();
        let one = RatFunc::from_i64(1);
        // rows (t, 1), (t^2, t): rank 1
        let m = vec![vec![t.clone(), one.clone()], vec![t.mul(&t), t.clone()]];
        let k = kernel(&m, 2);
        assert_eq!(k.len(), 1);
        assert!(apply(&m, &k[0]).iter().all(|x| x.is_zero()));
        let _ = UniPoly::<Rational>::zero();
    }
}
