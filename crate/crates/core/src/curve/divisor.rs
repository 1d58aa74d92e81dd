//! Divisors on `Y² = D(X)` without factoring into irreducibles.
//!
//! The finite part is a list of blocks, each describing the coefficients at
//! all points above the roots of a squarefree `w(X)`:
//!
//! * `Ramified { w, c }`: `w | D`, coefficient `c` at every `(x, 0)`;
//! * `Split { w, v, plus, minus }`: `w` coprime to `D` and `v² ≡ D mod w`;
//!   coefficient `plus` at `(x, v(x))` and `minus` at `(x, −v(x))`;
//! * `Symmetric { w, c }`: `w` coprime to `D`, coefficient `c` at every
//!   point above a root of `w`. This also covers points whose `y` is not in
//!   the base field.
//!
//! After normalisation the `w` are monic and pairwise coprime, `Split`
//! blocks have `plus > minus`, and each coefficient pattern occurs in at most
//! one block (blocks with the same pattern are glued by CRT). The
//! representation is therefore canonical and `==` is divisor equality.

use std::cmp::Ordering;
use std::fmt;

use crate::algebra::{Field, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Block<F> {
    Ramified {
        w: UniPoly<F>,
        c: i64,
    },
    Split {
        w: UniPoly<F>,
        v: UniPoly<F>,
        plus: i64,
        minus: i64,
    },
    Symmetric {
        w: UniPoly<F>,
        c: i64,
    },
}

impl<F: Field> Block<F> {
    pub fn w(&self) -> &UniPoly<F> {
        match self {
            Block::Ramified { w, .. } | Block::Split { w, .. } | Block::Symmetric { w, .. } => w,
        }
    }

    fn key(&self) -> (u8, i64, i64) {
        match self {
            Block::Ramified { c, .. } => (0, *c, 0),
            Block::Split { plus, minus, .. } => (1, *plus, *minus),
            Block::Symmetric { c, .. } => (2, *c, 0),
        }
    }

    /// Same block on the roots of `h | w`.
    fn restrict(&self, h: &UniPoly<F>) -> Self {
        let h = h.monic();
        match self {
            Block::Ramified { c, .. } => Block::Ramified { w: h, c: *c },
            Block::Symmetric { c, .. } => Block::Symmetric { w: h, c: *c },
            Block::Split { v, plus, minus, .. } => Block::Split {
                v: v.rem(&h).expect("nonzero"),
                w: h,
                plus: *plus,
                minus: *minus,
            },
        }
    }

    fn map_coeffs(&self, f: impl Fn(i64) -> i64) -> Self {
        match self {
            Block::Ramified { w, c } => Block::Ramified {
                w: w.clone(),
                c: f(*c),
            },
            Block::Symmetric { w, c } => Block::Symmetric {
                w: w.clone(),
                c: f(*c),
            },
            Block::Split { w, v, plus, minus } => Block::Split {
                w: w.clone(),
                v: v.clone(),
                plus: f(*plus),
                minus: f(*minus),
            },
        }
    }

    /// Sign normalisation; `None` when all coefficients vanish.
    fn normalized(self) -> Option<Self> {
        match self {
            Block::Ramified { c: 0, .. } | Block::Symmetric { c: 0, .. } => None,
            Block::Split {
                w,
                v,
                plus,
                minus,
            } => match plus.cmp(&minus) {
                Ordering::Equal if plus == 0 => None,
                Ordering::Equal => Some(Block::Symmetric { w, c: plus }),
                Ordering::Greater => Some(Block::Split { w, v, plus, minus }),
                Ordering::Less => Some(Block::Split {
                    v: v.neg_ref().rem(&w).expect("nonzero"),
                    w,
                    plus: minus,
                    minus: plus,
                }),
            },
            b => Some(b),
        }
    }

    /// Sum of two blocks on the same `w`.
    fn combine(a: &Self, b: &Self) -> Vec<Self> {
        match (a, b) {
            (Block::Ramified { w, c: c1 }, Block::Ramified { c: c2, .. }) => {
                vec![Block::Ramified {
                    w: w.clone(),
                    c: c1 + c2,
                }]
            }
            (Block::Symmetric { w, c: c1 }, Block::Symmetric { c: c2, .. }) => {
                vec![Block::Symmetric {
                    w: w.clone(),
                    c: c1 + c2,
                }]
            }
            (Block::Symmetric { c, .. }, split @ Block::Split { .. })
            | (split @ Block::Split { .. }, Block::Symmetric { c, .. }) => {
                vec![split.map_coeffs(|x| x + c)]
            }
            (
                Block::Split {
                    w,
                    v: v1,
                    plus: p1,
                    minus: m1,
                },
                Block::Split {
                    v: v2,
                    plus: p2,
                    minus: m2,
                    ..
                },
            ) => {
                // roots where the branches agree, and where they are opposite
                let same = w.gcd(&v1.sub_ref(v2));
                let opposite = w.exact_div(&same).expect("gcd divides");
                let mut out = Vec::new();
                if !same.is_constant() {
                    out.push(Block::Split {
                        v: v1.rem(&same).expect("nonzero"),
                        w: same,
                        plus: p1 + p2,
                        minus: m1 + m2,
                    });
                }
                if !opposite.is_constant() {
                    let opposite = opposite.monic();
                    out.push(Block::Split {
                        v: v1.rem(&opposite).expect("nonzero"),
                        w: opposite,
                        plus: p1 + m2,
                        minus: m1 + p2,
                    });
                }
                out
            }
            _ => panic!("a ramified block shares roots with an unramified one"),
        }
    }

    /// Glues two blocks with the same pattern and coprime `w`.
    fn glue(a: Self, b: Self) -> Self {
        match (a, b) {
            (Block::Ramified { w: w1, c }, Block::Ramified { w: w2, .. }) => Block::Ramified {
                w: w1.mul_ref(&w2),
                c,
            },
            (Block::Symmetric { w: w1, c }, Block::Symmetric { w: w2, .. }) => {
                Block::Symmetric {
                    w: w1.mul_ref(&w2),
                    c,
                }
            }
            (
                Block::Split {
                    w: w1,
                    v: v1,
                    plus,
                    minus,
                },
                Block::Split { w: w2, v: v2, .. },
            ) => {
                let inv = w1.inv_mod(&w2).expect("coprime blocks");
                let k = v2.sub_ref(&v1).mul_ref(&inv).rem(&w2).expect("nonzero");
                let w = w1.mul_ref(&w2);
                let v = v1.add_ref(&w1.mul_ref(&k)).rem(&w).expect("nonzero");
                Block::Split { w, v, plus, minus }
            }
            _ => unreachable!("glue is only called on equal patterns"),
        }
    }

    fn involution(&self) -> Self {
        match self {
            Block::Split { w, v, plus, minus } => Block::Split {
                w: w.clone(),
                v: v.clone(),
                plus: *minus,
                minus: *plus,
            },
            b => b.clone(),
        }
    }

    fn degree(&self) -> i64 {
        let dw = self.w().deg_i64();
        match self {
            Block::Ramified { c, .. } => c * dw,
            Block::Symmetric { c, .. } => 2 * c * dw,
            Block::Split { plus, minus, .. } => (plus + minus) * dw,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor<F> {
    pub inf_plus: i64,
    pub inf_minus: i64,
    blocks: Vec<Block<F>>,
}

impl<F: Field> Default for Divisor<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Field> Divisor<F> {
    pub fn zero() -> Self {
        Divisor {
            inf_plus: 0,
            inf_minus: 0,
            blocks: Vec::new(),
        }
    }

    pub fn at_infinity(inf_plus: i64, inf_minus: i64) -> Self {
        Divisor {
            inf_plus,
            inf_minus,
            blocks: Vec::new(),
        }
    }

    /// Normalises arbitrary (possibly overlapping) blocks.
    pub fn from_blocks(inf_plus: i64, inf_minus: i64, blocks: Vec<Block<F>>) -> Self {
        Divisor {
            inf_plus,
            inf_minus,
            blocks: normalize(blocks),
        }
    }

    pub fn blocks(&self) -> &[Block<F>] {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.inf_plus == 0 && self.inf_minus == 0 && self.blocks.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.inf_plus + self.inf_minus + self.blocks.iter().map(Block::degree).sum::<i64>()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.extend(rhs.blocks.iter().cloned());
        Self::from_blocks(self.inf_plus + rhs.inf_plus, self.inf_minus + rhs.inf_minus, blocks)
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        let blocks = self.blocks.iter().map(|b| b.map_coeffs(|c| c * k)).collect();
        Self::from_blocks(self.inf_plus * k, self.inf_minus * k, blocks)
    }

    /// Image under `Y ↦ −Y`.
    pub fn involution(&self) -> Self {
        let blocks = self.blocks.iter().map(Block::involution).collect();
        Self::from_blocks(self.inf_minus, self.inf_plus, blocks)
    }

    /// Finite part with negative coefficients replaced by zero.
    pub fn finite_positive_part(&self) -> Self {
        let blocks = self.blocks.iter().map(|b| b.map_coeffs(|c| c.max(0))).collect();
        Self::from_blocks(0, 0, blocks)
    }

    /// Coefficient at a point whose coordinates lie in the base field.
    pub fn coefficient_at(&self, p: &super::CurvePoint<F>) -> i64 {
        match p {
            super::CurvePoint::InfPlus => self.inf_plus,
            super::CurvePoint::InfMinus => self.inf_minus,
            super::CurvePoint::Finite { x, y } => {
                for b in &self.blocks {
                    if !b.w().eval(x).is_zero() {
                        continue;
                    }
                    return match b {
                        Block::Ramified { c, .. } | Block::Symmetric { c, .. } => *c,
                        Block::Split { v, plus, minus, .. } => {
                            if v.eval(x) == *y {
                                *plus
                            } else {
                                *minus
                            }
                        }
                    };
                }
                0
            }
        }
    }

    /// Coefficient shared by both points above `x`, for blocks that treat
    /// the two points alike (used when `y` lies outside the base field).
    pub fn symmetric_coefficient_at(&self, x: &F) -> Option<i64> {
        for b in &self.blocks {
            if b.w().eval(x).is_zero() {
                return match b {
                    Block::Ramified { c, .. } | Block::Symmetric { c, .. } => Some(*c),
                    Block::Split { .. } => None,
                };
            }
        }
        Some(0)
    }

    /// `div(h)` for a nonzero polynomial `h(X)` on `Y² = d`.
    pub fn of_polynomial(h: &UniPoly<F>, d: &UniPoly<F>) -> Self {
        let deg = h.deg_i64();
        let mut blocks = Vec::new();
        for (f, i) in h.squarefree_decomposition() {
            let ram = f.gcd(d);
            let rest = f.exact_div(&ram).expect("gcd divides");
            if !ram.is_constant() {
                blocks.push(Block::Ramified {
                    w: ram,
                    c: 2 * i as i64,
                });
            }
            if !rest.is_constant() {
                blocks.push(Block::Symmetric {
                    w: rest.monic(),
                    c: i as i64,
                });
            }
        }
        Self::from_blocks(-deg, -deg, blocks)
    }

    /// The same divisor on the base-changed curve.
    pub fn embed<G: crate::algebra::Embed<F>>(&self) -> Divisor<G> {
        let blocks = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::Ramified { w, c } => Block::Ramified {
                    w: w.embed(),
                    c: *c,
                },
                Block::Symmetric { w, c } => Block::Symmetric {
                    w: w.embed(),
                    c: *c,
                },
                Block::Split { w, v, plus, minus } => Block::Split {
                    w: w.embed(),
                    v: v.embed(),
                    plus: *plus,
                    minus: *minus,
                },
            })
            .collect();
        Divisor {
            inf_plus: self.inf_plus,
            inf_minus: self.inf_minus,
            blocks,
        }
    }
}

fn normalize<F: Field>(blocks: Vec<Block<F>>) -> Vec<Block<F>> {
    // coprime refinement
    let mut done: Vec<Block<F>> = Vec::new();
    for b in blocks {
        let mut pending = vec![b.restrict(b.w())];
        while let Some(cur) = pending.pop() {
            if cur.w().is_constant() {
                continue;
            }
            let hit = done
                .iter()
                .enumerate()
                .find_map(|(i, d)| {
                    let g = cur.w().gcd(d.w());
                    (!g.is_constant()).then_some((i, g))
                });
            let Some((i, g)) = hit else {
                done.push(cur);
                continue;
            };
            let other = done.swap_remove(i);
            let other_rest = other.w().exact_div(&g).expect("gcd divides");
            if !other_rest.is_constant() {
                done.push(other.restrict(&other_rest));
            }
            done.extend(Block::combine(&cur.restrict(&g), &other.restrict(&g)));
            let cur_rest = cur.w().exact_div(&g).expect("gcd divides");
            if !cur_rest.is_constant() {
                pending.push(cur.restrict(&cur_rest));
            }
        }
    }
    // signs, then one block per pattern
    let mut normal: Vec<Block<F>> = done.into_iter().filter_map(Block::normalized).collect();
    normal.sort_by_key(Block::key);
    let mut out: Vec<Block<F>> = Vec::with_capacity(normal.len());
    for b in normal {
        match out.last() {
            Some(last) if last.key() == b.key() => {
                let last = out.pop().expect("nonempty");
                out.push(Block::glue(last, b));
            }
            _ => out.push(b),
        }
    }
    out
}

impl<F: Field> fmt::Display for Block<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Ramified { w, c } => write!(f, "{c}*[{w}, Y=0]"),
            Block::Symmetric { w, c } => write!(f, "{c}*[{w}, Y=+-]"),
            Block::Split { w, v, plus, minus } => {
                write!(f, "{plus}*[{w}, Y={v}]")?;
                if *minus != 0 {
                    write!(f, " + {minus}*[{w}, Y=-({v})]")?;
                }
                Ok(())
            }
        }
    }
}

impl<F: Field> fmt::Display for Divisor<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.inf_plus != 0 {
            parts.push(format!("{}*inf+", self.inf_plus));
        }
        if self.inf_minus != 0 {
            parts.push(format!("{}*inf-", self.inf_minus));
        }
        parts.extend(self.blocks.iter().map(|b| b.to_string()));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
