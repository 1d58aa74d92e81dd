use proptest::prelude::*;

use super::*;
use crate::algebra::Rational;
use crate::curve::CurvePoint;

type P = UniPoly<Rational>;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn x6_plus_x() -> HyperCurve<Rational> {
    HyperCurve::new(P::from_i64s(&[0, 1, 0, 0, 0, 0, 1])).unwrap()
}

fn q_class() -> Divisor<Rational> {
    Divisor::at_infinity(1, -1)
}

#[test]
fn x_minus_alpha_is_principal() {
    let c = HyperCurve::new(P::from_i64s(&[1, 1, 0, 0, 0, 0, 1])).unwrap();
    let delta = c.divisor_of_x_minus(&q(0));
    let Principality::Principal(cert) = is_principal(&c, &delta).unwrap() else {
        panic!("div(X) is principal");
    };
    assert_eq!(cert.r, P::x());
    assert!(cert.s.is_zero());
    assert_eq!(cert.divisor, delta);
}

#[test]
fn pell_unit_recovered() {
    let c = x6_plus_x();
    for k in 1..5 {
        assert_eq!(is_principal(&c, &q_class().scale(k)).unwrap(), Principality::NotPrincipal);
    }
    let Principality::Principal(cert) = is_principal(&c, &q_class().scale(5)).unwrap() else {
        panic!("5(inf+ - inf-) is principal");
    };
    // (2X^5 + 1 + 2X^2 Y) / 2
    let half = Rational::new(1.into(), 2.into());
    assert_eq!(cert.r, P::from_coeffs(vec![half, q(0), q(0), q(0), q(0), q(1)]));
    assert_eq!(cert.s, P::from_i64s(&[0, 0, 1]));
    assert!(cert.denominators.is_empty());
}

#[test]
fn order_of_infinity_class() {
    let c = x6_plus_x();
    let ClassOrder::Order { order, .. } = order_of_class(&c, &q_class(), 10).unwrap() else {
        panic!("torsion");
    };
    assert_eq!(order, 5);
    assert_eq!(order_of_class(&c, &q_class(), 4).unwrap(), ClassOrder::NotTorsionWithin(4));
    assert_eq!(
        order_of_class(&c, &Divisor::at_infinity(1, 0), 3).unwrap_err(),
        PellError::NotDegreeZero(1)
    );
}

#[test]
fn negative_finite_parts_are_cleared() {
    let c = x6_plus_x();
    // div(Y / X^3) has a pole of order 1 at the Weierstrass point 0
    let f = c.divisor_of_function(&P::zero(), &P::one(), &[(P::x(), 3)]).unwrap();
    let Principality::Principal(cert) = is_principal(&c, &f).unwrap() else {
        panic!("principal by construction");
    };
    assert_eq!(cert.divisor, f);
    // P − ιP for a rational split point
    let c = HyperCurve::new(P::from_i64s(&[1, 1, 0, 0, 0, 0, 1])).unwrap();
    let p = CurvePoint::Finite { x: q(0), y: q(1) };
    let delta = c.point_divisor(&p).sub(&c.point_divisor(&crate::curve::involution(&p)));
    assert!(!is_principal(&c, &delta).unwrap().is_principal());
}

#[test]
fn lattices() {
    let c = x6_plus_x();
    let l = relation_lattice(&c, &[q_class()], &[10], DEFAULT_BOX_CAP).unwrap();
    assert_eq!(l.generators, vec![vec![5]]);
    let l = relation_lattice(&c, &[Divisor::zero()], &[3], DEFAULT_BOX_CAP).unwrap();
    assert_eq!(l.generators, vec![vec![1]]);
    let c1 = HyperCurve::new(P::from_i64s(&[1, 1, 0, 0, 0, 0, 1])).unwrap();
    let l = relation_lattice(&c1, &[q_class()], &[10], DEFAULT_BOX_CAP).unwrap();
    assert!(l.generators.is_empty());
    assert!(matches!(
        relation_lattice(&c, &[q_class(), q_class()], &[1000, 1000], 1000),
        Err(PellError::BudgetExceeded(_))
    ));
    // two copies of the same class: (1, -1) and (5, 0) generate
    let l = relation_lattice(&c, &[q_class(), q_class()], &[6, 6], DEFAULT_BOX_CAP).unwrap();
    assert_eq!(l.generators, vec![vec![1, 4], vec![0, 5]]);
}

#[test]
fn hnf_examples() {
    assert_eq!(hermite_normal_form(vec![vec![4], vec![6]]), vec![vec![2]]);
    assert_eq!(
        hermite_normal_form(vec![vec![2, 3], vec![4, 1], vec![0, 0]]),
        vec![vec![2, 3], vec![0, 5]]
    );
    assert!(hermite_normal_form(vec![]).is_empty());
    assert_eq!(half_box(&[1, 1]).len(), 4);
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = P> {
    prop::collection::vec(-3i64..=3, 0..=max_deg + 1).prop_map(|cs| P::from_i64s(&cs))
}

fn random_curve() -> impl Strategy<Value = HyperCurve<Rational>> {
    (2usize..=3)
        .prop_flat_map(|half| prop::collection::vec(-3i64..=3, 2 * half))
        .prop_filter_map("squarefree monic D", |mut cs| {
            cs.push(1);
            HyperCurve::new(P::from_i64s(&cs)).ok()
        })
}

fn lattice_contains(gens: &[Vec<i64>], v: &[i64]) -> bool {
    // gens is in echelon form
    let mut v = v.to_vec();
    for g in gens {
        let pc = g.iter().position(|&x| x != 0).unwrap();
        if v[pc] % g[pc] != 0 {
            return false;
        }
        let k = v[pc] / g[pc];
        v.iter_mut().zip(g).for_each(|(a, b)| *a -= k * b);
    }
    v.iter().all(|&x| x == 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn principal_divisors_round_trip(c in random_curve(), r in small_poly(4), s in small_poly(2),
                                     h in small_poly(2), k in 0u32..=2) {
        prop_assume!(!(r.is_zero() && s.is_zero()) && !h.is_zero());
        let den = if h.is_constant() { vec![] } else { vec![(h.clone(), k)] };
        let delta = c.divisor_of_function(&r, &s, &den).unwrap();
        let Principality::Principal(cert) = is_principal(&c, &delta).unwrap() else {
            return Err(TestCaseError::fail("principal divisor reported non-principal"));
        };
        prop_assert_eq!(&cert.divisor, &delta);
        // the function is unique up to a constant: f·H' = λ f'·H
        let big_h = den.iter().fold(P::one(), |acc, (p, e)| acc.mul_ref(&p.pow(*e)));
        let big_h2 = cert.denominators.iter().fold(P::one(), |acc, (p, e)| acc.mul_ref(&p.pow(*e)));
        let (a1, b1) = (r.mul_ref(&big_h2), s.mul_ref(&big_h2));
        let (a2, b2) = (cert.r.mul_ref(&big_h), cert.s.mul_ref(&big_h));
        let lhs = a1.mul_ref(&b2);
        let rhs = a2.mul_ref(&b1);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn completeness_against_known_torsion(r in small_poly(4), s in small_poly(2), k in -6i64..=6) {
        prop_assume!(!(r.is_zero() && s.is_zero()));
        let c = x6_plus_x();
        let delta = c.divisor_of_function(&r, &s, &[]).unwrap().add(&q_class().scale(k));
        prop_assert_eq!(is_principal(&c, &delta).unwrap().is_principal(), k % 5 == 0);
    }

    #[test]
    fn hnf_spans_input(rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 1..5)) {
        let h = hermite_normal_form(rows.clone());
        for r in &rows {
            prop_assert!(lattice_contains(&h, r));
        }
        // echelon with positive pivots
        let mut last = None;
        for g in &h {
            let pc = g.iter().position(|&x| x != 0).unwrap();
            prop_assert!(g[pc] > 0);
            prop_assert!(last.is_none_or(|l| pc > l));
            last = Some(pc);
        }
    }
}
