use proptest::prelude::*;

use super::*;
use crate::algebra::Rational;

type P = UniPoly<Rational>;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn x6_plus_x() -> HyperCurve<Rational> {
    HyperCurve::new(P::from_i64s(&[0, 1, 0, 0, 0, 0, 1])).unwrap()
}

#[test]
fn genus_and_validation() {
    assert_eq!(x6_plus_x().genus(), 2);
    assert_eq!(
        HyperCurve::new(P::from_i64s(&[-1, 0, 1])).unwrap_err(),
        PellError::DegreeTooSmall { found: 2, min: 4 }
    );
}

#[test]
fn fibers_of_x6_plus_x() {
    let c = x6_plus_x();
    assert_eq!(
        c.points_above(&q(0)).unwrap(),
        Fiber::Ramified(CurvePoint::Finite { x: q(0), y: q(0) })
    );
    for (x, delta) in [(1, 2), (2, 66)] {
        let Fiber::Conjugate(plus, minus) = c.points_above(&q(x)).unwrap() else {
            panic!("D({x}) is not a square");
        };
        let root = QuadExt::sqrt_of(&q(delta)).unwrap();
        assert_eq!(plus, CurvePoint::Finite { x: QuadExt::base(q(x)), y: root.clone() });
        assert_eq!(minus, CurvePoint::Finite { x: QuadExt::base(q(x)), y: root.neg() });
        assert_eq!(involution(&plus), minus);
    }
    assert_eq!(involution(&CurvePoint::<Rational>::InfPlus), CurvePoint::InfMinus);
    let w = CurvePoint::Finite { x: q(0), y: q(0) };
    assert_eq!(involution(&w), w);
}

#[test]
fn divisor_of_x_minus_alpha() {
    // D(0) = 1 is a square on Y^2 = X^6 + X + 1
    let c = HyperCurve::new(P::from_i64s(&[1, 1, 0, 0, 0, 0, 1])).unwrap();
    let plus = CurvePoint::Finite { x: q(0), y: q(1) };
    let expected = c
        .point_divisor(&plus)
        .add(&c.point_divisor(&involution(&plus)))
        .sub(&Divisor::at_infinity(1, 1));
    let got = c.divisor_of_function(&P::x(), &P::zero(), &[]).unwrap();
    assert_eq!(got, expected);
    assert_eq!(got, c.divisor_of_x_minus(&q(0)));

    // Weierstrass point of X^6 + X
    let c = x6_plus_x();
    let w = CurvePoint::Finite { x: q(-1), y: q(0) };
    let got = c.divisor_of_function(&P::from_i64s(&[1, 1]), &P::zero(), &[]).unwrap();
    assert_eq!(got, c.point_divisor(&w).scale(2).sub(&Divisor::at_infinity(1, 1)));
    assert_eq!(got.coefficient_at(&w), 2);
}

#[test]
fn divisor_of_y() {
    let c = x6_plus_x();
    let got = c.divisor_of_function(&P::zero(), &P::one(), &[]).unwrap();
    let weier = Divisor::from_blocks(0, 0, vec![Block::Ramified { w: c.d().clone(), c: 1 }]);
    assert_eq!(got, weier.sub(&Divisor::at_infinity(3, 3)));
    for x in [0, -1] {
        assert_eq!(got.coefficient_at(&CurvePoint::Finite { x: q(x), y: q(0) }), 1);
    }
}

#[test]
fn divisor_of_pell_unit() {
    let c = x6_plus_x();
    let r = P::from_i64s(&[1, 0, 0, 0, 0, 2]);
    let s = P::from_i64s(&[0, 0, 2]);
    let got = c.divisor_of_function(&r, &s, &[]).unwrap();
    assert_eq!(got, Divisor::at_infinity(5, -5));
    assert_eq!(c.orders_at_infinity_by_series(&r, &s, 20), (Some(5), Some(-5)));
    // the conjugate unit lives on the other branch
    let conj = c.divisor_of_function(&r, &s.neg_ref(), &[]).unwrap();
    assert_eq!(conj, got.involution());
}

#[test]
fn denominators_are_subtracted() {
    let c = x6_plus_x();
    let h = P::from_i64s(&[-2, 1]);
    let got = c.divisor_of_function(&h.square(), &P::zero(), &[(h.clone(), 2)]).unwrap();
    assert!(got.is_zero());
}

#[test]
fn split_blocks_merge_canonically() {
    // Y^2 = X^4 - X^2 + 1 has D(0) = D(1) = 1
    let c = HyperCurve::new(P::from_i64s(&[1, 0, -1, 0, 1])).unwrap();
    let p0 = CurvePoint::Finite { x: q(0), y: q(1) };
    let p1 = CurvePoint::Finite { x: q(1), y: q(-1) };
    let a = c.point_divisor(&p0).add(&c.point_divisor(&p1));
    let b = c.point_divisor(&p1).add(&c.point_divisor(&p0));
    assert_eq!(a, b);
    assert_eq!(a.blocks().len(), 1);
    assert_eq!(a.coefficient_at(&p0), 1);
    assert_eq!(a.coefficient_at(&involution(&p0)), 0);
    assert_eq!(a.coefficient_at(&p1), 1);
    // adding the conjugates gives symmetric blocks
    let all = a.add(&a.involution());
    assert_eq!(all.blocks().len(), 1);
    assert!(matches!(all.blocks()[0], Block::Symmetric { c: 1, .. }));
    assert!(a.sub(&a).is_zero());
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = P> {
    prop::collection::vec(-3i64..=3, 0..=max_deg + 1).prop_map(|cs| P::from_i64s(&cs))
}

fn random_curve() -> impl Strategy<Value = HyperCurve<Rational>> {
    (2usize..=4)
        .prop_flat_map(|half| prop::collection::vec(-3i64..=3, 2 * half))
        .prop_filter_map("squarefree monic D", |mut cs| {
            cs.push(1);
            HyperCurve::new(P::from_i64s(&cs)).ok()
        })
}

/// Sum of the orders at the points above a rational `x` with `D(x) ≠ 0`.
fn fiber_order_sum(c: &HyperCurve<Rational>, div: &Divisor<Rational>, x: &Rational) -> i64 {
    match c.points_above(x).unwrap() {
        Fiber::Split(p, m) => div.coefficient_at(&p) + div.coefficient_at(&m),
        Fiber::Conjugate(..) => 2 * div.symmetric_coefficient_at(x).expect("conjugate points are symmetric"),
        Fiber::Ramified(_) => unreachable!(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn divisor_invariants(c in random_curve(), r in small_poly(6), s in small_poly(4),
                          r2 in small_poly(3), s2 in small_poly(2)) {
        prop_assume!(!(r.is_zero() && s.is_zero()) && !(r2.is_zero() && s2.is_zero()));
        let f = c.divisor_of_function(&r, &s, &[]).unwrap();
        prop_assert_eq!(f.degree(), 0);

        // ord_P(R + YS) = ord_{ιP}(R − YS)
        let conj = c.divisor_of_function(&r, &s.neg_ref(), &[]).unwrap();
        prop_assert_eq!(&conj, &f.involution());

        // multiplicativity
        let g = c.divisor_of_function(&r2, &s2, &[]).unwrap();
        let rr = r.mul_ref(&r2).add_ref(&c.d().mul_ref(&s.mul_ref(&s2)));
        let ss = r.mul_ref(&s2).add_ref(&r2.mul_ref(&s));
        prop_assume!(!(rr.is_zero() && ss.is_zero()));
        let fg = c.divisor_of_function(&rr, &ss, &[]).unwrap();
        prop_assert_eq!(fg, f.add(&g));

        // the two infinite orders agree with the series
        let (ip, im) = c.orders_at_infinity_by_series(&r, &s, 40);
        prop_assert_eq!((ip, im), (Some(f.inf_plus), Some(f.inf_minus)));

        // fiber sums equal the order of the norm
        let norm = r.square().sub_ref(&c.d().mul_ref(&s.square()));
        for x in Rational::roots(&norm) {
            if c.d().eval(&x).is_zero() {
                continue;
            }
            let mult = norm.multiplicity_of(&P::linear_root(&x)) as i64;
            prop_assert_eq!(fiber_order_sum(&c, &f, &x), mult);
        }
    }
}
