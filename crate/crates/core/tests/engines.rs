//! End-to-end checks through the public API.

use hyperpell::bridge::{
    build_points, default_l_bound, reduce_common_roots, solve_almost_pell_via_jacobian, FactoredTarget, Witness,
};
use hyperpell::cfrac::{expand, solve_pell, PellReport};
use hyperpell::curve::{Divisor, HyperCurve};
use hyperpell::jacobian::{order_of_class, relation_lattice, ClassOrder, DEFAULT_BOX_CAP};
use hyperpell::scanner::{scan, Family, ScanBudgets, ScanStatus};
use hyperpell::{Field, RatFunc, Rational, UniPoly};
use proptest::prelude::*;

type P = UniPoly<Rational>;

fn qq(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `D = X⁶ + X` and `D = X(X⁷ − X³ − 1)`.
fn sextic() -> P {
    P::from_i64s(&[0, 1, 0, 0, 0, 0, 1])
}

fn octic() -> P {
    P::from_i64s(&[0, -1, 0, 0, -1, 0, 0, 0, 1])
}

#[test]
fn pell_degree_is_the_order_at_infinity() {
    // the minimal Pell solution has degree equal to the order of [∞⁺ − ∞⁻]
    for d in [sextic(), P::from_i64s(&[1, 0, 0, 0, 1]).add_ref(&P::from_i64s(&[0, 2]))] {
        let curve = HyperCurve::new(d.clone()).unwrap();
        let order = match order_of_class(&curve, &Divisor::at_infinity(1, -1), 12).unwrap() {
            ClassOrder::Order { order, .. } => Some(order as usize),
            ClassOrder::NotTorsionWithin(_) => None,
        };
        let pell = match solve_pell(&d, 24).unwrap() {
            PellReport::Pellian { a, .. } => a.degree(),
            PellReport::NotPellianWithin(_) => None,
        };
        assert_eq!(order, pell, "D = {}", d.fmt_var("X"));
    }
}

#[test]
fn octic_relation_lattice() {
    let curve = HyperCurve::new(octic()).unwrap();
    let alpha = qq(-1, 4);
    let target = FactoredTarget::new(&P::from_i64s(&[1, 4]), curve.d()).unwrap();
    let setup = build_points(&curve, &target).unwrap();
    let rel = setup.solution_to_relation(&P::from_i64s(&[-1, 0, 0, 0, 2]), &P::from_i64s(&[2])).unwrap();
    assert_eq!(rel.g.len(), 1);
    assert_eq!(rel.g[0].abs(), 1);

    let p = curve.point_divisor(&match curve.points_above(&alpha).unwrap() {
        hyperpell::curve::Fiber::Split(plus, _) => plus,
        other => panic!("{other:?}"),
    });
    let classes = [p.sub(&Divisor::at_infinity(0, 1)), Divisor::at_infinity(1, -1)];
    let lattice = relation_lattice(&curve, &classes, &[3, 3], DEFAULT_BOX_CAP).unwrap();
    assert_eq!(lattice.generators.len(), 1);
    let g = &lattice.generators[0];
    assert_eq!(g[0], 1);
    assert_eq!(g[1].abs(), 3);
}

#[test]
fn jacobian_solves_the_octic_example() {
    let curve = HyperCurve::new(octic()).unwrap();
    let f = P::from_i64s(&[1, 4]);
    let target = FactoredTarget::new(&f, curve.d()).unwrap();
    let report = solve_almost_pell_via_jacobian(&curve, &target, default_l_bound(4)).unwrap();
    let hyperpell::bridge::JacobianReport::Solved { witness: Witness::Base(w), .. } = report else {
        panic!("{report:?}");
    };
    assert!(w.verify(curve.d()));
    assert_eq!(w.rhs(), f);
}

#[test]
fn common_roots_are_reduced() {
    // X² divides F and X divides D: solutions of F/X² lift
    let d = octic();
    let f = P::from_i64s(&[0, 0, 1, 4]);
    let (reduced, removed) = reduce_common_roots(&d, &f);
    assert_eq!(reduced, P::from_i64s(&[1, 4]));
    assert_eq!(removed, vec![(P::x(), 1)]);
}

#[test]
fn scan_witnesses_verify() {
    let t = UniPoly::constant(RatFunc::t());
    let d = sextic().embed::<RatFunc>().add_ref(&t);
    let family = Family::new(d, UniPoly::one()).unwrap();
    let report = scan(&family, 2, ScanBudgets { max_steps: 24, l_bound: None });
    assert!(matches!(report.generic, Some(hyperpell::cfrac::NonSolvability::Proven { .. })));
    // t₀ = 0 is X⁶ + X itself
    let zero = report.entries.iter().find(|e| e.t0 == Rational::zero()).unwrap();
    assert!(matches!(zero.status, ScanStatus::Solvable { .. }));
    for e in &report.entries {
        if let ScanStatus::Solvable { witness, .. } = &e.status {
            assert!(witness.verify(e.d0.as_ref().unwrap(), e.f0.as_ref().unwrap()));
        }
    }
    // height order
    let heights: Vec<_> = report.entries.iter().map(|e| hyperpell::algebra::rational::height(&e.t0)).collect();
    assert!(heights.windows(2).all(|w| w[0] <= w[1]));
}

fn monic(deg: usize) -> impl Strategy<Value = P> {
    prop::collection::vec(-3i64..=3, deg).prop_map(|mut cs| {
        cs.push(1);
        P::from_i64s(&cs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Convergent norms obey `pₙ² − D qₙ² = (−1)ⁿ⁺¹ Qₙ₊₁` and stay below
    /// degree `d`.
    #[test]
    fn convergent_norms_are_small(d in prop_oneof![monic(4), monic(6)]) {
        prop_assume!(d.is_squarefree().unwrap_or(false));
        let half = d.degree().unwrap() / 2;
        let e = expand(&d, 8).unwrap();
        for s in &e.steps {
            let n = s.p.square().sub_ref(&d.mul_ref(&s.q.square()));
            prop_assert_eq!(&n, &s.norm);
            prop_assert!(n.degree().unwrap() < half);
        }
    }
}
