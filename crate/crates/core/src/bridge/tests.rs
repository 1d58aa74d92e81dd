use proptest::prelude::*;

use super::*;
use crate::algebra::{RatFunc, Rational};

type P = UniPoly<Rational>;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn qq(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn sextic() -> HyperCurve<Rational> {
    HyperCurve::new(P::from_i64s(&[0, 1, 0, 0, 0, 0, 1])).unwrap()
}

/// X(X^7 - X^3 - 1)
fn octic() -> HyperCurve<Rational> {
    HyperCurve::new(P::from_i64s(&[0, -1, 0, 0, -1, 0, 0, 0, 1])).unwrap()
}

fn four_x_plus_one() -> P {
    P::from_i64s(&[1, 4])
}

#[test]
fn reduce_common_roots_examples() {
    let d = octic().d().clone();
    assert_eq!(reduce_common_roots(&d, &four_x_plus_one()), (four_x_plus_one(), vec![]));
    // X^2 (X + 5) and X^3 (X + 5)
    let h = P::from_i64s(&[5, 1]);
    let (f, removed) = reduce_common_roots(&d, &h.mul_ref(&P::x().square()));
    assert_eq!(f, h);
    assert_eq!(removed, vec![(P::x(), 1)]);
    let (f, _) = reduce_common_roots(&d, &h.mul_ref(&P::x().pow(3)));
    assert_eq!(f, h.mul_ref(&P::x()));
    let (f, removed) = reduce_common_roots(&d, &h.mul_ref(&P::x().pow(5)));
    assert_eq!(f, h.mul_ref(&P::x()));
    assert_eq!(removed, vec![(P::x(), 2)]);
}

#[test]
fn factored_targets() {
    let c = octic();
    let t = FactoredTarget::new(&four_x_plus_one(), c.d()).unwrap();
    assert_eq!(t.beta, q(4));
    assert_eq!(t.factors, vec![(qq(-1, 4), 1)]);
    assert_eq!(t.split_rank, 1);
    assert_eq!(t.to_poly(), four_x_plus_one());

    let t = FactoredTarget::new(&P::from_i64s(&[3]), c.d()).unwrap();
    assert!(t.factors.is_empty());

    // X (X - 2): the Weierstrass root 0 goes last
    let t = FactoredTarget::new(&P::from_i64s(&[0, -2, 1]), c.d()).unwrap();
    assert_eq!(t.factors, vec![(q(2), 1), (q(0), 1)]);
    assert_eq!(t.split_rank, 1);

    assert_eq!(
        FactoredTarget::new(&P::from_i64s(&[-2, 0, 1]), c.d()).unwrap_err(),
        PellError::NonSplitTarget
    );
}

#[test]
fn points_of_the_octic() {
    let c = octic();
    let t = FactoredTarget::new(&four_x_plus_one(), c.d()).unwrap();
    let s = build_points(&c, &t).unwrap();
    // D(-1/4) = (127/256)^2
    assert_eq!(s.plus_points, vec![CurvePoint::Finite { x: qq(-1, 4), y: qq(127, 256) }]);
    assert_eq!(s.q, Divisor::at_infinity(1, -1));
    assert!(s.points.iter().all(|p| p.degree() == 0));
    assert!(s.check_conjugation_identities().unwrap());

    let w = FactoredTarget::new(&P::from_i64s(&[0, 3]), c.d()).unwrap();
    let s = build_points(&c, &w).unwrap();
    assert_eq!(s.plus_points, vec![CurvePoint::Finite { x: q(0), y: q(0) }]);
    assert!(s.check_conjugation_identities().unwrap());
}

#[test]
fn octic_solution_round_trip() {
    let c = octic();
    let t = FactoredTarget::new(&four_x_plus_one(), c.d()).unwrap();
    let s = build_points(&c, &t).unwrap();
    let a = P::from_i64s(&[-1, 0, 0, 0, 2]);
    let b = P::from_i64s(&[2]);
    let rel = s.solution_to_relation(&a, &b).unwrap();
    assert_eq!(rel.g[0].abs(), 1);
    let w = s.relation_to_solution(&rel).unwrap();
    assert!(w.verify(c.d()));
    assert_eq!(w.exponents, vec![1]);
    // unique up to a constant: A_w / B_w = A / B
    assert_eq!(w.a.mul_ref(&b), a.mul_ref(&w.b));

    assert_eq!(s.solution_to_relation(&a, &P::zero()).unwrap_err(), PellError::TrivialSolution);
    assert_eq!(s.solution_to_relation(&a.add_ref(&P::one()), &b).unwrap_err(), PellError::NotASolution);
}

#[test]
fn pell_relation_on_the_sextic() {
    let c = sextic();
    let t = FactoredTarget::new(&P::from_i64s(&[4]), c.d()).unwrap();
    let s = build_points(&c, &t).unwrap();
    let rel = s
        .solution_to_relation(&P::from_i64s(&[2, 0, 0, 0, 0, 4]), &P::from_i64s(&[0, 0, 4]))
        .unwrap();
    assert!(rel.g.is_empty());
    assert_eq!(rel.l.abs(), 5);

    let w = s.relation_to_solution(&RelationVector { g: vec![], l: 5 }).unwrap();
    assert!(w.verify(c.d()));
    assert_eq!(w.a.degree(), Some(5));
}

#[test]
fn weierstrass_parity_gate() {
    let c = octic();
    let t = FactoredTarget::new(&P::from_i64s(&[0, 1]), c.d()).unwrap();
    let s = build_points(&c, &t).unwrap();
    assert_eq!(
        s.relation_to_solution(&RelationVector { g: vec![2], l: 1 }).unwrap_err(),
        PellError::ParityViolation
    );
}

#[test]
fn jacobian_solver_examples() {
    let c = octic();
    let t = FactoredTarget::new(&four_x_plus_one(), c.d()).unwrap();
    let JacobianReport::Solved { witness: Witness::Base(w), .. } = solve_almost_pell_via_jacobian(&c, &t, 8).unwrap()
    else {
        panic!("the octic is solvable");
    };
    assert!(w.verify(c.d()));
    assert_eq!(w.beta, q(4));
    assert_eq!(w.a.square(), P::from_i64s(&[-1, 0, 0, 0, 2]).square());
    assert_eq!(w.b.square(), P::from_i64s(&[4]));

    let c = sextic();
    let t = FactoredTarget::new(&P::one(), c.d()).unwrap();
    let JacobianReport::Solved { witness: Witness::Base(w), relation } =
        solve_almost_pell_via_jacobian(&c, &t, 6).unwrap()
    else {
        panic!("X^6 + X is Pellian");
    };
    assert_eq!(relation.l, 5);
    assert_eq!(w.a.degree(), Some(5));
    assert!(w.verify(c.d()) && w.beta == q(1));

    // D(-1/4) = 3073/4096 on X^6 + X + 1 is not a square: extension search
    let c = HyperCurve::new(P::from_i64s(&[1, 1, 0, 0, 0, 0, 1])).unwrap();
    let t = FactoredTarget::new(&four_x_plus_one(), c.d()).unwrap();
    assert_eq!(extension_needed(&c, &t).unwrap(), Some(qq(3073, 4096)));
    assert_eq!(solve_almost_pell_via_jacobian(&c, &t, 6).unwrap(), JacobianReport::NotWithin(6));
}

#[test]
fn solvable_exponent_sets() {
    let c = sextic();
    assert_eq!(solvable_exponents(&c, &[], &[], 6, 100).unwrap(), vec![Vec::<u32>::new()]);
    let c = octic();
    let got = solvable_exponents(&c, &[qq(-1, 4)], &[2], 8, 100).unwrap();
    assert!(got.contains(&vec![1]));
}

#[test]
fn generic_family_has_no_small_relation() {
    // (X - t)(X^7 - X^3 - 1) over Q(t)
    let t = RatFunc::t();
    let minus_t = UniPoly::from_coeffs(vec![t.neg(), RatFunc::one()]);
    let septic: UniPoly<RatFunc> = P::from_i64s(&[-1, 0, 0, -1, 0, 0, 0, 1]).embed();
    let c = HyperCurve::new(minus_t.mul_ref(&septic)).unwrap();
    let root = RatFunc::from_rational(&qq(-1, 4));
    let got = solvable_exponents(&c, &[root], &[2], 8, 100).unwrap();
    assert!(got.is_empty(), "{got:?}");
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = P> {
    prop::collection::vec(-3i64..=3, 0..=max_deg + 1).prop_map(|cs| P::from_i64s(&cs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// Builds a solvable target from a random (A, B) and checks the round trip.
    #[test]
    fn relation_round_trip(half in 2usize..=4, dc in prop::collection::vec(-2i64..=2, 8),
                           a in small_poly(4), b in small_poly(2)) {
        let mut cs: Vec<i64> = dc[..2 * half].to_vec();
        cs.push(1);
        let Ok(c) = HyperCurve::new(P::from_i64s(&cs)) else { return Ok(()) };
        prop_assume!(!b.is_zero());
        let f = a.square().sub_ref(&c.d().mul_ref(&b.square()));
        prop_assume!(!f.is_zero());
        let Ok(t) = FactoredTarget::new(&f, c.d()) else { return Ok(()) };
        prop_assume!(reduce_common_roots(c.d(), &f).0 == f);
        prop_assume!(extension_needed(&c, &t).unwrap().is_none());
        let s = build_points(&c, &t).unwrap();
        let rel = s.solution_to_relation(&a, &b).unwrap();
        for (g, (_, ai)) in rel.g.iter().zip(&t.factors) {
            prop_assert!(g.unsigned_abs() <= *ai as u64);
            prop_assert_eq!((g - *ai as i64).rem_euclid(2), 0);
        }
        let w = s.relation_to_solution(&rel).unwrap();
        prop_assert!(w.verify(c.d()));
        let back = s.relation_to_solution(&rel.neg()).unwrap();
        prop_assert!(back.verify(c.d()));
        // the witness's own relation is the input up to sign
        let padded = s.pad(w);
        let rel2 = s.solution_to_relation(&padded.a, &padded.b);
        if padded.beta == t.beta {
            let rel2 = rel2.unwrap();
            prop_assert!(rel2 == rel || rel2 == rel.neg());
        }
    }
}
