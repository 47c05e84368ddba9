use hecke_core::exact_algebra::{int, ratio, Polynomial, RationalFunction};
use hecke_core::kz_blocks::*;
use hecke_core::weyl_calculus::{DiffOp, TwistedFunction};
use hecke_core::Error;

fn setup(n: usize) -> BlockSetup {
    BlockSetup::new(&WeightParams::symbolic(n)).unwrap()
}

fn one(s: &BlockSetup) -> TwistedFunction {
    TwistedFunction::from_rational(RationalFunction::one(&s.table))
}

#[test]
fn realization_examples() {
    let s = setup(1);
    let w = s.point_weight(0);
    assert_eq!(rho(Generator::E, &w, s.x(0)), DiffOp::partial(&s.table, s.x(0)));
    let h1 = rho(Generator::H, &w, s.x(0)).apply(&one(&s)).unwrap();
    assert_eq!(h1, TwistedFunction::from_rational(w.clone()));
    let e = rho(Generator::E, &w, s.x(0));
    let f = rho(Generator::F, &w, s.x(0));
    assert_eq!(e.commutator(&f), rho(Generator::H, &w, s.x(0)));
}

#[test]
fn ward_operator_examples() {
    let s = setup(1);
    let ops = ward_ops(&[(s.x(0), s.point_weight(0))]).unwrap();
    let f1 = ops[2].apply(&one(&s)).unwrap();
    assert_eq!(f1, TwistedFunction::from_rational(&s.point_weight(0) * &s.rf(s.x(0))));

    let s = BlockSetup::new(&WeightParams {
        weights: vec![Param::Symbolic, Param::SameAs(0)],
        level: Param::Symbolic,
    })
    .unwrap();
    let pts = [(s.x(0), s.point_weight(0)), (s.x(1), s.point_weight(1))];
    let ops = ward_ops(&pts).unwrap();
    let d = &s.poly(s.x(0)) - &s.poly(s.x(1));
    let lin = TwistedFunction::from_rational(RationalFunction::from_poly(d.clone()));
    assert!(ops[0].apply(&lin).unwrap().is_zero());
    let pow = TwistedFunction::power(&d, &s.weights[0].as_polynomial().unwrap().scale(&int(2))).unwrap();
    assert!(ops[1].apply(&pow).unwrap().is_zero());
    assert!(ops[2].apply(&pow).unwrap().is_zero());
    assert!(ward_ops(&[]).is_err());
}

#[test]
fn extended_ward_operator_examples() {
    let s = setup(1);
    let [e, h, te] = ward_ops_extended(&s, &s.extra_weight());
    let d = &s.poly(s.x(0)) - &s.poly(s.x(1));
    let lin = TwistedFunction::from_rational(RationalFunction::from_poly(d));
    assert!(e.apply(&lin).unwrap().is_zero());
    let dt = &s.rf(s.t(0)) - &s.rf(s.t(1));
    assert_eq!(te.apply(&lin).unwrap(), TwistedFunction::from_rational(dt));
    // the constant term is 2 chi1 + k - k
    assert_eq!(h.apply(&one(&s)).unwrap(), TwistedFunction::from_rational(s.point_weight(0)));
}

#[test]
fn casimir_symmetry_and_invariance() {
    let s = setup(3);
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let (wi, wj) = (s.point_weight(i), s.point_weight(j));
            let oij = casimir_omega(s.x(i), &wi, s.x(j), &wj).unwrap();
            let oji = casimir_omega(s.x(j), &wj, s.x(i), &wi).unwrap();
            assert_eq!(oij, oji);
            for g in [Generator::E, Generator::H, Generator::F] {
                let diag = rho(g, &wi, s.x(i)).add(&rho(g, &wj, s.x(j)));
                assert!(oij.commutator(&diag).is_zero(), "{i} {j} {g:?}");
            }
        }
    }
    assert!(casimir_omega(s.x(0), &s.point_weight(0), s.x(0), &s.point_weight(0)).is_err());
}

#[test]
fn casimir_on_constants_and_powers() {
    let s = setup(2);
    let (w1, w2) = (s.point_weight(0), s.point_weight(1));
    let omega = casimir_omega(s.x(0), &w1, s.x(1), &w2).unwrap();
    let c = omega.apply(&one(&s)).unwrap();
    // (1/2)(2 chi1)(2 chi2)
    assert_eq!(c, TwistedFunction::from_rational(&(&s.weights[0] * &s.weights[1]) * &RationalFunction::from_int(&s.table, 2)));

    // on (x1 - x2)^(2 chi) with equal weights the eigenvalue is -2 chi (chi + 1)
    let s = BlockSetup::new(&WeightParams {
        weights: vec![Param::Symbolic, Param::SameAs(0)],
        level: Param::Symbolic,
    })
    .unwrap();
    let w = s.point_weight(0);
    let chi = s.weights[0].clone();
    let omega = casimir_omega(s.x(0), &w, s.x(1), &w).unwrap();
    let d = &s.poly(s.x(0)) - &s.poly(s.x(1));
    let f = TwistedFunction::power(&d, w.as_polynomial().unwrap()).unwrap();
    let ratio_found = omega.apply(&f).unwrap().ratio_to(&f).unwrap();
    let expected = &(&chi * &(&chi + &RationalFunction::one(&s.table))) * &RationalFunction::from_int(&s.table, -2);
    assert_eq!(ratio_found, expected);
}

#[test]
fn closed_form_casimir_disagrees_with_the_defining_sum() {
    let s = setup(2);
    let (c1, c2) = (s.weights[0].clone(), s.weights[1].clone());
    let derived = casimir_omega(s.x(0), &s.point_weight(0), s.x(1), &s.point_weight(1)).unwrap();
    let closed = closed_form_omega(s.x(0), &c1, s.x(1), &c2);
    assert_ne!(derived, closed);
}

#[test]
fn kz_operator_examples() {
    let s = setup(1);
    let pts = [(s.x(0), s.t(0), s.point_weight(0))];
    let shifted = &s.level + &RationalFunction::from_int(&s.table, 2);
    assert_eq!(kz_op(0, &pts, &s.level).unwrap(), DiffOp::partial(&s.table, s.t(0)).scale(&shifted));
    assert!(kz_op(1, &pts, &s.level).is_err());

    // N = 2, equal weights, on (t1 - t2)^g (x1 - x2)^(2 chi)
    let s = BlockSetup::new(&WeightParams {
        weights: vec![Param::Symbolic, Param::SameAs(0)],
        level: Param::Symbolic,
    })
    .unwrap();
    let w = s.point_weight(0);
    let pts: Vec<_> = (0..2).map(|a| (s.x(a), s.t(a), w.clone())).collect();
    let gamma = s.poly(s.table.index_of("chi2").unwrap());
    let dx = &s.poly(s.x(0)) - &s.poly(s.x(1));
    let dt = &s.poly(s.t(0)) - &s.poly(s.t(1));
    let fx = TwistedFunction::power(&dx, w.as_polynomial().unwrap()).unwrap();
    let f = TwistedFunction::power(&dt, &gamma).unwrap().try_mul(&fx).unwrap();
    let omega = casimir_omega(s.x(0), &w, s.x(1), &w).unwrap();
    let c = omega.apply(&fx).unwrap().ratio_to(&fx).unwrap();
    let shifted = &s.level + &RationalFunction::from_int(&s.table, 2);
    let coeff = RationalFunction::new(
        (&shifted * &RationalFunction::from_poly(gamma.clone())).numerator().clone(),
        Polynomial::one(&s.table),
    )
    .unwrap();
    let expected = f.scale(&(&(&coeff - &c) * &RationalFunction::from_poly(dt.clone()).inv().unwrap()));
    assert_eq!(kz_op(0, &pts, &s.level).unwrap().apply(&f).unwrap(), expected);
}

#[test]
fn hecke_transform_examples() {
    let s = setup(1);
    let u = hecke_transform(&s, Mutation::None).unwrap();
    assert_eq!(u.to_text(), "(t1 - t2)^(-chi1)*(x1 - x2)^(2*chi1)*Psi");
    let rec = u.record().unwrap();
    assert_eq!(rec.values()[0].to_text(), "(-t1 + t2)/(x1 - x2)");

    let zero_weight = BlockSetup::new(&WeightParams { weights: vec![Param::Value(int(0))], level: Param::Symbolic }).unwrap();
    let u0 = hecke_transform(&zero_weight, Mutation::None).unwrap();
    assert_eq!(u0.to_text(), "Psi");

    // d/dx1 Upsilon = Upsilon * 2 chi1/(x1 - x2) + prefactor * (t1 - t2)/(x1 - x2)^2 * Psi_xi
    let du = u.derivative(s.x(0)).unwrap();
    assert_eq!(du.num_terms(), 2);
    assert_eq!(
        du.to_text(),
        "((2*chi1)/(x1 - x2))*(t1 - t2)^(-chi1)*(x1 - x2)^(2*chi1)*Psi + ((t1 - t2)/(x1 - x2)^2)*(t1 - t2)^(-chi1)*(x1 - x2)^(2*chi1)*Psi[xi1]"
    );
}

#[test]
fn ward_transport_small_n() {
    for n in 1..=3 {
        let r = ward_transport(&WeightParams::symbolic(n), Mutation::None).unwrap();
        assert!(r.verified(), "{}", r.case);
        assert_eq!(r.identities.len(), 3);
        assert_eq!(r.relations_used, 3 + 3 * n);
        assert_eq!(r.prolongation_order, 1);
    }
}

#[test]
fn ward_transport_detects_mutations() {
    let p = WeightParams::symbolic(3);
    for m in [Mutation::XiSign(0), Mutation::ExponentShift(0), Mutation::ExtraWeight, Mutation::PositionExponentSign(1)] {
        let r = ward_transport(&p, m).unwrap();
        assert!(!r.verified(), "{m:?}");
    }
    assert!(ward_transport(&p, Mutation::XiSign(5)).is_err());
}

#[test]
fn kz_transport_small_n() {
    for n in 1..=2 {
        let which: Vec<usize> = (0..n).collect();
        let r = kz_transport(&WeightParams::symbolic(n), &which, Mutation::None).unwrap();
        assert!(r.verified(), "{}", r.case);
        assert_eq!(r.identities.len(), n);
    }
}

#[test]
fn kz_transport_detects_mutations() {
    let p = WeightParams::symbolic(3);
    for m in [Mutation::ExtraWeight, Mutation::TimeExponentSign(0)] {
        let r = kz_transport(&p, &[0], m).unwrap();
        assert!(!r.verified(), "{m:?}");
    }
}

#[test]
fn two_point_end_to_end() {
    for chi in [ratio(1, 2), int(1), ratio(3, 2)] {
        for k in [int(1), int(2), ratio(-1, 2)] {
            let r = two_point_solution(Param::Value(chi.clone()), k.clone()).unwrap();
            assert!(r.verified(), "{}", r.case);
            let expected = -&(&chi * &(&chi + &int(1))) * int(2);
            assert_eq!(r.casimir.constant_value(), Some(expected));
        }
    }
    let symbolic = two_point_solution(Param::Symbolic, int(3)).unwrap();
    assert!(symbolic.verified());
    assert!(matches!(two_point_solution(Param::Symbolic, int(-2)), Err(Error::CriticalLevel)));
}

#[test]
fn critical_level_is_rejected() {
    let p = WeightParams { weights: vec![Param::Symbolic], level: Param::Value(int(-2)) };
    assert!(matches!(BlockSetup::new(&p), Err(Error::CriticalLevel)));
}

#[test]
fn small_systems_with_distinct_weights_are_vacuous() {
    // One point with generic chi, or two points with unrelated weights, only
    // admit Psi = 0, so even corrupted transforms reduce to zero.
    for n in [1, 2] {
        for m in [Mutation::XiSign(0), Mutation::ExponentShift(0), Mutation::ExtraWeight] {
            assert!(ward_transport(&WeightParams::symbolic(n), m).unwrap().verified(), "N={n} {m:?}");
        }
    }
    // Equal weights at two points admit the two-point block and every
    // corruption is detected.
    let equal = WeightParams { weights: vec![Param::Symbolic, Param::SameAs(0)], level: Param::Symbolic };
    assert!(ward_transport(&equal, Mutation::None).unwrap().verified());
    assert!(kz_transport(&equal, &[0, 1], Mutation::None).unwrap().verified());
    for m in [Mutation::XiSign(0), Mutation::ExponentShift(0), Mutation::ExtraWeight] {
        assert!(!ward_transport(&equal, m).unwrap().verified(), "{m:?}");
    }
    assert!(!kz_transport(&equal, &[0], Mutation::TimeExponentSign(0)).unwrap().verified());
}
