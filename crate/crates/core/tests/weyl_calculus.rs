use std::sync::Arc;

use hecke_core::exact_algebra::*;
use hecke_core::kz_blocks::{rho, ward_ops, Generator};
use hecke_core::weyl_calculus::*;
use hecke_core::Error;
use proptest::prelude::*;

fn table() -> Table {
    VarTable::new(&["x1", "x2", "t1", "t2", "xi1", "xi2", "chi", "k"]).unwrap()
}

fn p(t: &Table, name: &str) -> Polynomial {
    Polynomial::var(t, name).unwrap()
}

fn r(t: &Table, name: &str) -> RationalFunction {
    RationalFunction::var(t, name).unwrap()
}

fn idx(t: &Table, name: &str) -> usize {
    t.index_of(name).unwrap()
}

fn formal(t: &Table) -> Arc<SubstitutionRecord> {
    let args = FormalArgs::new(t, "Psi", &[("xi1", ArgKind::Position), ("xi2", ArgKind::Position), ("t1", ArgKind::Time)], 2, 1).unwrap();
    SubstitutionRecord::identity(&args)
}

#[test]
fn leibniz_base_case() {
    let t = table();
    let d = DiffOp::partial(&t, idx(&t, "x1"));
    let x = DiffOp::mult(r(&t, "x1"));
    let expected = d.scale(&r(&t, "x1")).add(&DiffOp::identity(&t));
    assert_eq!(d.compose(&x), expected);
    assert_eq!(d.commutator(&x), DiffOp::identity(&t));
    assert_eq!(d.compose(&d).to_text(), "D[x1,2]");
}

#[test]
fn realization_brackets() {
    let t = table();
    let w = r(&t, "chi");
    let x = idx(&t, "x1");
    let (e, h, f) = (rho(Generator::E, &w, x), rho(Generator::H, &w, x), rho(Generator::F, &w, x));
    assert_eq!(e.commutator(&f), h);
    assert_eq!(h.commutator(&e), e.scale(&RationalFunction::from_int(&t, 2)));
    assert_eq!(h.commutator(&f), f.scale(&RationalFunction::from_int(&t, -2)));
}

#[test]
fn power_rule_with_symbolic_exponent() {
    let t = table();
    let base = &p(&t, "x1") - &p(&t, "x2");
    let f = TwistedFunction::power(&base, &p(&t, "chi")).unwrap();
    let df = DiffOp::partial(&t, idx(&t, "x1")).apply(&f).unwrap();
    let rational = RationalFunction::new(p(&t, "chi"), base.clone()).unwrap();
    assert_eq!(df, f.scale(&rational));

    let tb = &p(&t, "t1") - &p(&t, "t2");
    let g = TwistedFunction::power(&tb, &p(&t, "k")).unwrap();
    let dg = g.derivative(idx(&t, "t1")).unwrap();
    assert_eq!(dg, g.scale(&RationalFunction::new(p(&t, "k"), tb).unwrap()));
    // the exponent itself may not depend on the differentiation variable
    assert!(g.derivative(idx(&t, "k")).is_err());
}

#[test]
fn chain_rule_through_the_record() {
    let t = table();
    let args = FormalArgs::new(&t, "Psi", &[("xi1", ArgKind::Position), ("t1", ArgKind::Time)], 2, 1).unwrap();
    let dx = &p(&t, "x1") - &p(&t, "x2");
    let dt = &p(&t, "t1") - &p(&t, "t2");
    let xi = RationalFunction::new(-&dt, dx.clone()).unwrap();
    let record = SubstitutionRecord::new(&args, vec![xi, r(&t, "t1")]).unwrap();
    let psi = TwistedFunction::unknown(&record);
    let d = psi.derivative(idx(&t, "x1")).unwrap();
    let text = d.to_text();
    assert!(text.contains("Psi[xi1]"), "{text}");
    // compare with (t1 - t2)/(x1 - x2)^2 * Psi_xi
    let coeff = RationalFunction::from_factors(dt.clone(), vec![(dx.clone(), 2)]).unwrap();
    let mut expected_jet = None;
    for (key, c) in d.terms() {
        assert_eq!(c, &coeff);
        expected_jet = Some(key.clone());
    }
    assert!(expected_jet.is_some());
    assert_eq!(d.num_terms(), 1);
}

#[test]
fn substitution_absorbs_integer_exponents() {
    let t = table();
    let base = &p(&t, "x1") - &p(&t, "x2");
    let f = TwistedFunction::power(&base, &p(&t, "chi")).unwrap();
    let g = f.substitute(&[(idx(&t, "chi"), RationalFunction::from_int(&t, 2))]).unwrap();
    assert_eq!(g, TwistedFunction::from_rational(RationalFunction::from_poly(&base * &base)));
    // a zero base is rejected
    let collide = f.substitute(&[(idx(&t, "x1"), r(&t, "x2"))]);
    assert!(matches!(collide, Err(Error::ZeroFactorBase)));
    // the critical level kills the KZ coefficient
    let c = &r(&t, "k") + &RationalFunction::from_int(&t, 2);
    assert!(c.substitute(&[(idx(&t, "k"), RationalFunction::from_int(&t, -2))]).unwrap().is_zero());
}

#[test]
fn record_substitution_keeps_jets() {
    let t = table();
    let args = FormalArgs::new(&t, "Psi", &[("xi1", ArgKind::Position)], 2, 1).unwrap();
    let rec = SubstitutionRecord::identity(&args);
    let psi = TwistedFunction::unknown(&rec).derivative(idx(&t, "xi1")).unwrap();
    let xi = RationalFunction::new(-&(&p(&t, "t1") - &p(&t, "t2")), &p(&t, "x1") - &p(&t, "x2")).unwrap();
    let moved = psi.substitute(&[(idx(&t, "xi1"), xi.clone())]).unwrap();
    assert_eq!(moved.jets(), psi.jets());
    assert_eq!(moved.record().unwrap().values()[0], xi);
}

fn ward_relations(t: &Table, rec: &Arc<SubstitutionRecord>) -> Vec<TwistedFunction> {
    let psi = TwistedFunction::unknown(rec);
    let w = r(t, "chi");
    let ops = ward_ops(&[(idx(t, "xi1"), w.clone()), (idx(t, "xi2"), w)]).unwrap();
    ops.iter().map(|op| op.apply(&psi).unwrap()).collect()
}

#[test]
fn reduction_examples() {
    let t = table();
    let rec = formal(&t);
    let rels = ward_relations(&t, &rec);
    let psi = TwistedFunction::unknown(&rec);
    let e = DiffOp::partial(&t, idx(&t, "xi1")).add(&DiffOp::partial(&t, idx(&t, "xi2")));
    assert!(reduce_modulo(&e.apply(&psi).unwrap(), &rels).unwrap().is_zero());
    for rel in &rels {
        assert!(reduce_modulo(rel, &rels).unwrap().is_zero());
    }
    // a prolonged relation vanishes modulo the prolonged set
    let pro = prolong(&rels, 1).unwrap();
    let d = rels[1].derivative(idx(&t, "xi1")).unwrap();
    assert!(reduce_modulo(&d, &pro).unwrap().is_zero());
    // ...but not modulo the unprolonged set
    assert!(!reduce_modulo(&d, &rels).unwrap().is_zero());
    // Psi itself is not a consequence
    assert!(!reduce_modulo(&psi, &rels).unwrap().is_zero());
}

#[test]
fn prolongation_counts() {
    let t = table();
    let rec = formal(&t);
    let rels = ward_relations(&t, &rec);
    assert_eq!(prolong(&rels, 0).unwrap().len(), 3);
    assert_eq!(prolong(&rels, 1).unwrap().len(), 3 + 3 * 2);
    assert!(prolong(&[], 2).unwrap().is_empty());
    // third derivatives exceed the position cap
    assert!(matches!(prolong(&rels, 3), Err(Error::JetCapExceeded(_))));
}

#[test]
fn malformed_relation_sets_are_rejected() {
    let t = table();
    let rec = formal(&t);
    let pure = TwistedFunction::from_rational(r(&t, "x1")).with_record(Some(rec.clone()));
    assert!(matches!(reduce_modulo(&TwistedFunction::unknown(&rec), &[pure]), Err(Error::PureFunctionRelation(0))));
    let psi = TwistedFunction::unknown(&rec);
    let one = TwistedFunction::from_rational(RationalFunction::one(&t));
    let bad = vec![psi.clone(), psi.try_sub(&one).unwrap()];
    assert!(matches!(Echelon::new(&rec, &bad), Err(Error::InconsistentRelations(_))));
}

#[test]
fn reduction_is_sound_on_a_manufactured_solution() {
    let t = table();
    let rec = formal(&t);
    let rels = prolong(&ward_relations(&t, &rec), 1).unwrap();
    // a combination of the relations with rational coefficients
    let mut f = TwistedFunction::zero(&t).with_record(Some(rec.clone()));
    for (i, rel) in rels.iter().enumerate() {
        let c = &r(&t, "t1") + &RationalFunction::from_int(&t, i as i64);
        f = f.try_add(&rel.scale(&c)).unwrap();
    }
    assert!(reduce_modulo(&f, &rels).unwrap().is_zero());
    // Psi0 = (xi1 - xi2)^chi * t1 solves the three Ward relations with weight chi each
    let diff = &p(&t, "xi1") - &p(&t, "xi2");
    let psi0 = TwistedFunction::power(&diff, &p(&t, "chi"))
        .unwrap()
        .try_mul(&TwistedFunction::from_rational(r(&t, "t1")))
        .unwrap();
    for rel in &rels {
        assert!(rel.instantiate_jets(&psi0).unwrap().is_zero(), "{}", rel.to_text());
    }
    assert!(f.instantiate_jets(&psi0).unwrap().is_zero());
}

fn shared() -> Table {
    use std::sync::OnceLock;
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(table).clone()
}

fn small_op() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec((0usize..2, 0u16..2, -2i64..3, 0u16..3), 1..3).prop_map(|terms| {
        let t = shared();
        let mut op = DiffOp::zero(&t);
        for (var, order, c, xpow) in terms {
            let coeff = RationalFunction::from_poly(
                Polynomial::var_index(&t, 1 - var).pow(xpow as u32).scale(&int(c)),
            );
            let mut d = DiffOp::identity(&t);
            for _ in 0..order {
                d = d.compose(&DiffOp::partial(&t, var));
            }
            op = op.add(&d.scale(&coeff));
        }
        op
    })
}

fn small_twisted() -> impl Strategy<Value = TwistedFunction> {
    (0i64..3, -2i64..3, 1i64..3).prop_map(|(e, c, s)| {
        let t = shared();
        let base = &(&Polynomial::var_index(&t, 0) - &Polynomial::var_index(&t, 1))
            + &Polynomial::from_int(&t, s);
        let exp = &Polynomial::var(&t, "chi").unwrap() + &Polynomial::from_int(&t, e);
        TwistedFunction::power(&base, &exp)
            .unwrap()
            .scale(&RationalFunction::from_int(&t, if c == 0 { 1 } else { c }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative(a in small_op(), b in small_op(), c in small_op()) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }

    #[test]
    fn composition_matches_application(a in small_op(), b in small_op(), f in small_twisted()) {
        let lhs = a.compose(&b).apply(&f).unwrap();
        let rhs = a.apply(&b.apply(&f).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn application_is_linear(a in small_op(), f in small_twisted(), g in small_twisted()) {
        let lhs = a.apply(&f.try_add(&g).unwrap()).unwrap();
        let rhs = a.apply(&f).unwrap().try_add(&a.apply(&g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn first_order_leibniz(f in small_twisted(), g in small_twisted(), c in -2i64..3) {
        let t = shared();
        let d = DiffOp::partial(&t, 0).scale(&RationalFunction::from_int(&t, c)).add(&DiffOp::partial(&t, 1));
        let lhs = d.apply(&f.try_mul(&g).unwrap()).unwrap();
        let rhs = d.apply(&f).unwrap().try_mul(&g).unwrap()
            .try_add(&f.try_mul(&d.apply(&g).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_is_idempotent(coeffs in prop::collection::vec(-3i64..4, 6)) {
        let t = shared();
        let rec = formal(&t);
        let rels = ward_relations(&t, &rec);
        let psi = TwistedFunction::unknown(&rec);
        let mut f = TwistedFunction::zero(&t).with_record(Some(rec.clone()));
        let derivs = [idx(&t, "xi1"), idx(&t, "xi2"), idx(&t, "t1")];
        for (i, c) in coeffs.iter().enumerate() {
            let term = if i < 3 { psi.derivative(derivs[i]).unwrap() } else { psi.clone() };
            f = f.try_add(&term.scale(&(&RationalFunction::from_int(&t, *c) + &r(&t, "x1")))).unwrap();
        }
        let once = reduce_modulo(&f, &rels).unwrap();
        prop_assert_eq!(reduce_modulo(&once, &rels).unwrap(), once);
    }
}
