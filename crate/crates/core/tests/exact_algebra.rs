use hecke_core::exact_algebra::*;
use proptest::prelude::*;

fn table() -> Table {
    VarTable::new(&["x", "y", "z"]).unwrap()
}

fn var(t: &Table, name: &str) -> Polynomial {
    Polynomial::var(t, name).unwrap()
}

fn c(t: &Table, n: i64) -> Polynomial {
    Polynomial::from_int(t, n)
}

#[test]
fn difference_of_squares() {
    let t = table();
    let x = var(&t, "x");
    let p = &(&x + &c(&t, 1)) * &(&x - &c(&t, 1));
    assert_eq!(p, &(&x * &x) - &c(&t, 1));
    assert_eq!(p.to_text(), "x^2 - 1");
}

#[test]
fn additive_identity_and_binomial() {
    let t = VarTable::new(&["x1", "x2"]).unwrap();
    let d = &var(&t, "x1") - &var(&t, "x2");
    assert_eq!(&d + &Polynomial::zero(&t), d);
    assert_eq!((&d * &d).to_text(), "x1^2 - 2*x1*x2 + x2^2");
}

#[test]
fn canonical_text_orders_by_graded_lex() {
    let t = VarTable::new(&["x1", "t2"]).unwrap();
    let x1 = var(&t, "x1");
    let t2 = var(&t, "t2");
    let p = &(&(&x1 * &x1) * &t2).scale(&int(3)) - &Polynomial::constant(&t, ratio(1, 2));
    assert_eq!(p.to_text(), "3*x1^2*t2 - 1/2");
    let q = &(&t2 + &x1) + &(&x1 * &t2);
    assert_eq!(q.to_text(), "x1*t2 + x1 + t2");
}

#[test]
fn mismatched_tables_are_rejected() {
    let a = VarTable::new(&["x"]).unwrap();
    let b = VarTable::new(&["y"]).unwrap();
    assert!(var(&a, "x").try_add(&var(&b, "y")).is_err());
    assert!(VarTable::new(&["x", "x"]).is_err());
}

#[test]
fn embedding_into_a_larger_table() {
    let a = VarTable::new(&["y"]).unwrap();
    let b = table();
    let p = &var(&a, "y") + &c(&a, 2);
    assert_eq!(p.embed(&b).unwrap(), &var(&b, "y") + &c(&b, 2));
}

#[test]
fn rational_equality_by_cross_multiplication() {
    let t = table();
    let x = var(&t, "x");
    let one = c(&t, 1);
    let lhs = RationalFunction::new(&(&x * &x) - &one, &x - &one).unwrap();
    assert_eq!(lhs, RationalFunction::from_poly(&x + &one));

    let tt = VarTable::new(&["t1", "t2"]).unwrap();
    let t1 = var(&tt, "t1");
    let t2 = var(&tt, "t2");
    let a = RationalFunction::new(Polynomial::one(&tt), &t1 - &t2).unwrap();
    let b = RationalFunction::new(Polynomial::from_int(&tt, -1), &t2 - &t1).unwrap();
    assert_eq!(a, b);

    assert_ne!(RationalFunction::from_poly(x), RationalFunction::from_poly(var(&t, "y")));
}

#[test]
fn zero_denominator_is_rejected() {
    let t = table();
    assert!(RationalFunction::new(c(&t, 1), Polynomial::zero(&t)).is_err());
    assert!(RationalFunction::zero(&t).inv().is_err());
}

#[test]
fn rational_derivative_and_substitution() {
    let t = table();
    let x = RationalFunction::from_poly(var(&t, "x"));
    let y = RationalFunction::from_poly(var(&t, "y"));
    // d/dx (1/(x - y)) = -1/(x - y)^2
    let f = (&x - &y).inv().unwrap();
    let expected = -&(&x - &y).pow(-2).unwrap();
    assert_eq!(f.derivative(0), expected);
    // x -> y + 1 turns 1/(x - y) into 1
    let one = RationalFunction::one(&t);
    let g = f.substitute(&[(0, &y + &one)]).unwrap();
    assert!(g.is_one());
    // substituting a pole is an error
    assert!(f.substitute(&[(0, y.clone())]).is_err());
}

fn lp(t: &Table, terms: &[(i64, i64)]) -> LaurentPolynomial {
    terms.iter().fold(LaurentPolynomial::zero(t), |acc, &(c, e)| {
        acc.add(&LaurentPolynomial::monomial(RationalFunction::from_int(t, c), e))
    })
}

fn mat(t: &Table, e: [&[(i64, i64)]; 4], flavor: Flavor) -> ProjectiveLaurentMatrix {
    ProjectiveLaurentMatrix::new(e.map(|x| lp(t, x)), flavor).unwrap()
}

#[test]
fn laurent_matrix_products() {
    let t = VarTable::new::<&str>(&[]).unwrap();
    let u = mat(&t, [&[(1, 0)], &[(1, 0)], &[], &[(1, 0)]], Flavor::Sl2);
    let l = mat(&t, [&[(1, 0)], &[], &[(1, 1)], &[(1, 0)]], Flavor::Sl2);
    let p = u.try_mul(&l).unwrap();
    assert_eq!(p.to_text(), "[[t + 1, 1], [t, 1]]");
    assert!(p.equals(&p.try_mul(&ProjectiveLaurentMatrix::identity(&t, Flavor::Sl2)).unwrap()));

    let w = mat(&t, [&[], &[(1, 0)], &[(-1, 0)], &[]], Flavor::Sl2);
    let ww = w.try_mul(&w).unwrap();
    let minus = mat(&t, [&[(-1, 0)], &[], &[], &[(-1, 0)]], Flavor::Sl2);
    assert!(ww.equals(&minus));
    assert!(!ww.equals(&ProjectiveLaurentMatrix::identity(&t, Flavor::Sl2)));
    let wp = w.with_flavor(Flavor::Pgl2).unwrap();
    assert!(wp.try_mul(&wp).unwrap().equals(&ProjectiveLaurentMatrix::identity(&t, Flavor::Pgl2)));

    assert!(u.try_mul(&wp).is_err());
}

#[test]
fn determinant_must_be_a_unit() {
    let t = VarTable::new::<&str>(&[]).unwrap();
    let bad = [lp(&t, &[(1, 0), (1, 1)]), lp(&t, &[]), lp(&t, &[]), lp(&t, &[(1, 0)])];
    assert!(ProjectiveLaurentMatrix::new(bad, Flavor::Pgl2).is_err());
    let diag = [lp(&t, &[(1, 0)]), lp(&t, &[]), lp(&t, &[]), lp(&t, &[(1, 1)])];
    assert!(ProjectiveLaurentMatrix::new(diag.clone(), Flavor::Sl2).is_err());
    assert!(ProjectiveLaurentMatrix::new(diag, Flavor::Pgl2).is_ok());
}

#[test]
fn regularity_examples() {
    let t = VarTable::new::<&str>(&[]).unwrap();
    let lower = mat(&t, [&[(1, 0)], &[], &[(1, 1)], &[(1, 0)]], Flavor::Sl2);
    assert!(lower.regularity(RegularAt::Zero));
    let upper = mat(&t, [&[(1, 0)], &[(1, -1)], &[], &[(1, 0)]], Flavor::Sl2);
    assert!(upper.regularity(RegularAt::Infinity));
    assert!(!upper.regularity(RegularAt::Zero));
    // diag(1, t) is a nontrivial coweight, so neither side absorbs it.
    let d = mat(&t, [&[(1, 0)], &[], &[], &[(1, 1)]], Flavor::Pgl2);
    assert!(!d.regularity(RegularAt::Infinity));
    assert!(!d.regularity(RegularAt::Zero));
    let d2 = mat(&t, [&[(1, -1)], &[], &[], &[(1, 1)]], Flavor::Pgl2);
    assert!(!d2.regularity(RegularAt::Zero));
    assert!(mat(&t, [&[(1, 1)], &[], &[], &[(1, 1)]], Flavor::Pgl2).regularity(RegularAt::Infinity));
}

#[test]
fn scalar_text_round_trip() {
    for s in ["0", "-3", "7/2", "-1/9"] {
        assert_eq!(scalar_text(&parse_scalar(s).unwrap()), s);
    }
    assert_eq!(scalar_text(&ratio(4, -8)), "-1/2");
}

fn small_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(((0u16..3, 0u16..3, 0u16..2), -4i64..5), 0..5).prop_map(|terms| {
        let t = shared_table();
        Polynomial::from_terms(
            &t,
            terms
                .into_iter()
                .map(|((a, b, c), k)| (Monomial::from_exponents(&[a, b, c]), int(k))),
        )
    })
}

fn shared_table() -> Table {
    use std::sync::OnceLock;
    static T: OnceLock<Table> = OnceLock::new();
    T.get_or_init(table).clone()
}

fn small_rational() -> impl Strategy<Value = RationalFunction> {
    (small_poly(), 0usize..3, 1i64..3).prop_map(|(num, v, shift)| {
        let t = shared_table();
        let den = &Polynomial::var_index(&t, v) + &Polynomial::from_int(&t, shift);
        RationalFunction::new(num, den).unwrap()
    })
}

fn small_laurent() -> impl Strategy<Value = ProjectiveLaurentMatrix> {
    // products of elementary unipotents and diagonal units
    prop::collection::vec((0u8..3, -2i64..3, -2i64..3), 1..4).prop_map(|gens| {
        let t = VarTable::new::<&str>(&[]).unwrap();
        let mut m = ProjectiveLaurentMatrix::identity(&t, Flavor::Pgl2);
        for (kind, c, e) in gens {
            let c = if c == 0 { 1 } else { c };
            let g = match kind {
                0 => mat(&t, [&[(1, 0)], &[(c, e)], &[], &[(1, 0)]], Flavor::Pgl2),
                1 => mat(&t, [&[(1, 0)], &[], &[(c, e)], &[(1, 0)]], Flavor::Pgl2),
                _ => mat(&t, [&[(c, e)], &[], &[], &[(1, 0)]], Flavor::Pgl2),
            };
            m = m.try_mul(&g).unwrap();
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_inverts_multiplication(a in small_poly(), b in small_poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).try_div_exact(&b), Some(a));
    }

    #[test]
    fn rational_equality_is_an_equivalence(a in small_rational(), b in small_rational(), s in small_poly()) {
        prop_assume!(!s.is_zero());
        prop_assert_eq!(&a, &a);
        let scaled = RationalFunction::new(&a.numerator().clone() * &s, &a.denominator() * &s).unwrap();
        prop_assert_eq!(&scaled, &a);
        prop_assert_eq!(&a, &scaled);
        if a == b {
            prop_assert_eq!(&b, &scaled);
        }
    }

    #[test]
    fn rational_field_operations(a in small_rational(), b in small_rational(), c in small_rational()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&(&a * &b) * &b.inv().unwrap(), a.clone());
        }
        // Leibniz rule
        prop_assert_eq!((&a * &b).derivative(1), &(&a.derivative(1) * &b) + &(&a * &b.derivative(1)));
    }

    #[test]
    fn laurent_products(a in small_laurent(), b in small_laurent(), c in small_laurent()) {
        let ab = a.try_mul(&b).unwrap();
        prop_assert!(ab.try_mul(&c).unwrap().equals(&a.try_mul(&b.try_mul(&c).unwrap()).unwrap()));
        prop_assert!(ab.det().eq_value(&a.det().mul(&b.det())));
        let inv = a.inverse().unwrap();
        prop_assert!(a.try_mul(&inv).unwrap().equals(&ProjectiveLaurentMatrix::identity(a.table(), Flavor::Pgl2)));
    }

    #[test]
    fn projective_equality_ignores_unit_rescaling(a in small_laurent(), b in small_laurent(), c in 1i64..4, e in -3i64..4, c2 in 1i64..4, e2 in -3i64..4) {
        let t = a.table().clone();
        let rescale = |m: &ProjectiveLaurentMatrix, c: i64, e: i64| {
            let u = LaurentPolynomial::monomial(RationalFunction::from_int(&t, c), e);
            ProjectiveLaurentMatrix::new(m.entries().clone().map(|x| x.mul(&u)), Flavor::Pgl2).unwrap()
        };
        prop_assert!(a.equals(&rescale(&a, c, e)));
        prop_assert_eq!(a.equals(&b), rescale(&a, c, e).equals(&rescale(&b, c2, e2)));
    }
}
