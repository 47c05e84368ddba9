use hecke_core::affine_algebra::*;
use hecke_core::exact_algebra::{int, ratio, Flavor, RationalFunction, Scalar};
use hecke_core::root_loop::{Coweight, LoopElement};
use hecke_core::Error;
use proptest::prelude::*;

fn vac() -> ModuleState {
    ModuleState::vacuum(Vacuum::untwisted())
}

fn state(vacuum: Vacuum, letters: &[(usize, i64)]) -> ModuleState {
    ModuleState::word(vacuum, letters.iter().map(|&(b, m)| Letter::new(b, m)).collect())
}

fn rf(n: i64) -> RationalFunction {
    RationalFunction::from_int(&affine_table(), n)
}

fn states_up_to(vacuum: Vacuum, depth: i64) -> Vec<ModuleState> {
    let mut out = Vec::new();
    for d in 0..=depth {
        for w in -d..=d {
            for word in creation_words(vacuum, d, w) {
                out.push(ModuleState::word(vacuum, word));
            }
        }
    }
    out
}

#[test]
fn pbw_basis_enumerates_every_weight() {
    assert_eq!(pbw_basis(Vacuum::untwisted(), 4), states_up_to(Vacuum::untwisted(), 4));
    assert_eq!(pbw_basis(Vacuum::untwisted(), 3).len(), 35);
    assert_eq!(pbw_basis(Vacuum::Twisted(1), 3).len(), 35);
}

#[test]
fn lie_data_is_invariant() {
    let lie = LieData::sl2();
    assert_eq!(lie.dim(), 3);
    assert_eq!(lie.dual_coxeter(), 2);
    assert_eq!(lie.kappa(E, F), &int(1));
    assert_eq!(lie.kappa(H, H), &int(2));
    for x in 0..3 {
        for y in 0..3 {
            for z in 0..3 {
                // kappa([x,y],z) + kappa(y,[x,z]) = 0
                let xy = lie.bracket(x, y).to_vec();
                let xz = lie.bracket(x, z).to_vec();
                let lhs = lie.kappa_combination(&xy, &[(z, int(1))])
                    + lie.kappa_combination(&[(y, int(1))], &xz);
                assert_eq!(lhs, int(0));
            }
        }
    }
    // the dual basis is dual
    for a in 0..3 {
        for b in 0..3 {
            let k = lie.kappa_combination(&[(a, int(1))], lie.dual(b));
            assert_eq!(k, int(if a == b { 1 } else { 0 }));
        }
    }
}

#[test]
fn affine_bracket_has_the_central_term() {
    let b = bracket_letters(Letter::new(E, 2), Letter::new(F, -2));
    let expected = ModeElement::letter(H, 0).add(&ModeElement::central(rf(2)));
    assert_eq!(b, expected);
    let hh = bracket_letters(Letter::new(H, 1), Letter::new(H, -1));
    assert_eq!(hh, ModeElement::central(rf(2)));
    assert!(bracket_letters(Letter::new(H, 1), Letter::new(H, 1)).is_zero());
}

#[test]
fn annihilation_rules_follow_the_twist() {
    // a acts on the twisted vacuum as Ad(t^-lambda) a acts on the untwisted one
    for p in -3..=3 {
        let twisted = Vacuum::Twisted(p);
        for m in -5..=5 {
            for b in 0..3 {
                let l = Letter::new(b, m);
                let image = spectral_flow_letter(l, -p);
                let (moved, _) = image.terms().next().unwrap();
                let untwisted = Vacuum::untwisted().action(*moved);
                let kills = untwisted == Action::Annihilates && image.central_coefficient().is_zero();
                assert_eq!(twisted.action(l) == Action::Annihilates, kills, "p={p} {l:?}");
            }
        }
    }
    let one = Vacuum::Twisted(1);
    assert_eq!(one.action(Letter::new(E, 1)), Action::Annihilates);
    assert_eq!(one.action(Letter::new(F, 0)), Action::Annihilates);
    assert_eq!(one.action(Letter::new(E, 0)), Action::Creates);
    assert_eq!(Vacuum::untwisted().action(Letter::new(E, 0)), Action::Annihilates);
}

#[test]
fn mode_action_examples() {
    let v = state(Vacuum::untwisted(), &[(E, -1)]);
    assert!(apply_single(Letter::new(E, 0), &v).is_zero());
    let u = state(Vacuum::untwisted(), &[(F, -1)]);
    assert_eq!(apply_single(Letter::new(E, 1), &u), vac().scale(&level()));
    let tw = ModuleState::vacuum(Vacuum::Twisted(1));
    assert_eq!(apply_single(Letter::new(H, 0), &tw), tw.scale(&-&level()));
}

#[test]
fn states_serialize_as_pbw_words() {
    let s = state(Vacuum::Twisted(1), &[(H, -1), (E, -2)]);
    assert_eq!(s.to_text(), "e[-2]*h[-1]*vac(lambda=1/2*acheck)");
    let t = state(Vacuum::Twisted(2), &[]).scale(&rf(3));
    assert_eq!(t.to_text(), "3*vac(lambda=acheck)");
    assert_eq!(ModuleState::zero(Vacuum::untwisted()).to_text(), "0");
    assert_eq!(vac().to_text(), "vac");
}

#[test]
fn sugawara_examples() {
    assert!(sugawara_apply(-1, &vac()).unwrap().is_zero());
    let v = state(Vacuum::untwisted(), &[(E, -1)]);
    assert_eq!(sugawara_apply(0, &v).unwrap(), v);
    assert!(sugawara_apply(2, &v).unwrap().is_zero());
    // S_0 on a depth-d PBW word is d times the word
    let w = state(Vacuum::untwisted(), &[(F, -2), (H, -1)]);
    assert_eq!(sugawara_apply(0, &w).unwrap(), w.scale(&rf(3)));
    // S_{-2} |0> = 1/(2(k+2)) (e_{-1} f_{-1} + f_{-1} e_{-1} + h_{-1} h_{-1}/2) |0>
    let s = sugawara_apply(-2, &vac()).unwrap();
    let pre = sugawara_prefactor();
    let ef = state(Vacuum::untwisted(), &[(E, -1), (F, -1)]);
    let hh = state(Vacuum::untwisted(), &[(H, -1), (H, -1)]);
    let h2 = state(Vacuum::untwisted(), &[(H, -2)]);
    // f_{-1} e_{-1} = e_{-1} f_{-1} - h_{-2}
    let expected = ef.scale(&rf(2)).sub(&h2).add(&hh.scale(&RationalFunction::from_scalar(&affine_table(), ratio(1, 2))));
    assert_eq!(s, expected.scale(&pre));
}

#[test]
fn critical_level_is_rejected() {
    let v = state(Vacuum::untwisted(), &[(E, -1)]);
    assert!(matches!(sugawara_apply_at(0, &v, &int(-2)), Err(Error::CriticalLevel)));
    assert_eq!(sugawara_apply_at(0, &v, &int(5)).unwrap(), v);
}

#[test]
fn virasoro_relations() {
    let states = states_up_to(Vacuum::untwisted(), 4);
    assert_eq!(states.len(), 86);
    let mut cache = SugawaraCache::new(Vacuum::untwisted());
    let c = central_charge();
    for v in &states {
        for m in -2..=2i64 {
            for n in -2..=2i64 {
                let sn = cache.apply(n, v).unwrap();
                let sm = cache.apply(m, v).unwrap();
                let lhs = cache.apply(m, &sn).unwrap().sub(&cache.apply(n, &sm).unwrap());
                let mut rhs = cache.apply(m + n, v).unwrap().scale(&rf(m - n));
                if m + n == 0 {
                    rhs = rhs.add(&v.scale(&c.scale(&ratio(m * m * m - m, 12))));
                }
                assert!(lhs.sub(&rhs).is_zero(), "m={m} n={n} v={v:?}");
            }
        }
    }
}

#[test]
fn sugawara_commutes_with_modes_by_a_shift() {
    let states = states_up_to(Vacuum::untwisted(), 3);
    let mut cache = SugawaraCache::new(Vacuum::untwisted());
    for v in &states {
        for n in -2..=2i64 {
            for m in -2..=2i64 {
                for b in 0..3 {
                    let a = Letter::new(b, m);
                    let sa = cache.apply(n, &apply_single(a, v)).unwrap();
                    let as_ = apply_single(a, &cache.apply(n, v).unwrap());
                    let rhs = apply_single(Letter::new(b, m + n), v).scale(&rf(-m));
                    assert!(sa.sub(&as_).sub(&rhs).is_zero(), "n={n} a={a:?} v={v:?}");
                }
            }
        }
    }
}

#[test]
fn ad_loop_examples() {
    // exp(e t) on f_{-1}: f_{-1} + h_0 - e_1 + K
    let g = LoopElement::exp_e(int(1), 1, Flavor::Pgl2);
    let image = ad_loop(&g, &ModeElement::letter(F, -1)).unwrap();
    let expected = ModeElement::letter(F, -1)
        .add(&ModeElement::letter(H, 0))
        .sub(&ModeElement::letter(E, 1))
        .add(&ModeElement::central(rf(1)));
    assert_eq!(image, expected);
    // constant elements contribute no central term
    let w = LoopElement::weyl(Flavor::Pgl2).mul(&LoopElement::cartan(int(3), Flavor::Pgl2).unwrap()).unwrap();
    for b in 0..3 {
        for m in -2..=2 {
            let x = ad_loop(&w, &ModeElement::letter(b, m)).unwrap();
            assert!(x.central_coefficient().is_zero());
        }
    }
}

#[test]
fn ad_loop_of_a_coweight_is_spectral_flow() {
    for p in -3..=3i64 {
        let flavor = if p % 2 == 0 { Flavor::Sl2 } else { Flavor::Pgl2 };
        let g = LoopElement::t_coweight(&Coweight::rank_one(p, flavor).unwrap()).unwrap();
        for b in 0..3 {
            for m in -3..=3 {
                let x = ModeElement::letter(b, m);
                assert_eq!(ad_loop(&g, &x).unwrap(), spectral_flow(&x, p), "p={p} b={b} m={m}");
            }
        }
    }
    let x = ModeElement::letter(E, 4);
    assert_eq!(spectral_flow(&x, 0), x);
    assert_eq!(spectral_flow(&x, 1), ModeElement::letter(E, 5));
    assert_eq!(spectral_flow(&ModeElement::letter(H, 0), 1), ModeElement::letter(H, 0).add(&ModeElement::central(rf(1))));
}

#[test]
fn conjugation_examples() {
    assert!(verify_conjugation_nilpotent(&int(1), true, 1, 0, &vac()).unwrap());
    let v = state(Vacuum::untwisted(), &[(F, -1)]);
    assert!(verify_conjugation_nilpotent(&int(1), true, 1, 1, &v).unwrap());
    assert!(verify_conjugation_nilpotent(&int(0), true, 1, 1, &v).unwrap());
    assert!(verify_conjugation_nilpotent(&int(1), false, 2, -1, &v).unwrap());
    assert!(verify_conjugation_nilpotent(&int(1), true, 0, 0, &v).is_err());

    assert!(verify_conjugation_coweight(0, 1, &v).unwrap());
    assert!(verify_conjugation_coweight(1, 0, &vac()).unwrap());
    let w = state(Vacuum::untwisted(), &[(E, -1)]);
    assert!(verify_conjugation_coweight(2, -1, &w).unwrap());
}

#[test]
fn wrong_corrections_are_detected() {
    // dropping the central shift breaks the coweight identity at n = 0
    let c = check_conjugation_coweight(1, 0, &vac()).unwrap();
    let without = c.rhs.sub(&vac().scale(&level().scale(&ratio(1, 4))));
    assert!(!c.lhs.sub(&without).is_zero());
    // and dropping the derivative term breaks the nilpotent identity
    let v = state(Vacuum::untwisted(), &[(F, -1)]);
    let c = check_conjugation_nilpotent(&int(1), true, 1, 0, &v).unwrap();
    assert!(c.holds());
    let plain = sugawara_apply(0, &v).unwrap();
    assert!(!c.lhs.sub(&plain).is_zero());
}

#[test]
fn conjugation_by_nilpotent_loops() {
    let states = states_up_to(Vacuum::untwisted(), 3);
    for a in [1, -2] {
        for j in [1, 2] {
            for n in -1..=1 {
                for v in &states {
                    assert!(verify_conjugation_nilpotent(&int(a), true, j, n, v).unwrap(), "a={a} j={j} n={n} {v:?}");
                }
            }
        }
    }
}

#[test]
fn conjugation_by_coweights() {
    let states = states_up_to(Vacuum::untwisted(), 3);
    for p in [-2, -1, 1, 2] {
        for n in -2..=2 {
            for v in &states {
                assert!(verify_conjugation_coweight(p, n, v).unwrap(), "p={p} n={n} {v:?}");
            }
        }
    }
}

#[test]
fn minuscule_presentation() {
    let lambda = Coweight::rank_one(1, Flavor::Pgl2).unwrap();
    let r = verify_minuscule_presentation(&lambda, 3).unwrap();
    assert!(r.lowest_root_kills && r.cartan_scalar && r.positive_loops_kill);
    assert!(r.dimensions_match(), "{:?}", r.dimensions);
    assert!(r.passed());
    let top: Vec<_> = r.dimensions.iter().filter(|d| d.degree == 0).collect();
    assert_eq!(top.len(), 1);
    assert_eq!((top[0].twisted, top[0].quotient), (1, 1));
    // total dimensions per degree: 1, 3, 9, 22 as for the untwisted vacuum
    for (d, total) in [(0, 1), (1, 3), (2, 9), (3, 22)] {
        let sum: usize = r.dimensions.iter().filter(|x| x.degree == d).map(|x| x.twisted).sum();
        assert_eq!(sum, total);
    }
    // the e_{-1} generator gives a different quotient
    assert!(!r.alternative_generator_matches);

    for p in [0, 2] {
        let l = Coweight::rank_one(p, Flavor::Pgl2).unwrap();
        assert!(matches!(verify_minuscule_presentation(&l, 1), Err(Error::NotMinuscule(_))));
    }
}

fn letter() -> impl Strategy<Value = Letter> {
    (0usize..3, -3i64..4).prop_map(|(b, m)| Letter::new(b, m))
}

fn element() -> impl Strategy<Value = ModeElement> {
    prop::collection::vec((letter(), -3i64..4), 1..4).prop_map(|terms| {
        let mut x = ModeElement::zero();
        for (l, c) in terms {
            x.add_letter(l, rf(c));
        }
        x
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_identity(x in element(), y in element(), z in element()) {
        let a = bracket_modes(&x, &bracket_modes(&y, &z));
        let b = bracket_modes(&y, &bracket_modes(&z, &x));
        let c = bracket_modes(&z, &bracket_modes(&x, &y));
        prop_assert!(a.add(&b).add(&c).is_zero());
    }

    #[test]
    fn spectral_flow_is_an_automorphism(x in element(), y in element(), p in -3i64..4) {
        let lhs = spectral_flow(&bracket_modes(&x, &y), p);
        let rhs = bracket_modes(&spectral_flow(&x, p), &spectral_flow(&y, p));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ad_loop_matches_the_exponential_series(x in element(), c in -3i64..4, j in -2i64..3, positive: bool) {
        let a: Scalar = int(c);
        let g = if positive { LoopElement::exp_e(a.clone(), j, Flavor::Pgl2) } else { LoopElement::exp_f(a.clone(), j, Flavor::Pgl2) };
        let gen = ModeElement::letter(if positive { E } else { F }, j).scale(&RationalFunction::from_scalar(&affine_table(), a));
        let once = bracket_modes(&gen, &x);
        let twice = bracket_modes(&gen, &once);
        let series = x.add(&once).add(&twice.scale(&RationalFunction::from_scalar(&affine_table(), ratio(1, 2))));
        prop_assert_eq!(ad_loop(&g, &x).unwrap(), series);
    }

    #[test]
    fn ad_loop_composes(x in element(), c1 in -2i64..3, j1 in -2i64..3, c2 in -2i64..3, j2 in -2i64..3, p in -2i64..3) {
        let f = Flavor::Pgl2;
        let g = LoopElement::exp_e(int(c1), j1, f).mul(&LoopElement::t_coweight(&Coweight::rank_one(p, f).unwrap()).unwrap()).unwrap();
        let h = LoopElement::exp_f(int(c2), j2, f).mul(&LoopElement::weyl(f)).unwrap();
        let gh = g.mul(&h).unwrap();
        let lhs = ad_loop(&gh, &x).unwrap();
        let rhs = ad_loop(&g, &ad_loop(&h, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
