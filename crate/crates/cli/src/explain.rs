//! Derivation transcripts: the instantiated operators and relations of a
//! case in canonical text, before any reduction.

use std::fmt::Write;

use hecke_core::affine_algebra::{
    central_charge, pbw_basis, sugawara_prefactor, verify_minuscule_presentation, AdjointData, Vacuum,
};
use hecke_core::exact_algebra::{scalar_text, Flavor};
use hecke_core::kz_blocks::{transport_transcript, two_point_solution, Param, WeightParams};
use hecke_core::root_loop::{birkhoff_factorize, hecke_input, Coweight, LoopElement};

use crate::case::{datum_from_name, CaseParams, CaseSpec, JChoice};

/// Renders the transcript of one case.
pub fn explain(case: &CaseSpec) -> Result<String, String> {
    let err = |e: hecke_core::Error| e.to_string();
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "case {} (line {}): {}", case.id, case.line, case.source).unwrap();
    match &case.params {
        CaseParams::Virasoro { depth, m, n } => {
            writeln!(w, "identity: [S_m,S_n] v = (m-n) S_(m+n) v + c (m^3-m)/12 delta_(m+n,0) v").unwrap();
            writeln!(w, "S_n = {} * sum_(a,b) :J^a J_a:_n", sugawara_prefactor().to_text()).unwrap();
            writeln!(w, "c = {}", central_charge().to_text()).unwrap();
            writeln!(w, "m in {m:?}, n in {n:?}").unwrap();
            states(w, *depth);
        }
        CaseParams::ConjugationNilpotent { a, j, n, depth, positive } => {
            writeln!(w, "identity: Ad(g) S_n v = (S_n + t^(n+1) (d_t g) g^-1) v").unwrap();
            for av in a {
                for &jj in j {
                    let g = if *positive {
                        LoopElement::exp_e(av.clone(), jj, Flavor::Pgl2)
                    } else {
                        LoopElement::exp_f(av.clone(), jj, Flavor::Pgl2)
                    };
                    writeln!(w, "g = {} = {}", g.to_text(), g.realize().map_err(err)?.to_text()).unwrap();
                    let data = AdjointData::new(&g).map_err(err)?;
                    for &nn in n {
                        writeln!(w, "  correction for n={nn}: {}", data.sugawara_correction(nn).to_text()).unwrap();
                    }
                }
            }
            states(w, *depth);
        }
        CaseParams::ConjugationCoweight { p, n, depth } => {
            writeln!(w, "identity: Ad(t^lambda) S_n v = (S_n + lambda_n + delta_(n,0) (k/2) kappa(lambda,lambda)) v").unwrap();
            for &pp in p {
                let lambda = Coweight::rank_one(pp, Flavor::Pgl2).map_err(err)?;
                let g = LoopElement::t_coweight(&lambda).map_err(err)?;
                writeln!(w, "alpha(lambda) = {pp}: t^lambda = {}, lambda_n = ({pp}/2) h[n]", g.realize().map_err(err)?.to_text()).unwrap();
            }
            writeln!(w, "n in {n:?}").unwrap();
            states(w, *depth);
        }
        CaseParams::Minuscule { p, depth } => {
            let lambda = Coweight::rank_one(*p, Flavor::Pgl2).map_err(err)?;
            let vac = Vacuum::Twisted(*p);
            writeln!(w, "twisted vacuum {}", hecke_core::affine_algebra::ModuleState::vacuum(vac).to_text()).unwrap();
            writeln!(w, "annihilators: e[m] for m >= p, f[m] for m >= -p, h[m] for m > 0; h[0] acts by -p*k").unwrap();
            writeln!(w, "quotient: M_(-lambda*) / N with N generated by f[-1]*ind").unwrap();
            let r = verify_minuscule_presentation(&lambda, *depth).map_err(err)?;
            writeln!(w, "degree weight twisted quotient").unwrap();
            for d in &r.dimensions {
                writeln!(w, "{:>6} {:>6} {:>7} {:>8}", d.degree, d.weight, d.twisted, d.quotient).unwrap();
            }
        }
        CaseParams::Factorize { a, mu, lambda, j_choice, j, flavors } => {
            for &flavor in flavors {
                for av in a {
                    for &m in mu {
                        for &l in lambda {
                            if flavor == Flavor::Sl2 && (m % 2 != 0 || l % 2 != 0) {
                                continue;
                            }
                            let js: Vec<i64> = match j_choice {
                                JChoice::All => (0..l.max(0)).collect(),
                                JChoice::Listed => j.clone(),
                            };
                            for &jj in &js {
                                let muw = Coweight::rank_one(m, flavor).map_err(err)?;
                                let lw = Coweight::rank_one(l, flavor).map_err(err)?;
                                let input = hecke_input(av, &muw, &lw, jj).map_err(err)?;
                                let f = birkhoff_factorize(av, &muw, &lw, jj).map_err(err)?;
                                let tnu = LoopElement::t_coweight(&f.nu).map_err(err)?;
                                let product = f.left.mul(&tnu).map_err(err)?.mul(&f.right).map_err(err)?;
                                writeln!(w, "{flavor} a={} alpha(mu)={m} alpha(lambda)={l} j={jj} ({:?})", scalar_text(av), f.regime).unwrap();
                                writeln!(w, "  input   = {} = {}", input.to_text(), input.realize().map_err(err)?).unwrap();
                                writeln!(w, "  A       = {} = {}", f.left.to_text(), f.left.realize().map_err(err)?).unwrap();
                                writeln!(w, "  t^nu    = {} with alpha(nu) = {}", tnu.realize().map_err(err)?, scalar_text(&f.nu.coords()[0])).unwrap();
                                writeln!(w, "  B       = {} = {}", f.right.to_text(), f.right.realize().map_err(err)?).unwrap();
                                writeln!(w, "  A t^nu B = {}", product.realize().map_err(err)?).unwrap();
                            }
                        }
                    }
                }
            }
        }
        CaseParams::HeckeClass { datum, mu, lambda, alpha, j, flavor, .. } => {
            let d = datum_from_name(datum)?;
            let muw = Coweight::from_ints(&d, mu, *flavor).map_err(err)?;
            let lw = Coweight::from_ints(&d, lambda, *flavor).map_err(err)?;
            let shift = hecke_core::exact_algebra::int(*j) + muw.pairing(alpha);
            let coroot = Coweight::coroot(&d, alpha, Flavor::Pgl2).map_err(err)?;
            let sum = muw.add(&lw).map_err(err)?;
            let coords = sum.coords().iter().zip(coroot.coords()).map(|(a, c)| a - &shift * c).collect();
            let raw = Coweight::new(&d, coords, *flavor).map_err(err)?;
            let (dominant, word) = raw.dominant_rep();
            writeln!(w, "type {datum}, alpha = {alpha:?}, coroot = {}", coroot.to_text()).unwrap();
            writeln!(w, "nu = mu + lambda - (j + alpha(mu)) alpha^vee = {} + {} - {} {}", muw.to_text(), lw.to_text(), scalar_text(&shift), coroot.to_text()).unwrap();
            writeln!(w, "nu before dominance: {}", raw.to_text()).unwrap();
            writeln!(w, "simple reflections applied: {word:?}").unwrap();
            writeln!(w, "nu after dominance:  {}", dominant.to_text()).unwrap();
        }
        CaseParams::WardTransport { params, mutation } => {
            transcript(w, params, None, *mutation)?;
        }
        CaseParams::KzTransport { params, points, mutation } => {
            transcript(w, params, Some(points), *mutation)?;
        }
        CaseParams::TwoPoint { chi, k } => {
            for c in chi {
                for kv in k {
                    let r = two_point_solution(c.clone(), kv.clone()).map_err(err)?;
                    writeln!(w, "{}", r.case).unwrap();
                    writeln!(w, "  Omega_12 eigenvalue: {}", r.casimir.to_text()).unwrap();
                    writeln!(w, "  Psi_2 = {}", r.psi.to_text()).unwrap();
                }
            }
        }
    }
    Ok(out)
}

fn states(w: &mut String, depth: i64) {
    let basis = pbw_basis(Vacuum::untwisted(), depth);
    writeln!(w, "states: {} PBW monomials of depth <= {depth}", basis.len()).unwrap();
}

fn transcript(
    w: &mut String,
    params: &WeightParams,
    kz: Option<&[usize]>,
    mutation: hecke_core::kz_blocks::Mutation,
) -> Result<(), String> {
    let t = transport_transcript(params, kz, mutation).map_err(|e| e.to_string())?;
    writeln!(w, "setup: {}", t.setup_text).unwrap();
    let symbolic = params.weights.iter().filter(|p| matches!(p, Param::Symbolic)).count();
    writeln!(w, "symbolic weights: {symbolic}").unwrap();
    writeln!(w, "Upsilon = {}", t.upsilon.to_text()).unwrap();
    writeln!(w, "operators ({}):", t.operators.len()).unwrap();
    for (name, op) in &t.operators {
        writeln!(w, "  {name}: {}", op.to_text()).unwrap();
    }
    writeln!(w, "relations ({}):", t.relations.len()).unwrap();
    for (i, r) in t.relations.iter().enumerate() {
        writeln!(w, "  r{}: {}", i + 1, r.to_text()).unwrap();
    }
    writeln!(w, "residuals before reduction ({}):", t.residuals.len()).unwrap();
    for (name, r) in &t.residuals {
        writeln!(w, "  {name}: {}", r.to_text()).unwrap();
    }
    Ok(())
}
