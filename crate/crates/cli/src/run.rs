//! Case execution and JSON reports.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use hecke_core::affine_algebra::{
    central_charge, check_conjugation_coweight, check_conjugation_nilpotent, pbw_basis,
    verify_minuscule_presentation, ModuleState, SugawaraCache, Vacuum,
};
use hecke_core::exact_algebra::{ratio, scalar_text, Flavor, RationalFunction};
use hecke_core::kz_blocks::{kz_transport, two_point_solution, ward_transport, IdentityStatus, Param};
use hecke_core::root_loop::{birkhoff_factorize, hecke_class, verify_factorization, Coweight};

use crate::case::{datum_from_name, CaseParams, CaseSpec, Expect, JChoice};

pub const VERIFIED: &str = "verified";
pub const FAILED: &str = "failed";
pub const ERROR: &str = "error";

/// One checked identity.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityReport {
    pub case: String,
    pub identity: String,
    pub status: &'static str,
    /// `0` when verified, otherwise the canonical text of the residual.
    pub residual: String,
    pub relations_used: usize,
    pub prolongation_order: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub kind: &'static str,
    pub line: usize,
    pub expect: &'static str,
    /// `verified` when the outcome matches `expect`, `failed` otherwise, and
    /// `error` when the verifier itself failed.
    pub status: &'static str,
    pub identities: Vec<IdentityReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub cases: usize,
    pub verified: usize,
    pub failed: usize,
    pub errors: usize,
    pub identities: usize,
    pub identities_verified: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub cases: Vec<CaseReport>,
    pub summary: Summary,
}

impl RunReport {
    /// 0 when every case verified, 1 on a verification failure, 3 when a
    /// verifier returned an error.
    pub fn exit_code(&self) -> i32 {
        if self.summary.errors > 0 {
            3
        } else if self.summary.failed > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Worker threads; `None` uses one per core.
    pub jobs: Option<usize>,
    /// Omit timing fields so reports compare byte for byte.
    pub stable: bool,
}

struct Outcome {
    identities: Vec<IdentityReport>,
    notes: Vec<String>,
}

/// Runs every case on a worker pool; reports keep the order of `cases`.
pub fn run_cases(cases: &[CaseSpec], options: RunOptions) -> RunReport {
    let start = Instant::now();
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = options.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build().expect("thread pool");
    let reports: Vec<CaseReport> =
        pool.install(|| cases.par_iter().map(|c| run_case(c, options.stable)).collect());
    let count = |s: &str| reports.iter().filter(|r| r.status == s).count();
    let identities = reports.iter().map(|r| r.identities.len()).sum();
    let identities_verified =
        reports.iter().flat_map(|r| &r.identities).filter(|i| i.status == VERIFIED).count();
    let summary = Summary {
        cases: reports.len(),
        verified: count(VERIFIED),
        failed: count(FAILED),
        errors: count(ERROR),
        identities,
        identities_verified,
        elapsed_ms: (!options.stable).then(|| millis(start.elapsed())),
    };
    RunReport { cases: reports, summary }
}

fn millis(d: Duration) -> u64 {
    d.as_millis().try_into().unwrap_or(u64::MAX)
}

pub fn run_case(case: &CaseSpec, stable: bool) -> CaseReport {
    let start = Instant::now();
    let result = std::panic::catch_unwind(|| execute(case))
        .unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "verifier panicked".into());
            Err(format!("internal panic: {msg}"))
        });
    let elapsed_ms = (!stable).then(|| millis(start.elapsed()));
    let base = |status, identities, notes, error| CaseReport {
        id: case.id.clone(),
        kind: case.kind.name(),
        line: case.line,
        expect: case.expect.name(),
        status,
        identities,
        notes,
        error,
        elapsed_ms,
    };
    match result {
        Ok(outcome) => {
            let all_zero = outcome.identities.iter().all(|i| i.status == VERIFIED);
            let ok = match case.expect {
                Expect::Verified => all_zero && !outcome.identities.is_empty(),
                Expect::Failed => !all_zero,
            };
            base(if ok { VERIFIED } else { FAILED }, outcome.identities, outcome.notes, None)
        }
        Err(e) => base(ERROR, Vec::new(), Vec::new(), Some(e)),
    }
}

fn identity(case: &CaseSpec, name: String, residual: Option<String>, relations: usize, order: u32) -> IdentityReport {
    IdentityReport {
        case: case.id.clone(),
        identity: name,
        status: if residual.is_none() { VERIFIED } else { FAILED },
        residual: residual.unwrap_or_else(|| "0".into()),
        relations_used: relations,
        prolongation_order: order,
    }
}

fn from_status(case: &CaseSpec, prefix: &str, s: &IdentityStatus, relations: usize, order: u32) -> IdentityReport {
    let residual = (!s.zero).then(|| s.residual.to_text());
    identity(case, format!("{prefix}{}", s.identity), residual, relations, order)
}

fn flavor_name(f: Flavor) -> &'static str {
    match f {
        Flavor::Sl2 => "sl2",
        Flavor::Pgl2 => "pgl2",
    }
}

fn execute(case: &CaseSpec) -> Result<Outcome, String> {
    let err = |e: hecke_core::Error| e.to_string();
    let mut identities = Vec::new();
    let mut notes = Vec::new();
    match &case.params {
        CaseParams::Virasoro { depth, m, n } => {
            let states = pbw_basis(Vacuum::untwisted(), *depth);
            let mut cache = SugawaraCache::new(Vacuum::untwisted());
            let c = central_charge();
            notes.push(format!("{} states of depth <= {depth}, symbolic k", states.len()));
            for &mm in m {
                for &nn in n {
                    let mut residual = None;
                    for v in &states {
                        let sn = cache.apply(nn, v).map_err(err)?;
                        let sm = cache.apply(mm, v).map_err(err)?;
                        let lhs = cache
                            .apply(mm, &sn)
                            .map_err(err)?
                            .sub(&cache.apply(nn, &sm).map_err(err)?);
                        let mut rhs = cache.apply(mm + nn, v).map_err(err)?.scale(&rf_int(mm - nn));
                        if mm + nn == 0 {
                            rhs = rhs.add(&v.scale(&c.scale(&ratio(mm * mm * mm - mm, 12))));
                        }
                        let diff = lhs.sub(&rhs);
                        if !diff.is_zero() {
                            residual = Some(format!("on {}: {}", v.to_text(), diff.to_text()));
                            break;
                        }
                    }
                    identities.push(identity(case, format!("[S_{mm},S_{nn}]"), residual, 0, 0));
                }
            }
        }
        CaseParams::ConjugationNilpotent { a, j, n, depth, positive } => {
            let states = pbw_basis(Vacuum::untwisted(), *depth);
            let x = if *positive { "e" } else { "f" };
            for av in a {
                for &jj in j {
                    for &nn in n {
                        let residual = first_residual(&states, |v| {
                            let c = check_conjugation_nilpotent(av, *positive, jj, nn, v).map_err(err)?;
                            Ok(c.lhs.sub(&c.rhs))
                        })?;
                        let name = format!("Ad(exp({}*{x}*t^{jj})) S_{nn}", scalar_text(av));
                        identities.push(identity(case, name, residual, 0, 0));
                    }
                }
            }
        }
        CaseParams::ConjugationCoweight { p, n, depth } => {
            let states = pbw_basis(Vacuum::untwisted(), *depth);
            for &pp in p {
                for &nn in n {
                    let residual = first_residual(&states, |v| {
                        let c = check_conjugation_coweight(pp, nn, v).map_err(err)?;
                        Ok(c.lhs.sub(&c.rhs))
                    })?;
                    identities.push(identity(case, format!("Ad(t^lambda) S_{nn} alpha(lambda)={pp}"), residual, 0, 0));
                }
            }
        }
        CaseParams::Minuscule { p, depth } => {
            let lambda = Coweight::rank_one(*p, Flavor::Pgl2).map_err(err)?;
            let r = verify_minuscule_presentation(&lambda, *depth).map_err(err)?;
            let flag = |b: bool| (!b).then(|| "relation does not hold".to_string());
            identities.push(identity(case, "lowest root vector kills".into(), flag(r.lowest_root_kills), 0, 0));
            identities.push(identity(case, "Cartan acts by a scalar".into(), flag(r.cartan_scalar), 0, 0));
            identities.push(identity(case, "positive loops kill".into(), flag(r.positive_loops_kill), 0, 0));
            let mismatch: Vec<String> = r
                .dimensions
                .iter()
                .filter(|d| d.twisted != d.quotient)
                .map(|d| format!("degree {} weight {}: {} vs {}", d.degree, d.weight, d.twisted, d.quotient))
                .collect();
            let residual = (!mismatch.is_empty()).then(|| mismatch.join("; "));
            identities.push(identity(case, format!("graded dimensions up to degree {depth}"), residual, 0, 0));
            if !r.alternative_generator_matches {
                notes.push("the quotient by the submodule generated from e[-1] has different dimensions".into());
            }
        }
        CaseParams::Factorize { a, mu, lambda, j_choice, j, flavors } => {
            let mut skipped = 0;
            for &flavor in flavors {
                for av in a {
                    for &m in mu {
                        for &l in lambda {
                            if flavor == Flavor::Sl2 && (m % 2 != 0 || l % 2 != 0) {
                                skipped += 1;
                                continue;
                            }
                            let js: Vec<i64> = match j_choice {
                                JChoice::All => (0..l.max(0)).collect(),
                                JChoice::Listed => j.clone(),
                            };
                            for &jj in &js {
                                let muw = Coweight::rank_one(m, flavor).map_err(err)?;
                                let lw = Coweight::rank_one(l, flavor).map_err(err)?;
                                let f = birkhoff_factorize(av, &muw, &lw, jj).map_err(err)?;
                                let check = verify_factorization(av, &muw, &lw, jj, &f).map_err(err)?;
                                let label = format!(
                                    "{} a={} mu={m} lambda={l} j={jj}",
                                    flavor_name(flavor),
                                    scalar_text(av)
                                );
                                let flag = |b: bool, what: &str| (!b).then(|| what.to_string());
                                identities.push(identity(case, format!("{label}: product"), flag(check.product, "A t^nu B differs from the input"), 0, 0));
                                identities.push(identity(case, format!("{label}: A regular at infinity"), flag(check.left_regular_at_infinity, "A is not regular at infinity"), 0, 0));
                                identities.push(identity(case, format!("{label}: B regular at zero"), flag(check.right_regular_at_zero, "B is not regular at zero"), 0, 0));
                                if let Some(ok) = check.matches_hecke_class {
                                    identities.push(identity(case, format!("{label}: nu matches hecke class"), flag(ok, "middle exponent differs from the Hecke class"), 0, 0));
                                }
                            }
                        }
                    }
                }
            }
            if skipped > 0 {
                notes.push(format!("{skipped} (mu, lambda) pairs with odd pairings skipped in the sl2 flavor"));
            }
        }
        CaseParams::HeckeClass { datum, mu, lambda, alpha, j, flavor, nu } => {
            let d = datum_from_name(datum)?;
            let muw = Coweight::from_ints(&d, mu, *flavor).map_err(err)?;
            let lw = Coweight::from_ints(&d, lambda, *flavor).map_err(err)?;
            let class = hecke_class(&muw, &lw, alpha, *j).map_err(err)?;
            identities.push(identity(
                case,
                "class is dominant".into(),
                (!class.is_dominant()).then(|| class.to_text()),
                0,
                0,
            ));
            if let Some(expected) = nu {
                let ew = Coweight::from_ints(&d, expected, *flavor).map_err(err)?;
                let residual = (ew != class).then(|| format!("got {} expected {}", class.to_text(), ew.to_text()));
                identities.push(identity(case, "class matches nu".into(), residual, 0, 0));
            }
            notes.push(format!("nu = {}", class.to_text()));
        }
        CaseParams::WardTransport { params, mutation } => {
            let r = ward_transport(params, *mutation).map_err(err)?;
            for s in &r.identities {
                identities.push(from_status(case, "", s, r.relations_used, r.prolongation_order));
            }
            notes.extend(r.notes);
        }
        CaseParams::KzTransport { params, points, mutation } => {
            let r = kz_transport(params, points, *mutation).map_err(err)?;
            for s in &r.identities {
                identities.push(from_status(case, "", s, r.relations_used, r.prolongation_order));
            }
            notes.extend(r.notes);
        }
        CaseParams::TwoPoint { chi, k } => {
            for c in chi {
                for kv in k {
                    let r = two_point_solution(c.clone(), kv.clone()).map_err(err)?;
                    let label = format!("chi={} k={}", param_text(c), scalar_text(kv));
                    for s in &r.two_point {
                        identities.push(from_status(case, &format!("{label}: 2-point "), s, 0, 0));
                    }
                    for s in &r.three_point {
                        identities.push(from_status(case, &format!("{label}: 3-point "), s, 0, 0));
                    }
                }
            }
        }
    }
    Ok(Outcome { identities, notes })
}

fn param_text(p: &Param) -> String {
    match p {
        Param::Symbolic | Param::SameAs(_) => "sym".into(),
        Param::Value(v) => scalar_text(v),
    }
}

fn rf_int(n: i64) -> RationalFunction {
    RationalFunction::from_int(&hecke_core::affine_algebra::affine_table(), n)
}

fn first_residual(
    states: &[ModuleState],
    mut residual: impl FnMut(&ModuleState) -> Result<ModuleState, String>,
) -> Result<Option<String>, String> {
    for v in states {
        let r = residual(v)?;
        if !r.is_zero() {
            return Ok(Some(format!("on {}: {}", v.to_text(), r.to_text())));
        }
    }
    Ok(None)
}
