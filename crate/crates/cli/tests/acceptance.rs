//! One line per acceptance criterion, each checked exactly (a residual is
//! accepted only when it is symbolically zero) and within its time budget.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use hecke_core::affine_algebra::{
    central_charge, check_conjugation_coweight, check_conjugation_nilpotent, pbw_basis,
    verify_minuscule_presentation, SugawaraCache, Vacuum,
};
use hecke_core::exact_algebra::{int, ratio, Flavor, RationalFunction};
use hecke_core::kz_blocks::{
    casimir_omega, kz_transport, rho, two_point_solution, ward_transport, BlockSetup, Generator,
    Mutation, Param, WeightParams,
};
use hecke_core::root_loop::{birkhoff_factorize, verify_factorization, Coweight};

type Check = Result<String, String>;

struct Criterion {
    name: &'static str,
    budget: Duration,
    check: fn() -> Check,
}

const fn criterion(name: &'static str, secs: u64, check: fn() -> Check) -> Criterion {
    Criterion { name, budget: Duration::from_secs(secs), check }
}

fn virasoro() -> Check {
    let states = pbw_basis(Vacuum::untwisted(), 4);
    let mut cache = SugawaraCache::new(Vacuum::untwisted());
    let c = central_charge();
    let table = hecke_core::affine_algebra::affine_table();
    let mut checked = 0;
    for v in &states {
        for m in -2..=2i64 {
            for n in -2..=2i64 {
                let e = |e: hecke_core::Error| e.to_string();
                let sn = cache.apply(n, v).map_err(e)?;
                let sm = cache.apply(m, v).map_err(e)?;
                let lhs = cache.apply(m, &sn).map_err(e)?.sub(&cache.apply(n, &sm).map_err(e)?);
                let mut rhs = cache.apply(m + n, v).map_err(e)?.scale(&RationalFunction::from_int(&table, m - n));
                if m + n == 0 {
                    rhs = rhs.add(&v.scale(&c.scale(&ratio(m * m * m - m, 12))));
                }
                if !lhs.sub(&rhs).is_zero() {
                    return Err(format!("m={m} n={n} on {}", v.to_text()));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} relations on {} states", states.len()))
}

fn nilpotent() -> Check {
    let states = pbw_basis(Vacuum::untwisted(), 3);
    let mut checked = 0;
    for a in [1, -2] {
        for j in [1, 2] {
            for n in -1..=1 {
                for v in &states {
                    let c = check_conjugation_nilpotent(&int(a), true, j, n, v).map_err(|e| e.to_string())?;
                    if !c.holds() {
                        return Err(format!("a={a} j={j} n={n} on {}", v.to_text()));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} identities"))
}

fn coweight() -> Check {
    let states = pbw_basis(Vacuum::untwisted(), 3);
    let mut checked = 0;
    for p in [-2, -1, 1, 2] {
        for n in -2..=2 {
            for v in &states {
                let c = check_conjugation_coweight(p, n, v).map_err(|e| e.to_string())?;
                if !c.holds() {
                    return Err(format!("alpha(lambda)={p} n={n} on {}", v.to_text()));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} identities"))
}

fn minuscule() -> Check {
    let lambda = Coweight::rank_one(1, Flavor::Pgl2).map_err(|e| e.to_string())?;
    let r = verify_minuscule_presentation(&lambda, 3).map_err(|e| e.to_string())?;
    if r.passed() {
        Ok(format!("relations hold, {} graded pieces agree", r.dimensions.len()))
    } else {
        Err(format!("{r:?}"))
    }
}

fn factorization() -> Check {
    let mut checked = 0;
    for flavor in [Flavor::Sl2, Flavor::Pgl2] {
        for a in [1, -1, 2, -3] {
            for m in 0..=3 {
                for l in 1..=3 {
                    if flavor == Flavor::Sl2 && (m % 2 != 0 || l % 2 != 0) {
                        continue;
                    }
                    for j in 0..l {
                        let e = |e: hecke_core::Error| e.to_string();
                        let mu = Coweight::rank_one(m, flavor).map_err(e)?;
                        let lambda = Coweight::rank_one(l, flavor).map_err(e)?;
                        let f = birkhoff_factorize(&int(a), &mu, &lambda, j).map_err(e)?;
                        let c = verify_factorization(&int(a), &mu, &lambda, j, &f).map_err(e)?;
                        if !c.passed() || c.matches_hecke_class.is_none() {
                            return Err(format!("{flavor} a={a} mu={m} lambda={l} j={j}: {c:?}"));
                        }
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} factorizations"))
}

fn ward() -> Check {
    for n in 1..=3 {
        let r = ward_transport(&WeightParams::symbolic(n), Mutation::None).map_err(|e| e.to_string())?;
        if !r.verified() || r.identities.len() != 3 {
            return Err(format!("N={n}: {:?}", r.identities.iter().map(|s| s.zero).collect::<Vec<_>>()));
        }
    }
    for m in [Mutation::XiSign(0), Mutation::ExponentShift(0), Mutation::ExtraWeight] {
        let r = ward_transport(&WeightParams::symbolic(3), m).map_err(|e| e.to_string())?;
        if r.verified() {
            return Err(format!("mutation {} was not detected", m.describe()));
        }
    }
    Ok("N=1,2,3 reduce to zero; 3 mutations detected".into())
}

fn kz() -> Check {
    for n in 1..=3 {
        let which: Vec<usize> = (0..n).collect();
        let r = kz_transport(&WeightParams::symbolic(n), &which, Mutation::None).map_err(|e| e.to_string())?;
        if !r.verified() || r.identities.len() != n {
            return Err(format!("N={n}: {:?}", r.identities.iter().map(|s| s.zero).collect::<Vec<_>>()));
        }
    }
    Ok("every i <= N for N=1,2,3 reduces to zero".into())
}

fn two_point() -> Check {
    let mut checked = 0;
    for chi in [ratio(1, 2), int(1), ratio(3, 2)] {
        for k in [int(1), int(2), ratio(-1, 2)] {
            let r = two_point_solution(Param::Value(chi.clone()), k.clone()).map_err(|e| e.to_string())?;
            if !r.verified() {
                return Err(r.case);
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} explicit blocks satisfy the 2- and 3-point systems"))
}

fn casimir() -> Check {
    let s = BlockSetup::new(&WeightParams::symbolic(3)).map_err(|e| e.to_string())?;
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            let (wi, wj) = (s.point_weight(i), s.point_weight(j));
            let oij = casimir_omega(s.x(i), &wi, s.x(j), &wj).map_err(|e| e.to_string())?;
            let oji = casimir_omega(s.x(j), &wj, s.x(i), &wi).map_err(|e| e.to_string())?;
            if oij != oji {
                return Err(format!("Omega_{}{} is not symmetric", i + 1, j + 1));
            }
            for g in [Generator::E, Generator::H, Generator::F] {
                let diag = rho(g, &wi, s.x(i)).add(&rho(g, &wj, s.x(j)));
                if !oij.commutator(&diag).is_zero() {
                    return Err(format!("[Omega_{}{}, {g:?}] != 0", i + 1, j + 1));
                }
            }
        }
    }
    Ok("symmetric and sl2-invariant for every pair of 3 points".into())
}

fn corpus_files() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "cases"))
        .collect();
    files.sort();
    files
}

fn hecke(args: &[&str]) -> (i32, Vec<u8>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hecke")).args(args).output().expect("run hecke");
    (out.status.code().unwrap_or(-1), out.stdout, String::from_utf8_lossy(&out.stderr).into_owned())
}

fn cli_contract() -> Check {
    let files = corpus_files();
    for f in &files {
        let path = f.to_str().unwrap();
        let (c1, r1, _) = hecke(&["verify", "--stable", path]);
        let (c2, r2, _) = hecke(&["verify", "--stable", path]);
        if c1 != 0 || c2 != 0 {
            return Err(format!("{path} exited {c1}/{c2}"));
        }
        if r1 != r2 {
            return Err(format!("{path}: reports differ between runs"));
        }
    }
    let dir = std::env::temp_dir().join(format!("hecke-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let mutated = write("mutated.cases", "ward-transport id=ward-3 n=3\nward-transport id=shifted n=3 mutation=exponent-shift:2\n");
    let (code, _, err) = hecke(&["verify", "--stable", &mutated]);
    if code != 1 || !err.contains("shifted") {
        return Err(format!("mutated exponent: exit {code}, stderr {err}"));
    }
    let flipped = write("flipped.cases", "ward-transport id=ward-xi n=3 mutation=xi-sign:1 expect=verified\n");
    let (code, _, _) = hecke(&["verify", "--stable", &flipped]);
    if code != 1 {
        return Err(format!("flipped xi: exit {code}"));
    }
    let broken = write("broken.cases", "virasoro depth=2\nconjugation-coweight p=1 n=0..x\n");
    let (code, _, err) = hecke(&["verify", &broken]);
    if code != 2 || !err.contains(":2:") {
        return Err(format!("parse error: exit {code}, stderr {err}"));
    }
    let empty = write("empty.cases", "# nothing here\n");
    let (code, out, err) = hecke(&["verify", "--stable", &empty]);
    if code != 0 || !err.contains("warning") || !String::from_utf8_lossy(&out).contains("\"cases\": 0") {
        return Err(format!("empty file: exit {code}, stderr {err}"));
    }
    let unwritable = dir.join("missing").join("report.json");
    let (code, _, _) = hecke(&["verify", "--out", unwritable.to_str().unwrap(), &empty]);
    if code != 3 {
        return Err(format!("internal error: exit {code}"));
    }
    std::fs::remove_dir_all(&dir).ok();
    Ok(format!("{} corpus files byte-identical across runs; exit codes 0/1/2/3 as specified", files.len()))
}

fn main() -> ExitCode {
    let criteria = [
        criterion("Virasoro relations", 30, virasoro),
        criterion("conjugation by exp(a e t^j)", 30, nilpotent),
        criterion("conjugation by t^lambda", 60, coweight),
        criterion("minuscule presentation", 60, minuscule),
        criterion("Birkhoff factorization sweep", 10, factorization),
        criterion("Ward transport", 120, ward),
        criterion("KZ transport", 600, kz),
        criterion("two-point end-to-end", 60, two_point),
        criterion("Casimir properties", 5, casimir),
        criterion("CLI determinism and exit codes", 600, cli_contract),
    ];
    let mut failures = 0;
    for (i, Criterion { name, budget, check }) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= *budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}, but over the {budget:?} budget")),
            Err(d) => ("FAIL", d),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!("criterion {:>2} {status} {name} ({:.2}s): {detail}", i + 1, elapsed.as_secs_f64());
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
