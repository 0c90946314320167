//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::{Command, ExitCode};

use deficiency::betti::{verify_theorem, TheoremReport};
use deficiency::cech::{build_full_degree_complex, natural_slice};
use deficiency::cli::run_oracle;
use deficiency::corpus::{enumerate_ideals, projective_plane_ideal, CorpusSpec};
use deficiency::ext::{build_ext_module, ext_multiplication_direct};
use deficiency::stanley::{
    build_stanley_decomposition, verify_filtration, FiltrationCondition, StanleyDecomposition,
};
use deficiency::{MonomialIdeal, Multidegree, PrimeField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every comparison below is between exact integers.
const TOLERANCE: i64 = 0;

const CORPUS_SIZE: usize = 979;
/// Random ideals per variable count; `n = 1` with exponents up to 3 has
/// only three proper nonzero ideals.
const ORACLE_IDEALS: [(usize, usize); 4] = [(1, 3), (2, 47), (3, 75), (4, 75)];
const ORACLE_TOTAL: usize = 200;
const ORACLE_SEED: u64 = 20_240_601;
const CECH_TRIPLES: usize = 1000;
const CECH_SEED: u64 = 7;

fn f2() -> PrimeField {
    PrimeField::new(2).unwrap()
}

fn le(a: Option<i64>, b: Option<i64>) -> bool {
    match (a, b) {
        (Some(x), Some(y)) => x <= y + TOLERANCE,
        _ => true,
    }
}

fn dim(r: &TheoremReport) -> Option<i64> {
    r.dim.map(|d| d as i64)
}

struct Corpus {
    ideals: Vec<MonomialIdeal>,
    reports: Vec<(usize, TheoremReport)>,
    errors: Vec<String>,
}

fn corpus() -> Corpus {
    let ideals = enumerate_ideals(&CorpusSpec::exhaustive(3, 2)).unwrap();
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (k, ideal) in ideals.iter().enumerate() {
        for i in 0..=3 {
            match verify_theorem(ideal, i, f2()) {
                Ok(r) => reports.push((k, r)),
                Err(e) => errors.push(format!("{ideal} i={i}: {e}")),
            }
        }
    }
    Corpus { ideals, reports, errors }
}

fn first_failure(
    c: &Corpus,
    pred: impl Fn(&TheoremReport) -> bool,
) -> Option<(&MonomialIdeal, &TheoremReport)> {
    c.reports.iter().find(|(_, r)| !pred(r)).map(|(k, r)| (&c.ideals[*k], r))
}

fn criterion_1(c: &Corpus) -> Result<String, String> {
    if c.ideals.len() != CORPUS_SIZE {
        return Err(format!("corpus has {} ideals, expected {CORPUS_SIZE}", c.ideals.len()));
    }
    if let Some(e) = c.errors.first() {
        return Err(e.clone());
    }
    if let Some((ideal, r)) = first_failure(c, |r| le(r.reg_exact, dim(r))) {
        return Err(format!("{ideal} i={}: reg {:?} > dim {:?}", r.i, r.reg_exact, r.dim));
    }
    let nonzero = c.reports.iter().filter(|(_, r)| !r.zero_module).count();
    Ok(format!("{} modules ({nonzero} nonzero), reg <= dim everywhere", c.reports.len()))
}

fn criterion_2(c: &Corpus) -> Result<String, String> {
    if let Some((ideal, r)) = first_failure(c, |r| le(dim(r), Some(3 - r.i as i64))) {
        return Err(format!("{ideal} i={}: dim {:?} > n - i", r.i, r.dim));
    }
    Ok(format!("{} modules, dim <= n - i everywhere", c.reports.len()))
}

fn criterion_3(c: &Corpus) -> Result<String, String> {
    let chain = |r: &TheoremReport| {
        le(r.reg_exact, r.reg_filtration_bound) && le(r.reg_filtration_bound, dim(r))
    };
    if let Some((ideal, r)) = first_failure(c, chain) {
        return Err(format!(
            "{ideal} i={}: reg {:?} bound {:?} dim {:?}",
            r.i, r.reg_exact, r.reg_filtration_bound, r.dim
        ));
    }
    let consistent = c.reports.iter().all(|(_, r)| {
        r.reg_exact.is_none() == r.zero_module
            && r.reg_filtration_bound.is_none() == r.zero_module
            && r.dim.is_none() == r.zero_module
    });
    if !consistent {
        return Err("zero-module sentinels disagree".into());
    }
    Ok("reg <= bound <= dim for every module".into())
}

fn criterion_4() -> Result<String, String> {
    let mut ideals = 0;
    let mut degrees = 0;
    for (n, count) in ORACLE_IDEALS {
        let spec = CorpusSpec::random(n, 3, count, 8, ORACLE_SEED + n as u64);
        let family = enumerate_ideals(&spec).map_err(|e| e.to_string())?;
        for ideal in &family {
            let indices: Vec<usize> = (0..=n).collect();
            let status = run_oracle(ideal, &indices, f2()).map_err(|e| format!("{ideal}: {e}"))?;
            if status.skipped.is_some() {
                return Err(format!("{ideal}: oracle skipped"));
            }
            if let Some(m) = status.mismatches.first() {
                return Err(format!(
                    "{ideal} i={} degree {}: ext {} taylor {}",
                    m.i, m.degree, m.ext, m.taylor
                ));
            }
            degrees += status.checked_degrees;
        }
        ideals += family.len();
    }
    if ideals != ORACLE_TOTAL {
        return Err(format!("only {ideals} distinct random ideals"));
    }
    Ok(format!("{ideals} ideals, {degrees} degrees agree exactly"))
}

fn criterion_5(c: &Corpus) -> Result<String, String> {
    let mut maps = 0;
    for ideal in &c.ideals {
        for i in 0..=3 {
            let module = build_ext_module(ideal, i, f2()).map_err(|e| format!("{ideal} i={i}: {e}"))?;
            for a in module.degree_box().points() {
                for j in 0..3 {
                    if a.0[j] < 1 {
                        continue;
                    }
                    let m = ext_multiplication_direct(ideal, i, &a, j, f2()).map_err(|e| e.to_string())?;
                    if !m.is_square() || !m.is_invertible() {
                        return Err(format!("{ideal} i={i} degree {a} x{}", j + 1));
                    }
                    maps += 1;
                }
            }
        }
    }
    Ok(format!("{maps} maps on the top layer are invertible"))
}

fn criterion_6() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(CECH_SEED);
    let field = f2();
    let mut nonempty = 0;
    for _ in 0..CECH_TRIPLES {
        let n = rng.random_range(1..=4usize);
        let gens: Vec<Vec<u32>> = (0..rng.random_range(1..=5))
            .map(|_| (0..n).map(|_| rng.random_range(0..=3u32)).collect::<Vec<u32>>())
            .filter(|g: &Vec<u32>| g.iter().any(|&e| e > 0))
            .collect();
        let ideal = MonomialIdeal::new(n, gens).unwrap();
        let a = Multidegree((0..n).map(|_| rng.random_range(-3..=2i64)).collect());
        let restricted = natural_slice(&ideal, &a, field).map_err(|e| e.to_string())?;
        let full = build_full_degree_complex(&ideal, &a, field).map_err(|e| e.to_string())?;
        let (r, f) = (restricted.cohomology_dims(), full.cohomology_dims());
        if r != f {
            return Err(format!("{ideal} degree {a}: restricted {r:?} full {f:?}"));
        }
        nonempty += usize::from(r.iter().any(|&d| d > 0));
    }
    Ok(format!("{CECH_TRIPLES} triples agree ({nonempty} with nonzero cohomology)"))
}

fn criterion_7(c: &Corpus) -> Result<String, String> {
    if let Some((ideal, r)) = first_failure(c, |r| r.filtration.passed) {
        return Err(format!("{ideal} i={}: {:?}", r.i, r.filtration.violation));
    }
    let ideal = MonomialIdeal::new(1, vec![vec![2]]).unwrap();
    let module = build_ext_module(&ideal, 1, f2()).map_err(|e| e.to_string())?;
    let good = build_stanley_decomposition(&module);
    let mut pairs = good.pairs().to_vec();
    pairs.reverse();
    let bad = verify_filtration(&StanleyDecomposition::from_pairs(1, pairs), &module);
    match bad.violation {
        Some(v) if !bad.passed && v.condition == FiltrationCondition::ColonContainsOutsideVariables => Ok(format!(
            "all filtrations pass; reversed order fails the colon condition at position {} degree {}",
            v.position, v.degree
        )),
        other => Err(format!("negative control not rejected: {other:?}")),
    }
}

fn criterion_8(c: &Corpus) -> Result<String, String> {
    let finite: Vec<_> = c.reports.iter().filter(|(_, r)| r.finite_length && !r.zero_module).collect();
    if let Some((k, r)) = finite.iter().find(|(_, r)| !le(r.reg_exact, Some(0))) {
        return Err(format!("{} i={}: reg {:?}", c.ideals[*k], r.i, r.reg_exact));
    }
    if finite.is_empty() {
        return Err("no nonzero finite length modules found".into());
    }
    Ok(format!("{} nonzero finite length modules, all with reg <= 0", finite.len()))
}

fn criterion_9() -> Result<String, String> {
    let fixtures: Vec<(MonomialIdeal, usize, i64, usize)> = vec![
        (MonomialIdeal::maximal(2), 2, 0, 0),
        (MonomialIdeal::maximal(3), 3, 0, 0),
        (MonomialIdeal::new(2, vec![vec![1, 0]]).unwrap(), 1, 1, 1),
        (MonomialIdeal::new(1, vec![vec![2]]).unwrap(), 1, 0, 0),
    ];
    for (ideal, i, reg, d) in fixtures {
        let r = verify_theorem(&ideal, i, f2()).map_err(|e| e.to_string())?;
        if r.reg_exact != Some(reg) || r.dim != Some(d) || !r.passed() {
            return Err(format!("{ideal} i={i}: reg {:?} dim {:?}", r.reg_exact, r.dim));
        }
    }
    for n in [2usize, 3] {
        let module = build_ext_module(&MonomialIdeal::maximal(n), n, f2()).map_err(|e| e.to_string())?;
        let hilbert = module.hilbert();
        let nonzero: Vec<_> = hilbert.iter().filter(|(_, d)| *d > 0).collect();
        if nonzero.len() != 1 || nonzero[0].0 != Multidegree::zero(n) || nonzero[0].1 != 1 {
            return Err(format!("top Ext of the residue field for n = {n}: {nonzero:?}"));
        }
    }
    Ok("residue field, hyperplane and square fixtures match".into())
}

fn criterion_10() -> Result<String, String> {
    let ideal = projective_plane_ideal();
    let mut hilbert = Vec::new();
    for p in [2u64, 3] {
        let field = PrimeField::new(p).unwrap();
        let mut per_i = Vec::new();
        for i in 0..=6 {
            let r = verify_theorem(&ideal, i, field).map_err(|e| e.to_string())?;
            if !r.passed() {
                return Err(format!("char {p} i={i}: {:?}", r.failure()));
            }
            per_i.push(r.hilbert);
        }
        hilbert.push(per_i);
    }
    let differing: Vec<usize> = (0..=6).filter(|&i| hilbert[0][i] != hilbert[1][i]).collect();
    if differing.is_empty() {
        return Err("Hilbert functions agree in characteristics 2 and 3".into());
    }
    Ok(format!("Hilbert functions differ for i in {differing:?}; inequalities hold in both"))
}

fn criterion_11() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str, extra: &[&str]| -> Result<Vec<u8>, String> {
        let path = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_deficiency"))
            .args(["sweep", "--n", "3", "--max-exp", "3", "--samples", "60", "--seed", "99", "--oracle"])
            .args(extra)
            .arg("--json")
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!("sweep exited with {:?}", status.status.code()));
        }
        std::fs::read(&path).map_err(|e| e.to_string())
    };
    let a = run("a.json", &["--jobs", "1"])?;
    let b = run("b.json", &["--jobs", "4"])?;
    if a != b {
        return Err("reports differ between runs".into());
    }
    Ok(format!("two runs wrote identical {} byte reports", a.len()))
}

fn main() -> ExitCode {
    let c = corpus();
    let results: Vec<(&str, Result<String, String>)> = vec![
        ("1 theorem sweep", criterion_1(&c)),
        ("2 corollary sweep", criterion_2(&c)),
        ("3 chain inequality", criterion_3(&c)),
        ("4 oracle equivalence", criterion_4()),
        ("5 bijectivity", criterion_5(&c)),
        ("6 restricted complex agreement", criterion_6()),
        ("7 filtration verification", criterion_7(&c)),
        ("8 finite length", criterion_8(&c)),
        ("9 closed-form fixtures", criterion_9()),
        ("10 characteristic sensitivity", criterion_10()),
        ("11 determinism", criterion_11()),
    ];
    let mut failed = 0;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
