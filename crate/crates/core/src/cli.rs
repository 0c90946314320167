//! Command-line front end: `analyze`, `sweep` and `examples`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::betti::{verify_theorem, TheoremReport};
use crate::corpus::{enumerate_ideals, named_examples, CorpusMode, CorpusSpec};
use crate::error::{input, Error, Result};
use crate::ext::build_ext_module;
use crate::linalg::PrimeField;
use crate::monomial::{parse_ideal, MonomialIdeal, Multidegree};
use crate::taylor::{TaylorComplex, MAX_TAYLOR_GENERATORS};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "deficiency", version, about = "Ext modules, Stanley filtrations and regularity of monomial quotients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze one ideal read from a file (`-` for stdin).
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Verify the inequalities over a family of ideals.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Analyze the built-in example ideals.
    Examples {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// Characteristic of the coefficient field.
    #[arg(long = "char", default_value_t = 2)]
    characteristic: u64,
    /// Cohomological indices: `all` or a comma list such as `1,2`.
    #[arg(short = 'i', default_value = "all")]
    indices: String,
    /// Cross-check every box degree against the Taylor complex.
    #[arg(long)]
    oracle: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed for random corpora.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Print a summary table.
    #[arg(long)]
    pretty: bool,
}

#[derive(Debug, Args)]
struct CorpusArgs {
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long = "max-exp", default_value_t = 2)]
    max_exp: u32,
    /// Enumerate every antichain instead of sampling.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long = "max-gens", default_value_t = 8)]
    max_gens: usize,
    /// Squarefree generators only.
    #[arg(long)]
    squarefree: bool,
    /// File receiving failing witnesses.
    #[arg(long, default_value = "deficiency-replay.json")]
    replay: PathBuf,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleMismatch {
    pub i: usize,
    pub degree: Multidegree,
    pub ext: usize,
    pub taylor: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleStatus {
    pub checked_degrees: usize,
    pub skipped: Option<String>,
    pub mismatches: Vec<OracleMismatch>,
}

impl OracleStatus {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IdealReport {
    pub schema_version: u32,
    pub name: Option<String>,
    pub ideal: MonomialIdeal,
    pub characteristic: u64,
    pub modules: Vec<TheoremReport>,
    pub oracle: Option<OracleStatus>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExamplesReport {
    pub schema_version: u32,
    pub characteristic: u64,
    pub examples: Vec<IdealReport>,
    pub passed: bool,
}

/// One row of a sweep: the numbers behind the inequalities.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub ideal: usize,
    pub i: usize,
    pub reg_exact: Option<i64>,
    pub reg_filtration_bound: Option<i64>,
    pub dim: Option<usize>,
    pub finite_length: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepFailure {
    pub ideal: MonomialIdeal,
    pub i: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub ideals: usize,
    pub modules: usize,
    pub zero_modules: usize,
    pub equality_cases: usize,
    pub oracle_mismatches: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub schema_version: u32,
    pub corpus: CorpusSpec,
    pub characteristic: u64,
    pub indices: Option<Vec<usize>>,
    pub oracle: bool,
    pub summary: SweepSummary,
    pub records: Vec<SweepRecord>,
    pub failures: Vec<SweepFailure>,
}

/// Parse `all` or a comma separated list of indices.
pub fn parse_indices(spec: &str) -> Result<Option<Vec<usize>>> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("all") {
        return Ok(None);
    }
    let mut out = Vec::new();
    for part in spec.split(',') {
        match part.trim().parse::<usize>() {
            Ok(i) => out.push(i),
            Err(_) => return input(format!("bad index list {spec:?}")),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(Some(out))
}

fn indices_for(requested: &Option<Vec<usize>>, n: usize) -> Result<Vec<usize>> {
    match requested {
        None => Ok((0..=n).collect()),
        Some(list) => {
            if let Some(&bad) = list.iter().find(|&&i| i > n) {
                return input(format!("index {bad} exceeds n = {n}"));
            }
            Ok(list.clone())
        }
    }
}

/// Compare the Ext dimensions on and just around the box with the Taylor
/// complex.
pub fn run_oracle(ideal: &MonomialIdeal, indices: &[usize], field: PrimeField) -> Result<OracleStatus> {
    if ideal.generators().len() > MAX_TAYLOR_GENERATORS {
        return Ok(OracleStatus {
            checked_degrees: 0,
            skipped: Some(format!("more than {MAX_TAYLOR_GENERATORS} generators")),
            mismatches: Vec::new(),
        });
    }
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for &i in indices {
        let module = build_ext_module(ideal, i, field)?;
        let taylor_complex = TaylorComplex::new(ideal, i + 1)?;
        let region = module.degree_box().expanded(1, 1);
        for a in region.points() {
            let ext = module.evaluate_at_degree(&a);
            let taylor = taylor_complex.ext_dim(i, &a, field)?;
            checked += 1;
            if ext != taylor {
                mismatches.push(OracleMismatch { i, degree: a, ext, taylor });
            }
        }
    }
    Ok(OracleStatus {
        checked_degrees: checked,
        skipped: None,
        mismatches,
    })
}

/// Full pipeline for one ideal.
pub fn analyze_ideal(
    ideal: &MonomialIdeal,
    name: Option<&str>,
    requested: &Option<Vec<usize>>,
    field: PrimeField,
    oracle: bool,
) -> Result<IdealReport> {
    ideal.require_proper()?;
    let indices = indices_for(requested, ideal.n())?;
    let modules: Vec<TheoremReport> = indices
        .par_iter()
        .map(|&i| verify_theorem(ideal, i, field))
        .collect::<Result<_>>()?;
    let oracle = if oracle {
        Some(run_oracle(ideal, &indices, field)?)
    } else {
        None
    };
    let passed = modules.iter().all(TheoremReport::passed)
        && oracle.as_ref().is_none_or(OracleStatus::agrees);
    Ok(IdealReport {
        schema_version: SCHEMA_VERSION,
        name: name.map(str::to_string),
        ideal: ideal.clone(),
        characteristic: field.characteristic(),
        modules,
        oracle,
        passed,
    })
}

fn check_module(
    ideal: &MonomialIdeal,
    index: usize,
    i: usize,
    field: PrimeField,
    oracle: bool,
) -> (Option<SweepRecord>, usize, Option<SweepFailure>) {
    let fail = |reason: String| SweepFailure {
        ideal: ideal.clone(),
        i,
        reason,
    };
    let report = match verify_theorem(ideal, i, field) {
        Ok(r) => r,
        Err(e) => return (None, 0, Some(fail(e.to_string()))),
    };
    let record = SweepRecord {
        ideal: index,
        i,
        reg_exact: report.reg_exact,
        reg_filtration_bound: report.reg_filtration_bound,
        dim: report.dim,
        finite_length: report.finite_length,
        passed: report.passed(),
    };
    let mut mismatches = 0;
    let mut failure = report.failure().map(fail);
    if oracle {
        match run_oracle(ideal, &[i], field) {
            Ok(status) => {
                mismatches = status.mismatches.len();
                if let (None, Some(m)) = (&failure, status.mismatches.first()) {
                    failure = Some(fail(format!(
                        "oracle mismatch at degree {}: ext {} taylor {}",
                        m.degree, m.ext, m.taylor
                    )));
                }
            }
            Err(e) => failure = failure.or(Some(fail(e.to_string()))),
        }
    }
    let record = SweepRecord {
        passed: record.passed && failure.is_none(),
        ..record
    };
    (Some(record), mismatches, failure)
}

/// Run the theorem checks over every ideal of a corpus.
pub fn run_sweep(
    spec: &CorpusSpec,
    requested: &Option<Vec<usize>>,
    field: PrimeField,
    oracle: bool,
) -> Result<SweepReport> {
    let ideals = enumerate_ideals(spec)?;
    let mut jobs = Vec::new();
    for (k, ideal) in ideals.iter().enumerate() {
        for i in indices_for(requested, ideal.n())? {
            jobs.push((k, i));
        }
    }
    let results: Vec<_> = jobs
        .par_iter()
        .map(|&(k, i)| check_module(&ideals[k], k, i, field, oracle))
        .collect();

    let mut summary = SweepSummary {
        ideals: ideals.len(),
        ..SweepSummary::default()
    };
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (record, mismatches, failure) in results {
        summary.modules += 1;
        summary.oracle_mismatches += mismatches;
        if let Some(r) = record {
            if r.dim.is_none() {
                summary.zero_modules += 1;
            } else if r.reg_exact == r.dim.map(|d| d as i64) {
                summary.equality_cases += 1;
            }
            records.push(r);
        }
        if let Some(f) = failure {
            failures.push(f);
        }
    }
    summary.failures = failures.len();
    Ok(SweepReport {
        schema_version: SCHEMA_VERSION,
        corpus: spec.clone(),
        characteristic: field.characteristic(),
        indices: requested.clone(),
        oracle,
        summary,
        records,
        failures,
    })
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::Parse { .. } => EXIT_USAGE,
        Error::Invariant(_) => EXIT_FAILURE,
    }
}

fn emit<T: Serialize>(value: &T, target: &Option<PathBuf>, pretty: bool, out: &mut dyn Write) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Invariant(e.to_string()))?;
    text.push('\n');
    match target {
        Some(path) => std::fs::write(path, text)
            .or_else(|e| input(format!("cannot write {}: {e}", path.display()))),
        None if pretty => Ok(()),
        None => out
            .write_all(text.as_bytes())
            .or_else(|e| input(format!("cannot write report: {e}"))),
    }
}

fn show(x: Option<i64>) -> String {
    x.map_or("-".to_string(), |v| v.to_string())
}

fn pretty_ideal(report: &IdealReport, out: &mut dyn Write) {
    let title = report.name.clone().unwrap_or_else(|| "ideal".to_string());
    let _ = writeln!(out, "{title}: {} (char {})", report.ideal, report.characteristic);
    let _ = writeln!(out, "  {:>3} {:>6} {:>6} {:>6} {:>9} {:>6}", "i", "reg", "bound", "dim", "spaces", "pass");
    for m in &report.modules {
        let _ = writeln!(
            out,
            "  {:>3} {:>6} {:>6} {:>6} {:>9} {:>6}",
            m.i,
            show(m.reg_exact),
            show(m.reg_filtration_bound),
            show(m.dim.map(|d| d as i64)),
            m.filtration_order.len(),
            if m.passed() { "yes" } else { "NO" }
        );
    }
    if let Some(o) = &report.oracle {
        match &o.skipped {
            Some(why) => {
                let _ = writeln!(out, "  oracle skipped: {why}");
            }
            None => {
                let _ = writeln!(out, "  oracle: {} degrees, {} mismatches", o.checked_degrees, o.mismatches.len());
            }
        }
    }
}

fn report_ideal_failures(report: &IdealReport, err: &mut dyn Write) {
    for m in &report.modules {
        if let Some(why) = m.failure() {
            let _ = writeln!(err, "verification failed for Ext^{}: {why}", m.i);
        }
    }
    if let Some(o) = &report.oracle {
        for m in &o.mismatches {
            let _ = writeln!(
                err,
                "oracle mismatch for Ext^{} at degree {}: ext {} taylor {}",
                m.i, m.degree, m.ext, m.taylor
            );
        }
    }
}

fn setup(common: &Common) -> Result<(PrimeField, Option<Vec<usize>>)> {
    let field = PrimeField::new(common.characteristic)?;
    let indices = parse_indices(&common.indices)?;
    if let Some(jobs) = common.jobs {
        if jobs == 0 {
            return input("--jobs must be positive");
        }
        // a second call fails harmlessly once the global pool exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }
    Ok((field, indices))
}

fn read_ideal(file: &PathBuf) -> Result<MonomialIdeal> {
    let text = if file.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).or_else(|e| input(format!("cannot read stdin: {e}")))?
    } else {
        std::fs::read_to_string(file).or_else(|e| input(format!("cannot read {}: {e}", file.display())))?
    };
    parse_ideal(&text)
}

fn run_command(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let started = Instant::now();
    let code = match command {
        Command::Analyze { file, common } => {
            let (field, indices) = setup(&common)?;
            let ideal = read_ideal(&file)?;
            let report = analyze_ideal(&ideal, None, &indices, field, common.oracle)?;
            if common.pretty {
                pretty_ideal(&report, out);
            }
            emit(&report, &common.json, common.pretty, out)?;
            report_ideal_failures(&report, err);
            if report.passed {
                EXIT_PASS
            } else {
                EXIT_FAILURE
            }
        }
        Command::Examples { common } => {
            let (field, indices) = setup(&common)?;
            let mut examples = Vec::new();
            for named in named_examples() {
                // examples have different n, so out-of-range indices are skipped
                let n = named.ideal.n();
                let fitting = indices.as_ref().map(|list| list.iter().copied().filter(|&i| i <= n).collect());
                let report = analyze_ideal(&named.ideal, Some(named.name), &fitting, field, common.oracle)?;
                if common.pretty {
                    pretty_ideal(&report, out);
                }
                report_ideal_failures(&report, err);
                examples.push(report);
            }
            let passed = examples.iter().all(|r| r.passed);
            let report = ExamplesReport {
                schema_version: SCHEMA_VERSION,
                characteristic: field.characteristic(),
                examples,
                passed,
            };
            emit(&report, &common.json, common.pretty, out)?;
            if passed {
                EXIT_PASS
            } else {
                EXIT_FAILURE
            }
        }
        Command::Sweep { common, corpus } => {
            let (field, indices) = setup(&common)?;
            let spec = CorpusSpec {
                n: corpus.n,
                max_exp: if corpus.squarefree { 1 } else { corpus.max_exp },
                mode: if corpus.exhaustive {
                    CorpusMode::Exhaustive
                } else {
                    CorpusMode::Random {
                        samples: corpus.samples,
                        max_gens: corpus.max_gens,
                    }
                },
                seed: common.seed,
                squarefree: corpus.squarefree,
            };
            let report = run_sweep(&spec, &indices, field, common.oracle)?;
            let s = &report.summary;
            let line = format!(
                "ideals {} modules {} zero {} equality {} oracle_mismatches {} failures {}",
                s.ideals, s.modules, s.zero_modules, s.equality_cases, s.oracle_mismatches, s.failures
            );
            if common.pretty || common.json.is_some() {
                let _ = writeln!(out, "{line}");
            } else {
                let _ = writeln!(err, "{line}");
            }
            emit(&report, &common.json, common.pretty, out)?;
            if report.failures.is_empty() {
                EXIT_PASS
            } else {
                let text = serde_json::to_string_pretty(&report.failures)
                    .map_err(|e| Error::Invariant(e.to_string()))?;
                std::fs::write(&corpus.replay, text + "\n")
                    .or_else(|e| input(format!("cannot write {}: {e}", corpus.replay.display())))?;
                for f in &report.failures {
                    let _ = writeln!(err, "failure: {} Ext^{}: {}", f.ideal, f.i, f.reason);
                }
                let _ = writeln!(err, "witnesses written to {}", corpus.replay.display());
                EXIT_FAILURE
            }
        }
    };
    let _ = writeln!(err, "elapsed {:.3}s", started.elapsed().as_secs_f64());
    Ok(code)
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_PASS;
        }
    };
    match run_command(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
