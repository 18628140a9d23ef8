//! Command-line front end: fixtures, algebra files and reports.
//!
//! Every command prints a human-readable summary on stdout and, with
//! `--json <path>`, writes a machine-readable report. Exit codes: 0 when the
//! verdict is `pass`, 1 for `fail` or `indeterminate`, 2 for usage and input
//! errors.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gradlie::algebra::{SeriesChain, Tower, TruncatedAlgebra};
use gradlie::catalog::{ExtensionParams, Fixture};
use gradlie::cohomology;
use gradlie::derivations::{self, build_extension};
use gradlie::Error;
use serde_json::{json, Value};

pub mod file;

use file::{AlgebraFile, DerivationsFile, InputError};

#[derive(Parser, Debug)]
#[command(name = "gradlie", version, about = "Exact computations with truncated graded Lie algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Source {
    /// Catalog fixture (see `catalog list`).
    #[arg(long, conflicts_with = "input")]
    pub name: Option<String>,
    /// Algebra file to read instead of a fixture.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Truncation degree N.
    #[arg(long = "truncate", value_name = "N")]
    pub truncate: Option<u32>,
    /// Parameter of Rn1, e.g. `--alpha 2=1/3`; repeatable.
    #[arg(long, value_name = "k=v")]
    pub alpha: Vec<String>,
    /// Parameter of Rn2, e.g. `--beta 1=-2`; repeatable.
    #[arg(long, value_name = "k=v")]
    pub beta: Vec<String>,
    /// Write a JSON report to this path.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Windowed {
    #[command(flatten)]
    pub source: Source,
    /// Distance between the two truncations; defaults to the period.
    #[arg(long)]
    pub margin: Option<u32>,
}

#[derive(Subcommand, Debug)]
pub enum CatalogCmd {
    /// List the built-in fixtures.
    List {
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCmd {
    /// Print basis and brackets.
    Show(Source),
    /// Print the algebra file.
    Export(Source),
}

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    /// Jacobi identity on every triple within the truncation.
    Jacobi(Source),
    /// Degree additivity of every bracket.
    Grading(Source),
}

#[derive(Subcommand, Debug)]
pub enum SeriesCmd {
    /// Lower central series.
    Lcs(Source),
    /// Derived series.
    Derived(Source),
}

#[derive(Subcommand, Debug)]
pub enum Command {
    #[command(subcommand)]
    Catalog(CatalogCmd),
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    #[command(subcommand)]
    Check(CheckCmd),
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Dimensions of the lower central quotients.
    Signature(Source),
    /// Derivation spaces by weight.
    Derivations(Windowed),
    /// Outer derivations by weight.
    H1(Windowed),
    /// Second adjoint cohomology by weight.
    H2(Windowed),
    /// Trivial center and no outer derivations on the stable window.
    Complete(Windowed),
    /// Number of nil-independent derivations.
    Nilindep(Windowed),
    /// Adjoin degree-0 generators acting by given derivations.
    Extend {
        /// Catalog fixture used as the base.
        #[arg(long, conflicts_with = "input")]
        base: Option<String>,
        /// Algebra file used as the base.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Derivations file.
        #[arg(long, value_name = "PATH")]
        derivations: PathBuf,
        #[arg(long = "truncate", value_name = "N")]
        truncate: Option<u32>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Indeterminate => "indeterminate",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            _ => 1,
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// What a command produced: human text, a report, and a verdict.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub report: Value,
    pub verdict: Verdict,
}

/// Failures that stop a command.
#[derive(Debug)]
pub enum Failure {
    /// Exit 2.
    Input(String),
    /// Exit 1; the computation found a mathematical obstruction.
    Math { command: String, error: Error },
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn classify(command: &str, e: Error) -> Failure {
    match e {
        Error::NotProNilpotent { .. }
        | Error::JacobiFailure { .. }
        | Error::NotADerivation { .. }
        | Error::NonDiagonalWeightZero
        | Error::UnstableWeightZero
        | Error::NotAdapted { .. }
        | Error::Inconsistent(_) => Failure::Math {
            command: command.to_owned(),
            error: e,
        },
        other => Failure::Input(other.to_string()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn params(list: &[String]) -> Result<ExtensionParams, Failure> {
    let mut p = ExtensionParams::zero();
    for a in list {
        let (k, v) = ExtensionParams::parse_assignment(a).map_err(|e| Failure::Input(e.to_string()))?;
        p.set(k, v);
    }
    Ok(p)
}

/// The algebra named by `source`, at truncation `N + extra`.
fn load(cmd: &str, source: &Source, extra: u32) -> Result<TruncatedAlgebra, Failure> {
    let err = |e| classify(cmd, e);
    match (&source.name, &source.input) {
        (Some(name), None) => {
            let f = Fixture::from_name(name).map_err(err)?;
            let n = source
                .truncate
                .ok_or_else(|| Failure::Input("--truncate is required with --name".into()))?;
            let (alpha, beta) = (params(&source.alpha)?, params(&source.beta)?);
            let p = match f {
                Fixture::Rn1 if beta.is_zero() => alpha,
                Fixture::Rn2 if alpha.is_zero() => beta,
                _ if alpha.is_zero() && beta.is_zero() => ExtensionParams::zero(),
                _ => {
                    return Err(Failure::Input(format!(
                        "{f} does not take these parameters (Rn1 takes --alpha, Rn2 takes --beta)"
                    )))
                }
            };
            f.build_with(&p, n + extra).map_err(err)
        }
        (None, Some(path)) => {
            if !source.alpha.is_empty() || !source.beta.is_empty() {
                return Err(Failure::Input("--alpha/--beta apply to catalog fixtures only".into()));
            }
            let label = path.display().to_string();
            let l = AlgebraFile::parse(&label, &read(path)?)?.to_algebra(&label)?;
            let n = match source.truncate {
                Some(n) => n + extra,
                None => l.truncation(),
            };
            if n > l.truncation() {
                return Err(Failure::Input(format!(
                    "{label}: truncation {} is below the requested {n}",
                    l.truncation()
                )));
            }
            l.quotient(n).map_err(err)
        }
        _ => Err(Failure::Input("give exactly one of --name and --input".into())),
    }
}

fn tower(cmd: &str, w: &Windowed) -> Result<Tower, Failure> {
    let probe = load(cmd, &w.source, 0)?;
    let margin = w.margin.unwrap_or(probe.period());
    let hi = match (&w.source.input, w.source.truncate) {
        (Some(_), None) => probe,
        _ => load(cmd, &w.source, margin)?,
    };
    Tower::from_top(hi, margin).map_err(|e| classify(cmd, e))
}

fn meta(cmd: &str, l: &TruncatedAlgebra) -> Value {
    json!({ "command": cmd, "algebra": l.name(), "truncation": l.truncation() })
}

fn with(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn catalog_list() -> Outcome {
    let mut text = String::new();
    let mut rows = Vec::new();
    for f in Fixture::ALL {
        let _ = writeln!(
            text,
            "{:<12} period {:<2} N ≥ {:<2} {}",
            f.name(),
            f.period(),
            f.min_truncation(),
            f.description()
        );
        rows.push(json!({
            "name": f.name(),
            "period": f.period(),
            "min_truncation": f.min_truncation(),
            "parameters": match f { Fixture::Rn1 => "alpha", Fixture::Rn2 => "beta", _ => "" },
            "description": f.description(),
        }));
    }
    Outcome {
        text,
        report: json!({ "command": "catalog list", "fixtures": rows, "verdict": "pass" }),
        verdict: Verdict::Pass,
    }
}

fn show(l: &TruncatedAlgebra) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{}: truncation {}, period {}, dimension {}",
        l.name(),
        l.truncation(),
        l.period(),
        l.dim()
    );
    let basis: Vec<String> = l.basis().iter().map(|b| format!("{}:{}", b.name(), b.degree)).collect();
    let _ = writeln!(text, "basis (element:degree): {}", basis.join(" "));
    for e in l.table().entries() {
        let v = gradlie::algebra::Vector::from_terms(e.terms.iter().cloned());
        let _ = writeln!(text, "[{}, {}] = {}", l.label(e.left), l.label(e.right), l.format_vector(&v));
    }
    text
}

fn series(cmd: &str, l: &TruncatedAlgebra, chain: &SeriesChain) -> Outcome {
    let dims = chain.dims();
    let mins: Vec<Option<u32>> = chain.terms.iter().map(|t| t.min_degree(l)).collect();
    let mut text = String::new();
    for (i, (d, m)) in dims.iter().zip(&mins).enumerate() {
        let m = m.map_or("-".to_owned(), |m| m.to_string());
        let _ = writeln!(text, "term {:<3} dim {:<4} min degree {m}", i + 1, d);
    }
    let end = if chain.reaches_zero() {
        "reaches zero"
    } else {
        "stabilizes at a nonzero term"
    };
    let _ = writeln!(text, "{end}");
    Outcome {
        text,
        report: with(
            meta(cmd, l),
            json!({
                "dims": dims,
                "min_degrees": mins,
                "reaches_zero": chain.reaches_zero(),
                "stabilized_nonzero": chain.stabilized_nonzero(),
                "verdict": "pass",
            }),
        ),
        verdict: Verdict::Pass,
    }
}

fn window_verdict(stable: usize, ok: bool) -> Verdict {
    if stable == 0 {
        Verdict::Indeterminate
    } else {
        Verdict::from_bool(ok)
    }
}

fn tower_meta(cmd: &str, t: &Tower) -> Value {
    with(
        meta(cmd, t.lo()),
        json!({ "margin": t.margin(), "cutoff": t.cutoff() }),
    )
}

fn derivations_cmd(t: &Tower) -> Result<Outcome, Error> {
    let r = derivations::derivation_space(t)?;
    let l = t.lo();
    let mut text = String::from("weight  dim(N)  dim(N+m)  stable\n");
    let mut records = Vec::new();
    for rec in &r.records {
        if rec.dim_lo == 0 && rec.dim_hi == 0 {
            continue;
        }
        let _ = writeln!(text, "{:>6}  {:>6}  {:>8}  {}", rec.weight, rec.dim_lo, rec.dim_hi, rec.stable);
        records.push(json!({
            "weight": rec.weight,
            "dim": rec.dim_lo,
            "dim_upper": rec.dim_hi,
            "stable": rec.stable,
            "basis": rec.basis.iter().map(|d| d.describe(l)).collect::<Vec<_>>(),
        }));
    }
    let stable = r.stable().count();
    let _ = writeln!(text, "{stable} stable weights (weights with no derivations at either level omitted)");
    let verdict = window_verdict(stable, true);
    Ok(Outcome {
        text,
        report: with(
            tower_meta("derivations", t),
            json!({ "records": records, "stable_weights": stable, "verdict": verdict.as_str() }),
        ),
        verdict,
    })
}

fn h1_records(t: &Tower, r: &derivations::H1Report, text: &mut String) -> Vec<Value> {
    let l = t.lo();
    let _ = writeln!(text, "weight  Der  Inner  H1(N)  H1(N+m)  stable");
    let mut out = Vec::new();
    for rec in &r.records {
        if rec.der_lo == 0 && rec.der_hi == 0 {
            continue;
        }
        let _ = writeln!(
            text,
            "{:>6}  {:>3}  {:>5}  {:>5}  {:>7}  {}",
            rec.weight,
            rec.der_lo,
            rec.inner_lo,
            rec.dim_lo(),
            rec.dim_hi(),
            rec.stable
        );
        out.push(json!({
            "weight": rec.weight,
            "derivations": rec.der_lo,
            "inner": rec.inner_lo,
            "dim": rec.dim_lo(),
            "dim_upper": rec.dim_hi(),
            "stable": rec.stable,
            "witnesses": rec.witnesses.iter().map(|d| d.describe(l)).collect::<Vec<_>>(),
        }));
    }
    out
}

fn h1_cmd(t: &Tower) -> Result<Outcome, Error> {
    let r = cohomology::h1_via_complex(t)?;
    let mut text = String::new();
    let records = h1_records(t, &r, &mut text);
    let stable = r.stable().count();
    let ok = r.stable().all(|x| x.dim_lo() == 0);
    let _ = writeln!(text, "{stable} stable weights; H1 {} on all of them", if ok { "vanishes" } else { "does not vanish" });
    let verdict = window_verdict(stable, ok);
    Ok(Outcome {
        text,
        report: with(
            tower_meta("h1", t),
            json!({ "records": records, "stable_weights": stable, "verdict": verdict.as_str() }),
        ),
        verdict,
    })
}

fn h2_cmd(t: &Tower) -> Result<Outcome, Error> {
    let r = cohomology::h2(t)?;
    let l = t.lo();
    let mut text = "weight  Z2  B2  H2(N)  H2(N+m)  stable\n".to_owned();
    let mut records = Vec::new();
    for rec in &r.records {
        let _ = writeln!(
            text,
            "{:>6}  {:>2}  {:>2}  {:>5}  {:>7}  {}",
            rec.weight,
            rec.z_lo,
            rec.b_lo,
            rec.h_lo(),
            rec.h_hi(),
            rec.stable
        );
        records.push(json!({
            "weight": rec.weight,
            "z2": rec.z_lo,
            "b2": rec.b_lo,
            "dim": rec.h_lo(),
            "z2_upper": rec.z_hi,
            "b2_upper": rec.b_hi,
            "dim_upper": rec.h_hi(),
            "stable": rec.stable,
            "witnesses": rec.witnesses.iter().map(|c| c.describe(l)).collect::<Vec<_>>(),
        }));
    }
    let stable = r.stable().count();
    let ok = r.stable().all(|x| x.h_lo() == 0);
    let _ = writeln!(text, "{stable} stable weights; H2 {} on all of them", if ok { "vanishes" } else { "does not vanish" });
    let verdict = window_verdict(stable, ok);
    Ok(Outcome {
        text,
        report: with(
            tower_meta("h2", t),
            json!({ "records": records, "stable_weights": stable, "verdict": verdict.as_str() }),
        ),
        verdict,
    })
}

fn complete_cmd(t: &Tower) -> Result<Outcome, Error> {
    let c = derivations::completeness_check(t)?;
    let l = t.lo();
    let mut text = String::new();
    let records = h1_records(t, &c.h1, &mut text);
    let center: Vec<String> = c.stable_center.iter().map(|v| l.format_vector(v)).collect();
    let _ = writeln!(
        text,
        "stable center: {}",
        if center.is_empty() { "0".to_owned() } else { center.join(", ") }
    );
    let stable = c.stable_weights();
    let _ = writeln!(
        text,
        "{stable} stable weights; {}",
        if c.complete { "complete" } else { "not complete" }
    );
    let verdict = window_verdict(stable, c.complete);
    Ok(Outcome {
        text,
        report: with(
            tower_meta("complete", t),
            json!({
                "records": records,
                "stable_center": center,
                "obstructions": c.obstructions(),
                "complete": c.complete,
                "stable_weights": stable,
                "verdict": verdict.as_str(),
            }),
        ),
        verdict,
    })
}

fn nilindep_cmd(t: &Tower) -> Result<Outcome, Error> {
    let count = derivations::nil_independent_count(t)?;
    Ok(Outcome {
        text: format!("nil-independent derivations: {count}\n"),
        report: with(tower_meta("nilindep", t), json!({ "count": count, "verdict": "pass" })),
        verdict: Verdict::Pass,
    })
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let outcome = match &cli.command {
        Command::Catalog(CatalogCmd::List { .. }) => catalog_list(),
        Command::Algebra(AlgebraCmd::Show(s)) => {
            let l = load("algebra show", s, 0)?;
            Outcome {
                text: show(&l),
                report: with(meta("algebra show", &l), json!({ "file": AlgebraFile::from_algebra(&l), "verdict": "pass" })),
                verdict: Verdict::Pass,
            }
        }
        Command::Algebra(AlgebraCmd::Export(s)) => {
            let l = load("algebra export", s, 0)?;
            let file = AlgebraFile::from_algebra(&l);
            Outcome {
                text: file.to_json(),
                report: with(meta("algebra export", &l), json!({ "file": file, "verdict": "pass" })),
                verdict: Verdict::Pass,
            }
        }
        Command::Check(CheckCmd::Jacobi(s)) => {
            let l = load("check jacobi", s, 0)?;
            let v = l.jacobi_check();
            let list: Vec<Value> = v
                .iter()
                .map(|j| json!({ "triple": [j.triple.0, j.triple.1, j.triple.2], "residual": l.format_vector(&j.residual) }))
                .collect();
            let mut text = String::new();
            for j in &v {
                let (a, b, c) = j.triple;
                let _ = writeln!(text, "Jacobi fails on ({}, {}, {}): {}", l.label(a), l.label(b), l.label(c), l.format_vector(&j.residual));
            }
            let _ = writeln!(text, "{} violations", v.len());
            let verdict = Verdict::from_bool(v.is_empty());
            Outcome {
                text,
                report: with(meta("check jacobi", &l), json!({ "violations": list, "verdict": verdict.as_str() })),
                verdict,
            }
        }
        Command::Check(CheckCmd::Grading(s)) => {
            let l = load("check grading", s, 0)?;
            let v: Vec<String> = l
                .validate()
                .violations
                .iter()
                .filter(|v| matches!(v, gradlie::algebra::Violation::Degree { .. }))
                .map(ToString::to_string)
                .collect();
            let mut text: String = v.iter().map(|x| format!("{x}\n")).collect();
            let _ = writeln!(text, "{} grading violations", v.len());
            let verdict = Verdict::from_bool(v.is_empty());
            Outcome {
                text,
                report: with(meta("check grading", &l), json!({ "violations": v, "verdict": verdict.as_str() })),
                verdict,
            }
        }
        Command::Series(SeriesCmd::Lcs(s)) => {
            let l = load("series lcs", s, 0)?;
            series("series lcs", &l, &l.lower_central_series())
        }
        Command::Series(SeriesCmd::Derived(s)) => {
            let l = load("series derived", s, 0)?;
            series("series derived", &l, &l.derived_series())
        }
        Command::Signature(s) => {
            let l = load("signature", s, 0)?;
            let sig = l.grading_signature().map_err(|e| classify("signature", e))?;
            let parts: Vec<String> = sig.iter().map(ToString::to_string).collect();
            Outcome {
                text: format!("c({}) = ({})\n", l.name(), parts.join(", ")),
                report: with(meta("signature", &l), json!({ "signature": sig, "verdict": "pass" })),
                verdict: Verdict::Pass,
            }
        }
        Command::Derivations(w) => derivations_cmd(&tower("derivations", w)?).map_err(|e| classify("derivations", e))?,
        Command::H1(w) => h1_cmd(&tower("h1", w)?).map_err(|e| classify("h1", e))?,
        Command::H2(w) => h2_cmd(&tower("h2", w)?).map_err(|e| classify("h2", e))?,
        Command::Complete(w) => complete_cmd(&tower("complete", w)?).map_err(|e| classify("complete", e))?,
        Command::Nilindep(w) => nilindep_cmd(&tower("nilindep", w)?).map_err(|e| classify("nilindep", e))?,
        Command::Extend {
            base,
            input,
            derivations,
            truncate,
            ..
        } => {
            let source = Source {
                name: base.clone(),
                input: input.clone(),
                truncate: *truncate,
                ..Source::default()
            };
            let l = load("extend", &source, 0)?;
            let label = derivations.display().to_string();
            let spec = DerivationsFile::parse(&label, &read(derivations)?)?.to_spec(&label)?;
            let ext = build_extension(&l, &spec).map_err(|e| classify("extend", e))?;
            let file = AlgebraFile::from_algebra(&ext);
            Outcome {
                text: show(&ext),
                report: with(meta("extend", &ext), json!({ "file": file, "base": l.name(), "verdict": "pass" })),
                verdict: Verdict::Pass,
            }
        }
    };
    Ok(outcome)
}

fn json_path(cli: &Cli) -> Option<&Path> {
    let p = match &cli.command {
        Command::Catalog(CatalogCmd::List { json }) => json,
        Command::Algebra(AlgebraCmd::Show(s) | AlgebraCmd::Export(s))
        | Command::Check(CheckCmd::Jacobi(s) | CheckCmd::Grading(s))
        | Command::Series(SeriesCmd::Lcs(s) | SeriesCmd::Derived(s))
        | Command::Signature(s) => &s.json,
        Command::Derivations(w) | Command::H1(w) | Command::H2(w) | Command::Complete(w) | Command::Nilindep(w) => {
            &w.source.json
        }
        Command::Extend { json, .. } => json,
    };
    p.as_deref()
}

fn write_report(path: &Path, report: &Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).expect("serializable") + "\n";
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{}", e.render());
            } else {
                let _ = write!(err, "{}", e.render());
            }
            return code;
        }
    };
    let (code, report) = match execute(&cli) {
        Ok(o) => {
            let _ = write!(out, "{}", o.text);
            (o.verdict.exit_code(), Some(o.report))
        }
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            (2, None)
        }
        Err(Failure::Math { command, error }) => {
            let verdict = match error {
                Error::UnstableWeightZero => Verdict::Indeterminate,
                _ => Verdict::Fail,
            };
            let _ = writeln!(out, "{error}");
            (
                1,
                Some(json!({ "command": command, "error": error.to_string(), "verdict": verdict.as_str() })),
            )
        }
    };
    if let (Some(path), Some(report)) = (json_path(&cli), report) {
        if let Err(msg) = write_report(path, &report) {
            let _ = writeln!(err, "error: {msg}");
            return 2;
        }
    }
    code
}
