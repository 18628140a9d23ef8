//! One line per acceptance criterion. Failing criteria are reported, not
//! panicked on; set `GRADLIE_STRICT=1` to turn any FAIL into a nonzero exit.

use std::process::Command;
use std::time::{Duration, Instant};

use gradlie::algebra::{Tower, TruncatedAlgebra, Vector};
use gradlie::catalog::{closed_form_derivations, n2_rule, ClosedForm, Fixture, N2_TABLE};
use gradlie::cohomology::{coboundary, d2_residual, h2, in_window, CochainSlice};
use gradlie::derivations::{
    completeness_check, derivation_space, derivations_at, derivations_by_generators, in_span,
    is_potentially_nilpotent, nil_independent_count, same_span, GradedOperator,
};
use gradlie::exactla::Scalar;
use gradlie_cli::file::AlgebraFile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn tower(f: Fixture, n: u32, margin: u32) -> Tower {
    Tower::from_top(f.build(n + margin).expect("fixture"), margin).expect("tower")
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn ac1() -> Check {
    let runs = Fixture::ALL.map(|f| {
        let n = if matches!(f, Fixture::Rn1 | Fixture::Rn2) { 32 } else { 48 };
        (f, n)
    });
    let mut slowest = Duration::ZERO;
    for (f, n) in runs {
        let l = f.build(n).map_err(|e| format!("{f}: {e}"))?;
        let (violations, t) = timed(|| l.jacobi_check());
        if !violations.is_empty() {
            return Err(format!("{f} N={n}: {} violations, first {:?}", violations.len(), violations[0]));
        }
        if t > Duration::from_secs(60) {
            return Err(format!("{f} N={n} took {t:?}"));
        }
        slowest = slowest.max(t);
    }
    Ok(format!("8 fixtures, no violations, slowest {:.2}s", slowest.as_secs_f64()))
}

fn ac2() -> Check {
    let rule = n2_rule();
    let defects = rule.antisymmetry_defects();
    if !defects.is_empty() {
        return Err(format!("antisymmetry fails at {defects:?}"));
    }
    for r in 0..8 {
        for s in 0..8 {
            if *rule.coefficient(r, s) != Scalar::from_integer(N2_TABLE[r as usize][s as usize].into()) {
                return Err(format!("rule and table disagree at ({r}, {s})"));
            }
        }
    }
    let l = Fixture::N2.build(24).map_err(|e| e.to_string())?;
    for q in 1..=24u32 {
        for p in q + 1..=24 - q {
            let expect = rule.coefficient(q % 8, p % 8).clone();
            let got = l.bracket(&Vector::basis(q), &Vector::basis(p)).map_err(|e| e.to_string())?;
            if got != Vector::basis(q + p).scale(&expect) {
                return Err(format!("[f{q}, f{p}] = {got:?}"));
            }
        }
    }
    Ok("64 residue pairs antisymmetric, algebra matches table".into())
}

fn ac3() -> Check {
    let mut bad = Vec::new();
    for f in [Fixture::N1, Fixture::N2] {
        let c = f.build(40).and_then(|l| l.grading_signature()).map_err(|e| e.to_string())?;
        let expected = (0..c.len()).map(|i| if i == 0 { 2 } else { 1 });
        if let Some(i) = c.iter().copied().zip(expected).position(|(a, b)| a != b) {
            bad.push(format!("{f}: c = {:?}, first mismatch at position {}", &c[..c.len().min(10)], i + 1));
        }
    }
    if bad.is_empty() {
        Ok("c(n1) = c(n2) = (2, 1, 1, ...) up to N=40".into())
    } else {
        Err(bad.join("; "))
    }
}

fn ac4() -> Check {
    let mut notes = Vec::new();
    for (form, n, margin) in [(ClosedForm::N1, 36, 3), (ClosedForm::N2, 40, 8)] {
        let t = tower(form.fixture(), n, margin);
        let (report, took) = timed(|| derivation_space(&t));
        let report = report.map_err(|e| e.to_string())?;
        if took > Duration::from_secs(300) {
            return Err(format!("{} took {took:?}", form.name()));
        }
        let mut checked = 0;
        for rec in report.stable() {
            let expected = if rec.weight < 0 { 0 } else { form.parameters(rec.weight).len() - form.parameters(rec.weight - 1).len() };
            if rec.dim_lo != expected {
                return Err(format!("{} weight {}: dim {} expected {expected}", form.name(), rec.weight, rec.dim_lo));
            }
            checked += 1;
        }
        if checked == 0 {
            return Err(format!("{}: no stable weights", form.name()));
        }
        let lo = t.lo();
        for (p, d) in closed_form_derivations(form, lo.truncation()).map_err(|e| e.to_string())? {
            let w = form.weight(p).expect("weight");
            let space = derivations_at(lo, w).map_err(|e| e.to_string())?;
            if !in_span(lo, w, &space, &d) {
                return Err(format!("{} {p} is not in the computed space", form.name()));
            }
        }
        notes.push(format!("{} {checked} stable weights", form.name()));
    }
    Ok(notes.join(", "))
}

fn ac5() -> Check {
    for f in [Fixture::Rn1, Fixture::Rn2] {
        let l = f.build(24).map_err(|e| e.to_string())?;
        for b in l.basis() {
            let ad = GradedOperator::ad(&l, &Vector::basis(b.index)).map_err(|e| e.to_string())?;
            let nil = is_potentially_nilpotent(&l, &ad).map_err(|e| e.to_string())?.nilpotent;
            if nil != (b.degree > 0) {
                return Err(format!("{f}: ad {} potentially nilpotent = {nil}", b.name()));
            }
        }
    }
    Ok("ad x, ad y not potentially nilpotent; positive degrees are".into())
}

fn ac6() -> Check {
    for (f, n, margin) in [(Fixture::N1, 36, 3), (Fixture::N2, 40, 8)] {
        let k = nil_independent_count(&tower(f, n, margin)).map_err(|e| e.to_string())?;
        if k != 2 {
            return Err(format!("{f}: {k}"));
        }
    }
    Ok("n1 and n2 both 2".into())
}

fn ac7() -> Check {
    let mut notes = Vec::new();
    for (f, n, margin) in [(Fixture::Rn1, 36, 3), (Fixture::Rn2, 40, 8)] {
        let c = completeness_check(&tower(f, n, margin)).map_err(|e| e.to_string())?;
        if !c.complete {
            return Err(format!("{f}: {:?}", c.obstructions()));
        }
        if c.stable_weights() < 10 {
            return Err(format!("{f}: only {} stable weights", c.stable_weights()));
        }
        notes.push(format!("{f} {} stable weights", c.stable_weights()));
    }
    Ok(notes.join(", "))
}

fn ac8() -> Check {
    let mut notes = Vec::new();
    for (f, n, margin) in [(Fixture::Rn1, 30, 3), (Fixture::Rn2, 32, 8)] {
        let (r, took) = timed(|| h2(&tower(f, n, margin)));
        let r = r.map_err(|e| e.to_string())?;
        if took > Duration::from_secs(1800) {
            return Err(format!("{f} took {took:?}"));
        }
        if let Some(rec) = r.stable().find(|rec| rec.h_lo() != 0) {
            return Err(format!("{f}: H2 weight {} has dim {}", rec.weight, rec.h_lo()));
        }
        let count = r.stable().count();
        if count < 8 {
            return Err(format!("{f}: only {count} stable weights"));
        }
        notes.push(format!("{f} {count} stable weights in {:.1}s", took.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn window_triples(l: &TruncatedAlgebra, w: i64) -> Vec<(u32, u32, u32)> {
    let b = l.basis();
    let mut out = Vec::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            for k in j + 1..b.len() {
                if in_window(l, i64::from(b[i].degree + b[j].degree + b[k].degree), w) {
                    out.push((b[i].index, b[j].index, b[k].index));
                }
            }
        }
    }
    out
}

fn ac9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let algebras: Vec<TruncatedAlgebra> = Fixture::ALL
        .iter()
        .map(|f| f.build(10).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let mut triples = 0;
    for trial in 0..100 {
        let l = &algebras[trial % algebras.len()];
        let w = rng.gen_range(-3..=4);
        let c1 = CochainSlice::new(l, 1, w);
        let x: Vec<Scalar> = (0..c1.len())
            .map(|_| Scalar::new(rng.gen_range(-4..=4).into(), rng.gen_range(1..=3).into()))
            .collect();
        let phi = coboundary(l, &c1.to_operator(l, &x), w).map_err(|e| e.to_string())?;
        for t in window_triples(l, w) {
            let r = d2_residual(l, &phi, t).map_err(|e| e.to_string())?;
            if !r.is_zero() {
                return Err(format!("{} weight {w} triple {t:?}", l.name()));
            }
            triples += 1;
        }
    }
    Ok(format!("100 cochains, {triples} triples"))
}

fn ac10() -> Check {
    let mut weights = 0;
    for f in [Fixture::N1, Fixture::N2, Fixture::M2, Fixture::WittPos] {
        for n in [9, 15] {
            let l = f.build(n).map_err(|e| e.to_string())?;
            let dmax = i64::from(n);
            for w in -dmax..=dmax {
                let full = derivations_at(&l, w).map_err(|e| e.to_string())?;
                let gens = derivations_by_generators(&l, w).map_err(|e| e.to_string())?;
                if full.len() != gens.len() || !same_span(&l, w, &full, &gens) {
                    return Err(format!("{f} N={n} weight {w}: {} vs {}", full.len(), gens.len()));
                }
                weights += 1;
            }
        }
    }
    Ok(format!("{weights} (algebra, N, weight) slices agree"))
}

fn ac11() -> Check {
    let l = Fixture::WittNonneg.build(20).map_err(|e| e.to_string())?;
    let lcs = l.lower_central_series();
    if !lcs.stabilized_nonzero() {
        return Err(format!("lcs dims {:?}", lcs.dims()));
    }
    let derived = l.derived_series();
    let mins: Vec<u32> = derived.terms.iter().filter_map(|s| s.min_degree(&l)).collect();
    if !mins.windows(2).all(|p| p[0] < p[1]) {
        return Err(format!("derived min degrees {mins:?}"));
    }
    Ok(format!("lcs dims {:?}, derived min degrees {mins:?}", lcs.dims()))
}

fn ac12() -> Check {
    for f in Fixture::ALL {
        let l = f.build(16).map_err(|e| e.to_string())?;
        let file = AlgebraFile::from_algebra(&l);
        let back = AlgebraFile::parse("round", &file.to_json())
            .and_then(|a| a.to_algebra("round"))
            .map_err(|e| e.to_string())?;
        if back != l {
            return Err(format!("{f} does not round trip"));
        }
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let commands: [&[&str]; 5] = [
        &["signature", "--name", "n2", "--truncate", "24"],
        &["derivations", "--name", "n1", "--truncate", "18", "--margin", "3"],
        &["complete", "--name", "Rn1", "--truncate", "15", "--margin", "3"],
        &["h2", "--name", "Rn1", "--truncate", "12", "--margin", "3"],
        &["nilindep", "--name", "n2", "--truncate", "16", "--margin", "8"],
    ];
    for args in commands {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.path().join(format!("r{run}.json"));
            let out = Command::new(env!("CARGO_BIN_EXE_gradlie"))
                .args(args)
                .arg("--json")
                .arg(&path)
                .output()
                .map_err(|e| e.to_string())?;
            let report = std::fs::read(&path).map_err(|e| format!("{args:?}: {e}"))?;
            outputs.push((out.status.code(), out.stdout, report));
        }
        if outputs[0] != outputs[1] {
            return Err(format!("{args:?} differs between runs"));
        }
    }
    Ok("8 fixtures round trip, 5 commands byte-identical".into())
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("AC1", ac1),
        ("AC2", ac2),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", ac6),
        ("AC7", ac7),
        ("AC8", ac8),
        ("AC9", ac9),
        ("AC10", ac10),
        ("AC11", ac11),
        ("AC12", ac12),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let (result, took) = timed(check);
        match result {
            Ok(detail) => println!("[{name}] PASS ({:.1}s) {detail}", took.as_secs_f64()),
            Err(detail) => {
                failed += 1;
                println!("[{name}] FAIL ({:.1}s) {detail}", took.as_secs_f64());
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 && std::env::var_os("GRADLIE_STRICT").is_some() {
        std::process::exit(1);
    }
}
