//! One line per acceptance criterion; exits non-zero if any fails.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use utk_core::corpus::{check_sources, parse_theorem_map, read_manifest};
use utk_core::kernel::{check, normalize_at};
use utk_core::model::comp::{comp_sigma, comp_unit};
use utk_core::model::construct::{coerce_along, coerce_violations, isopath};
use utk_core::model::cset::{CSet, El};
use utk_core::model::dm::{dm_eq, Dm};
use utk_core::model::fixtures::{disc, parse_fixtures, two_points, SHIPPED};
use utk_core::model::selftest::{axiom_fixtures, check_axioms, cod_flip, swap, unit_right, Kind};
use utk_core::syntax::{Context, Term};

type Outcome = Result<String, String>;

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn utk(args: &[&str]) -> (Option<i32>, String, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_utk")).args(args).output().expect("utk runs");
    (out.status.code(), String::from_utf8_lossy(&out.stdout).into_owned(), start.elapsed())
}

fn theorem_ids() -> Vec<String> {
    let tsv = fs::read_to_string(corpus_dir().join("THEOREMS.tsv")).unwrap();
    parse_theorem_map(&tsv).unwrap().into_iter().map(|e| e.identifier).collect()
}

fn corpus_completeness() -> Outcome {
    let dir = corpus_dir();
    let (code, out, took) = utk(&["--json", "corpus", "--dir", dir.to_str().unwrap()]);
    if code != Some(0) {
        return Err(format!("utk corpus exited {code:?}"));
    }
    let v: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let ok: HashSet<String> = v["declarations"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|d| d["status"] == "ok")
        .map(|d| d["name"].as_str().unwrap().split(' ').next().unwrap().to_string())
        .collect();
    let ids = theorem_ids();
    if let Some(missing) = ids.iter().find(|id| !ok.contains(*id)) {
        return Err(format!("{missing} did not check"));
    }
    let required = ["lemma_id_retract_", "thm_naiveuniv_", "thm_ua_", "lem_coerce_comp", "thm_main_", "cor_decompose", "thm_funext_equiv", "thm_conj_equiv"];
    if let Some(r) = required.iter().find(|r| !ids.iter().any(|id| id.starts_with(*r))) {
        return Err(format!("no table entry for {r}"));
    }
    if took > Duration::from_secs(120) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{} table entries checked in {:.2}s", ids.len(), took.as_secs_f64()))
}

fn mutation_sensitivity() -> Outcome {
    let axioms = ["ax_unit", "ax_flip", "ax_contract", "ax_unit_beta", "ax_flip_beta"];
    let ids = theorem_ids();
    let mut detected = Vec::new();
    for ax in axioms {
        let dir = tempfile::tempdir().unwrap();
        for entry in fs::read_dir(corpus_dir()).unwrap() {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_owned();
            let mut text = fs::read_to_string(&path).unwrap();
            if name == "axioms.tt" {
                let before = text.len();
                text = text.lines().filter(|l| !l.starts_with(&format!("postulate {ax} "))).collect::<Vec<_>>().join("\n");
                if text.len() == before {
                    return Err(format!("no postulate {ax} in axioms.tt"));
                }
            }
            fs::write(dir.path().join(name), text).unwrap();
        }
        let (code, out, _) = utk(&["corpus", "--dir", dir.path().to_str().unwrap()]);
        let downstream = out
            .lines()
            .filter_map(|l| l.strip_prefix("FAIL  "))
            .map(|l| l.split([':', ' ']).next().unwrap())
            .find(|name| *name != ax && ids.iter().any(|id| id == name) && !name.starts_with("ax_"));
        match (code, downstream) {
            (Some(1), Some(name)) => detected.push(format!("{ax}->{name}")),
            _ => return Err(format!("deleting {ax}: exit {code:?}, no downstream theorem named")),
        }
    }
    Ok(format!("{}/5 detected ({})", detected.len(), detected.join(", ")))
}

fn kernel_properties() -> Outcome {
    let files = read_manifest(&corpus_dir()).map_err(|e| e.to_string())?;
    let (scope, report) = check_sources(files.iter().map(|(f, s)| (f.as_str(), s.as_str())));
    if !report.pass {
        return Err("corpus does not check".into());
    }
    let ctx = Context::new();
    let mut bodies = 0;
    for (name, entry) in scope.entries() {
        let Some(body) = &entry.body_term else { continue };
        let nf = normalize_at(&scope, &ctx, body, &entry.ty_term).map_err(|e| format!("{name}: {e}"))?;
        check(&scope, &ctx, &nf, &entry.ty_term).map_err(|e| format!("{name}: normal form fails to check: {e}"))?;
        if normalize_at(&scope, &ctx, &nf, &entry.ty_term).map_err(|e| e.to_string())? != nf {
            return Err(format!("{name}: normalize is not idempotent"));
        }
        bodies += 1;
    }
    let entry = scope.get("coerce_refl").ok_or("no coerce_refl")?;
    let nf = normalize_at(&scope, &ctx, entry.body_term.as_ref().unwrap(), &entry.ty_term).map_err(|e| e.to_string())?;
    // \A a -> a: the identity at every type.
    let Term::Lambda(_, inner) = &nf else { return Err(format!("coerce_refl normalizes to {nf:?}")) };
    if !matches!(&**inner, Term::Lambda(_, v) if **v == Term::Var(0)) {
        return Err(format!("coerce_refl normalizes to {nf:?}"));
    }
    Ok(format!("{bodies} bodies idempotent and type-preserving; coerce_refl is the identity"))
}

fn model_equations() -> Outcome {
    let (code, out, took) = utk(&["--json", "model-selftest", "--max-dim", "2"]);
    let v: serde_json::Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let decls = v["declarations"].as_array().unwrap();
    let failed: Vec<&str> = decls.iter().filter(|d| d["status"] != "ok").map(|d| d["name"].as_str().unwrap()).collect();
    if code != Some(0) || !failed.is_empty() {
        return Err(format!("exit {code:?}, failed: {failed:?}"));
    }
    let groups = ["realign/restriction", "realign/reindexing", "isofib/identity", "isofib/flip", "strictify/", "veebar/", "improve/", "isopath/", "contract/"];
    let names: Vec<&str> = decls.iter().map(|d| d["name"].as_str().unwrap()).collect();
    if let Some(g) = groups.iter().find(|g| !names.iter().any(|n| n.starts_with(*g))) {
        return Err(format!("no check for {g}"));
    }
    if took > Duration::from_secs(60) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("{} checks, 0 violations, {:.1}s", names.len(), took.as_secs_f64()))
}

fn bases() -> Vec<CSet> {
    let mut out = vec![CSet::point(), two_points()];
    out.extend(parse_fixtures(SHIPPED).unwrap());
    out
}

fn coerce_iso() -> Outcome {
    let d2 = Kind::Disc(disc("D2", &["p", "q"]));
    let k = Kind::Cod(false);
    let kt = Kind::Cod(true);
    let mut cases = 0;
    let mut violations = Vec::new();
    for base in bases() {
        let a = d2.fib(&base);
        let a1 = comp_sigma(&a, &comp_unit(&a.family.total()));
        violations.extend(coerce_violations(&a, &a, &swap("p", "q"), 2));
        violations.extend(coerce_violations(&a, &a1, &unit_right(), 2));
        cases += 2;
        if base.name != "three" {
            violations.extend(coerce_violations(&k.fib(&base), &kt.fib(&base), &cod_flip(), 2));
            cases += 1;
        }
    }
    // Coercion actually moves points: p goes to q along the swap.
    let a = d2.fib(&CSet::point());
    let moved = coerce_along(&isopath(&a, &a, &swap("p", "q")), 0, &El::Star, &El::atom("p"));
    if moved != El::atom("q") {
        violations.push(format!("p coerces to {moved} along the swap"));
    }
    match violations.first() {
        None => Ok(format!("{cases} isomorphisms, 0 violations")),
        Some(v) => Err(format!("{} violation(s), first: {v}", violations.len())),
    }
}

fn semantic_axioms() -> Outcome {
    let report = check_axioms(&axiom_fixtures(&bases()), 2);
    let failed: Vec<&str> = report.failures().map(|e| e.name.as_str()).collect();
    if !failed.is_empty() {
        return Err(format!("failed: {failed:?}"));
    }
    for k in 1..=5 {
        if !report.declarations.iter().any(|e| e.name.starts_with(&format!("axiom {k}/"))) {
            return Err(format!("axiom {k} not checked"));
        }
    }
    Ok(format!("axioms 1-5 on {} fixtures", axiom_fixtures(&bases()).len()))
}

/// Brute-force closure of {0, 1, i} under meet, join and negation, with
/// elements as functions from the four valuations of `i` to the four-element
/// algebra (pairs of booleans, `~(x, y) = (!y, !x)`).
fn dm_closure() -> Outcome {
    type Four = (bool, bool);
    type Sig = [Four; 4];
    let vals: [Four; 4] = [(false, false), (false, true), (true, false), (true, true)];
    let zero: Sig = [(false, false); 4];
    let one: Sig = [(true, true); 4];
    let i: Sig = vals;
    // Each element carries a witness term built with the library's operations.
    let mut seen: Vec<(Sig, Dm)> = vec![(zero, Dm::zero(1)), (one, Dm::one(1)), (i, Dm::var(1, 0))];
    loop {
        let mut fresh = Vec::new();
        let known: BTreeSet<Sig> = seen.iter().map(|(s, _)| *s).collect();
        let add = |s: Sig, d: Dm, fresh: &mut Vec<(Sig, Dm)>| {
            if !known.contains(&s) && !fresh.iter().any(|(t, _)| *t == s) {
                fresh.push((s, d));
            }
        };
        for (s, d) in &seen {
            add(s.map(|(x, y)| (!y, !x)), d.neg(), &mut fresh);
            for (t, e) in &seen {
                add(std::array::from_fn(|k| (s[k].0 && t[k].0, s[k].1 && t[k].1)), d.meet(e), &mut fresh);
                add(std::array::from_fn(|k| (s[k].0 || t[k].0, s[k].1 || t[k].1)), d.join(e), &mut fresh);
            }
        }
        if fresh.is_empty() {
            break;
        }
        seen.extend(fresh);
    }
    let oracle = seen.len();
    let mut classes: Vec<&Dm> = Vec::new();
    for (_, d) in &seen {
        if !classes.iter().any(|c| dm_eq(c, d).unwrap()) {
            classes.push(d);
        }
    }
    let mut listed: Vec<Dm> = Vec::new();
    for d in Dm::all(1) {
        if !listed.iter().any(|c| dm_eq(c, &d).unwrap()) {
            listed.push(d);
        }
    }
    if classes.len() != oracle || listed.len() != oracle {
        return Err(format!("oracle {oracle}, dmEq on the closure {}, one-generator classes {}", classes.len(), listed.len()));
    }
    Ok(format!("closure of {{0, 1, i}} has {oracle} elements = {} dmEq classes", listed.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("corpus completeness", corpus_completeness),
        ("mutation sensitivity", mutation_sensitivity),
        ("kernel properties", kernel_properties),
        ("model equations", model_equations),
        ("coerceiso", coerce_iso),
        ("semantic axioms", semantic_axioms),
        ("DM4 oracle", dm_closure),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                all = false;
                println!("criterion {}: FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
