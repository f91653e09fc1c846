//! The exhaustive checks behind `utk model-selftest`.

use std::rc::Rc;
use std::time::Instant;

use super::cof::Cof;
use super::comp::{comp_discrete, comp_sigma, comp_unit, fill, problems, reindex, Fib};
use super::construct::*;
use super::cset::{validate_cof, validate_cset, validate_family, CSet, CofFam, El, Family, SetMap};
use super::cube::CubeMap;
use super::fixtures::{self, collapse, dependent_family, disc, parse_fixtures, reversal, two_points};
use super::MAX_DIM;
use crate::report::Report;

const LIMIT: usize = 5;

/// How a fixture fiber is made fibrant.
#[derive(Clone)]
pub enum Kind {
    /// A constant discrete set with its trivial composition.
    Disc(CSet),
    /// The codiscrete set on {0, 1}; the flag selects the twisted structure.
    Cod(bool),
}

impl Kind {
    pub fn fib(&self, base: &CSet) -> Fib {
        match self {
            Kind::Disc(d) => comp_discrete(Family::constant(base, d)),
            Kind::Cod(twist) => comp_codiscrete(Family::constant(base, &CSet::codiscrete()), *twist),
        }
    }

    /// Contractibility data, when the fiber is contractible.
    pub fn contraction(&self) -> Option<ContrStruct> {
        match self {
            Kind::Disc(d) => {
                let pts = (d.objects)(0);
                (pts.len() == 1).then(|| ContrStruct {
                    centre: Rc::new(move |_, _| pts[0].clone()),
                    path: Rc::new(|_, _, a| a.clone()),
                })
            }
            Kind::Cod(false) => Some(codiscrete_contraction()),
            Kind::Cod(true) => None,
        }
    }

    fn name(&self) -> String {
        match self {
            Kind::Disc(d) => d.name.clone(),
            Kind::Cod(false) => "K".into(),
            Kind::Cod(true) => "K~".into(),
        }
    }
}

/// `A × B` for a constant second factor.
pub fn times(a: &Fib, b: &Kind) -> Fib {
    comp_sigma(a, &b.fib(&a.family.total()))
}

/// `A ≅ A × 1`.
pub fn unit_right() -> StrictIso {
    StrictIso::new(|_, _, a| El::pair(a.clone(), El::Star), |_, _, p| p.fst().clone())
}

/// `Σ A (Σ B C) ≅ Σ B (Σ A C)`.
pub fn sigma_flip() -> StrictIso {
    let flip = |_: usize, _: &El, t: &El| El::pair(t.snd().fst().clone(), El::pair(t.fst().clone(), t.snd().snd().clone()));
    StrictIso::new(flip, flip)
}

/// Negation of every vertex, an automorphism of the codiscrete set.
pub fn cod_flip() -> StrictIso {
    let neg = |n: usize, _: &El, v: &El| match v {
        El::Cod(b) => El::Cod(!b & ((1u64 << (1 << n)) - 1) as u32),
        other => panic!("not a codiscrete cube: {other}"),
    };
    StrictIso::new(neg, neg)
}

/// The swap of a two-point discrete set.
pub fn swap(a: &str, b: &str) -> StrictIso {
    let (a, b) = (El::atom(a), El::atom(b));
    let f = move |_: usize, _: &El, v: &El| if *v == a { b.clone() } else { a.clone() };
    StrictIso::new(f.clone(), f)
}

pub fn identity_map() -> SetMap {
    Rc::new(|_, x| x.clone())
}

/// `γ × I`.
pub fn times_id(gamma: &SetMap) -> SetMap {
    let g = gamma.clone();
    Rc::new(move |n, x| El::pair(g(n, x.fst()), x.snd().clone()))
}

/// `(i = 0)` on the interval.
pub fn at_zero() -> CofFam {
    Rc::new(|n, x| Cof::term_eq(&x.dm(), n, false))
}

/// One fixture for the axiom checks: a base and three fibers, the last
/// contractible.
#[derive(Clone)]
pub struct AxiomFixture {
    pub base: CSet,
    pub a: Kind,
    pub b: Kind,
    pub c: Kind,
}

impl AxiomFixture {
    fn name(&self) -> String {
        format!("{}; {}, {}, {}", self.base.name, self.a.name(), self.b.name(), self.c.name())
    }
}

struct Checker {
    max_dim: usize,
    report: Report,
}

impl Checker {
    fn check(&mut self, name: &str, f: impl FnOnce(usize) -> Vec<String>) {
        let start = Instant::now();
        let found = f(self.max_dim);
        let ms = Some(start.elapsed().as_secs_f64() * 1000.0);
        if std::env::var_os("UTK_TRACE").is_some() {
            eprintln!("{:>9.0} ms  {name}", ms.unwrap_or(0.0));
        }
        match found.first() {
            None => self.report.ok(name, ms),
            Some(first) => self.report.fail(name, format!("{} violation(s), first: {first}", found.len()), ms),
        }
    }
}

fn diff(a: &Fib, b: &Fib, max_dim: usize) -> Vec<String> {
    fib_diff(a, b, max_dim).into_iter().collect()
}

fn family_diff(a: &Family, b: &Family, max_dim: usize) -> Vec<String> {
    let stub = |f: &Family| Fib { family: f.clone(), comp: Rc::new(|p| p.a0.clone()) };
    diff(&stub(a), &stub(b), max_dim)
}

fn iso_diff(base: &CSet, fam: &Family, s: &StrictIso, t: &StrictIso, max_dim: usize) -> Vec<String> {
    let mut out = Vec::new();
    for n in 0..=max_dim {
        for x in (base.objects)(n) {
            for el in (fam.fiber)(n, &x) {
                if (s.fwd)(n, &x, &el) != (t.fwd)(n, &x, &el) {
                    out.push(format!("isomorphisms differ at {el} over {x}"));
                }
            }
        }
    }
    out
}

fn path_ends(path: &FibPath, a: &Fib, b: &Fib, max_dim: usize) -> Vec<String> {
    let mut out = diff(&path.endpoint(false), a, max_dim);
    out.extend(diff(&path.endpoint(true), b, max_dim).into_iter().map(|e| format!("at 1: {e}")));
    out
}

fn fill_violations(fib: &Fib, max_dim: usize) -> Vec<String> {
    let fam = &fib.family;
    let mut out = Vec::new();
    for n in 0..max_dim {
        for prob in problems(fam, n) {
            let path = fill(fib, &prob);
            let at = |e| fam.restrict(&CubeMap::end(n, e), &prob.p, &path);
            if at(prob.e) != prob.a0 || at(!prob.e) != (fib.comp)(&prob) {
                out.push(format!("{}: filler has the wrong ends over {}", fam.name, prob.p));
            }
        }
    }
    out
}

/// Families, compositions and equations on the built-in fixture library.
fn library(c: &mut Checker, bases: &[CSet], three: &CSet) {
    let point = CSet::point();
    let interval = CSet::interval();
    let kinds = [
        Kind::Disc(disc("D1", &["u"])),
        Kind::Disc(disc("D2", &["p", "q"])),
        Kind::Disc(disc("D3", &["r", "s", "t"])),
        Kind::Cod(false),
        Kind::Cod(true),
    ];

    c.check("cset/interval", |d| validate_cset(&interval, d));
    for base in bases.iter().chain([three]) {
        c.check(&format!("cset/{}", base.name), |d| validate_cset(base, d));
        c.check(&format!("cof/ends over {}", base.name), |d| validate_cof(&base.times_interval(), &ends(), d));
    }
    c.check("cof/i=0 over I", |d| validate_cof(&interval, &at_zero(), d));

    for base in bases.iter().chain([&interval]) {
        for k in &kinds {
            let fib = k.fib(base);
            // The twisted structure lives on the same family as the plain one.
            if !matches!(k, Kind::Cod(true)) {
                c.check(&format!("family/{} over {}", k.name(), base.name), |d| validate_family(&fib.family, d));
            }
            c.check(&format!("comp/{} over {}", k.name(), base.name), |d| law_violations(&fib, d, LIMIT));
        }
    }

    let two = two_points();
    let e = comp_discrete(dependent_family(&two));
    let sig = comp_sigma(&e, &Kind::Cod(true).fib(&e.family.total()));
    c.check("sigma/E K~ over 2", |d| {
        let mut v = validate_family(&sig.family, d);
        v.extend(law_violations(&sig, d, LIMIT));
        v
    });
    let kk = times(&Kind::Cod(false).fib(&point), &Kind::Cod(true));
    c.check("sigma/K K~", |d| law_violations(&kk, d, LIMIT));
    c.check("fill/K~", |d| fill_violations(&Kind::Cod(true).fib(&point), d));
    c.check("fill/sigma K K~", |d| fill_violations(&kk, d));
    c.check("unit/reindex", |d| {
        diff(&reindex(&comp_unit(&two), three, &collapse(), "c"), &comp_unit(three), d)
    });

    // Realignment.
    let (k, kt) = (Kind::Cod(false), Kind::Cod(true));
    let bot: CofFam = Rc::new(|n, _| Cof::bot(n));
    let top: CofFam = Rc::new(|n, _| Cof::top(n));
    c.check("realign/bottom", |d| diff(&realign(&bot, &kt.fib(&point), &k.fib(&point)), &k.fib(&point), d));
    c.check("realign/top", |d| diff(&realign(&top, &kt.fib(&point), &k.fib(&point)), &kt.fib(&point), d));
    let face = interval.restrict_to(&at_zero(), "i=0");
    let beta = kt.fib(&face);
    let alpha = k.fib(&interval);
    let r = realign(&at_zero(), &beta, &alpha);
    c.check("realign/restriction", |d| {
        let mut v = law_violations(&r, d, LIMIT);
        v.extend(diff(&reindex(&r, &face, &identity_map(), "i"), &beta, d));
        v
    });
    c.check("realign/reindexing", |d| {
        let at_one: CofFam = Rc::new(|n, x| Cof::term_eq(&x.dm(), n, true));
        let face1 = interval.restrict_to(&at_one, "i=1");
        let beta1 = reindex(&beta, &face1, &reversal(), "~");
        let lhs = reindex(&r, &interval, &reversal(), "~");
        let rhs = realign(&at_one, &beta1, &reindex(&alpha, &interval, &reversal(), "~"));
        diff(&lhs, &rhs, d)
    });

    // Transfer along isomorphisms.
    c.check("isofib/identity", |d| {
        diff(&isofib(&kt.fib(&point).family, &StrictIso::identity(), &kt.fib(&point)), &kt.fib(&point), d)
    });
    c.check("isofib/flip", |d| {
        let fam = k.fib(&point).family;
        let mut v = iso_violations(&fam, &fam, &cod_flip(), d);
        v.extend(law_violations(&isofib(&fam, &cod_flip(), &kt.fib(&point)), d, LIMIT));
        v
    });
    c.check("isofib/swap", |d| {
        let d2 = Kind::Disc(disc("D2", &["p", "q"])).fib(&point);
        let f = isofib(&d2.family, &swap("p", "q"), &d2);
        let mut v = law_violations(&f, d, LIMIT);
        v.extend(diff(&f, &d2, d));
        v
    });

    // Strictification over the interval along (i = 0).
    let d2 = Kind::Disc(disc("D2", &["p", "q"]));
    c.check("strictify/family", |d| {
        let (a, b) = (d2.fib(&face).family, d2.fib(&interval).family);
        let (f, s) = strictify(&at_zero(), &a, &b, &swap("p", "q"));
        let mut v = validate_family(&f, d);
        v.extend(iso_violations(&f, &b, &s, d));
        v.extend(family_diff(&Family::reindex(&f, &face, &identity_map(), "i"), &a, d));
        v.extend(iso_diff(&face, &a, &s, &swap("p", "q"), d));
        v
    });
    let fa = k.fib(&face);
    let fb = kt.fib(&interval);
    let (sf, s2) = strictify_fib(&at_zero(), &fa, &fb, &cod_flip());
    c.check("strictify/fibration", |d| {
        let mut v = law_violations(&sf, d, LIMIT);
        v.extend(diff(&reindex(&sf, &face, &identity_map(), "i"), &fa, d));
        v.extend(iso_diff(&face, &fa.family, &s2, &cod_flip(), d));
        v
    });
    c.check("strictify/bottom", |d| {
        let (f, _) = strictify(&bot, &fa.family, &fb.family, &cod_flip());
        family_diff(&f, &fb.family, d)
    });
    c.check("strictify/top", |d| {
        let (f, s) = strictify(&top, &k.fib(&interval).family, &fb.family, &cod_flip());
        let mut v = family_diff(&f, &k.fib(&interval).family, d);
        v.extend(iso_diff(&interval, &f, &s, &cod_flip(), d));
        v
    });

    // The disjoint union over the ends.
    for base in [&point, &two] {
        let v = veebar(&k.fib(base), &kt.fib(base));
        c.check(&format!("veebar/ends over {}", base.name), |d| {
            let mut out = law_violations(&v, d, LIMIT);
            for (e, want) in [(false, k.fib(base)), (true, kt.fib(base))] {
                out.extend(diff(&reindex(&v, base, &at_end(e), "e"), &want, d));
            }
            out
        });
    }

    // Misaligned paths, isopath and its reindexing.
    for base in [&point, &two] {
        let a = k.fib(base);
        c.check(&format!("improve/identity over {}", base.name), |d| {
            let gi = base.times_interval();
            let m = MisalignedPath {
                a: a.clone(),
                b: a.clone(),
                path: reindex(&a, &gi, &first(), "fst"),
                iso0: StrictIso::identity(),
                iso1: StrictIso::identity(),
            };
            path_ends(&improve(&m), &a, &a, d)
        });
        c.check(&format!("isopath/flip over {}", base.name), |d| {
            let p = isopath(&k.fib(base), &kt.fib(base), &cod_flip());
            let mut v = law_violations(&p.fib, d, LIMIT);
            v.extend(path_ends(&p, &k.fib(base), &kt.fib(base), d));
            v
        });
    }
    c.check("isopath/reindexing", |d| {
        let g = collapse();
        let lhs = isopath(&k.fib(&two), &kt.fib(&two), &cod_flip());
        let lhs = reindex(&lhs.fib, &three.times_interval(), &times_id(&g), "c");
        let rhs = isopath(&k.fib(three), &kt.fib(three), &cod_flip().reindex(&g));
        diff(&lhs, &rhs.fib, d)
    });
    c.check("coerce/swap", |d| {
        let d2 = Kind::Disc(disc("D2", &["p", "q"]));
        let (a, iso) = (d2.fib(&point), swap("p", "q"));
        let mut v = coerce_violations(&a, &a, &iso, d);
        let moved = coerce_along(&isopath(&a, &a, &iso), 0, &El::Star, &El::atom("p"));
        if moved != El::atom("q") {
            v.push(format!("coercing p along the swap gives {moved}"));
        }
        v
    });
    c.check("coerce/flip", |d| coerce_violations(&k.fib(&point), &kt.fib(&point), &cod_flip(), d));

    // Contraction.
    c.check("contract/extension", |d| {
        let a = k.fib(&point);
        let ext = extend_from_contractible(&a, &codiscrete_contraction());
        let mut v = Vec::new();
        for n in 0..=d {
            for phi in super::comp::all_cofs(n) {
                for part in partial_elements(&a.family, n, &El::Star, &phi) {
                    let El::Part(vals) = &part else { unreachable!() };
                    let r = ext(n, &El::Star, &phi, vals);
                    for (face, want) in vals {
                        if a.family.restrict(&face.map(n, 0), &El::Star, &r) != *want {
                            v.push(format!("extension of {part} misses {want}"));
                        }
                    }
                }
            }
        }
        v
    });
    c.check("contract/C_K", |d| {
        let a = k.fib(&point);
        let cf = contraction_fib(&a, &extend_from_contractible(&a, &codiscrete_contraction()));
        let (iso_a, iso_1) = contraction_isos();
        let mut v = law_violations(&cf, d, LIMIT);
        let at = |e| reindex(&cf, &point, &at_end(e), "e").family;
        v.extend(iso_violations(&a.family, &at(false), &iso_a, d));
        v.extend(iso_violations(&Family::unit(&point), &at(true), &iso_1, d));
        v
    });
    c.check("contract/reindexing", |d| {
        let g: SetMap = Rc::new(|_, _| El::Star);
        let lhs = contract_path(&k.fib(&point), &codiscrete_contraction());
        let lhs = reindex(&lhs.fib, &two.times_interval(), &times_id(&g), "!");
        let rhs = contract_path(&k.fib(&two), &codiscrete_contraction());
        diff(&lhs, &rhs.fib, d)
    });
}

/// Per fixture, per axiom: isopath for `A ≅ A × 1` and the ΣΣ flip,
/// contractPath for the contractible fiber, and the coercion witnesses.
pub fn check_axioms(fixtures: &[AxiomFixture], max_dim: usize) -> Report {
    let mut c = Checker { max_dim, report: Report::new() };
    for fx in fixtures {
        let base = &fx.base;
        let name = fx.name();
        let a = fx.a.fib(base);
        let a1 = comp_sigma(&a, &comp_unit(&a.family.total()));
        let left = {
            let b = fx.b.fib(&a.family.total());
            comp_sigma(&a, &times(&b, &fx.c))
        };
        let right = {
            let b = fx.b.fib(base);
            let a2 = fx.a.fib(&b.family.total());
            comp_sigma(&b, &times(&a2, &fx.c))
        };
        c.check(&format!("axiom 1/{name}"), |d| {
            let p = isopath(&a, &a1, &unit_right());
            let mut v = iso_violations(&a.family, &a1.family, &unit_right(), d);
            v.extend(law_violations(&p.fib, d, LIMIT));
            v.extend(path_ends(&p, &a, &a1, d));
            v
        });
        c.check(&format!("axiom 2/{name}"), |d| {
            let p = isopath(&left, &right, &sigma_flip());
            let mut v = iso_violations(&left.family, &right.family, &sigma_flip(), d);
            v.extend(law_violations(&p.fib, d, LIMIT));
            v.extend(path_ends(&p, &left, &right, d));
            v
        });
        c.check(&format!("axiom 3/{name}"), |d| match fx.c.contraction() {
            None => vec![format!("{} has no contraction", fx.c.name())],
            Some(ctr) => {
                let cf = fx.c.fib(base);
                let p = contract_path(&cf, &ctr);
                let mut v = law_violations(&p.fib, d, LIMIT);
                v.extend(path_ends(&p, &cf, &comp_unit(base), d));
                v
            }
        });
        c.check(&format!("axiom 4/{name}"), |d| coerce_violations(&a, &a1, &unit_right(), d));
        c.check(&format!("axiom 5/{name}"), |d| coerce_violations(&left, &right, &sigma_flip(), d));
    }
    c.report
}

/// The axiom fixtures over the given bases.
pub fn axiom_fixtures(bases: &[CSet]) -> Vec<AxiomFixture> {
    let a = Kind::Disc(disc("A", &["a", "a'"]));
    let b = Kind::Disc(disc("B", &["b", "b'"]));
    let one = Kind::Disc(disc("C", &["c"]));
    let mut out: Vec<AxiomFixture> = bases
        .iter()
        .map(|base| AxiomFixture { base: base.clone(), a: a.clone(), b: b.clone(), c: one.clone() })
        .collect();
    // The codiscrete fibers make every product large, so they appear one at a time.
    out.push(AxiomFixture { base: CSet::point(), a: Kind::Cod(true), b: one.clone(), c: one.clone() });
    out.push(AxiomFixture { base: CSet::point(), a: one.clone(), b: one, c: Kind::Cod(false) });
    out
}

/// Runs every check. `extra` is the text of a fixture file whose sets are
/// used as further bases.
pub fn run(max_dim: usize, extra: Option<&str>) -> Result<Report, String> {
    if max_dim == 0 || max_dim > MAX_DIM {
        return Err(format!("--max-dim must be between 1 and {MAX_DIM}"));
    }
    let shipped = parse_fixtures(fixtures::SHIPPED).map_err(|e| e.to_string())?;
    let three = shipped.iter().find(|x| x.name == "three").ok_or("shipped fixtures lack `three`")?;
    let mut bases = vec![CSet::point(), two_points()];
    if let Some(src) = extra {
        bases.extend(parse_fixtures(src).map_err(|e| e.to_string())?);
    }
    let mut c = Checker { max_dim, report: Report::new() };
    library(&mut c, &bases, three);
    let mut report = c.report;
    report.extend(check_axioms(&axiom_fixtures(&bases), max_dim));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_run_passes() {
        let r = run(1, None).unwrap();
        assert!(r.pass, "{}", r.to_text());
    }

    #[test]
    fn dimension_bound_is_enforced() {
        assert!(run(3, None).is_err());
        assert!(run(0, None).is_err());
    }

    #[test]
    fn bad_fixture_text_is_an_error() {
        assert!(run(1, Some("dim 0: a")).is_err());
    }

    #[test]
    fn check_axioms_reports_each_axiom() {
        let r = check_axioms(&axiom_fixtures(&[CSet::point()])[..1], 1);
        let names: Vec<&str> = r.declarations.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names.len(), 5);
        assert!(names.iter().all(|n| n.starts_with("axiom ")));
        assert!(r.pass);
    }
}
