//! Realignment, transfer along isomorphisms, strictification, the `⋎`
//! union, improvement of misaligned paths, and the contraction family.

use std::collections::HashMap;
use std::rc::Rc;

use super::cof::{Cof, Face};
use super::comp::{comp_unit, fill, normalize_part, Fib, Problem};
use super::cset::{part_domain, CSet, CofFam, El, Family, SetMap};
use super::cube::CubeMap;
use super::dm::Dm;

pub type FiberMap = Rc<dyn Fn(usize, &El, &El) -> El>;

/// A pair of natural maps between two families over the same base.
#[derive(Clone)]
pub struct StrictIso {
    pub fwd: FiberMap,
    pub bwd: FiberMap,
}

impl StrictIso {
    pub fn identity() -> StrictIso {
        let id: FiberMap = Rc::new(|_, _, a| a.clone());
        StrictIso { fwd: id.clone(), bwd: id }
    }

    pub fn new(fwd: impl Fn(usize, &El, &El) -> El + 'static, bwd: impl Fn(usize, &El, &El) -> El + 'static) -> StrictIso {
        StrictIso { fwd: Rc::new(fwd), bwd: Rc::new(bwd) }
    }

    pub fn inverse(&self) -> StrictIso {
        StrictIso { fwd: self.bwd.clone(), bwd: self.fwd.clone() }
    }

    /// The same maps read over another base through `gamma`.
    pub fn reindex(&self, gamma: &SetMap) -> StrictIso {
        let (f, g) = (self.fwd.clone(), self.bwd.clone());
        let (g1, g2) = (gamma.clone(), gamma.clone());
        StrictIso::new(move |n, x, a| f(n, &g1(n, x), a), move |n, x, b| g(n, &g2(n, x), b))
    }
}

/// A fibration over `base × I` together with its endpoints.
#[derive(Clone)]
pub struct FibPath {
    pub base: CSet,
    pub fib: Fib,
}

/// `⟨id, e⟩ : Γ → Γ × I`.
pub fn at_end(e: bool) -> SetMap {
    Rc::new(move |n, x| El::pair(x.clone(), El::Dm(Dm::constant(n, e))))
}

/// `fst : Γ × I → Γ`.
pub fn first() -> SetMap {
    Rc::new(|_, x| x.fst().clone())
}

impl FibPath {
    pub fn endpoint(&self, e: bool) -> Fib {
        super::comp::reindex(&self.fib, &self.base, &at_end(e), if e { "1" } else { "0" })
    }
}

/// The comp structure used where `phi` holds.
///
/// `realign(Φ, β, α) e p ψ f a = α e p (ψ ∨ ∀i. Φ(p i)) (f ∪ f') a` where
/// `f'` fills with `β`.
pub fn realign(phi: &CofFam, beta: &Fib, alpha: &Fib) -> Fib {
    let (phi, beta, alpha2) = (phi.clone(), beta.clone(), alpha.clone());
    let family = alpha.family.clone();
    Fib {
        family: family.clone(),
        comp: Rc::new(move |prob| {
            let n = prob.n;
            let all = phi(n + 1, &prob.p).forall_last();
            if all.is_bot() {
                return (alpha2.comp)(prob);
            }
            let mut vals = prob.f.clone();
            for face in all.maximal() {
                let sub = prob.restrict(&family, &face.map(n, 0));
                vals.push((face, fill(&beta, &sub)));
            }
            let widened = Problem {
                phi: prob.phi.or(&all),
                f: normalize_part(vals),
                ..prob.clone()
            };
            (alpha2.comp)(&widened)
        }),
    }
}

/// Transfers a composition structure on `B` to `A` across `iso : A ≅ B`.
pub fn isofib(a: &Family, iso: &StrictIso, beta: &Fib) -> Fib {
    let (iso, beta) = (iso.clone(), beta.clone());
    let base = a.base.clone();
    Fib {
        family: a.clone(),
        comp: Rc::new(move |prob| {
            let n = prob.n;
            let moved = Problem {
                f: prob.map_f(|face, v| (iso.fwd)(face.free(n) + 1, &base.restrict(&face.map(n, 1), &prob.p), v)),
                a0: (iso.fwd)(n, &prob.p_at(&base, prob.e), &prob.a0),
                ..prob.clone()
            };
            (iso.bwd)(n, &prob.p_at(&base, !prob.e), &(beta.comp)(&moved))
        }),
    }
}

/// Strictification of families. `a` lives over `Γ|Φ`, `b` over `Γ`, and
/// `iso : a ≅ b` there. The result agrees with `a` on the nose where `Φ`
/// holds and with `b` elsewhere; restricting into the `Φ` region applies
/// the backward map once.
pub fn strictify(phi: &CofFam, a: &Family, b: &Family, iso: &StrictIso) -> (Family, StrictIso) {
    let inside = |phi: &CofFam, n: usize, x: &El| phi(n, x).is_top();
    let (p1, p2, p3, p4) = (phi.clone(), phi.clone(), phi.clone(), phi.clone());
    let (afib, bfib, aact, bact) = (a.fiber.clone(), b.fiber.clone(), a.act.clone(), b.act.clone());
    let base2 = b.base.clone();
    let bwd = iso.bwd.clone();
    let family = Family {
        name: format!("strictify({}, {})", a.name, b.name),
        base: b.base.clone(),
        fiber: Rc::new(move |n, x| if inside(&p1, n, x) { afib(n, x) } else { bfib(n, x) }),
        act: Rc::new(move |f, x, el| {
            if inside(&p2, f.from, x) {
                return aact(f, x, el);
            }
            let moved = bact(f, x, el);
            let xf = base2.restrict(f, x);
            if inside(&p2, f.to, &xf) {
                bwd(f.to, &xf, &moved)
            } else {
                moved
            }
        }),
    };
    let (f, g) = (iso.fwd.clone(), iso.bwd.clone());
    let iso2 = StrictIso::new(
        move |n, x, el| if inside(&p3, n, x) { f(n, x, el) } else { el.clone() },
        move |n, x, el| if inside(&p4, n, x) { g(n, x, el) } else { el.clone() },
    );
    (family, iso2)
}

/// Strictification of fibrations: the comp structure is
/// `realign(Φ, α, isofib(iso', β))`.
pub fn strictify_fib(phi: &CofFam, a: &Fib, b: &Fib, iso: &StrictIso) -> (Fib, StrictIso) {
    let (family, iso2) = strictify(phi, &a.family, &b.family, iso);
    let pre = isofib(&family, &iso2, b);
    (realign(phi, a, &pre), iso2)
}

/// `Φ(x, r) = (r = 0) ∨ (r = 1)` on `Γ × I`.
pub fn ends() -> CofFam {
    Rc::new(|n, x| {
        let r = x.snd().dm();
        Cof::term_eq(&r, n, false).or(&Cof::term_eq(&r, n, true))
    })
}

/// The disjoint union `A ⋎ B` over `(Γ × I) | Φ`. A path in that base has
/// a constant interval coordinate, so each problem is solved wholly in `A`
/// or wholly in `B`.
pub fn veebar(a: &Fib, b: &Fib) -> Fib {
    let base = a.family.base.times_interval().restrict_to(&ends(), "ends");
    let zero = |x: &El| x.snd().dm().as_const() == Some(false);
    let (af, bf, aa, ba) = (a.family.fiber.clone(), b.family.fiber.clone(), a.family.act.clone(), b.family.act.clone());
    let family = Family {
        name: format!("{} v {}", a.family.name, b.family.name),
        base,
        fiber: Rc::new(move |n, x| if zero(x) { af(n, x.fst()) } else { bf(n, x.fst()) }),
        act: Rc::new(move |f, x, el| if zero(x) { aa(f, x.fst(), el) } else { ba(f, x.fst(), el) }),
    };
    let (ac, bc) = (a.comp.clone(), b.comp.clone());
    Fib {
        family,
        comp: Rc::new(move |prob| {
            let inner = Problem { p: prob.p.fst().clone(), ..prob.clone() };
            if zero(&prob.p) {
                ac(&inner)
            } else {
                bc(&inner)
            }
        }),
    }
}

/// `iso0 ⋎ iso1`.
pub fn veebar_iso(iso0: &StrictIso, iso1: &StrictIso) -> StrictIso {
    let pick = |i0: FiberMap, i1: FiberMap| -> FiberMap {
        Rc::new(move |n, x, el| {
            if x.snd().dm().as_const() == Some(false) {
                i0(n, x.fst(), el)
            } else {
                i1(n, x.fst(), el)
            }
        })
    };
    StrictIso {
        fwd: pick(iso0.fwd.clone(), iso1.fwd.clone()),
        bwd: pick(iso0.bwd.clone(), iso1.bwd.clone()),
    }
}

/// A fibration over `Γ × I` with isomorphisms from `a` and `b` to its ends.
#[derive(Clone)]
pub struct MisalignedPath {
    pub a: Fib,
    pub b: Fib,
    pub path: Fib,
    pub iso0: StrictIso,
    pub iso1: StrictIso,
}

/// Strictifies the path along `iso0 ⋎ iso1` so its ends are `a` and `b`.
pub fn improve(m: &MisalignedPath) -> FibPath {
    let v = veebar(&m.a, &m.b);
    let (fib, _) = strictify_fib(&ends(), &v, &m.path, &veebar_iso(&m.iso0, &m.iso1));
    FibPath { base: m.a.family.base.clone(), fib }
}

/// `isopath(iso) = improve(B[fst], iso, id)`.
pub fn isopath(a: &Fib, b: &Fib, iso: &StrictIso) -> FibPath {
    let gi = a.family.base.times_interval();
    let path = super::comp::reindex(b, &gi, &first(), "fst");
    improve(&MisalignedPath {
        a: a.clone(),
        b: b.clone(),
        path,
        iso0: iso.clone(),
        iso1: StrictIso::identity(),
    })
}

/// The path `⟨x, id⟩` over `n + 1` dimensions.
pub fn diagonal(base: &CSet, n: usize, x: &El) -> El {
    El::pair(base.restrict(&CubeMap::weaken(n, 1), x), El::Dm(Dm::var(n + 1, n)))
}

/// Coercion along a path of fibrations: the empty composition from 0 to 1.
pub fn coerce_along(path: &FibPath, n: usize, x: &El, a: &El) -> El {
    (path.fib.comp)(&Problem {
        e: false,
        n,
        p: diagonal(&path.base, n, x),
        phi: Cof::bot(n),
        f: Vec::new(),
        a0: a.clone(),
    })
}

/// A path from `f x a` to the coercion of `a` along `isopath(f, g)`:
/// the filler of the empty composition in `B` starting at `f x a`.
pub fn coerce_iso_witness(b: &Fib, iso: &StrictIso, n: usize, x: &El, a: &El) -> El {
    let base = &b.family.base;
    fill(
        b,
        &Problem {
            e: false,
            n,
            p: base.restrict(&CubeMap::weaken(n, 1), x),
            phi: Cof::bot(n),
            f: Vec::new(),
            a0: (iso.fwd)(n, x, a),
        },
    )
}

/// `(n, x, phi, partial element) -> total element extending it`.
pub type ExtStruct = Rc<dyn Fn(usize, &El, &Cof, &[(Face, El)]) -> El>;

/// A centre in every fiber and a path from it to every element; paths have
/// one extra trailing dimension.
#[derive(Clone)]
pub struct ContrStruct {
    pub centre: Rc<dyn Fn(usize, &El) -> El>,
    pub path: FiberMap,
}

/// Extension from fibrancy and contractibility: compose, from the centre,
/// the contraction paths to the given partial element.
pub fn extend_from_contractible(a: &Fib, c: &ContrStruct) -> ExtStruct {
    let (a, c) = (a.clone(), c.clone());
    Rc::new(move |n, x, phi, vals| {
        let base = &a.family.base;
        let prob = Problem {
            e: false,
            n,
            p: base.restrict(&CubeMap::weaken(n, 1), x),
            phi: *phi,
            f: vals
                .iter()
                .map(|(face, v)| (*face, (c.path)(face.free(n), &base.restrict(&face.map(n, 0), x), v)))
                .collect(),
            a0: (c.centre)(n, x),
        };
        (a.comp)(&prob)
    })
}

/// Partial elements of `fam` over `x` on the cofibration `dom`.
pub fn partial_elements(fam: &Family, n: usize, x: &El, dom: &Cof) -> Vec<El> {
    let faces = dom.maximal();
    let mut out: Vec<Vec<(Face, El)>> = vec![Vec::new()];
    for face in &faces {
        let over = fam.base.restrict(&face.map(n, 0), x);
        let cands = (fam.fiber)(face.free(n), &over);
        out = out
            .into_iter()
            .flat_map(|part| {
                cands.iter().map(move |v| {
                    let mut next = part.clone();
                    next.push((*face, v.clone()));
                    next
                })
            })
            .filter(|part| {
                let (lf, lv) = part.last().expect("non-empty");
                part[..part.len() - 1].iter().all(|(f2, v2)| match f2.meet(lf) {
                    None => true,
                    Some(m) => {
                        let g = m.map(n, 0);
                        fam.part_at(x, n, 0, &[(*f2, v2.clone())], &g) == fam.part_at(x, n, 0, &[(*lf, lv.clone())], &g)
                    }
                })
            })
            .collect();
    }
    out.into_iter().map(El::Part).collect()
}

fn part_vals(el: &El) -> &[(Face, El)] {
    match el {
        El::Part(v) => v,
        other => panic!("not a partial element: {other}"),
    }
}

/// The contraction `C_A(x, i) = [i = 0] → A(x)` over `Γ × I` with the
/// composition `(c e p φ f c0) u = ε φ (λ v. f v ē u)`.
pub fn contraction_fib(a: &Fib, ext: &ExtStruct) -> Fib {
    let fam = a.family.clone();
    let base = fam.base.times_interval();
    let (f1, f2) = (fam.clone(), fam.clone());
    let family = Family {
        name: format!("C({})", fam.name),
        base: base.clone(),
        fiber: Rc::new(move |n, x| {
            let dom = Cof::term_eq(&x.snd().dm(), n, false);
            partial_elements(&f1, n, x.fst(), &dom)
        }),
        act: Rc::new(move |f, x, el| {
            let n = f.from;
            El::Part(f2.part_restrict(x.fst(), n, 0, part_vals(el), f, f.to))
        }),
    };
    let ext = ext.clone();
    let fam3 = family.clone();
    Fib {
        family,
        comp: Rc::new(move |prob| {
            let n = prob.n;
            let end = prob.p_at(&fam3.base, !prob.e);
            let dom = Cof::term_eq(&end.snd().dm(), n, false);
            let vals: Vec<(Face, El)> = dom
                .maximal()
                .into_iter()
                .map(|u| {
                    let k = u.free(n);
                    let um = u.map(n, 0);
                    let phi_u = prob.phi.restrict(&um, k);
                    let given: Vec<(Face, El)> = phi_u
                        .maximal()
                        .into_iter()
                        .map(|t| {
                            let h = CubeMap::end(n, !prob.e).then(&um).then(&t.map(k, 0));
                            let c = fam3.part_at(&prob.p, n, 1, &prob.f, &h).expect("face lies in phi");
                            let top = part_vals(&c).iter().find(|(g, _)| *g == Face::TOP).expect("total on the face");
                            (t, top.1.clone())
                        })
                        .collect();
                    let xu = fam.base.restrict(&um, end.fst());
                    (u, ext(k, &xu, &phi_u, &given))
                })
                .collect();
            El::Part(vals)
        }),
    }
}

/// `A ≅ C_A[⟨id, 0⟩]` and `1 ≅ C_A[⟨id, 1⟩]`.
pub fn contraction_isos() -> (StrictIso, StrictIso) {
    let at0 = StrictIso::new(
        |_, _, a| El::Part(vec![(Face::TOP, a.clone())]),
        |_, _, c| part_vals(c)[0].1.clone(),
    );
    let at1 = StrictIso::new(|_, _, _| El::Part(Vec::new()), |_, _, _| El::Star);
    (at0, at1)
}

/// `contract((A, α), ε) = improve((C_A, c_α), iso_A, iso_1)`.
pub fn contract_path(a: &Fib, c: &ContrStruct) -> FibPath {
    let ext = extend_from_contractible(a, c);
    let path = contraction_fib(a, &ext);
    let (iso_a, iso_1) = contraction_isos();
    improve(&MisalignedPath {
        a: a.clone(),
        b: comp_unit(&a.family.base),
        path,
        iso0: iso_a,
        iso1: iso_1,
    })
}

/// Composition on the codiscrete family: vertices inside `phi` take the
/// value of `f` at the far end, the others keep `a0`. With `twist`, the
/// kept vertices are negated instead, which gives a second, different
/// structure on the same family.
pub fn comp_codiscrete(family: Family, twist: bool) -> Fib {
    Fib {
        family: family.clone(),
        comp: Rc::new(move |prob| codiscrete_comp(&family, prob, twist)),
    }
}

fn codiscrete_comp(fam: &Family, prob: &Problem, twist: bool) -> El {
    let n = prob.n;
    let a0 = match prob.a0 {
        El::Cod(b) => b,
        ref other => panic!("not a codiscrete cube: {other}"),
    };
    let dom = part_domain(n, &prob.f);
    let mut bits = 0u32;
    for w in 0..1usize << n {
        let vertex = Face { fixed: ((1u16 << n) - 1) as u8, value: w as u8 };
        let bit = if dom.holds(&vertex) {
            match prob.f_at(fam, &vertex, !prob.e) {
                El::Cod(b) => b & 1,
                other => panic!("not a codiscrete cube: {other}"),
            }
        } else {
            ((a0 >> w) & 1) ^ twist as u32
        };
        bits |= bit << w;
    }
    El::Cod(bits)
}

/// Centre 0 and the path `z ↦ if z = 0 then 0 else a`.
pub fn codiscrete_contraction() -> ContrStruct {
    ContrStruct {
        centre: Rc::new(|_, _| El::Cod(0)),
        path: Rc::new(|n, _, a| match a {
            El::Cod(b) => El::Cod(b << (1 << n)),
            other => panic!("not a codiscrete cube: {other}"),
        }),
    }
}


/// First difference between two fibrations over the same base: fibers and
/// actions up to `max_dim`, compositions on every problem whose path fits.
pub fn fib_diff(a: &Fib, b: &Fib, max_dim: usize) -> Option<String> {
    let (fa, fb) = (&a.family, &b.family);
    for n in 0..=max_dim {
        for x in (fa.base.objects)(n) {
            let (ea, eb) = ((fa.fiber)(n, &x), (fb.fiber)(n, &x));
            if ea != eb {
                return Some(format!("fibers differ over {x}"));
            }
            for m in 0..=max_dim {
                for f in super::cset::maps(n, m).iter() {
                    for el in &ea {
                        if fa.restrict(f, &x, el) != fb.restrict(f, &x, el) {
                            return Some(format!("actions differ on {el} over {x} along {f}"));
                        }
                    }
                }
            }
        }
    }
    for n in 0..max_dim {
        for prob in super::comp::problems(fa, n) {
            if (a.comp)(&prob) != (b.comp)(&prob) {
                return Some(format!("compositions differ at stage {n} over {}", prob.p));
            }
        }
    }
    None
}

/// Boundary and uniformity violations on every problem whose path fits in
/// `max_dim` dimensions; at most `limit` are returned.
pub fn law_violations(fib: &Fib, max_dim: usize, limit: usize) -> Vec<String> {
    let fam = &fib.family;
    // Restricted problems are themselves enumerated, so answers are shared.
    let mut memo: HashMap<Problem, El> = HashMap::new();
    let mut solve = |p: &Problem| -> El { memo.entry(p.clone()).or_insert_with(|| (fib.comp)(p)).clone() };
    let mut fibers: HashMap<(usize, El), Vec<El>> = HashMap::new();
    let mut out = Vec::new();
    for n in 0..max_dim {
        for prob in super::comp::problems(fam, n) {
            let r = solve(&prob);
            let end = prob.p_at(&fam.base, !prob.e);
            let fiber = fibers.entry((n, end.clone())).or_insert_with(|| (fam.fiber)(n, &end));
            let mut found = if fiber.contains(&r) {
                super::comp::boundary_mismatch(fam, &prob, &r)
            } else {
                Some(format!("{}: result {r} is not over {end}", fam.name))
            };
            if found.is_none() {
                'maps: for m in 0..max_dim {
                    for g in super::cset::maps(n, m).iter() {
                        if solve(&prob.restrict(fam, g)) != fam.restrict(g, &end, &r) {
                            found = Some(format!("{}: composition not natural along {g}", fam.name));
                            break 'maps;
                        }
                    }
                }
            }
            if let Some(v) = found {
                out.push(v);
                if out.len() >= limit {
                    return out;
                }
            }
        }
    }
    out
}

/// Membership, inverse laws and naturality of an isomorphism of families.
pub fn iso_violations(a: &Family, b: &Family, iso: &StrictIso, max_dim: usize) -> Vec<String> {
    let mut out = Vec::new();
    for n in 0..=max_dim {
        for x in (a.base.objects)(n) {
            let (fa, fb) = ((a.fiber)(n, &x), (b.fiber)(n, &x));
            for el in &fa {
                let y = (iso.fwd)(n, &x, el);
                if !fb.contains(&y) {
                    out.push(format!("forward image {y} of {el} is not over {x}"));
                } else if (iso.bwd)(n, &x, &y) != *el {
                    out.push(format!("backward after forward moves {el} over {x}"));
                }
                for m in 0..=max_dim {
                    for f in super::cset::maps(n, m).iter() {
                        let xf = a.base.restrict(f, &x);
                        if (iso.fwd)(m, &xf, &a.restrict(f, &x, el)) != b.restrict(f, &x, &y) {
                            out.push(format!("forward map not natural at {el} over {x} along {f}"));
                        }
                    }
                }
            }
            for el in &fb {
                let y = (iso.bwd)(n, &x, el);
                if !fa.contains(&y) || (iso.fwd)(n, &x, &y) != *el {
                    out.push(format!("forward after backward moves {el} over {x}"));
                }
            }
        }
    }
    out
}

/// Checks, at every point of `a`, that the witness path starts at `f x a`
/// and ends at the coercion along `isopath(iso)`.
pub fn coerce_violations(a: &Fib, b: &Fib, iso: &StrictIso, max_dim: usize) -> Vec<String> {
    let mut out = Vec::new();
    let path = isopath(a, b, iso);
    let base = &a.family.base;
    for n in 0..max_dim {
        for x in (base.objects)(n) {
            let over = base.restrict(&CubeMap::weaken(n, 1), &x);
            let line = (b.family.fiber)(n + 1, &over);
            for el in (a.family.fiber)(n, &x) {
                let w = coerce_iso_witness(b, iso, n, &x, &el);
                if !line.contains(&w) {
                    out.push(format!("witness {w} is not a path over {x}"));
                    continue;
                }
                let at = |e| b.family.restrict(&CubeMap::end(n, e), &over, &w);
                let (start, goal) = ((iso.fwd)(n, &x, &el), coerce_along(&path, n, &x, &el));
                if at(false) != start {
                    out.push(format!("witness for {el} over {x} starts at {} not {start}", at(false)));
                }
                if at(true) != goal {
                    out.push(format!("witness for {el} over {x} ends at {} not {goal}", at(true)));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::comp::{boundary_violation, comp_discrete, comp_sigma, problems, uniformity_violation};

    fn k_over(base: &CSet, twist: bool) -> Fib {
        comp_codiscrete(Family::constant(base, &CSet::codiscrete()), twist)
    }

    fn assert_lawful(fib: &Fib, max_n: usize) {
        for n in 0..=max_n {
            for prob in problems(&fib.family, n) {
                if let Some(e) = boundary_violation(fib, &prob) {
                    panic!("{e}");
                }
                if let Some(e) = uniformity_violation(fib, &prob, max_n) {
                    panic!("{e}");
                }
            }
        }
    }

    #[test]
    fn codiscrete_comps_are_lawful() {
        assert_lawful(&k_over(&CSet::point(), false), 1);
        assert_lawful(&k_over(&CSet::point(), true), 1);
    }

    #[test]
    fn discrete_comp_is_lawful() {
        let two = CSet::discrete("2", &["a", "b"]);
        assert_lawful(&comp_discrete(Family::constant(&CSet::point(), &two)), 1);
    }

    #[test]
    fn fill_has_the_right_ends() {
        let fib = k_over(&CSet::point(), true);
        for prob in problems(&fib.family, 1) {
            let path = fill(&fib, &prob);
            let at = |e| fib.family.restrict(&CubeMap::end(1, e), &El::Star, &path);
            assert_eq!(at(prob.e), prob.a0);
            assert_eq!(at(!prob.e), (fib.comp)(&prob));
        }
    }

    #[test]
    fn sigma_comp_is_lawful() {
        let a = k_over(&CSet::point(), false);
        let b = k_over(&a.family.total(), true);
        assert_lawful(&comp_sigma(&a, &b), 1);
    }

    #[test]
    fn isopath_ends() {
        let a = k_over(&CSet::point(), false);
        let b = k_over(&CSet::point(), true);
        let mask = |n: usize, _: &El, v: &El| match v {
            El::Cod(x) => El::Cod(!x & ((1u64 << (1 << n)) - 1) as u32),
            _ => unreachable!(),
        };
        let iso = StrictIso::new(mask, mask);
        let path = isopath(&a, &b, &iso);
        assert_eq!(fib_diff(&path.endpoint(false), &a, 2), None);
        assert_eq!(fib_diff(&path.endpoint(true), &b, 2), None);
    }

    fn flip() -> StrictIso {
        let mask = |n: usize, _: &El, v: &El| match v {
            El::Cod(x) => El::Cod(!x & ((1u64 << (1 << n)) - 1) as u32),
            _ => unreachable!(),
        };
        StrictIso::new(mask, mask)
    }

    #[test]
    fn isopath_is_lawful() {
        let a = k_over(&CSet::point(), false);
        let b = k_over(&CSet::point(), true);
        assert_lawful(&isopath(&a, &b, &flip()).fib, 1);
    }

    #[test]
    fn coerce_witness_ends() {
        let a = k_over(&CSet::point(), false);
        let b = k_over(&CSet::point(), true);
        let iso = flip();
        let path = isopath(&a, &b, &iso);
        for n in 0..=1 {
            for x in (a.family.fiber)(n, &El::Star) {
                let w = coerce_iso_witness(&b, &iso, n, &El::Star, &x);
                let at = |e| b.family.restrict(&CubeMap::end(n, e), &El::Star, &w);
                assert_eq!(at(false), (iso.fwd)(n, &El::Star, &x));
                assert_eq!(at(true), coerce_along(&path, n, &El::Star, &x));
            }
        }
    }

    #[test]
    fn contraction_path_is_lawful() {
        let a = k_over(&CSet::point(), false);
        let path = contract_path(&a, &codiscrete_contraction());
        assert_lawful(&path.fib, 1);
        assert_eq!(fib_diff(&path.endpoint(false), &a, 2), None);
        assert_eq!(fib_diff(&path.endpoint(true), &comp_unit(&CSet::point()), 2), None);
    }

    #[test]
    fn law_check_catches_a_comp_ignoring_its_tube() {
        let fam = Family::constant(&CSet::point(), &CSet::codiscrete());
        let lazy = Fib { family: fam, comp: Rc::new(|p| p.a0.clone()) };
        assert!(!law_violations(&lazy, 2, 1).is_empty());
    }

    fn d2() -> Fib {
        crate::model::comp::comp_discrete(Family::constant(&CSet::point(), &CSet::discrete("D2", &["p", "q"])))
    }

    fn swap() -> StrictIso {
        let f = |_: usize, _: &El, v: &El| if *v == El::atom("p") { El::atom("q") } else { El::atom("p") };
        StrictIso::new(f, f)
    }

    #[test]
    fn coercion_along_a_constant_path_is_the_identity() {
        let a = d2();
        let path = FibPath {
            base: CSet::point(),
            fib: crate::model::comp::reindex(&a, &CSet::point().times_interval(), &first(), "fst"),
        };
        assert_eq!(coerce_along(&path, 0, &El::Star, &El::atom("p")), El::atom("p"));
    }

    #[test]
    fn coercion_along_the_swap_path_swaps() {
        let a = d2();
        let path = isopath(&a, &a, &swap());
        assert_eq!(coerce_along(&path, 0, &El::Star, &El::atom("p")), El::atom("q"));
        assert_eq!(coerce_along(&path, 1, &El::Star, &El::atom("q")), El::atom("p"));
    }

    #[test]
    fn realign_with_empty_cofibration_is_the_base_structure() {
        let (a, b) = (k_over(&CSet::point(), false), k_over(&CSet::point(), true));
        let bot: CofFam = Rc::new(|n, _| Cof::bot(n));
        assert_eq!(fib_diff(&realign(&bot, &b, &a), &a, 2), None);
        let top: CofFam = Rc::new(|n, _| Cof::top(n));
        assert_eq!(fib_diff(&realign(&top, &b, &a), &b, 2), None);
    }

    #[test]
    fn isofib_of_identity() {
        let b = k_over(&CSet::point(), true);
        assert_eq!(fib_diff(&isofib(&b.family, &StrictIso::identity(), &b), &b, 2), None);
    }

    #[test]
    fn veebar_ends() {
        let (a, b) = (k_over(&CSet::point(), false), k_over(&CSet::point(), true));
        let v = veebar(&a, &b);
        let end = |e| crate::model::comp::reindex(&v, &CSet::point(), &at_end(e), "e");
        assert_eq!(fib_diff(&end(false), &a, 2), None);
        assert_eq!(fib_diff(&end(true), &b, 2), None);
    }

    #[test]
    fn extension_from_a_singleton() {
        let one = crate::model::comp::comp_discrete(Family::constant(&CSet::point(), &CSet::discrete("D1", &["u"])));
        let c = ContrStruct { centre: Rc::new(|_, _| El::atom("u")), path: Rc::new(|_, _, a| a.clone()) };
        let ext = extend_from_contractible(&one, &c);
        assert_eq!(ext(1, &El::Star, &Cof::bot(1), &[]), El::atom("u"));
        let vals = [(Face::single(0, false), El::atom("u"))];
        assert_eq!(ext(1, &El::Star, &Cof::dim_eq(1, 0, false), &vals), El::atom("u"));
    }

    #[test]
    fn extension_in_the_codiscrete_set() {
        let a = k_over(&CSet::point(), false);
        let ext = extend_from_contractible(&a, &codiscrete_contraction());
        // Nothing given: the centre.
        assert_eq!(ext(1, &El::Star, &Cof::bot(1), &[]), El::Cod(0));
        // Value 1 at i = 0 is kept; the free vertex takes the centre.
        let vals = [(Face::single(0, false), El::Cod(1))];
        assert_eq!(ext(1, &El::Star, &Cof::dim_eq(1, 0, false), &vals), El::Cod(0b01));
    }

    #[test]
    fn contracting_the_unit() {
        let u = comp_unit(&CSet::point());
        let c = ContrStruct { centre: Rc::new(|_, _| El::Star), path: Rc::new(|_, _, _| El::Star) };
        let path = contract_path(&u, &c);
        assert_eq!(fib_diff(&path.endpoint(false), &u, 2), None);
        assert_eq!(fib_diff(&path.endpoint(true), &u, 2), None);
    }
}
