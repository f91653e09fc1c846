//! Composition structures and the problems they solve.

use std::rc::Rc;

use super::cof::{Cof, Face};
use super::cset::{maps, part_domain, CSet, El, Family, SetMap};
use super::cube::CubeMap;
use super::dm::Dm;

/// A composition problem over `n` dimensions. The base path `p` has one
/// more dimension, the last one, along which we compose from `e` to `!e`.
/// `f` is a partial path given on the maximal faces of `phi`; each value
/// lies over `p` restricted to the face.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Problem {
    pub e: bool,
    pub n: usize,
    pub p: El,
    pub phi: Cof,
    pub f: Vec<(Face, El)>,
    pub a0: El,
}

pub type CompFn = Rc<dyn Fn(&Problem) -> El>;

#[derive(Clone)]
pub struct Fib {
    pub family: Family,
    pub comp: CompFn,
}

impl Problem {
    /// Base point at an end of the path.
    pub fn p_at(&self, base: &CSet, end: bool) -> El {
        base.restrict(&CubeMap::end(self.n, end), &self.p)
    }

    /// `(phi, f) @ end` on the face `face`.
    pub fn f_at(&self, fam: &Family, face: &Face, end: bool) -> El {
        let g = CubeMap::end(self.n, end).then(&face.map(self.n, 0));
        fam.part_at(&self.p, self.n, 1, &self.f, &g).expect("face lies in phi")
    }

    /// The problem restricted along a map of the non-path dimensions.
    pub fn restrict(&self, fam: &Family, g: &CubeMap) -> Problem {
        let m = g.to;
        let g1 = g.extend(1);
        Problem {
            e: self.e,
            n: m,
            p: fam.base.restrict(&g1, &self.p),
            phi: self.phi.restrict(g, m),
            f: fam.part_restrict(&self.p, self.n, 1, &self.f, &g1, m),
            a0: fam.restrict(g, &self.p_at(&fam.base, self.e), &self.a0),
        }
    }

    /// Maps every value of the partial path.
    pub fn map_f(&self, h: impl Fn(&Face, &El) -> El) -> Vec<(Face, El)> {
        self.f.iter().map(|(face, v)| (*face, h(face, v))).collect()
    }
}

/// Keeps the entries whose faces are maximal among those listed.
pub fn normalize_part(vals: Vec<(Face, El)>) -> Vec<(Face, El)> {
    let faces: Vec<Face> = vals.iter().map(|(f, _)| *f).collect();
    let mut out: Vec<(Face, El)> = Vec::new();
    for (k, (f, v)) in vals.into_iter().enumerate() {
        let covered = faces
            .iter()
            .enumerate()
            .any(|(j, g)| j != k && f.refines(g) && (f != *g || j < k));
        if !covered {
            out.push((f, v));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Every cofibration over `n` dimensions.
pub fn all_cofs(n: usize) -> Vec<Cof> {
    let faces = Face::all(n);
    let mut out: Vec<Cof> = (0..(1u64 << faces.len()))
        .map(|s| {
            let gens: Vec<Face> = (0..faces.len()).filter(|i| s & (1 << i) != 0).map(|i| faces[i]).collect();
            Cof::generated(n, &gens)
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Every composition problem for `fam` over `n` dimensions.
pub fn problems(fam: &Family, n: usize) -> Vec<Problem> {
    let mut out = Vec::new();
    for p in (fam.base.objects)(n + 1) {
        for phi in all_cofs(n) {
            let faces = phi.maximal();
            let mut partials: Vec<Vec<(Face, El)>> = vec![Vec::new()];
            for face in &faces {
                let over = fam.base.restrict(&face.map(n, 1), &p);
                let cands = (fam.fiber)(face.free(n) + 1, &over);
                partials = partials
                    .into_iter()
                    .flat_map(|part| {
                        cands.iter().filter_map(move |v| {
                            let mut next = part.clone();
                            next.push((*face, v.clone()));
                            Some(next)
                        })
                    })
                    .filter(|part| compatible(fam, &p, n, part))
                    .collect();
            }
            for f in partials {
                for e in [false, true] {
                    let pe = fam.base.restrict(&CubeMap::end(n, e), &p);
                    for a0 in (fam.fiber)(n, &pe) {
                        let prob = Problem { e, n, p: p.clone(), phi, f: f.clone(), a0 };
                        let agrees = faces.iter().all(|face| {
                            fam.restrict(&face.map(n, 0), &pe, &prob.a0) == prob.f_at(fam, face, e)
                        });
                        if agrees {
                            out.push(prob);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Pairwise agreement of a partial path on overlapping faces.
fn compatible(fam: &Family, p: &El, n: usize, part: &[(Face, El)]) -> bool {
    let (last_face, last) = part.last().expect("non-empty");
    part[..part.len() - 1].iter().all(|(face, v)| match face.meet(last_face) {
        None => true,
        Some(m) => {
            let g = m.map(n, 1);
            fam.part_at(p, n, 1, &[(*face, v.clone())], &g) == fam.part_at(p, n, 1, &[(*last_face, last.clone())], &g)
        }
    })
}

/// Result membership and the boundary condition `(phi, f) @ !e` extends to the result.
pub fn boundary_violation(fib: &Fib, prob: &Problem) -> Option<String> {
    let fam = &fib.family;
    let r = (fib.comp)(prob);
    let end = fam.base.restrict(&CubeMap::end(prob.n, !prob.e), &prob.p);
    if !(fam.fiber)(prob.n, &end).contains(&r) {
        return Some(format!("{}: result {r} is not over {end}", fam.name));
    }
    boundary_mismatch(fam, prob, &r)
}

/// The boundary condition alone, for a result already computed.
pub fn boundary_mismatch(fam: &Family, prob: &Problem, r: &El) -> Option<String> {
    let end = fam.base.restrict(&CubeMap::end(prob.n, !prob.e), &prob.p);
    for face in part_domain(prob.n, &prob.f).maximal() {
        let want = prob.f_at(fam, &face, !prob.e);
        let got = fam.restrict(&face.map(prob.n, 0), &end, r);
        if got != want {
            return Some(format!("{}: boundary fails on {} ({got} vs {want})", fam.name, face.render(prob.n)));
        }
    }
    None
}

/// Naturality of the composition along maps of the non-path dimensions.
pub fn uniformity_violation(fib: &Fib, prob: &Problem, max_n: usize) -> Option<String> {
    let fam = &fib.family;
    let r = (fib.comp)(prob);
    let end = fam.base.restrict(&CubeMap::end(prob.n, !prob.e), &prob.p);
    for m in 0..=max_n {
        for g in maps(prob.n, m).iter() {
            let lhs = (fib.comp)(&prob.restrict(fam, g));
            let rhs = fam.restrict(g, &end, &r);
            if lhs != rhs {
                return Some(format!("{}: composition not natural along {g}", fam.name));
            }
        }
    }
    None
}

/// Filling: a path over `p` starting at `a0` and ending at the composite,
/// agreeing with `f` on `phi` throughout. Uses the connection `i & j`
/// (`i | j` when composing from 1).
pub fn fill(fib: &Fib, prob: &Problem) -> El {
    let fam = &fib.family;
    let n = prob.n;
    let along = |free: usize| {
        let to = free + 2;
        let (i, j) = (Dm::var(to, free), Dm::var(to, free + 1));
        let mut assign: Vec<Dm> = (0..free).map(|k| Dm::var(to, k)).collect();
        assign.push(if prob.e { i.join(&j) } else { i.meet(&j) });
        CubeMap::new(to, assign)
    };
    let p2 = fam.base.restrict(&along(n), &prob.p);
    let phi2 = prob.phi.insert_dim(n).or(&Cof::dim_eq(n + 1, n, prob.e));
    let pe = prob.p_at(&fam.base, prob.e);
    let a0_up = fam.restrict(&CubeMap::weaken(n, 1), &pe, &prob.a0);
    let mut vals: Vec<(Face, El)> = prob
        .f
        .iter()
        .map(|(face, v)| {
            let over = fam.base.restrict(&face.map(n, 1), &prob.p);
            (face.insert_dim(n), fam.restrict(&along(face.free(n)), &over, v))
        })
        .collect();
    vals.push((Face::single(n, prob.e), a0_up.clone()));
    let sub = Problem {
        e: prob.e,
        n: n + 1,
        p: p2,
        phi: phi2,
        f: normalize_part(vals),
        a0: a0_up,
    };
    (fib.comp)(&sub)
}

/// The unique composition structure on the unit family.
pub fn comp_unit(base: &CSet) -> Fib {
    Fib { family: Family::unit(base), comp: Rc::new(|_| El::Star) }
}

/// Composition for a family whose restriction action is trivial: every
/// path is constant, so the starting point is the answer.
pub fn comp_discrete(family: Family) -> Fib {
    Fib { family, comp: Rc::new(|prob| prob.a0.clone()) }
}

/// Reindexing `(A, alpha)[gamma]`.
pub fn reindex(fib: &Fib, delta: &CSet, gamma: &SetMap, label: &str) -> Fib {
    let comp = fib.comp.clone();
    let gamma2 = gamma.clone();
    Fib {
        family: fib.family.reindex(delta, gamma, label),
        comp: Rc::new(move |prob| {
            comp(&Problem {
                p: gamma2(prob.n + 1, &prob.p),
                ..prob.clone()
            })
        }),
    }
}

/// The Sigma family of `a` and `b`, where `b` lives over the total space of `a`.
pub fn sigma_family(a: &Family, b: &Family) -> Family {
    let (afib, bfib) = (a.fiber.clone(), b.fiber.clone());
    let (aact, bact) = (a.act.clone(), b.act.clone());
    Family {
        name: format!("Sigma {} {}", a.name, b.name),
        base: a.base.clone(),
        fiber: Rc::new(move |n, x| {
            afib(n, x)
                .into_iter()
                .flat_map(|ea| {
                    let xa = El::pair(x.clone(), ea.clone());
                    bfib(n, &xa).into_iter().map(move |eb| El::pair(ea.clone(), eb))
                })
                .collect()
        }),
        act: Rc::new(move |f, x, ab| {
            let xa = El::pair(x.clone(), ab.fst().clone());
            El::pair(aact(f, x, ab.fst()), bact(f, &xa, ab.snd()))
        }),
    }
}

/// Composition for pairs: compose the first component, fill it to get a
/// path in the total space, then compose the second component over it.
pub fn comp_sigma(a: &Fib, b: &Fib) -> Fib {
    let family = sigma_family(&a.family, &b.family);
    let (a, b) = (a.clone(), b.clone());
    Fib {
        family,
        comp: Rc::new(move |prob| {
            let pa = Problem {
                f: prob.map_f(|_, v| v.fst().clone()),
                a0: prob.a0.fst().clone(),
                ..prob.clone()
            };
            let path = fill(&a, &pa);
            let pb = Problem {
                p: El::pair(prob.p.clone(), path),
                f: prob.map_f(|_, v| v.snd().clone()),
                a0: prob.a0.snd().clone(),
                ..prob.clone()
            };
            El::pair((a.comp)(&pa), (b.comp)(&pb))
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cof::Face;

    fn disc(points: &[&str]) -> Fib {
        comp_discrete(Family::constant(&CSet::point(), &CSet::discrete("D", points)))
    }

    #[test]
    fn sigma_of_discrete_with_empty_tube_keeps_the_start() {
        let a = disc(&["a", "a'"]);
        let b = comp_discrete(Family::constant(&a.family.total(), &CSet::discrete("E", &["b", "b'"])));
        let s = comp_sigma(&a, &b);
        let a0 = El::pair(El::atom("a'"), El::atom("b"));
        let prob = Problem { e: false, n: 1, p: El::Star, phi: Cof::bot(1), f: vec![], a0: a0.clone() };
        assert_eq!((s.comp)(&prob), a0);
    }

    #[test]
    fn sigma_with_full_tube_returns_the_tube_end() {
        let k = Fib {
            family: Family::constant(&CSet::point(), &CSet::codiscrete()),
            comp: Rc::new(|p| {
                // Any structure must return the tube at the far end when phi is top.
                match &p.f[..] {
                    [(face, v)] if *face == Face::TOP => match v {
                        El::Cod(b) => El::Cod(if p.e { b & 1 } else { b >> 1 }),
                        _ => unreachable!(),
                    },
                    _ => p.a0.clone(),
                }
            }),
        };
        let s = comp_sigma(&k, &Fib { family: Family::constant(&k.family.total(), &CSet::codiscrete()), comp: k.comp.clone() });
        let tube = El::pair(El::Cod(0b10), El::Cod(0b01));
        let prob = Problem { e: false, n: 0, p: El::Star, phi: Cof::top(0), f: vec![(Face::TOP, tube)], a0: El::pair(El::Cod(0), El::Cod(1)) };
        assert_eq!((s.comp)(&prob), El::pair(El::Cod(1), El::Cod(0)));
    }

    #[test]
    fn filling_a_discrete_family_is_constant() {
        let a = disc(&["a", "a'"]);
        let prob = Problem { e: true, n: 1, p: El::Star, phi: Cof::bot(1), f: vec![], a0: El::atom("a") };
        assert_eq!(fill(&a, &prob), El::atom("a"));
    }

    #[test]
    fn unit_comp_is_the_point() {
        let u = comp_unit(&CSet::point());
        for prob in problems(&u.family, 1) {
            assert_eq!((u.comp)(&prob), El::Star);
            assert_eq!(boundary_violation(&u, &prob), None);
        }
    }

    #[test]
    fn problem_counts_for_a_two_point_set() {
        // Stage 0: one base path, phi in {0, 1}; with phi = 1 the tube fixes a0.
        assert_eq!(problems(&disc(&["a", "a'"]).family, 0).len(), 2 * 2 + 2 * 2);
    }
}
