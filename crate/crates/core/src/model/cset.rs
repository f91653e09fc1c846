//! Cubical sets and families over them, given by enumerations of their
//! objects and a restriction action.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use super::cof::{Cof, Face};
use super::cube::CubeMap;
use super::dm::Dm;
use super::{ModelError, MAX_DIM};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum El {
    Atom(Rc<str>),
    Dm(Dm),
    Pair(Box<El>, Box<El>),
    Star,
    /// A vertex labelling of the cube: bit `w` is the value at vertex `w`.
    Cod(u32),
    /// A partial element, listed on the maximal faces of its domain.
    Part(Vec<(Face, El)>),
}

impl El {
    pub fn atom(name: &str) -> El {
        El::Atom(name.into())
    }

    pub fn pair(a: El, b: El) -> El {
        El::Pair(Box::new(a), Box::new(b))
    }

    pub fn fst(&self) -> &El {
        match self {
            El::Pair(a, _) => a,
            other => panic!("not a pair: {other}"),
        }
    }

    pub fn snd(&self) -> &El {
        match self {
            El::Pair(_, b) => b,
            other => panic!("not a pair: {other}"),
        }
    }

    pub fn dm(&self) -> Dm {
        match self {
            El::Dm(r) => *r,
            other => panic!("not an interval point: {other}"),
        }
    }
}

impl fmt::Display for El {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            El::Atom(s) => write!(f, "{s}"),
            El::Dm(r) => write!(f, "<{r}>"),
            El::Pair(a, b) => write!(f, "({a}, {b})"),
            El::Star => write!(f, "*"),
            El::Cod(bits) => write!(f, "#{bits:b}"),
            El::Part(vals) => {
                write!(f, "{{")?;
                for (k, (face, v)) in vals.iter().enumerate() {
                    if k > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{:?}/{:?} -> {v}", face.fixed, face.value)?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl fmt::Debug for El {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub type Objects = Rc<dyn Fn(usize) -> Vec<El>>;
pub type Action = Rc<dyn Fn(&CubeMap, &El) -> El>;
pub type FiberFn = Rc<dyn Fn(usize, &El) -> Vec<El>>;
pub type FiberAction = Rc<dyn Fn(&CubeMap, &El, &El) -> El>;
/// A cofibration varying over a cubical set: `(n, x) -> Cof over n`.
pub type CofFam = Rc<dyn Fn(usize, &El) -> Cof>;
/// A natural map between cubical sets, applied at a given dimension.
pub type SetMap = Rc<dyn Fn(usize, &El) -> El>;

#[derive(Clone)]
pub struct CSet {
    pub name: String,
    pub objects: Objects,
    pub act: Action,
}

#[derive(Clone)]
pub struct Family {
    pub name: String,
    pub base: CSet,
    pub fiber: FiberFn,
    /// `act(f, x, a)` restricts `a`, lying over `x`, along `f`.
    pub act: FiberAction,
}

impl CSet {
    pub fn point() -> CSet {
        CSet {
            name: "1".into(),
            objects: Rc::new(|_| vec![El::Star]),
            act: Rc::new(|_, x| x.clone()),
        }
    }

    pub fn discrete(name: &str, points: &[&str]) -> CSet {
        let pts: Vec<El> = points.iter().map(|p| El::atom(p)).collect();
        CSet {
            name: name.into(),
            objects: Rc::new(move |_| pts.clone()),
            act: Rc::new(|_, x| x.clone()),
        }
    }

    /// The representable interval: elements over `n` dimensions are terms.
    pub fn interval() -> CSet {
        CSet {
            name: "I".into(),
            objects: Rc::new(|n| Dm::all(n).into_iter().map(El::Dm).collect()),
            act: Rc::new(|f, x| El::Dm(x.dm().subst(&f.assign, f.to))),
        }
    }

    /// The codiscrete set on {0, 1}: any vertex labelling is a cube, so
    /// every two points are joined by exactly one path.
    pub fn codiscrete() -> CSet {
        CSet {
            name: "K".into(),
            objects: Rc::new(|n| (0..1u32 << (1 << n)).map(El::Cod).collect()),
            act: Rc::new(|f, x| El::Cod(cod_restrict(f, x))),
        }
    }

    /// `self × I`, with elements `(x, r)`.
    pub fn times_interval(&self) -> CSet {
        let (objs, act) = (self.objects.clone(), self.act.clone());
        CSet {
            name: format!("{} x I", self.name),
            objects: Rc::new(move |n| {
                let rs = Dm::all(n);
                objs(n)
                    .into_iter()
                    .flat_map(|x| rs.iter().map(move |r| El::pair(x.clone(), El::Dm(*r))))
                    .collect()
            }),
            act: Rc::new(move |f, x| El::pair(act(f, x.fst()), El::Dm(x.snd().dm().subst(&f.assign, f.to)))),
        }
    }

    /// The restriction `self | phi`: the elements on which `phi` holds.
    pub fn restrict_to(&self, phi: &CofFam, label: &str) -> CSet {
        let (objs, phi) = (self.objects.clone(), phi.clone());
        CSet {
            name: format!("{} | {label}", self.name),
            objects: Rc::new(move |n| objs(n).into_iter().filter(|x| phi(n, x).is_top()).collect()),
            act: self.act.clone(),
        }
    }

    pub fn restrict(&self, f: &CubeMap, x: &El) -> El {
        (self.act)(f, x)
    }
}

/// Vertex `w` of the target cube, sent to a vertex of the source.
pub fn vertex_image(f: &CubeMap, w: usize) -> usize {
    // A Boolean vertex is the DM4 valuation using only 0 and 1.
    let v = (0..f.to).fold(0usize, |acc, k| acc | (((w >> k) & 1) * 3) << (2 * k));
    f.assign
        .iter()
        .enumerate()
        .fold(0usize, |acc, (k, t)| acc | (((t.value(v) == 3) as usize) << k))
}

pub fn cod_restrict(f: &CubeMap, x: &El) -> u32 {
    let bits = match x {
        El::Cod(b) => *b,
        other => panic!("not a codiscrete cube: {other}"),
    };
    (0..1usize << f.to).fold(0u32, |acc, w| acc | (((bits >> vertex_image(f, w)) & 1) << w))
}

/// Restricts an element after checking that it is one.
pub fn restrict_element(x: &CSet, f: &CubeMap, el: &El) -> Result<El, ModelError> {
    if f.from > MAX_DIM || !(x.objects)(f.from).contains(el) {
        return Err(ModelError::NotInObject(el.to_string()));
    }
    Ok(x.restrict(f, el))
}

impl Family {
    /// The constant family with the given fiber.
    pub fn constant(base: &CSet, fiber: &CSet) -> Family {
        let (objs, act) = (fiber.objects.clone(), fiber.act.clone());
        Family {
            name: fiber.name.clone(),
            base: base.clone(),
            fiber: Rc::new(move |n, _| objs(n)),
            act: Rc::new(move |f, _, a| act(f, a)),
        }
    }

    pub fn unit(base: &CSet) -> Family {
        Family::constant(base, &CSet::point())
    }

    pub fn restrict(&self, f: &CubeMap, x: &El, a: &El) -> El {
        (self.act)(f, x, a)
    }

    /// Reindexing along a natural map `gamma` from `delta` into the base.
    pub fn reindex(&self, delta: &CSet, gamma: &SetMap, label: &str) -> Family {
        let (fib, act) = (self.fiber.clone(), self.act.clone());
        let (g1, g2) = (gamma.clone(), gamma.clone());
        Family {
            name: format!("{}[{label}]", self.name),
            base: delta.clone(),
            fiber: Rc::new(move |n, x| fib(n, &g1(n, x))),
            act: Rc::new(move |f, x, a| act(f, &g2(f.from, x), a)),
        }
    }

    /// The total space, with elements `(x, a)`.
    pub fn total(&self) -> CSet {
        let (bobj, bact) = (self.base.objects.clone(), self.base.act.clone());
        let (fib, act) = (self.fiber.clone(), self.act.clone());
        CSet {
            name: format!("{}.{}", self.base.name, self.name),
            objects: Rc::new(move |n| {
                bobj(n)
                    .into_iter()
                    .flat_map(|x| fib(n, &x).into_iter().map(move |a| El::pair(x.clone(), a)))
                    .collect()
            }),
            act: Rc::new(move |f, xa| El::pair(bact(f, xa.fst()), act(f, xa.fst(), xa.snd()))),
        }
    }

    /// Value of a partial element at the image of a map that lands inside
    /// its domain. The partial element lies over `x`, which has `n + extra`
    /// dimensions, and faces constrain only the first `n`.
    pub fn part_at(&self, x: &El, n: usize, extra: usize, vals: &[(Face, El)], g: &CubeMap) -> Option<El> {
        for (face, v) in vals {
            let hit = (0..n).all(|k| match face.get(k) {
                Some(b) => g.assign[k].as_const() == Some(b),
                None => true,
            });
            if hit {
                let inc = face.map(n, extra);
                let rest: Vec<Dm> = (0..n + extra)
                    .filter(|&k| k >= n || face.get(k).is_none())
                    .map(|k| g.assign[k])
                    .collect();
                let g2 = CubeMap::new(g.to, rest);
                let xv = self.base.restrict(&inc, x);
                return Some(self.restrict(&g2, &xv, v));
            }
        }
        None
    }

    /// Restricts a partial element over `x` along `g`, which maps the first
    /// `n` dimensions into the first `m` of its target.
    pub fn part_restrict(&self, x: &El, n: usize, extra: usize, vals: &[(Face, El)], g: &CubeMap, m: usize) -> Vec<(Face, El)> {
        let dom = Cof::generated(n, &vals.iter().map(|(f, _)| *f).collect::<Vec<_>>());
        let extra2 = g.to - m;
        dom.restrict(g, m)
            .maximal()
            .into_iter()
            .map(|tau| {
                let h = g.then(&tau.map(m, extra2));
                let v = self.part_at(x, n, extra, vals, &h).expect("face lies in the domain");
                (tau, v)
            })
            .collect()
    }
}

/// Domain of a partial element over `n` dimensions.
pub fn part_domain(n: usize, vals: &[(Face, El)]) -> Cof {
    Cof::generated(n, &vals.iter().map(|(f, _)| *f).collect::<Vec<_>>())
}

/// Maps used by the exhaustive checks between two contexts. Every map is
/// used except between two-dimensional contexts, where the probe set of
/// faces, degeneracies, symmetries, reversals, connections and diagonals
/// stands in for the 28224 maps.
pub fn check_maps(from: usize, to: usize) -> Vec<CubeMap> {
    if from < 2 || to < 2 {
        return CubeMap::all(from, to);
    }
    let terms: Vec<Dm> = Dm::all(to)
        .into_iter()
        .filter(|t| {
            let s = t.to_string();
            s.chars().filter(|c| c.is_alphabetic()).count() <= 2
        })
        .collect();
    let mut out = vec![Vec::new()];
    for _ in 0..from {
        out = out
            .into_iter()
            .flat_map(|p: Vec<Dm>| {
                terms.iter().map(move |t| {
                    let mut v = p.clone();
                    v.push(*t);
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|a| CubeMap::new(to, a)).collect()
}

thread_local! {
    static MAPS: std::cell::RefCell<HashMap<(usize, usize), Rc<Vec<CubeMap>>>> = Default::default();
}

pub fn maps(from: usize, to: usize) -> Rc<Vec<CubeMap>> {
    MAPS.with(|m| m.borrow_mut().entry((from, to)).or_insert_with(|| Rc::new(check_maps(from, to))).clone())
}

/// Composites `maps(n, m)[a]` then `maps(m, k)[b]`, deduplicated: `index[a][b]`
/// points into `distinct`.
pub struct Composites {
    pub distinct: Vec<CubeMap>,
    pub index: Vec<Vec<u32>>,
}

thread_local! {
    static COMPOSITES: std::cell::RefCell<HashMap<(usize, usize, usize), Rc<Composites>>> = Default::default();
}

pub fn composites(n: usize, m: usize, k: usize) -> Rc<Composites> {
    COMPOSITES.with(|c| {
        c.borrow_mut()
            .entry((n, m, k))
            .or_insert_with(|| {
                let second = maps(m, k);
                let mut seen: HashMap<CubeMap, u32> = HashMap::new();
                let mut distinct = Vec::new();
                let index = maps(n, m)
                    .iter()
                    .map(|f| {
                        second
                            .iter()
                            .map(|g| {
                                let h = f.then(g);
                                *seen.entry(h.clone()).or_insert_with(|| {
                                    distinct.push(h);
                                    distinct.len() as u32 - 1
                                })
                            })
                            .collect()
                    })
                    .collect();
                Rc::new(Composites { distinct, index })
            })
            .clone()
    })
}

/// Checks `(x f) g = x (f g)` for every `f` from `n` to `m` and `g` from `m`
/// to `k`, given `x f` for each `f`. `along(h, z)` restricts `z` along `h`;
/// rows are cached by their starting point in `rows`.
fn composition_failures(
    n: usize,
    m: usize,
    k: usize,
    images: &[El],
    along: &dyn Fn(&CubeMap, Option<&El>) -> El,
    rows: &mut HashMap<(usize, usize, El), Rc<Vec<El>>>,
) -> Vec<(usize, usize)> {
    let (second, both) = (maps(m, k), composites(n, m, k));
    let direct: Vec<El> = both.distinct.iter().map(|h| along(h, None)).collect();
    let mut out = Vec::new();
    for (a, y) in images.iter().enumerate() {
        let row = rows
            .entry((m, k, y.clone()))
            .or_insert_with(|| Rc::new(second.iter().map(|g| along(g, Some(y))).collect()))
            .clone();
        for (b, z) in row.iter().enumerate() {
            if *z != direct[both.index[a][b] as usize] {
                out.push((a, b));
            }
        }
    }
    out
}

/// Identity and composition laws of a cubical set up to `max_dim`.
pub fn validate_cset(x: &CSet, max_dim: usize) -> Vec<String> {
    let mut out = Vec::new();
    let objs: Vec<HashSet<El>> = (0..=max_dim).map(|n| (x.objects)(n).into_iter().collect()).collect();
    let mut rows = HashMap::new();
    for n in 0..=max_dim {
        for el in &objs[n] {
            if x.restrict(&CubeMap::identity(n), el) != *el {
                out.push(format!("{}: identity moves {el}", x.name));
            }
        }
        for m in 0..=max_dim {
            let first = maps(n, m);
            for el in &objs[n] {
                let ys: Vec<El> = first.iter().map(|f| x.restrict(f, el)).collect();
                for (f, y) in first.iter().zip(&ys) {
                    if !objs[m].contains(y) {
                        out.push(format!("{}: {el}{f} = {y} is not an object", x.name));
                    }
                }
                for k in 0..=max_dim {
                    let along = |h: &CubeMap, z: Option<&El>| x.restrict(h, z.unwrap_or(el));
                    for (a, b) in composition_failures(n, m, k, &ys, &along, &mut rows) {
                        out.push(format!("{}: composition fails for {el} along {} then {}", x.name, first[a], maps(m, k)[b]));
                    }
                }
            }
        }
    }
    out
}

/// Identity, membership and composition laws of a family up to `max_dim`.
/// The base is assumed valid; check it with [`validate_cset`].
pub fn validate_family(a: &Family, max_dim: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut fibers: HashMap<(usize, El), HashSet<El>> = HashMap::new();
    let mut rows = HashMap::new();
    for n in 0..=max_dim {
        for x in (a.base.objects)(n) {
            let here: Vec<El> = (a.fiber)(n, &x);
            for el in &here {
                if a.restrict(&CubeMap::identity(n), &x, el) != *el {
                    out.push(format!("{}: identity moves {el} over {x}", a.name));
                }
            }
            for m in 0..=max_dim {
                let first = maps(n, m);
                let xs: Vec<El> = first.iter().map(|f| a.base.restrict(f, &x)).collect();
                for el in &here {
                    let ys: Vec<El> = first.iter().map(|f| a.restrict(f, &x, el)).collect();
                    for ((f, xf), y) in first.iter().zip(&xs).zip(&ys) {
                        let fiber = fibers.entry((m, xf.clone())).or_insert_with(|| (a.fiber)(m, xf).into_iter().collect());
                        if !fiber.contains(y) {
                            out.push(format!("{}: {el}{f} = {y} is not over {xf}", a.name));
                        }
                    }
                    // Rows are keyed by the pair (base point, element).
                    let pairs: Vec<El> = xs.iter().zip(&ys).map(|(xf, y)| El::pair(xf.clone(), y.clone())).collect();
                    for k in 0..=max_dim {
                        let along = |h: &CubeMap, z: Option<&El>| match z {
                            Some(p) => a.restrict(h, p.fst(), p.snd()),
                            None => a.restrict(h, &x, el),
                        };
                        for (i, j) in composition_failures(n, m, k, &pairs, &along, &mut rows) {
                            out.push(format!("{}: composition fails for {el} along {} then {}", a.name, first[i], maps(m, k)[j]));
                        }
                    }
                }
            }
        }
    }
    out
}

/// A cofibration family is closed under restriction.
pub fn validate_cof(base: &CSet, phi: &CofFam, max_dim: usize) -> Vec<String> {
    let mut out = Vec::new();
    for n in 0..=max_dim {
        for x in (base.objects)(n) {
            let c = phi(n, &x);
            for m in 0..=max_dim {
                for f in maps(n, m).iter() {
                    if phi(m, &base.restrict(f, &x)) != c.restrict(f, m) {
                        out.push(format!("{}: cofibration not stable at {x} along {f}", base.name));
                    }
                }
            }
        }
    }
    out
}
