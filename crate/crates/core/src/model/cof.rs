//! Cofibrations in the face lattice.
//!
//! A face fixes some dimensions to endpoints. A cofibration over `n`
//! dimensions is stored as the set of faces on which it holds; that set is
//! closed under refinement, joins are unions and meets are intersections.

use std::cell::RefCell;
use std::fmt;

use rustc_hash::FxHashMap;

use super::cube::CubeMap;
use super::dm::{Dm, DIM_NAMES, MAX_GENERATORS};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Face {
    /// Bit `k` set when dimension `k` is fixed.
    pub fixed: u8,
    /// Endpoint of each fixed dimension.
    pub value: u8,
}

impl Face {
    pub const TOP: Face = Face { fixed: 0, value: 0 };

    pub fn single(k: usize, b: bool) -> Face {
        Face { fixed: 1 << k, value: (b as u8) << k }
    }

    pub fn get(&self, k: usize) -> Option<bool> {
        (self.fixed & (1 << k) != 0).then(|| self.value & (1 << k) != 0)
    }

    pub fn all(n: usize) -> Vec<Face> {
        let mut out = Vec::new();
        for fixed in 0u8..(1 << n) {
            let mut value = fixed;
            loop {
                out.push(Face { fixed, value });
                if value == 0 {
                    break;
                }
                value = (value - 1) & fixed;
            }
        }
        out.sort_by_key(|f| (f.fixed.count_ones(), f.fixed, f.value));
        out
    }

    /// Index among the 3^n faces over `n` dimensions.
    fn code(&self, n: usize) -> u32 {
        (0..n).rev().fold(0, |acc, k| {
            acc * 3
                + match self.get(k) {
                    None => 0,
                    Some(false) => 1,
                    Some(true) => 2,
                }
        })
    }

    /// True when every dimension fixed by `other` is fixed the same way here.
    pub fn refines(&self, other: &Face) -> bool {
        self.fixed & other.fixed == other.fixed && (self.value ^ other.value) & other.fixed == 0
    }

    pub fn meet(&self, other: &Face) -> Option<Face> {
        let both = self.fixed & other.fixed;
        ((self.value ^ other.value) & both == 0).then(|| Face {
            fixed: self.fixed | other.fixed,
            value: self.value | other.value,
        })
    }

    pub fn free(&self, n: usize) -> usize {
        n - self.fixed.count_ones() as usize
    }

    /// The inclusion of the face, keeping `extra` trailing dimensions free.
    pub fn map(&self, n: usize, extra: usize) -> CubeMap {
        let to = self.free(n) + extra;
        let mut next = 0;
        let mut assign = Vec::with_capacity(n + extra);
        for k in 0..n {
            assign.push(match self.get(k) {
                Some(b) => Dm::constant(to, b),
                None => {
                    next += 1;
                    Dm::var(to, next - 1)
                }
            });
        }
        assign.extend((0..extra).map(|k| Dm::var(to, next + k)));
        CubeMap::new(to, assign)
    }

    /// Re-expresses a face over `n` dimensions as one over `n + 1` with a
    /// new dimension inserted at position `at`.
    pub fn insert_dim(&self, at: usize) -> Face {
        let low = (1u8 << at) - 1;
        let spread = |x: u8| (x & low) | ((x & !low) << 1);
        Face { fixed: spread(self.fixed), value: spread(self.value) }
    }

    pub fn render(&self, n: usize) -> String {
        if self.fixed == 0 {
            return "1".into();
        }
        (0..n)
            .filter_map(|k| self.get(k).map(|b| format!("({}={})", DIM_NAMES[k], b as u8)))
            .collect::<Vec<_>>()
            .join("&")
    }
}

thread_local! {
    static TERM_EQ: RefCell<FxHashMap<u64, Cof>> = Default::default();
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Cof {
    dims: u8,
    set: u128,
}

impl Cof {
    pub fn bot(n: usize) -> Cof {
        assert!(n <= MAX_GENERATORS);
        Cof { dims: n as u8, set: 0 }
    }

    pub fn top(n: usize) -> Cof {
        Cof::generated(n, &[Face::TOP])
    }

    pub fn dims(&self) -> usize {
        self.dims as usize
    }

    /// The least cofibration holding on the given faces.
    pub fn generated(n: usize, faces: &[Face]) -> Cof {
        let mut set = 0;
        for f in Face::all(n) {
            if faces.iter().any(|g| f.refines(g)) {
                set |= 1u128 << f.code(n);
            }
        }
        Cof { dims: n as u8, set }
    }

    /// `(k = b)`.
    pub fn dim_eq(n: usize, k: usize, b: bool) -> Cof {
        Cof::generated(n, &[Face::single(k, b)])
    }

    /// `(t = b)` for a term over `n + extra` dimensions, read over the first `n`.
    pub fn term_eq(t: &Dm, n: usize, b: bool) -> Cof {
        let Some(word) = t.small_table() else {
            return Cof::term_eq_uncached(t, n, b);
        };
        let key = word | (t.dims() as u64) << 32 | (n as u64) << 40 | (b as u64) << 48;
        TERM_EQ.with(|memo| {
            if let Some(c) = memo.borrow().get(&key) {
                return *c;
            }
            let c = Cof::term_eq_uncached(t, n, b);
            memo.borrow_mut().insert(key, c);
            c
        })
    }

    fn term_eq_uncached(t: &Dm, n: usize, b: bool) -> Cof {
        let total = t.dims();
        let want = if b { 3 } else { 0 };
        let mut set = 0;
        for f in Face::all(n) {
            // Valuations agreeing with the face: fixed dimensions take 0 or 1,
            // every other dimension ranges over DM4.
            let holds = (0..1usize << (2 * total)).all(|v| {
                let fits = (0..n).all(|k| match f.get(k) {
                    Some(e) => (v >> (2 * k)) & 3 == if e { 3 } else { 0 },
                    None => true,
                });
                !fits || t.value(v) == want
            });
            if holds {
                set |= 1u128 << f.code(n);
            }
        }
        Cof { dims: n as u8, set }
    }

    pub fn holds(&self, face: &Face) -> bool {
        self.set & (1u128 << face.code(self.dims())) != 0
    }

    pub fn is_top(&self) -> bool {
        self.holds(&Face::TOP)
    }

    pub fn is_bot(&self) -> bool {
        self.set == 0
    }

    pub fn or(&self, other: &Cof) -> Cof {
        assert_eq!(self.dims, other.dims);
        Cof { dims: self.dims, set: self.set | other.set }
    }

    pub fn and(&self, other: &Cof) -> Cof {
        assert_eq!(self.dims, other.dims);
        Cof { dims: self.dims, set: self.set & other.set }
    }

    pub fn faces(&self) -> Vec<Face> {
        Face::all(self.dims()).into_iter().filter(|f| self.holds(f)).collect()
    }

    /// Faces of the cofibration not refining any other of its faces.
    pub fn maximal(&self) -> Vec<Face> {
        let faces = self.faces();
        faces
            .iter()
            .filter(|f| !faces.iter().any(|g| g != *f && f.refines(g)))
            .copied()
            .collect()
    }

    /// Pulls the cofibration back along a map whose first `self.dims()`
    /// components are terms over `base + extra` dimensions.
    pub fn restrict(&self, f: &CubeMap, base: usize) -> Cof {
        let mut out = Cof::bot(base);
        for face in self.maximal() {
            let mut c = Cof::top(base);
            for k in 0..self.dims() {
                if let Some(b) = face.get(k) {
                    c = c.and(&Cof::term_eq(&f.assign[k], base, b));
                }
            }
            out = out.or(&c);
        }
        out
    }

    /// Adds an unconstrained dimension at position `at`.
    pub fn insert_dim(&self, at: usize) -> Cof {
        let faces: Vec<Face> = self.maximal().iter().map(|f| f.insert_dim(at)).collect();
        Cof::generated(self.dims() + 1, &faces)
    }

    /// Universal quantification over the last dimension.
    pub fn forall_last(&self) -> Cof {
        let n = self.dims() - 1;
        let faces: Vec<Face> = Face::all(n).into_iter().filter(|f| self.holds(f)).collect();
        Cof::generated(n, &faces)
    }
}

impl fmt::Display for Cof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_bot() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.maximal().iter().map(|x| x.render(self.dims())).collect();
        write!(f, "{}", parts.join(" | "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn face_counts() {
        assert_eq!(Face::all(2).len(), 9);
        assert_eq!(Cof::top(2).faces().len(), 9);
    }

    #[test]
    fn boundary_is_not_top() {
        let b = Cof::dim_eq(1, 0, false).or(&Cof::dim_eq(1, 0, true));
        assert!(!b.is_top());
        assert_eq!(b.maximal().len(), 2);
        let i = Dm::var(1, 0);
        assert_eq!(Cof::term_eq(&i.join(&i.neg()), 1, true), b);
    }

    #[test]
    fn forall_of_endpoints_is_bottom() {
        let b = Cof::dim_eq(2, 1, false).or(&Cof::dim_eq(2, 1, true));
        assert!(b.forall_last().is_bot());
        let c = Cof::dim_eq(2, 0, true).or(&Cof::dim_eq(2, 1, false));
        assert_eq!(c.forall_last(), Cof::dim_eq(1, 0, true));
    }

    #[test]
    fn restriction_along_connection() {
        let c = Cof::dim_eq(1, 0, false);
        let meet = CubeMap::new(2, vec![Dm::var(2, 0).meet(&Dm::var(2, 1))]);
        let r = c.restrict(&meet, 2);
        assert_eq!(r, Cof::dim_eq(2, 0, false).or(&Cof::dim_eq(2, 1, false)));
    }

    fn all_cofs(n: usize) -> Vec<Cof> {
        let faces = Face::all(n);
        let mut out: Vec<Cof> = (0..(1u32 << faces.len()))
            .map(|s| {
                let gens: Vec<Face> = (0..faces.len()).filter(|i| s & (1 << i) != 0).map(|i| faces[i]).collect();
                Cof::generated(n, &gens)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn cofibration_counts() {
        assert_eq!(all_cofs(0).len(), 2);
        assert_eq!(all_cofs(1).len(), 5);
    }

    #[test]
    fn restriction_is_functorial() {
        for c in all_cofs(1) {
            for f in CubeMap::all(1, 2) {
                for g in CubeMap::all(2, 1) {
                    assert_eq!(c.restrict(&f, 2).restrict(&g, 1), c.restrict(&f.then(&g), 1));
                }
            }
        }
    }
}
