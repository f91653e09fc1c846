//! Maps of the cube category, acting contravariantly on elements.
//!
//! A map with `from = n` and `to = m` substitutes a De Morgan term over `m`
//! dimensions for each of the `n` dimensions of an element, so it turns an
//! element living over `n` dimensions into one over `m`.

use std::fmt;

use super::dm::{Dm, DIM_NAMES};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CubeMap {
    pub from: usize,
    pub to: usize,
    pub assign: Vec<Dm>,
}

impl CubeMap {
    pub fn new(to: usize, assign: Vec<Dm>) -> CubeMap {
        assert!(assign.iter().all(|t| t.dims() == to));
        CubeMap { from: assign.len(), to, assign }
    }

    pub fn identity(n: usize) -> CubeMap {
        CubeMap::new(n, (0..n).map(|k| Dm::var(n, k)).collect())
    }

    /// Restricting along `self` then `next` equals restricting along the result.
    pub fn then(&self, next: &CubeMap) -> CubeMap {
        assert_eq!(self.to, next.from, "maps do not compose");
        CubeMap::new(next.to, self.assign.iter().map(|t| t.subst(&next.assign, next.to)).collect())
    }

    /// Weakening: the element gains `extra` unused trailing dimensions.
    pub fn weaken(n: usize, extra: usize) -> CubeMap {
        CubeMap::new(n + extra, (0..n).map(|k| Dm::var(n + extra, k)).collect())
    }

    /// Sets the last of `n + 1` dimensions to an endpoint.
    pub fn end(n: usize, e: bool) -> CubeMap {
        let mut assign: Vec<Dm> = (0..n).map(|k| Dm::var(n, k)).collect();
        assign.push(Dm::constant(n, e));
        CubeMap::new(n, assign)
    }

    /// Applies `self` to the leading dimensions and keeps `extra` trailing ones.
    pub fn extend(&self, extra: usize) -> CubeMap {
        let to = self.to + extra;
        let lift = CubeMap::weaken(self.to, extra);
        let mut assign: Vec<Dm> = self.assign.iter().map(|t| t.subst(&lift.assign, to)).collect();
        assign.extend((0..extra).map(|k| Dm::var(to, self.to + k)));
        CubeMap::new(to, assign)
    }

    pub fn is_identity(&self) -> bool {
        self.from == self.to && *self == CubeMap::identity(self.from)
    }

    /// Every map between the two contexts; only small contexts are enumerable.
    pub fn all(from: usize, to: usize) -> Vec<CubeMap> {
        let terms = Dm::all(to);
        let mut out = vec![Vec::new()];
        for _ in 0..from {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Dm>| {
                    terms.iter().map(move |t| {
                        let mut v = prefix.clone();
                        v.push(*t);
                        v
                    })
                })
                .collect();
        }
        out.into_iter().map(|a| CubeMap::new(to, a)).collect()
    }
}

impl fmt::Display for CubeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .assign
            .iter()
            .enumerate()
            .map(|(k, t)| format!("{}:={}", DIM_NAMES[k], t))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Debug for CubeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
