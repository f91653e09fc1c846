//! Free De Morgan algebra on a few generators.
//!
//! An element is stored as its truth table over every valuation of the
//! generators into DM4 = {0, a, b, 1}. Two elements are equal exactly when
//! the tables agree, since every De Morgan algebra embeds in a power of DM4.
//! DM4 values are two-bit codes: 0 = 00, a = 01, b = 10, 1 = 11, so meet and
//! join are bitwise and/or.

use std::collections::BTreeSet;
use std::fmt;

use super::ModelError;

/// Most generators a table can hold: 4^4 valuations of two bits each.
pub const MAX_GENERATORS: usize = 4;

pub const DIM_NAMES: [char; MAX_GENERATORS] = ['i', 'j', 'k', 'l'];

const WORDS: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dm {
    dims: u8,
    bits: [u64; WORDS],
}

fn neg4(v: u8) -> u8 {
    let c = !v & 3;
    ((c & 1) << 1) | (c >> 1)
}

fn valuations(dims: usize) -> usize {
    1 << (2 * dims)
}

fn mask(dims: usize) -> [u64; WORDS] {
    let n = 2 * valuations(dims);
    let mut m = [0u64; WORDS];
    for (w, word) in m.iter_mut().enumerate() {
        let lo = 64 * w;
        if n >= lo + 64 {
            *word = u64::MAX;
        } else if n > lo {
            *word = (1u64 << (n - lo)) - 1;
        }
    }
    m
}

impl Dm {
    fn from_fn(dims: usize, f: impl Fn(usize) -> u8) -> Dm {
        assert!(dims <= MAX_GENERATORS, "too many dimensions: {dims}");
        let mut bits = [0u64; WORDS];
        for v in 0..valuations(dims) {
            bits[v / 32] |= (f(v) as u64 & 3) << (2 * (v % 32));
        }
        Dm { dims: dims as u8, bits }
    }

    pub fn zero(dims: usize) -> Dm {
        Dm::from_fn(dims, |_| 0)
    }

    pub fn one(dims: usize) -> Dm {
        Dm { dims: dims as u8, bits: mask(dims) }
    }

    pub fn constant(dims: usize, value: bool) -> Dm {
        if value {
            Dm::one(dims)
        } else {
            Dm::zero(dims)
        }
    }

    pub fn var(dims: usize, k: usize) -> Dm {
        assert!(k < dims);
        Dm::from_fn(dims, |v| ((v >> (2 * k)) & 3) as u8)
    }

    pub fn dims(&self) -> usize {
        self.dims as usize
    }

    /// The whole table as one word, for at most two generators.
    pub fn small_table(&self) -> Option<u64> {
        (self.dims <= 2).then_some(self.bits[0])
    }

    /// Value under the valuation with index `v` (generator `k` gets bits `2k..2k+2`).
    pub fn value(&self, v: usize) -> u8 {
        ((self.bits[v / 32] >> (2 * (v % 32))) & 3) as u8
    }

    pub fn meet(&self, other: &Dm) -> Dm {
        assert_eq!(self.dims, other.dims);
        Dm { dims: self.dims, bits: std::array::from_fn(|w| self.bits[w] & other.bits[w]) }
    }

    pub fn join(&self, other: &Dm) -> Dm {
        assert_eq!(self.dims, other.dims);
        Dm { dims: self.dims, bits: std::array::from_fn(|w| self.bits[w] | other.bits[w]) }
    }

    pub fn neg(&self) -> Dm {
        Dm::from_fn(self.dims(), |v| neg4(self.value(v)))
    }

    pub fn leq(&self, other: &Dm) -> bool {
        self.meet(other) == *self
    }

    /// `Some(b)` when the element is the endpoint `b`.
    pub fn as_const(&self) -> Option<bool> {
        if self.bits == [0; WORDS] {
            Some(false)
        } else if self.bits == mask(self.dims()) {
            Some(true)
        } else {
            None
        }
    }

    /// Substitutes `args[k]` for generator `k`; all arguments share one context.
    pub fn subst(&self, args: &[Dm], target_dims: usize) -> Dm {
        assert_eq!(args.len(), self.dims());
        debug_assert!(args.iter().all(|a| a.dims() == target_dims));
        Dm::from_fn(target_dims, |w| {
            let v = args
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, a)| acc | ((a.value(w) as usize) << (2 * k)));
            self.value(v)
        })
    }

    /// Every element over `dims` generators, in a fixed order.
    pub fn all(dims: usize) -> Vec<Dm> {
        assert!(dims <= 2, "enumerating dm({dims}) is out of reach");
        let mut seen: BTreeSet<Dm> = BTreeSet::new();
        let mut frontier = vec![Dm::zero(dims), Dm::one(dims)];
        frontier.extend((0..dims).map(|k| Dm::var(dims, k)));
        while let Some(x) = frontier.pop() {
            if !seen.insert(x) {
                continue;
            }
            frontier.push(x.neg());
            let known: Vec<Dm> = seen.iter().copied().collect();
            for y in known {
                frontier.push(x.meet(&y));
                frontier.push(x.join(&y));
            }
        }
        seen.into_iter().collect()
    }

    /// Meets of literals that lie below `self`, keeping only the maximal ones.
    fn clauses(&self) -> Vec<(u16, Dm)> {
        let n = self.dims();
        let mut below: Vec<(u16, Dm)> = Vec::new();
        for set in 0u16..(1 << (2 * n)) {
            let mut m = Dm::one(n);
            for k in 0..n {
                if set & (1 << (2 * k)) != 0 {
                    m = m.meet(&Dm::var(n, k));
                }
                if set & (1 << (2 * k + 1)) != 0 {
                    m = m.meet(&Dm::var(n, k).neg());
                }
            }
            if m.leq(self) {
                below.push((set, m));
            }
        }
        below.sort_by_key(|(set, m)| (*m, set.count_ones(), *set));
        below.dedup_by_key(|(_, m)| *m);
        below
            .iter()
            .filter(|(_, m)| !below.iter().any(|(_, m2)| m != m2 && m.leq(m2)))
            .copied()
            .collect()
    }
}

/// Decides equality in the free algebra; both sides must share a context.
pub fn dm_eq(x: &Dm, y: &Dm) -> Result<bool, ModelError> {
    if x.dims != y.dims {
        return Err(ModelError::ContextMismatch(x.dims(), y.dims()));
    }
    Ok(x.bits == y.bits)
}

impl fmt::Display for Dm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(b) = self.as_const() {
            return write!(f, "{}", b as u8);
        }
        let clauses = self.clauses();
        let parts: Vec<String> = clauses
            .iter()
            .map(|(set, _)| {
                let mut lits = Vec::new();
                for k in 0..self.dims() {
                    if set & (1 << (2 * k)) != 0 {
                        lits.push(DIM_NAMES[k].to_string());
                    }
                    if set & (1 << (2 * k + 1)) != 0 {
                        lits.push(format!("~{}", DIM_NAMES[k]));
                    }
                }
                lits.join("&")
            })
            .collect();
        write!(f, "{}", parts.join("|"))
    }
}

impl fmt::Debug for Dm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `0`, `1`, dimension names, `~x`, `x & y`, `x | y` and parentheses.
pub fn parse_dm(src: &str, dims: usize) -> Result<Dm, String> {
    let toks: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let t = parse_join(&toks, &mut pos, dims)?;
    if pos != toks.len() {
        return Err(format!("trailing input in `{src}`"));
    }
    Ok(t)
}

fn parse_join(t: &[char], pos: &mut usize, dims: usize) -> Result<Dm, String> {
    let mut x = parse_meet(t, pos, dims)?;
    while t.get(*pos) == Some(&'|') {
        *pos += 1;
        x = x.join(&parse_meet(t, pos, dims)?);
    }
    Ok(x)
}

fn parse_meet(t: &[char], pos: &mut usize, dims: usize) -> Result<Dm, String> {
    let mut x = parse_unary(t, pos, dims)?;
    while t.get(*pos) == Some(&'&') {
        *pos += 1;
        x = x.meet(&parse_unary(t, pos, dims)?);
    }
    Ok(x)
}

fn parse_unary(t: &[char], pos: &mut usize, dims: usize) -> Result<Dm, String> {
    let c = *t.get(*pos).ok_or("unexpected end of term")?;
    *pos += 1;
    match c {
        '~' => Ok(parse_unary(t, pos, dims)?.neg()),
        '0' => Ok(Dm::zero(dims)),
        '1' => Ok(Dm::one(dims)),
        '(' => {
            let x = parse_join(t, pos, dims)?;
            if t.get(*pos) != Some(&')') {
                return Err("missing `)`".into());
            }
            *pos += 1;
            Ok(x)
        }
        _ => match DIM_NAMES.iter().position(|&d| d == c) {
            Some(k) if k < dims => Ok(Dm::var(dims, k)),
            _ => Err(format!("unknown dimension `{c}`")),
        },
    }
}
