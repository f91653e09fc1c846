//! Fixture library and the plain-text table format for cubical sets.
//!
//! ```text
//! # comment
//! set two
//! dim 0: a b
//! dim 1: a b
//! act 1 0 a * a          # every map from 1 to 0 dimensions
//! act 1 1 b [~i] b       # one map, terms over the target dimensions
//! act same               # any row not given keeps the object's name
//! ```

use std::collections::HashMap;
use std::rc::Rc;

use super::cset::{CSet, El, Family, SetMap};
use super::cube::CubeMap;
use super::dm::{parse_dm, Dm};
use super::ModelError;

#[derive(Default)]
struct Table {
    objects: Vec<Vec<El>>,
    rows: HashMap<(usize, El, CubeMap), El>,
    wild: HashMap<(usize, usize, El), El>,
    same: bool,
}

impl Table {
    fn lookup(&self, f: &CubeMap, x: &El) -> Option<El> {
        if let Some(y) = self.rows.get(&(f.from, x.clone(), f.clone())) {
            return Some(y.clone());
        }
        if let Some(y) = self.wild.get(&(f.from, f.to, x.clone())) {
            return Some(y.clone());
        }
        self.same.then(|| x.clone())
    }
}

fn err(line: usize, msg: impl std::fmt::Display) -> ModelError {
    ModelError::Fixture(format!("line {line}: {msg}"))
}

fn parse_map(src: &str, to: usize, from: usize, line: usize) -> Result<CubeMap, ModelError> {
    let inner = src
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| err(line, format!("expected a map in brackets, got {src}")))?;
    let terms: Vec<Dm> = if inner.trim().is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|t| parse_dm(t.trim(), to).map_err(|e| err(line, e)))
            .collect::<Result<_, _>>()?
    };
    if terms.len() != from {
        return Err(err(line, format!("map has {} components, expected {from}", terms.len())));
    }
    Ok(CubeMap::new(to, terms))
}

/// Parses one or more `set` blocks. Every listed object must have an
/// image along every map between listed dimensions.
pub fn parse_fixtures(src: &str) -> Result<Vec<CSet>, ModelError> {
    let mut out = Vec::new();
    let mut current: Option<(String, Table)> = None;
    for (k, raw) in src.lines().enumerate() {
        let line = k + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let words: Vec<&str> = text.split_whitespace().collect();
        if words[0] == "set" {
            if let Some((name, table)) = current.take() {
                out.push(finish(name, table)?);
            }
            let name = words.get(1).ok_or_else(|| err(line, "set needs a name"))?;
            current = Some((name.to_string(), Table::default()));
            continue;
        }
        let (_, table) = current.as_mut().ok_or_else(|| err(line, "expected `set NAME` first"))?;
        match words[0] {
            "dim" => {
                let (head, names) = text[3..].split_once(':').ok_or_else(|| err(line, "expected `dim N: names`"))?;
                let n: usize = head.trim().parse().map_err(|_| err(line, "bad dimension"))?;
                if n != table.objects.len() {
                    return Err(err(line, format!("expected dim {}", table.objects.len())));
                }
                if n > super::dm::MAX_GENERATORS {
                    return Err(err(line, "too many dimensions"));
                }
                table.objects.push(names.split_whitespace().map(El::atom).collect());
            }
            "act" if words.len() == 2 && words[1] == "same" => table.same = true,
            "act" => {
                // act N M X MAP Y, where MAP may contain spaces inside brackets.
                let rest = text[3..].trim();
                let mut it = rest.splitn(4, char::is_whitespace);
                let n: usize = it.next().and_then(|s| s.parse().ok()).ok_or_else(|| err(line, "bad source dimension"))?;
                let m: usize = it.next().and_then(|s| s.trim().parse().ok()).ok_or_else(|| err(line, "bad target dimension"))?;
                let x = El::atom(it.next().ok_or_else(|| err(line, "missing object"))?.trim());
                let tail = it.next().ok_or_else(|| err(line, "missing map"))?.trim();
                let (map, y) = tail.rsplit_once(char::is_whitespace).ok_or_else(|| err(line, "missing image"))?;
                let y = El::atom(y);
                for (d, el) in [(n, &x), (m, &y)] {
                    if !table.objects.get(d).is_some_and(|os| os.contains(el)) {
                        return Err(err(line, format!("{el} is not an object over {d} dimensions")));
                    }
                }
                if map.trim() == "*" {
                    table.wild.insert((n, m, x), y);
                } else {
                    let f = parse_map(map.trim(), m, n, line)?;
                    table.rows.insert((n, x, f), y);
                }
            }
            other => return Err(err(line, format!("unknown directive {other}"))),
        }
    }
    if let Some((name, table)) = current.take() {
        out.push(finish(name, table)?);
    }
    Ok(out)
}

fn finish(name: String, table: Table) -> Result<CSet, ModelError> {
    let top = table.objects.len();
    if top == 0 {
        return Err(ModelError::Fixture(format!("{name}: no objects")));
    }
    for n in 0..top {
        for m in 0..top {
            let maps = CubeMap::all(n, m);
            for x in &table.objects[n] {
                if let Some(f) = maps.iter().find(|f| table.lookup(f, x).is_none()) {
                    return Err(ModelError::Fixture(format!("{name}: no image of {x} along {f}")));
                }
            }
        }
    }
    let table = Rc::new(table);
    let t2 = table.clone();
    Ok(CSet {
        name,
        objects: Rc::new(move |n| table.objects.get(n).cloned().unwrap_or_default()),
        act: Rc::new(move |f, x| t2.lookup(f, x).unwrap_or_else(|| panic!("no image of {x} along {f}"))),
    })
}

/// Writes a set of atoms in the table format, using wildcards where an
/// object goes to one place along every map.
pub fn serialize(x: &CSet, max_dim: usize) -> String {
    let mut out = format!("set {}\n", x.name);
    for n in 0..=max_dim {
        let names: Vec<String> = (x.objects)(n).iter().map(|e| e.to_string()).collect();
        out.push_str(&format!("dim {n}: {}\n", names.join(" ")));
    }
    let mut rows = String::new();
    for n in 0..=max_dim {
        for m in 0..=max_dim {
            let maps = CubeMap::all(n, m);
            for el in (x.objects)(n) {
                let images: Vec<El> = maps.iter().map(|f| x.restrict(f, &el)).collect();
                if images.iter().all(|y| *y == el) {
                    continue;
                }
                if images.iter().all(|y| *y == images[0]) {
                    rows.push_str(&format!("act {n} {m} {el} * {}\n", images[0]));
                    continue;
                }
                for (f, y) in maps.iter().zip(&images) {
                    if *y != el {
                        let terms: Vec<String> = f.assign.iter().map(|t| t.to_string()).collect();
                        rows.push_str(&format!("act {n} {m} {el} [{}] {y}\n", terms.join(", ")));
                    }
                }
            }
        }
    }
    out.push_str(&rows);
    out.push_str("act same\n");
    out
}

pub fn disc(name: &str, points: &[&str]) -> CSet {
    CSet::discrete(name, points)
}

/// The two-point base `{a, b}`.
pub fn two_points() -> CSet {
    disc("2", &["a", "b"])
}

/// Constant discrete families of sizes 1, 2 and 3.
pub fn discrete_fibers() -> Vec<CSet> {
    vec![disc("D1", &["u"]), disc("D2", &["p", "q"]), disc("D3", &["r", "s", "t"])]
}

/// A family over the two-point base whose fibers differ: one point over
/// `a`, two over `b`.
pub fn dependent_family(base: &CSet) -> Family {
    Family {
        name: "E".into(),
        base: base.clone(),
        fiber: Rc::new(|_, x| match x {
            El::Atom(s) if &**s == "a" => vec![El::atom("e")],
            _ => vec![El::atom("e"), El::atom("e'")],
        }),
        act: Rc::new(|_, _, v| v.clone()),
    }
}

/// Reversal `r ↦ ¬r` of the interval.
pub fn reversal() -> SetMap {
    Rc::new(|_, x| El::Dm(x.dm().neg()))
}

/// `{a, b, c} → {a, b}` sending `c` to `a`.
pub fn collapse() -> SetMap {
    Rc::new(|_, x| match x {
        El::Atom(s) if &**s == "c" => El::atom("a"),
        other => other.clone(),
    })
}

/// Shipped table fixtures, used as extra bases.
pub const SHIPPED: &str = include_str!("../../fixtures/bases.cset");

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cset::validate_cset;

    #[test]
    fn shipped_fixtures_parse_and_validate() {
        let sets = parse_fixtures(SHIPPED).unwrap();
        assert!(!sets.is_empty());
        for x in &sets {
            assert_eq!(validate_cset(x, 1), Vec::<String>::new(), "{}", x.name);
        }
    }

    #[test]
    fn round_trip() {
        for x in parse_fixtures(SHIPPED).unwrap() {
            let text = serialize(&x, 1);
            let y = &parse_fixtures(&text).unwrap()[0];
            assert_eq!(serialize(y, 1), text);
        }
    }

    const LOOP: &str = "set loop\ndim 0: a\ndim 1: a e\nact 1 0 e * a\nact 1 1 e [0] a\nact 1 1 e [1] a\nact same\n";

    #[test]
    fn loop_round_trips() {
        let x = &parse_fixtures(LOOP).unwrap()[0];
        assert!(validate_cset(x, 1).is_empty());
        let text = serialize(x, 1);
        assert!(text.contains("act 1 0 e * a"));
        let y = &parse_fixtures(&text).unwrap()[0];
        for f in CubeMap::all(1, 1) {
            assert_eq!(y.restrict(&f, &El::atom("e")), x.restrict(&f, &El::atom("e")));
        }
    }

    #[test]
    fn corrupted_entry_is_caught() {
        let good = "set s\ndim 0: a b\ndim 1: a b\nact same\n";
        let bad = format!("{good}act 1 0 a [1] b\n");
        assert!(validate_cset(&parse_fixtures(good).unwrap()[0], 1).is_empty());
        assert!(!validate_cset(&parse_fixtures(&bad).unwrap()[0], 1).is_empty());
    }

    #[test]
    fn missing_rows_are_rejected() {
        let src = "set s\ndim 0: a\ndim 1: e\nact 1 0 e * a\n";
        assert!(matches!(parse_fixtures(src), Err(ModelError::Fixture(_))));
    }
}
