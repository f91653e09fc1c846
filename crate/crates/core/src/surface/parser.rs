use std::collections::HashSet;

use super::lexer::{lex, Tok};
use super::{Pos, SurfaceDecl, SurfaceError, SurfaceTerm as S};

type Result<T> = std::result::Result<T, SurfaceError>;

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

fn bx(t: S) -> Box<S> {
    Box::new(t)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.at + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn unexpected(&self, what: &str) -> SurfaceError {
        SurfaceError::syntax(self.pos(), format!("expected {what}, found {}", self.peek().describe()))
    }

    fn binder_name(&mut self) -> Option<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Some(s)
            }
            Tok::Underscore => {
                self.bump();
                Some("_".into())
            }
            _ => None,
        }
    }

    fn program(&mut self) -> Result<Vec<SurfaceDecl>> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        while *self.peek() != Tok::Eof {
            let opaque = self.eat(&Tok::Opaque);
            let is_def = match self.peek() {
                Tok::Def => true,
                Tok::Postulate if !opaque => false,
                _ => return Err(self.unexpected(if opaque { "`def`" } else { "`def` or `postulate`" })),
            };
            self.bump();
            let pos = self.pos();
            let name = match self.peek().clone() {
                Tok::Ident(s) => {
                    self.bump();
                    s
                }
                _ => return Err(self.unexpected("a declaration name")),
            };
            if !seen.insert(name.clone()) {
                return Err(SurfaceError::DuplicateName { pos, name });
            }
            self.expect(Tok::Colon, "`:`")?;
            let ty = self.term()?;
            let body = if is_def {
                self.expect(Tok::Define, "`:=`")?;
                Some(self.term()?)
            } else {
                None
            };
            out.push(SurfaceDecl {
                name,
                pos,
                ty,
                body,
                opaque,
            });
        }
        Ok(out)
    }

    /// `( x y : A )`, restoring the position when the input is not a binder group.
    fn binder_group(&mut self) -> Option<(Vec<String>, S)> {
        let start = self.at;
        let group = (|| {
            if !self.eat(&Tok::LParen) {
                return None;
            }
            let mut names = Vec::new();
            while let Some(n) = self.binder_name() {
                names.push(n);
            }
            if names.is_empty() || !self.eat(&Tok::Colon) {
                return None;
            }
            let ty = self.term().ok()?;
            self.eat(&Tok::RParen).then_some((names, ty))
        })();
        if group.is_none() {
            self.at = start;
        }
        group
    }

    fn term(&mut self) -> Result<S> {
        if self.eat(&Tok::Backslash) {
            let mut names = Vec::new();
            while let Some(n) = self.binder_name() {
                names.push(n);
            }
            if names.is_empty() {
                return Err(self.unexpected("a binder name"));
            }
            self.expect(Tok::Arrow, "`->`")?;
            return Ok(S::Lambda(names, bx(self.term()?)));
        }
        if *self.peek() == Tok::LParen && self.looks_like_binder() {
            let start = self.at;
            let mut groups = Vec::new();
            while *self.peek() == Tok::LParen {
                match self.binder_group() {
                    Some(g) => groups.push(g),
                    None => break,
                }
            }
            if !groups.is_empty() && self.eat(&Tok::Arrow) {
                let body = self.term()?;
                return Ok(groups
                    .into_iter()
                    .rev()
                    .fold(body, |b, (names, ty)| telescope(names, ty, b, false)));
            }
            if groups.len() == 1 && self.eat(&Tok::Star) {
                let body = self.term()?;
                let (names, ty) = groups.pop().expect("one group");
                return Ok(telescope(names, ty, body, true));
            }
            self.at = start;
        }
        let lhs = self.app()?;
        if self.eat(&Tok::Arrow) {
            return Ok(S::Arrow(bx(lhs), bx(self.term()?)));
        }
        Ok(lhs)
    }

    fn looks_like_binder(&self) -> bool {
        let mut k = 1;
        while matches!(self.peek_at(k), Tok::Ident(_) | Tok::Underscore) {
            k += 1;
        }
        k > 1 && *self.peek_at(k) == Tok::Colon
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_) | Tok::Universe(_) | Tok::One | Tok::Star | Tok::Underscore | Tok::LParen
        )
    }

    fn app(&mut self) -> Result<S> {
        let mut head = match self.peek() {
            Tok::Fst => {
                self.bump();
                S::Fst(bx(self.atom()?))
            }
            Tok::Snd => {
                self.bump();
                S::Snd(bx(self.atom()?))
            }
            Tok::Refl => {
                self.bump();
                S::Refl(bx(self.atom()?))
            }
            Tok::Id => {
                self.bump();
                let a = self.atom()?;
                let x = self.atom()?;
                let y = self.atom()?;
                S::Id(bx(a), bx(x), bx(y))
            }
            Tok::J => {
                self.bump();
                let args = [self.atom()?, self.atom()?, self.atom()?, self.atom()?, self.atom()?];
                S::J(Box::new(args))
            }
            _ => self.atom()?,
        };
        while self.starts_atom() {
            head = S::Apply(bx(head), bx(self.atom()?));
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<S> {
        let pos = self.pos();
        if !self.starts_atom() {
            return Err(self.unexpected("a term"));
        }
        match self.bump() {
            Tok::Ident(s) => Ok(S::Var(s, pos)),
            Tok::Universe(n) => Ok(S::Universe(n, pos)),
            Tok::One => Ok(S::Unit),
            Tok::Star => Ok(S::Star),
            Tok::Underscore => Ok(S::Hole(pos)),
            _ => {
                let first = self.term()?;
                if self.eat(&Tok::Colon) {
                    let ty = self.term()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(S::Annot(bx(first), bx(ty)));
                }
                let mut items = vec![first];
                while self.eat(&Tok::Comma) {
                    items.push(self.term()?);
                }
                self.expect(Tok::RParen, "`)`")?;
                let last = items.pop().expect("nonempty");
                Ok(items.into_iter().rev().fold(last, |acc, t| S::Pair(bx(t), bx(acc))))
            }
        }
    }
}

fn telescope(names: Vec<String>, ty: S, body: S, sigma: bool) -> S {
    if sigma {
        S::Sigma(names, bx(ty), bx(body))
    } else {
        S::Pi(names, bx(ty), bx(body))
    }
}

pub fn parse_program(src: &str) -> Result<Vec<SurfaceDecl>> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    p.program()
}

pub fn parse_term(src: &str) -> Result<S> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(t)
}
