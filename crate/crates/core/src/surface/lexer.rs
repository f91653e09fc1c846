use super::{Pos, SurfaceError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Universe(u32),
    One,
    Star,
    Underscore,
    LParen,
    RParen,
    Comma,
    Colon,
    Define,
    Arrow,
    Backslash,
    Def,
    Postulate,
    Opaque,
    Fst,
    Snd,
    Id,
    Refl,
    J,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Universe(n) => format!("`U{n}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::One => "1",
            Tok::Star => "*",
            Tok::Underscore => "_",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Define => ":=",
            Tok::Arrow => "->",
            Tok::Backslash => "\\",
            Tok::Def => "def",
            Tok::Postulate => "postulate",
            Tok::Opaque => "opaque",
            Tok::Fst => "fst",
            Tok::Snd => "snd",
            Tok::Id => "Id",
            Tok::Refl => "refl",
            Tok::J => "J",
            Tok::Ident(_) | Tok::Universe(_) | Tok::Eof => "",
        }
    }
}

fn ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

pub fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, SurfaceError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let sym = match two.as_str() {
            ":=" => Some((Tok::Define, 2)),
            "->" => Some((Tok::Arrow, 2)),
            _ => match c {
                '(' => Some((Tok::LParen, 1)),
                ')' => Some((Tok::RParen, 1)),
                ',' => Some((Tok::Comma, 1)),
                ':' => Some((Tok::Colon, 1)),
                '*' => Some((Tok::Star, 1)),
                '\\' | 'λ' => Some((Tok::Backslash, 1)),
                _ => None,
            },
        };
        if let Some((t, n)) = sym {
            out.push((t, pos));
            advance(n, &mut i, &mut col);
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            if text != "1" {
                return Err(SurfaceError::syntax(pos, format!("unexpected number `{text}`")));
            }
            out.push((Tok::One, pos));
            continue;
        }
        if ident_start(c) {
            let start = i;
            while i < chars.len() && ident_char(chars[i]) {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += i - start;
            let tok = match text.as_str() {
                "_" => Tok::Underscore,
                "def" => Tok::Def,
                "postulate" => Tok::Postulate,
                "opaque" => Tok::Opaque,
                "fst" => Tok::Fst,
                "snd" => Tok::Snd,
                "Id" => Tok::Id,
                "refl" => Tok::Refl,
                "J" => Tok::J,
                s if s.len() > 1
                    && s.starts_with('U')
                    && s[1..].chars().all(|d| d.is_ascii_digit()) =>
                {
                    let n = s[1..]
                        .parse()
                        .map_err(|_| SurfaceError::syntax(pos, format!("bad universe `{s}`")))?;
                    Tok::Universe(n)
                }
                _ => Tok::Ident(text),
            };
            out.push((tok, pos));
            continue;
        }
        return Err(SurfaceError::syntax(pos, format!("unexpected character `{c}`")));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_comments() {
        let toks: Vec<Tok> = lex("def x : U0 := \\a -> a -- trailing\n(_ , *) 1")
            .unwrap()
            .into_iter()
            .map(|(t, _)| t)
            .collect();
        assert_eq!(
            toks,
            vec![
                Tok::Def,
                Tok::Ident("x".into()),
                Tok::Colon,
                Tok::Universe(0),
                Tok::Define,
                Tok::Backslash,
                Tok::Ident("a".into()),
                Tok::Arrow,
                Tok::Ident("a".into()),
                Tok::LParen,
                Tok::Underscore,
                Tok::Comma,
                Tok::Star,
                Tok::RParen,
                Tok::One,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn positions_track_lines() {
        let toks = lex("a\n  b").unwrap();
        assert_eq!(toks[1].1, Pos { line: 2, col: 3 });
    }
}
