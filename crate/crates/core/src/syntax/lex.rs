use super::ParseError;
use crate::syntax::term::Side;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    /// `c[X]`, written without whitespace before the bracket.
    Const(String),
    /// `w1` / `w2`.
    Inj(Side),
    /// `w1[` / `w2[`: an annotated injection.
    InjAnn(Side),
    Proj(Side),
    Mu,
    Bot,
    Lambda,
    Dot,
    Colon,
    Tilde,
    LParen,
    RParen,
    Lt,
    Gt,
    Comma,
    LBrack,
    RBrack,
    Pipe,
    Arrow,
    And,
    Or,
    Eq,
    Eof,
}

const KEYWORDS: &[&str] = &["mu", "w1", "w2", "p1", "p2", "bot"];

/// Words that can never be used as variable names.
pub fn is_reserved_word(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

fn ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let at = |k: usize| bytes.get(k).map(|&(_, c)| c);
    while i < bytes.len() {
        let (off, c) = bytes[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let two = (c, at(i + 1).unwrap_or('\0'));
        let tok = match two {
            ('-', '>') => {
                i += 2;
                Tok::Arrow
            }
            ('/', '\\') => {
                i += 2;
                Tok::And
            }
            ('\\', '/') => {
                i += 2;
                Tok::Or
            }
            _ if ident_start(c) => {
                let start = i;
                while i < bytes.len() && ident_char(bytes[i].1) {
                    i += 1;
                }
                let word: String = bytes[start..i].iter().map(|&(_, c)| c).collect();
                let bracket = at(i) == Some('[');
                match word.as_str() {
                    "c" if bracket => {
                        i += 1;
                        let s = i;
                        while i < bytes.len() && ident_char(bytes[i].1) {
                            i += 1;
                        }
                        let name: String = bytes[s..i].iter().map(|&(_, c)| c).collect();
                        if name.is_empty() || at(i) != Some(']') {
                            return Err(ParseError::new(off, "malformed constant, expected c[X]"));
                        }
                        i += 1;
                        Tok::Const(name)
                    }
                    "w1" | "w2" => {
                        let side = if word == "w1" { Side::Left } else { Side::Right };
                        if bracket {
                            i += 1;
                            Tok::InjAnn(side)
                        } else {
                            Tok::Inj(side)
                        }
                    }
                    "p1" => Tok::Proj(Side::Left),
                    "p2" => Tok::Proj(Side::Right),
                    "mu" => Tok::Mu,
                    "bot" => Tok::Bot,
                    _ => Tok::Ident(word),
                }
            }
            _ => {
                i += 1;
                match c {
                    '\\' | 'λ' => Tok::Lambda,
                    '.' => Tok::Dot,
                    ':' => Tok::Colon,
                    '~' | '¬' => Tok::Tilde,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '<' => Tok::Lt,
                    '>' => Tok::Gt,
                    ',' => Tok::Comma,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    '|' => Tok::Pipe,
                    '=' => Tok::Eq,
                    '→' => Tok::Arrow,
                    '∧' => Tok::And,
                    '∨' => Tok::Or,
                    '⊥' => Tok::Bot,
                    'μ' => Tok::Mu,
                    _ => return Err(ParseError::new(off, format!("unexpected character {c:?}"))),
                }
            }
        };
        out.push((tok, off));
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}
