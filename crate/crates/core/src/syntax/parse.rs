use std::sync::Arc;

use super::lex::{lex, Tok};
use super::term::{Elim, MuVar, Sort, Term, TermVar};
use super::ParseError;
use crate::types::Type;

/// Whether binders must carry type annotations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Church,
    Curry,
}

/// The reserved μ-variable used by the ∘ translation; never a user binder.
pub const PHI: &str = "phi";

pub(crate) struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sort: Option<Sort>,
    mode: Mode,
}

impl Parser {
    pub(crate) fn new(src: &str, sort: Option<Sort>, mode: Mode) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0, sort, mode })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(self.offset(), msg))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => self.err(format!("expected identifier, found {}", describe(&t))),
        }
    }

    pub(crate) fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.err(format!("unexpected {} after end of input", describe(self.peek())))
        }
    }

    fn require(&self, at: usize, needed: Sort, what: &str) -> Result<(), ParseError> {
        match self.sort {
            Some(s) if s < needed => Err(ParseError::new(at, format!("{what} is not allowed in sort {s} (needs {needed})"))),
            _ => Ok(()),
        }
    }

    pub(crate) fn term(&mut self) -> Result<Term, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Ident(x) => Ok(Term::Var(TermVar::new(&x))),
            Tok::Const(c) => {
                if let Some(s) = self.sort {
                    if s != Sort::Lambda {
                        return Err(ParseError::new(at, format!("constant c[{c}] is only allowed in sort lambda")));
                    }
                }
                Ok(Term::Const(Arc::from(c.as_str())))
            }
            Tok::Lambda => {
                let x = self.ident()?;
                let ann = if *self.peek() == Tok::Colon {
                    self.bump();
                    Some(self.ty()?)
                } else {
                    None
                };
                if ann.is_none() && self.mode == Mode::Church {
                    return Err(ParseError::new(at, format!("missing type annotation on \\{x} in church mode")));
                }
                self.expect(Tok::Dot, "'.'")?;
                let body = self.term()?;
                Ok(Term::Lam(TermVar::new(&x), ann, Arc::new(body)))
            }
            Tok::Mu => {
                self.require(at, Sort::LambdaMu, "mu-abstraction")?;
                let a = self.ident()?;
                if a == PHI {
                    return Err(ParseError::new(at, "phi is reserved and cannot be bound"));
                }
                let ann = if *self.peek() == Tok::Colon {
                    self.bump();
                    self.expect(Tok::Tilde, "'~' (mu annotations are written a:~A)")?;
                    Some(self.ty()?)
                } else {
                    None
                };
                if ann.is_none() && self.mode == Mode::Church {
                    return Err(ParseError::new(at, format!("missing type annotation on mu {a} in church mode")));
                }
                self.expect(Tok::Dot, "'.'")?;
                let body = self.term()?;
                Ok(Term::Mu(MuVar::new(&a), ann, Arc::new(body)))
            }
            Tok::LBrack => {
                self.require(at, Sort::LambdaMu, "named term")?;
                let a = self.ident()?;
                self.expect(Tok::RBrack, "']'")?;
                let body = self.term()?;
                Ok(Term::Name(MuVar::new(&a), Arc::new(body)))
            }
            Tok::Lt => {
                self.require(at, Sort::Full, "pair")?;
                let l = self.term()?;
                self.expect(Tok::Comma, "','")?;
                let r = self.term()?;
                self.expect(Tok::Gt, "'>'")?;
                Ok(Term::Pair(Arc::new(l), Arc::new(r)))
            }
            Tok::Inj(side) => {
                self.require(at, Sort::Full, "injection")?;
                let body = self.term()?;
                Ok(Term::Inj(side, None, Arc::new(body)))
            }
            Tok::InjAnn(side) => {
                self.require(at, Sort::Full, "injection")?;
                let ann = self.ty()?;
                self.expect(Tok::RBrack, "']'")?;
                let body = self.term()?;
                Ok(Term::Inj(side, Some(ann), Arc::new(body)))
            }
            Tok::LParen => {
                let head = self.term()?;
                let mut acc = head;
                while *self.peek() != Tok::RParen {
                    let e = self.elim()?;
                    acc = Term::App(Arc::new(acc), e);
                }
                self.bump();
                Ok(acc)
            }
            t => Err(ParseError::new(at, format!("expected a term, found {}", describe(&t)))),
        }
    }

    fn elim(&mut self) -> Result<Elim, ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Proj(side) => {
                self.require(at, Sort::Full, "projection")?;
                self.bump();
                Ok(Elim::Proj(side))
            }
            Tok::LBrack if matches!(self.peek_at(2), Tok::Dot) => {
                self.require(at, Sort::Full, "case elimination")?;
                self.bump();
                let x1 = self.ident()?;
                self.expect(Tok::Dot, "'.'")?;
                let n1 = self.term()?;
                self.expect(Tok::Pipe, "'|'")?;
                let x2 = self.ident()?;
                self.expect(Tok::Dot, "'.'")?;
                let n2 = self.term()?;
                self.expect(Tok::RBrack, "']'")?;
                Ok(Elim::Case(TermVar::new(&x1), Arc::new(n1), TermVar::new(&x2), Arc::new(n2)))
            }
            Tok::Eof => self.err("unclosed '('"),
            _ => Ok(Elim::Arg(Arc::new(self.term()?))),
        }
    }

    // type   ::= or ("->" type)?
    // or     ::= and ("\/" or)?
    // and    ::= unary ("/\" and)?
    // unary  ::= "~" unary | ident | "bot" | "(" type ")"
    pub(crate) fn ty(&mut self) -> Result<Type, ParseError> {
        let l = self.ty_or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let r = self.ty()?;
            Ok(Type::arrow(l, r))
        } else {
            Ok(l)
        }
    }

    fn ty_or(&mut self) -> Result<Type, ParseError> {
        let l = self.ty_and()?;
        if *self.peek() == Tok::Or {
            self.bump();
            let r = self.ty_or()?;
            Ok(Type::or(l, r))
        } else {
            Ok(l)
        }
    }

    fn ty_and(&mut self) -> Result<Type, ParseError> {
        let l = self.ty_unary()?;
        if *self.peek() == Tok::And {
            self.bump();
            let r = self.ty_and()?;
            Ok(Type::and(l, r))
        } else {
            Ok(l)
        }
    }

    fn ty_unary(&mut self) -> Result<Type, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Tilde => Ok(Type::neg(self.ty_unary()?)),
            Tok::Ident(a) => Ok(Type::atom(&a)),
            Tok::Bot => Ok(Type::Bot),
            Tok::LParen => {
                let t = self.ty()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            t => Err(ParseError::new(at, format!("expected a type, found {}", describe(&t)))),
        }
    }

    /// `X = type`
    pub(crate) fn equation(&mut self) -> Result<(String, Type), ParseError> {
        let x = self.ident()?;
        self.expect(Tok::Eq, "'='")?;
        let t = self.ty()?;
        Ok((x, t))
    }

    /// `x : type` or `mu a : ~type`
    pub(crate) fn declaration(&mut self) -> Result<(bool, String, Type), ParseError> {
        let is_mu = *self.peek() == Tok::Mu;
        if is_mu {
            self.bump();
        }
        let x = self.ident()?;
        self.expect(Tok::Colon, "':'")?;
        if is_mu {
            self.expect(Tok::Tilde, "'~' (mu declarations are written mu a : ~A)")?;
        }
        let t = self.ty()?;
        Ok((is_mu, x, t))
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier {s:?}"),
        Tok::Const(s) => format!("constant c[{s}]"),
        Tok::Eof => "end of input".to_owned(),
        other => format!("{other:?}"),
    }
}

/// Parse a term of the given sort. In church mode every λ and μ binder must
/// be annotated.
pub fn parse_term(text: &str, sort: Sort, mode: Mode) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, Some(sort), mode)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parse a term without sort restrictions or annotation requirements.
pub fn parse_term_any(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, None, Mode::Curry)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::alpha_eq;
    use crate::syntax::Side;

    #[test]
    fn parse_examples() {
        let t = parse_term("\\x:A. x", Sort::Lambda, Mode::Church).unwrap();
        assert_eq!(t, Term::lam("x", Some(Type::atom("A")), Term::var("x")));

        let t = parse_term("(<x, y> p1)", Sort::Full, Mode::Curry).unwrap();
        assert_eq!(t, Term::proj(Term::pair(Term::var("x"), Term::var("y")), Side::Left));

        let e = parse_term("(mu a. [a] x  y)", Sort::Lambda, Mode::Curry).unwrap_err();
        assert!(e.message.contains("not allowed in sort lambda"), "{e}");
        assert_eq!(e.offset, 1);
    }

    #[test]
    fn church_mode_requires_annotations() {
        let e = parse_term("\\x. x", Sort::Lambda, Mode::Church).unwrap_err();
        assert!(e.message.contains("missing type annotation"));
        let e = parse_term("mu a. [a] x", Sort::LambdaMu, Mode::Church).unwrap_err();
        assert!(e.message.contains("missing type annotation"));
        assert!(parse_term("mu a:~A. [a] x", Sort::LambdaMu, Mode::Church).is_ok());
    }

    #[test]
    fn sort_violations() {
        assert!(parse_term("(x p1)", Sort::LambdaMu, Mode::Curry).is_err());
        assert!(parse_term("(x [y. y | z. z])", Sort::LambdaMu, Mode::Curry).is_err());
        assert!(parse_term("w1 x", Sort::Lambda, Mode::Curry).is_err());
        assert!(parse_term("c[X]", Sort::LambdaMu, Mode::Curry).is_err());
        assert!(parse_term("(c[X] x)", Sort::Lambda, Mode::Curry).is_ok());
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let e = parse_term_any("(x y").unwrap_err();
        assert_eq!(e.offset, 4);
        let e = parse_term_any("\\x x").unwrap_err();
        assert_eq!(e.offset, 3);
        assert!(parse_term_any("x y").is_err());
        assert!(parse_term_any("#").is_err());
    }

    #[test]
    fn phi_cannot_be_bound() {
        assert!(parse_term_any("mu phi. [phi] x").is_err());
        assert!(parse_term_any("[phi] x").is_ok());
    }

    #[test]
    fn named_argument_versus_case() {
        let t = parse_term_any("(f [a] x [y. y | z. z])").unwrap();
        let expected =
            Term::case(Term::app(Term::var("f"), Term::name("a", Term::var("x"))), "y", Term::var("y"), "z", Term::var("z"));
        assert_eq!(t, expected);
    }

    #[test]
    fn annotated_injection_needs_adjacent_bracket() {
        let t = parse_term_any("w1[A \\/ B] x").unwrap();
        assert_eq!(t, Term::inj(Side::Left, Some(Type::or(Type::atom("A"), Type::atom("B"))), Term::var("x")));
        let t = parse_term_any("w1 [a] x").unwrap();
        assert_eq!(t, Term::inj(Side::Left, None, Term::name("a", Term::var("x"))));
    }

    #[test]
    fn lambda_body_is_a_single_term() {
        let t = parse_term_any("(\\x. x y)").unwrap();
        assert_eq!(t, Term::app(Term::lam("x", None, Term::var("x")), Term::var("y")));
        assert!(alpha_eq(&t, &parse_term_any("(λz. z y)").unwrap()));
    }
}
