//! Heyting terms and their text syntax.
//!
//! Binding from tightest: `~`, `&`, `|`, `->`. Implication associates to the
//! right, `&` and `|` to the left. `~t` is shorthand for `t -> 0`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Zero,
    One,
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Imp(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Term, b: Term) -> Term {
        Term::Imp(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Term) -> Term {
        Term::imp(a, Term::Zero)
    }

    /// One more than the largest variable index; 0 for closed terms.
    pub fn arity(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::Zero | Term::One => 0,
            Term::Meet(a, b) | Term::Join(a, b) | Term::Imp(a, b) => a.arity().max(b.arity()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Imp(_, b) if **b == Term::Zero => 4,
            Term::Var(_) | Term::Zero | Term::One => 5,
            Term::Meet(..) => 3,
            Term::Join(..) => 2,
            Term::Imp(..) => 1,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Term::Var(i) => write!(f, "x{i}")?,
            Term::Zero => f.write_str("0")?,
            Term::One => f.write_str("1")?,
            Term::Imp(a, b) if **b == Term::Zero => {
                f.write_str("~")?;
                a.fmt_at(f, 4)?;
            }
            Term::Meet(a, b) => {
                a.fmt_at(f, 3)?;
                f.write_str(" & ")?;
                b.fmt_at(f, 4)?;
            }
            Term::Join(a, b) => {
                a.fmt_at(f, 2)?;
                f.write_str(" | ")?;
                b.fmt_at(f, 3)?;
            }
            Term::Imp(a, b) => {
                a.fmt_at(f, 2)?;
                f.write_str(" -> ")?;
                b.fmt_at(f, 1)?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn arity(&self) -> usize {
        self.lhs.arity().max(self.rhs.arity())
    }

    /// `~x0 | ~~x0 = 1`.
    pub fn weak_excluded_middle() -> Self {
        let x = Term::var(0);
        Equation::new(
            Term::join(Term::not(x.clone()), Term::not(Term::not(x))),
            Term::One,
        )
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Var(usize),
    Zero,
    One,
    And,
    Or,
    Arrow,
    Not,
    LParen,
    RParen,
    Eq,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {}
            b'&' => out.push(Tok::And),
            b'|' => out.push(Tok::Or),
            b'~' => out.push(Tok::Not),
            b'(' => out.push(Tok::LParen),
            b')' => out.push(Tok::RParen),
            b'=' => out.push(Tok::Eq),
            b'0' => out.push(Tok::Zero),
            b'1' => out.push(Tok::One),
            b'-' if b.get(i + 1) == Some(&b'>') => {
                out.push(Tok::Arrow);
                i += 1;
            }
            b'x' => {
                let start = i + 1;
                let mut end = start;
                while end < b.len() && b[end].is_ascii_digit() {
                    end += 1;
                }
                let idx = s[start..end]
                    .parse()
                    .map_err(|_| Error::Parse(format!("variable at offset {i} needs an index")))?;
                out.push(Tok::Var(idx));
                i = end - 1;
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unexpected character {:?} at offset {i}",
                    c as char
                )))
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).copied()
    }

    fn eat(&mut self, t: Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn imp(&mut self) -> Result<Term> {
        let lhs = self.or()?;
        if self.eat(Tok::Arrow) {
            Ok(Term::imp(lhs, self.imp()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Term> {
        let mut t = self.and()?;
        while self.eat(Tok::Or) {
            t = Term::join(t, self.and()?);
        }
        Ok(t)
    }

    fn and(&mut self) -> Result<Term> {
        let mut t = self.unary()?;
        while self.eat(Tok::And) {
            t = Term::meet(t, self.unary()?);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term> {
        if self.eat(Tok::Not) {
            return Ok(Term::not(self.unary()?));
        }
        let tok = self.peek();
        self.pos += 1;
        match tok {
            Some(Tok::Var(i)) => Ok(Term::Var(i)),
            Some(Tok::Zero) => Ok(Term::Zero),
            Some(Tok::One) => Ok(Term::One),
            Some(Tok::LParen) => {
                let t = self.imp()?;
                if !self.eat(Tok::RParen) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(t)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(Error::Parse(format!("trailing token {t:?}"))),
        }
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            toks: lex(s)?,
            pos: 0,
        };
        let t = p.imp()?;
        p.finish()?;
        Ok(t)
    }
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            toks: lex(s)?,
            pos: 0,
        };
        let lhs = p.imp()?;
        if !p.eat(Tok::Eq) {
            return Err(Error::Parse("expected '='".into()));
        }
        let rhs = p.imp()?;
        p.finish()?;
        Ok(Equation { lhs, rhs })
    }
}
