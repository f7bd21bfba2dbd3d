//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr    := ('+'|'-')? term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := base ('^' natural)?
//! base    := variable | scalar | '(' expr ')'
//! variable:= 'x' positive-integer
//! scalar  := rational | rational? 'z' ('^' integer)?
//! ```

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{Monomial, Polynomial};
use crate::error::{ParseError, ParseErrorKind};
use crate::scalar::{Conductor, Scalar};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Z,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Var(i) => format!("variable `x{i}`"),
            Tok::Z => "`z`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

fn err(pos: Pos, kind: ParseErrorKind) -> ParseError {
    ParseError {
        line: pos.line,
        column: pos.column,
        kind,
    }
}

fn syntax(pos: Pos, msg: impl Into<String>) -> ParseError {
    err(pos, ParseErrorKind::Syntax(msg.into()))
}

fn lex(src: &str, nvars: usize) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column };
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '0'..='9' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                i -= 1;
                Tok::Num(digits.parse().expect("ascii digits"))
            }
            'x' => {
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(syntax(pos, "expected a variable index after `x`"));
                }
                let digits: String = chars[i + 1..j].iter().collect();
                i = j - 1;
                let name = format!("x{digits}");
                match digits.parse::<usize>() {
                    Ok(0) => return Err(syntax(pos, "variables are numbered from x1")),
                    Ok(k) if k <= nvars => Tok::Var(k),
                    _ => return Err(err(pos, ParseErrorKind::UnknownVariable(name))),
                }
            }
            'z' => Tok::Z,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        };
        i += 1;
        column += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    nvars: usize,
    field: &'a Arc<Conductor>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let negate = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc += &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc -= &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            let (_, pos) = self.bump();
            let rhs = self.factor()?;
            acc = acc
                .checked_mul(&rhs)
                .ok_or_else(|| err(pos, ParseErrorKind::ExponentOverflow))?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let (_, caret) = self.bump();
        let (tok, pos) = self.bump();
        let Tok::Num(n) = tok else {
            return Err(syntax(
                pos,
                format!("expected a natural exponent, found {}", tok.describe()),
            ));
        };
        let k = n.to_u32().ok_or_else(|| err(pos, ParseErrorKind::ExponentOverflow))?;
        base.checked_pow(k)
            .ok_or_else(|| err(caret, ParseErrorKind::ExponentOverflow))
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Var(k) => {
                self.bump();
                Ok(Polynomial::var(self.field, self.nvars, k - 1))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                let (tok, close) = self.bump();
                if tok != Tok::RParen {
                    return Err(syntax(close, format!("expected `)`, found {}", tok.describe())));
                }
                Ok(inner)
            }
            Tok::Num(_) | Tok::Z => {
                let s = self.scalar()?;
                Ok(Polynomial::constant(s, self.nvars))
            }
            other => Err(syntax(pos, format!("expected a term, found {}", other.describe()))),
        }
    }

    fn scalar(&mut self) -> Result<Scalar, ParseError> {
        let mut value = Scalar::one(self.field);
        if let Tok::Num(n) = self.peek().clone() {
            self.bump();
            let mut q = BigRational::from_integer(n);
            if *self.peek() == Tok::Slash {
                self.bump();
                let (tok, pos) = self.bump();
                let Tok::Num(d) = tok else {
                    return Err(syntax(pos, format!("expected a denominator, found {}", tok.describe())));
                };
                if d.is_zero() {
                    return Err(syntax(pos, "zero denominator"));
                }
                q /= BigRational::from_integer(d);
            }
            value = Scalar::from_rational(self.field, q);
            if *self.peek() != Tok::Z {
                return Ok(value);
            }
        }
        self.bump(); // z
        let mut j = 1i64;
        if *self.peek() == Tok::Caret {
            self.bump();
            let negative = *self.peek() == Tok::Minus;
            if negative {
                self.bump();
            }
            let (tok, pos) = self.bump();
            let Tok::Num(e) = tok else {
                return Err(syntax(
                    pos,
                    format!("expected an integer exponent, found {}", tok.describe()),
                ));
            };
            let n = BigInt::from(self.field.order());
            let r = e.mod_floor(&n).to_i64().expect("below conductor");
            j = if negative { -r } else { r };
        }
        Ok(&value * &Scalar::root_of_unity(self.field, j))
    }
}

/// Parses `src` as a polynomial in `x1..x{nvars}` over Q(ζ_N).
pub fn parse_polynomial(src: &str, nvars: usize, field: &Arc<Conductor>) -> Result<Polynomial, ParseError> {
    let toks = lex(src, nvars)?;
    let mut p = Parser {
        toks,
        at: 0,
        nvars,
        field,
    };
    let out = p.expr()?;
    let (tok, pos) = p.bump();
    if tok != Tok::End {
        return Err(syntax(
            pos,
            format!("expected an operator or end of input, found {}", tok.describe()),
        ));
    }
    Ok(out)
}

/// Parses a constant expression, e.g. `3/2 - z^2`.
pub fn parse_scalar(src: &str, field: &Arc<Conductor>) -> Result<Scalar, ParseError> {
    let p = parse_polynomial(src, 0, field)?;
    Ok(p.coeff_or_zero(&Monomial::one(0)))
}
