//! Parser for written nc expressions such as `8*x1*x2 + 8*x2*x1 + x1^2`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := unary (('+' | '-') unary)*
//! unary   := '-' unary | product
//! product := postfix ('*' postfix)*
//! postfix := primary ('^' INT | '\'')*
//! primary := a<k> | x<k> | z<k> | NUMBER | NUMBER 'i' | 'i'
//!          | '(' sum ')' | 'star' '(' sum ')'
//! ```
//!
//! Multiplication is always written explicitly. `z<k>` is accepted as `x<k>` when the
//! signature has no `a` variables.

use std::fmt;

use crate::error::{NcError, Result};
use crate::free_algebra::{Letter, NcPolynomial, Signature, VarClass, Word};
use crate::linalg::C64;

/// Largest exponent accepted on a compound base.
pub const MAX_EXPONENT: u32 = 64;
/// Largest exponent accepted on a single variable, where the power is one word.
pub const MAX_LETTER_EXPONENT: u32 = 1024;
/// Term-count guard applied while lowering.
pub const MAX_TERMS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum ExprAst {
    Var(Letter),
    Literal(C64),
    Star(Box<ExprAst>),
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, u32),
    Group(Box<ExprAst>),
}

impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprAst::Var(l) => write!(f, "{l}"),
            ExprAst::Literal(c) => write!(f, "{}", render_coeff(*c)),
            ExprAst::Star(e) => write!(f, "star({e})"),
            ExprAst::Neg(e) => write!(f, "-{e}"),
            ExprAst::Add(l, r) => write!(f, "{l} + {r}"),
            ExprAst::Sub(l, r) => write!(f, "{l} - {r}"),
            ExprAst::Mul(l, r) => write!(f, "{l}*{r}"),
            ExprAst::Pow(b, k) => write!(f, "{b}^{k}"),
            ExprAst::Group(e) => write!(f, "({e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Var(Letter),
    Real(f64),
    Imag(f64),
    Int(u64),
    Plus,
    Minus,
    Times,
    Caret,
    Prime,
    LParen,
    RParen,
    StarKw,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    offset: usize,
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    sig: Signature,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, sig: Signature) -> Self {
        Lexer {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            sig,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn tokens(mut self) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        loop {
            while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
                self.pos += 1;
            }
            let offset = self.pos;
            let Some(b) = self.peek() else {
                out.push(Token { tok: Tok::Eof, offset });
                return Ok(out);
            };
            let tok = match b {
                b'+' => self.single(Tok::Plus),
                b'-' => self.single(Tok::Minus),
                b'*' => self.single(Tok::Times),
                b'^' => self.single(Tok::Caret),
                b'\'' => self.single(Tok::Prime),
                b'(' => self.single(Tok::LParen),
                b')' => self.single(Tok::RParen),
                b'0'..=b'9' | b'.' => self.number()?,
                b if b.is_ascii_alphabetic() => self.word()?,
                _ => {
                    let ch = self.src[offset..].chars().next().unwrap_or('?');
                    return Err(NcError::parse(offset, format!("unexpected character `{ch}`")));
                }
            };
            out.push(Token { tok, offset });
        }
    }

    fn single(&mut self, tok: Tok) -> Tok {
        self.pos += 1;
        tok
    }

    fn number(&mut self) -> Result<Tok> {
        let start = self.pos;
        let mut integral = true;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'.') {
            integral = false;
            self.pos += 1;
            while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.peek().is_some_and(|b| b.is_ascii_digit()) {
                integral = false;
                while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let text = &self.src[start..self.pos];
        let value: f64 = text
            .parse()
            .map_err(|_| NcError::parse(start, format!("malformed number `{text}`")))?;
        if self.peek() == Some(b'i') && !self.ident_continues(self.pos + 1) {
            self.pos += 1;
            return Ok(Tok::Imag(value));
        }
        if integral {
            if let Ok(k) = text.parse::<u64>() {
                return Ok(Tok::Int(k));
            }
        }
        Ok(Tok::Real(value))
    }

    fn ident_continues(&self, at: usize) -> bool {
        self.bytes
            .get(at)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
    }

    fn word(&mut self) -> Result<Tok> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        let digits_start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        let digits = &self.src[digits_start..self.pos];
        if self.ident_continues(self.pos) {
            return Err(NcError::parse(start, "malformed identifier"));
        }
        match (name, digits.is_empty()) {
            ("i", true) => Ok(Tok::Imag(1.0)),
            ("star", true) => Ok(Tok::StarKw),
            ("a" | "x" | "z", false) => {
                let index: usize = digits
                    .parse()
                    .map_err(|_| NcError::parse(digits_start, "variable index too large"))?;
                self.variable(name, index, start)
            }
            _ => Err(NcError::parse(
                start,
                format!("unknown token `{}`", &self.src[start..self.pos]),
            )),
        }
    }

    fn variable(&self, name: &str, index: usize, offset: usize) -> Result<Tok> {
        let letter = match name {
            "a" => Letter::a(index),
            "x" => Letter::x(index),
            _ if self.sig.arity_a == 0 => Letter::x(index),
            _ => {
                return Err(NcError::parse(
                    offset,
                    "z-variables are only accepted when the signature has no a-variables",
                ))
            }
        };
        if !self.sig.contains(&letter) {
            let arity = match letter.class {
                VarClass::A => self.sig.arity_a,
                VarClass::X => self.sig.arity_x,
            };
            return Err(NcError::parse(
                offset,
                format!("unknown variable `{name}{index}` (arity {arity})"),
            ));
        }
        Ok(Tok::Var(letter))
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].offset
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(NcError::parse(self.offset(), format!("expected {what}")))
        }
    }

    fn sum(&mut self) -> Result<ExprAst> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<ExprAst> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(ExprAst::Neg(Box::new(self.unary()?)));
        }
        self.product()
    }

    fn product(&mut self) -> Result<ExprAst> {
        let mut lhs = self.postfix()?;
        while *self.peek() == Tok::Times {
            self.bump();
            lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.postfix()?));
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> Result<ExprAst> {
        let mut base = self.primary()?;
        loop {
            match self.peek() {
                Tok::Prime => {
                    self.bump();
                    base = ExprAst::Star(Box::new(base));
                }
                Tok::Caret => {
                    self.bump();
                    let offset = self.offset();
                    let Tok::Int(k) = self.bump() else {
                        return Err(NcError::parse(offset, "exponent must be a non-negative integer"));
                    };
                    let cap = if matches!(base, ExprAst::Var(_)) {
                        MAX_LETTER_EXPONENT
                    } else {
                        MAX_EXPONENT
                    };
                    if k > u64::from(cap) {
                        return Err(NcError::parse(
                            offset,
                            format!("exponent {k} exceeds the limit of {cap}"),
                        ));
                    }
                    base = ExprAst::Pow(Box::new(base), k as u32);
                }
                _ => return Ok(base),
            }
        }
    }

    fn primary(&mut self) -> Result<ExprAst> {
        let offset = self.offset();
        match self.bump() {
            Tok::Var(l) => Ok(ExprAst::Var(l)),
            Tok::Int(k) => Ok(ExprAst::Literal(C64::new(k as f64, 0.0))),
            Tok::Real(v) => Ok(ExprAst::Literal(C64::new(v, 0.0))),
            Tok::Imag(v) => Ok(ExprAst::Literal(C64::new(0.0, v))),
            Tok::LParen => {
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ExprAst::Group(Box::new(inner)))
            }
            Tok::StarKw => {
                self.expect(Tok::LParen, "`(` after `star`")?;
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(ExprAst::Star(Box::new(inner)))
            }
            Tok::Eof => Err(NcError::parse(offset, "unexpected end of input")),
            other => Err(NcError::parse(offset, format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse(src: &str, sig: Signature) -> Result<ExprAst> {
    let tokens = Lexer::new(src, sig).tokens()?;
    let mut parser = Parser { tokens, pos: 0 };
    let ast = parser.sum()?;
    if *parser.peek() != Tok::Eof {
        return Err(NcError::parse(parser.offset(), "trailing input"));
    }
    Ok(ast)
}

/// Expands an AST into canonical polynomial form.
pub fn lower(ast: &ExprAst, sig: Signature) -> Result<NcPolynomial> {
    let p = match ast {
        ExprAst::Var(l) => NcPolynomial::letter(sig, *l)?,
        ExprAst::Literal(c) => NcPolynomial::constant(sig, *c),
        ExprAst::Star(e) => lower(e, sig)?.involute(),
        ExprAst::Neg(e) => lower(e, sig)?.neg(),
        ExprAst::Group(e) => lower(e, sig)?,
        ExprAst::Add(l, r) => lower(l, sig)?.add(&lower(r, sig)?)?,
        ExprAst::Sub(l, r) => lower(l, sig)?.sub(&lower(r, sig)?)?,
        ExprAst::Mul(l, r) => guarded_mul(&lower(l, sig)?, &lower(r, sig)?)?,
        ExprAst::Pow(b, k) => {
            let base = lower(b, sig)?;
            let mut acc = NcPolynomial::one(sig);
            for _ in 0..*k {
                acc = guarded_mul(&acc, &base)?;
            }
            acc
        }
    };
    Ok(p)
}

fn guarded_mul(p: &NcPolynomial, q: &NcPolynomial) -> Result<NcPolynomial> {
    let bound = p.term_count().saturating_mul(q.term_count());
    if bound > MAX_TERMS {
        return Err(NcError::Resource(format!(
            "product of {} and {} terms exceeds the {MAX_TERMS}-term cap",
            p.term_count(),
            q.term_count()
        )));
    }
    p.mul(q)
}

pub fn parse_polynomial(src: &str, sig: Signature) -> Result<NcPolynomial> {
    lower(&parse(src, sig)?, sig)
}

fn render_coeff(c: C64) -> String {
    if c.im == 0.0 {
        format!("({})", c.re)
    } else {
        let sign = if c.im.is_sign_negative() { '-' } else { '+' };
        format!("({}{}{}i)", c.re, sign, c.im.abs())
    }
}

/// Renders a polynomial in the parser's syntax; `parse_polynomial(render(p))` gives `p`
/// back exactly.
pub fn render(p: &NcPolynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let terms: Vec<String> = p.terms().map(|(w, c)| render_term(w, *c)).collect();
    terms.join(" + ")
}

fn render_term(w: &Word, c: C64) -> String {
    let mut s = render_coeff(c);
    for l in w.letters() {
        s.push('*');
        s.push_str(&l.to_string());
    }
    s
}
