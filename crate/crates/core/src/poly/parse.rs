//! Text input for ternary forms.
//!
//! ```text
//! form    = expr EOF ;
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = ("+" | "-") unary | power ;
//! power   = atom [ "^" uint ] ;
//! atom    = uint | "x" | "y" | "z" | "(" expr ")" ;
//! uint    = digit { digit } ;
//! ```
//!
//! Whitespace is ignored between tokens. A divisor must be a nonzero
//! constant, so `(1/2)*x^2` and `x^2/2` both work. The result must be
//! homogeneous; degrees are tracked syntactically, so `x^4 - x^4` parses as
//! the zero form of degree 4 while `x^4 + y^3` is rejected.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::form::TernaryForm;
use super::monomial::Monomial;
use crate::rational::Rational;

/// Exponents above this are rejected to keep expansion bounded.
const MAX_EXPONENT: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("division by zero at position {pos}")]
    DivisionByZero { pos: usize },
    #[error("divisor at position {pos} is not a constant")]
    NonConstantDivisor { pos: usize },
    #[error("exponent {exp} at position {pos} exceeds the limit of {MAX_EXPONENT}")]
    ExponentTooLarge { pos: usize, exp: String },
    #[error("inhomogeneous form: degrees {}", DegreeList(.degrees))]
    Inhomogeneous { degrees: Vec<u32> },
}

struct DegreeList<'a>(&'a [u32]);

impl fmt::Display for DegreeList<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "}}")
    }
}

pub fn parse_form(text: &str) -> Result<TernaryForm, FormParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, at: 0, end: text.chars().count() };
    let v = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(syntax(t.pos, "unexpected trailing input"));
    }
    let degrees: Vec<u32> = v.degrees.iter().rev().copied().collect();
    if degrees.len() != 1 {
        return Err(FormParseError::Inhomogeneous { degrees });
    }
    Ok(TernaryForm::from_terms(degrees[0], v.terms))
}

fn syntax(pos: usize, msg: &str) -> FormParseError {
    FormParseError::Syntax { pos, msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
    text: String,
}

fn tokenize(text: &str) -> Result<Vec<Token>, FormParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                i += 1;
            }
            let n: BigInt = s.parse().expect("digit run is a valid integer");
            out.push(Token { tok: Tok::Num(n), pos, text: s });
            continue;
        }
        let tok = match c {
            'x' => Tok::Var(0),
            'y' => Tok::Var(1),
            'z' => Tok::Var(2),
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(syntax(pos, &alloc::format!("unexpected character {c:?}"))),
        };
        out.push(Token { tok, pos, text: c.into() });
        i += 1;
    }
    Ok(out)
}

/// An intermediate, possibly inhomogeneous, polynomial together with the
/// set of degrees its syntax contributed.
struct Value {
    terms: BTreeMap<Monomial, Rational>,
    degrees: BTreeSet<u32>,
}

impl Value {
    fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::ONE, c);
        }
        Self { terms, degrees: [0].into_iter().collect() }
    }

    fn var(k: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(k), Rational::one());
        Self { terms, degrees: [1].into_iter().collect() }
    }

    fn as_constant(&self) -> Option<Rational> {
        if self.degrees.iter().any(|&d| d != 0) {
            return None;
        }
        Some(self.terms.get(&Monomial::ONE).cloned().unwrap_or_else(Rational::zero))
    }

    fn add(mut self, other: Value, sign: bool) -> Value {
        for (m, c) in other.terms {
            let c = if sign { c } else { -c };
            let e = self.terms.entry(m).or_insert_with(Rational::zero);
            *e += c;
            if e.is_zero() {
                self.terms.remove(&m);
            }
        }
        self.degrees.extend(other.degrees);
        self
    }

    fn mul(&self, other: &Value) -> Value {
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let e = terms.entry(m).or_insert_with(Rational::zero);
                *e += c1 * c2;
                if e.is_zero() {
                    terms.remove(&m);
                }
            }
        }
        let degrees = self.degrees.iter().flat_map(|a| other.degrees.iter().map(move |b| a + b)).collect();
        Value { terms, degrees }
    }

    fn scale(mut self, s: &Rational) -> Value {
        for c in self.terms.values_mut() {
            *c *= s;
        }
        self
    }

    fn neg(self) -> Value {
        self.scale(&-Rational::one())
    }
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn peek_tok(&self) -> Option<&Tok> {
        self.peek().map(|t| &t.tok)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn pos(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn expr(&mut self) -> Result<Value, FormParseError> {
        let mut acc = self.term()?;
        while let Some(tok @ (Tok::Plus | Tok::Minus)) = self.peek_tok() {
            let plus = *tok == Tok::Plus;
            self.at += 1;
            let rhs = self.term()?;
            acc = acc.add(rhs, plus);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Value, FormParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek_tok() {
                Some(Tok::Star) => {
                    self.at += 1;
                    let rhs = self.unary()?;
                    acc = acc.mul(&rhs);
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    let pos = self.pos();
                    let rhs = self.unary()?;
                    let c = rhs.as_constant().ok_or(FormParseError::NonConstantDivisor { pos })?;
                    if c.is_zero() {
                        return Err(FormParseError::DivisionByZero { pos });
                    }
                    acc = acc.scale(&c.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Value, FormParseError> {
        match self.peek_tok() {
            Some(Tok::Plus) => {
                self.at += 1;
                self.unary()
            }
            Some(Tok::Minus) => {
                self.at += 1;
                Ok(self.unary()?.neg())
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Value, FormParseError> {
        let base = self.atom()?;
        if self.peek_tok() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.at += 1;
        let pos = self.pos();
        let tok = self.next().ok_or_else(|| syntax(pos, "expected an exponent"))?;
        let Tok::Num(n) = tok.tok else {
            return Err(syntax(pos, "expected a non-negative integer exponent"));
        };
        let e = u32::try_from(&n).ok().filter(|&e| e <= MAX_EXPONENT).ok_or(FormParseError::ExponentTooLarge { pos, exp: tok.text })?;
        let mut acc = Value::constant(Rational::one());
        for _ in 0..e {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Value, FormParseError> {
        let pos = self.pos();
        let tok = self.next().ok_or_else(|| syntax(pos, "unexpected end of input"))?;
        match tok.tok {
            Tok::Num(n) => Ok(Value::constant(Rational::from_integer(n))),
            Tok::Var(k) => Ok(Value::var(k)),
            Tok::LParen => {
                let v = self.expr()?;
                let close = self.pos();
                match self.next() {
                    Some(Token { tok: Tok::RParen, .. }) => Ok(v),
                    _ => Err(syntax(close, "expected ')'")),
                }
            }
            _ => Err(syntax(pos, &alloc::format!("unexpected {:?}", tok.text))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use alloc::string::ToString;

    #[test]
    fn examples() {
        let f = parse_form("x^4+y^4+z^4").unwrap();
        assert_eq!(f.degree(), 4);
        assert_eq!(f.num_terms(), 3);
        assert_eq!(parse_form("x^4 + y^3"), Err(FormParseError::Inhomogeneous { degrees: alloc::vec![4, 3] }));
        let h = parse_form("(1/2)*x^2*y^2").unwrap();
        assert_eq!(h.num_terms(), 1);
        assert_eq!(h.coefficient(&Monomial::new(2, 2, 0)), frac(1, 2));
        assert_eq!(parse_form("x^2*y^2/2").unwrap(), h);
    }

    #[test]
    fn zero_forms_keep_degree() {
        let z = parse_form("x^4 - x^4").unwrap();
        assert!(z.is_zero() && z.degree() == 4);
        let z = parse_form("0*x^3").unwrap();
        assert!(z.is_zero() && z.degree() == 3);
        assert_eq!(parse_form("0").unwrap().degree(), 0);
    }

    #[test]
    fn errors_report_position() {
        assert!(matches!(parse_form("x^4 + * y"), Err(FormParseError::Syntax { pos: 6, .. })));
        assert!(matches!(parse_form("(x+y"), Err(FormParseError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_form("x^2 $"), Err(FormParseError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_form("x/y"), Err(FormParseError::NonConstantDivisor { pos: 2 })));
        assert!(matches!(parse_form("x/(1-1)"), Err(FormParseError::DivisionByZero { .. })));
        assert!(matches!(parse_form("x^999"), Err(FormParseError::ExponentTooLarge { .. })));
        assert!(matches!(parse_form(""), Err(FormParseError::Syntax { pos: 0, .. })));
    }

    #[test]
    fn error_messages() {
        let e = parse_form("x^4 + y^3").unwrap_err();
        assert_eq!(e.to_string(), "inhomogeneous form: degrees {4,3}");
    }

    #[test]
    fn nested_and_unary() {
        assert_eq!(parse_form("-(x-y)^2").unwrap(), parse_form("-x^2 + 2*x*y - y^2").unwrap());
        assert_eq!(parse_form("--x").unwrap(), parse_form("x").unwrap());
        assert_eq!(parse_form("(x+y)^0*3").unwrap(), TernaryForm::constant(crate::rational::int(3)));
    }
}
