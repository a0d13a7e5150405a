//! Text input for polynomials and operators.
//!
//! ```text
//! expr   := ["+" | "-"] term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := atom ("^" nat)*
//! atom   := nat ["/" nat] | name | "(" expr ")"
//! ```
//!
//! In operator mode `d_<name>` denotes a partial derivative and `*` is
//! composition. Juxtaposition is an error.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{Coeff, Polynomial, VarTable};
use crate::weyl::DiffOp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unknown variable `{name}` at {line}:{col}")]
    UnknownVariable { name: String, line: usize, col: usize },
}

pub fn parse_polynomial(src: &str, vars: &VarTable) -> Result<Polynomial, ParseError> {
    Parser::new(src, PolyMode { vars })?.parse()
}

pub fn parse_operator(src: &str, vars: &VarTable) -> Result<DiffOp, ParseError> {
    Parser::new(src, OpMode { vars })?.parse()
}

trait Mode {
    type Value: Clone;
    fn constant(&self, c: Coeff) -> Self::Value;
    fn name(&self, name: &str) -> Option<Self::Value>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn neg(&self, a: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value;
}

struct PolyMode<'a> {
    vars: &'a VarTable,
}

impl Mode for PolyMode<'_> {
    type Value = Polynomial;
    fn constant(&self, c: Coeff) -> Polynomial {
        Polynomial::constant(self.vars.n(), c)
    }
    fn name(&self, name: &str) -> Option<Polynomial> {
        self.vars.index_of(name).map(|v| Polynomial::var(self.vars.n(), v))
    }
    fn add(&self, a: Polynomial, b: Polynomial) -> Polynomial {
        &a + &b
    }
    fn neg(&self, a: Polynomial) -> Polynomial {
        -&a
    }
    fn mul(&self, a: Polynomial, b: Polynomial) -> Polynomial {
        &a * &b
    }
}

struct OpMode<'a> {
    vars: &'a VarTable,
}

impl Mode for OpMode<'_> {
    type Value = DiffOp;
    fn constant(&self, c: Coeff) -> DiffOp {
        DiffOp::function(Polynomial::constant(self.vars.n(), c))
    }
    fn name(&self, name: &str) -> Option<DiffOp> {
        let n = self.vars.n();
        if let Some(base) = name.strip_prefix("d_") {
            return self.vars.base_index(base).map(|i| DiffOp::d(n, i));
        }
        self.vars
            .base_index(name)
            .map(|i| DiffOp::function(Polynomial::x(n, i)))
    }
    fn add(&self, a: DiffOp, b: DiffOp) -> DiffOp {
        &a + &b
    }
    fn neg(&self, a: DiffOp) -> DiffOp {
        -&a
    }
    fn mul(&self, a: DiffOp, b: DiffOp) -> DiffOp {
        a.compose(&b)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            Tok::Num(s.parse().unwrap())
        } else if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Name(chars[start..i].iter().collect())
        } else {
            i += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '/' => Tok::Slash,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                other => {
                    return Err(ParseError::Syntax {
                        line: l0,
                        col: c0,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            }
        };
        col += i - start;
        out.push(Token { tok, line: l0, col: c0 });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        col,
    });
    Ok(out)
}

struct Parser<M: Mode> {
    toks: Vec<Token>,
    pos: usize,
    mode: M,
}

impl<M: Mode> Parser<M> {
    fn new(src: &str, mode: M) -> Result<Self, ParseError> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            mode,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> &Token {
        let t = &self.toks[self.pos];
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let t = self.peek();
        Err(ParseError::Syntax {
            line: t.line,
            col: t.col,
            message: message.into(),
        })
    }

    fn parse(mut self) -> Result<M::Value, ParseError> {
        let v = self.expr()?;
        match self.peek().tok {
            Tok::End => Ok(v),
            Tok::RParen => self.error("unbalanced ')'"),
            _ => self.error("unexpected token"),
        }
    }

    fn expr(&mut self) -> Result<M::Value, ParseError> {
        let negate = match self.peek().tok {
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
            acc = self.mode.neg(acc);
        }
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.mode.add(acc, t);
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = self.mode.add(acc, self.mode.neg(t));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<M::Value, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    let f = self.factor()?;
                    acc = self.mode.mul(acc, f);
                }
                Tok::Num(_) | Tok::Name(_) | Tok::LParen => {
                    return self.error("implicit multiplication is not allowed; write '*'")
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<M::Value, ParseError> {
        let mut base = self.atom()?;
        while self.peek().tok == Tok::Caret {
            self.bump();
            let e = match &self.peek().tok {
                Tok::Num(k) => u32::try_from(k.clone()).ok(),
                _ => return self.error("expected a natural number exponent"),
            };
            let Some(e) = e.filter(|e| *e <= 10_000) else {
                return self.error("exponent too large");
            };
            self.bump();
            let mut acc = self.mode.constant(Coeff::from_integer(1.into()));
            for _ in 0..e {
                acc = self.mode.mul(acc, base.clone());
            }
            base = acc;
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<M::Value, ParseError> {
        let (line, col) = (self.peek().line, self.peek().col);
        match self.peek().tok.clone() {
            Tok::Num(num) => {
                self.bump();
                if self.peek().tok == Tok::Slash {
                    self.bump();
                    let Tok::Num(den) = self.peek().tok.clone() else {
                        return self.error("expected a denominator");
                    };
                    if den.is_zero() {
                        return self.error("zero denominator");
                    }
                    self.bump();
                    Ok(self.mode.constant(Coeff::new(num, den)))
                } else {
                    Ok(self.mode.constant(Coeff::from_integer(num)))
                }
            }
            Tok::Name(name) => {
                self.bump();
                self.mode
                    .name(&name)
                    .ok_or(ParseError::UnknownVariable { name, line, col })
            }
            Tok::LParen => {
                self.bump();
                let v = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return self.error("expected ')'");
                }
                self.bump();
                Ok(v)
            }
            Tok::End => self.error("unexpected end of input"),
            _ => self.error("expected a number, a name or '('"),
        }
    }
}
