//! Expression syntax for the command line.
//!
//! ```text
//! expr   := unary (('+' | '-') unary)*
//! unary  := '-' unary | term
//! term   := power ('*' power)*
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | 't(' int ')' | 'tr(' word ')' | '(' expr ')'
//! ```

use std::collections::HashMap;
use std::sync::OnceLock;

use sl3char::gluing::qstar;
use sl3char::oracle::{defining_word, Word};
use sl3char::poisson::p_minus_t5;
use sl3char::poly::int;
use sl3char::{Poly, Rational, RingElement, VarIndex};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum Expression {
    Number(Rational),
    Var(VarIndex),
    Trace(Word),
    Neg(Box<Expression>),
    Add(Box<Expression>, Box<Expression>),
    Sub(Box<Expression>, Box<Expression>),
    Mul(Box<Expression>, Box<Expression>),
    Pow(Box<Expression>, u32),
}

#[derive(Debug, Error, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable t({index}) at byte {offset}")]
    UnknownVariable { offset: usize, index: i64 },
    #[error("unknown trace word '{word}' at byte {offset}")]
    UnknownTrace { offset: usize, word: String },
}

pub fn parse(text: &str) -> Result<Expression, ExprError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.syntax("unexpected trailing input");
    }
    Ok(e)
}

/// Parses and lowers to a reduced ring element.
pub fn parse_element(text: &str) -> Result<RingElement, ExprError> {
    let e = parse(text)?;
    Ok(lower(&e))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax<T>(&self, message: &str) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), ExprError> {
        if self.eat(b) {
            Ok(())
        } else {
            self.syntax(&format!("expected '{}'", b as char))
        }
    }

    fn digits(&mut self) -> Result<&str, ExprError> {
        self.peek();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.syntax("expected digits");
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn expr(&mut self) -> Result<Expression, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'+') {
                lhs = Expression::Add(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'-') {
                lhs = Expression::Sub(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expression, ExprError> {
        if self.eat(b'-') {
            Ok(Expression::Neg(Box::new(self.unary()?)))
        } else {
            self.term()
        }
    }

    fn term(&mut self) -> Result<Expression, ExprError> {
        let mut lhs = self.power()?;
        while self.eat(b'*') {
            lhs = Expression::Mul(Box::new(lhs), Box::new(self.power()?));
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expression, ExprError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let n: u32 = self.digits()?.parse().map_err(|_| ExprError::Syntax {
            offset: at,
            message: "exponent too large".into(),
        })?;
        if self.peek() == Some(b'^') {
            return self.syntax("chained '^' needs parentheses");
        }
        Ok(Expression::Pow(Box::new(base), n))
    }

    fn atom(&mut self) -> Result<Expression, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b) if b.is_ascii_digit() => {
                let n: i64 = self.digits()?.parse().map_err(|_| ExprError::Syntax {
                    offset: self.pos,
                    message: "integer too large".into(),
                })?;
                let mut value = int(n);
                if self.eat(b'/') {
                    let at = self.pos;
                    let d: i64 = self.digits()?.parse().map_err(|_| ExprError::Syntax {
                        offset: at,
                        message: "integer too large".into(),
                    })?;
                    if d == 0 {
                        return Err(ExprError::Syntax {
                            offset: at,
                            message: "zero denominator".into(),
                        });
                    }
                    value /= int(d);
                }
                Ok(Expression::Number(value))
            }
            Some(b't') => {
                if self.src[self.pos..].starts_with(b"tr") {
                    self.pos += 2;
                    self.expect(b'(')?;
                    self.peek();
                    let start = self.pos;
                    while self.pos < self.src.len() && b"aAbB".contains(&self.src[self.pos]) {
                        self.pos += 1;
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                    let word = Word::parse(text).expect("letters checked");
                    self.expect(b')')?;
                    if trace_value(&word).is_none() {
                        return Err(ExprError::UnknownTrace {
                            offset: start,
                            word: text.into(),
                        });
                    }
                    return Ok(Expression::Trace(word));
                }
                self.pos += 1;
                self.expect(b'(')?;
                self.peek();
                let start = self.pos;
                let neg = self.eat(b'-');
                let n: i64 = self.digits()?.parse().map_err(|_| ExprError::Syntax {
                    offset: start,
                    message: "index too large".into(),
                })?;
                let index = if neg { -n } else { n };
                self.expect(b')')?;
                VarIndex::new(index)
                    .map(Expression::Var)
                    .map_err(|_| ExprError::UnknownVariable {
                        offset: start,
                        index,
                    })
            }
            Some(_) => self.syntax("expected number, t(i), tr(word) or '('"),
            None => self.syntax("unexpected end of input"),
        }
    }
}

fn trace_table() -> &'static HashMap<Word, RingElement> {
    static TABLE: OnceLock<HashMap<Word, RingElement>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = HashMap::new();
        let q = qstar();
        for v in VarIndex::ALL {
            table.insert(q.word(v).cyclic_normal_form(), q.image(v).clone());
            table.insert(
                defining_word(v).cyclic_normal_form(),
                RingElement::generator(v),
            );
        }
        table.insert(
            Word::parse("baBA").expect("letters").cyclic_normal_form(),
            p_minus_t5(),
        );
        table.insert(Word::default(), RingElement::from_poly(&Poly::from_int(3)));
        table
    })
}

/// The ring element equal to `tr(w)`, for words in the certified table
/// (up to free and cyclic reduction).
pub fn trace_value(w: &Word) -> Option<&'static RingElement> {
    trace_table().get(&w.cyclic_normal_form())
}

pub fn lower(e: &Expression) -> RingElement {
    match e {
        Expression::Number(r) => RingElement::from_poly(&Poly::constant(r.clone())),
        Expression::Var(v) => RingElement::generator(*v),
        Expression::Trace(w) => trace_value(w).expect("checked while parsing").clone(),
        Expression::Neg(x) => -lower(x),
        Expression::Add(x, y) => lower(x) + lower(y),
        Expression::Sub(x, y) => lower(x) - lower(y),
        Expression::Mul(x, y) => lower(x) * lower(y),
        Expression::Pow(x, n) => lower(x).pow(*n),
    }
}
