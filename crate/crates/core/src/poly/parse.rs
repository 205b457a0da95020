//! Recursive-descent parser for polynomial expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | var | 'w' | '(' expr ')'
//! ```
//!
//! `w` names the generator of an extension field. Division is only allowed by
//! nonzero constants, which is how rational coefficients are written.

use num_bigint::BigInt;

use super::Polynomial;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// Parse `text` as a polynomial in `x` over `spec`.
pub fn parse_poly(text: &str, spec: &FieldSpec) -> Result<Polynomial> {
    parse_in_var(text, spec, 'x')
}

/// Parse `text` as a polynomial in the variable `var`.
pub fn parse_in_var(text: &str, spec: &FieldSpec, var: char) -> Result<Polynomial> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        spec,
        var,
    };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    spec: &'a FieldSpec,
    var: char,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == b'+' {
                acc.add(&rhs)
            } else {
                acc.sub(&rhs)
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.unary()?;
            if op == b'*' {
                acc = acc.mul(&rhs);
            } else {
                if !rhs.is_constant() {
                    return Err(Error::Syntax {
                        pos: at,
                        msg: "division by a non-constant".into(),
                    });
                }
                let inv = rhs.coeff(0).inv().map_err(|_| Error::Syntax {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
                acc = acc.scale(&inv);
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                self.pos = start;
                return Err(self.syntax("expected a nonnegative integer exponent"));
            }
            let e: u64 = digits.parse().map_err(|_| Error::Syntax {
                pos: start,
                msg: "exponent too large".into(),
            })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let Some(c) = self.peek() else {
            return Err(self.syntax("unexpected end of input"));
        };
        match c {
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            b'0'..=b'9' => {
                let digits = self.digits();
                let n: BigInt = digits.parse().expect("digit string");
                Ok(Polynomial::constant(FieldElement::from_bigint(
                    self.spec, &n,
                )))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                if name.len() == 1 && name.starts_with(self.var) {
                    return Ok(Polynomial::x(self.spec));
                }
                if name == "w" {
                    if let Some(g) = FieldElement::generator(self.spec) {
                        return Ok(Polynomial::constant(g));
                    }
                }
                Err(Error::UnknownSymbol {
                    pos: start,
                    symbol: name,
                })
            }
            _ => Err(self.syntax(&format!("unexpected character `{}`", c as char))),
        }
    }
}
