//! Recursive-descent parser for rational-function expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' uint)?
//! base   := uint | variable | 'sqrtd' | '(' expr ')' | '-' base
//! ```

use rug::Integer;

use super::field::{GroundField, Scalar};
use super::poly::Poly;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(Integer),
    Ident(String),
    Op(u8),
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token and its starting byte offset.
    fn next(&mut self) -> Result<(Tok, usize)> {
        self.skip_ws();
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return Ok((Tok::Int(digits.parse().unwrap()), start));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let id = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            return Ok((Tok::Ident(id.to_string()), start));
        }
        if b"+-*/^()".contains(&c) {
            self.pos += 1;
            return Ok((Tok::Op(c), start));
        }
        Err(syntax(
            start,
            format!("unexpected character {:?}", c as char),
        ))
    }
}

fn syntax(offset: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        offset,
        message: message.into(),
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    at: usize,
    field: GroundField,
    var: &'a str,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<()> {
        let (t, at) = self.lex.next()?;
        self.tok = t;
        self.at = at;
        Ok(())
    }

    fn expr<S: Scalar>(&mut self) -> Result<RatFunc<S>> {
        let mut acc = self.term()?;
        while let Tok::Op(op @ (b'+' | b'-')) = self.tok {
            self.bump()?;
            let rhs = self.term()?;
            acc = if op == b'+' {
                acc.add(&rhs)
            } else {
                acc.sub(&rhs)
            };
        }
        Ok(acc)
    }

    fn term<S: Scalar>(&mut self) -> Result<RatFunc<S>> {
        let mut acc = self.factor()?;
        while let Tok::Op(op @ (b'*' | b'/')) = self.tok {
            let at = self.at;
            self.bump()?;
            let rhs = self.factor()?;
            acc = if op == b'*' {
                acc.mul(&rhs)
            } else {
                acc.div(&rhs)
                    .map_err(|_| syntax(at, "division by the zero polynomial"))
                    .map_err(|e| match e {
                        Error::Syntax { .. } => Error::DivisionByZero,
                        other => other,
                    })?
            };
        }
        Ok(acc)
    }

    fn factor<S: Scalar>(&mut self) -> Result<RatFunc<S>> {
        let base = self.base()?;
        if self.tok == Tok::Op(b'^') {
            self.bump()?;
            let Tok::Int(e) = &self.tok else {
                return Err(syntax(self.at, "expected a nonnegative integer exponent"));
            };
            let e = e
                .to_i32()
                .filter(|&e| e <= 1 << 20)
                .ok_or_else(|| syntax(self.at, "exponent too large"))?;
            self.bump()?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn base<S: Scalar>(&mut self) -> Result<RatFunc<S>> {
        let at = self.at;
        match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Int(n) => {
                self.bump()?;
                Ok(RatFunc::constant(S::from_integer(self.field, &n)))
            }
            Tok::Ident(id) if id == "sqrtd" => {
                let s = S::sqrt_d(self.field).ok_or(Error::NoSqrtD)?;
                self.bump()?;
                Ok(RatFunc::constant(s))
            }
            Tok::Ident(id) if id == self.var => {
                self.bump()?;
                Ok(RatFunc::from_poly(Poly::x(self.field)))
            }
            Tok::Ident(id) => Err(syntax(at, format!("unknown identifier `{id}`"))),
            Tok::Op(b'(') => {
                self.bump()?;
                let inner = self.expr()?;
                if self.tok != Tok::Op(b')') {
                    return Err(syntax(self.at, "expected `)`"));
                }
                self.bump()?;
                Ok(inner)
            }
            Tok::Op(b'-') => {
                self.bump()?;
                Ok(self.base::<S>()?.neg())
            }
            Tok::Op(c) => Err(syntax(at, format!("unexpected `{}`", c as char))),
            Tok::End => Err(syntax(at, "unexpected end of input")),
        }
    }
}

/// Parses `text` as a rational function of `variable` over `field`.
///
/// ```
/// use pcurve::exactmath::{parse_ratfunc, FieldElem, GroundField};
///
/// let f = parse_ratfunc::<FieldElem>("2*x^3/(1-x^4)", GroundField::Rationals, "x").unwrap();
/// assert_eq!(f.to_expr("x"), "(-2*x^3)/(x^4 - 1)");
/// ```
pub fn parse_ratfunc<S: Scalar>(
    text: &str,
    field: GroundField,
    variable: &str,
) -> Result<RatFunc<S>> {
    if !text.is_ascii() {
        let offset = text
            .char_indices()
            .find(|(_, c)| !c.is_ascii())
            .map(|(i, _)| i)
            .unwrap_or(0);
        return Err(syntax(offset, "non-ASCII input"));
    }
    let mut p = Parser {
        lex: Lexer {
            src: text.as_bytes(),
            pos: 0,
        },
        tok: Tok::End,
        at: 0,
        field,
        var: variable,
    };
    p.bump()?;
    let f = p.expr::<S>()?;
    if p.tok != Tok::End {
        return Err(syntax(p.at, "trailing input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{FieldElem, Residue};

    fn parse(s: &str) -> Result<RatFunc<FieldElem>> {
        parse_ratfunc(s, GroundField::Rationals, "x")
    }

    #[test]
    fn examples() {
        let f = parse("2*x^3/(1-x^4)").unwrap();
        assert_eq!(f.num().degree(), Some(3));
        assert_eq!(f.den().degree(), Some(4));
        assert!(parse("0").unwrap().is_zero());
        assert_eq!(
            parse("x/("),
            Err(Error::Syntax {
                offset: 3,
                message: "unexpected end of input".into()
            })
        );
        assert_eq!(parse("1/(x-x)"), Err(Error::DivisionByZero));
        assert_eq!(parse("sqrtd"), Err(Error::NoSqrtD));
        assert!(matches!(
            parse("y + 1"),
            Err(Error::Syntax { offset: 0, .. })
        ));
    }

    #[test]
    fn unary_minus_binds_tightly() {
        assert_eq!(parse("-x^2").unwrap(), parse("x^2").unwrap());
        assert_eq!(parse("-1*x^2").unwrap(), parse("0 - x^2").unwrap());
    }

    #[test]
    fn quadratic_and_prime_fields() {
        let k = GroundField::quadratic(-1).unwrap();
        let f: RatFunc<FieldElem> = parse_ratfunc("(1 + 2*sqrtd)*t/(t^2 + 1)", k, "t").unwrap();
        let g: RatFunc<FieldElem> = parse_ratfunc(&f.to_expr("t"), k, "t").unwrap();
        assert_eq!(f, g);
        let f7 = GroundField::prime(7).unwrap();
        let h: RatFunc<Residue> = parse_ratfunc("x^7 - 8*x", f7, "x").unwrap();
        assert_eq!(h.to_expr("x"), "x^7 + 6*x");
    }
}
