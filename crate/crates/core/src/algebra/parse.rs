//! Recursive-descent parser for rational expressions:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ('^' exp)?
//! exp    := ['-'] int | '(' ['-'] int ')'
//! atom   := int | var | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AlgebraError, RationalFunction, Var};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub(crate) fn parse(s: &str) -> Result<RationalFunction, AlgebraError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v)
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), AlgebraError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<RationalFunction, AlgebraError> {
        let negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction, AlgebraError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.factor()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.factor()?;
                acc = acc.checked_div(&d).map_err(|_| AlgebraError::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<RationalFunction, AlgebraError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let e = if self.eat(b'(') {
            let e = self.signed_int()?;
            self.expect(b')')?;
            e
        } else {
            self.signed_int()?
        };
        base.pow(e).map_err(|_| AlgebraError::Parse {
            pos: at,
            msg: "negative power of zero".into(),
        })
    }

    fn signed_int(&mut self) -> Result<i32, AlgebraError> {
        let neg = self.eat(b'-');
        let at = self.pos;
        let digits = self.digits().map(str::to_owned);
        let err = |msg: &str| AlgebraError::Parse { pos: at, msg: msg.into() };
        let e: i32 = digits
            .ok_or_else(|| err("expected an integer exponent"))?
            .parse()
            .map_err(|_| err("exponent out of range"))?;
        Ok(if neg { -e } else { e })
    }

    fn digits(&mut self) -> Option<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn atom(&mut self) -> Result<RationalFunction, AlgebraError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap();
                let n: BigInt = d.parse().unwrap();
                Ok(RationalFunction::from_rational(BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                self.pos += 1;
                while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let v = Var::parse(name).map_err(|_| AlgebraError::Parse {
                    pos: start,
                    msg: format!("invalid variable {name:?}"),
                })?;
                Ok(RationalFunction::var(v))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
