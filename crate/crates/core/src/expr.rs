//! Parser for rational-function expressions in the parameter `t`:
//! integer literals, `t`, `+ - * / ^`, parentheses. Exponents are
//! integers (negative allowed, the value being a rational function).

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::RatFunc;

pub fn parse_expr(text: &str) -> Result<RatFunc> {
    parse_expr_at(text, 1, 1)
}

/// Parse with an externally supplied starting position, so family files
/// can report the true line and column.
pub fn parse_expr_at(text: &str, line: usize, col0: usize) -> Result<RatFunc> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line,
        col0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> Error {
        Error::ParseError {
            line: self.line,
            col: self.col0 + self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some('/') => {
                    self.bump();
                    let rhs = self.unary()?;
                    if rhs.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = &acc / &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.peek() == Some('-') {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            let neg = if self.peek() == Some('-') {
                self.bump();
                true
            } else {
                false
            };
            let e = self.integer()? as i32;
            let e = if neg { -e } else { e };
            if e < 0 && base.is_zero() {
                return Err(self.err("zero to a negative power"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let v = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.bump();
                Ok(v)
            }
            Some('t') => {
                self.bump();
                Ok(RatFunc::t())
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RatFunc::from_int(n))
            }
            Some(c) => Err(self.err(&format!("unexpected character '{c}'"))),
            None => Err(self.err("unexpected end of expression")),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .map(|c| c.is_ascii_digit())
            .unwrap_or(false)
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("integer out of range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, Poly};

    #[test]
    fn parses_polynomials_and_fractions() {
        assert_eq!(parse_expr("t^2 - 2*t + 1/2").unwrap(), {
            RatFunc::from_poly(Poly::new(vec![rat(1, 2), rat(-2, 1), rat(1, 1)]))
        });
        assert_eq!(
            parse_expr("1/(t-1)").unwrap(),
            RatFunc::new(Poly::one(), Poly::from_ints(&[-1, 1]))
        );
        assert_eq!(parse_expr("-t").unwrap(), -&RatFunc::t());
        assert_eq!(parse_expr("t^-1").unwrap(), RatFunc::t().pow(-1));
        assert_eq!(parse_expr("(1+t)^3").unwrap(), {
            let u = &RatFunc::one() + &RatFunc::t();
            u.pow(3)
        });
    }

    #[test]
    fn display_parse_round_trip() {
        for s in ["t^3 - 7*t + 2", "t^2 + 1", "t - 1/3", "5"] {
            let v = parse_expr(s).unwrap();
            let back = parse_expr(&v.to_string()).unwrap();
            assert_eq!(v, back, "round trip through {s}");
        }
    }

    #[test]
    fn errors_carry_position() {
        match parse_expr("t + $") {
            Err(Error::ParseError { col, .. }) => assert_eq!(col, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_expr("1/(t-t)").is_err());
        assert!(parse_expr("t +").is_err());
        assert!(parse_expr("(t").is_err());
    }
}
