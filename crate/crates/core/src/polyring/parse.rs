//! Reader for the textual polynomial format, e.g. `-3/2*c11^2*c21 + c43 - 1`.
//! Juxtaposition also multiplies, and identifiers are split greedily into the longest
//! known variable names, so `c21c41^2c51` reads as `c21*c41^2*c51`.

use num_bigint::BigInt;
use num_traits::One;

use super::{PolyError, Polynomial, Q, VarTable};

pub fn parse_polynomial(src: &str, vars: &VarTable) -> Result<Polynomial, PolyError> {
    let mut p = Parser { s: src.as_bytes(), pos: 0, vars };
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a VarTable,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let arity = self.vars.arity();
        let mut acc = Polynomial::zero(arity);
        let mut sign = Q::one();
        match self.peek() {
            Some(b'-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.product()?;
            acc = &acc + &t.scale(&sign);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = Q::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -Q::one();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'_' => {
                    let f = self.power()?;
                    acc = &acc * &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent out of range"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digits"))
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        let arity = self.vars.arity();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut q = Q::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den = self.integer()?;
                    if den == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    q /= Q::from_integer(den);
                }
                Ok(Polynomial::constant(arity, q))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let mut end = start;
                while end < self.s.len() && (self.s[end].is_ascii_alphanumeric() || self.s[end] == b'_') {
                    end += 1;
                }
                let word = std::str::from_utf8(&self.s[start..end]).expect("ascii");
                for len in (1..=word.len()).rev() {
                    if let Some(v) = self.vars.index_of(&word[..len]) {
                        self.pos = start + len;
                        return Ok(Polynomial::var(arity, v));
                    }
                }
                Err(PolyError::UnknownVariable(word.to_string()))
            }
            _ => Err(self.err("expected a factor")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn juxtaposed_names_split_greedily() {
        let vars = VarTable::new(["c21", "c41", "c51", "c43"]).unwrap();
        let p = parse_polynomial("c21c41^2c51^2 - c43 + 3/2", &vars).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.to_string_with(&vars), "c21*c41^2*c51^2 - c43 + 3/2");
    }

    #[test]
    fn round_trip_through_rendering() {
        let vars = VarTable::new(["x", "y"]).unwrap();
        let p = parse_polynomial("(x - 2y)^3 - 1/3*x*y", &vars).unwrap();
        let q = parse_polynomial(&p.to_string_with(&vars), &vars).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn unknown_names_are_rejected() {
        let vars = VarTable::new(["x"]).unwrap();
        assert!(matches!(parse_polynomial("x + q", &vars), Err(PolyError::UnknownVariable(_))));
    }
}
