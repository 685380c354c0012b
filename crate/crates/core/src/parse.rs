//! Text form of polynomials.
//!
//! ```text
//! poly     := ['-'] term { ('+'|'-') term }
//! term     := coef | [coef '*'] monomial
//! monomial := factor { '*' factor }
//! factor   := var ['^' uint]
//! var      := 'x0' | 'x1' | 'x2'
//! coef     := uint ['/' uint]
//! ```
//!
//! Whitespace is ignored everywhere. Error positions are byte offsets into the
//! original input.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Coefficient, HomogeneousPoly, Monomial};

/// Parses a homogeneous polynomial. When `expected_degree` is given the result
/// must have that degree; a polynomial that cancels to zero takes it.
pub fn parse_poly(text: &str, expected_degree: Option<u32>) -> Result<HomogeneousPoly> {
    let mut parser = Parser::new(text);
    let terms = parser.poly()?;

    // Zero-coefficient terms carry no degree information.
    let mut degree: Option<u32> = None;
    for (c, m) in &terms {
        if c.is_zero() {
            continue;
        }
        match degree {
            None => degree = Some(m.degree()),
            Some(d) if d != m.degree() => {
                return Err(Error::NotHomogeneous {
                    first: d,
                    second: m.degree(),
                })
            }
            _ => {}
        }
    }
    let degree = degree
        .or(expected_degree)
        .unwrap_or_else(|| terms.first().map(|(_, m)| m.degree()).unwrap_or(0));

    let poly = HomogeneousPoly::from_terms(
        degree,
        terms.into_iter().filter(|(c, _)| !c.is_zero()),
    )?;
    let poly = if poly.is_zero() {
        poly.with_degree(expected_degree.unwrap_or(degree))?
    } else {
        poly
    };
    if let Some(expected) = expected_degree {
        if poly.degree() != expected {
            return Err(Error::DegreeMismatch {
                expected,
                found: poly.degree(),
            });
        }
    }
    Ok(poly)
}

/// Canonical text form: terms in descending graded-lex order, coefficient `1`
/// omitted, `0` for the zero polynomial.
pub fn format_poly(p: &HomogeneousPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let negative = c.is_negative();
        match (i, negative) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let abs = c.abs();
        if *m == Monomial::ONE {
            out.push_str(&abs.to_string());
        } else if abs.is_one() {
            out.push_str(&m.to_string());
        } else {
            out.push_str(&format!("{abs}*{m}"));
        }
    }
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
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

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<Vec<(Coefficient, Monomial)>> {
        let mut terms = Vec::new();
        let mut negate = self.eat(b'-');
        loop {
            let (c, m) = self.term()?;
            terms.push((if negate { -c } else { c }, m));
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                Some(other) => {
                    return self.err(format!("unexpected character '{}'", other as char))
                }
            }
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<(Coefficient, Monomial)> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let c = self.coef()?;
                if self.eat(b'*') {
                    Ok((c, self.monomial()?))
                } else {
                    Ok((c, Monomial::ONE))
                }
            }
            Some(b'x') => Ok((Coefficient::one(), self.monomial()?)),
            Some(other) => self.err(format!(
                "expected a coefficient or variable, found '{}'",
                other as char
            )),
            None => self.err("unexpected end of input"),
        }
    }

    fn monomial(&mut self) -> Result<Monomial> {
        let mut e = [0u32; 3];
        loop {
            let (var, power) = self.factor()?;
            e[var] = e[var]
                .checked_add(power)
                .ok_or_else(|| Error::Syntax {
                    pos: self.pos,
                    msg: "exponent overflow".into(),
                })?;
            // A '*' here must introduce another factor, never a coefficient.
            if self.peek() == Some(b'*') {
                self.pos += 1;
                continue;
            }
            break;
        }
        Ok(Monomial(e))
    }

    fn factor(&mut self) -> Result<(usize, u32)> {
        if !self.eat(b'x') {
            return self.err("expected variable x0, x1 or x2");
        }
        // No whitespace allowed inside a variable name.
        let var = match self.src.get(self.pos) {
            Some(b'0') => 0,
            Some(b'1') => 1,
            Some(b'2') => 2,
            _ => return self.err("variable index must be 0, 1 or 2"),
        };
        self.pos += 1;
        if self.src.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            return self.err("variable index must be 0, 1 or 2");
        }
        let power = if self.eat(b'^') {
            let start = self.pos;
            let n = self.uint()?;
            u32::try_from(n).map_err(|_| Error::Syntax {
                pos: start,
                msg: "exponent too large".into(),
            })?
        } else {
            1
        };
        Ok((var, power))
    }

    fn coef(&mut self) -> Result<Coefficient> {
        let num = self.uint()?;
        if self.eat(b'/') {
            let at = self.pos;
            let den = self.uint()?;
            if den.is_zero() {
                return Err(Error::Syntax {
                    pos: at,
                    msg: "zero denominator".into(),
                });
            }
            Ok(Coefficient::new(num, den))
        } else {
            Ok(Coefficient::from_integer(num))
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an unsigned integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("validated digits"))
    }
}
