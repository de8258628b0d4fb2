//! Reader for the polynomial text grammar.
//!
//! ```text
//! poly  := term (("+" | "-") term)*
//! term  := [sign] [coef "*"] var ("*" var)* | [sign] coef
//! coef  := uint ["/" uint]
//! var   := "x" factorIdx "_" coordIdx ["^" uint]
//! ```
//!
//! `factorIdx` is 1-based, `coordIdx` 0-based. Whitespace between tokens is
//! ignored. The rational `coef` form is only emitted for non-integral
//! coefficients.

use num::{BigInt, BigRational, One, Zero};

use super::poly::{Monomial, MultiPoly};
use crate::error::{Error, Result};
use crate::lattice::Space;

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, want: char) -> bool {
        if self.peek() == Some(want) {
            self.pos += want.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        let at = self.pos;
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(Error::parse(at, format!("expected '{want}', found '{c}'"))),
            None => Err(Error::parse(at, format!("expected '{want}', found end of input"))),
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let len = self.src[start..]
            .bytes()
            .take_while(|b| b.is_ascii_digit())
            .count();
        if len == 0 {
            let found = self.src[start..]
                .chars()
                .next()
                .map_or("end of input".to_string(), |c| format!("'{c}'"));
            return Err(Error::parse(start, format!("expected a digit, found {found}")));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn small_uint(&mut self, what: &str) -> Result<u32> {
        let at = self.pos;
        let d = self.digits()?;
        d.parse::<u32>()
            .map_err(|_| Error::parse(at, format!("{what} {d} overflows")))
    }
}

fn is_minus(c: char) -> bool {
    c == '-' || c == '\u{2212}'
}

pub(crate) fn parse_poly(space: &Space, text: &str) -> Result<MultiPoly> {
    let mut cur = Cursor { src: text, pos: 0 };
    let mut acc = MultiPoly::zero(space);

    let mut negative = match cur.peek() {
        None => return Err(Error::parse(0, "empty polynomial")),
        Some('+') => {
            cur.bump();
            false
        }
        Some(c) if is_minus(c) => {
            cur.bump();
            true
        }
        Some(_) => false,
    };
    loop {
        let term = parse_term(space, &mut cur)?;
        acc = if negative { acc.sub(&term) } else { acc.add(&term) };
        let at = cur.pos;
        negative = match cur.bump() {
            None => break,
            Some('+') => false,
            Some(c) if is_minus(c) => true,
            Some(c) => return Err(Error::parse(at, format!("unexpected '{c}'"))),
        };
    }
    Ok(acc)
}

fn parse_coefficient(cur: &mut Cursor<'_>) -> Result<BigRational> {
    let at = cur.pos;
    let num: BigInt = cur.digits()?.parse().expect("ascii digits");
    if cur.eat('/') {
        let den: BigInt = cur.digits()?.parse().expect("ascii digits");
        if den.is_zero() {
            return Err(Error::parse(at, "zero denominator"));
        }
        Ok(BigRational::new(num, den))
    } else {
        Ok(BigRational::from_integer(num))
    }
}

fn parse_term(space: &Space, cur: &mut Cursor<'_>) -> Result<MultiPoly> {
    let (coef, mut mono) = match cur.peek() {
        Some(c) if c.is_ascii_digit() => {
            let coef = parse_coefficient(cur)?;
            if !cur.eat('*') {
                return Ok(MultiPoly::constant(space, coef));
            }
            (coef, parse_var(space, cur)?)
        }
        Some('x') => (BigRational::one(), parse_var(space, cur)?),
        Some(c) => return Err(Error::parse(cur.pos, format!("unexpected '{c}' at start of term"))),
        None => return Err(Error::parse(cur.pos, "expected a term, found end of input")),
    };
    while cur.eat('*') {
        let at = cur.pos;
        let v = parse_var(space, cur)?;
        mono = mono
            .checked_mul(&v)
            .ok_or_else(|| Error::parse(at, "exponent overflow"))?;
    }
    Ok(MultiPoly::monomial(space, mono, coef))
}

fn parse_var(space: &Space, cur: &mut Cursor<'_>) -> Result<Monomial> {
    let start = {
        cur.skip_ws();
        cur.pos
    };
    cur.expect('x')?;
    let factor = cur.small_uint("factor index")? as usize;
    cur.expect('_')?;
    let coord = cur.small_uint("coordinate index")? as usize;
    let exp = if cur.eat('^') {
        cur.small_uint("exponent")?
    } else {
        1
    };
    if factor == 0 || factor > space.num_factors() || coord >= space.coords(factor - 1) {
        return Err(Error::parse(
            start,
            format!("unknown variable x{factor}_{coord} on {space}"),
        ));
    }
    let offset: usize = (0..factor - 1).map(|j| space.coords(j)).sum();
    let mut exps = vec![0u32; space.total_coords()];
    exps[offset + coord] = exp;
    Ok(Monomial::from_exponents(exps))
}
