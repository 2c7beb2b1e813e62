//! Text syntax for polynomials, maps and sets.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary := '-' unary | '+' unary | power
//! power := atom ('^' digits)?
//! atom  := digits | 'z' | '(' expr ')'
//! set   := '{' point (',' point)* '}' | 'roots(' expr ')' ('+' '{' ... '}')? | expr
//! point := expr (constant) | 'inf'
//! ```
//!
//! Expressions evaluate to quotients of integer polynomials, so `(1/2)z`,
//! `3/2` and `(z^2 - 1)/(z - 1)` all parse.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::algset::AlgSet;
use crate::error::{Error, Result};
use crate::maps::{make_map, RationalMap};
use crate::point::ProjPoint;
use crate::poly::{gcd_poly, IntPoly};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 100_000;

/// A quotient of integer polynomials, kept reduced.
#[derive(Clone, Debug, PartialEq)]
struct Frac {
    num: IntPoly,
    den: IntPoly,
}

impl Frac {
    fn poly(p: IntPoly) -> Self {
        Frac {
            num: p,
            den: IntPoly::one(),
        }
    }

    fn reduced(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return Frac::poly(IntPoly::zero());
        }
        let g = gcd_poly(&num, &den).expect("den nonzero");
        let mut num = num.div_exact(&g).expect("gcd divides");
        let mut den = den.div_exact(&g).expect("gcd divides");
        if den.leading().unwrap().is_negative() {
            num = -num;
            den = -den;
        }
        Frac { num, den }
    }

    fn add(&self, o: &Frac) -> Frac {
        Frac::reduced(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    fn sub(&self, o: &Frac) -> Frac {
        Frac::reduced(
            &(&self.num * &o.den) - &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    fn mul(&self, o: &Frac) -> Frac {
        Frac::reduced(&self.num * &o.num, &self.den * &o.den)
    }

    fn div(&self, o: &Frac) -> Option<Frac> {
        if o.num.is_zero() {
            return None;
        }
        Some(Frac::reduced(&self.num * &o.den, &self.den * &o.num))
    }

    fn pow(&self, e: u32) -> Frac {
        Frac {
            num: self.num.pow(e as usize),
            den: self.den.pow(e as usize),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(w) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(got) => self.err(format!("expected '{c}', found '{got}'")),
                None => self.err(format!("expected '{c}', found end of input")),
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let len = self
            .rest()
            .chars()
            .take_while(|c| c.is_ascii_digit())
            .count();
        if len == 0 {
            return self.err("expected digits");
        }
        let text = &self.rest()[..len];
        self.pos += len;
        if matches!(self.rest().chars().next(), Some('.' | 'e' | 'E')) {
            return self.err("only integer and rational literals are allowed");
        }
        Ok(text.parse().expect("ascii digits"))
    }

    fn expr(&mut self) -> Result<Frac> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some('/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                acc = match acc.div(&rhs) {
                    Some(q) => q,
                    None => {
                        self.pos = at;
                        return self.err("division by zero");
                    }
                };
            } else if matches!(self.peek(), Some('(' | 'z') | Some('0'..='9')) {
                acc = acc.mul(&self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Frac> {
        if self.eat('-') {
            let v = self.unary()?;
            return Ok(Frac {
                num: -v.num,
                den: v.den,
            });
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Frac> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.digits()?;
            let e: u32 = match u32::try_from(&e) {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => return self.err(format!("exponent larger than {MAX_EXPONENT}")),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Frac> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some('z') => {
                self.pos += 1;
                Ok(Frac::poly(IntPoly::from_i64s(&[0, 1])))
            }
            Some('0'..='9') => Ok(Frac::poly(IntPoly::constant(self.digits()?))),
            Some(c) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }

    fn point(&mut self) -> Result<ProjPoint> {
        if self.eat_word("inf") || self.eat_word("∞") {
            return Ok(ProjPoint::Infinity);
        }
        let start = self.pos;
        let v = self.expr()?;
        if !v.num.is_constant() || !v.den.is_constant() {
            self.pos = start;
            return self.err("set elements must be rational numbers or inf");
        }
        let p = v.num.coeff(0);
        let q = v.den.coeff(0);
        Ok(ProjPoint::Finite(BigRational::new(p, q)))
    }

    fn point_list(&mut self) -> Result<Vec<ProjPoint>> {
        self.expect('{')?;
        let mut pts = Vec::new();
        if self.eat('}') {
            return Ok(pts);
        }
        loop {
            pts.push(self.point()?);
            if self.eat('}') {
                return Ok(pts);
            }
            self.expect(',')?;
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }
}

/// An integer polynomial obtained by clearing denominators: `poly = factor · input`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParsedPoly {
    pub poly: IntPoly,
    pub factor: BigInt,
}

fn parse_frac(src: &str) -> Result<Frac> {
    let mut p = Parser::new(src);
    let v = p.expr()?;
    p.finish()?;
    Ok(v)
}

/// A polynomial with rational coefficients, denominators cleared.
pub fn parse_poly_with_factor(src: &str) -> Result<ParsedPoly> {
    let v = parse_frac(src)?;
    if !v.den.is_constant() {
        return Err(Error::Parse {
            position: 0,
            message: "expected a polynomial, found a quotient".into(),
        });
    }
    Ok(ParsedPoly {
        poly: v.num,
        factor: v.den.coeff(0),
    })
}

pub fn parse_poly(src: &str) -> Result<IntPoly> {
    parse_poly_with_factor(src).map(|p| p.poly)
}

/// A rational map such as `z^2`, `(z^2 - 1)/(z + 3)` or `1/z`.
pub fn parse_map(src: &str) -> Result<RationalMap> {
    let v = parse_frac(src)?;
    make_map(&v.num, &v.den)
}

/// A set: a point list `{0, 1/2, inf}`, the roots of a polynomial `z^2 - 2`,
/// or `roots(P) + {inf}` as printed by [`AlgSet`]'s `Display`.
pub fn parse_set(src: &str) -> Result<AlgSet> {
    let mut p = Parser::new(src);
    let set = if p.peek() == Some('{') {
        AlgSet::from_points(&p.point_list()?)
    } else if p.eat_word("roots") {
        p.expect('(')?;
        let v = p.expr()?;
        p.expect(')')?;
        let mut s = set_from_frac(&p, v)?;
        if p.eat('+') {
            s = s.union(&AlgSet::from_points(&p.point_list()?));
        }
        s
    } else {
        let v = p.expr()?;
        set_from_frac(&p, v)?
    };
    p.finish()?;
    Ok(set)
}

fn set_from_frac(p: &Parser<'_>, v: Frac) -> Result<AlgSet> {
    if !v.den.is_constant() {
        return p.err("a set is cut out by a polynomial, found a quotient");
    }
    if v.num.is_zero() {
        return p.err("the zero polynomial does not define a finite set");
    }
    AlgSet::new(&v.num, false)
}

/// A single point, `3/2`, `-7` or `inf`.
pub fn parse_point(src: &str) -> Result<ProjPoint> {
    let mut p = Parser::new(src);
    let x = p.point()?;
    p.finish()?;
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn poly_examples() {
        assert_eq!(parse_poly("z^2 - 4").unwrap(), p(&[-4, 0, 1]));
        let r = parse_poly_with_factor("(1/2)z + 1").unwrap();
        assert_eq!(r.poly, p(&[2, 1]));
        assert_eq!(r.factor, BigInt::from(2));
        assert_eq!(parse_poly("3z^2 - 2*z + 1").unwrap(), p(&[1, -2, 3]));
        assert_eq!(parse_poly("-(z+1)^2").unwrap(), p(&[-1, -2, -1]));
        assert_eq!(parse_poly("2(z - 1)(z + 1)").unwrap(), p(&[-2, 0, 2]));
        assert_eq!(parse_poly("-z^2").unwrap(), p(&[0, 0, -1]));
    }

    #[test]
    fn set_examples() {
        let s = parse_set("{0, 1, 4}").unwrap();
        assert_eq!(s.poly(), &p(&[0, 4, -5, 1]));
        let s = parse_set("{0, 1/2, inf}").unwrap();
        assert_eq!(s.poly(), &p(&[0, -1, 2]));
        assert!(s.has_infinity());
        assert_eq!(parse_set("z^2 - 2").unwrap().poly(), &p(&[-2, 0, 1]));
        assert_eq!(parse_set("{}").unwrap(), AlgSet::empty());
        let s = AlgSet::new(&p(&[1, -6, 1]), true).unwrap();
        assert_eq!(parse_set(&s.to_string()).unwrap(), s);
        assert_eq!(parse_set("{inf}").unwrap().to_string(), "{inf}");
    }

    #[test]
    fn map_examples() {
        let m = parse_map("(z^2 - 1)/(z - 1)").unwrap();
        assert_eq!(m, parse_map("z + 1").unwrap());
        let inv = parse_map("1/z").unwrap();
        assert_eq!(inv.den(), &p(&[0, 1]));
        assert!(matches!(parse_map("3/2"), Err(Error::ConstantMap)));
    }

    #[test]
    fn errors_carry_positions() {
        match parse_poly("z^2 + * 3") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_poly("1.5 z"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_poly("z / (z - z)"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse_poly("1/z"), Err(Error::Parse { .. })));
        assert!(matches!(parse_set("{z}"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("(z + 1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn display_round_trip() {
        for c in [
            vec![0, 0, 1],
            vec![1, -2, 3],
            vec![-5],
            vec![0, -1],
            vec![7, 0, 0, -1],
        ] {
            let q = p(&c);
            assert_eq!(parse_poly(&q.to_string()).unwrap(), q);
        }
    }
}
