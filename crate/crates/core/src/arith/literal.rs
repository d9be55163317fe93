//! Number literals: `p/q`, decimals, `sqrt(D)`, `cbrt(D)`, `pi`, `e` and
//! arithmetic combinations such as `(a+b*sqrt(D))/c`.
//!
//! Expressions over a single quadratic field stay exact. A transcendental or
//! cubic constant may be combined with rationals (the result is a Möbius image
//! of the constant) but not with another irrational.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::certified::CertifiedReal;
use super::mobius::MobiusMatrix;
use super::radicand::square_split;
use super::{surd_normalize, ExtReal};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Dec(BigRational),
    Ident(String),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    text: String,
    offset: usize,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token {
                tok,
                text: c.to_string(),
                offset: off,
            });
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            let tok = parse_number(&text).ok_or_else(|| Error::parse(off, &text, "malformed number"))?;
            out.push(Token { tok, text, offset: off });
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                i += 1;
            }
            let text: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push(Token {
                tok: Tok::Ident(text.to_ascii_lowercase()),
                text,
                offset: off,
            });
            continue;
        }
        return Err(Error::parse(off, c.to_string(), "unexpected character"));
    }
    Ok(out)
}

fn parse_number(text: &str) -> Option<Tok> {
    match text.split_once('.') {
        None => text.parse().ok().map(Tok::Int),
        Some((int, frac)) => {
            if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
                return None;
            }
            let digits: BigInt = format!("{int}{frac}").parse().ok()?;
            let scale = BigInt::from(10).pow(frac.len() as u32);
            Some(Tok::Dec(BigRational::new(digits, scale)))
        }
    }
}

/// `a + b·√d` with rational coordinates.
#[derive(Clone, Debug)]
struct Quad {
    a: BigRational,
    b: BigRational,
    d: Option<BigInt>,
}

#[derive(Clone, Debug)]
enum Val {
    Quad(Quad),
    Certified(CertifiedReal),
}

impl Quad {
    fn rational(a: BigRational) -> Self {
        Quad {
            a,
            b: BigRational::zero(),
            d: None,
        }
    }

    fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    fn radicand(&self, other: &Quad) -> std::result::Result<Option<BigInt>, &'static str> {
        let d1 = self.d.as_ref().filter(|_| !self.b.is_zero());
        let d2 = other.d.as_ref().filter(|_| !other.b.is_zero());
        match (d1, d2) {
            (Some(x), Some(y)) if x != y => Err("mixes different square roots"),
            (Some(x), _) | (None, Some(x)) => Ok(Some(x.clone())),
            (None, None) => Ok(None),
        }
    }
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    src_len: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, String) {
        match self.toks.get(self.pos) {
            Some(t) => (t.offset, t.text.clone()),
            None => (self.src_len, "<end>".into()),
        }
    }

    fn err(&self, reason: &str) -> Error {
        let (off, text) = self.here();
        Error::parse(off, text, reason)
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<Val> {
        let mut acc = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => Op::Add,
                Some(Tok::Minus) => Op::Sub,
                _ => return Ok(acc),
            };
            let at = self.here();
            self.pos += 1;
            let rhs = self.term()?;
            acc = combine(acc, op, rhs).map_err(|r| Error::parse(at.0, at.1, r))?;
        }
    }

    fn term(&mut self) -> Result<Val> {
        let mut acc = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Star) => Op::Mul,
                Some(Tok::Slash) => Op::Div,
                _ => return Ok(acc),
            };
            let at = self.here();
            self.pos += 1;
            let rhs = self.unary()?;
            acc = combine(acc, op, rhs).map_err(|r| Error::parse(at.0, at.1, r))?;
        }
    }

    fn unary(&mut self) -> Result<Val> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                let v = self.unary()?;
                Ok(combine(Val::Quad(Quad::rational(BigRational::zero())), Op::Sub, v)
                    .expect("negation is always defined"))
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn integer_arg(&mut self) -> Result<BigInt> {
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = if negative { -n.clone() } else { n.clone() };
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err("expected an integer argument")),
        }
    }

    fn atom(&mut self) -> Result<Val> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.err("unexpected end of literal"));
        };
        let (off, text) = self.here();
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(Val::Quad(Quad::rational(BigRational::from_integer(n)))),
            Tok::Dec(q) => Ok(Val::Quad(Quad::rational(q))),
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(v)
            }
            Tok::Ident(name) => match name.as_str() {
                "pi" => Ok(Val::Certified(CertifiedReal::pi())),
                "e" => Ok(Val::Certified(CertifiedReal::e())),
                "inf" | "infinity" => Err(Error::parse(off, text, "infinity is not a literal value")),
                "sqrt" | "cbrt" => {
                    self.expect(Tok::LParen, "`(`")?;
                    let arg_at = self.here();
                    let n = self.integer_arg()?;
                    self.expect(Tok::RParen, "`)`")?;
                    if name == "cbrt" {
                        let c = CertifiedReal::cbrt(n);
                        return Ok(match c.enclosure() {
                            Some(iv) if iv.is_point() => {
                                Val::Quad(Quad::rational(iv.lo().to_rational()))
                            }
                            _ => Val::Certified(c),
                        });
                    }
                    if n.is_negative() {
                        return Err(Error::parse(arg_at.0, arg_at.1, "square root of a negative number"));
                    }
                    let (s, k) = square_split(&n)
                        .map_err(|e| Error::parse(arg_at.0, arg_at.1, e.to_string()))?;
                    if k.is_one() || s.is_zero() {
                        Ok(Val::Quad(Quad::rational(BigRational::from_integer(s))))
                    } else {
                        Ok(Val::Quad(Quad {
                            a: BigRational::zero(),
                            b: BigRational::from_integer(s),
                            d: Some(k),
                        }))
                    }
                }
                _ => Err(Error::parse(off, text, "unknown name")),
            },
            _ => Err(Error::parse(off, text, "unexpected token")),
        }
    }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

fn combine(lhs: Val, op: Op, rhs: Val) -> std::result::Result<Val, &'static str> {
    match (lhs, rhs) {
        (Val::Quad(x), Val::Quad(y)) => quad_op(&x, op, &y).map(Val::Quad),
        (Val::Certified(c), Val::Quad(y)) => {
            let q = y.as_rational().ok_or("cannot combine two irrational constants")?;
            let (n, d) = (q.numer().clone(), q.denom().clone());
            let m = match op {
                Op::Add => MobiusMatrix::new(d.clone(), n, 0, d),
                Op::Sub => MobiusMatrix::new(d.clone(), -n, 0, d),
                Op::Mul => MobiusMatrix::new(n, 0, 0, d),
                Op::Div => {
                    if n.is_zero() {
                        return Err("division by zero");
                    }
                    MobiusMatrix::new(d, 0, 0, n)
                }
            };
            certified_image(&c, &m)
        }
        (Val::Quad(x), Val::Certified(c)) => {
            let q = x.as_rational().ok_or("cannot combine two irrational constants")?;
            let (n, d) = (q.numer().clone(), q.denom().clone());
            let m = match op {
                Op::Add => MobiusMatrix::new(d.clone(), n, 0, d),
                Op::Sub => MobiusMatrix::new(-d.clone(), n, 0, d),
                Op::Mul => MobiusMatrix::new(n, 0, 0, d),
                Op::Div => MobiusMatrix::new(0, n, d, 0),
            };
            certified_image(&c, &m)
        }
        (Val::Certified(_), Val::Certified(_)) => Err("cannot combine two irrational constants"),
    }
}

fn certified_image(c: &CertifiedReal, m: &MobiusMatrix) -> std::result::Result<Val, &'static str> {
    if m.det().is_zero() {
        // multiplication by zero
        return Ok(Val::Quad(Quad::rational(BigRational::zero())));
    }
    Ok(Val::Certified(c.mobius(m)))
}

fn quad_op(x: &Quad, op: Op, y: &Quad) -> std::result::Result<Quad, &'static str> {
    let d = x.radicand(y)?;
    let dd = d.clone().map(BigRational::from_integer).unwrap_or_else(BigRational::zero);
    let (a, b) = match op {
        Op::Add => (&x.a + &y.a, &x.b + &y.b),
        Op::Sub => (&x.a - &y.a, &x.b - &y.b),
        Op::Mul => (
            &x.a * &y.a + &x.b * &y.b * &dd,
            &x.a * &y.b + &x.b * &y.a,
        ),
        Op::Div => {
            let norm = &y.a * &y.a - &y.b * &y.b * &dd;
            if norm.is_zero() {
                return Err("division by zero");
            }
            // multiply by the conjugate (y.a - y.b√d)
            (
                (&x.a * &y.a - &x.b * &y.b * &dd) / &norm,
                (&x.b * &y.a - &x.a * &y.b) / &norm,
            )
        }
    };
    Ok(Quad { a, b, d })
}

fn into_ext(q: Quad) -> Result<ExtReal> {
    match (&q.d, q.b.is_zero()) {
        (Some(d), false) => {
            let l = q.a.denom().lcm(q.b.denom());
            let p = q.a.numer() * (&l / q.a.denom());
            let s = q.b.numer() * (&l / q.b.denom());
            surd_normalize(p, s, l, d.clone())
        }
        _ => Ok(ExtReal::Rational(q.a.into())),
    }
}

/// Parses a number literal. Whitespace is ignored; errors name the offending
/// token and its byte offset.
pub fn parse_literal(s: &str) -> Result<ExtReal> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::parse(0, "<end>", "empty literal"));
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        src_len: s.len(),
    };
    let v = p.expr()?;
    if p.pos != toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    match v {
        Val::Quad(q) => into_ext(q),
        Val::Certified(c) => Ok(ExtReal::Certified(c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;

    fn lit(s: &str) -> ExtReal {
        parse_literal(s).unwrap()
    }

    #[test]
    fn rationals_and_decimals() {
        assert_eq!(lit("9/7"), ExtReal::ratio(9, 7).unwrap());
        assert_eq!(lit(" 18 / 14 "), ExtReal::ratio(9, 7).unwrap());
        assert_eq!(lit("-1.25"), ExtReal::ratio(-5, 4).unwrap());
        assert_eq!(lit("0.5"), ExtReal::Rational(Rational::new(1, 2).unwrap()));
        assert_eq!(lit("42"), ExtReal::integer(42));
    }

    #[test]
    fn surds() {
        assert_eq!(lit("sqrt(2)"), surd_normalize(0, 1, 1, 2).unwrap());
        assert_eq!(lit("(1+sqrt(5))/2"), surd_normalize(1, 1, 2, 5).unwrap());
        assert_eq!(lit("(2 + 2*sqrt(8))/2"), surd_normalize(1, 2, 1, 2).unwrap());
        assert_eq!(lit("sqrt(4)"), ExtReal::integer(2));
        assert_eq!(lit("-1-sqrt(2)"), surd_normalize(-1, -1, 1, 2).unwrap());
        assert_eq!(lit("1/(sqrt(2)-1)"), surd_normalize(1, 1, 1, 2).unwrap());
        assert_eq!(lit("sqrt(8)-sqrt(2)"), surd_normalize(0, 1, 1, 2).unwrap());
    }

    #[test]
    fn certified_constants() {
        for s in ["pi", "e", "cbrt(2)", "cbrt(-3)", "pi/2", "1-pi", "3*cbrt(3)"] {
            assert!(matches!(lit(s), ExtReal::Certified(_)), "{s}");
        }
        assert_eq!(lit("cbrt(27)"), ExtReal::integer(3));
        let half_pi = lit("pi/2").to_f64();
        assert!((half_pi - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn printed_surds_reparse() {
        for s in ["sqrt(2)", "(1+sqrt(5))/2", "-1-sqrt(2)", "(3-2*sqrt(3))/7"] {
            assert_eq!(lit(s).to_string(), s);
        }
    }

    #[test]
    fn errors_name_the_token() {
        match parse_literal("1 + foo") {
            Err(Error::Parse { offset, token, .. }) => {
                assert_eq!(offset, 4);
                assert_eq!(token, "foo");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_literal("sqrt(2"), Err(Error::Parse { .. })));
        assert!(matches!(parse_literal("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_literal("sqrt(2)+sqrt(3)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_literal("pi+e"), Err(Error::Parse { .. })));
        assert!(matches!(parse_literal("1.2.3"), Err(Error::Parse { .. })));
        assert!(matches!(parse_literal(""), Err(Error::Parse { .. })));
        assert!(matches!(parse_literal("2 3"), Err(Error::Parse { .. })));
        assert!(matches!(parse_literal("sqrt(-2)"), Err(Error::Parse { .. })));
    }
}
